import json
import shutil
import subprocess

import pytest

from cantor_sections.cli import main

PERM = {"kind": "finite_permutation", "permutation": [1, 2, 0, 4, 3, 5]}
SHIFT = {"kind": "full_shift", "alphabet": ["0", "1"]}
COMPACT = {"kind": "compactified_translation"}


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.lstrip().startswith("{") else out)


def test_validate(capsys, write):
    code, rep = run(capsys, "validate", write("s.json", SHIFT), "--depth", "4")
    assert code == 0 and rep["verdict"]["status"] == "True"
    assert rep["format"] == "cantor-sections/1" and rep["command"] == "validate"
    assert "wall_time" in rep


def test_check_exit_codes(capsys, write):
    system = write("p.json", PERM)
    code, rep = run(capsys, "check", "quasi-section", system,
                    write("a.json", {"generator": "cells", "depth": 0, "cells": [0, 3, 5]}),
                    "--budget", "4")
    assert code == 0 and rep["verdict"]["label"] == "True"
    code, rep = run(capsys, "check", "basic", system,
                    write("b.json", {"generator": "cells", "depth": 0, "cells": [0, 1, 3, 5]}))
    assert code == 1 and rep["certificate"]["kind"] == "double_hit"


def test_check_complete_section_on_shift(capsys, write):
    system = write("s.json", SHIFT)
    code, rep = run(capsys, "check", "complete-section", system,
                    write("u.json", {"generator": "cells", "depth": 1, "cells": [0, 1, 2, 3]}),
                    "--budget", "4")
    assert code in (0, 1)
    assert rep["verdict"]["status"] in ("True", "False")


def test_decisive_and_unknown(capsys, write):
    system = write("c.json", COMPACT)
    code, rep = run(capsys, "check", "decisive", system,
                    write("b.json", {"generator": "points", "points": ["-inf", "0", "+inf"]}),
                    "--budget", "4")
    assert code == 1
    code, rep = run(capsys, "check", "decisive", system,
                    write("l.json", {"generator": "points", "points": ["-inf", "+inf"]}),
                    "--budget", "4")
    assert code == 2 and rep["verdict"]["label"] == "EmptyAtBudget"


def test_replay_round_trip(capsys, write, tmp_path):
    system = write("p.json", PERM)
    subset = write("a.json", {"generator": "cells", "depth": 0, "cells": [0, 3, 5]})
    report = str(tmp_path / "r.json")
    assert main(["-o", report, "check", "basic", system, subset]) == 0
    code, rep = run(capsys, "check", "basic", system, subset, "--replay", report)
    assert code == 0 and rep["replay"]["certificate_ok"] and rep["replay"]["identical_verdict"]
    doctored = json.loads(open(report).read())
    doctored["verdict"]["certificate"]["double_hit_horizon"] = 6
    doctored["verdict"]["certificate"]["quasi"]["covers"][0]["cells"] = [0]
    code, rep = run(capsys, "check", "basic", system, subset,
                    "--replay", write("bad.json", doctored))
    assert code == 1 and rep["replay"]["certificate_ok"] is False


def test_deterministic_output(capsys, write):
    system = write("s.json", SHIFT)
    _, a = run(capsys, "extremal", system, "--depth", "1", "--horizon", "3")
    _, b = run(capsys, "extremal", system, "--depth", "1", "--horizon", "3")
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b and a["certificate"]["labels"] == ["000", "100", "101", "111"]


def test_extremal_theorems_with_order(capsys, write):
    system = write("p.json", PERM)
    order = write("o.json", {"type": "cell_order", "levels": [[5, 4, 3, 2, 1, 0]]})
    code, rep = run(capsys, "extremal", system, "--order", order, "--depth", "0",
                    "--horizon", "6", "--theorems")
    assert code == 0 and rep["certificate"]["cells"] == [2, 4, 5]
    assert rep["theorems"]["extremal_basic"]["label"] == "True"


def test_recurrence(capsys, write):
    code, rep = run(capsys, "recurrence", write("c.json", COMPACT), "--depth", "3")
    assert code == 0 and sorted(rep["mf_outer"]["labels"]) == ["L", "R"]
    assert rep["verdict"]["label"] == "True-at-budget"


def test_oracle(capsys):
    code, rep = run(capsys, "oracle", "--n", "6", "--perm", "1", "2", "0", "4", "3", "5",
                    "--subset", "0", "3", "5")
    assert code == 0 and rep["certificate"]["flags"]["minimal_basic_set"]
    code, text = run(capsys, "oracle", "--n", "2", "--perm", "1", "0", "--sweep", "--csv")
    assert text.splitlines()[0].startswith("perm,subset,complete_section")
    code, rep = run(capsys, "oracle", "--n", "3", "--perm", "0", "0", "1")
    assert code == 3 and rep["error"]["path"] == "/perm"


@pytest.mark.parametrize("doc,path", [
    ({"kind": "sft", "alphabet": ["0", "1"], "forbidden": [2]}, "/forbidden/0"),
    ({"kind": "teleport"}, "/kind"),
    ("{not json", "/"),
])
def test_input_errors(capsys, write, doc, path):
    code, rep = run(capsys, "validate", write("bad.json", doc))
    assert code == 3 and rep["error"]["path"] == path


def test_bad_set_paths(capsys, write):
    system = write("p.json", PERM)
    code, rep = run(capsys, "check", "basic", system,
                    write("a.json", {"generator": "cells", "depth": 0, "cells": [0, 9]}))
    assert code == 3 and rep["error"]["path"] == "/cells/1"
    code, rep = run(capsys, "check", "basic", system,
                    write("a.json", {"generator": "union", "parts": [
                        {"generator": "points", "points": ["nowhere"]}]}))
    assert code == 3 and rep["error"]["path"] == "/parts/0/points/0"


def test_budget_overflow_is_input_error(capsys, write):
    odometer = write("o.json", {"kind": "odometer", "bases": [2]})
    code, rep = run(capsys, "validate", odometer, "--depth", "30")
    assert code == 3 and "cells" in rep["error"]["message"]


@pytest.mark.skipif(shutil.which("cantor-sections") is None, reason="script not installed")
def test_console_script(write):
    proc = subprocess.run(["cantor-sections", "validate", write("p.json", PERM)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["verdict"]["status"] == "True"

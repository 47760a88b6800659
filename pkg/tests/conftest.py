import pytest

from cantor_sections import builders


@pytest.fixture(scope="session")
def perm635():
    return builders.finite_permutation([1, 2, 0, 4, 3, 5])


@pytest.fixture(scope="session")
def shift2():
    return builders.full_shift()


@pytest.fixture(scope="session")
def golden():
    return builders.sft(["0", "1"], ["11"])


@pytest.fixture(scope="session")
def odo2():
    return builders.odometer([2])


@pytest.fixture(scope="session")
def compact():
    return builders.compactified_translation()


@pytest.fixture(scope="session")
def hetero():
    return builders.heteroclinic_cycle()


@pytest.fixture(scope="session")
def prod_odo():
    return builders.product_cantor_identity(builders.SystemSpec("odometer", bases=[2]))


def all_systems():
    S = builders.SystemSpec
    return {
        "finite_permutation": builders.finite_permutation([1, 2, 0, 4, 3, 5]),
        "full_shift": builders.full_shift(),
        "sft": builders.sft(["0", "1"], ["11"]),
        "odometer": builders.odometer([2, 3]),
        "compactified_translation": builders.compactified_translation(),
        "heteroclinic_cycle": builders.heteroclinic_cycle(),
        "product_cantor_identity": builders.product_cantor_identity(S("odometer", bases=[2])),
        "disjoint_union": builders.disjoint_union(S("finite_permutation", permutation=[1, 0]),
                                                  S("compactified_translation")),
    }


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])

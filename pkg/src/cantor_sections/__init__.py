"""Quasi-sections, basic sets and extremal basic sets on clopen refinement towers."""
from .basicset import is_basic_set, strip_interior, transversal_from_minimal_sets
from .builders import (SpecError, SystemSpec, build, compactified_translation,
                       disjoint_union, finite_permutation, full_shift, heteroclinic_cycle,
                       odometer, product_cantor_identity, sft)
from .certificates import replay
from .closedset import IN, OUT, PARTIAL, ClosedTower
from .extremal import (CellOrder, extremal_outer, extremal_theorem_checks, extremal_tower,
                       inf_point)
from .recurrence import (MinimalSetRep, is_densely_aperiodic, limit_set_outer, mf_outer,
                         minimal_set_reps, nonwandering_outer)
from .sections import (cross_check_characterizations, interior_status, is_complete_section,
                       is_quasi_section, minimize_quasi_section)
from .tower import (BudgetError, ClopenSet, PointApprox, PreconditionError, Status,
                    TowerSystem, Verdict, image_cells, overlap_relation, validate_tower)

__version__ = "0.1.0"

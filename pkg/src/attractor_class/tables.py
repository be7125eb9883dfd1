"""Published feasible sets, kept as the literal element lists."""
from __future__ import annotations

from .feasible import FeasibleSet, feasible_from_elements

__all__ = ["TABLE_ELEMENTS", "SIMPLEST_CCW", "SIMPLEST_CW", "table_feasible_set"]

TABLE_ELEMENTS: dict[str, tuple[str, ...]] = {
    "table1": (
        "(1,2)", "(1,5/3)",
        "(1,1,0)", "(1,1,2)", "(1,1,1/3)", "(1,1,2/3)",
        "(1,1,1,0)", "(1,1,1,1)", "(1,1,1,1/3)", "(1,1,1,2/3)",
    ),
    "table2": (
        "(1,2)", "(1,2/3)",
        "(1,1,0)", "(1,1,1)", "(1,1,1/3)", "(1,1,2/3)",
        "(2,1)", "(2,2/3)",
        "(3,2)", "(3,5/3)",
        "(3,1,0)", "(3,1,1)", "(3,1,1/3)", "(3,1,2/3)",
    ),
    "table3": (
        "(1,5/3)", "(1,4)",
        "(1,1,0)", "(1,1,1/3)", "(1,1,2/3)", "(1,1,1)",
        "(1,2,0)", "(1,2,1/3)", "(1,2,2/3)", "(1,2,1)",
        "(1,3,0)", "(1,3,1/3)", "(1,3,2/3)", "(1,3,1)",
        "(2,2/3)", "(2,2)",
        "(2,1,0)", "(2,1,1/3)", "(2,1,8/3)", "(2,1,3)",
        "(2,1,1,0)", "(2,1,1,1/3)", "(2,1,1,2/3)", "(2,1,1,1)",
        "(2,1,2,0)", "(2,1,2,1/3)", "(2,1,2,2/3)", "(2,1,2,1)",
        "(3,2/3)", "(3,1)",
        "(4,5/3)", "(4,2)",
        "(4,1,0)", "(4,1,4/3)", "(4,1,5/3)", "(4,1,3)",
        "(4,1,1,0)", "(4,1,1,1/3)", "(4,1,1,2/3)", "(4,1,1,1)",
        "(4,1,2,0)", "(4,1,2,1/3)", "(4,1,2,2/3)", "(4,1,2,1)",
    ),
}

# The simplest feasible set, and the set obtained from the same flow after
# reversing the orientation of the small circle.
SIMPLEST_CCW: tuple[str, ...] = ("(1,5/3)", "(1,2)", "(1,1,0)", "(1,1,1/3)", "(1,1,2/3)", "(1,1,1)")
SIMPLEST_CW: tuple[str, ...] = ("(1,2/3)", "(1,2)", "(1,1,0)", "(1,1,1/3)", "(1,1,2/3)", "(1,1,1)")

TABLE_ELEMENTS["simplest"] = SIMPLEST_CCW
TABLE_ELEMENTS["simplest_cw"] = SIMPLEST_CW


def table_feasible_set(name: str) -> FeasibleSet:
    """Validate and return one of the stored sets; raises if it is not feasible."""
    return feasible_from_elements(TABLE_ELEMENTS[name])

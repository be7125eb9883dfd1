"""Classification and synthesis of planar flows with a globally attracting singular point."""
from .feasible import (
    CompleteBase,
    Element,
    EndKind,
    FeasibleError,
    FeasibleSet,
    Parity,
    Third,
    classify_ends,
    compare_lex,
    feasible_from_elements,
    parity_map,
    validate_complete,
    validate_feasible,
)
from .skeleton import (
    Configuration,
    Mark,
    MarkClass,
    Orientation,
    canonical_feasible_set,
    decide_equivalence,
    nesting_tree,
    parse_configuration,
)
from .synthesis import (
    build_block_layout,
    eval_strip_field,
    map_to_plane,
    render_portrait,
    synthesize_configuration,
)

__all__ = [
    "CompleteBase", "Element", "EndKind", "FeasibleError", "FeasibleSet", "Parity", "Third",
    "classify_ends", "compare_lex", "feasible_from_elements", "parity_map",
    "validate_complete", "validate_feasible",
    "Configuration", "Mark", "MarkClass", "Orientation", "canonical_feasible_set",
    "decide_equivalence", "nesting_tree", "parse_configuration",
    "build_block_layout", "eval_strip_field", "map_to_plane", "render_portrait",
    "synthesize_configuration",
]
__version__ = "0.1.0"

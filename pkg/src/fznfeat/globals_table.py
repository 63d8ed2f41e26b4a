"""Classification table for global constraints.

Global constraints are grouped into 27 equivalence classes of related
decompositions (for instance every ``bool_lin_*`` builtin belongs to the
``bool_lin`` class).  The table below is configuration, not code: it maps
normalized constraint names to class names, and extending it requires no
code changes.  Names absent from the table are not counted as global
constraints.

Lookup normalization strips the common solver library prefixes ``gecode_``
and ``fzn_`` and a trailing ``_reif`` (a reified global still counts as an
occurrence of its class).
"""

from __future__ import annotations

#: The 27 class names, in catalog order.
GLOBAL_CLASSES: tuple[str, ...] = (
    "alldifferent",
    "all_equal",
    "among",
    "bin_packing",
    "bool_lin",
    "circuit",
    "count",
    "cumulative",
    "decreasing",
    "disjoint",
    "distribute",
    "global_cardinality",
    "increasing",
    "int_set_channel",
    "inverse",
    "lex_less",
    "lex_lesseq",
    "link_set_to_booleans",
    "maximum",
    "member",
    "minimum",
    "nvalue",
    "precede",
    "range",
    "regular",
    "sort",
    "table",
)

_MEMBERS: dict[str, tuple[str, ...]] = {
    "alldifferent": (
        "alldifferent",
        "all_different",
        "all_different_int",
        "all_different_bool",
        "alldifferent_except_0",
        "distinct",
    ),
    "all_equal": ("all_equal", "all_equal_int", "all_equal_bool"),
    "among": ("among", "at_least_int", "at_most_int", "exactly_int"),
    "bin_packing": ("bin_packing", "bin_packing_capa", "bin_packing_load"),
    "bool_lin": (
        "bool_lin_eq",
        "bool_lin_ne",
        "bool_lin_le",
        "bool_lin_lt",
        "bool_lin_ge",
        "bool_lin_gt",
    ),
    "circuit": ("circuit", "circuit_offset", "subcircuit", "subcircuit_offset"),
    "count": (
        "count",
        "count_eq",
        "count_neq",
        "count_leq",
        "count_lt",
        "count_geq",
        "count_gt",
        "count_eq_const",
    ),
    "cumulative": ("cumulative", "cumulatives"),
    "decreasing": ("decreasing", "decreasing_bool", "decreasing_int"),
    "disjoint": ("disjoint",),
    "distribute": ("distribute",),
    "global_cardinality": (
        "global_cardinality",
        "global_cardinality_closed",
        "global_cardinality_low_up",
        "global_cardinality_low_up_closed",
    ),
    "increasing": ("increasing", "increasing_bool", "increasing_int"),
    "int_set_channel": ("int_set_channel",),
    "inverse": ("inverse", "inverse_offsets", "inverse_set"),
    "lex_less": ("lex_less", "lex_less_bool", "lex_less_int"),
    "lex_lesseq": ("lex_lesseq", "lex_lesseq_bool", "lex_lesseq_int"),
    "link_set_to_booleans": ("link_set_to_booleans",),
    "maximum": ("maximum", "maximum_int", "maximum_float"),
    "member": ("member", "member_bool", "member_int"),
    "minimum": ("minimum", "minimum_int", "minimum_float"),
    "nvalue": ("nvalue",),
    "precede": ("precede", "value_precede", "value_precede_int", "value_precede_chain_int"),
    "range": ("range",),
    "regular": ("regular",),
    "sort": ("sort",),
    "table": ("table_bool", "table_int"),
}

#: Normalized constraint name -> class name.
GLOBAL_CLASS_OF: dict[str, str] = {
    member: cls for cls, members in _MEMBERS.items() for member in members
}

_STRIP_PREFIXES = ("gecode_", "fzn_")


def normalize_name(name: str) -> str:
    name = name.lower()
    for prefix in _STRIP_PREFIXES:
        if name.startswith(prefix):
            name = name[len(prefix):]
            break
    if name.endswith("_reif"):
        name = name[: -len("_reif")]
    return name


def classify_global(name: str) -> str | None:
    """Class of a global constraint, or None if the name is not a global."""
    return GLOBAL_CLASS_OF.get(normalize_name(name))

from .instance import (
    GlobalAllDifferent,
    GlobalCumulative,
    GlobalElement,
    GlobalLinear,
    PredicateApplication,
    RelationReference,
    XcspConstraint,
    XcspDomain,
    XcspInstance,
    XcspPredicate,
    XcspRelation,
    XcspVariable,
    parse_xcsp,
    parse_xcsp_file,
)
from .translate import translate_to_minizinc
from .verify import enumerate_translated, enumerate_xcsp, solution_sets_match

__all__ = [
    "GlobalAllDifferent",
    "GlobalCumulative",
    "GlobalElement",
    "GlobalLinear",
    "PredicateApplication",
    "RelationReference",
    "XcspConstraint",
    "XcspDomain",
    "XcspInstance",
    "XcspPredicate",
    "XcspRelation",
    "XcspVariable",
    "enumerate_translated",
    "enumerate_xcsp",
    "parse_xcsp",
    "parse_xcsp_file",
    "solution_sets_match",
    "translate_to_minizinc",
]

"""Feature extraction and portfolio simulation for FlatZinc models."""

from .catalog import CATALOG, FEATURE_NAMES, N_FEATURES, N_STATIC, category_slices
from .errors import (
    AliasCycleError,
    DatasetError,
    FlatZincError,
    FlatZincSyntaxError,
    FznFeatError,
    ModelError,
    ProbeError,
    SolverNotFoundError,
    UnknownDialectError,
    XcspError,
    XcspUnsupportedError,
)
from .features import FeatureVector, assemble_vector, static_features
from .fzn import Model, model_counts, parse_flatzinc, parse_flatzinc_file, resolve_aliases
from .probe import DynamicFeatures, SolverAdapter, dynamic_features
from .stats import SENTINEL, StatSummary, stat_summary

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "FEATURE_NAMES",
    "N_FEATURES",
    "N_STATIC",
    "SENTINEL",
    "AliasCycleError",
    "DatasetError",
    "DynamicFeatures",
    "FeatureVector",
    "FlatZincError",
    "FlatZincSyntaxError",
    "FznFeatError",
    "Model",
    "ModelError",
    "ProbeError",
    "SolverAdapter",
    "SolverNotFoundError",
    "StatSummary",
    "UnknownDialectError",
    "XcspError",
    "XcspUnsupportedError",
    "assemble_vector",
    "category_slices",
    "dynamic_features",
    "model_counts",
    "parse_flatzinc",
    "parse_flatzinc_file",
    "resolve_aliases",
    "stat_summary",
    "static_features",
]

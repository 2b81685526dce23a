"""Weighted n-gram distances for symbolic sequences and time series.

The toolkit covers the full classification loop: SAX symbolization of
numeric series, a family of gram-overlap string distances, a dynamic time
warping baseline, a bee-colony optimizer for tuning the per-order weights,
and 1-NN evaluation utilities. The `sigmagram` console command drives the
batch experiment pipeline.
"""

from .bee_colony import AbcConfig, AbcResult, CycleRecord, run as optimize
from .dtw import dtw_distance
from .knn import (
    LabeledDataset,
    MismatchTensor,
    build_mismatch_tensor,
    cached_gram_distance,
    classify_test,
    loocv_error,
    make_fitness,
)
from .sax import (
    BreakpointTable,
    PAAVector,
    make_breakpoints,
    mindist,
    paa,
    paa_distance,
    symbolize,
    z_normalize,
)
from .sequences import (
    Alphabet,
    LambdaVector,
    NGramProfile,
    SymbolicSequence,
    abc_sg_distance,
    common_gram_mass,
    edit_distance,
    eed,
    extract_ngrams,
    g_boundary,
    mismatch_term,
)

__version__ = "0.1.0"

__all__ = [
    "AbcConfig",
    "AbcResult",
    "Alphabet",
    "BreakpointTable",
    "CycleRecord",
    "LabeledDataset",
    "LambdaVector",
    "MismatchTensor",
    "NGramProfile",
    "PAAVector",
    "SymbolicSequence",
    "abc_sg_distance",
    "build_mismatch_tensor",
    "cached_gram_distance",
    "classify_test",
    "common_gram_mass",
    "dtw_distance",
    "edit_distance",
    "eed",
    "extract_ngrams",
    "g_boundary",
    "loocv_error",
    "make_breakpoints",
    "make_fitness",
    "mindist",
    "mismatch_term",
    "optimize",
    "paa",
    "paa_distance",
    "symbolize",
    "z_normalize",
]

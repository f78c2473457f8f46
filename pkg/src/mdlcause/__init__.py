"""Causal direction between two variables from MDL-binned complexity estimates.

Typical use::

    from mdlcause import normalize, infer_pair
    analysis = infer_pair(normalize(x, "x"), normalize(y, "y"))
    analysis.verdict.direction
"""

from .binning import (
    Binning,
    NormalizedSeries,
    make_binning,
    make_uniform_binning,
    shannon_code_length,
)
from .complexity import ComplexityEstimate, CostBreakdown, complexity, estimate_k
from .conditional import BalanceTrace, ConditionalEstimate, balance_counts, conditional_k
from .data import (
    DatasetRegistryEntry,
    PairDataset,
    fetch_dataset,
    generate_toy,
    load_registry,
    normalize,
    ordinal_encode,
)
from .errors import (
    ContractViolation,
    DegenerateColumnError,
    EncodingError,
    FetchError,
    InvalidParameterError,
    MDLCauseError,
    PairedDataError,
    ParseError,
)
from .evaluation import SweepResult, precision, run_benchmark, sweep
from .greedy import greedy_refine
from .inference import (
    INCONCLUSIVE,
    X_CAUSES_Y,
    Y_CAUSES_X,
    CausalVerdict,
    InferenceConfig,
    PairAnalysis,
    infer_direction,
    infer_pair,
)

__version__ = "0.1.0"

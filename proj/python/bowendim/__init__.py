"""pressure, Bowen roots, box dimensions and preimage multiplicities
for hyperbolic skew products with overlapping foldings."""

from ._core import (
    BudgetExceeded,
    NumericalError,
    SkewSystem,
    ValidationError,
    __version__,
    bowen_root,
    box_dimension,
    make_example1,
    make_example2,
    make_ifs,
    pressure,
    sample_multiplicities,
    similarity_dimension,
    slice_pieces,
    verify_claim,
)

__all__ = [
    "BudgetExceeded",
    "NumericalError",
    "SkewSystem",
    "ValidationError",
    "__version__",
    "bowen_root",
    "box_dimension",
    "make_example1",
    "make_example2",
    "make_ifs",
    "pressure",
    "sample_multiplicities",
    "similarity_dimension",
    "slice_pieces",
    "verify_claim",
]

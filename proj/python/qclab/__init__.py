"""Search for quasi-convexity violations of f(m) = |m|^4 - gamma |m|^2 det m.

Fields are numpy arrays of shape (2, n+1, n+1) indexed [component, i, j],
with i along x1. Matrices may be given as Matrix2 or any 2x2 array.
"""

from ._qclab import (
    ConfigError,
    DimensionError,
    Matrix2,
    __version__,
    df_dxi,
    eval_f,
    eval_J,
    grad_J,
    make_field,
    p1_exact_integral,
    rank_one_threshold,
    run_search,
    search_rank_one_violation,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "Matrix2",
    "__version__",
    "df_dxi",
    "eval_f",
    "eval_J",
    "grad_J",
    "make_field",
    "p1_exact_integral",
    "rank_one_threshold",
    "run_search",
    "search_rank_one_violation",
]

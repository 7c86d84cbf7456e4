"""Exact computations around degenerate Stirling numbers and two families of
Bernoulli sums, with mechanical checks of the identities linking them."""

from .distributions import (
    BernoulliSumSpec,
    Pmf,
    binom_moment,
    gamma_ratio,
    mean,
    pgf,
    pmf,
    variance,
    y_spec,
    z_spec,
)
from .errors import (
    AliasingError,
    DimorphicError,
    DomainError,
    GridParseError,
    ImpossibleOutcomeError,
    OrderMismatchError,
    PoleError,
)
from .exact import (
    DensePoly,
    Rational,
    TruncatedSeries,
    as_rational,
    degenerate_exp_series,
    degenerate_falling_factorial,
    format_rational,
    poly_eval,
    poly_mul,
    series_mul,
)
from .stirling import (
    StirlingTable,
    basis_conversion_oracle,
    degenerate_stirling2,
    eq5_series_oracle,
    falling_factorial_expand,
    stirling1,
    stirling2,
    stirling_table,
    theorem3_lhs,
)
from .verify import (
    VerificationReport,
    characteristic_function,
    verify_theorem2,
    verify_theorem3,
    verify_theorem4_exact,
    verify_theorem4_quadrature,
)

__version__ = "0.1.0"

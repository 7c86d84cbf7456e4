"""Pointwise verification of the dimorphic identity and its Stirling-sum
consequences.

Each ``verify_*`` function evaluates both sides of one identity at a single
parameter point and returns a :class:`VerificationReport`.  Exact identities
compare Fractions (or polynomials with Fraction coefficients) structurally;
the quadrature check compares floats against a fixed tolerance.
"""

from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .distributions import (
    Pmf,
    binom_moment,
    gamma_ratio,
    pgf,
    pmf,
    y_expectation_of_power,
    y_spec,
    z_spec,
)
from .errors import AliasingError, DimorphicError, DomainError, PoleError
from .exact import DensePoly, RationalLike, as_rational, format_rational, poly_product
from .stirling import (
    degenerate_stirling2,
    eq5_series_oracle,
    stirling1,
    theorem3_lhs,
)

QUADRATURE_TOL = 1e-12

T2 = "T2"
T3 = "T3"
T4_EXACT = "T4-exact"
T4_QUAD = "T4-quadrature"
GF_ORACLE = "GF-oracle"
CROSS_S1 = "cross-S1"

# 16 points inside alpha > 0, 0 < lambda < 1 and 4 outside it.  None of them
# makes alpha + lambda*j vanish or alpha/lambda a non-positive integer.
DEFAULT_GRID = tuple(
    (Fraction(a), Fraction(b))
    for a, b in [
        ("1/3", "1/4"), ("1/3", "1/2"), ("1/3", "3/4"), ("1/3", "9/10"),
        ("1", "1/4"), ("1", "1/2"), ("1", "3/4"), ("1", "9/10"),
        ("2", "1/4"), ("2", "1/2"), ("2", "3/4"), ("2", "9/10"),
        ("7/3", "1/3"), ("2/3", "1/4"), ("5/2", "2/7"), ("1/10", "1/7"),
        ("2", "3/2"), ("3", "5/4"), ("1/2", "-1/3"), ("-2/5", "1/3"),
    ]
)


def in_paper_range(alpha=None, lam=None) -> bool:
    if alpha is not None and not alpha > 0:
        return False
    if lam is not None and not 0 < lam < 1:
        return False
    return True


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    params: dict
    lhs: object
    rhs: object
    passed: bool
    residual: object
    in_paper_range: bool
    detail: dict = field(default_factory=dict)
    error: str | None = None

    def to_dict(self) -> dict:
        out = {
            "identity": self.identity,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "residual": _jsonable(self.residual),
            "passed": self.passed,
            "in_paper_range": self.in_paper_range,
        }
        if self.detail:
            out["detail"] = {k: _jsonable(v) for k, v in self.detail.items()}
        if self.error is not None:
            out["error"] = self.error
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, DensePoly):
        return [format_rational(c) for c in value.coeffs]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _exact_report(identity, params, lhs, rhs, paper_range, **detail):
    residual = lhs - rhs
    return VerificationReport(
        identity=identity,
        params=params,
        lhs=lhs,
        rhs=rhs,
        passed=lhs == rhs,
        residual=residual,
        in_paper_range=paper_range,
        detail=detail,
    )


def verify_theorem2(n: int, alpha: RationalLike, lam: RationalLike) -> VerificationReport:
    """Check ``E[(1+alpha/lam)^Y] E[z^Z] == E[(1+alpha z/lam)^Y]`` as polynomials in z.

    Both expectations over ``Y_n`` are taken against its exact PMF, so the
    product formulas for them are not assumed.
    """
    alpha, lam = as_rational(alpha), as_rational(lam)
    if n < 1:
        raise DomainError("n must be >= 1")
    if lam == 0:
        raise PoleError("lambda = 0")
    z = z_spec(n, alpha, lam, relaxed=True)
    ratio = alpha / lam
    scalar = y_expectation_of_power(n, 1 + ratio)
    lhs = pgf(z).scale(scalar)
    rhs = pgf(y_spec(n)).compose_linear(1, ratio)
    diff = lhs - rhs
    residual = max((abs(c) for c in diff.coeffs), default=Fraction(0))
    return VerificationReport(
        identity=T2,
        params={"n": n, "alpha": alpha, "lambda": lam},
        lhs=lhs,
        rhs=rhs,
        passed=diff.is_zero(),
        residual=residual,
        in_paper_range=z.in_paper_range,
        detail={"y_factor": scalar},
    )


def verify_theorem3(n: int, l: int, lam: RationalLike) -> VerificationReport:
    """Stirling sum against ``(-1)^(n-l) lam^(n-l) n! E[C(Y_n, l)]``."""
    lam = as_rational(lam)
    if not 0 <= l <= n:
        raise DomainError(f"need 0 <= l <= n, got n={n}, l={l}")
    lhs = theorem3_lhs(n, l, lam)
    rhs = (-1) ** (n - l) * lam ** (n - l) * factorial(n) * binom_moment(n, l)
    return _exact_report(
        T3, {"n": n, "l": l, "lambda": lam}, lhs, rhs, in_paper_range(lam=lam)
    )


def theorem4_rhs(n: int, l: int, alpha: RationalLike, lam: RationalLike) -> Fraction:
    """``(-1)^(n-l) alpha^(l+1) / lam^(n+1) * Gamma(x)/Gamma(n+x+1) * stirling_sum``."""
    alpha, lam = as_rational(alpha), as_rational(lam)
    if not 0 <= l <= n:
        raise DomainError(f"need 0 <= l <= n, got n={n}, l={l}")
    ratio = gamma_ratio(alpha, lam, n)
    sign = -1 if (n - l) % 2 else 1
    return sign * alpha ** (l + 1) / lam ** (n + 1) / ratio * theorem3_lhs(n, l, lam)


def verify_theorem4_exact(
    n: int, l: int, alpha: RationalLike, lam: RationalLike
) -> VerificationReport:
    """The ``l``-th Fourier coefficient of ``E[e^{i theta Z}]`` is ``P{Z = l}``;
    compare that point mass with the Gamma/Stirling closed form."""
    alpha, lam = as_rational(alpha), as_rational(lam)
    if not 0 <= l <= n:
        raise DomainError(f"need 0 <= l <= n, got n={n}, l={l}")
    z = z_spec(n, alpha, lam, relaxed=True)
    lhs = pmf(z)[l]
    rhs = theorem4_rhs(n, l, alpha, lam)
    return _exact_report(
        T4_EXACT,
        {"n": n, "l": l, "alpha": alpha, "lambda": lam},
        lhs,
        rhs,
        z.in_paper_range,
    )


def characteristic_function(p: Pmf, theta: float) -> complex:
    """``sum_k p_k e^{i k theta}`` in double precision."""
    if not math.isfinite(theta):
        raise DomainError("theta must be finite")
    probs = [float(x) for x in p]
    re = math.fsum(q * math.cos(k * theta) for k, q in enumerate(probs))
    im = math.fsum(q * math.sin(k * theta) for k, q in enumerate(probs))
    return complex(re, im)


def fourier_coefficient(p: Pmf, l: int, nodes: int) -> complex:
    """Equally spaced ``nodes``-point rule for ``(1/2pi) int phi(theta) e^{-i l theta}``
    over ``[-pi, pi)``.

    Exact up to rounding when ``nodes`` exceeds the trigonometric degree.
    """
    total = 0j
    for t in range(nodes):
        theta = -math.pi + 2 * math.pi * t / nodes
        total += characteristic_function(p, theta) * cmath.exp(-1j * l * theta)
    return total / nodes


def verify_theorem4_quadrature(
    n: int, l: int, alpha: RationalLike, lam: RationalLike, M: int
) -> VerificationReport:
    alpha, lam = as_rational(alpha), as_rational(lam)
    if not 0 <= l <= n:
        raise DomainError(f"need 0 <= l <= n, got n={n}, l={l}")
    if M <= n:
        raise AliasingError(
            f"M={M} nodes cannot resolve a trigonometric polynomial of degree {n}; need M >= {n + 1}"
        )
    z = z_spec(n, alpha, lam, relaxed=True)
    p = pmf(z)
    value = fourier_coefficient(p, l, M)
    exact = float(p[l])
    re_err = abs(value.real - exact)
    im_err = abs(value.imag)
    return VerificationReport(
        identity=T4_QUAD,
        params={"n": n, "l": l, "alpha": alpha, "lambda": lam, "M": M},
        lhs=value.real,
        rhs=exact,
        passed=re_err <= QUADRATURE_TOL and im_err <= QUADRATURE_TOL,
        residual=max(re_err, im_err),
        in_paper_range=z.in_paper_range,
        detail={"imag": value.imag, "tolerance": QUADRATURE_TOL},
    )


def verify_gf_oracle(n: int, k: int, lam: RationalLike) -> VerificationReport:
    """Recurrence value of ``S_{2,lam}(n, k)`` against the generating-function oracle."""
    lam = as_rational(lam)
    lhs = degenerate_stirling2(n, k, lam)
    rhs = eq5_series_oracle(k, n, lam)[n]
    return _exact_report(GF_ORACLE, {"n": n, "k": k, "lambda": lam}, lhs, rhs, True)


def verify_cross_s1(n: int, l: int) -> VerificationReport:
    """``E[C(Y_n, l)] == |S_1(n+1, l+1)| / n!``."""
    lhs = binom_moment(n, l)
    rhs = abs(stirling1(n + 1, l + 1)) / Fraction(factorial(n))
    return _exact_report(CROSS_S1, {"n": n, "l": l}, lhs, rhs, True)


def theorem2_product_forms(n: int, alpha: RationalLike, lam: RationalLike):
    """The closed product forms of both sides, for comparing with the
    expectation route above: ``(prod (1 + x/j)) * pgf_Z`` and ``prod (1 + x z/j)``
    with ``x = alpha/lam``."""
    alpha, lam = as_rational(alpha), as_rational(lam)
    x = alpha / lam
    scalar = Fraction(1)
    for j in range(1, n + 1):
        scalar *= 1 + x / j
    lhs = pgf(z_spec(n, alpha, lam, relaxed=True)).scale(scalar)
    rhs = poly_product(DensePoly.linear(1, x / j) for j in range(1, n + 1))
    return lhs, rhs


VERIFIERS = {
    T2: verify_theorem2,
    T3: verify_theorem3,
    T4_EXACT: verify_theorem4_exact,
    T4_QUAD: verify_theorem4_quadrature,
    GF_ORACLE: verify_gf_oracle,
    CROSS_S1: verify_cross_s1,
}


def run_point(identity: str, params: dict) -> VerificationReport:
    """Run one verification, turning package errors into a failed report."""
    func = VERIFIERS[identity]
    kwargs = dict(params)
    if "lambda" in kwargs:
        kwargs["lam"] = kwargs.pop("lambda")
    try:
        return func(**kwargs)
    except DimorphicError as exc:
        return VerificationReport(
            identity=identity,
            params=params,
            lhs=None,
            rhs=None,
            passed=False,
            residual=None,
            in_paper_range=in_paper_range(params.get("alpha"), params.get("lambda")),
            error=f"{type(exc).__name__}: {exc}",
        )


def _run_star(args):
    return run_point(*args)


def sweep(identity: str, points, workers: int | None = None) -> list:
    """Verify ``identity`` at every parameter dict in ``points``.

    Never stops at the first failure.  With ``workers > 1`` the points are
    spread over worker processes; results come back in input order.
    """
    jobs = [(identity, dict(p)) for p in points]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_run_star(job) for job in jobs]


def theorem3_points(max_n: int, lambdas) -> list:
    return [
        {"n": n, "l": l, "lambda": as_rational(lam)}
        for lam in lambdas
        for n in range(max_n + 1)
        for l in range(n + 1)
    ]


def theorem2_points(max_n: int, grid=DEFAULT_GRID) -> list:
    return [
        {"n": n, "alpha": a, "lambda": b} for a, b in grid for n in range(1, max_n + 1)
    ]


def theorem4_points(max_n: int, grid=DEFAULT_GRID) -> list:
    return [
        {"n": n, "l": l, "alpha": a, "lambda": b}
        for a, b in grid
        for n in range(1, max_n + 1)
        for l in range(n + 1)
    ]

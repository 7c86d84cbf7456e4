"""The two Bernoulli-sum families.

``Y_n`` sums independent indicators with success probabilities ``1/j``;
``Z_{n,lam}(alpha)`` uses ``alpha / (alpha + lam j)``, ``j = 1..n``.
Everything is computed exactly from the product of per-component PGFs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DomainError, PoleError
from .exact import DensePoly, RationalLike, as_rational, poly_eval, poly_product

FAMILY_Y = "Y"
FAMILY_Z = "Z"


@dataclass(frozen=True)
class BernoulliSumSpec:
    """Which sum, of how many components, with which parameters.

    By default family Z insists on ``alpha > 0`` and ``0 < lam < 1``.  With
    ``relaxed=True`` any parameters are accepted as long as no
    ``alpha + lam j`` vanishes; probabilities may then leave ``[0, 1]``,
    which is harmless for the algebraic identities.
    """

    family: str
    n: int
    alpha: Fraction | None = None
    lam: Fraction | None = None
    relaxed: bool = False

    def __post_init__(self):
        family = str(self.family).upper()
        object.__setattr__(self, "family", family)
        if family not in (FAMILY_Y, FAMILY_Z):
            raise DomainError(f"unknown family {self.family!r}")
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        if family == FAMILY_Y:
            if self.alpha is not None or self.lam is not None:
                raise DomainError("family Y takes no alpha or lambda")
            return
        if self.alpha is None or self.lam is None:
            raise DomainError("family Z needs alpha and lambda")
        alpha, lam = as_rational(self.alpha), as_rational(self.lam)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "lam", lam)
        if not self.relaxed and not self.in_paper_range:
            raise DomainError(
                f"family Z needs alpha > 0 and 0 < lambda < 1 (got alpha={alpha}, "
                f"lambda={lam}); pass relaxed=True to go outside that range"
            )
        for j in range(1, self.n + 1):
            if alpha + lam * j == 0:
                raise PoleError(f"alpha + lambda*{j} = 0")

    @property
    def in_paper_range(self) -> bool:
        if self.family == FAMILY_Y:
            return True
        return self.alpha > 0 and 0 < self.lam < 1

    def success_probabilities(self) -> tuple:
        if self.family == FAMILY_Y:
            return tuple(Fraction(1, j) for j in range(1, self.n + 1))
        a, lam = self.alpha, self.lam
        return tuple(a / (a + lam * j) for j in range(1, self.n + 1))


def y_spec(n: int) -> BernoulliSumSpec:
    return BernoulliSumSpec(FAMILY_Y, n)


def z_spec(n: int, alpha: RationalLike, lam: RationalLike, relaxed: bool = False) -> BernoulliSumSpec:
    return BernoulliSumSpec(FAMILY_Z, n, as_rational(alpha), as_rational(lam), relaxed)


@dataclass(frozen=True)
class Pmf:
    """Point masses on outcomes ``0..n``."""

    probabilities: tuple

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.probabilities):
            return self.probabilities[k]
        return Fraction(0)

    def __len__(self):
        return len(self.probabilities)

    def __iter__(self):
        return iter(self.probabilities)

    def expect(self, f) -> Fraction:
        return sum((f(k) * p for k, p in enumerate(self.probabilities)), Fraction(0))

    def mean(self) -> Fraction:
        return self.expect(lambda k: k)

    def variance(self) -> Fraction:
        mu = self.mean()
        return self.expect(lambda k: k * k) - mu * mu

    def as_floats(self) -> list:
        return [float(p) for p in self.probabilities]


@lru_cache(maxsize=4096)
def pgf(spec: BernoulliSumSpec) -> DensePoly:
    """``E[z**S]`` as a polynomial in ``z``: the product of ``(1 - p_j) + p_j z``."""
    return poly_product(DensePoly.linear(1 - p, p) for p in spec.success_probabilities())


@lru_cache(maxsize=4096)
def pmf(spec: BernoulliSumSpec) -> Pmf:
    g = pgf(spec)
    return Pmf(tuple(g[k] for k in range(spec.n + 1)))


def mean(spec: BernoulliSumSpec) -> Fraction:
    """Closed form: the sum of the success probabilities."""
    return sum(spec.success_probabilities(), Fraction(0))


def variance(spec: BernoulliSumSpec) -> Fraction:
    """Closed form: ``sum p_j (1 - p_j)``."""
    return sum((p * (1 - p) for p in spec.success_probabilities()), Fraction(0))


@lru_cache(maxsize=256)
def _binom_moment_poly(n: int) -> DensePoly:
    return poly_product(DensePoly.linear(1, Fraction(1, j)) for j in range(1, n + 1))


def binom_moment(n: int, l: int) -> Fraction:
    """``E[C(Y_n, l)]``, read off as the ``t**l`` coefficient of ``prod (1 + t/j)``."""
    if n < 0 or l < 0:
        raise DomainError("n and l must be >= 0")
    if l > n:
        return Fraction(0)
    return _binom_moment_poly(n)[l]


def binom_moment_from_pmf(p: Pmf, l: int) -> Fraction:
    return p.expect(lambda k: comb(k, l))


def gamma_ratio(alpha: RationalLike, lam: RationalLike, n: int) -> Fraction:
    """``Gamma(n + x + 1) / Gamma(x)`` with ``x = alpha/lam``, as the rising
    product ``x (x+1) ... (x+n)``.

    Divide by ``x`` to get ``Gamma(n + x + 1) / Gamma(1 + x)``.
    """
    alpha, lam = as_rational(alpha), as_rational(lam)
    if n < 0:
        raise DomainError("n must be >= 0")
    if lam == 0:
        raise PoleError("lambda = 0")
    x = alpha / lam
    result = Fraction(1)
    for j in range(n + 1):
        if x + j == 0:
            raise PoleError(f"alpha/lambda + {j} = 0")
        result *= x + j
    return result


def y_expectation_of_power(n: int, base) -> Fraction:
    """``E[base**Y_n]`` by summing over the exact PMF of ``Y_n``."""
    return poly_eval(pgf(y_spec(n)), base)

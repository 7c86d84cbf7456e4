"""Signed Stirling numbers of the first kind and degenerate Stirling numbers
of the second kind.

Tables are filled by triangular recurrences and cached per ``(kind, lam)``.
Two slower constructions that never touch the recurrences are provided for
cross-checking: a change of basis from powers of ``x`` to falling factorials,
and coefficient extraction from ``(e_lam(t) - 1)**k / k!``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DomainError
from .exact import (
    DensePoly,
    RationalLike,
    TruncatedSeries,
    as_rational,
    degenerate_exp_series,
    poly_product,
)

FIRST = "first-signed"
SECOND_DEGENERATE = "second-degenerate"
KINDS = (FIRST, SECOND_DEGENERATE)


@dataclass(frozen=True)
class StirlingTable:
    """Immutable triangle ``value(n, k)`` for ``0 <= k <= n <= max_n``."""

    kind: str
    lam: Fraction | None
    rows: tuple  # rows[n] is a tuple of length n + 1

    @property
    def max_n(self) -> int:
        return len(self.rows) - 1

    def value(self, n: int, k: int) -> Fraction:
        if not 0 <= k <= n:
            raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
        if n > self.max_n:
            raise DomainError(f"table only reaches n={self.max_n}")
        return self.rows[n][k]

    def entries(self):
        """Yield ``(n, k, value)`` in row-major order."""
        for n, row in enumerate(self.rows):
            for k, v in enumerate(row):
                yield n, k, v


def _extend_rows(kind: str, lam: Fraction | None, rows: list, max_n: int) -> None:
    # S1(n+1,k)   = S1(n,k-1) - n S1(n,k)
    # S2l(n+1,k)  = S2l(n,k-1) + (k - n lam) S2l(n,k)
    if not rows:
        rows.append((Fraction(1),))
    while len(rows) <= max_n:
        n = len(rows) - 1
        prev = rows[n]
        new = [Fraction(0)] * (n + 2)
        for k in range(n + 2):
            left = prev[k - 1] if k >= 1 else 0
            here = prev[k] if k <= n else 0
            if kind == FIRST:
                new[k] = left - n * here
            else:
                new[k] = left + (k - n * lam) * here
        rows.append(tuple(new))


_cache: dict = {}
_cache_lock = threading.Lock()


def stirling_table(kind: str, max_n: int, lam: RationalLike | None = None) -> StirlingTable:
    """Return a cached table reaching at least ``max_n``.

    ``lam`` is required for the degenerate second kind and ignored (must be
    omitted) for the first kind.  A table for a different ``lam`` is a
    different cache entry.
    """
    if kind not in KINDS:
        raise DomainError(f"unknown Stirling kind {kind!r}")
    if max_n < 0:
        raise DomainError("max_n must be >= 0")
    if kind == FIRST:
        if lam is not None:
            raise DomainError("the first kind takes no lambda")
        key = (FIRST, None)
    else:
        if lam is None:
            raise DomainError("the degenerate second kind needs lambda")
        lam = as_rational(lam)
        key = (SECOND_DEGENERATE, lam)
    with _cache_lock:
        table = _cache.get(key)
        if table is None or table.max_n < max_n:
            rows = list(table.rows) if table is not None else []
            _extend_rows(kind, key[1], rows, max_n)
            table = StirlingTable(kind, key[1], tuple(rows))
            _cache[key] = table
    return table


def stirling1(n: int, k: int) -> Fraction:
    """Signed ``S_1(n, k)``: coefficient of ``x**k`` in ``x(x-1)...(x-n+1)``."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return stirling_table(FIRST, n).value(n, k)


def degenerate_stirling2(n: int, k: int, lam: RationalLike) -> Fraction:
    """``S_{2,lam}(n, k)``: coefficient of ``(x)_k`` in ``(x)_{n,lam}``."""
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    return stirling_table(SECOND_DEGENERATE, n, lam).value(n, k)


def stirling2(n: int, k: int) -> Fraction:
    """Classical ``S_2(n, k)`` from its own recurrence ``k S(n,k) + S(n,k-1)``.

    Kept separate from the degenerate table so that the ``lam = 0`` reduction
    is compared against an independent computation.
    """
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")
    row = [1]
    for m in range(n):
        row = [(row[j - 1] if j else 0) + (j * row[j] if j <= m else 0) for j in range(m + 2)]
    return Fraction(row[k])


def falling_factorial_expand(n: int) -> DensePoly:
    """``x(x-1)...(x-n+1)`` as a polynomial in ``x``."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return poly_product(DensePoly.linear(-i, 1) for i in range(n))


def degenerate_falling_factorial_expand(n: int, lam: RationalLike) -> DensePoly:
    """``x(x-lam)...(x-(n-1)lam)`` as a polynomial in ``x``."""
    if n < 0:
        raise DomainError("n must be >= 0")
    lam = as_rational(lam)
    return poly_product(DensePoly.linear(-i * lam, 1) for i in range(n))


def basis_conversion_oracle(n: int, lam: RationalLike) -> list:
    """Row ``[S_{2,lam}(n, 0), ..., S_{2,lam}(n, n)]`` by change of basis.

    Since ``(x)_d`` is monic of degree ``d``, the leading coefficient of the
    remainder is the next falling-factorial coefficient; subtract and repeat.
    """
    rest = degenerate_falling_factorial_expand(n, lam)
    out = [Fraction(0)] * (n + 1)
    for d in range(n, -1, -1):
        c = rest[d]
        out[d] = c
        if c:
            rest = rest - falling_factorial_expand(d).scale(c)
    if not rest.is_zero():
        raise AssertionError("basis conversion left a remainder")
    return out


def eq5_series_oracle(k: int, order: int, lam: RationalLike) -> list:
    """``[m! * [t^m] (e_lam(t) - 1)**k / k!  for m = 0..order]``.

    Entry ``m`` equals ``S_{2,lam}(m, k)``; entries below ``k`` are zero.
    """
    if not 0 <= k <= order:
        raise DomainError(f"need 0 <= k <= order, got k={k}, order={order}")
    shifted = degenerate_exp_series(lam, order) - TruncatedSeries.one(order)
    series = (shifted ** k).scale(Fraction(1, factorial(k)))
    return [factorial(m) * series[m] for m in range(order + 1)]


def theorem3_lhs(n: int, l: int, lam: RationalLike) -> Fraction:
    """``sum_{m=l}^{n} S_{2,lam}(n+1, m+1) * S_1(m+1, l+1)``."""
    if not 0 <= l <= n:
        raise DomainError(f"need 0 <= l <= n, got n={n}, l={l}")
    s2 = stirling_table(SECOND_DEGENERATE, n + 1, lam)
    s1 = stirling_table(FIRST, n + 1)
    return sum(
        (s2.value(n + 1, m + 1) * s1.value(m + 1, l + 1) for m in range(l, n + 1)),
        Fraction(0),
    )

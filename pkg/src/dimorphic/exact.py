"""Exact scalars, dense polynomials and truncated power series.

Scalars are :class:`fractions.Fraction`, which already keeps every value in
lowest terms with a positive denominator.  Polynomials and series are
immutable tuples of fractions indexed by power.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence, Union

from .errors import DomainError, OrderMismatchError

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused; they would smuggle binary rounding into exact code.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Render as ``p/q`` with the denominator always present (``0/1``, ``3/1``)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _strip(coeffs: Iterable) -> tuple:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class DensePoly:
    """Univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``.  The zero polynomial has an
    empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("DensePoly is immutable")

    @classmethod
    def constant(cls, c: RationalLike) -> DensePoly:
        return cls((c,))

    @classmethod
    def linear(cls, c0: RationalLike, c1: RationalLike) -> DensePoly:
        """The polynomial ``c0 + c1*x``."""
        return cls((c0, c1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        if i < 0:
            raise IndexError("negative power")
        return self.coeffs[i] if i < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, DensePoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"DensePoly({[format_rational(c) for c in self.coeffs]})"

    def _coerce(self, other) -> DensePoly:
        if isinstance(other, DensePoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return DensePoly.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return DensePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DensePoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative polynomial power")
        result = DensePoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: RationalLike) -> DensePoly:
        c = as_rational(c)
        return DensePoly(c * a for a in self.coeffs)

    def __call__(self, x):
        return poly_eval(self, x)

    def compose_linear(self, a: RationalLike, b: RationalLike) -> DensePoly:
        """Return ``p(a + b*x)`` as a polynomial in ``x``."""
        inner = DensePoly.linear(a, b)
        result = DensePoly()
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result


def poly_mul(a: DensePoly, b: DensePoly) -> DensePoly:
    """Convolution product of two polynomials."""
    if a.is_zero() or b.is_zero():
        return DensePoly()
    out = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            out[i + j] += ai * bj
    return DensePoly(out)


def poly_eval(p: DensePoly, x):
    """Horner evaluation.  Exact for rational ``x``; also accepts floats and complex."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return Fraction(acc) if isinstance(acc, int) else acc


def poly_product(factors: Iterable[DensePoly]) -> DensePoly:
    result = DensePoly.constant(1)
    for f in factors:
        result = poly_mul(result, f)
    return result


class TruncatedSeries:
    """Power series in ``t`` known modulo ``t**(order+1)``.

    Always stores exactly ``order + 1`` coefficients; trailing zeros are kept
    because they carry information about the truncation.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence[RationalLike], order: int | None = None):
        coeffs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise DomainError("truncation order must be >= 0")
        coeffs = coeffs[: order + 1]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order", order)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls([1], order)

    def __getitem__(self, m: int) -> Fraction:
        if m < 0 or m > self.order:
            raise IndexError(f"coefficient t^{m} beyond truncation order {self.order}")
        return self.coeffs[m]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        body = ", ".join(format_rational(c) for c in self.coeffs)
        return f"TruncatedSeries([{body}], order={self.order})"

    def _check(self, other: TruncatedSeries):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.order != self.order:
            raise OrderMismatchError(
                f"truncation orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other):
        self._check(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __sub__(self, other):
        self._check(other)
        return TruncatedSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __mul__(self, other):
        return series_mul(self, other)

    def scale(self, c: RationalLike) -> TruncatedSeries:
        c = as_rational(c)
        return TruncatedSeries([c * a for a in self.coeffs], self.order)

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative series power")
        result = TruncatedSeries.one(self.order)
        for _ in range(k):
            result = series_mul(result, self)
        return result


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product of two series sharing a truncation order."""
    a._check(b)
    n = a.order
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j in range(n + 1 - i):
            out[i + j] += ai * b.coeffs[j]
    return TruncatedSeries(out, n)


def degenerate_falling_factorial(x: RationalLike, n: int, lam: RationalLike) -> Fraction:
    """``x(x - lam)(x - 2 lam)...(x - (n-1) lam)``; the empty product is 1."""
    if n < 0:
        raise DomainError("n must be >= 0")
    x, lam = as_rational(x), as_rational(lam)
    result = Fraction(1)
    for i in range(n):
        result *= x - i * lam
    return result


def degenerate_exp_series(lam: RationalLike, order: int) -> TruncatedSeries:
    """The degenerate exponential ``e_lam(t)`` truncated after ``t**order``."""
    if order < 0:
        raise DomainError("order must be >= 0")
    lam = as_rational(lam)
    coeffs = []
    ff = Fraction(1)
    for m in range(order + 1):
        if m:
            ff *= 1 - (m - 1) * lam
        coeffs.append(ff / factorial(m))
    return TruncatedSeries(coeffs, order)

"""Exact rational scalars and exact polynomial fitting.

Rationals are :class:`fractions.Fraction`, which already keeps numerator and
denominator coprime with a positive denominator after every operation.
"""

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Tuple, Union

from .errors import DuplicateAbscissa, OverdeterminedMismatch

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "ExactPolynomial",
    "interpolate",
    "eval_poly",
    "to_rational",
    "format_rational",
]


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction.

    Floats are refused so that nothing inexact leaks in.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational literal: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_rational(q: Number) -> str:
    # Fraction.__str__ already prints "p" when q == 1 and "p/q" otherwise.
    return str(Fraction(q))


class ExactPolynomial:
    """Univariate polynomial in k with rational coefficients.

    ``coefficients[i]`` is the coefficient of ``k**i``; trailing zeros are
    stripped so the zero polynomial has an empty coefficient tuple and
    degree -1.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coefficients: Iterable = ()):
        coeffs = [to_rational(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "_coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("ExactPolynomial is immutable")

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coeff(self, i: int) -> Fraction:
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else Fraction(0)

    def __call__(self, k: Number) -> Fraction:
        return eval_poly(self, k)

    def __eq__(self, other):
        if isinstance(other, ExactPolynomial):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        return f"ExactPolynomial({[format_rational(c) for c in self._coeffs]})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        terms = []
        for i in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("k" if i == 1 else f"k^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            elif mono:
                terms.append(f"({c})*{mono}" if c.denominator != 1 else f"{c}*{mono}")
            else:
                terms.append(format_rational(c))
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> list:
        return [format_rational(c) for c in self._coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "ExactPolynomial":
        return cls(to_rational(c) for c in data)


def eval_poly(p: ExactPolynomial, k: Number) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p.coefficients):
        acc = acc * k + c
    return acc


def _solve_vandermonde(ks: Sequence[int], values: Sequence[Fraction]) -> list:
    """Gauss-Jordan elimination on the Vandermonde system, exact."""
    size = len(ks)
    rows = [[Fraction(k) ** j for j in range(size)] + [values[i]] for i, k in enumerate(ks)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][size] for i in range(size)]


def interpolate(samples: Iterable[Tuple[int, Number]], degree: int) -> ExactPolynomial:
    """Fit the unique polynomial of degree <= ``degree`` through the samples.

    Samples are sorted by abscissa; the ``degree + 1`` smallest abscissae
    determine the polynomial and every remaining sample must lie on it,
    otherwise :class:`OverdeterminedMismatch` is raised.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    pts = sorted((int(k), to_rational(v)) for k, v in samples)
    for (k1, _), (k2, _) in zip(pts, pts[1:]):
        if k1 == k2:
            raise DuplicateAbscissa(f"abscissa {k1} appears more than once")
    if len(pts) < degree + 1:
        raise ValueError(f"need at least {degree + 1} samples, got {len(pts)}")

    base, extra = pts[: degree + 1], pts[degree + 1:]
    poly = ExactPolynomial(_solve_vandermonde([k for k, _ in base], [v for _, v in base]))
    bad = [(k, v) for k, v in extra if eval_poly(poly, k) != v]
    if bad:
        k, v = bad[0]
        raise OverdeterminedMismatch(
            f"sample at k={k} is {v}, fitted degree-{degree} polynomial gives {eval_poly(poly, k)}"
        )
    return poly

"""Asymptotic coefficients and the invariants built from them.

From the sampled series

    S0(k) = dim H^0(L^k)         = a0 k^n     + a1 k^(n-1) + ...
    S1(k) = tr A_k               = b0 k^(n+1) + b1 k^n     + ...
    S2(k) = tr A_k^2             = Q  k^(n+2) + ...

we get the Donaldson-Futaki invariant F = b1/a0 - b0*a1/a0^2, the squared
norm Q/a0 - b0^2/a0^2 and Donaldson's normalized invariant Psi.
"""

import dataclasses
import os
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (
    CauchySchwarzViolation,
    DimensionMismatch,
    GenericFiberMismatch,
    KStabError,
    NegativeNormSquared,
    NonPositiveLeading,
    OverdeterminedMismatch,
    SamplingCapExceeded,
    ZeroNorm,
)
from .exactnum import ExactPolynomial, Rational, format_rational, interpolate
from .fixtures import ToricFixture
from .toric import ActionSpec, LatticePolytope, dilate, minkowski_sum

DEFAULT_MAX_K = 200
VERIFY = 2  # extra samples checked against every fitted polynomial


def max_k_from_env() -> int:
    value = os.environ.get("KSTAB_MAX_K")
    return int(value) if value else DEFAULT_MAX_K


@dataclass(frozen=True)
class AsymptoticData:
    n: int
    a0: Rational
    a1: Rational
    b0: Rational
    b1: Rational
    Q: Rational
    e: int = 1
    chi: Optional[ExactPolynomial] = field(default=None, compare=False, repr=False)
    weight: Optional[ExactPolynomial] = field(default=None, compare=False, repr=False)
    weight_sq: Optional[ExactPolynomial] = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a0": format_rational(self.a0),
            "a1": format_rational(self.a1),
            "b0": format_rational(self.b0),
            "b1": format_rational(self.b1),
            "Q": format_rational(self.Q),
        }


def extract(S0, S1, S2, n: int, e: int = 1, check_cauchy_schwarz: bool = True) -> AsymptoticData:
    """Fit S0, S1, S2 with degrees n, n+1, n+2 and read off the coefficients.

    Each series needs two samples beyond what its degree requires; they
    must lie on the fitted polynomial.
    """
    if n < 1:
        raise ValueError("fiber dimension must be >= 1")
    for name, series, deg in (("S0", S0, n), ("S1", S1, n + 1), ("S2", S2, n + 2)):
        if len(series) < deg + 1 + VERIFY:
            raise ValueError(f"{name} needs at least {deg + 1 + VERIFY} samples, got {len(series)}")
    chi = interpolate(S0, n)
    weight = interpolate(S1, n + 1)
    weight_sq = interpolate(S2, n + 2)
    a0 = chi.coeff(n)
    if a0 <= 0:
        raise NonPositiveLeading(f"a0 = {a0}: the polarization is not big")
    data = AsymptoticData(
        n=n,
        a0=a0,
        a1=chi.coeff(n - 1),
        b0=weight.coeff(n + 1),
        b1=weight.coeff(n),
        Q=weight_sq.coeff(n + 2),
        e=e,
        chi=chi,
        weight=weight,
        weight_sq=weight_sq,
    )
    if check_cauchy_schwarz and data.Q * data.a0 < data.b0 ** 2:
        raise CauchySchwarzViolation(
            f"Q*a0 = {data.Q * data.a0} < b0^2 = {data.b0 ** 2}; the squared-weight series is inconsistent"
        )
    return data


def donaldson_futaki(d: AsymptoticData) -> Rational:
    return d.b1 / d.a0 - d.b0 * d.a1 / d.a0 ** 2


def leading_weight(d: AsymptoticData) -> Rational:
    return d.b0 / d.a0


def _quotient(num: Sequence[Fraction], den: Sequence[Fraction]) -> List[Fraction]:
    num = list(num)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] / den[-1]
        q[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    return q


def futaki_from_expansion(d: AsymptoticData) -> Tuple[Rational, Rational]:
    """(F0, F1) from w(k)/chi(k) = F0*k + F1 + O(1/k).

    Polynomial division of the weight polynomial by chi; the remainder has
    lower degree than chi and only contributes at order 1/k.
    """
    q = _quotient(d.weight.coefficients, d.chi.coefficients)
    q += [Fraction(0)] * (2 - len(q))
    return q[1], q[0]


def norm_squared(d: AsymptoticData) -> Rational:
    value = d.Q / d.a0 - d.b0 ** 2 / d.a0 ** 2
    if value < 0:
        raise NegativeNormSquared(f"norm^2 = {value} < 0; input series are inconsistent")
    return value


def rational_root(q: Rational, n: int) -> Optional[Rational]:
    """Exact n-th root of a nonnegative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("radicand must be nonnegative")

    def iroot(x: int) -> Optional[int]:
        if x < 2:
            return x
        r = 1 << -(-x.bit_length() // n)  # >= floor root
        while True:
            y = ((n - 1) * r + x // r ** (n - 1)) // n
            if y >= r:
                break
            r = y
        return r if r ** n == x else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


@dataclass(frozen=True)
class FutakiReport:
    """Derived invariants of one central fiber.

    ``psi_sq_signed`` is sign(F) * Psi^2 = sign(F) * (a0^2 vol^(n-2))^(1/n) * F^2 / norm^2
    with vol = a0 / e^n.  It is None only if the n-th root were irrational;
    ``psi_radicand`` always holds the exact a0^2 vol^(n-2).
    """

    F: Rational
    F0: Rational
    norm_sq: Rational
    psi_sq_signed: Optional[Rational]
    psi_decimal: Decimal
    psi_radicand: Rational
    psi_factor: Rational  # sign(F) * F^2 / norm^2
    n: int

    def to_json(self) -> dict:
        return {
            "F": format_rational(self.F),
            "F0": format_rational(self.F0),
            "norm_sq": format_rational(self.norm_sq),
            "psi": str(self.psi_decimal),
            "psi_sq_signed": None if self.psi_sq_signed is None else format_rational(self.psi_sq_signed),
        }


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _decimal(q: Fraction) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


def psi(d: AsymptoticData, precision: int = 30) -> FutakiReport:
    F = donaldson_futaki(d)
    nsq = norm_squared(d)
    if nsq == 0:
        raise ZeroNorm("norm of the test configuration is zero; Psi is undefined")
    n = d.n
    vol = d.a0 / Fraction(d.e) ** n
    radicand = d.a0 ** 2 * vol ** (n - 2)
    factor = _sign(F) * F * F / nsq
    root = rational_root(radicand, n)
    psi_sq = None if root is None else factor * root
    with localcontext() as ctx:
        ctx.prec = precision + 10
        if psi_sq is not None:
            mag = _decimal(abs(psi_sq)).sqrt()
        else:
            mag = (_decimal(abs(factor)) * (_decimal(radicand).ln() / n).exp()).sqrt()
        value = mag if F >= 0 else -mag
        ctx.prec = precision
        value = +value
    return FutakiReport(
        F=F,
        F0=leading_weight(d),
        norm_sq=nsq,
        psi_sq_signed=psi_sq,
        psi_decimal=value,
        psi_radicand=radicand,
        psi_factor=factor,
        n=n,
    )


def base_change(obj, d: int):
    """Base change t -> t^d: multiply the stored degree field by d."""
    if d < 1:
        raise ValueError("base-change degree must be >= 1")
    if hasattr(obj, "with_degree"):
        return obj.with_degree(d)
    return dataclasses.replace(obj, d=obj.d * d)


@dataclass(frozen=True)
class Analysis:
    data: AsymptoticData
    k0: int
    ks: Tuple[int, ...]
    attempts: int


def window(k0: int, n: int) -> Tuple[int, ...]:
    return tuple(range(k0, k0 + n + 3 + VERIFY))


def analyze(fixture, k0: Optional[int] = None, max_k: Optional[int] = None,
            check_cauchy_schwarz: bool = True) -> Analysis:
    """Sample a fixture and extract its coefficients.

    For monomial fixtures a mismatch on the verification samples doubles k0
    until the window would exceed ``max_k``.
    """
    max_k = max_k_from_env() if max_k is None else max_k
    n = fixture.n
    if fixture.kind == "series":
        S0, S1, S2 = fixture.sample()
        data = extract(S0, S1, S2, n, fixture.e, check_cauchy_schwarz)
        return Analysis(data, min(fixture.ks), fixture.ks, 1)
    k = fixture.default_k0 if k0 is None else k0
    attempts = 0
    while True:
        ks = window(k, n)
        if ks[-1] > max_k:
            raise SamplingCapExceeded(
                f"sampling window {ks[0]}..{ks[-1]} exceeds the enumeration cap {max_k}"
            )
        attempts += 1
        S0, S1, S2 = fixture.sample(ks)
        try:
            data = extract(S0, S1, S2, n, fixture.e, check_cauchy_schwarz)
        except OverdeterminedMismatch:
            if not fixture.escalates:
                raise
            k *= 2
            continue
        return Analysis(data, ks[0], ks, attempts)


def futaki(fixture, **kw) -> Rational:
    return donaldson_futaki(analyze(fixture, **kw).data)


@dataclass(frozen=True)
class SweepResult:
    rows: Tuple[Tuple[int, Rational], ...]
    F_inf: Rational
    scaled: Tuple[Rational, ...]  # r * |F_r - F_inf|
    gap_limit: Optional[Rational] = None  # exact lim r * (F_r - F_inf)

    @property
    def sup_scaled(self) -> Rational:
        return max(self.scaled)

    def to_json(self) -> dict:
        return {
            "rows": [{"r": r, "F": format_rational(f)} for r, f in self.rows],
            "F_inf": format_rational(self.F_inf),
            "sup_r_times_gap": format_rational(self.sup_scaled),
            "limit_r_times_gap": None if self.gap_limit is None else format_rational(self.gap_limit),
        }


def _gap_limit(per_r: List[Tuple[int, AsymptoticData]], n: int, F_inf: Rational) -> Optional[Rational]:
    # a0, a1, b0, b1 of rP + A are polynomials in r of degree n, n-1, n+1, n
    if len(per_r) < n + 2 + 1 + VERIFY:
        return None
    a0 = interpolate([(r, d.a0) for r, d in per_r], n)
    a1 = interpolate([(r, d.a1) for r, d in per_r], max(n - 1, 0))
    b0 = interpolate([(r, d.b0) for r, d in per_r], n + 1)
    b1 = interpolate([(r, d.b1) for r, d in per_r], n)
    # r (F_r - F_inf) = r (a0 b1 - a1 b0 - F_inf a0^2) / a0^2, both sides degree 2n
    num = [Fraction(0)] * (2 * n + 3)
    for i, x in enumerate(a0.coefficients):
        for j, y in enumerate(b1.coefficients):
            num[i + j] += x * y
        for j, y in enumerate(a0.coefficients):
            num[i + j] -= F_inf * x * y
    for i, x in enumerate(a1.coefficients):
        for j, y in enumerate(b0.coefficients):
            num[i + j] -= x * y
    if any(num[2 * n + 1:]) or num[2 * n] != 0:
        return None
    return num[2 * n - 1] / a0.leading ** 2


def twist_sweep(P: LatticePolytope, A: LatticePolytope, act: ActionSpec, r_max: int,
                e: int = 1) -> SweepResult:
    """F of L^r + A (polytope rP + A) for r = 1..r_max against F of L."""
    if P.n != A.n:
        raise DimensionMismatch(f"polytopes of dimension {P.n} and {A.n}")
    if r_max < 3:
        raise ValueError("r_max must be >= 3")
    F_inf = futaki(ToricFixture(P, act, e))
    per_r = []
    for r in range(1, r_max + 1):
        twisted = minkowski_sum(dilate(P, r), A)
        # keep the linearization constant per copy of L
        act_r = ActionSpec(act.xi, act.c * r, act.d)
        per_r.append((r, analyze(ToricFixture(twisted, act_r, e)).data))
    rows = tuple((r, donaldson_futaki(d)) for r, d in per_r)
    scaled = tuple(r * abs(f - F_inf) for r, f in rows)
    try:
        limit = _gap_limit(per_r, P.n, F_inf)
    except OverdeterminedMismatch:
        limit = None
    return SweepResult(rows, F_inf, scaled, limit)


@dataclass(frozen=True)
class Comparison:
    F1: Rational
    F2: Rational
    normalized: bool

    @property
    def difference(self) -> Rational:
        return self.F2 - self.F1

    @property
    def dominant(self) -> str:
        diff = self.difference
        return "second" if diff > 0 else ("first" if diff < 0 else "equal")

    def to_json(self) -> dict:
        return {
            "F1": format_rational(self.F1),
            "F2": format_rational(self.F2),
            "difference": format_rational(self.difference),
            "dominant": self.dominant,
            "normalized_by_degree": self.normalized,
        }


def compare(fix1, fix2, generic, normalize: bool = False, max_k: Optional[int] = None) -> Comparison:
    """Futaki invariants of two central fibers of the same generic fiber.

    With ``normalize`` each F is divided by its base-change degree, so
    fixtures of different degree can be compared.
    """
    results = []
    for fix in (fix1, fix2):
        an = analyze(fix, max_k=max_k)
        report = fix.flatness(generic, an.ks)
        if not report.passed:
            bad = ", ".join(f"k={k}" for k, _, _ in report.mismatches)
            raise GenericFiberMismatch(f"{fix.kind} fixture is not flat over the generic fiber ({bad})")
        results.append(donaldson_futaki(an.data))
    if not normalize and fix1.d != fix2.d:
        raise KStabError(f"base-change degrees differ ({fix1.d} vs {fix2.d}); pass normalize=True")
    F1, F2 = results
    if normalize:
        F1, F2 = F1 / fix1.d, F2 / fix2.d
    return Comparison(F1, F2, normalize)

"""Brute-force re-derivation of the golden values.

Nothing here goes through the facet machinery, the row-wise sums or the
Vandermonde solver used by the main pipeline.  Lattice points come from
explicit inequalities (intervals, simplices, boxes) or a monotone-chain hull
in the plane; polynomial coefficients come from Newton forward differences
on consecutive samples.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, List, Sequence, Tuple

from . import degeneration, invariants, toric
from .degeneration import GenericFiberSpec, MonomialFiber
from .exactnum import ExactPolynomial, interpolate
from .fixtures import MonomialFixture, ToricFixture
from .toric import ActionSpec, LatticePolytope


# -- membership tests -------------------------------------------------------

def monotone_chain(points) -> List[Tuple[int, int]]:
    """Counter-clockwise hull vertices of planar points (Andrew's algorithm)."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_points(vertices, k: int):
    hull = [(k * x, k * y) for x, y in monotone_chain(vertices)]
    xs = [p[0] for p in hull]
    ys = [p[1] for p in hull]
    edges = list(zip(hull, hull[1:] + hull[:1]))
    out = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if all((b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) >= 0 for a, b in edges):
                out.append((x, y))
    return out


def interval_points(lo: int, hi: int, k: int):
    return [(x,) for x in range(k * lo, k * hi + 1)]


def simplex_points(n: int, k: int, scale: int = 1):
    return [u for u in itertools.product(range(k * scale + 1), repeat=n) if sum(u) <= k * scale]


def box_points(sides: Sequence[int], k: int):
    return list(itertools.product(*(range(k * s + 1) for s in sides)))


def monomial_points(m: int, generators, k: int):
    out = []
    for alpha in itertools.product(range(k + 1), repeat=m):
        if sum(alpha) != k:
            continue
        if any(all(a >= g for a, g in zip(alpha, gen)) for gen in generators):
            continue
        out.append(alpha)
    return out


# -- forward differences ----------------------------------------------------

def newton_fit(values: Sequence, start: int, degree: int) -> ExactPolynomial:
    """Polynomial through consecutive samples f(start), f(start+1), ...

    Uses the forward-difference table; extra samples must have vanishing
    differences of order > degree.
    """
    table = [Fraction(v) for v in values]
    diffs = []
    for order in range(len(table)):
        diffs.append(table[0])
        table = [b - a for a, b in zip(table, table[1:])]
    if any(diffs[degree + 1:]):
        raise AssertionError("samples are not polynomial of the stated degree")
    # sum_j diffs[j] * binom(k - start, j), expanded in powers of k
    coeffs = [Fraction(0)] * (degree + 1)
    for j in range(degree + 1):
        poly = [Fraction(1)]
        for i in range(j):
            # multiply by (k - start - i)
            shift = -(start + i)
            nxt = [Fraction(0)] * (len(poly) + 1)
            for p, c in enumerate(poly):
                nxt[p] += c * shift
                nxt[p + 1] += c
            poly = nxt
        for p, c in enumerate(poly):
            coeffs[p] += diffs[j] * c / factorial(j)
    return ExactPolynomial(coeffs)


def brute_coefficients(points_at: Callable[[int], list], weight: Callable, n: int, start: int = 1):
    """(a0, a1, b0, b1, Q) from brute-force point lists and a weight function."""
    ks = range(start, start + n + 6)
    s0, s1, s2 = [], [], []
    for k in ks:
        pts = points_at(k)
        ws = [weight(u, k) for u in pts]
        s0.append(len(pts))
        s1.append(sum(ws))
        s2.append(sum(w * w for w in ws))
    chi = newton_fit(s0, start, n)
    w1 = newton_fit(s1, start, n + 1)
    w2 = newton_fit(s2, start, n + 2)
    return chi.coeff(n), chi.coeff(n - 1), w1.coeff(n + 1), w1.coeff(n), w2.coeff(n + 2)


def futaki_of(coeffs) -> Fraction:
    a0, a1, b0, b1, _ = coeffs
    return b1 / a0 - b0 * a1 / a0 ** 2


def norm_sq_of(coeffs) -> Fraction:
    a0, _, b0, _, Q = coeffs
    return Q / a0 - b0 ** 2 / a0 ** 2


def linear_weight(xi, c=0, d=1):
    return lambda u, k: d * (sum(x * y for x, y in zip(xi, u)) + c * k)


def monomial_weight(lam, d=1):
    return lambda a, k: -d * sum(x * y for x, y in zip(lam, a))


# -- golden table -----------------------------------------------------------

SEGMENT = LatticePolytope(((0,), (1,)))
TRIANGLE = LatticePolytope(((0, 0), (1, 0), (0, 1)))
SQUARE = LatticePolytope(((0, 0), (1, 0), (0, 1), (1, 1)))
CONIC = MonomialFiber(3, ((0, 2, 0),), (0, 1, 0))
LINE = MonomialFiber(3, ((0, 1, 0),), (0, 1, 0))
CONIC_CHI = GenericFiberSpec(chi=ExactPolynomial([1, 2]))


def _lib_coeffs(fixture):
    d = invariants.analyze(fixture).data
    return d.a0, d.a1, d.b0, d.b1, d.Q


def _simplex(n):
    return LatticePolytope(tuple([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)]))


def _box(sides):
    return LatticePolytope(tuple(itertools.product(*((0, s) for s in sides))))


@dataclass(frozen=True)
class Golden:
    name: str
    expected: object
    library: Callable[[], object]
    oracle: Callable[[], object]


def _golden() -> List[Golden]:
    F = Fraction
    g = []

    g.append(Golden(
        "ehrhart(unit triangle)", (F(1), F(3, 2), F(1, 2)),
        lambda: interpolate([(k, len(toric.dilation_points(TRIANGLE, k))) for k in range(1, 5)], 2).coefficients,
        lambda: newton_fit([len(simplex_points(2, k)) for k in range(1, 5)], 1, 2).coefficients,
    ))
    g.append(Golden(
        "#(2*triangle)", 6,
        lambda: len(toric.dilation_points(TRIANGLE, 2)),
        lambda: len(simplex_points(2, 2)),
    ))
    g.append(Golden(
        "square pyramidal eval at 2", F(5),
        lambda: ExactPolynomial([0, F(1, 6), F(1, 2), F(1, 3)])(2),
        lambda: F(sum(i * i for i in range(3))),
    ))
    for d, exp in ((1, (4, 6, 14)), (2, (4, 12, 56))):
        g.append(Golden(
            f"segment series k=3 d={d}", exp,
            lambda d=d: toric.series_at(SEGMENT, ActionSpec((1,), 0, d), 3),
            lambda d=d: (4, sum(d * x for x in range(4)), sum((d * x) ** 2 for x in range(4))),
        ))
    for d, exp in ((1, (5, -2, 2)), (2, (5, -4, 8))):
        g.append(Golden(
            f"conic series k=2 d={d}", exp,
            lambda d=d: degeneration.series_at(MonomialFiber(3, ((0, 2, 0),), (0, 1, 0), d), 2),
            lambda d=d: (lambda pts: (len(pts), sum(-d * a[1] for a in pts), sum((d * a[1]) ** 2 for a in pts)))(
                monomial_points(3, [(0, 2, 0)], 2)),
        ))
    g.append(Golden(
        "P1 coefficients", (F(1), F(1), F(1, 2), F(1, 2), F(1, 3)),
        lambda: _lib_coeffs(ToricFixture(SEGMENT, ActionSpec((1,)))),
        lambda: brute_coefficients(lambda k: interval_points(0, 1, k), linear_weight((1,)), 1),
    ))
    g.append(Golden(
        "P1 F", F(0),
        lambda: invariants.futaki(ToricFixture(SEGMENT, ActionSpec((1,)))),
        lambda: futaki_of(brute_coefficients(lambda k: interval_points(0, 1, k), linear_weight((1,)), 1)),
    ))
    g.append(Golden(
        "P1 norm^2", F(1, 12),
        lambda: invariants.norm_squared(invariants.analyze(ToricFixture(SEGMENT, ActionSpec((1,)))).data),
        lambda: norm_sq_of(brute_coefficients(lambda k: interval_points(0, 1, k), linear_weight((1,)), 1)),
    ))
    g.append(Golden(
        "P1 norm^2 at d=2", F(4, 12),
        lambda: invariants.norm_squared(invariants.analyze(ToricFixture(SEGMENT, ActionSpec((1,), 0, 2))).data),
        lambda: norm_sq_of(brute_coefficients(lambda k: interval_points(0, 1, k), linear_weight((1,), 0, 2), 1)),
    ))
    g.append(Golden(
        "P2 coefficients (a0, a1, b0, b1)", (F(1, 2), F(3, 2), F(1, 6), F(1, 2)),
        lambda: _lib_coeffs(ToricFixture(TRIANGLE, ActionSpec((1, 0))))[:4],
        lambda: brute_coefficients(lambda k: simplex_points(2, k), linear_weight((1, 0)), 2)[:4],
    ))
    g.append(Golden(
        "P2 F", F(0),
        lambda: invariants.futaki(ToricFixture(TRIANGLE, ActionSpec((1, 0)))),
        lambda: futaki_of(brute_coefficients(lambda k: polygon_points(TRIANGLE.vertices, k), linear_weight((1, 0)), 2)),
    ))
    g.append(Golden(
        "conic coefficients (a0, a1, b0, b1)", (F(2), F(1), F(0), F(-1)),
        lambda: _lib_coeffs(MonomialFixture(CONIC))[:4],
        lambda: brute_coefficients(lambda k: monomial_points(3, [(0, 2, 0)], k), monomial_weight((0, 1, 0)), 1)[:4],
    ))
    g.append(Golden(
        "conic F", F(-1, 2),
        lambda: invariants.futaki(MonomialFixture(CONIC)),
        lambda: futaki_of(brute_coefficients(lambda k: monomial_points(3, [(0, 2, 0)], k), monomial_weight((0, 1, 0)), 1)),
    ))
    g.append(Golden(
        "conic F at d=3", F(-3, 2),
        lambda: invariants.futaki(invariants.base_change(MonomialFixture(CONIC), 3)),
        lambda: futaki_of(brute_coefficients(lambda k: monomial_points(3, [(0, 2, 0)], k), monomial_weight((0, 1, 0), 3), 1)),
    ))
    g.append(Golden(
        "triangle + square vertex count", 5,
        lambda: len(toric.minkowski_sum(TRIANGLE, SQUARE).vertices),
        lambda: len(monotone_chain([(a + c, b + d) for a, b in TRIANGLE.vertices for c, d in SQUARE.vertices])),
    ))
    g.append(Golden(
        "flatness conic vs 2k+1", True,
        lambda: degeneration.flatness_check(CONIC, CONIC_CHI, range(1, 8)).passed,
        lambda: all(len(monomial_points(3, [(0, 2, 0)], k)) == 2 * k + 1 for k in range(1, 8)),
    ))
    g.append(Golden(
        "flatness (y) mismatches k=1..7", tuple(range(1, 8)),
        lambda: tuple(k for k, _, _ in degeneration.flatness_check(LINE, CONIC_CHI, range(1, 8)).mismatches),
        lambda: tuple(k for k in range(1, 8) if len(monomial_points(3, [(0, 1, 0)], k)) != 2 * k + 1),
    ))
    # binom(k+n, n) expanded in powers of k
    binomial_coeffs = {
        1: (F(1), F(1)),
        2: (F(1), F(3, 2), F(1, 2)),
        3: (F(1), F(11, 6), F(1), F(1, 6)),
    }
    for n in (1, 2, 3):
        g.append(Golden(
            f"ehrhart(simplex dim {n}) = binom(k+{n},{n})",
            binomial_coeffs[n],
            lambda n=n: toric.ehrhart_polynomial(_simplex(n)).coefficients,
            lambda n=n: newton_fit([len(simplex_points(n, k)) for k in range(n + 3)], 0, n).coefficients,
        ))
    for sides in ((2,), (1, 2), (1, 1, 2)):
        expected = [Fraction(1)]
        for s in sides:
            expected = [sum(expected[j] * (s if i - j == 1 else 1) for j in range(len(expected)) if 0 <= i - j <= 1)
                        for i in range(len(expected) + 1)]
        g.append(Golden(
            f"ehrhart(box {sides}) = prod(s*k+1)", tuple(expected),
            lambda sides=sides: toric.ehrhart_polynomial(_box(sides)).coefficients,
            lambda sides=sides: newton_fit([len(box_points(sides, k)) for k in range(len(sides) + 3)], 0,
                                           len(sides)).coefficients,
        ))
    g.append(Golden(
        "sweep [0,2] twisted by [0,1]: F_r, r=1..5", (F(0),) * 5,
        lambda: tuple(f for _, f in invariants.twist_sweep(
            LatticePolytope(((0,), (2,))), SEGMENT, ActionSpec((1,)), 5).rows),
        lambda: tuple(futaki_of(brute_coefficients(lambda k, r=r: interval_points(0, 2 * r + 1, k),
                                                   linear_weight((1,)), 1)) for r in range(1, 6)),
    ))
    g.append(Golden(
        "double line vs trivial conic: F jump", F(1, 2),
        lambda: invariants.compare(
            MonomialFixture(CONIC, CONIC_CHI),
            ToricFixture(LatticePolytope(((0,), (2,))), ActionSpec((0,))),
            CONIC_CHI,
        ).difference,
        lambda: F(0) - futaki_of(brute_coefficients(lambda k: monomial_points(3, [(0, 2, 0)], k),
                                                    monomial_weight((0, 1, 0)), 1)),
    ))
    return g


@dataclass(frozen=True)
class OracleResult:
    name: str
    expected: object
    library: object
    oracle: object

    @property
    def passed(self) -> bool:
        return _norm(self.library) == _norm(self.expected) == _norm(self.oracle)


def _norm(x):
    if isinstance(x, (tuple, list)):
        return tuple(_norm(y) for y in x)
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return x


def run_oracle_check() -> List[OracleResult]:
    return [OracleResult(g.name, g.expected, g.library(), g.oracle()) for g in _golden()]

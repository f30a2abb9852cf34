"""Lattice polytopes as polarized toric central fibers.

A full-dimensional lattice polytope P in R^n stands for a big and nef toric
polarization; the lattice points of kP index a basis of sections of L^k.
A one-parameter subgroup is given by an integer linear functional xi, and
the weight of the section attached to u in kP is ``d * (xi(u) + c*k)``.
Replacing xi by -xi flips the sign of the resulting Futaki invariant; no
preferred orientation is assumed.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

from .errors import DegeneratePolytope, DimensionMismatch
from .exactnum import Rational, interpolate

Point = Tuple[int, ...]


def _det(matrix: List[List[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    size = len(matrix)
    if size == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for i in range(size - 1):
        if m[i][i] == 0:
            swap = next((r for r in range(i + 1, size) if m[r][i] != 0), None)
            if swap is None:
                return 0
            m[i], m[swap] = m[swap], m[i]
            sign = -sign
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
        prev = m[i][i]
    return sign * m[-1][-1]


def _rank(vectors: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _normal(diffs: List[Point], n: int) -> Point:
    # Generalized cross product: cofactor expansion along a formal first row.
    out = []
    for j in range(n):
        minor = [[row[c] for c in range(n) if c != j] for row in diffs]
        out.append((-1) ** j * _det(minor))
    return tuple(out)


def _facets(points: Sequence[Point], n: int) -> List[Tuple[Point, int]]:
    """Facet inequalities ``a . x <= b`` of conv(points), primitive normals."""
    found = set()
    for subset in itertools.combinations(points, n):
        p0 = subset[0]
        diffs = [tuple(q[i] - p0[i] for i in range(n)) for q in subset[1:]]
        a = _normal(diffs, n)
        if not any(a):
            continue
        g = 0
        for x in a:
            g = gcd(g, x)
        a = tuple(x // g for x in a)
        b = sum(x * y for x, y in zip(a, p0))
        vals = [sum(x * y for x, y in zip(a, p)) for p in points]
        if all(v <= b for v in vals):
            found.add((a, b))
        if all(v >= b for v in vals):
            found.add((tuple(-x for x in a), -b))
    return sorted(found)


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of integer vertices.

    Vertices must be in convex position and span R^n.  The one exception is
    a single point, accepted so that the zero twist {0} can be expressed;
    such a polytope is not a valid polarization on its own.
    """

    vertices: Tuple[Point, ...]
    facets: Tuple[Tuple[Point, int], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        verts = tuple(tuple(int(x) for x in v) for v in self.vertices)
        if not verts:
            raise DegeneratePolytope("polytope needs at least one vertex")
        n = len(verts[0])
        if n < 1 or any(len(v) != n for v in verts):
            raise DimensionMismatch("vertices must all have the same dimension >= 1")
        if len(set(verts)) != len(verts):
            raise DegeneratePolytope("vertices must be pairwise distinct")
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        if len(verts) == 1:
            return
        diffs = [tuple(v[i] - verts[0][i] for i in range(n)) for v in verts[1:]]
        if _rank(diffs) < n:
            raise DegeneratePolytope("vertices do not span a full-dimensional polytope")
        facets = _facets(verts, n)
        for v in verts:
            tight = [a for a, b in facets if sum(x * y for x, y in zip(a, v)) == b]
            if _rank(tight) < n:
                raise DegeneratePolytope(f"{v} is not a vertex of the convex hull")
        object.__setattr__(self, "facets", tuple(facets))

    @property
    def n(self) -> int:
        return len(self.vertices[0])

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1

    @classmethod
    def from_points(cls, points) -> "LatticePolytope":
        """Convex hull of an arbitrary point list, keeping only vertices."""
        pts = sorted(set(tuple(int(x) for x in p) for p in points))
        if len(pts) == 1:
            return cls(tuple(pts))
        n = len(pts[0])
        facets = _facets(pts, n)
        if not facets:
            raise DegeneratePolytope("points do not span a full-dimensional polytope")
        verts = []
        for p in pts:
            tight = [a for a, b in facets if sum(x * y for x, y in zip(a, p)) == b]
            if _rank(tight) == n:
                verts.append(p)
        return cls(tuple(verts))

    def to_json(self) -> dict:
        return {"n": self.n, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "LatticePolytope":
        poly = cls(tuple(tuple(v) for v in data["vertices"]))
        if "n" in data and int(data["n"]) != poly.n:
            raise DimensionMismatch(f"declared n={data['n']} but vertices live in dimension {poly.n}")
        return poly


@dataclass(frozen=True)
class ActionSpec:
    xi: Tuple[int, ...]
    c: int = 0
    d: int = 1

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(int(x) for x in self.xi))
        if self.d < 1:
            raise ValueError("base-change degree d must be >= 1")

    def to_json(self) -> dict:
        return {"xi": list(self.xi), "c": self.c, "d": self.d}

    @classmethod
    def from_json(cls, data: dict) -> "ActionSpec":
        return cls(tuple(data["xi"]), int(data.get("c", 0)), int(data.get("d", 1)))


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _rows(P: LatticePolytope, k: int):
    """Yield (prefix, lo, hi): points of kP are prefix + (t,) for lo <= t <= hi."""
    n = P.n
    if P.is_point:
        v = P.vertices[0]
        yield tuple(k * x for x in v[:-1]), k * v[-1], k * v[-1]
        return
    lows = [k * min(v[i] for v in P.vertices) for i in range(n - 1)]
    highs = [k * max(v[i] for v in P.vertices) for i in range(n - 1)]
    facets = [(a, k * b) for a, b in P.facets]
    for prefix in itertools.product(*(range(lo, hi + 1) for lo, hi in zip(lows, highs))):
        lo, hi = None, None
        ok = True
        for a, b in facets:
            rest = b - sum(x * y for x, y in zip(a[:-1], prefix))
            last = a[-1]
            if last > 0:
                bound = rest // last
                hi = bound if hi is None else min(hi, bound)
            elif last < 0:
                bound = _ceil_div(rest, last)
                lo = bound if lo is None else max(lo, bound)
            elif rest < 0:
                ok = False
                break
        if ok and lo is not None and hi is not None and lo <= hi:
            yield prefix, lo, hi


def dilation_points(P: LatticePolytope, k: int) -> List[Point]:
    """All lattice points of kP, sorted lexicographically."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return [(0,) * P.n]
    pts = []
    for prefix, lo, hi in _rows(P, k):
        pts.extend(prefix + (t,) for t in range(lo, hi + 1))
    return pts


def _power_sums(lo: int, hi: int):
    def s1(m):
        return m * (m + 1) // 2

    def s2(m):
        return m * (m + 1) * (2 * m + 1) // 6

    # sums over t in [lo, hi] of 1, t, t^2 (valid for negative lo as well)
    count = hi - lo + 1
    if lo > 0:
        return count, s1(hi) - s1(lo - 1), s2(hi) - s2(lo - 1)
    if hi < 0:
        c, t1, t2 = _power_sums(-hi, -lo)
        return c, -t1, t2
    return count, s1(hi) - s1(-lo), s2(hi) + s2(-lo)


def series_at(P: LatticePolytope, act: ActionSpec, k: int) -> Tuple[int, int, int]:
    """(count, sum of weights, sum of squared weights) over kP."""
    if len(act.xi) != P.n:
        raise DimensionMismatch(f"xi has {len(act.xi)} entries, polytope has dimension {P.n}")
    xi_head, xi_last = act.xi[:-1], act.xi[-1]
    n0 = s1 = s2 = 0
    for prefix, lo, hi in _rows(P, k):
        base = sum(x * y for x, y in zip(xi_head, prefix)) + act.c * k
        cnt, t1, t2 = _power_sums(lo, hi)
        n0 += cnt
        s1 += cnt * base + xi_last * t1
        s2 += cnt * base * base + 2 * base * xi_last * t1 + xi_last * xi_last * t2
    return n0, act.d * s1, act.d * act.d * s2


def sample_series(P: LatticePolytope, act: ActionSpec, ks):
    """Sampled S0 (count), S1 (trace of A_k), S2 (trace of A_k^2)."""
    S0, S1, S2 = [], [], []
    for k in ks:
        if k < 1:
            raise ValueError("sample abscissae must be >= 1")
        a, b, c = series_at(P, act, k)
        S0.append((k, Rational(a)))
        S1.append((k, Rational(b)))
        S2.append((k, Rational(c)))
    return S0, S1, S2


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.n != Q.n:
        raise DimensionMismatch(f"cannot add polytopes of dimension {P.n} and {Q.n}")
    return LatticePolytope.from_points(
        tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices
    )


def dilate(P: LatticePolytope, m: int) -> LatticePolytope:
    if m < 1:
        raise ValueError("dilation factor must be >= 1")
    return LatticePolytope(tuple(tuple(m * x for x in v) for v in P.vertices))


def ehrhart_polynomial(P: LatticePolytope, extra: int = 2):
    """Ehrhart polynomial by interpolation, verified on ``extra`` samples."""
    ks = range(0, P.n + 1 + extra)
    return interpolate([(k, len(dilation_points(P, k))) for k in ks], P.n)

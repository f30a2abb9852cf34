"""Monomial central fibers of weight-vector degenerations.

The central fiber is Proj(S/I) for a monomial ideal I in m variables. Its
degree-k standard monomials (those outside I) form a basis of sections of
L_0^k, and a weight vector lambda acts on x^alpha with weight
``-d * <lambda, alpha>``.  Negating lambda flips this convention.
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, InvalidIdeal, KStabError
from .exactnum import ExactPolynomial, Rational, eval_poly
from .toric import LatticePolytope, dilation_points, ehrhart_polynomial

Exponent = Tuple[int, ...]


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialFiber:
    m: int
    generators: Tuple[Exponent, ...]
    lam: Tuple[int, ...]
    d: int = 1
    k0: Optional[int] = None

    def __post_init__(self):
        if self.m < 2:
            raise InvalidIdeal("need at least two homogeneous coordinates")
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        lam = tuple(int(x) for x in self.lam)
        if len(lam) != self.m:
            raise DimensionMismatch(f"lambda has {len(lam)} entries, expected {self.m}")
        for g in gens:
            if len(g) != self.m:
                raise DimensionMismatch(f"generator {g} does not have {self.m} exponents")
            if any(x < 0 for x in g):
                raise InvalidIdeal(f"generator {g} has a negative exponent")
            if not any(g):
                raise InvalidIdeal("the unit ideal has an empty central fiber")
        for i, g in enumerate(gens):
            for j, h in enumerate(gens):
                if i != j and _divides(g, h):
                    raise InvalidIdeal(f"generating set is not minimal: {g} divides {h}")
        if self.d < 1:
            raise ValueError("base-change degree d must be >= 1")
        if self.k0 is not None and self.k0 < 1:
            raise ValueError("k0 must be >= 1")
        object.__setattr__(self, "generators", tuple(sorted(gens)))
        object.__setattr__(self, "lam", lam)

    @property
    def default_k0(self) -> int:
        return max(1, sum(sum(g) for g in self.generators))

    @property
    def dimension(self) -> int:
        """Dimension of Proj(S/I).

        One less than the largest set of variables containing the support
        of no generator.
        """
        supports = [frozenset(i for i, x in enumerate(g) if x) for g in self.generators]
        for size in range(self.m, 0, -1):
            for subset in itertools.combinations(range(self.m), size):
                s = frozenset(subset)
                if not any(sup <= s for sup in supports):
                    return size - 1
        return -1

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "generators": [list(g) for g in self.generators],
            "lambda": list(self.lam),
            "d": self.d,
        }
        if self.k0 is not None:
            out["k0"] = self.k0
        return out

    @classmethod
    def from_json(cls, data: dict) -> "MonomialFiber":
        k0 = data.get("k0")
        return cls(
            int(data["m"]),
            tuple(tuple(g) for g in data.get("generators", [])),
            tuple(data["lambda"]),
            int(data.get("d", 1)),
            None if k0 is None else int(k0),
        )


def _monomials(m: int, k: int):
    # stars and bars, lexicographically ascending exponent vectors
    out = []
    for bars in itertools.combinations(range(k + m - 1), m - 1):
        prev = -1
        alpha = []
        for b in bars:
            alpha.append(b - prev - 1)
            prev = b
        alpha.append(k + m - 2 - prev)
        out.append(tuple(alpha))
    out.sort()
    return out


def standard_monomials(fib: MonomialFiber, k: int) -> List[Exponent]:
    """Degree-k monomials not divisible by any generator, in lex order."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return [a for a in _monomials(fib.m, k) if not any(_divides(g, a) for g in fib.generators)]


def series_at(fib: MonomialFiber, k: int) -> Tuple[int, int, int]:
    n0 = s1 = s2 = 0
    for alpha in standard_monomials(fib, k):
        pair = sum(x * y for x, y in zip(fib.lam, alpha))
        n0 += 1
        s1 -= pair
        s2 += pair * pair
    return n0, fib.d * s1, fib.d * fib.d * s2


def sample_series(fib: MonomialFiber, ks):
    S0, S1, S2 = [], [], []
    for k in ks:
        if k < 1:
            raise ValueError("sample abscissae must be >= 1")
        a, b, c = series_at(fib, k)
        S0.append((k, Rational(a)))
        S1.append((k, Rational(b)))
        S2.append((k, Rational(c)))
    return S0, S1, S2


@dataclass(frozen=True)
class GenericFiberSpec:
    """Hilbert polynomial chi(M, A^k) of the generic fiber.

    Either given directly or as the Ehrhart polynomial of a lattice polytope.
    """

    chi: Optional[ExactPolynomial] = None
    polytope: Optional[LatticePolytope] = None

    def __post_init__(self):
        if (self.chi is None) == (self.polytope is None):
            raise KStabError("give exactly one of chi or polytope")

    def polynomial(self) -> ExactPolynomial:
        if self.chi is not None:
            return self.chi
        return ehrhart_polynomial(self.polytope)

    @property
    def dimension(self) -> int:
        return self.polynomial().degree

    def to_json(self) -> dict:
        if self.chi is not None:
            return {"chi": self.chi.to_json()}
        return {"polytope": self.polytope.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "GenericFiberSpec":
        if "chi" in data:
            return cls(chi=ExactPolynomial.from_json(data["chi"]))
        if "polytope" in data:
            return cls(polytope=LatticePolytope.from_json(data["polytope"]))
        raise KStabError("generic fiber needs a 'chi' or 'polytope' entry")


@dataclass(frozen=True)
class FlatnessReport:
    passed: bool
    sampled: Tuple[int, ...]
    mismatches: Tuple[Tuple[int, Rational, Rational], ...]  # (k, S0(k), chi(k))

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "sampled": list(self.sampled),
            "mismatches": [
                {"k": k, "S0": str(s), "chi": str(c)} for k, s, c in self.mismatches
            ],
        }


def hilbert_function(fiber, k: int) -> int:
    """Number of degree-k sections of a monomial or toric fiber."""
    if isinstance(fiber, LatticePolytope):
        return len(dilation_points(fiber, k))
    return len(standard_monomials(fiber, k))


def flatness_check(fiber, gen: GenericFiberSpec, ks: Sequence[int]) -> FlatnessReport:
    """Compare the central fiber's Hilbert function with the generic chi.

    ``fiber`` is a MonomialFiber or a LatticePolytope (toric central fiber).
    """
    chi = gen.polynomial()
    ks = tuple(ks)
    bad = []
    for k in ks:
        s0 = hilbert_function(fiber, k)
        expected = eval_poly(chi, k)
        if s0 != expected:
            bad.append((k, Rational(s0), expected))
    return FlatnessReport(not bad, ks, tuple(bad))

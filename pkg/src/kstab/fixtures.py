"""Fixture files: toric, monomial and raw-series central-fiber data.

Every fixture exposes the same small surface used by the invariant
pipeline: ``n``, ``sample(ks)`` and the transforms ``with_degree``,
``shifted``, ``flipped`` that realize base change, a change of
linearization and inversion of the action.
"""

import dataclasses
import json
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from . import degeneration, toric
from .degeneration import GenericFiberSpec, MonomialFiber
from .errors import FixtureError, KStabError
from .exactnum import Rational, to_rational
from .toric import ActionSpec, LatticePolytope


@dataclass(frozen=True)
class ToricFixture:
    polytope: LatticePolytope
    action: ActionSpec
    e: int = 1

    kind = "toric"
    escalates = False

    def __post_init__(self):
        if self.polytope.is_point:
            raise KStabError("a single point is not a polarization")
        if len(self.action.xi) != self.polytope.n:
            raise KStabError(
                f"xi has {len(self.action.xi)} entries, polytope has dimension {self.polytope.n}"
            )

    @property
    def n(self) -> int:
        return self.polytope.n

    @property
    def d(self) -> int:
        return self.action.d

    @property
    def default_k0(self) -> int:
        return 1  # Ehrhart counts and weighted sums are polynomial for all k >= 0

    def sample(self, ks):
        return toric.sample_series(self.polytope, self.action, ks)

    def with_degree(self, d: int) -> "ToricFixture":
        return dataclasses.replace(self, action=dataclasses.replace(self.action, d=self.action.d * d))

    def shifted(self, c: int) -> "ToricFixture":
        return dataclasses.replace(self, action=dataclasses.replace(self.action, c=self.action.c + c))

    def flipped(self) -> "ToricFixture":
        act = self.action
        return dataclasses.replace(
            self, action=ActionSpec(tuple(-x for x in act.xi), -act.c, act.d)
        )

    def dilated(self, m: int) -> "ToricFixture":
        # L -> L^m: the constant c is per unit of k, so it scales with m
        act = self.action
        return dataclasses.replace(
            self, polytope=toric.dilate(self.polytope, m), action=ActionSpec(act.xi, act.c * m, act.d)
        )

    def flatness(self, gen: GenericFiberSpec, ks):
        return degeneration.flatness_check(self.polytope, gen, ks)

    def to_json(self) -> dict:
        return {
            "kind": "toric",
            "polytope": self.polytope.to_json(),
            "action": self.action.to_json(),
            "e": self.e,
        }


@dataclass(frozen=True)
class MonomialFixture:
    fiber: MonomialFiber
    generic: Optional[GenericFiberSpec] = None
    e: int = 1

    kind = "monomial"
    escalates = True

    @property
    def n(self) -> int:
        return self.fiber.dimension

    @property
    def d(self) -> int:
        return self.fiber.d

    @property
    def default_k0(self) -> int:
        return self.fiber.k0 if self.fiber.k0 is not None else self.fiber.default_k0

    def sample(self, ks):
        return degeneration.sample_series(self.fiber, ks)

    def with_degree(self, d: int) -> "MonomialFixture":
        return dataclasses.replace(self, fiber=dataclasses.replace(self.fiber, d=self.fiber.d * d))

    def shifted(self, c: int) -> "MonomialFixture":
        # x^alpha has degree k, so lambda + c*(1,...,1) shifts every weight by -c*k
        lam = tuple(x - c for x in self.fiber.lam)
        return dataclasses.replace(self, fiber=dataclasses.replace(self.fiber, lam=lam))

    def flipped(self) -> "MonomialFixture":
        lam = tuple(-x for x in self.fiber.lam)
        return dataclasses.replace(self, fiber=dataclasses.replace(self.fiber, lam=lam))

    def flatness(self, gen: GenericFiberSpec, ks):
        return degeneration.flatness_check(self.fiber, gen, ks)

    def to_json(self) -> dict:
        out = {"kind": "monomial", "fiber": self.fiber.to_json(), "e": self.e}
        if self.generic is not None:
            out["generic"] = self.generic.to_json()
        return out


@dataclass(frozen=True)
class SeriesFixture:
    """Raw sampled series, for data produced elsewhere or hand-built cases.

    Transforms act on the samples directly: shifting every weight by c*k
    sends S1 to S1 + c*k*S0 and S2 to S2 + 2*c*k*S1 + c^2*k^2*S0.
    """

    n: int
    ks: Tuple[int, ...]
    S0: Tuple[Rational, ...]
    S1: Tuple[Rational, ...]
    S2: Tuple[Rational, ...]
    e: int = 1
    d: int = 1

    kind = "series"
    escalates = False

    def __post_init__(self):
        if not len(self.ks) == len(self.S0) == len(self.S1) == len(self.S2):
            raise KStabError("series fixture needs equally long k, S0, S1, S2 lists")

    @property
    def default_k0(self) -> int:
        return min(self.ks)

    def sample(self, ks=None):
        if ks is not None and tuple(ks) != self.ks:
            raise KStabError("series fixtures can only be sampled at their stored abscissae")
        return (
            list(zip(self.ks, self.S0)),
            list(zip(self.ks, self.S1)),
            list(zip(self.ks, self.S2)),
        )

    def with_degree(self, d: int) -> "SeriesFixture":
        return dataclasses.replace(
            self,
            S1=tuple(d * s for s in self.S1),
            S2=tuple(d * d * s for s in self.S2),
            d=self.d * d,
        )

    def shifted(self, c: int) -> "SeriesFixture":
        # c is per unit of the base-changed weight
        c = c * self.d
        S1 = tuple(s1 + c * k * s0 for k, s0, s1 in zip(self.ks, self.S0, self.S1))
        S2 = tuple(
            s2 + 2 * c * k * s1 + c * c * k * k * s0
            for k, s0, s1, s2 in zip(self.ks, self.S0, self.S1, self.S2)
        )
        return dataclasses.replace(self, S1=S1, S2=S2)

    def flipped(self) -> "SeriesFixture":
        return dataclasses.replace(self, S1=tuple(-s for s in self.S1))

    def to_json(self) -> dict:
        return {
            "kind": "series",
            "n": self.n,
            "k": list(self.ks),
            "S0": [str(s) for s in self.S0],
            "S1": [str(s) for s in self.S1],
            "S2": [str(s) for s in self.S2],
            "e": self.e,
            "d": self.d,
        }


def fixture_from_json(data: Dict):
    """Build a fixture from its parsed JSON form; raises FixtureError."""
    if not isinstance(data, dict):
        raise FixtureError("fixture must be a JSON object")
    kind = data.get("kind")
    try:
        e = int(data.get("e", 1))
        if e < 1:
            raise FixtureError("exponent e must be >= 1")
        if kind == "toric":
            return ToricFixture(
                LatticePolytope.from_json(data["polytope"]), ActionSpec.from_json(data["action"]), e
            )
        if kind == "monomial":
            generic = data.get("generic")
            return MonomialFixture(
                MonomialFiber.from_json(data["fiber"]),
                None if generic is None else GenericFiberSpec.from_json(generic),
                e,
            )
        if kind == "series":
            return SeriesFixture(
                int(data["n"]),
                tuple(int(k) for k in data["k"]),
                tuple(to_rational(s) for s in data["S0"]),
                tuple(to_rational(s) for s in data["S1"]),
                tuple(to_rational(s) for s in data["S2"]),
                e,
                int(data.get("d", 1)),
            )
    except FixtureError:
        raise
    except (KStabError, KeyError, TypeError, ValueError) as exc:
        raise FixtureError(f"invalid {kind} fixture: {exc}") from exc
    raise FixtureError(f"unknown fixture kind {kind!r}")


def load_fixture(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FixtureError(f"{path}: not UTF-8 JSON ({exc})") from exc
    return fixture_from_json(data), raw

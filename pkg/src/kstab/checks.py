"""The invariant battery run by ``kstab check``.

Each check recomputes F (and the norm where relevant) on a transformed
fixture and compares exactly with the transformation law.
"""

from dataclasses import dataclass
from typing import List, Optional

from .errors import KStabError
from .exactnum import format_rational
from .invariants import (
    analyze,
    donaldson_futaki,
    futaki_from_expansion,
    norm_squared,
    psi,
)

POWERS = (2, 3)
SHIFTS = (-2, -1, 0, 1, 2)
DEGREES = (2, 3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _fn(fixture, k0=None, max_k=None):
    data = analyze(fixture, k0=k0, max_k=max_k, check_cauchy_schwarz=False).data
    return data, donaldson_futaki(data)


def run_battery(fixture, generic=None, k0: Optional[int] = None, max_k: Optional[int] = None) -> List[CheckResult]:
    results = []

    def record(name, fn):
        try:
            ok, detail = fn()
        except KStabError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, ok, detail))

    base, F = _fn(fixture, k0, max_k)

    def cauchy_schwarz():
        lhs, rhs = base.Q * base.a0, base.b0 ** 2
        note = " (equality: norm is 0)" if lhs == rhs else ""
        return lhs >= rhs, f"Q*a0 = {lhs}, b0^2 = {rhs}{note}"

    record("cauchy_schwarz", cauchy_schwarz)

    def expansion_route():
        _, F1 = futaki_from_expansion(base)
        return F1 == F, f"coefficient formula {F}, expansion of w/chi {F1}"

    record("expansion_route", expansion_route)

    if hasattr(fixture, "dilated"):
        for m in POWERS:
            def power(m=m):
                _, Fm = _fn(fixture.dilated(m), None, max_k)
                return Fm == F, f"F(L^{m}) = {Fm}, F(L) = {F}"
            record(f"power_invariance[m={m}]", power)

    if base.Q * base.a0 < base.b0 ** 2:
        # every remaining comparison involves the norm
        return results
    nsq = norm_squared(base)
    for c in SHIFTS:
        def shift(c=c):
            data, Fc = _fn(fixture.shifted(c), k0, max_k)
            nc = norm_squared(data)
            return Fc == F and nc == nsq, f"F = {Fc}, norm^2 = {nc}"
        record(f"linearization[c={c}]", shift)

    for d in DEGREES:
        def degree(d=d):
            data, Fd = _fn(fixture.with_degree(d), k0, max_k)
            nd = norm_squared(data)
            ok = Fd == d * F and nd == d * d * nsq
            detail = f"F = {Fd} (expected {d * F}), norm^2 = {nd} (expected {d * d * nsq})"
            if nsq:
                p1, pd = psi(base).psi_sq_signed, psi(data).psi_sq_signed
                ok = ok and p1 == pd
                detail += f", psi_sq_signed {format_rational(pd)} vs {format_rational(p1)}"
            return ok, detail
        record(f"base_change[d={d}]", degree)

    def flip():
        data, Ff = _fn(fixture.flipped(), k0, max_k)
        nf = norm_squared(data)
        return Ff == -F and nf == nsq, f"F = {Ff}, norm^2 = {nf}"

    record("sign_flip", flip)

    if generic is not None and hasattr(fixture, "flatness"):
        def flat():
            ks = analyze(fixture, k0=k0, max_k=max_k, check_cauchy_schwarz=False).ks
            rep = fixture.flatness(generic, ks)
            bad = ", ".join(str(k) for k, _, _ in rep.mismatches)
            return rep.passed, "S0 = chi on " + ",".join(map(str, ks)) if rep.passed else f"mismatch at k = {bad}"
        record("flatness", flat)

    return results

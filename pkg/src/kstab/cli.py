"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 malformed input,
3 the series never stabilized below the enumeration cap, 4 a monomial
fiber is not flat over its generic fiber, 5 zero norm (Psi undefined).
"""

import argparse
import hashlib
import json
import sys
from typing import List, Optional

from .checks import run_battery
from .degeneration import GenericFiberSpec
from .errors import (
    FixtureError,
    GenericFiberMismatch,
    KStabError,
    OverdeterminedMismatch,
    ZeroNorm,
)
from .exactnum import format_rational
from .fixtures import fixture_from_json, load_fixture
from .invariants import (
    analyze,
    base_change,
    compare,
    donaldson_futaki,
    leading_weight,
    max_k_from_env,
    norm_squared,
    psi,
    twist_sweep,
)
from .oracle import run_oracle_check
from .toric import LatticePolytope

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_INPUT = 2
EXIT_UNSTABLE = 3
EXIT_NOT_FLAT = 4
EXIT_ZERO_NORM = 5


class CommandFailed(Exception):
    def __init__(self, code: int, message: str, payload: Optional[dict] = None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _digest(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def _load(path: str):
    try:
        return load_fixture(path)
    except OSError as exc:
        raise CommandFailed(EXIT_INPUT, f"cannot read {path}: {exc.strerror}")


def _prepare(args, path):
    fixture, raw = _load(path)
    if args.sign_flip:
        fixture = fixture.flipped()
    return fixture, raw


def _flatness(args, fixture, ks, context=None):
    """Flatness gate for monomial fixtures; returns the report section."""
    if fixture.kind != "monomial":
        return None
    if args.skip_flatness:
        return {"skipped": True}
    if fixture.generic is None:
        raise CommandFailed(EXIT_INPUT, "monomial fixture has no 'generic' entry; pass --skip-flatness to proceed")
    rep = fixture.flatness(fixture.generic, ks)
    section = rep.to_json()
    if not rep.passed:
        bad = ", ".join(str(k) for k, _, _ in rep.mismatches)
        raise CommandFailed(EXIT_NOT_FLAT, f"flatness check failed at k = {bad}",
                            dict(context or {}, flatness=section))
    return section


def _analysis(args, fixture):
    an = analyze(fixture, k0=args.k0, max_k=max_k_from_env())
    diagnostics = {
        "k0": an.k0,
        "window": [an.ks[0], an.ks[-1]],
        "verification_samples": 2,
        "attempts": an.attempts,
        "warnings": [],
    }
    if an.attempts > 1:
        diagnostics["warnings"].append(
            f"verification samples disagreed below k0={an.k0}; window raised {an.attempts - 1} time(s)"
        )
    return an, diagnostics


def _df_section(data) -> dict:
    out = data.to_json()
    out["F"] = format_rational(donaldson_futaki(data))
    out["F0"] = format_rational(leading_weight(data))
    return out


def _input(path, raw, fixture) -> dict:
    return {"file": path, "digest": _digest(raw), "kind": fixture.kind}


def _run_df(args, path):
    fixture, raw = _prepare(args, path)
    an, diag = _analysis(args, fixture)
    flat = _flatness(args, fixture, an.ks, {"input": _input(path, raw, fixture)})
    return fixture, raw, an, diag, flat


def cmd_df(args) -> dict:
    fixture, raw, an, diag, flat = _run_df(args, args.file)
    report = _df_section(an.data)
    out = {"input": _input(args.file, raw, fixture), "report": report}
    if flat is not None:
        out["flatness"] = flat
    out["diagnostics"] = diag
    return out


def cmd_report(args) -> dict:
    fixture, raw, an, diag, flat = _run_df(args, args.file)
    report = _df_section(an.data)
    report["norm_sq"] = format_rational(norm_squared(an.data))
    out = {"input": _input(args.file, raw, fixture), "report": report}
    if flat is not None:
        out["flatness"] = flat
    out["diagnostics"] = diag
    try:
        full = psi(an.data, args.precision)
    except ZeroNorm as exc:
        raise CommandFailed(EXIT_ZERO_NORM, str(exc), out)
    report.update(full.to_json())
    report["precision"] = args.precision
    return out


def cmd_base_change(args) -> dict:
    if args.d < 1:
        raise CommandFailed(EXIT_INPUT, "-d must be >= 1")
    fixture, raw = _prepare(args, args.file)
    an1, _ = _analysis(args, fixture)
    twisted = base_change(fixture, args.d)
    an, diag = _analysis(args, twisted)
    flat = _flatness(args, twisted, an.ks, {"input": _input(args.file, raw, fixture)})
    F1, FD = donaldson_futaki(an1.data), donaldson_futaki(an.data)
    if F1 == 0:
        line = "0 = 0" if FD == 0 else f"F(1) = 0 but F({args.d}) = {FD}"
        ok = FD == 0
    else:
        ratio = FD / F1
        line = f"ratio = {format_rational(ratio)}"
        ok = ratio == args.d
    out = {
        "input": _input(args.file, raw, fixture),
        "d": args.d,
        "report": _df_section(an.data),
        "check": line,
    }
    if flat is not None:
        out["flatness"] = flat
    out["diagnostics"] = diag
    if not ok:
        raise CommandFailed(EXIT_CHECK, f"base-change law violated: {line}", out)
    return out


def _polytope_from(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
        data = json.loads(raw.decode("utf-8"))
        if isinstance(data, dict) and "kind" in data:
            fixture = fixture_from_json(data)
            if fixture.kind != "toric":
                raise FixtureError(f"{path}: sweep needs toric fixtures")
            return fixture.polytope, fixture, raw
        return LatticePolytope.from_json(data), None, raw
    except OSError as exc:
        raise CommandFailed(EXIT_INPUT, f"cannot read {path}: {exc.strerror}")
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FixtureError(f"{path}: {exc}")


def cmd_sweep(args) -> dict:
    if args.rmax < 3:
        raise CommandFailed(EXIT_INPUT, "--rmax must be >= 3")
    P, fixture, raw_p = _polytope_from(args.file_p)
    if fixture is None:
        raise FixtureError(f"{args.file_p}: first argument must be a toric fixture with an action")
    if args.sign_flip:
        fixture = fixture.flipped()
    A, _, raw_a = _polytope_from(args.file_a)
    if A.n != P.n:
        raise CommandFailed(EXIT_INPUT, f"dimension mismatch: {P.n} vs {A.n}")
    result = twist_sweep(P, A, fixture.action, args.rmax, fixture.e)
    return {
        "input": {"file": args.file_p, "digest": _digest(raw_p), "twist": args.file_a,
                  "twist_digest": _digest(raw_a)},
        "report": result.to_json(),
    }


def cmd_check(args) -> dict:
    fixture, raw = _prepare(args, args.file)
    generic = getattr(fixture, "generic", None)
    results = run_battery(fixture, generic, k0=args.k0, max_k=max_k_from_env())
    out = {
        "input": _input(args.file, raw, fixture),
        "checks": [r.to_json() for r in results],
    }
    failed = [r for r in results if not r.passed]
    if failed:
        raise CommandFailed(EXIT_CHECK, f"invariant failed: {failed[0].name} ({failed[0].detail})", out)
    return out


def cmd_compare(args) -> dict:
    fix1, raw1 = _prepare(args, args.file1)
    fix2, raw2 = _prepare(args, args.file2)
    if args.generic:
        with open(args.generic, "rb") as fh:
            try:
                generic = GenericFiberSpec.from_json(json.loads(fh.read().decode("utf-8")))
            except (ValueError, KeyError, KStabError) as exc:
                raise FixtureError(f"{args.generic}: {exc}")
    else:
        generic = getattr(fix1, "generic", None) or getattr(fix2, "generic", None)
    if generic is None:
        raise CommandFailed(EXIT_INPUT, "no generic fiber: pass --generic or use a monomial fixture that has one")
    try:
        result = compare(fix1, fix2, generic, normalize=args.normalize, max_k=max_k_from_env())
    except GenericFiberMismatch as exc:
        raise CommandFailed(EXIT_NOT_FLAT, str(exc))
    return {
        "input": {"files": [args.file1, args.file2], "digests": [_digest(raw1), _digest(raw2)]},
        "report": result.to_json(),
    }


def cmd_oracle_check(args) -> dict:
    results = run_oracle_check()
    rows = [
        {"name": r.name, "passed": r.passed, "expected": _show(r.expected), "library": _show(r.library),
         "oracle": _show(r.oracle)}
        for r in results
    ]
    out = {"checks": rows}
    failed = [r for r in results if not r.passed]
    if failed:
        raise CommandFailed(EXIT_CHECK, f"oracle mismatch: {failed[0].name}", out)
    return out


def _show(x):
    if isinstance(x, (tuple, list)):
        return [_show(y) for y in x]
    if isinstance(x, bool):
        return x
    try:
        return format_rational(x)
    except (TypeError, ValueError):
        return str(x)


def _text(payload: dict, indent: str = "") -> List[str]:
    lines = []
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                if "passed" in item:
                    mark = "PASS" if item["passed"] else "FAIL"
                    rest = {k: v for k, v in item.items() if k not in ("passed", "name")}
                    detail = "; ".join(f"{k}={v}" for k, v in rest.items())
                    lines.append(f"{indent}  {mark} {item.get('name', '')} {detail}".rstrip())
                else:
                    lines.append(indent + "  " + ", ".join(f"{k}={v}" for k, v in item.items()))
        else:
            lines.append(f"{indent}{key}: {value}")
    return lines


def _common(parser):
    parser.add_argument("--k0", type=int, default=None, help="first sampled k (default per fixture)")
    parser.add_argument("--sign-flip", action="store_true", help="invert the action (xi -> -xi, lambda -> -lambda)")
    parser.add_argument("--skip-flatness", action="store_true", help="report F for monomial fixtures without the flatness gate")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", help="plain text output")
    parser.set_defaults(format="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kstab", description="Exact Donaldson-Futaki invariants of central fibers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("df", help="Futaki invariant and expansion coefficients")
    p.add_argument("file")
    _common(p)
    p.set_defaults(func=cmd_df)

    p = sub.add_parser("report", help="add norm and normalized invariant Psi")
    p.add_argument("file")
    p.add_argument("--precision", type=int, default=30, help="significant digits of the Psi decimal")
    _common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("base-change", help="report after base change t -> t^D")
    p.add_argument("file")
    p.add_argument("-d", type=int, required=True, metavar="D")
    _common(p)
    p.set_defaults(func=cmd_base_change)

    p = sub.add_parser("sweep", help="F of L^r + A for r = 1..R")
    p.add_argument("file_p", metavar="fileP")
    p.add_argument("file_a", metavar="fileA")
    p.add_argument("--rmax", type=int, default=30)
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check", help="run the invariant battery on a fixture")
    p.add_argument("file")
    _common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compare", help="compare F of two central fibers over one generic fiber")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--generic", default=None, help="JSON file with {'chi': [...]} or {'polytope': {...}}")
    p.add_argument("--normalize", action="store_true", help="divide each F by its base-change degree")
    _common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle-check", help="re-derive golden values by brute-force enumeration")
    _common(p)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def _flags(args) -> dict:
    skip = {"func", "command", "format", "file", "file1", "file2", "file_p", "file_a"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(args, payload: dict, stream):
    if args.format == "text":
        stream.write("\n".join(_text(payload)) + "\n")
    else:
        stream.write(json.dumps(payload, indent=2) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    payload = {"command": args.command, "flags": _flags(args)}
    code = EXIT_OK
    try:
        payload.update(args.func(args))
        payload["status"] = "ok"
    except CommandFailed as exc:
        code = exc.code
        if exc.payload:
            payload.update(exc.payload)
        payload["status"] = "error"
        payload["error"] = str(exc)
    except FixtureError as exc:
        code, payload["status"], payload["error"] = EXIT_INPUT, "error", str(exc)
    except OverdeterminedMismatch as exc:
        code, payload["status"], payload["error"] = EXIT_UNSTABLE, "error", f"{type(exc).__name__}: {exc}"
    except (KStabError, ValueError) as exc:
        code, payload["status"], payload["error"] = EXIT_INPUT, "error", f"{type(exc).__name__}: {exc}"
    payload["exit_code"] = code
    _emit(args, payload, sys.stdout)
    if code:
        print(f"kstab: {payload['error']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

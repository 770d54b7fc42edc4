"""qroot: build representations, run verification suites, emit certificates.

Exit codes: 0 pass, 1 suite or certificate failure, 2 invalid input,
3 resource cap exceeded.  Every artifact is JSON with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .grid import GRID, lambda_sample
from .modules import StrategyMismatch, dimension_report, irreducibility_certificate
from .operators import DEFAULT_SIZE_CAP, SizeCapExceeded, to_matrix
from .representation import (
    ParamSet,
    SpecializationError,
    default_params,
    gen_image,
    load_params,
    params_digest,
    params_to_json,
    validate_params,
)
from .roots import ConventionFlag, calibrate_conventions
from .suites import ALL_SUITES, run_suite

FORMAT_VERSIONS = ("1",)
EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


class InvalidInput(ValueError):
    pass


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump(obj), encoding="utf-8")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}") from None


def _check_level(l: int) -> None:
    if l <= 1 or l % 2 == 0:
        raise InvalidInput("l must be odd > 1")


def resolve_points(args) -> list[ParamSet]:
    """Turn --grid / --params / (--n, --l, --lambda) into parameter sets."""
    given = [args.grid is not None, args.params is not None, args.lam is not None]
    if sum(given) != 1:
        raise InvalidInput("give exactly one of --grid, --params, --lambda")
    if args.grid is not None:
        if args.grid != "default":
            raise InvalidInput(f"unknown grid {args.grid!r}")
        return [default_params(n, l, lam) for n, l in GRID for lam in lambda_sample(n, l)]
    if args.params is not None:
        try:
            data = json.loads(Path(args.params).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read parameter file: {exc}") from None
        if "l" in data:
            _check_level(int(data["l"]))
        try:
            return [load_params(data)]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"bad parameter file: {exc}") from None
    if args.n is None or args.l is None:
        raise InvalidInput("--lambda needs --n and --l")
    _check_level(args.l)
    if args.n < 1:
        raise InvalidInput("n must be positive")
    try:
        return [default_params(args.n, args.l, _int_list(args.lam))]
    except ValueError as exc:
        raise InvalidInput(str(exc)) from None


def point_tag(P: ParamSet) -> str:
    if P.lam is not None:
        return f"n{P.n}-l{P.l}-lam{'_'.join(map(str, P.lam))}"
    return f"n{P.n}-l{P.l}-p{params_digest(P)}"


def checked_spec(P: ParamSet) -> dict:
    """Validate or raise InvalidInput carrying the report."""
    try:
        spec = validate_params(P)
    except SpecializationError as exc:
        raise InvalidInput(str(exc)) from None
    if not spec.ok:
        err = InvalidInput("specialization invalid")
        err.detail = spec.to_json()
        raise err
    return spec.to_json()


def _flag(args, P: ParamSet) -> tuple[ConventionFlag, dict | None]:
    if args.flag and args.flag != "auto":
        try:
            return ConventionFlag.parse(args.flag), None
        except ValueError as exc:
            raise InvalidInput(str(exc)) from None
    cal = calibrate_conventions(P)
    return cal.selected, cal.to_json()


def _shape_cap(P: ParamSet, cap: int) -> None:
    if P.shape.dim > cap:
        raise SizeCapExceeded(f"dim V = {P.shape.dim} exceeds cap {cap}")


def cmd_build(args) -> tuple[int, dict]:
    points = resolve_points(args)
    out = Path(args.out)
    summary = []
    for P in points:
        _shape_cap(P, args.cap)
        spec = checked_spec(P)
        gens = {}
        for g in ("e", "f", "t"):
            for i in range(1, P.n + 1):
                gens[f"{g}_{i}"] = to_matrix(gen_image(g, i, P), args.cap).to_json()
        art = {
            "format-version": args.format_version,
            "params": params_to_json(P),
            "params-digest": params_digest(P),
            "specialization": spec,
            "generators": gens,
        }
        write_json(out / point_tag(P) / "build.json", art)
        summary.append({"point": point_tag(P), "dim_V": P.shape.dim, "ok": True})
    return EXIT_OK, {"command": "build", "points": summary}


def cmd_verify(args) -> tuple[int, dict]:
    points = resolve_points(args)
    suites = list(ALL_SUITES) if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    for s in suites:
        if s not in ALL_SUITES:
            raise InvalidInput(f"unknown suite {s!r}; choose from {', '.join(ALL_SUITES)} or all")
    out = Path(args.out)
    summary = []
    status = EXIT_OK
    for P in points:
        _shape_cap(P, args.cap)
        checked_spec(P)
        flag, cal = _flag(args, P)
        xi = _int_list(args.shift) if args.shift else None
        if xi is not None and len(xi) != P.shape.N:
            raise InvalidInput(f"--shift needs {P.shape.N} entries")
        results = {}
        for s in suites:
            rep = run_suite(s, P, flag, m_max=args.m_max, xi=xi, cap=args.cap)
            body = rep.to_json()
            body["format-version"] = args.format_version
            write_json(out / point_tag(P) / f"suite-{s}.json", body)
            results[s] = rep.ok
            if not rep.ok:
                status = EXIT_FAIL
        entry = {"point": point_tag(P), "flag": flag.to_json(), "suites": results}
        if cal is not None:
            entry["calibration"] = cal
        summary.append(entry)
    return status, {"command": "verify", "points": summary, "pass": status == EXIT_OK}


def cmd_report(args) -> tuple[int, dict]:
    points = resolve_points(args)
    out = Path(args.out)
    summary = []
    status = EXIT_OK
    for P in points:
        _shape_cap(P, args.cap)
        checked_spec(P)
        flag, _ = _flag(args, P)
        xi = _int_list(args.shift) if args.shift else None
        if xi is not None and len(xi) != P.shape.N:
            raise InvalidInput(f"--shift needs {P.shape.N} entries")
        cert = irreducibility_certificate(P, flag, xi, args.cap)
        body = {"format-version": args.format_version, "certificate": cert.to_json()}
        try:
            if xi is None:
                body["dimension"] = dimension_report(P, flag, pbw_cap=args.pbw_cap, cap=args.cap).to_json()
        except StrategyMismatch as exc:
            body["dimension"] = {"error": str(exc)}
            status = EXIT_FAIL
        if cert.verdict != "irreducible":
            status = EXIT_FAIL
        write_json(out / point_tag(P) / ("report.json" if xi is None else "report-shift.json"), body)
        summary.append(
            {
                "point": point_tag(P),
                "dim_L": cert.dim_L,
                "top_vector": list(cert.top),
                "verdict": cert.verdict,
            }
        )
    return status, {"command": "report", "points": summary, "pass": status == EXIT_OK}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="rank n of sl_(n+1)")
    common.add_argument("--l", type=int, help="odd order l > 1 of the root of unity")
    common.add_argument("--lambda", dest="lam", help="comma-separated weights, e.g. 1,1")
    common.add_argument("--params", help="JSON parameter file (overrides --n/--l)")
    common.add_argument("--grid", help="run the named grid ('default')")
    common.add_argument("--flag", default="auto", help="'auto' or '<plain>/<bar>', e.g. ei-then-alpha/low-high")
    common.add_argument("--shift", help="comma-separated shift xi (one entry per pair j<=k)")
    common.add_argument("--cap", type=int, default=DEFAULT_SIZE_CAP, help="largest dim V allowed")
    common.add_argument("--out", default="qroot-out", help="output directory")
    common.add_argument("--format-version", default="1", choices=FORMAT_VERSIONS)

    ap = argparse.ArgumentParser(prog="qroot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="emit generator matrices and the specialization report")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", default="all", help=f"comma list of {', '.join(ALL_SUITES)}, or all")
    v.add_argument("--m-max", type=int, default=None, help="largest divided power checked (default l+1)")
    r = sub.add_parser("report", parents=[common], help="irreducibility certificate and dimensions")
    r.add_argument("--pbw-cap", type=int, default=1000, help="largest l^N for the PBW strategy")
    return ap


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "report": cmd_report}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    if args.cap <= 0:
        sys.stdout.write(dump({"error": "cap must be positive", "exit": EXIT_INVALID}))
        return EXIT_INVALID
    try:
        code, summary = COMMANDS[args.command](args)
    except InvalidInput as exc:
        body = {"error": str(exc), "exit": EXIT_INVALID}
        detail = getattr(exc, "detail", None)
        if detail is not None:
            body["specialization"] = detail
        sys.stdout.write(dump(body))
        return EXIT_INVALID
    except SizeCapExceeded as exc:
        sys.stdout.write(dump({"error": str(exc), "exit": EXIT_CAP}))
        return EXIT_CAP
    sys.stdout.write(dump(summary))
    return code


if __name__ == "__main__":
    sys.exit(main())

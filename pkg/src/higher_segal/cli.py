"""Command line entry point: ``higher-segal {classify,generate,check}``.

Exit codes: 0 when the checked condition holds (or, for ``classify`` and
``generate``, when the input parses), 1 when it fails, 2 on usage or input
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .claws import Claw, ConsistencyError, classify_claw, is_strongly_bicartesian, render_claw
from .covers import enumerate_covers, format_subset
from .descent import VARIANTS, check_descent, check_excision, check_segal
from .polytopes import export_off, hull_facets, interpolation_chain, segal_cover, triviality_claw
from .simplex import SimplexMap
from .simplicial import FiniteSimplicialSet


class UsageError(Exception):
    pass


def _bool(v: str) -> bool:
    low = v.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {v!r}")


def parse_params(items: list[str]) -> dict[str, str]:
    """``key=value`` pairs; a bare ``key`` means ``key=true``."""
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip().replace("-", "_")
        if not key:
            raise UsageError(f"malformed parameter {item!r}")
        out[key] = value if sep else "true"
    return out


def _int(params: dict, key: str, default: int | None = None) -> int:
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter {key}=")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {params[key]!r}") from None


def load_claw(path: str) -> Claw:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        data = json.loads(text)
        n = int(data["n"])
        prongs = [tuple(int(v) for v in row) for row in data["prongs"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read claw from {path}: {exc}") from None
    if not prongs:
        raise UsageError("a claw needs at least one prong")
    try:
        return Claw(n, tuple(SimplexMap(r, n) for r in prongs))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def claw_json(c: Claw) -> dict:
    return {"n": c.n, "prongs": [list(f.images) for f in c.prongs]}


def _emit(payload, fmt: str, text: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(payload, ensure_ascii=False, sort_keys=False))
    else:
        print(text if text is not None else json.dumps(payload, ensure_ascii=False))


def _flag(b: bool) -> str:
    return "true" if b else "false"


# ---------------------------------------------------------------------- classify


def cmd_classify(args) -> int:
    c = load_claw(args.claw)
    rep = classify_claw(c)
    verdict = {}
    for cat in ("delta", "lambda"):
        try:
            verdict[cat] = is_strongly_bicartesian(c, cat, args.mode, apex_bound=args.apex_bound)
        except ConsistencyError as exc:
            print(f"error: criterion and oracle disagree: {exc}", file=sys.stderr)
            return 1
    payload = {
        "array": render_claw(c).split("\n"),
        "backwards_compatible": rep.backwards_compatible,
        "compatible": rep.compatible,
        "cyclically_compatible": rep.cyclically_compatible,
        "bicartesian": verdict,
        "nondegenerate": c.is_nondegenerate(),
        "witnesses": {k: list(v) for k, v in rep.witnesses.items()},
    }
    line = (
        f"compatible: {_flag(rep.compatible)}, cyclic: {_flag(rep.cyclically_compatible)}, "
        f"biCartesian(Δ): {_flag(verdict['delta'])}, biCartesian(Λ): {_flag(verdict['lambda'])}, "
        f"nondegenerate: {_flag(c.is_nondegenerate())}"
    )
    _emit(payload, args.format, render_claw(c) + "\n" + line)
    return 0


# ---------------------------------------------------------------------- generate


def _labels(p) -> list[str]:
    return [format_subset(I) for I in p.subsets]


def cmd_generate(args) -> int:
    params = parse_params(args.params)
    kind = args.kind
    if kind == "segal-cover":
        n, d = _int(params, "n"), _int(params, "d")
        side = params.get("side", "lower")
        if side not in ("lower", "upper") or d < 1 or n < 0:
            raise UsageError("segal-cover needs n >= 0, d >= 1 and side=lower|upper")
        out = _labels(segal_cover(n, d, side))
        _emit(out, args.format, "\n".join(out))
    elif kind == "covers":
        n, k = _int(params, "n"), _int(params, "k")
        if n < 0 or k < 0:
            raise UsageError("covers needs n >= 0 and k >= 0")
        nondeg = _bool(params.get("nondegenerate", "true"))
        compat = _bool(params.get("compatible", "true"))
        out = [_labels(p) for p in enumerate_covers(n, k, compatible=compat, nondegenerate=nondeg)]
        _emit(out, args.format, "\n".join(" ".join(p) for p in out))
    elif kind == "chain":
        n, k = _int(params, "n"), _int(params, "k")
        if k < 1 or n < 2 * k:
            raise UsageError("chain needs k >= 1 and n >= 2k")
        chain = interpolation_chain(n, k)
        out = [{"j": j - 1, "members": _labels(p)} for j, p in enumerate(chain)]
        _emit(out, args.format, "\n".join(f"F_{e['j']}: {' '.join(e['members'])}" for e in out))
    elif kind == "triviality-claw":
        k = _int(params, "k")
        parity = params.get("parity", "odd")
        try:
            c = triviality_claw(k, parity)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _emit(claw_json(c), args.format, render_claw(c))
    elif kind == "triangulation":
        n, d = _int(params, "n"), _int(params, "d")
        if d < 1 or n < d:
            raise UsageError("triangulation needs n >= d >= 1")
        lower, upper = hull_facets(n, d)
        if args.off:
            side = params.get("side", "lower")
            if side not in ("lower", "upper"):
                raise UsageError("side must be lower or upper")
            if d > 3:
                raise UsageError("OFF export supports d <= 3")
            sys.stdout.write(export_off(lower if side == "lower" else upper))
            return 0
        out = {"lower": _labels(lower.precover()), "upper": _labels(upper.precover())}
        _emit(out, args.format, f"lower: {' '.join(out['lower'])}\nupper: {' '.join(out['upper'])}")
    else:  # argparse restricts choices; kept for direct calls
        raise UsageError(f"unknown kind {kind!r}")
    return 0


# ---------------------------------------------------------------------- check


def cmd_check(args) -> int:
    params = parse_params(args.params)
    try:
        X = FiniteSimplicialSet.load(args.simplicial_set)
    except OSError as exc:
        raise UsageError(f"cannot read {args.simplicial_set}: {exc}") from None
    up_to = args.up_to if args.up_to is not None else _int(params, "up_to", X.N)
    if up_to > X.N:
        raise UsageError(f"up_to={up_to} exceeds the truncation {X.N}")
    cond = args.condition
    if cond == "segal":
        d = _int(params, "d")
        side = params.get("side", "lower")
        if d < 1 or side not in ("lower", "upper", "both"):
            raise UsageError("segal needs d >= 1 and side=lower|upper|both")
        rep = check_segal(X, d, side, up_to)
    elif cond == "excision":
        k = _int(params, "k")
        variant = params.get("variant", "delta")
        if k < 0 or variant not in VARIANTS:
            raise UsageError(f"excision needs k >= 0 and variant in {', '.join(VARIANTS)}")
        rep = check_excision(X, k, variant, up_to, fiber_bound=args.bound)
    elif cond == "descent":
        if "claw" not in params:
            raise UsageError("descent needs claw=<file>")
        c = load_claw(params["claw"])
        if not classify_claw(c).backwards_compatible:
            raise UsageError("the claw is not backwards compatible, so it has no Čech cube")
        rep = check_descent(X, c)
    else:
        raise UsageError(f"unknown condition {cond!r}")
    payload = rep.to_dict()
    text = f"{rep.condition}: {'pass' if rep.passed else 'fail'}"
    if rep.first_failure:
        text += f" (first failure at n={rep.first_failure['n']})"
    if rep.skipped_levels:
        text += f"; skipped levels {rep.skipped_levels}"
    _emit(payload, args.format, text)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="higher-segal", description="Claws, covers and higher Segal conditions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="compatibility and biCartesian verdicts for a claw file")
    p.add_argument("claw", help='JSON file {"n": int, "prongs": [[ints]]}, or - for stdin')
    p.add_argument("--apex-bound", type=int, default=None)
    p.add_argument("--mode", choices=("criterion", "oracle", "both"), default="both")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("generate", parents=[common], help="covers, chains, claws and triangulations")
    p.add_argument("kind", choices=("segal-cover", "covers", "chain", "triviality-claw", "triangulation"))
    p.add_argument("params", nargs="*", help="key=value parameters")
    p.add_argument("--off", action="store_true", help="OFF mesh for a triangulation (d <= 3)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("check", parents=[common], help="Segal, excision or descent conditions on a simplicial set file")
    p.add_argument("simplicial_set")
    p.add_argument("condition", choices=("segal", "excision", "descent"))
    p.add_argument("params", nargs="*", help="key=value parameters")
    p.add_argument("--up-to", type=int, default=None)
    p.add_argument("--bound", type=int, default=3, help="fiber size bound for excision claws")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 success, 1 domain or validation failure, 2 usage or parse
failure (including malformed JSON).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

import numpy as np

from .core import Exponential, Uniform, build_copula, check_axioms, sklar_compose, validate_generator
from .measures import NoClosedForm, dependence_closed, dependence_quadrature
from .optimal import TABLE1_EPSILONS, table1
from .quadrature import QuadratureRule
from .sampler import SamplingError, sample
from .specs import SpecError, generator_from_spec, read_spec

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load_generator(path: str):
    try:
        obj = read_spec(path)
    except json.JSONDecodeError as exc:
        raise CLIError(f"malformed JSON in {path}: {exc}", EXIT_USAGE) from None
    except OSError as exc:
        raise CLIError(f"cannot read spec {path}: {exc}", EXIT_USAGE) from None
    try:
        return generator_from_spec(obj)
    except SpecError as exc:
        raise CLIError(f"invalid spec: {exc}", EXIT_DOMAIN) from None


def _emit_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _emit_csv(header: Sequence[str], rows, out: Optional[str]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _grid_arg(n: int) -> int:
    if n < 2:
        raise CLIError(f"--grid must be >= 2, got {n}", EXIT_DOMAIN)
    return n


def cmd_validate(args) -> int:
    g = _load_generator(args.spec)
    grid = _grid_arg(args.grid)
    if grid < 3:
        raise CLIError("--grid must be >= 3 for validation", EXIT_DOMAIN)
    gen = validate_generator(g, grid_n=grid)
    ax = check_axioms(build_copula(g), grid_n=grid)
    ok = gen.ok and ax.ok
    _emit_json({"spec": g.to_dict(), "ok": ok, "generator": gen.to_dict(), "axioms": ax.to_dict()})
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_measures(args) -> int:
    g = _load_generator(args.spec)
    report = {"spec": g.to_dict()}
    closed = None
    if args.method in ("closed", "both"):
        try:
            closed = dependence_closed(g)
        except NoClosedForm as exc:
            if args.method == "closed":
                raise CLIError(str(exc), EXIT_DOMAIN) from None
        report["closed_form"] = closed.to_dict() if closed else None
    if args.method in ("quadrature", "both"):
        rule = QuadratureRule(args.order) if args.order else None
        quad = dependence_quadrature(build_copula(g), rule)
        report["quadrature"] = quad.to_dict()
        if closed is not None:
            report["discrepancy"] = {"rho": abs(closed.rho - quad.rho), "tau": abs(closed.tau - quad.tau)}
    _emit_json(report)
    return EXIT_OK


def _parse_epsilons(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise CLIError(f"cannot parse --epsilons {text!r}", EXIT_USAGE) from None


def cmd_table1(args) -> int:
    eps = _parse_epsilons(args.epsilons) if args.epsilons else list(TABLE1_EPSILONS)
    try:
        rows = table1(eps)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from None
    _emit_csv(["epsilon", "rho_max", "rho_min", "tau_max", "tau_min"],
              [[f"{x:.6g}" for x in row] for row in rows], args.out)
    return EXIT_OK


def cmd_contour(args) -> int:
    g = _load_generator(args.spec)
    n = _grid_arg(args.grid)
    c = build_copula(g)
    x = np.linspace(0.0, 1.0, n)
    U, V = np.meshgrid(x, x, indexing="ij")
    field = {"C": c.cdf, "density": c.density, "h": c.h}[args.quantity](U, V)
    rows = ((repr(float(a)), repr(float(b)), repr(float(z)))
            for a, b, z in zip(U.ravel(), V.ravel(), np.asarray(field).ravel()))
    _emit_csv(["u", "v", "value"], rows, args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    g = _load_generator(args.spec)
    if args.n < 1:
        raise CLIError(f"--n must be >= 1, got {args.n}", EXIT_DOMAIN)
    try:
        batch = sample(build_copula(g), args.n, args.seed, spec=g.to_dict())
    except SamplingError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from None
    rows = ((repr(float(a)), repr(float(b))) for a, b in batch.pairs)
    _emit_csv(["u", "v"], rows, args.out)
    return EXIT_OK


def parse_marginal(text: str):
    """``uniform[:lo,hi]`` or ``exponential[:rate]``."""
    name, _, params = text.partition(":")
    try:
        vals = [float(p) for p in params.split(",")] if params else []
    except ValueError:
        raise CLIError(f"cannot parse marginal parameters in {text!r}", EXIT_DOMAIN) from None
    try:
        if name == "uniform" and len(vals) in (0, 2):
            return Uniform(*vals)
        if name == "exponential" and len(vals) in (0, 1):
            return Exponential(*vals)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_DOMAIN) from None
    raise CLIError(f"unsupported marginal {text!r}; use uniform:lo,hi or exponential:rate", EXIT_DOMAIN)


def cmd_compose(args) -> int:
    g = _load_generator(args.spec)
    F, G = parse_marginal(args.marginal_x), parse_marginal(args.marginal_y)
    try:
        x, y = (float(t) for t in args.at.split(","))
    except ValueError:
        raise CLIError(f"--at expects 'x,y', got {args.at!r}", EXIT_USAGE) from None
    H = float(sklar_compose(build_copula(g), F, G, x, y))
    _emit_json({"x": x, "y": y, "F": float(F.cdf(x)), "G": float(G.cdf(y)), "H": H})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="c2copula", description="Copulas from generator functions")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check generator hypotheses and copula axioms")
    s.add_argument("spec", help="JSON spec path, or - for stdin")
    s.add_argument("--grid", type=int, default=101)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("measures", help="Spearman rho and Kendall tau")
    s.add_argument("spec")
    s.add_argument("--method", choices=("closed", "quadrature", "both"), default="both")
    s.add_argument("--order", type=int, default=None, help="Gauss-Legendre nodes per axis")
    s.set_defaults(func=cmd_measures)

    s = sub.add_parser("table1", help="rho/tau of the smoothed extremal family as CSV")
    s.add_argument("--epsilons", default=None, help="comma-separated, e.g. 1,0.1,0.01")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_table1)

    s = sub.add_parser("contour", help="grid of C, density or h as CSV u,v,value")
    s.add_argument("spec")
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--quantity", choices=("C", "density", "h"), default="C")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_contour)

    s = sub.add_parser("sample", help="draw (u, v) pairs as CSV")
    s.add_argument("spec")
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("compose", help="joint CDF C(F(x), G(y))")
    s.add_argument("spec")
    s.add_argument("--marginal-x", required=True)
    s.add_argument("--marginal-y", required=True)
    s.add_argument("--at", required=True, help="x,y (use --at=-1,0.5 for negative x)")
    s.set_defaults(func=cmd_compose)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"c2copula: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

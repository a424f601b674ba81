"""Command line entry point: ``freeradial <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 precondition/domain error,
3 resource cap exceeded, 4 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import hypergroup as hg
from . import io as fio
from . import verify as vf
from .config import Config
from .errors import DomainError, FormatError, FreeRadialError
from .opnorm import gelfand_norm, l2eps_tail, opnorm_stats
from .radial import xi_l3_tail
from .spherical import (
    default_quad_size,
    gauss_rule,
    invert,
    parse_parameter,
    plancherel_density_r2,
    spherical_values,
    transform_angles,
)
from .svg import line_plot


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--rank", type=int, default=2, help="rank r of the free group (default 2)")
    p.add_argument("--nmax", type=int, default=None, help="largest word length / level")
    p.add_argument("--quad", type=int, default=None, metavar="K", help="Gauss quadrature size")
    p.add_argument("--grid", type=int, default=513, metavar="M", help="points of the uniform theta grid")
    p.add_argument("--ball", type=int, default=None, metavar="N", help="radius of the truncated ball")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="override a verification tolerance")
    p.add_argument("--cap", type=int, default=None, help="ball-size cap (vertices)")
    p.add_argument("--out", default=None, metavar="PATH", help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="freeradial", description="Radial harmonic analysis on free groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spherical", parents=[common], help="spherical function values p_n")
    p.add_argument("--param", required=True, help="theta, or real:T, lower:Z, upper:Z")

    p = sub.add_parser("transform", parents=[common], help="spherical transform of a radial CSV")
    p.add_argument("input")
    p.add_argument("--nodes", choices=("grid", "gauss"), default="grid",
                   help="uniform grid of --grid points, or the --quad Gauss nodes")

    p = sub.add_parser("invert", parents=[common], help="radial function from transform samples")
    p.add_argument("input")

    sub.add_parser("quadrature", parents=[common], help="dump Gauss nodes and weights")

    p = sub.add_parser("convolve", parents=[common], help="convolution of two points or two measures (r = 2)")
    p.add_argument("--theta1")
    p.add_argument("--theta2")
    p.add_argument("--mu", help="measure JSON")
    p.add_argument("--nu", help="measure JSON")

    p = sub.add_parser("opnorm", parents=[common], help="truncated operator norm of rho(x)")
    p.add_argument("input", help="radial (n,re,im) or tree (word,re,im) CSV")
    p.add_argument("--iters", type=int, default=300)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", choices=["all", *vf.SUITES])
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("plot", parents=[common], help="emit CSV + SVG plot data")
    p.add_argument("kind", choices=("plancherel", "kernel", "spectrum", "tails"))
    p.add_argument("input", nargs="?", help="radial CSV (spectrum)")
    p.add_argument("--theta1", default=str(math.pi / 2))
    p.add_argument("--theta2", default=str(math.pi / 2))
    p.add_argument("--param", default="0.0", help="spectral parameter for the l^(2+eps) tail")
    p.add_argument("--eps", type=float, default=1.0)
    return parser


def _config(args) -> Config:
    cfg = Config(rank=args.rank, quad=args.quad, grid=args.grid, seed=args.seed, out=args.out)
    if args.cap is not None:
        cfg.ball_cap = args.cap
    for item in args.tol:
        cfg.override(item)
    return cfg


def _emit(args, text: str) -> None:
    if args.out:
        fio.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)


def _table(args, header, rows) -> str:
    if args.format == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    return fio.rows_to_csv(header, [[fio.fmt(v) if isinstance(v, float) else v for v in row] for row in rows])


def _complex_rows(xs, values):
    return [[x, float(v.real), float(v.imag)] for x, v in zip(xs, np.asarray(values, dtype=complex))]


def cmd_spherical(args, cfg):
    param = parse_parameter(args.param, cfg.rank)
    nmax = 20 if args.nmax is None else args.nmax
    seq = spherical_values(param, nmax)
    _emit(args, _table(args, fio.RADIAL_HEADER, _complex_rows(range(nmax + 1), seq.values)))
    return 0


def cmd_transform(args, cfg):
    x = fio.read_radial_csv(args.input, cfg.rank)
    if args.nodes == "gauss":
        thetas = gauss_rule(cfg.rank, cfg.quad or default_quad_size(x.nmax)).nodes
    else:
        thetas = np.linspace(0.0, math.pi, cfg.grid)
    _emit(args, _table(args, fio.TRANSFORM_HEADER, _complex_rows(thetas, transform_angles(x, thetas))))
    return 0


def cmd_invert(args, cfg):
    if args.nmax is None:
        raise DomainError("invert needs --nmax")
    thetas, values = fio.read_transform_csv(args.input)
    K = cfg.quad or default_quad_size(args.nmax)
    x = invert((thetas, values), cfg.rank, args.nmax, K)
    _emit(args, _table(args, fio.RADIAL_HEADER, _complex_rows(range(x.nmax + 1), x.values)))
    return 0


def cmd_quadrature(args, cfg):
    rule = gauss_rule(cfg.rank, cfg.quad or 64)
    _emit(args, _table(args, fio.QUADRATURE_HEADER, [[float(t), float(w)] for t, w in zip(rule.nodes, rule.weights)]))
    return 0


def cmd_convolve(args, cfg):
    if cfg.rank != 2:
        raise DomainError("the explicit convolution is only available for r = 2")
    K = cfg.quad or hg.DEFAULT_K
    if args.mu or args.nu:
        if not (args.mu and args.nu):
            raise DomainError("give both --mu and --nu")
        m = hg.convolve_measures(fio.read_measure_json(args.mu), fio.read_measure_json(args.nu), K)
    else:
        if args.theta1 is None or args.theta2 is None:
            raise DomainError("give --theta1 and --theta2, or --mu and --nu")
        m = hg.convolve_points(parse_parameter(args.theta1, 2), parse_parameter(args.theta2, 2))
    doc = fio.measure_to_json(m, K)
    if args.out:
        fio.atomic_write_text(args.out, doc)
        thetas = np.linspace(0.0, math.pi, cfg.grid)
        dens = fio.transform_to_csv(thetas, m.density_at(thetas))
        fio.atomic_write_text(Path(args.out).with_suffix(".density.csv"), dens)
    else:
        sys.stdout.write(doc)
    return 0


def cmd_opnorm(args, cfg):
    if args.ball is None:
        raise DomainError("opnorm needs --ball N")
    x = fio.read_function_csv(args.input, cfg.rank)
    stats = opnorm_stats(x, args.ball, args.iters, cfg.seed, cfg.ball_cap, cfg.grid)
    _emit(args, json.dumps(stats, indent=2) + "\n")
    return 0


def cmd_verify(args, cfg):
    timings: dict = {}
    checks = vf.run(args.suite, cfg, inject_fault=args.inject_fault, timings=timings)
    report = vf.summary(checks)
    text = "\n".join(c.line() for c in checks)
    tally = f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed"
    times = ", ".join(f"{k} {v:.1f}s" for k, v in timings.items())
    if args.format == "json" and not args.out:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        print(text)
        print(f"{tally} ({times})")
        if args.out:
            fio.atomic_write_text(args.out, json.dumps(report, indent=2) + "\n")
    return 0 if report["passed"] else 1


def cmd_plot(args, cfg):
    if not args.out:
        raise DomainError("plot needs --out PREFIX")
    prefix = Path(args.out)
    thetas = np.linspace(0.0, math.pi, cfg.grid)
    if args.kind == "plancherel":
        if cfg.rank != 2:
            raise DomainError("the closed-form Plancherel density is only available for r = 2")
        y = plancherel_density_r2(thetas)
        csv_text = fio.rows_to_csv(["theta", "density"], [[fio.fmt(t), fio.fmt(v)] for t, v in zip(thetas, y)])
        svg = line_plot([(thetas, y, "dm/dtheta")], "Plancherel density (r = 2)", "theta", "density")
    elif args.kind == "kernel":
        a, b = parse_parameter(args.theta1, 2), parse_parameter(args.theta2, 2)
        m = hg.convolve_points(a, b)
        y = m.density_at(thetas)
        csv_text = fio.transform_to_csv(thetas, y)
        svg = line_plot([(thetas, y.real, "s(t1, t2, .)")], f"kernel for {a}, {b}", "theta3", "density")
    elif args.kind == "spectrum":
        if not args.input:
            raise DomainError("spectrum plot needs a radial CSV input")
        x = fio.read_radial_csv(args.input, cfg.rank)
        y = transform_angles(x, thetas)
        csv_text = fio.rows_to_csv(
            ["theta", "re", "im", "abs"],
            [[fio.fmt(t), fio.fmt(v.real), fio.fmt(v.imag), fio.fmt(abs(v))] for t, v in zip(thetas, y)],
        )
        title = f"spherical transform, sup = {gelfand_norm(x, cfg.grid):.10g}"
        svg = line_plot([(thetas, np.abs(y), "|x_hat|")], title, "theta", "|x_hat|")
    else:
        nmax = 80 if args.nmax is None else args.nmax
        param = parse_parameter(args.param, cfg.rank)
        if param.kind != "real":
            raise DomainError("tails are plotted for real parameters")
        a = xi_l3_tail(cfg.rank, nmax)
        b = l2eps_tail(param.value, args.eps, nmax, cfg.rank).partial_sums
        n = np.arange(nmax + 1)
        csv_text = fio.rows_to_csv(["n", "xi_l3_partial", "l2eps_partial"],
                                   [[int(k), fio.fmt(u), fio.fmt(v)] for k, u, v in zip(n, a, b)])
        svg = line_plot([(n, a, "xi^3"), (n, b, f"|p|^(2+{args.eps:g})")], "partial sums", "n", "sum")
    csv_path = prefix.with_name(prefix.name + ".csv")
    svg_path = prefix.with_name(prefix.name + ".svg")
    fio.atomic_write_text(csv_path, csv_text)
    fio.atomic_write_text(svg_path, svg)
    print(f"wrote {csv_path} and {svg_path}")
    return 0


COMMANDS = {
    "spherical": cmd_spherical,
    "transform": cmd_transform,
    "invert": cmd_invert,
    "quadrature": cmd_quadrature,
    "convolve": cmd_convolve,
    "opnorm": cmd_opnorm,
    "verify": cmd_verify,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except FreeRadialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FormatError.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``fas-secrecy {fig1,fig2,fig3,solve,oracle-check}``.

Exit codes: 0 success, 1 usage error, 2 numeric failure, 3 I/O failure.
"""

import argparse
import csv
import io
import itertools
import os
import sys
from dataclasses import replace

import numpy as np

from . import montecarlo as mc
from .channel import ChannelRealization, PortGrid, build_correlation, factor, sample_realization
from .optimizer import OptimizerError, oracle_ej, solve_all_ports, solve_port
from .rates import (
    GainQuad, PowerAllocation, rate_bar, rate_ej, rate_gn, rate_hat, rate_tilde,
)
from .verify import oracle_check

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

CSV_HEADER = ("scheme", "N", "W", "rho_db", "delta", "realizations", "seed", "mean_rate", "std_err")

FIGURES = {
    "fig1": dict(
        help="secrecy rate versus SNR (W = 5)",
        N=(1, 20, 50), W=(5.0,), rho=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0),
        delta=(0.0,), schemes=("EJ_OPT", "GN_OPT"), axis="rho_db",
    ),
    "fig2": dict(
        help="secrecy rate versus FAS width (rho = 10 dB)",
        N=(5, 10), W=tuple(0.5 * k for k in range(1, 19)), rho=(10.0,),
        delta=(0.0,), schemes=("EJ_OPT", "GN_OPT"), axis="W",
    ),
    "fig3": dict(
        help="secrecy rate versus port count under imperfect Eve CSI (rho = 10 dB)",
        N=(1,) + tuple(range(5, 51, 5)), W=(3.0, 5.0), rho=(10.0,),
        delta=(0.0, 0.1, 0.5), schemes=("EJ_OPT", "EJ_EQUAL_POWER"), axis="N",
    ),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _list(kind):
    def parse(text):
        try:
            return tuple(kind(v) for v in text.split(",") if v.strip())
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad list {text!r}: {exc}") from None
    return parse


def _fmt(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def format_rows(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.scheme.value, r.N, _fmt(r.W), _fmt(r.rho_db), _fmt(r.delta),
                    r.realizations, r.seed, _fmt(r.mean_rate), _fmt(r.std_err)])
    return buf.getvalue()


def _workers(requested):
    env = os.environ.get(mc.THREADS_ENV)
    n = requested if requested is not None else 1
    if env:
        try:
            n = min(n, int(env)) if requested is not None else int(env)
        except ValueError:
            raise UsageError(f"{mc.THREADS_ENV} must be an integer") from None
    return max(1, n)


def figure_rows(name, args):
    fig = FIGURES[name]
    N = args.N or fig["N"]
    W = args.W or fig["W"]
    rho = args.rho or fig["rho"]
    delta = args.delta or fig["delta"]
    schemes = args.schemes or fig["schemes"]
    workers = _workers(args.workers)
    base = dict(realizations=args.realizations, seed=args.seed, sigma1=args.sigma1,
                sigma2=args.sigma2, gn_grid_steps=args.gn_steps)
    sweep = {"rho_db": rho, "W": W, "N": N}[fig["axis"]]
    fixed = [(k, v) for k, v in (("N", N), ("W", W), ("rho_db", rho)) if k != fig["axis"]]
    rows = []
    # outer loops: fixed parameters, delta, scheme; inner loop: the sweep axis
    for combo in itertools.product(*(v for _, v in fixed), delta, schemes):
        params = dict(zip([k for k, _ in fixed], combo[:len(fixed)]))
        d, scheme = combo[len(fixed):]
        try:
            cfg = mc.ExperimentConfig(scheme=scheme, delta=d, **params, **base,
                                      **{fig["axis"]: sweep[0]})
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rows.extend(mc.run_sweep(cfg, fig["axis"], sweep, workers))
    return rows


def cmd_figure(args):
    rows = figure_rows(args.command, args)
    text = format_rows(rows)
    try:
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="ascii", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.out != "-":
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def _single_port(gains):
    h1, h2, g1, g2 = (np.sqrt(v) + 0j for v in gains)
    return ChannelRealization(np.array([h1]), np.array([h2]), complex(g1), complex(g2))


def cmd_solve(args):
    if args.P is not None and args.rho is not None:
        raise UsageError("give either --P or --rho, not both")
    P = args.P if args.P is not None else 10.0 ** ((args.rho if args.rho is not None else 10.0) / 10)
    if not P > 0:
        raise UsageError("--P must be positive")
    if args.gains is not None:
        if len(args.gains) != 4 or any(g < 0 or not np.isfinite(g) for g in args.gains):
            raise UsageError("--gains needs four non-negative numbers gh1,gh2,gg1,gg2")
        real = _single_port(args.gains)
        q = GainQuad(*args.gains)
        res = replace(solve_port(P, q), port=0)
    else:
        try:
            fac = factor(build_correlation(PortGrid(args.N, args.W)))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        real = sample_realization(fac, mc.realization_rng(args.seed, args.index))
        res = solve_all_ports(P, real)
        q = GainQuad.at_port(real, res.port)

    alloc = PowerAllocation(res.p1, res.p2, P)
    out = [
        f"P = {P!r}  ports = {real.N}",
        f"port: {res.port}",
        f"p1 = {res.p1!r}  p2 = {res.p2!r}",
        f"case: {res.case_tag.name}  branch: {res.branch_detail}"
        + (f"  beta = {res.beta!r}" if res.beta is not None else ""),
        f"gains: gh1={q.gh1!r} gh2={q.gh2!r} gg1={q.gg1!r} gg2={q.gg2!r}",
        f"R_hat = {rate_hat(q, alloc)!r}",
        f"R_tilde = {rate_tilde(q, alloc)!r}",
        f"R_bar = {rate_bar(q, alloc)!r}",
        f"R_GN = {rate_gn(q, alloc)!r}",
        f"R_EJ = {rate_ej(q, alloc)!r}",
    ]
    if args.oracle:
        orc = oracle_ej(P, real, steps=args.steps)
        out.append(f"oracle: {orc.value!r} at port {orc.port} (p1={orc.p1!r}, p2={orc.p2!r}); "
                   f"exact - oracle = {res.value - orc.value:.3e}")
    print("\n".join(out))
    return EXIT_OK


def cmd_oracle_check(args):
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    report = oracle_check(args.count, args.seed, args.steps)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_NUMERIC


def build_parser():
    p = _Parser(prog="fas-secrecy", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fig in FIGURES.items():
        f = sub.add_parser(name, help=fig["help"],
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        f.add_argument("--out", default=f"{name}.csv", help="output CSV path, '-' for stdout")
        f.add_argument("--realizations", type=int, default=10_000)
        f.add_argument("--seed", type=int, default=0)
        f.add_argument("--N", type=_list(int), default=None,
                       help=f"port counts (default {','.join(map(str, fig['N']))})")
        f.add_argument("--W", type=_list(float), default=None,
                       help=f"normalised widths (default {','.join(map(str, fig['W']))})")
        f.add_argument("--rho", type=_list(float), default=None,
                       help=f"SNRs in dB (default {','.join(map(str, fig['rho']))})")
        f.add_argument("--delta", type=_list(float), default=None,
                       help=f"Eve CSI uncertainty (default {','.join(map(str, fig['delta']))})")
        f.add_argument("--schemes", type=_list(str), default=None,
                       help=f"schemes (default {','.join(fig['schemes'])})")
        f.add_argument("--sigma1", type=float, default=1.0)
        f.add_argument("--sigma2", type=float, default=1.0)
        f.add_argument("--gn-steps", type=int, default=256)
        f.add_argument("--workers", type=int, default=None,
                       help=f"worker processes (capped by ${mc.THREADS_ENV})")
        f.set_defaults(func=cmd_figure)

    s = sub.add_parser("solve", help="solve one instance and print the details",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    s.add_argument("--gains", type=_list(float), default=None,
                   help="single-port gains gh1,gh2,gg1,gg2 (otherwise sample a channel)")
    s.add_argument("--P", type=float, default=None, help="power budget (linear)")
    s.add_argument("--rho", type=float, default=None, help="SNR in dB, used if --P is absent")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--index", type=int, default=0, help="realization index within the seed")
    s.add_argument("--N", type=int, default=10)
    s.add_argument("--W", type=float, default=5.0)
    s.add_argument("--oracle", action="store_true", help="cross-check with the grid oracle")
    s.add_argument("--steps", type=int, default=2000, help="oracle grid steps")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle-check", help="compare the exact solver with the grid oracle",
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    o.add_argument("--count", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--steps", type=int, default=2000)
    o.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fas-secrecy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OptimizerError, mc.MonteCarloError, ArithmeticError) as exc:
        print(f"fas-secrecy: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"fas-secrecy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

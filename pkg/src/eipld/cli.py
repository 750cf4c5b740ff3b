"""Command-line front end.

Exit status: 0 on success, 1 on usage or input errors, 2 on numerical
failure (non-convergence, underflow, too many failed simulation fits).
"""

import argparse
import json
import sys

import numpy as np

from . import distribution as dist
from .data import BUILTIN_TOKEN, ingest
from .errors import ConvergenceError, EIPLDError, NumericalError, SimulationError
from .estimation import FitConfig
from .families import FAMILIES, COMPARED_FAMILIES, get_family
from .selection import aic, bic, compare, ks_statistic, scores_to_json, scores_to_text
from .simulation import DEFAULT_SIZES, DEFAULT_TRUTHS, run_study

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

CURVES = {
    "pdf": dist.pdf,
    "cdf": dist.cdf,
    "survival": dist.survival,
    "hazard": dist.hazard,
    "revhazard": dist.reversed_hazard,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _g(x):
    return repr(float(x))


def _add_params(p, required=True):
    p.add_argument("--alpha", type=float, required=required)
    p.add_argument("--beta", type=float, required=required)
    p.add_argument("--theta", type=float, required=required)


def _config(args):
    cfg = FitConfig.from_file(args.config) if getattr(args, "config", None) else FitConfig()
    overrides = {}
    if getattr(args, "ci_level", None) is not None:
        overrides["ci_level"] = args.ci_level
    if getattr(args, "restarts", None) is not None:
        overrides["restarts"] = args.restarts
    if overrides:
        cfg = FitConfig(**{**cfg.__dict__, **overrides})
    return cfg


def build_parser():
    parser = _Parser(prog="eipld", description="Exponentiated inverse power Lindley toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("fit", help="maximum-likelihood fit of one family")
    p.add_argument("--data", default=BUILTIN_TOKEN)
    p.add_argument("--family", default="eipld", type=str.upper, choices=list(FAMILIES))
    p.add_argument("--ci-level", type=float, default=None)
    p.add_argument("--config", help="key = value file with FitConfig settings")
    p.add_argument("--out", choices=("text", "json"), default="text")

    p = sub.add_parser("compare", help="fit several families and rank them by AIC")
    p.add_argument("--data", default=BUILTIN_TOKEN)
    p.add_argument("--families", default="all",
                   help="'all' (the seven compared families) or a comma-separated list")
    p.add_argument("--config")
    p.add_argument("--out", choices=("text", "json"), default="text")

    p = sub.add_parser("sample", help="draw random variates")
    p.add_argument("--n", type=int, required=True)
    _add_params(p)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("quantile", help="evaluate the quantile function")
    p.add_argument("--u", type=float, nargs="+", required=True)
    _add_params(p)

    p = sub.add_parser("curve", help="two-column curve data for plotting")
    p.add_argument("--what", choices=tuple(CURVES), default="pdf")
    _add_params(p)
    p.add_argument("--zmin", type=float, default=0.01)
    p.add_argument("--zmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--log", action="store_true", help="log-spaced abscissae")

    p = sub.add_parser("simulate", help="Monte Carlo bias/variance/MSE study")
    _add_params(p, required=False)
    p.add_argument("--sizes", default=",".join(map(str, DEFAULT_SIZES)))
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--config")
    p.add_argument("--out", choices=("text", "json"), default="text")
    return parser


def _params(args):
    return dist.Params(args.alpha, args.beta, args.theta)


def cmd_fit(args, out):
    data = ingest(args.data)
    cfg = _config(args)
    from .estimation import fit_mle
    fit = fit_mle(args.family, data, cfg)
    nll = -fit.log_lik
    doc = fit.to_dict()
    doc.update(data=data.label, aic=aic(nll, fit.q), bic=bic(nll, fit.q, data.n),
               ks=ks_statistic(fit.family, fit.estimates, data))
    if args.out == "json":
        json.dump(doc, out, indent=2, allow_nan=True)
        out.write("\n")
    else:
        out.write(f"family\t{fit.family.tag}\nn\t{data.n}\n")
        for k, v in fit.params.items():
            out.write(f"{k}\t{v:.6g}\n")
        out.write(f"-logL\t{nll:.5g}\nAIC\t{doc['aic']:.5g}\nBIC\t{doc['bic']:.5g}\n"
                  f"KS\t{doc['ks']:.4g}\nconverged\t{fit.converged}\n")
        if fit.ci:
            for c in fit.ci:
                out.write(f"ci{fit.ci_level:g}\t{c.name}\t{c.lower:.6g}\t{c.upper:.6g}"
                          f"{'  (floored)' if c.floored else ''}\n")
        out.write(f"status\t{fit.message}\n")
    if not fit.converged:
        print(f"warning: {fit.message}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args, out):
    data = ingest(args.data)
    if args.families.strip().lower() == "all":
        fams = COMPARED_FAMILIES
    else:
        fams = [f.strip() for f in args.families.split(",") if f.strip()]
        if not fams:
            raise UsageError("--families is empty")
        for f in fams:
            get_family(f)
    rows = compare(data, fams, _config(args))
    if args.out == "json":
        json.dump(scores_to_json(rows), out, indent=2, allow_nan=True)
        out.write("\n")
    else:
        out.write(scores_to_text(rows))
    return EXIT_OK


def cmd_sample(args, out):
    for v in dist.sample(_params(args), args.n, args.seed):
        out.write(_g(v) + "\n")
    return EXIT_OK


def cmd_quantile(args, out):
    p = _params(args)
    for u in args.u:
        out.write(f"{_g(u)}\t{_g(dist.quantile(p, u))}\n")
    return EXIT_OK


def cmd_curve(args, out):
    if not (0 < args.zmin < args.zmax) or args.points < 2:
        raise UsageError("need 0 < zmin < zmax and points >= 2")
    grid = (np.geomspace if args.log else np.linspace)(args.zmin, args.zmax, args.points)
    ys = np.atleast_1d(CURVES[args.what](_params(args), grid))
    for x, y in zip(grid, ys):
        out.write(f"{_g(x)}\t{_g(y)}\n")
    return EXIT_OK


def cmd_simulate(args, out):
    given = [args.alpha, args.beta, args.theta]
    if all(v is None for v in given):
        truths = DEFAULT_TRUTHS
    elif any(v is None for v in given):
        raise UsageError("give all of --alpha --beta --theta, or none for the default truths")
    else:
        truths = (_params(args),)
    try:
        sizes = tuple(int(s) for s in args.sizes.split(",") if s.strip())
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    cfg = _config(args)
    reports = [run_study(t, sizes, args.reps, args.seed, cfg, workers=args.workers) for t in truths]
    if args.out == "json":
        json.dump([r.to_dict() for r in reports], out, indent=2)
        out.write("\n")
    else:
        for r in reports:
            a, b, t = r.truth.as_tuple()
            out.write(f"# truth alpha={a:g} beta={b:g} theta={t:g} reps={r.replications} seed={r.master_seed}\n")
            out.write(r.to_text())
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "compare": cmd_compare,
    "sample": cmd_sample,
    "quantile": cmd_quantile,
    "curve": cmd_curve,
    "simulate": cmd_simulate,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"eipld: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ConvergenceError, SimulationError) as exc:
        print(f"eipld: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except EIPLDError as exc:
        print(f"eipld: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()


"""Command-line interface.

Subcommands: ``kernel eval``, ``kernel table``, ``embed``, ``embed radial``,
``wce``, ``search``, ``complexity`` and ``recover``. Tables are CSV with a
header and 17 significant digits; reports are flat JSON objects.

Exit codes: 0 ok, 2 usage or domain error, 3 consistency failure (oracle
mismatch, failed bound check), 4 numerical failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import contextlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .embedding import embedding_bound_radial, embedding_bounds_sobolev, embedding_norm
from .errors import ConsistencyError, DomainError, NumericalError
from .fourier_oracle import QuadratureConfig, eval_fourier_batch
from .kernels_closed import KernelSpec, kernel_pairs
from .qmc import (Density, PointSet, info_complexity_bound, search_point_set,
                  sobolev_complexity_cap, worst_case_error)
from .recovery import eval_spline, fit_spline
from .weights import MultiIndexWeights

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY, EXIT_NUMERICAL = 0, 2, 3, 4
FAMILIES = ("sobolev1d", "sobolev", "sobolevinf", "tensor", "matern", "gaussian", "weighted")
WEIGHT_SCHEMES = ("unit", "isotropic_hs", "gaussian_infinity")
CONFIG_SECTION = "sobker"


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "PASS" if v else "FAIL"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def write_csv(stream, header, rows) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def write_json(stream, obj: dict) -> None:
    clean = {k: (float(v) if isinstance(v, np.floating) else v) for k, v in obj.items()}
    stream.write(json.dumps(clean, sort_keys=False) + "\n")


def _open_out(path: str | None):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="")


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in str(text).split(",") if v.strip()], dtype=float)
    except ValueError as exc:
        raise DomainError(f"cannot parse vector {text!r}") from exc


def read_rows(path: str) -> np.ndarray:
    """Numeric CSV rows; a non-numeric first row is taken as a header."""
    rows = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                if i == 0 and not rows:
                    continue
                raise DomainError(f"{path}: non-numeric row {i + 1}: {row}")
    if not rows:
        raise DomainError(f"{path}: no data rows")
    if len({len(r) for r in rows}) != 1:
        raise DomainError(f"{path}: rows have different lengths")
    return np.array(rows)


# kernel specs from flags

def _int_s(args) -> int:
    if args.s is None:
        raise DomainError(f"--s is required for family {args.family}")
    if not float(args.s).is_integer():
        raise DomainError(f"family {args.family} needs an integer s, got {args.s}")
    return int(args.s)


def build_spec(args) -> KernelSpec:
    fam, d = args.family, args.d
    if fam == "sobolev1d":
        if d not in (None, 1):
            raise DomainError("sobolev1d is univariate; use --d 1 or omit it")
        return KernelSpec.sobolev_univariate(_int_s(args))
    d = 1 if d is None else d
    if fam == "sobolev":
        return KernelSpec.sobolev_fourier(d, _int_s(args))
    if fam == "sobolevinf":
        return KernelSpec.sobolev_infinity(d)
    if fam == "tensor":
        return KernelSpec.tensor_sobolev(d, _int_s(args))
    if fam == "matern":
        if args.s is None:
            raise DomainError("--s is required for family matern")
        return KernelSpec.matern(d, args.s)
    if fam == "gaussian":
        return KernelSpec.gaussian(d)
    if fam == "weighted":
        scheme = getattr(args, "weights", "unit")
        if scheme == "gaussian_infinity":
            w = MultiIndexWeights.gaussian_infinity(d, truncation=args.truncation)
        elif scheme == "isotropic_hs":
            w = MultiIndexWeights.isotropic_hs(d, _int_s(args))
        else:
            w = MultiIndexWeights.unit(d, _int_s(args))
        return KernelSpec.weighted(w)
    raise DomainError(f"unknown family {fam!r}")


def build_density(args, d: int) -> Density:
    if args.density == "gaussian":
        return Density.standard_gaussian(d, rng_seed=args.seed)
    lo = parse_vector(args.lo) if args.lo is not None else np.zeros(d)
    hi = parse_vector(args.hi) if args.hi is not None else np.ones(d)
    if len(lo) == 1 and d > 1:
        lo = np.full(d, lo[0])
    if len(hi) == 1 and d > 1:
        hi = np.full(d, hi[0])
    return Density.uniform_box(lo, hi, rng_seed=args.seed)


def _quad_cfg(args) -> QuadratureConfig:
    return QuadratureConfig(target_abs_tol=args.oracle_tol)


# commands

def cmd_kernel_eval(args) -> int:
    spec = build_spec(args)
    x, t = parse_vector(args.x), parse_vector(args.t)
    if len(x) != spec.d or len(t) != spec.d:
        raise DomainError(f"--x and --t need {spec.d} coordinates")
    if spec.has_closed_form:
        value = float(kernel_pairs(spec, x[None], t[None])[0])
    else:
        value = float(eval_fourier_batch(spec.symbol_function(), (x - t)[None], _quad_cfg(args))[0][0])
    if not args.oracle:
        print(fmt(value))
        return EXIT_OK
    ov, err = eval_fourier_batch(spec.symbol_function(), (x - t)[None], _quad_cfg(args))
    diff = abs(value - ov[0])
    ok = diff <= args.tol
    write_csv(sys.stdout, ["value", "oracle", "err_est", "abs_diff", "check"],
              [[value, float(ov[0]), float(err[0]), diff, ok]])
    if not ok:
        raise ConsistencyError(f"closed form and oracle differ by {diff:.3g} > {args.tol:g}")
    return EXIT_OK


def cmd_kernel_table(args) -> int:
    spec = build_spec(args)
    if not (args.step > 0 and args.rmax >= 0):
        raise DomainError("need --step > 0 and --rmax >= 0")
    count = int(math.floor(args.rmax / args.step + 1e-9)) + 1
    r = np.arange(count) * args.step
    D = np.zeros((count, spec.d))
    D[:, 0] = r
    if spec.has_closed_form:
        vals = kernel_pairs(spec, D, np.zeros_like(D))
    else:
        vals = eval_fourier_batch(spec.symbol_function(), D, _quad_cfg(args))[0]
    header, cols = ["r", "k"], [r, vals]
    bad = 0.0
    if args.oracle:
        ov, err = eval_fourier_batch(spec.symbol_function(), D, _quad_cfg(args))
        diff = np.abs(vals - ov)
        bad = float(diff.max())
        header += ["oracle", "err_est", "abs_diff"]
        cols += [ov, err, diff]
    with _open_out(args.out) as out:
        write_csv(out, header, zip(*cols))
    if args.oracle and bad > args.tol:
        raise ConsistencyError(f"closed form and oracle differ by up to {bad:.3g} > {args.tol:g}")
    return EXIT_OK


def _parse_range(text: str) -> range:
    try:
        a, b = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise DomainError(f"--d-range must look like a:b, got {text!r}") from exc
    if a < 1 or b < a:
        raise DomainError(f"invalid dimension range {text!r}")
    return range(a, b + 1)


def cmd_embed(args) -> int:
    if args.mode == "radial":
        if args.d is None or args.s is None:
            raise DomainError("embed radial needs --d and --s")
        beta = args.beta if args.beta is not None else 2 * args.s - args.d
        bound = embedding_bound_radial(args.d, args.s, beta)
        write_csv(sys.stdout, ["d", "s", "beta", "bound"], [[args.d, float(args.s), float(beta), bound]])
        return EXIT_OK
    dims = _parse_range(args.d_range) if args.d_range else range(args.d or 1, (args.d or 1) + 1)
    rows, all_ok = [], True
    for d in dims:
        b = embedding_bounds_sobolev(d)
        ok = b.chain_holds()
        all_ok &= ok
        rows.append([d, b.lower, b.mid, b.upper, b.cap, ok])
    with _open_out(args.out) as out:
        write_csv(out, ["d", "lower", "mid", "upper", "cap", "chain"], rows)
    if not all_ok:
        failed = [r[0] for r in rows if not r[-1]]
        raise ConsistencyError(f"bound chain fails for d in {failed}")
    return EXIT_OK


def cmd_wce(args) -> int:
    spec = build_spec(args)
    pts = read_rows(args.points)
    rho = build_density(args, spec.d)
    rep = worst_case_error(spec, rho, PointSet(pts), mc_samples=args.mc, method=args.method)
    write_json(sys.stdout, {"family": spec.family.value, "d": spec.d, "density": rho.kind,
                            "seed": args.seed, "mc_samples": args.mc, **rep.as_dict()})
    return EXIT_OK


def cmd_search(args) -> int:
    spec = build_spec(args)
    rho = build_density(args, spec.d)
    ps, rep = search_point_set(spec, rho, args.n, args.trials, seed=args.seed,
                               mc_samples=args.mc, method=args.method)
    bound = embedding_norm(spec) / math.sqrt(args.n)
    ok = rep.e <= bound + 3 * rep.mc_std_err
    if args.out:
        with _open_out(args.out) as out:
            write_csv(out, [f"x{j + 1}" for j in range(spec.d)], ps.points.tolist())
    write_json(sys.stdout, {"family": spec.family.value, "d": spec.d, "density": rho.kind,
                            "n": args.n, "trials": args.trials, "seed": args.seed,
                            "generator": ps.generator, **rep.as_dict(),
                            "bound": bound, "check": "PASS" if ok else "FAIL"})
    if not ok:
        raise ConsistencyError(f"best error {rep.e:.6g} exceeds ||I||/sqrt(n) = {bound:.6g}")
    return EXIT_OK


def cmd_complexity(args) -> int:
    spec = build_spec(args)
    try:
        norm = embedding_norm(spec)
        generic = info_complexity_bound(spec, args.eps)
    except DomainError:
        if spec.d <= 3:
            raise
        norm, generic = float("nan"), "NA"
    cap = sobolev_complexity_cap(spec.d, args.eps) if args.family in ("sobolev", "sobolev1d") else "NA"
    write_csv(sys.stdout, ["family", "d", "s", "eps", "norm", "generic", "cap"],
              [[args.family, spec.d, "inf" if spec.s is None else fmt(float(spec.s)), float(args.eps),
                norm, generic, cap]])
    return EXIT_OK


def cmd_recover(args) -> int:
    spec = build_spec(args)
    data = read_rows(args.data)
    if data.shape[1] != spec.d + 1:
        raise DomainError(f"{args.data}: expected {spec.d} coordinates and a value per row")
    model = fit_spline(spec, data[:, :-1], data[:, -1])
    prefix = args.out_prefix
    coord = [f"x{j + 1}" for j in range(spec.d)]
    with open(f"{prefix}_coeffs.csv", "w", newline="") as out:
        write_csv(out, coord + ["y", "alpha"],
                  [list(p) + [y, a] for p, y, a in zip(model.points.points, model.values, model.coeffs)])
    summary = {"family": spec.family.value, "d": spec.d, "n": model.points.n, "norm": model.norm,
               "jitter_used": model.jitter_used, "residual": model.residual,
               "coeffs_file": f"{prefix}_coeffs.csv"}
    if args.probe:
        probe = read_rows(args.probe)[:, :spec.d]
        vals = np.atleast_1d(eval_spline(model, probe))
        with open(f"{prefix}_probe.csv", "w", newline="") as out:
            write_csv(out, coord + ["f"], [list(p) + [v] for p, v in zip(probe, vals)])
        summary["probe_file"] = f"{prefix}_probe.csv"
    write_json(sys.stdout, summary)
    return EXIT_OK


# parser

def _family_flags(p, required=True):
    p.add_argument("--family", choices=FAMILIES, required=required, default=None if required else "sobolev")
    p.add_argument("--d", type=int, default=None, help="dimension (default 1)")
    p.add_argument("--s", type=float, default=None, help="smoothness order")
    p.add_argument("--weights", choices=WEIGHT_SCHEMES, default="unit", help="weight scheme for --family weighted")
    p.add_argument("--truncation", type=int, default=40, help="truncation order of gaussian_infinity weights")


def _density_flags(p):
    p.add_argument("--density", choices=("gaussian", "uniform"), default="gaussian")
    p.add_argument("--lo", default=None, help="uniform box lower corner, comma separated")
    p.add_argument("--hi", default=None, help="uniform box upper corner, comma separated")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mc", type=int, default=100_000, help="Monte Carlo sample count")
    p.add_argument("--method", choices=("auto", "closed", "quadrature", "mc"), default="auto")


def _oracle_flags(p):
    p.add_argument("--oracle", action="store_true", help="compare against the quadrature oracle")
    p.add_argument("--tol", type=float, default=1e-7, help="allowed |closed form - oracle|")
    p.add_argument("--oracle-tol", type=float, default=1e-9, help="target accuracy of the oracle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sobker", description="Reproducing kernels of Sobolev spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="key = value file supplying flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    kern = sub.add_parser("kernel", help="evaluate or tabulate a kernel")
    ksub = kern.add_subparsers(dest="action", required=True)
    ev = ksub.add_parser("eval", help="K(x, t) at one pair of points")
    _family_flags(ev)
    ev.add_argument("--x", required=True)
    ev.add_argument("--t", required=True)
    _oracle_flags(ev)
    ev.set_defaults(func=cmd_kernel_eval)
    tb = ksub.add_parser("table", help="CSV of K(r e_1, 0) on a grid of r")
    _family_flags(tb)
    tb.add_argument("--rmax", type=float, required=True)
    tb.add_argument("--step", type=float, required=True)
    tb.add_argument("--out", default=None)
    _oracle_flags(tb)
    tb.set_defaults(func=cmd_kernel_table)

    em = sub.add_parser("embed", help="embedding-constant bounds")
    em.add_argument("mode", nargs="?", choices=("chain", "radial"), default="chain")
    em.add_argument("--d-range", default=None, help="dimensions a:b for the bound chain")
    em.add_argument("--d", type=int, default=None)
    em.add_argument("--s", type=float, default=None)
    em.add_argument("--beta", type=float, default=None, help="default 2s - d")
    em.add_argument("--out", default=None)
    em.set_defaults(func=cmd_embed)

    wc = sub.add_parser("wce", help="worst-case error of an equal-weight rule")
    _family_flags(wc)
    _density_flags(wc)
    wc.add_argument("--points", required=True, help="CSV file with one point per row")
    wc.set_defaults(func=cmd_wce)

    se = sub.add_parser("search", help="best of random i.i.d. point sets")
    _family_flags(se)
    _density_flags(se)
    se.add_argument("--n", type=int, required=True)
    se.add_argument("--trials", type=int, default=50)
    se.add_argument("--out", default=None, help="write the best point set here")
    se.set_defaults(func=cmd_search)

    co = sub.add_parser("complexity", help="information-complexity bounds")
    _family_flags(co, required=False)
    co.add_argument("--eps", type=float, required=True)
    co.set_defaults(func=cmd_complexity)

    rc = sub.add_parser("recover", help="minimal-norm interpolation from data files")
    _family_flags(rc)
    rc.add_argument("--data", required=True, help="CSV rows: coordinates then value")
    rc.add_argument("--probe", default=None, help="CSV rows of points to evaluate")
    rc.add_argument("--out-prefix", default="recover")
    rc.set_defaults(func=cmd_recover)
    return parser


def _subparser_for(parser, argv):
    """The innermost subparser selected by ``argv``."""
    current = parser
    for tok in argv:
        actions = [a for a in current._actions if isinstance(a, argparse._SubParsersAction)]
        if not actions or tok not in actions[0].choices:
            continue
        current = actions[0].choices[tok]
    return current


def load_config(path: str) -> dict:
    """Flat ``key = value`` pairs; quotes around values are dropped."""
    text = Path(path).read_text()
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.read_string(f"[{CONFIG_SECTION}]\n" + text)
    out = {}
    for key, val in cp.items(CONFIG_SECTION):
        val = val.strip().strip('"').strip("'")
        out[key.replace("-", "_")] = val
    return out


def _parse(argv):
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            cfg = load_config(known.config)
        except (OSError, configparser.Error) as exc:
            parser.error(f"cannot read config file: {exc}")
        target = _subparser_for(parser, argv)
        dests = {a.dest: a for a in target._actions}
        unknown = sorted(set(cfg) - set(dests))
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        for key, val in cfg.items():
            action = dests[key]
            if isinstance(action, argparse._StoreTrueAction):
                val = val.lower() in ("1", "true", "yes", "on")
            action.required = False
            action.default = val
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

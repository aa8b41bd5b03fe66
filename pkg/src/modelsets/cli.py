"""Command-line front end.

Every command prints a JSON report on stdout and, with ``--out DIR``, also
writes it (plus any CSV) there.  Exit codes: 0 success, 1 unknown command,
2 bad config or failed precondition, 3 instance guard exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import density as dens
from . import meyer, progressions, vdw
from .cps import GuardExceeded, enumerate_model_set, is_member
from .io import (
    ConfigError,
    dump_json,
    encode_number,
    load_config,
    parse_element,
    parse_number,
    write_pointset_csv,
)
from .windows import Interval

EXIT_OK, EXIT_UNKNOWN, EXIT_PRECONDITION, EXIT_GUARD = 0, 1, 2, 3


def _region(args, cfg, default):
    if args.region is not None:
        return tuple(parse_number(v, "--region", None) for v in args.region)
    if cfg.region is not None:
        return cfg.region
    return default


def _point(text, cfg):
    if cfg.cps.ring is not None:
        return parse_element(text, cfg.cps.ring)
    return tuple(int(v) for v in text.split(","))


def _emit(args, name: str, report: dict, extra: dict | None = None) -> dict:
    text = dump_json(report)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{name}.json").write_text(text)
        for fname, body in (extra or {}).items():
            (out / fname).write_text(body)
    return report


# -- commands --------------------------------------------------------------------------

def cmd_generate(args, cfg):
    region = _region(args, cfg, (-50, 50))
    ps = enumerate_model_set(cfg.cps, cfg.window, region)
    csv_text = write_pointset_csv(ps)
    if not args.out:
        sys.stdout.write(csv_text)
        return
    _emit(args, "generate", {"count": len(ps), "region": [float(v) for v in region],
                             "window": str(cfg.window), "cps": str(cfg.cps)}, {"points.csv": csv_text})


def cmd_find_ap(args, cfg):
    region = _region(args, cfg, (-50, 50))
    s = _point(args.start, cfg)
    dw = progressions.difference_window(cfg.cps, cfg.window, s, args.k - 1)
    valid = dw.valid_differences(region)
    ps = enumerate_model_set(cfg.cps, cfg.window, region)
    found = [p for p in progressions.find_aps_bruteforce(ps, args.k) if p.start == dw.anchor]
    _emit(args, "find-ap", {
        "start": encode_number(dw.anchor), "k": args.k,
        "difference_window": str(dw.window),
        "valid_differences": [{"t": encode_number(t), "text": str(t), "phys": float(p)}
                              for t, p in zip(valid.elements(), valid.phys[:, 0])],
        "progressions": [p.to_record() for p in found],
    })


def cmd_certify_ap(args, cfg):
    s = _point(args.start, cfg)
    region = _region(args, cfg, None)
    p = progressions.constructive_ap(cfg.cps, cfg.window, s, args.n, region)
    _emit(args, "certify-ap", {
        "progression": p.to_record(), "witness": str(p.witness),
        "verify_ap": progressions.verify_ap(p.terms()),
        "members": [is_member(cfg.cps, cfg.window, x) for x in p.terms()],
    })


def cmd_diff_window(args, cfg):
    dw = progressions.difference_window(cfg.cps, cfg.window, _point(args.start, cfg), args.n)
    _emit(args, "diff-window", {"start": encode_number(dw.anchor), "n": args.n, "window": str(dw.window)})


def cmd_bounded_gap(args, cfg):
    R = progressions.bounded_gap_radius(cfg.cps, cfg.window, args.n, args.method)
    _emit(args, "bounded-gap", {"n": args.n, "method": args.method, "radius": R})


def cmd_vdw_oracle(args, cfg):
    res = vdw.vdw_number_oracle(args.r, args.k, args.n_max)
    _emit(args, "vdw-oracle", {"r": args.r, "k": args.k, "n_max": args.n_max,
                               "number": res.number, "exceeds": res.exceeds,
                               "witness": [c + 1 for c in res.witness]})


def _centers(count: int, lo: float, hi: float) -> list[float]:
    return [float(v) for v in np.linspace(lo, hi, count)]


def cmd_vdw_experiment(args, cfg):
    R = vdw.model_vdw_radius(cfg.cps, cfg.window, args.r, args.k)
    lo, hi = _region(args, cfg, (-500, 500))
    lo, hi = float(lo), float(hi)
    reach = R.radius + 5
    ps = enumerate_model_set(cfg.cps, cfg.window, (lo - reach, hi + reach))
    cols = [vdw.color(ps, "random", args.r, seed=args.seed + i) for i in range(5)]
    if cfg.cps.internal_dim == 1:
        cols.append(vdw.color(ps, "threshold", args.r, window=cfg.window))
    cert = vdw.certify_model_vdw(cfg.cps, cfg.window, ps, cols, args.k, _centers(args.centers, lo, hi), R)
    report = cert.as_dict()
    report["exact_N"] = R.exact
    _emit(args, "vdw-experiment", report)


def cmd_meyer_check(args, cfg):
    lo, hi = (float(v) for v in _region(args, cfg, (-100, 100)))
    ps = enumerate_model_set(cfg.cps, cfg.window, (2 * lo - abs(hi), 2 * hi + abs(lo)))
    rep = meyer.check_meyer(ps, (lo, hi), gap_threshold=args.gap_threshold)
    _emit(args, "meyer-check", rep.as_dict())


def cmd_find_cover(args, cfg):
    if args.sub_window is None:
        raise ConfigError("--sub-window LO HI is required")
    ring = cfg.cps.ring
    sub_w = Interval(parse_number(args.sub_window[0], "--sub-window", ring),
                     parse_number(args.sub_window[1], "--sub-window", ring))
    lo, hi = (float(v) for v in _region(args, cfg, (-200, 200)))
    pad = (hi - lo)
    sub = enumerate_model_set(cfg.cps, sub_w, (lo - pad, hi + pad))
    full = enumerate_model_set(cfg.cps, cfg.window, (lo - pad, hi + pad))
    F = meyer.find_cover_F(sub, full, (lo, hi))
    _emit(args, "find-cover", {"F": [encode_number(t) for t in F], "size": len(F),
                               "verified": meyer.check_cover(sub, full, F, (lo, hi)),
                               "region": [lo, hi], "sub_window": str(sub_w)})


def _avg(args):
    return dens.AveragingSequence.geometric(args.n_max, args.steps)


def cmd_density(args, cfg):
    avg = _avg(args)
    ps = enumerate_model_set(cfg.cps, cfg.window, avg.region(avg.n_max))
    est = dens.density(ps, avg)
    report = est.as_dict()
    if cfg.cps.ring is not None:
        report["target"] = dens.max_density_check(cfg.cps, cfg.window, avg).target
    _emit(args, "density", report)


def _search(args):
    return tuple(float(v) for v in (args.search or (0, 1000)))


def cmd_almost_periods(args, cfg):
    avg = dens.AveragingSequence((args.n_max,))
    lo, hi = _search(args)
    reach = max(abs(lo), abs(hi))
    lam = enumerate_model_set(cfg.cps, cfg.window, (-args.n_max - 2 * reach - 2, args.n_max + 2 * reach + 2))
    found = dens.almost_periods(lam, args.eps, (lo, hi), avg)
    _emit(args, "almost-periods", {"eps": args.eps, "n": args.n_max, "search": [lo, hi],
                                   "almost_periods": [{"t": encode_number(t), "text": str(t),
                                                       "phys": float(t) if not isinstance(t, tuple) else None,
                                                       "d_B": float(v)} for t, v in found]})


def cmd_verify_p6(args, cfg):
    avg = dens.AveragingSequence((args.n_max,))
    lo, hi = _search(args)
    reach = max(abs(lo), abs(hi))
    pad = (args.n + 2) * reach + 2
    lam = enumerate_model_set(cfg.cps, cfg.window, (-args.n_max - pad, args.n_max + pad))
    rep = dens.verify_p6(lam, args.eps, args.n, avg, (lo, hi), tol=args.tol)
    _emit(args, "verify-p6", rep.as_dict())


def cmd_autocorr(args, cfg):
    cap = tuple(float(v) for v in (args.cap or (-10, 10)))
    reach = max(abs(c) for c in cap)
    lam = enumerate_model_set(cfg.cps, cfg.window, (-args.n - reach - 1, args.n + reach + 1))
    eta = dens.autocorrelation_coeffs(lam, args.n, cap)
    rows = sorted(eta.items(), key=lambda kv: float(kv[0]) if not isinstance(kv[0], tuple) else kv[0])
    _emit(args, "autocorr", {"n": args.n, "cap": list(cap),
                             "eta": [{"z": encode_number(z), "text": str(z),
                                      "value": str(v), "float": float(v)} for z, v in rows]})


def cmd_no3ap(args, cfg):
    if args.set == "integers":
        pts = list(range(0, args.N + 1))
        rep = dens.verify_no_3ap(pts, args.tol)
    else:
        rep = dens.verify_no_3ap(dens.counterexample_set(args.N, args.precision), args.tol)
    report = rep.as_dict()
    report.update({"set": args.set, "N": args.N, "precision": args.precision})
    _emit(args, "no3ap", report)


def cmd_reproduce_figures(args, cfg):
    from .figures import reproduce_figures

    region = _region(args, cfg, (-6, 10))
    out = args.out or "figures"
    paths = reproduce_figures(out, tuple(float(v) for v in region))
    sys.stdout.write(dump_json({"files": paths}))


COMMANDS = {
    "generate": cmd_generate,
    "find-ap": cmd_find_ap,
    "certify-ap": cmd_certify_ap,
    "diff-window": cmd_diff_window,
    "bounded-gap": cmd_bounded_gap,
    "vdw-oracle": cmd_vdw_oracle,
    "vdw-experiment": cmd_vdw_experiment,
    "meyer-check": cmd_meyer_check,
    "find-cover": cmd_find_cover,
    "density": cmd_density,
    "almost-periods": cmd_almost_periods,
    "verify-p6": cmd_verify_p6,
    "autocorr": cmd_autocorr,
    "no3ap": cmd_no3ap,
    "reproduce-figures": cmd_reproduce_figures,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config (default: Fibonacci model set)")
    common.add_argument("--region", nargs=2, metavar=("A", "B"))
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--precision", type=int, default=60, metavar="DIGITS")

    parser = argparse.ArgumentParser(prog="modelsets", description="Arithmetic progressions in model sets.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("find-ap",):
            p.add_argument("--k", type=int, default=5)
            p.add_argument("--start", default="0")
        if name in ("certify-ap", "diff-window"):
            p.add_argument("--start", default="0")
            p.add_argument("--n", type=int, default=4)
        if name == "bounded-gap":
            p.add_argument("--n", type=int, default=4)
            p.add_argument("--method", default="auto", choices=["auto", "closed_form", "window_length", "empirical"])
        if name in ("vdw-oracle", "vdw-experiment"):
            p.add_argument("--r", type=int, default=2)
            p.add_argument("--k", type=int, default=3)
        if name == "vdw-oracle":
            p.add_argument("--n-max", type=int, default=vdw.ORACLE_GUARD)
        if name == "vdw-experiment":
            p.add_argument("--centers", type=int, default=50)
        if name == "meyer-check":
            p.add_argument("--gap-threshold", type=float, default=1e-3)
        if name == "find-cover":
            p.add_argument("--sub-window", nargs=2, metavar=("LO", "HI"))
        if name == "density":
            p.add_argument("--n-max", type=int, default=10_000)
            p.add_argument("--steps", type=int, default=12)
        if name in ("almost-periods", "verify-p6"):
            p.add_argument("--eps", type=float, default=0.25)
            p.add_argument("--n-max", type=int, default=10_000)
            p.add_argument("--search", nargs=2, type=float, metavar=("A", "B"))
        if name == "verify-p6":
            p.add_argument("--n", type=int, default=3)
            p.add_argument("--tol", type=float, default=0.02)
        if name == "autocorr":
            p.add_argument("--n", type=int, default=1000)
            p.add_argument("--cap", nargs=2, type=float, metavar=("A", "B"))
        if name == "no3ap":
            p.add_argument("--N", type=int, default=100)
            p.add_argument("--tol", type=float, default=1e-9)
            p.add_argument("--set", choices=["counterexample", "integers"], default="counterexample")
    return parser


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        build_parser().print_help()
        return EXIT_OK
    if argv[0] not in COMMANDS:
        sys.stderr.write(f"unknown command {argv[0]!r}; choose from {', '.join(COMMANDS)}\n")
        return EXIT_UNKNOWN
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PRECONDITION
    try:
        cfg = load_config(args.config)
        if args.seed is None:
            args.seed = cfg.seed
        COMMANDS[args.command](args, cfg)
    except GuardExceeded as exc:
        sys.stderr.write(f"guard exceeded: {exc}\n")
        return EXIT_GUARD
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command line driver.

Commands::

    pdsweep pade --gamma 1/2 --order 4 [--theta-deg 45] [--provider classical]
    pdsweep solve --config run.ini [--out DIR] [--mode two-way] [--order M] ...
    pdsweep residual FIELD.cfld --config run.ini
    pdsweep convergence [--config base.ini] [--omegas 20pi,40pi] [--orders 3,4] [--jobs N]
    pdsweep render FIELD.cfld --mode abs --out image.pgm

Exit status is 0 on success, 2 for configuration errors and 3 when a sweep
aborts numerically.  Other failures (unreadable files and the like) exit 1.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, parse_config, parse_omega
from .fieldio import FieldFormatError, read_field, render_image, write_csv, write_field, write_pgm
from .pade import PadeError, as_gamma, coefficient_rows, coefficients, rotate
from .residual import relative_residual
from .study import DEFAULT_OMEGAS, DEFAULT_ORDERS, REPORT_COLUMNS, run_convergence
from .sweep import NumericalAbort, sweeper_for

__all__ = ["main", "build_parser", "cmd_pade", "cmd_solve", "cmd_residual", "cmd_convergence",
           "cmd_render"]

EXIT_OK, EXIT_FAILURE, EXIT_CONFIG, EXIT_ABORT = 0, 1, 2, 3
PADE_COLUMNS = ["gamma", "M", "theta_deg", "m", "re_a", "im_a", "re_b", "im_b"]


def _overrides(args) -> dict:
    out = {}
    if getattr(args, "mode", None):
        out["mode"] = args.mode
    if getattr(args, "order", None) is not None:
        out["pade_terms"] = args.order
    if getattr(args, "theta_deg", None) is not None:
        out["theta_deg"] = args.theta_deg
    if getattr(args, "provider", None):
        out["pade_provider"] = args.provider
    if getattr(args, "out", None):
        out["out_dir"] = args.out
    return out


def load_config(args, required: bool = True) -> RunConfig | None:
    if args.config is None:
        if required:
            raise ConfigError("--config is required for this command")
        return None
    cfg = parse_config(args.config)
    over = _overrides(args)
    return cfg.with_(**over) if over else cfg


def cmd_pade(args) -> int:
    theta = math.radians(args.theta_deg if args.theta_deg is not None else 45.0)
    try:
        gamma = as_gamma(args.gamma)
        coeffs = rotate(coefficients(gamma, args.order, args.provider or "classical"), theta)
    except (PadeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(sink, fieldnames=PADE_COLUMNS)
        w.writeheader()
        w.writerows(coefficient_rows(coeffs))
    finally:
        if sink is not sys.stdout:
            sink.close()
    return EXIT_OK


def _write_report(path: Path, reports):
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["field"] + REPORT_COLUMNS)
        w.writeheader()
        for name, rep in reports:
            w.writerow({"field": name, **rep.csv_row()})


def cmd_solve(args) -> int:
    cfg = load_config(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.ini").write_text(cfg.to_ini())
    sweeper = sweeper_for(cfg)
    fields = []
    if cfg.mode == "one-way":
        fields.append(("u_one", sweeper.one_way()))
    else:
        res = sweeper.two_way()
        fields += [("u_one", res.u_one), ("u_two", res.u_two)]
    reports = []
    for name, fld in fields:
        write_field(out / f"{name}.cfld", fld)
        rep = relative_residual(sweeper.medium, cfg.omega, fld, pade_order=cfg.pade_terms,
                                theta_deg=cfg.theta_deg)
        reports.append((name, rep))
        print(f"{name}: {rep}")
    _write_report(out / "residual.csv", reports)
    return EXIT_OK


def cmd_residual(args) -> int:
    cfg = load_config(args)
    fld = read_field(args.field)
    medium = cfg.build_medium()
    if fld.values.shape != medium.domain.shape:
        raise ConfigError(f"field grid {fld.values.shape} does not match the configured medium "
                          f"{medium.domain.shape}")
    rep = relative_residual(medium, cfg.omega, fld, pade_order=cfg.pade_terms,
                            theta_deg=cfg.theta_deg)
    print(rep)
    if args.out:
        _write_report(Path(args.out), [(Path(args.field).stem, rep)])
    return EXIT_OK


def _parse_list(text, conv, what):
    try:
        return tuple(conv(t) for t in text.split(",") if t.strip())
    except (ValueError, ConfigError) as exc:
        raise ConfigError(f"bad {what} list {text!r}: {exc}") from None


def cmd_convergence(args) -> int:
    base = load_config(args, required=False)
    if base is None:
        base = RunConfig(omega=DEFAULT_OMEGAS[0])
    over = _overrides(args)
    over.pop("out_dir", None)
    over.pop("pade_terms", None)
    if over:
        base = base.with_(**over)
    omegas = _parse_list(args.omegas, parse_omega, "frequency") if args.omegas else DEFAULT_OMEGAS
    orders = _parse_list(args.orders, int, "order") if args.orders else DEFAULT_ORDERS
    if not omegas or not orders:
        raise ConfigError("need at least one frequency and one order")
    for M in orders:
        base.with_(pade_terms=M)  # validates every order before any work starts
    out = Path(args.out or Path(base.out_dir) / "convergence")
    table = run_convergence(base, omegas, orders, out, jobs=args.jobs)
    print(table.format())
    return EXIT_OK


def cmd_render(args) -> int:
    fld = read_field(args.field)
    img = render_image(fld, args.mode or "abs")
    out = Path(args.out) if args.out else Path(args.field).with_suffix(f".{args.mode or 'abs'}.pgm")
    write_pgm(out, img)
    if args.csv:
        write_csv(args.csv, fld)
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pdsweep", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pade", help="dump rotated Padé coefficients as CSV")
    sp.add_argument("--gamma", required=True, help="exponent: 1/2, -1/2, 1/4 or -1/4 (write --gamma=-1/2 for negative values)")
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--theta-deg", type=float)
    sp.add_argument("--provider", choices=["classical", "table"])
    sp.add_argument("--out", help="CSV path (default: stdout)")
    sp.set_defaults(func=cmd_pade)

    sp = sub.add_parser("solve", help="one-way or two-way solve")
    sp.add_argument("--config")
    sp.add_argument("--out", help="output directory (overrides [output] out_dir)")
    sp.add_argument("--mode", choices=["one-way", "two-way"])
    sp.add_argument("--order", type=int)
    sp.add_argument("--theta-deg", type=float)
    sp.add_argument("--provider", choices=["classical", "table"])
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("residual", help="relative residual of a stored field")
    sp.add_argument("field")
    sp.add_argument("--config")
    sp.add_argument("--out", help="write the report as CSV")
    sp.set_defaults(func=cmd_residual)

    sp = sub.add_parser("convergence", help="residual table over frequencies and Padé orders")
    sp.add_argument("--config")
    sp.add_argument("--out")
    sp.add_argument("--omegas", help="comma separated, e.g. 20pi,40pi")
    sp.add_argument("--orders", help="comma separated, e.g. 3,4,5,6")
    sp.add_argument("--theta-deg", type=float)
    sp.add_argument("--provider", choices=["classical", "table"])
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_convergence)

    sp = sub.add_parser("render", help="grayscale P5 image of a stored field")
    sp.add_argument("field")
    sp.add_argument("--mode", choices=["real", "abs", "fft"], default="abs")
    sp.add_argument("--out")
    sp.add_argument("--csv", help="also export the field as x,y,re,im CSV")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalAbort as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (FieldFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

"""Frequency and Padé-order convergence studies of the two-way residual.

Each ``(omega, M)`` cell runs a full two-way solve on the configured medium
and records the relative residual of ``u_two``.  Cells are independent, so
they may run in a process pool; every finished cell is appended to
``cells.csv`` at once, so an interrupted study keeps its partial results.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import RunConfig
from .residual import CONE_DELTAS, ResidualReport, observed_order, relative_residual
from .sweep import sweeper_for

__all__ = [
    "DEFAULT_OMEGAS",
    "DEFAULT_ORDERS",
    "REPORT_COLUMNS",
    "ConvergenceTable",
    "run_cell",
    "run_convergence",
]

DEFAULT_OMEGAS = tuple(k * math.pi for k in (20, 40, 80, 160))
DEFAULT_ORDERS = (3, 4, 5, 6)
REPORT_COLUMNS = ["omega", "M", "theta_deg", "rel_residual_pct", "h0_u", "hm2_r"] + [
    f"cone{round(100 * d)}" for d in CONE_DELTAS
]


def run_cell(config: RunConfig) -> ResidualReport:
    """Two-way solve for one configuration and the residual of ``u_two``."""
    sweeper = sweeper_for(config)
    result = sweeper.two_way()
    return relative_residual(sweeper.medium, config.omega, result.u_two,
                             pade_order=config.pade_terms, theta_deg=config.theta_deg)


def _cell_job(config: RunConfig):
    t0 = time.perf_counter()
    report = run_cell(config)
    return config, report, time.perf_counter() - t0


@dataclass
class ConvergenceTable:
    """Residual matrix (percent) keyed by ``(M, omega)`` plus fitted orders."""

    omegas: tuple
    orders: tuple
    reports: dict = field(default_factory=dict)

    def percent(self, M: int, omega: float) -> float:
        return self.reports[(M, omega)].percent

    def row_order(self, M: int) -> float | None:
        if len(self.omegas) < 2:
            return None
        return observed_order((w, self.percent(M, w)) for w in self.omegas)

    def diagonal(self) -> list[tuple[int, float]]:
        return list(zip(self.orders, self.omegas))

    def diagonal_order(self) -> float | None:
        diag = self.diagonal()
        if len(diag) < 2:
            return None
        return observed_order((w, self.percent(M, w)) for M, w in diag)

    def matrix_rows(self) -> list[list]:
        head = ["M"] + [_omega_label(w) for w in self.omegas] + ["observed_order"]
        rows = [head]
        for M in self.orders:
            order = self.row_order(M)
            rows.append([M] + [f"{self.percent(M, w):.6g}" for w in self.omegas]
                        + ["" if order is None else f"{order:.4f}"])
        d = self.diagonal_order()
        rows.append(["diagonal"] + [""] * len(self.omegas) + ["" if d is None else f"{d:.4f}"])
        return rows

    def format(self) -> str:
        rows = self.matrix_rows()
        widths = [max(len(str(r[k])) for r in rows) for k in range(len(rows[0]))]
        return "\n".join("  ".join(str(c).rjust(wd) for c, wd in zip(r, widths)) for r in rows)


def _omega_label(omega: float) -> str:
    k = omega / math.pi
    return f"{k:g}pi" if abs(k - round(k)) < 1e-9 else f"{omega:g}"


def run_convergence(base: RunConfig, omegas=DEFAULT_OMEGAS, orders=DEFAULT_ORDERS, out_dir=None,
                    jobs: int = 1, log=print) -> ConvergenceTable:
    """Run every ``(omega, M)`` cell; write ``cells.csv`` and ``matrix.csv`` under ``out_dir``."""
    omegas, orders = tuple(float(w) for w in omegas), tuple(int(m) for m in orders)
    configs = [base.with_(omega=w, pade_terms=M) for M in orders for w in omegas]
    table = ConvergenceTable(omegas, orders)
    out = Path(out_dir) if out_dir is not None else None
    writer = fh = None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.ini").write_text(base.to_ini())
        fh = (out / "cells.csv").open("w", newline="")
        writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS + ["seconds"])
        writer.writeheader()
        fh.flush()
    try:
        if jobs > 1 and len(configs) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                finished = pool.map(_cell_job, configs)
                for item in finished:
                    _record(table, item, writer, fh, log)
        else:
            for cfg in configs:
                _record(table, _cell_job(cfg), writer, fh, log)
    finally:
        if fh is not None:
            fh.close()
    if out is not None:
        with (out / "matrix.csv").open("w", newline="") as mh:
            csv.writer(mh).writerows(table.matrix_rows())
    return table


def _record(table, item, writer, fh, log):
    cfg, report, seconds = item
    table.reports[(cfg.pade_terms, cfg.omega)] = report
    if writer is not None:
        writer.writerow({**report.csv_row(), "seconds": f"{seconds:.2f}"})
        fh.flush()
    if log is not None:
        log(f"omega={_omega_label(cfg.omega)} M={cfg.pade_terms}: "
            f"{report.percent:.4f}% ({seconds:.1f} s)")

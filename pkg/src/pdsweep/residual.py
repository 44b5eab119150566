"""Helmholtz residuals measured in DFT-based Sobolev norms.

Norms use the periodic 2D DFT by default.  ``basis="dirichlet"`` switches
to the orthonormal sine basis on interior nodes, which has no constant mode
and suits fields that vanish on the boundary frame; it is offered as a
diagnostic because the two conventions differ by a large factor whenever the
field has a sizeable mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.fft import dstn

from .medium import C0, Medium, complex_slowness

__all__ = [
    "CONE_DELTAS",
    "ResidualReport",
    "helmholtz_coefficient",
    "apply_helmholtz",
    "sobolev_norm",
    "cone_fractions",
    "relative_residual",
    "observed_order",
]

CONE_DELTAS = (0.2, 0.4, 0.6, 0.8)


def _values(u):
    return np.asarray(getattr(u, "values", u))


def helmholtz_coefficient(medium: Medium, omega: float) -> np.ndarray:
    """Zeroth-order Helmholtz coefficient ``w^2 s^2 + i w a - a_frac (-i w)^alpha``."""
    s = complex_slowness(medium)
    frac = (-1j * omega) ** medium.alpha
    return omega**2 * s**2 + 1j * omega * medium.a_damp - medium.a_frac * frac


def apply_helmholtz(medium: Medium, omega: float, u) -> np.ndarray:
    """Five-point ``H u`` on interior nodes; the one-node margin is zero."""
    u = _values(u)
    dom = medium.domain
    if u.shape != dom.shape:
        raise ValueError(f"field shape {u.shape} does not match grid {dom.shape}")
    out = np.zeros(dom.shape, dtype=complex)
    c = u[1:-1, 1:-1]
    lap = (u[2:, 1:-1] - 2.0 * c + u[:-2, 1:-1]) / dom.dx**2
    lap += (u[1:-1, 2:] - 2.0 * c + u[1:-1, :-2]) / dom.dy**2
    out[1:-1, 1:-1] = lap + helmholtz_coefficient(medium, omega)[1:-1, 1:-1] * c
    return out


def _angular_frequencies(n: int, d: float) -> np.ndarray:
    # 2 pi m / (n d) for m in [-n/2, n/2), in numpy FFT ordering
    return 2.0 * math.pi * np.fft.fftfreq(n, d)


def sobolev_norm(u, s: float, dx: float | None = None, dy: float | None = None,
                 basis: str = "periodic") -> float:
    """``H^s`` norm via the 2D DFT with weight ``(1 + |xi|^2)^s``.

    Normalised so that ``s = 0`` reproduces ``sqrt(dx dy) * ||u||_2``.  The
    periodic basis treats the grid as periodic with period ``n * d`` along
    each axis.  The Dirichlet basis expands the interior nodes in
    ``sin(pi k (x - x0) / ((n - 1) d))`` and ignores the boundary frame.
    """
    if dx is None:
        dx, dy = u.domain.dx, u.domain.dy
    vals = _values(u)
    nx, ny = vals.shape
    if basis == "periodic":
        uh2 = np.abs(np.fft.fft2(vals)) ** 2 / (nx * ny)
        xi_x, xi_y = _angular_frequencies(nx, dx), _angular_frequencies(ny, dy)
    elif basis == "dirichlet":
        inner = vals[1:-1, 1:-1]
        uh2 = np.abs(dstn(inner.real, type=1, norm="ortho")) ** 2
        uh2 += np.abs(dstn(inner.imag, type=1, norm="ortho")) ** 2
        xi_x = math.pi * np.arange(1, nx - 1) / ((nx - 1) * dx)
        xi_y = math.pi * np.arange(1, ny - 1) / ((ny - 1) * dy)
    else:
        raise ValueError(f"basis must be periodic or dirichlet, got {basis!r}")
    weight = (1.0 + xi_x[:, None] ** 2 + xi_y[None, :] ** 2) ** s
    return float(math.sqrt(dx * dy * np.sum(weight * uh2)))


def cone_fractions(u, omega: float, dx: float, dy: float, deltas=CONE_DELTAS,
                   c0: float = C0) -> dict[float, float]:
    """Share of spectral energy outside the cone ``|sigma_perp| <= delta omega / c0``."""
    vals = _values(u)
    energy = np.abs(np.fft.fft2(vals)) ** 2
    total = energy.sum()
    sig_y = np.abs(_angular_frequencies(vals.shape[1], dy))
    per_sigma = energy.sum(axis=0)
    out = {}
    for d in deltas:
        out[d] = float(per_sigma[sig_y > d * omega / c0].sum() / total) if total > 0 else 0.0
    return out


@dataclass
class ResidualReport:
    """Relative residual ``||f - H u||_{H^-2} / ||u||_{H^0}`` plus diagnostics."""

    omega: float
    pade_order: int | None
    h0_norm: float
    hminus2_norm: float
    relative_residual: float
    cone_fraction: dict = field(default_factory=dict)
    theta_deg: float | None = None
    observed_order: float | None = None

    @property
    def percent(self) -> float:
        return 100.0 * self.relative_residual

    def csv_row(self) -> dict:
        row = dict(omega=self.omega, M=self.pade_order, theta_deg=self.theta_deg,
                   rel_residual_pct=self.percent, h0_u=self.h0_norm, hm2_r=self.hminus2_norm)
        for d in CONE_DELTAS:
            row[f"cone{round(100 * d)}"] = self.cone_fraction.get(d, float("nan"))
        return row

    def __str__(self):
        cones = " ".join(f"{k:.1f}:{v:.3g}" for k, v in self.cone_fraction.items())
        return (f"omega={self.omega:.6g} M={self.pade_order} relative residual={self.percent:.4f}% "
                f"|u|_H0={self.h0_norm:.6g} |r|_H-2={self.hminus2_norm:.6g} cone[{cones}]")


def relative_residual(medium: Medium, omega: float, u, f=None, *, pade_order=None,
                      theta_deg=None, basis: str = "periodic") -> ResidualReport:
    """Residual report for ``u``; ``r = f - H u`` is zeroed on the boundary frame."""
    vals = _values(u)
    r = -apply_helmholtz(medium, omega, vals)
    if f is not None:
        r = r + _values(f)
    r[0, :] = r[-1, :] = 0.0
    r[:, 0] = r[:, -1] = 0.0
    dom = medium.domain
    h0 = sobolev_norm(vals, 0.0, dom.dx, dom.dy)
    hm2 = sobolev_norm(r, -2.0, dom.dx, dom.dy, basis)
    rel = hm2 / h0 if h0 > 0 else float("inf")
    return ResidualReport(omega, pade_order, h0, hm2, rel,
                          cone_fractions(vals, omega, dom.dx, dom.dy), theta_deg)


def observed_order(points) -> float:
    """Least-squares slope of ``log(residual)`` against ``log(omega)``."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two (omega, residual) points")
    if np.any(pts <= 0):
        raise ValueError("frequencies and residuals must be positive")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(lx) == 0:
        raise ValueError("degenerate fit: all frequencies equal")
    return float(np.polyfit(lx, ly, 1)[0])

"""Computational grid, material fields, sponge layer and boundary data."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

__all__ = [
    "DomainSpec",
    "Medium",
    "grid_points",
    "build_benchmark_medium",
    "build_homogeneous_medium",
    "complex_slowness",
    "dirichlet_profile",
    "smooth_heaviside",
    "benchmark_wavespeed",
    "benchmark_sponge",
]

C0 = 1.0
SIDE = 1.0


@dataclass(frozen=True)
class DomainSpec:
    """Node-centred rectangular grid; ``x`` is the marching axis.

    Nodes sit at ``x0 + i*dx`` for ``i = 0..nx-1`` and ``y0 + j*dy`` for
    ``j = 0..ny-1`` (boundary nodes included).
    """

    x0: float
    y0: float
    dx: float
    dy: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs at least 2 points per axis, got {self.nx}x{self.ny}")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("grid steps must be positive")

    @property
    def Lx(self) -> float:
        return self.dx * (self.nx - 1)

    @property
    def Ly(self) -> float:
        return self.dy * (self.ny - 1)

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.dy * np.arange(self.ny)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")

    @classmethod
    def centered(cls, nx: int, ny: int, L: float = SIDE) -> "DomainSpec":
        """Square of side ``L`` centred at the origin."""
        return cls(-L / 2, -L / 2, L / (nx - 1), L / (ny - 1), nx, ny)


@dataclass(frozen=True)
class Medium:
    """Material fields on a :class:`DomainSpec`, all shaped ``(nx, ny)``.

    Uniform coefficients are stored as read-only broadcast views, so they cost
    no memory on large grids.
    """

    domain: DomainSpec
    c: np.ndarray
    a_damp: np.ndarray
    a_frac: np.ndarray
    alpha: float
    beta: np.ndarray

    def __post_init__(self):
        shape = self.domain.shape
        for name in ("c", "a_damp", "a_frac", "beta"):
            arr = np.broadcast_to(np.asarray(getattr(self, name), dtype=float), shape)
            object.__setattr__(self, name, arr)
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"fractional exponent must lie in (0, 1), got {self.alpha}")
        if np.min(self.c) <= 0:
            raise ValueError("wavespeed must be positive")
        if np.min(self.a_damp) < 0 or np.min(self.a_frac) < 0 or np.min(self.beta) < 0:
            raise ValueError("damping, attenuation and sponge fields must be non-negative")

    def slowness(self) -> np.ndarray:
        return complex_slowness(self)

    def station(self, i: int) -> "MediumSlice":
        return MediumSlice(
            c=np.asarray(self.c[i]),
            a_damp=np.asarray(self.a_damp[i]),
            a_frac=np.asarray(self.a_frac[i]),
            alpha=self.alpha,
            s=_slowness(self.c[i], self.beta[i]),
        )


@dataclass(frozen=True)
class MediumSlice:
    """Coefficients along one transverse line ``x = x_i``."""

    c: np.ndarray
    a_damp: np.ndarray
    a_frac: np.ndarray
    alpha: float
    s: np.ndarray

    @classmethod
    def uniform(cls, ny: int, c=1.0, a_damp=0.0, a_frac=0.0, alpha=0.5, beta=0.0):
        c = np.full(ny, float(c))
        return cls(c, np.full(ny, float(a_damp)), np.full(ny, float(a_frac)), alpha,
                   _slowness(c, np.full(ny, float(beta))))


def grid_points(ppw: float, omega: float, L: float = SIDE, c0: float = C0) -> int:
    """Node count giving ``ppw`` points per background wavelength across ``L``."""
    cells = ppw * L * omega / (2.0 * math.pi * c0)
    # guard against 2160.0000000000005 -> 2161
    return int(math.ceil(cells - 1e-9 * max(1.0, cells))) + 1


def smooth_heaviside(s):
    return expit(800.0 * np.asarray(s, dtype=float))


def benchmark_wavespeed(x, y):
    """Background speed 1 with a smoothed speed-2 disc of radius 0.1 at the origin."""
    return 1.0 + smooth_heaviside(0.1 - np.hypot(x, y))


def benchmark_sponge(x, y):
    """Linear sponge strength ``0.2(|y| - 0.3)`` outside the strip ``|y| <= 0.3``."""
    ay = np.abs(np.asarray(y, dtype=float))
    beta = np.where(ay > 0.3, 0.2 * (ay - 0.3), 0.0)
    return np.broadcast_to(beta, np.broadcast(np.asarray(x), beta).shape)


def _check_resolution(omega, ppw_x, ppw_y):
    if not omega > 0:
        raise ValueError("omega must be positive")
    if ppw_x < 4 or ppw_y < 4:
        raise ValueError("need at least 4 points per wavelength")


def build_benchmark_medium(omega: float, ppw_x: float = 36, ppw_y: float = 12, *,
                           a_damp: float = 0.01, a_frac: float = 10.0, alpha: float = 0.5,
                           inclusion: bool = True) -> tuple[DomainSpec, Medium]:
    """Unit square centred at the origin with the disc inclusion and y-sponge.

    ``inclusion=False`` gives the same grid, sponge and attenuation with
    ``c = 1`` everywhere.
    """
    _check_resolution(omega, ppw_x, ppw_y)
    domain = DomainSpec.centered(grid_points(ppw_x, omega), grid_points(ppw_y, omega))
    X, Y = domain.mesh()
    c = benchmark_wavespeed(X, Y) if inclusion else 1.0
    beta = benchmark_sponge(domain.x[:, None], domain.y[None, :])
    medium = Medium(domain, c, a_damp, a_frac, alpha, beta)
    return domain, medium


def build_homogeneous_medium(domain: DomainSpec, c: float = 1.0, *, a_damp: float = 0.0,
                             a_frac: float = 0.0, alpha: float = 0.5,
                             sponge: bool = False) -> Medium:
    beta = benchmark_sponge(domain.x[:, None], domain.y[None, :]) if sponge else 0.0
    return Medium(domain, c, a_damp, a_frac, alpha, beta)


def _slowness(c, beta):
    c = np.asarray(c, dtype=float)
    beta = np.asarray(beta, dtype=float)
    s = (1.0 + 1j * beta) / (c * np.sqrt(1.0 + beta**2))
    return np.where(beta == 0.0, (1.0 / c).astype(complex), s)


def complex_slowness(medium: Medium) -> np.ndarray:
    """Sponge-modified slowness ``(1 + i beta) / (c sqrt(1 + beta^2))``."""
    return _slowness(medium.c, medium.beta)


def dirichlet_profile(y, omega: float, c0: float = C0, L: float = SIDE) -> np.ndarray:
    """Gaussian inflow profile ``exp(-i omega L / (2 c0)) exp(-200 y^2)``."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    y = np.asarray(y, dtype=float)
    return np.exp(-1j * omega / c0 * L / 2) * np.exp(-200.0 * y**2)

"""Transverse pseudo-differential operators at a fixed marching station.

Each Padé term ``m`` of a rational symbol costs one complex tridiagonal solve

    (omega^2 s^2 b_m - D_yy) w_m = omega^2 s^2 u

so the term ``omega^2 s^2 a_m / (omega^2 s^2 b_m + sigma^2)`` is applied as
``a_m Op(b_m + sigma^2 / (omega^2 s^2))^{-1}``.  Scaling the right-hand side
(rather than multiplying by ``omega^2 s^2`` after the solve) keeps
``Op(P)1 = P(0)`` exact across sharp transverse jumps in ``s``.  The other
ordering is available as ``ordering="numerator-after"``.

``D_yy`` is the centred second difference closed by first-order Robin
rows ``d_n u = i omega s u`` at both walls.  All ``M`` term systems of one
exponent are stacked into a single block-tridiagonal matrix so one LAPACK
factorisation serves the whole Padé sum.

Sign conventions assume time dependence ``exp(-i omega t)``: the forward
square-root symbol is ``+i omega s`` at normal incidence and both attenuation
symbols have non-positive real part there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import lapack

from .medium import MediumSlice
from .pade import PadeCoefficients, coefficients, rotate

__all__ = [
    "SingularSystemError",
    "TridiagonalSystem",
    "TridiagonalFactor",
    "solve_tridiagonal",
    "second_difference",
    "PadeSet",
    "SymbolBank",
    "frac_factor",
    "apply_sqrt_symbol",
    "apply_order0_symbol",
    "apply_frac_symbol",
    "apply_g",
    "apply_lambda",
]

HALF, MHALF, QUARTER, MQUARTER = Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4), Fraction(-1, 4)


class SingularSystemError(ArithmeticError):
    """A tridiagonal factorisation hit a zero pivot."""


@dataclass(frozen=True)
class TridiagonalSystem:
    """Complex tridiagonal matrix, optionally with cyclic corner entries.

    ``lower_corner`` sits at ``[n-1, 0]`` and ``upper_corner`` at ``[0, n-1]``.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    lower_corner: complex = 0.0
    upper_corner: complex = 0.0

    def __post_init__(self):
        n = len(self.diag)
        if len(self.sub) != n - 1 or len(self.sup) != n - 1:
            raise ValueError("off-diagonals must have length n-1")

    @property
    def n(self) -> int:
        return len(self.diag)

    @property
    def cyclic(self) -> bool:
        return self.lower_corner != 0 or self.upper_corner != 0

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        y = self.diag * x if x.ndim == 1 else self.diag[:, None] * x
        if x.ndim == 1:
            y[:-1] += self.sup * x[1:]
            y[1:] += self.sub * x[:-1]
        else:
            y[:-1] += self.sup[:, None] * x[1:]
            y[1:] += self.sub[:, None] * x[:-1]
        y[-1] += self.lower_corner * x[0]
        y[0] += self.upper_corner * x[-1]
        return y

    def dense(self) -> np.ndarray:
        a = np.diag(np.asarray(self.diag, dtype=complex))
        a += np.diag(self.sub, -1) + np.diag(self.sup, 1)
        a[-1, 0] += self.lower_corner
        a[0, -1] += self.upper_corner
        return a

    def factor(self) -> "TridiagonalFactor":
        return TridiagonalFactor(self)


class TridiagonalFactor:
    """LU factorisation (LAPACK ``gttrf``) reusable across right-hand sides.

    Cyclic systems are handled with a Sherman-Morrison correction on top of the
    factorised tridiagonal part.
    """

    def __init__(self, system: TridiagonalSystem):
        self.system = system
        dl = np.asarray(system.sub, dtype=complex)
        d = np.array(system.diag, dtype=complex)
        du = np.asarray(system.sup, dtype=complex)
        self._corr = None
        if system.cyclic:
            gamma = -d[0] if d[0] != 0 else -1.0
            alpha, beta = complex(system.lower_corner), complex(system.upper_corner)
            d[0] -= gamma
            d[-1] -= alpha * beta / gamma
            u = np.zeros(system.n, dtype=complex)
            u[0], u[-1] = gamma, alpha
            v = np.zeros(system.n, dtype=complex)
            v[0], v[-1] = 1.0, beta / gamma
        self._lu = lapack.zgttrf(dl, d, du)
        if self._lu[-1] != 0:
            raise SingularSystemError(f"zero pivot in tridiagonal factorisation (info={self._lu[-1]})")
        if system.cyclic:
            z = self._solve_plain(u)
            denom = 1.0 + v @ z
            if denom == 0:
                raise SingularSystemError("singular cyclic system")
            self._corr = (v, z, denom)

    def _solve_plain(self, rhs):
        dl, d, du, du2, ipiv, _ = self._lu
        b = np.asarray(rhs, dtype=complex)
        x, info = lapack.zgttrs(dl, d, du, du2, ipiv, b.reshape(len(d), -1))
        if info != 0:
            raise SingularSystemError(f"gttrs failed (info={info})")
        return x.reshape(b.shape)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        x = self._solve_plain(rhs)
        if self._corr is not None:
            v, z, denom = self._corr
            if x.ndim == 1:
                x = x - (v @ x) / denom * z
            else:
                x = x - np.outer(z, (v @ x) / denom)
        return x


def solve_tridiagonal(system: TridiagonalSystem, rhs: np.ndarray) -> np.ndarray:
    """One-shot O(n) solve of ``system @ x = rhs``."""
    return system.factor().solve(rhs)


def second_difference(ny: int, dy: float, wall_k=None, boundary: str = "robin"):
    """Diagonals ``(sub, diag, sup, corner)`` of the discrete ``d^2/dy^2``.

    For ``boundary="robin"`` the wall rows eliminate a ghost node through the
    one-sided condition ``(u_ghost - u_wall)/dy = i k u_wall`` (outward
    normal), with ``wall_k = (k_bottom, k_top)``.  ``"periodic"`` returns the
    cyclic stencil with corner coefficient ``1/dy^2``.
    """
    h2 = 1.0 / dy**2
    sub = np.full(ny - 1, h2, dtype=complex)
    sup = np.full(ny - 1, h2, dtype=complex)
    diag = np.full(ny, -2.0 * h2, dtype=complex)
    corner = 0.0
    if boundary == "robin":
        k0, k1 = wall_k
        diag[0] = -(1.0 - 1j * k0 * dy) * h2
        diag[-1] = -(1.0 - 1j * k1 * dy) * h2
    elif boundary == "periodic":
        corner = h2
    else:
        raise ValueError(f"unknown boundary closure {boundary!r}")
    return sub, diag, sup, corner


@dataclass(frozen=True)
class PadeSet:
    """Rotated coefficient sets for the four exponents used by the symbols."""

    order: int
    theta: float
    provider: str
    sets: dict

    @classmethod
    def build(cls, order: int, theta: float = math.pi / 4, provider: str = "classical") -> "PadeSet":
        sets = {g: rotate(coefficients(g, order, provider), theta) for g in (HALF, MHALF, QUARTER, MQUARTER)}
        return cls(order, theta, provider, sets)

    def __getitem__(self, gamma) -> PadeCoefficients:
        return self.sets[Fraction(gamma)]


def frac_factor(omega: float, alpha: float) -> complex:
    """Principal ``(-i omega)^(alpha - 1)`` for ``omega > 0``."""
    return omega ** (alpha - 1.0) * np.exp(-0.5j * math.pi * (alpha - 1.0))


class SymbolBank:
    """Operators of one station and direction, with cached factorisations.

    Factorisations are built lazily per exponent and shared with the bank
    returned by :meth:`reversed`, whose applications are exact negations.
    """

    def __init__(self, omega: float, medium: MediumSlice, dy: float, pade: PadeSet,
                 direction: str = "forward", boundary: str = "robin", station: int | None = None,
                 ordering: str = "scaled", _cache: dict | None = None):
        if direction not in ("forward", "backward"):
            raise ValueError(f"direction must be forward or backward, got {direction!r}")
        self.omega = float(omega)
        self.medium = medium
        self.dy = float(dy)
        self.pade = pade
        self.direction = direction
        self.boundary = boundary
        self.station = station
        if ordering not in ("scaled", "numerator-after"):
            raise ValueError(f"unknown operator ordering {ordering!r}")
        self.ordering = ordering
        self.ny = len(medium.s)
        self.s = np.asarray(medium.s, dtype=complex)
        self.k2 = (self.omega * self.s) ** 2
        self._cache = {} if _cache is None else _cache

    @property
    def sign(self) -> float:
        return 1.0 if self.direction == "forward" else -1.0

    def reversed(self) -> "SymbolBank":
        other = "backward" if self.direction == "forward" else "forward"
        return SymbolBank(self.omega, self.medium, self.dy, self.pade, other, self.boundary,
                          self.station, self.ordering, _cache=self._cache)

    def term_systems(self, gamma) -> list[TridiagonalSystem]:
        """The ``M`` systems ``omega^2 s^2 b_m - D_yy`` for exponent ``gamma``."""
        coeffs = self.pade[gamma]
        wall_k = (self.omega * self.s[0], self.omega * self.s[-1])
        sub, diag, sup, corner = second_difference(self.ny, self.dy, wall_k, self.boundary)
        return [TridiagonalSystem(-sub, self.k2 * bm - diag, -sup, -corner, -corner) for bm in coeffs.b]

    def _factor(self, gamma):
        key = Fraction(gamma)
        fac = self._cache.get(key)
        if fac is None:
            systems = self.term_systems(key)
            if self.boundary == "periodic":
                fac = [s.factor() for s in systems]
            else:
                zero = np.zeros(1, dtype=complex)
                sub = np.concatenate([np.concatenate([s.sub, zero]) for s in systems])[:-1]
                sup = np.concatenate([np.concatenate([s.sup, zero]) for s in systems])[:-1]
                diag = np.concatenate([s.diag for s in systems])
                fac = TridiagonalSystem(sub, diag, sup).factor()
            self._cache[key] = fac
        return fac

    def solve_terms(self, gamma, u: np.ndarray) -> np.ndarray:
        """Stack of ``w_m`` solving each term system; shape ``(M, ny)``."""
        fac = self._factor(gamma)
        if isinstance(fac, list):
            return np.array([f.solve(u) for f in fac])
        m = len(self.pade[gamma].b)
        return fac.solve(np.tile(np.asarray(u, dtype=complex), m)).reshape(m, self.ny)

    def rational(self, gamma, u: np.ndarray) -> np.ndarray:
        """``Op(a0 - sum omega^2 s^2 a_m / (omega^2 s^2 b_m + sigma^2)) u``.

        With zero transverse variation in ``u`` (periodic closure) this is
        exactly ``P(0) u``, whatever the profile of ``s``.
        """
        coeffs = self.pade[gamma]
        if self.ordering == "scaled":
            w = self.solve_terms(gamma, self.k2 * u)
            return coeffs.a0 * u - np.tensordot(coeffs.a, w, axes=1)
        w = self.solve_terms(gamma, u)
        return coeffs.a0 * u - self.k2 * np.tensordot(coeffs.a, w, axes=1)

    # forward-direction symbols; the public helpers apply the direction sign

    def _sqrt(self, u):
        return 1j * self.omega * self.s * self.rational(HALF, u)

    def _attenuation_weight(self, damp: bool = True, frac: bool = True):
        w = np.zeros(self.ny, dtype=complex)
        if damp:
            w = w + self.medium.a_damp
        if frac:
            w = w + self.medium.a_frac * frac_factor(self.omega, self.medium.alpha)
        return -w / (2.0 * self.s)

    def _lambda(self, u):
        out = self._sqrt(u)
        weight = self._attenuation_weight()
        if np.any(weight != 0):
            out = out + weight * self.rational(MHALF, u)
        return out

    def _apply(self, forward_value):
        return forward_value if self.sign > 0 else -forward_value

    def apply_sqrt(self, u):
        return self._apply(self._sqrt(u))

    def apply_order0(self, u):
        return self._apply(self._attenuation_weight(frac=False) * self.rational(MHALF, u))

    def apply_frac(self, u):
        return self._apply(self._attenuation_weight(damp=False) * self.rational(MHALF, u))

    def apply_lambda(self, u):
        return self._apply(self._lambda(u))

    def apply_g(self, u, sign: int = +1):
        """Integrating factor ``(omega s)^{±1/2}`` times the ``±1/4`` Padé sum."""
        root = np.sqrt(self.omega * self.s)
        if sign > 0:
            return root * self.rational(QUARTER, u)
        return self.rational(MQUARTER, u) / root

    __call__ = apply_lambda


def apply_sqrt_symbol(bank: SymbolBank, u):
    return bank.apply_sqrt(u)


def apply_order0_symbol(bank: SymbolBank, u):
    return bank.apply_order0(u)


def apply_frac_symbol(bank: SymbolBank, u):
    return bank.apply_frac(u)


def apply_g(bank: SymbolBank, u, sign: int = +1):
    return bank.apply_g(u, sign)


def apply_lambda(bank: SymbolBank, u):
    return bank.apply_lambda(u)

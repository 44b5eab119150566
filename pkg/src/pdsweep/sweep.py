"""Heun marching of the one-way equations and the two-way correction.

Marching works on the transformed fields ``u~ = Op(g+) u`` and
``v~ = Op(g-) v``; physical fields are recovered station by station with the
reciprocal factor.  Banks are cached for a few stations so that the corrector
at ``x_i`` and the predictor of the next step share one factorisation.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .medium import DomainSpec, Medium, dirichlet_profile
from .ops import PadeSet, SymbolBank
from .residual import apply_helmholtz

__all__ = [
    "NumericalAbort",
    "Field2D",
    "heun_march",
    "Sweeper",
    "TwoWayResult",
    "solve_one_way",
    "solve_two_way",
]

GROWTH_LIMIT = 1e6


class NumericalAbort(RuntimeError):
    """The march produced non-finite values or blew past the growth guard."""


@dataclass
class Field2D:
    """Complex grid values, shape ``(nx, ny)`` with the x index outermost."""

    domain: DomainSpec
    values: np.ndarray
    omega: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != self.domain.shape:
            raise ValueError(f"values shape {self.values.shape} != grid {self.domain.shape}")

    def __sub__(self, other):
        return Field2D(self.domain, self.values - _vals(other), self.omega)

    def __add__(self, other):
        return Field2D(self.domain, self.values + _vals(other), self.omega)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def _vals(u):
    return getattr(u, "values", u)


def heun_march(operator, nx: int, dx: float, initial, source=None, direction: str = "forward",
               reference_norm: float | None = None, observer=None) -> np.ndarray:
    """Integrate ``du/dx = Op(lambda(x)) u + F`` with Heun's method.

    ``operator(i, u)`` applies the station-``i`` operator; ``source`` is an
    ``(nx, ny)`` array, a callable ``source(i)``, or None.  Backward marching
    starts at ``nx - 1`` and uses a negative step.  ``observer(i, u_i)`` is
    called once per stored station.
    """
    initial = np.asarray(initial, dtype=complex)
    out = np.empty((nx, initial.size), dtype=complex)
    if direction == "forward":
        stations, step = range(nx), dx
    elif direction == "backward":
        stations, step = range(nx - 1, -1, -1), -dx
    else:
        raise ValueError(f"direction must be forward or backward, got {direction!r}")

    if source is None:
        def src(i):
            return 0.0
    elif callable(source):
        src = source
    else:
        arr = _vals(source)
        def src(i):
            return arr[i]

    if reference_norm is None:
        reference_norm = float(np.linalg.norm(initial))
    limit = GROWTH_LIMIT * reference_norm

    it = iter(stations)
    prev = next(it)
    u = initial.copy()
    out[prev] = u
    if observer is not None:
        observer(prev, u)
    for cur in it:
        p = operator(prev, u) + src(prev)
        aux = u + step * p
        q = operator(cur, aux) + src(cur)
        u = u + step * 0.5 * (p + q)
        nrm = np.linalg.norm(u)
        if not np.isfinite(nrm):
            raise NumericalAbort(f"non-finite values at station {cur}")
        if limit > 0 and nrm > limit:
            raise NumericalAbort(f"slice norm {nrm:.3g} at station {cur} exceeds {GROWTH_LIMIT:g} x reference")
        out[cur] = u
        if observer is not None:
            observer(cur, u)
        prev = cur
    return out


@dataclass
class TwoWayResult:
    u_one: Field2D
    u_two: Field2D
    correction: Field2D
    v: Field2D


class Sweeper:
    """Sweeps on a fixed medium, frequency and Padé set."""

    def __init__(self, medium: Medium, omega: float, pade: PadeSet, boundary: str = "robin",
                 ordering: str = "scaled", cache_size: int = 3):
        self.medium = medium
        self.domain = medium.domain
        self.omega = float(omega)
        self.pade = pade
        self.boundary = boundary
        self.ordering = ordering
        self._banks: OrderedDict[int, SymbolBank] = OrderedDict()
        self._cache_size = cache_size

    def bank(self, i: int, direction: str = "forward") -> SymbolBank:
        b = self._banks.get(i)
        if b is None:
            b = SymbolBank(self.omega, self.medium.station(i), self.domain.dy, self.pade,
                           "forward", self.boundary, station=i, ordering=self.ordering)
            self._banks[i] = b
            if len(self._banks) > self._cache_size:
                self._banks.popitem(last=False)
        else:
            self._banks.move_to_end(i)
        return b if direction == "forward" else b.reversed()

    def operator(self, direction: str):
        def op(i, u):
            return self.bank(i, direction).apply_lambda(u)
        return op

    def g(self, i: int, u, sign: int):
        return self.bank(i).apply_g(u, sign)

    def transform(self, field, sign: int) -> np.ndarray:
        """Apply ``Op(g±)`` station by station."""
        vals = _vals(field)
        return np.array([self.g(i, vals[i], sign) for i in range(self.domain.nx)])

    def march_transformed(self, direction: str, initial, source=None, reference_norm=None,
                          recover: int | None = None):
        """March a transformed field; optionally recover with ``Op(g^recover)`` on the fly.

        Returns ``(marched, recovered)``; ``recovered`` is None without ``recover``.
        """
        nx = self.domain.nx
        recovered = np.empty((nx, self.domain.ny), dtype=complex) if recover else None

        def observer(i, u):
            recovered[i] = self.g(i, u, recover)

        marched = heun_march(self.operator(direction), nx, self.domain.dx, initial, source,
                             direction, reference_norm, observer if recover else None)
        return marched, recovered

    def one_way(self, profile=None) -> Field2D:
        """Right-going solution with Dirichlet data ``profile`` at ``x = x0``."""
        if profile is None:
            profile = dirichlet_profile(self.domain.y, self.omega)
        profile = np.asarray(profile, dtype=complex)
        start = self.g(0, profile, +1)
        _, u = self.march_transformed("forward", start, reference_norm=np.linalg.norm(profile),
                                      recover=-1)
        # Dirichlet data is imposed on the physical field itself
        u[0] = profile
        return Field2D(self.domain, u, self.omega)

    def two_way(self, profile=None, u_one: Field2D | None = None) -> TwoWayResult:
        """One-way solution plus one backward/forward reflection correction."""
        if profile is None:
            profile = dirichlet_profile(self.domain.y, self.omega)
        if u_one is None:
            u_one = self.one_way(profile)
        ref = float(np.linalg.norm(profile))
        forcing = -apply_helmholtz(self.medium, self.omega, u_one.values)
        nx, ny = self.domain.shape

        # backward sweep: v~ from the right edge, v~(L) = 0, source Op(g-) F
        v_tilde, v = self.march_transformed(
            "backward", np.zeros(ny, dtype=complex),
            source=lambda i: self.g(i, forcing[i], -1), reference_norm=ref, recover=+1)

        # forward sweep: u~ from zero data, source Op(g+) v
        _, corr = self.march_transformed(
            "forward", np.zeros(ny, dtype=complex),
            source=lambda i: self.g(i, v[i], +1), reference_norm=ref, recover=-1)
        corr[0] = 0.0
        u_two = Field2D(self.domain, u_one.values + corr, self.omega)
        return TwoWayResult(u_one, u_two, Field2D(self.domain, corr, self.omega),
                            Field2D(self.domain, v, self.omega))


def sweeper_for(config) -> Sweeper:
    medium = config.build_medium()
    pade = PadeSet.build(config.pade_terms, math.radians(config.theta_deg), config.pade_provider)
    return Sweeper(medium, config.omega, pade)


def solve_one_way(config) -> Field2D:
    return sweeper_for(config).one_way()


def solve_two_way(config) -> tuple[Field2D, Field2D]:
    res = sweeper_for(config).two_way()
    return res.u_one, res.u_two

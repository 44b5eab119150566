"""Partial-fraction Padé approximants of ``(1 + z)**gamma``.

Coefficients are stored in the form

    P(z) = a0 + sum_m a[m] / (z - b[m])

and can be rotated about the branch point ``z = -1`` so that the poles move
off the real axis.  Two providers exist: :func:`generate_classical` builds the
Taylor-matched ``[M/M]`` approximant for any order up to 8, and
:func:`load_table` returns the four-digit published coefficients for orders
1 to 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

__all__ = [
    "PadeCoefficients",
    "PadeError",
    "SUPPORTED_GAMMAS",
    "as_gamma",
    "generate_classical",
    "load_table",
    "rotate",
    "evaluate",
    "error_scan",
    "exact_error",
    "classical_numerator_denominator",
    "coefficient_rows",
]

SUPPORTED_GAMMAS = (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4), Fraction(-1, 4))
MAX_CLASSICAL_ORDER = 8
MAX_TABLE_ORDER = 4

POLE_TOL = 1e-10
SIMPLE_POLE_SEP = 1e-8
POLE_PROXIMITY = 1e-14


class PadeError(ValueError):
    """Raised for unsupported orders/exponents or degenerate approximants."""


def as_gamma(gamma) -> Fraction:
    """Normalise an exponent given as Fraction, float, int or ``"1/2"``."""
    if isinstance(gamma, Fraction):
        return gamma
    if isinstance(gamma, str):
        return Fraction(gamma.strip())
    return Fraction(gamma).limit_denominator(64)


@dataclass(frozen=True)
class PadeCoefficients:
    """Immutable partial-fraction approximant of ``(1 + z)**gamma``.

    ``a`` and ``b`` hold the residues and poles of the ``order`` terms.  A
    nonzero ``theta`` marks rotated (complex) coefficients.
    """

    gamma: Fraction
    order: int
    theta: float
    a0: complex
    a: np.ndarray
    b: np.ndarray
    provenance: str = "classical-generated"
    # polynomial part, only nonzero for the degree-deficient gamma=1 oracle
    slope: complex = field(default=0.0, repr=False)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a0", complex(self.a0))
        if self.provenance not in ("classical-generated", "paper-table", "oracle"):
            raise PadeError(f"unknown provenance {self.provenance!r}")
        if self.provenance != "oracle" and len(a) != self.order:
            raise PadeError(f"expected {self.order} terms, got {len(a)}")
        if len(a) != len(b):
            raise PadeError("residue and pole arrays differ in length")

    @property
    def terms(self) -> list[tuple[complex, complex]]:
        return list(zip(self.a.tolist(), self.b.tolist()))

    @property
    def is_rotated(self) -> bool:
        return self.theta != 0.0

    def __call__(self, z):
        return evaluate(self, z)

    def __eq__(self, other):
        if not isinstance(other, PadeCoefficients):
            return NotImplemented
        return (
            self.gamma == other.gamma
            and self.order == other.order
            and self.theta == other.theta
            and self.a0 == other.a0
            and self.slope == other.slope
            and self.provenance == other.provenance
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
        )

    def __hash__(self):
        return hash((self.gamma, self.order, self.theta, self.a0, self.provenance,
                     self.a.tobytes(), self.b.tobytes()))


def taylor_coefficients(gamma, n: int) -> list[Fraction]:
    """Exact Taylor coefficients ``c_0..c_{n-1}`` of ``(1 + z)**gamma``."""
    g = as_gamma(gamma)
    out = [Fraction(1)]
    for k in range(1, n):
        out.append(out[-1] * (g - (k - 1)) / k)
    return out


def _solve_exact(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gaussian elimination over the rationals; None when singular."""
    n = len(rhs)
    aug = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / aug[col][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def _refine_root(q: np.ndarray, dq: np.ndarray, z: complex, steps: int = 3) -> complex:
    # q, dq in numpy.polyval order (highest degree first)
    for _ in range(steps):
        d = np.polyval(dq, z)
        if d == 0:
            break
        z = z - np.polyval(q, z) / d
    return z


_DIGITS = 50


def _dec(x: Fraction) -> Decimal:
    return Decimal(x.numerator) / Decimal(x.denominator)


def _horner(coeffs, x):
    # coeffs in ascending order
    acc = Decimal(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _polish_real(p: list[Fraction], q: list[Fraction], root: float) -> tuple[float, float]:
    """Newton-polish a real pole and its residue in 50-digit arithmetic."""
    with localcontext() as ctx:
        ctx.prec = _DIGITS
        qd = [_dec(c) for c in q]
        pd = [_dec(c) for c in p]
        dq = [k * qd[k] for k in range(1, len(qd))]
        x = Decimal(root)
        for _ in range(8):
            step = _horner(qd, x) / _horner(dq, x)
            x -= step
            if abs(step) <= abs(x) * Decimal(10) ** (-_DIGITS + 5):
                break
        return float(x), float(_horner(pd, x) / _horner(dq, x))


def classical_numerator_denominator(gamma, order: int) -> tuple[list[Fraction], list[Fraction]]:
    """Exact ascending coefficients ``(p, q)`` of the ``[M/M]`` approximant, ``q[0] = 1``."""
    g = as_gamma(gamma)
    c = taylor_coefficients(g, 2 * order + 1)
    hankel = [[c[k - j] for j in range(1, order + 1)] for k in range(order + 1, 2 * order + 1)]
    qtail = _solve_exact(hankel, [-c[k] for k in range(order + 1, 2 * order + 1)])
    if qtail is None:
        raise PadeError(f"singular Hankel system for gamma={g}, M={order}")
    q = [Fraction(1)] + qtail
    p = [sum(q[j] * c[k - j] for j in range(k + 1)) for k in range(order + 1)]
    return p, q


def exact_error(gamma, order: int, z) -> float:
    """``|p(z)/q(z) - (1+z)**gamma|`` for the classical approximant, in 50-digit arithmetic.

    Needed where the approximation error drops below double-precision
    resolution of the partial-fraction sum (high order, small ``|z|``).
    """
    g = as_gamma(gamma)
    if g.denominator not in (1, 2, 4):
        raise PadeError(f"exact error supports exponents with denominator 1, 2 or 4, got {g}")
    z = Fraction(z)
    if z <= -1:
        raise PadeError("z must lie inside (-1, inf)")
    p, q = classical_numerator_denominator(g, order)
    with localcontext() as ctx:
        ctx.prec = _DIGITS
        approx = _dec(sum(pk * z**k for k, pk in enumerate(p)) / sum(qk * z**k for k, qk in enumerate(q)))
        root4 = _dec(1 + z).sqrt().sqrt()
        exact = root4 ** (g.numerator * 4 // g.denominator)
        return float(abs(approx - exact))


def generate_classical(gamma, order: int, *, _oracle: bool = False) -> PadeCoefficients:
    """Taylor-matched ``[M/M]`` Padé approximant in partial-fraction form.

    The denominator comes from the Hankel system matching Taylor orders
    ``M+1..2M``; the numerator follows by truncated convolution.  Both are
    computed in exact rational arithmetic.  Poles start from the companion
    eigenvalues; real poles and their residues are then polished in 50-digit
    arithmetic so the partial-fraction sum keeps full double accuracy.
    """
    g = as_gamma(gamma)
    if not (1 <= int(order) <= MAX_CLASSICAL_ORDER) or int(order) != order:
        raise PadeError(f"order must be an integer in [1, {MAX_CLASSICAL_ORDER}], got {order}")
    order = int(order)
    if g not in SUPPORTED_GAMMAS and not (_oracle and g == 1):
        raise PadeError(f"gamma must be one of ±1/2, ±1/4, got {g}")

    p, q = classical_numerator_denominator(g, order)
    if q[-1] == 0:
        if not _oracle:
            raise PadeError(f"degree-deficient denominator for gamma={g}, M={order}")
        return _oracle_fallback(g, order, p, q)

    a0 = p[-1] / q[-1]
    qf = np.array([float(x) for x in q[::-1]])
    pf = np.array([float(x) for x in p[::-1]])
    dq = np.polyder(qf)
    poles = np.array([_refine_root(qf, dq, complex(r)) for r in np.roots(qf)])
    if np.all(np.abs(poles.imag) < POLE_TOL * np.maximum(1.0, np.abs(poles))):
        poles = poles.real.astype(complex)
    poles = poles[np.argsort(poles.real)]
    for i in range(len(poles)):
        for j in range(i + 1, len(poles)):
            if abs(poles[i] - poles[j]) < SIMPLE_POLE_SEP:
                raise PadeError(f"non-simple poles for gamma={g}, M={order}")
    resid = np.polyval(pf, poles) / np.polyval(dq, poles)
    if np.all(poles.imag == 0):
        polished = [_polish_real(p, q, float(r.real)) for r in poles]
        poles = np.array([b for b, _ in polished], dtype=complex)
        resid = np.array([a for _, a in polished], dtype=complex)
    elif np.all(np.abs(resid.imag) < POLE_TOL * np.maximum(1.0, np.abs(resid))):
        resid = resid.real.astype(complex)
    return PadeCoefficients(g, order, 0.0, complex(float(a0)), resid, poles)


def _oracle_fallback(g, order, p, q):
    # Only reached for gamma=1, where the approximant is the polynomial 1 + z.
    pp = np.trim_zeros(np.array([float(x) for x in p[::-1]]), "f")
    qq = np.trim_zeros(np.array([float(x) for x in q[::-1]]), "f")
    quot, rem = np.polydiv(pp, qq)
    if np.any(np.abs(rem) > 0) or len(quot) > 2:
        raise PadeError("oracle mode only supports linear polynomial approximants")
    slope, a0 = (quot[0], quot[1]) if len(quot) == 2 else (0.0, quot[0])
    return PadeCoefficients(g, order, 0.0, a0, [], [], provenance="oracle", slope=slope)


# Published real-valued coefficients, order -> (a0, (a_1..a_M), (b_1..b_M)).
_TABLES: dict[Fraction, dict[int, tuple[float, tuple[float, ...], tuple[float, ...]]]] = {
    Fraction(1, 2): {
        1: (2.8889, (-7.1358,), (-3.7778,)),
        2: (4.7738, (-34.5138, -0.2786), (-9.6264, -1.4778)),
        3: (6.7228, (-98.1129, -1.0233, -0.0723), (-18.7042, -2.4499, -1.2139)),
        4: (8.6939, (-213.677, -2.4055, -0.2410, -0.0303), (-31.0166, -3.8025, -1.6590, -1.1242)),
    },
    Fraction(-1, 2): {
        1: (0.3590, (0.8218,), (-1.2821,)),
        2: (0.2114, (1.0955, 0.4181), (-2.6945, -1.0944)),
        3: (0.1493, (1.4521, 0.4474, 0.2885), (-4.9532, -1.5846, -1.0480)),
        4: (0.1152, (1.8313, 0.5184, 0.2862, 0.2219), (-8.0266, -2.3254, -1.3120, -1.0292)),
    },
    Fraction(1, 4): {
        1: (1.6239, (-1.5572,), (-2.4957,)),
        2: (2.0906, (-5.8925, -0.1638), (-6.0834, -1.3433)),
        3: (2.4805, (-14.0723, -0.4809, -0.0572), (-11.6531, -2.1510, -1.1613)),
        4: (2.8202, (-26.8939, -0.9694, -0.1539, -0.0284), (-19.2030, -3.2899, -1.5524, -1.0952)),
    },
    Fraction(-1, 4): {
        1: (0.6213, (0.5737,), (-1.5149,)),
        2: (0.4794, (1.1826, 0.1945), (-3.3516, -1.1593)),
        3: (0.4035, (1.9393, 0.3201, 0.1095), (-6.2432, -1.7354, -1.0796)),
        4: (0.3547, (2.8260, 0.4555, 0.1670, 0.0734), (-10.1697, -2.5810, -1.3816, -1.0481)),
    },
}


def load_table(gamma, order: int) -> PadeCoefficients:
    """Published four-digit coefficients (orders 1-4 only)."""
    g = as_gamma(gamma)
    if g not in _TABLES or order not in _TABLES[g]:
        raise PadeError(
            f"no published table for gamma={g}, M={order} (tables cover ±1/2, ±1/4 and M <= {MAX_TABLE_ORDER})"
        )
    a0, a, b = _TABLES[g][order]
    return PadeCoefficients(g, order, 0.0, a0, a, b, provenance="paper-table")


def coefficients(gamma, order: int, provider: str = "classical") -> PadeCoefficients:
    """Dispatch on provider name (``classical`` or ``table``)."""
    if provider == "classical":
        return generate_classical(gamma, order)
    if provider == "table":
        return load_table(gamma, order)
    raise PadeError(f"unknown Padé provider {provider!r}")


def rotate(coeffs: PadeCoefficients, theta: float) -> PadeCoefficients:
    """Rotate the branch cut by ``theta`` radians about ``z = -1``.

    ``a0 -> a0 e^{i theta gamma}``, ``a_m -> a_m e^{i theta (1 + gamma)}`` and
    ``b_m -> (1 + b_m) e^{i theta} - 1``.
    """
    if coeffs.is_rotated:
        raise PadeError("coefficients are already rotated")
    theta = float(theta)
    if not 0.0 <= theta <= math.pi / 2:
        raise PadeError(f"theta must lie in [0, pi/2], got {theta}")
    if theta == 0.0:
        return coeffs
    g = float(coeffs.gamma)
    return replace(
        coeffs,
        theta=theta,
        a0=coeffs.a0 * np.exp(1j * theta * g),
        a=coeffs.a * np.exp(1j * theta * (1.0 + g)),
        b=(1.0 + coeffs.b) * np.exp(1j * theta) - 1.0,
    )


def evaluate(coeffs: PadeCoefficients, z):
    """Evaluate ``a0 + sum a_m / (z - b_m)`` at scalar or array ``z``."""
    zz = np.asarray(z, dtype=complex)
    diff = zz[..., None] - coeffs.b
    if diff.size and np.min(np.abs(diff)) < POLE_PROXIMITY:
        raise PadeError("evaluation point coincides with a pole")
    out = coeffs.a0 + coeffs.slope * zz + np.sum(coeffs.a / diff, axis=-1)
    return complex(out) if out.ndim == 0 else out


def error_scan(coeffs: PadeCoefficients, gamma, zmin: float, zmax: float, n: int) -> float:
    """Max ``|P(z) - (1+z)**gamma|`` over ``n`` uniform samples of ``[zmin, zmax]``."""
    if zmin <= -1.0:
        raise PadeError("scan interval must lie inside (-1, inf)")
    if zmax < zmin:
        raise PadeError("zmax < zmin")
    if n < 1 or (n < 2 and zmax != zmin):
        raise PadeError("need at least two samples for a nondegenerate interval")
    z = np.linspace(zmin, zmax, n)
    exact = (1.0 + z) ** float(as_gamma(gamma))
    return float(np.max(np.abs(evaluate(coeffs, z) - exact)))


def coefficient_rows(coeffs: PadeCoefficients) -> list[dict]:
    """CSV-ready rows: m=0 carries a0 with empty b columns."""
    theta_deg = math.degrees(coeffs.theta)
    rows = [dict(gamma=str(coeffs.gamma), M=coeffs.order, theta_deg=theta_deg, m=0,
                 re_a=coeffs.a0.real, im_a=coeffs.a0.imag, re_b="", im_b="")]
    for m, (am, bm) in enumerate(coeffs.terms, start=1):
        rows.append(dict(gamma=str(coeffs.gamma), M=coeffs.order, theta_deg=theta_deg, m=m,
                         re_a=am.real, im_a=am.imag, re_b=bm.real, im_b=bm.imag))
    return rows

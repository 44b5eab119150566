import math

import numpy as np
import pytest

from pdsweep.config import RunConfig
from pdsweep.medium import DomainSpec, build_homogeneous_medium, dirichlet_profile
from pdsweep.ops import PadeSet
from pdsweep.sweep import Field2D, NumericalAbort, Sweeper, heun_march, solve_one_way, sweeper_for

OMEGA = 20 * math.pi


def homogeneous_sweeper(nx=361, ny=121, omega=OMEGA, order=4, boundary="robin", **medium):
    domain = DomainSpec.centered(nx, ny)
    return Sweeper(build_homogeneous_medium(domain, **medium), omega, PadeSet.build(order),
                   boundary=boundary)


def test_zero_operator_keeps_initial_slice():
    init = np.array([1.0, 2.0 - 1j, 3.0])
    out = heun_march(lambda i, u: np.zeros_like(u), 11, 0.1, init)
    assert np.array_equal(out, np.tile(init, (11, 1)))


def test_scalar_march_is_heun_amplification():
    # u' = i k u with 36 points per wavelength
    k, nx = 2 * math.pi, 37
    dx = 1.0 / (nx - 1)
    out = heun_march(lambda i, u: 1j * k * u, nx, dx, np.ones(1))
    y = k * dx
    gain = 1 + 1j * y - y**2 / 2
    assert out[-1, 0] == pytest.approx(gain ** (nx - 1), rel=1e-12)


def test_scalar_march_global_error_is_second_order():
    k = 2 * math.pi
    errs = []
    for nx in (37, 73, 145):
        out = heun_march(lambda i, u: 1j * k * u, nx, 1.0 / (nx - 1), np.ones(1))
        errs.append(abs(out[-1, 0] - np.exp(1j * k)))
    # leading phase lead k L (k dx)^2 / 6
    assert errs[0] == pytest.approx(k * (k / 36) ** 2 / 6, rel=0.05)
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.02)
    assert errs[1] / errs[2] == pytest.approx(4.0, rel=0.02)


def test_backward_march_uses_negative_step():
    out = heun_march(lambda i, u: -u, 3, 0.5, np.ones(1), direction="backward")
    g = 1 + 0.5 + 0.125
    assert out[2, 0] == 1.0 and out[0, 0] == pytest.approx(g * g)


def test_source_forms_agree():
    src = np.arange(10.0)[:, None] * np.ones((10, 2))
    a = heun_march(lambda i, u: 0 * u, 10, 0.1, np.zeros(2), src)
    b = heun_march(lambda i, u: 0 * u, 10, 0.1, np.zeros(2), lambda i: src[i])
    assert np.array_equal(a, b)
    # trapezoid rule integrates the linear source exactly
    assert a[-1, 0] == pytest.approx(0.1 * 81 / 2)


def test_march_rejects_unknown_direction():
    with pytest.raises(ValueError):
        heun_march(lambda i, u: u, 3, 0.1, np.ones(1), direction="up")


def test_growth_guard_aborts():
    with pytest.raises(NumericalAbort):
        heun_march(lambda i, u: 1e3 * u, 10, 1.0, np.ones(2))


def test_non_finite_values_abort():
    with pytest.raises(NumericalAbort):
        heun_march(lambda i, u: u * np.nan, 3, 1.0, np.ones(2), reference_norm=0.0)


def test_damping_factor_over_unit_length():
    # y-uniform slice on a periodic closure isolates the normal-incidence symbol
    ny = 16
    runs = {}
    for a in (0.0, 0.01):
        sw = homogeneous_sweeper(nx=361, ny=ny, boundary="periodic", a_damp=a)
        u = sw.one_way(np.ones(ny, dtype=complex))
        runs[a] = abs(u.values[-1, 0]) / abs(u.values[0, 0])
    assert runs[0.01] / runs[0.0] == pytest.approx(math.exp(-0.005), abs=1e-4)


def test_transformed_energy_never_grows():
    sw = homogeneous_sweeper(sponge=True)
    start = sw.g(0, dirichlet_profile(sw.domain.y, OMEGA), +1)
    marched, _ = sw.march_transformed("forward", start)
    norms = np.linalg.norm(marched, axis=1)
    assert np.max(norms[1:] / norms[:-1]) <= 1 + 1e-3


def test_boundary_compliance_and_outflow():
    sw = homogeneous_sweeper(nx=121, ny=61)
    profile = dirichlet_profile(sw.domain.y, OMEGA)
    res = sw.two_way(profile)
    assert np.array_equal(res.u_one.values[0], profile)
    assert np.array_equal(res.u_two.values[0], profile)
    assert np.all(res.v.values[-1] == 0)
    assert np.all(res.correction.values[0] == 0)
    assert np.array_equal(res.u_two.values, res.u_one.values + res.correction.values)


def test_pipeline_linear_in_boundary_data(rng):
    sw = homogeneous_sweeper(nx=121, ny=61, a_damp=0.01, a_frac=10.0)
    p = dirichlet_profile(sw.domain.y, OMEGA)
    q = rng.normal(size=sw.domain.ny) * np.exp(-50 * sw.domain.y**2)
    a, b = 2.0 - 0.5j, -1.5
    lhs = sw.two_way(a * p + b * q).u_two.values
    rhs = a * sw.two_way(p).u_two.values + b * sw.two_way(q).u_two.values
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(lhs)


def test_one_way_is_deterministic():
    cfg = RunConfig(omega=OMEGA, medium="paper-inclusion")
    a, b = solve_one_way(cfg), solve_one_way(cfg)
    assert np.array_equal(a.values, b.values)


def test_refinement_in_x_is_second_order():
    ny, results = 61, []
    for nx in (361, 721, 1441):
        sw = homogeneous_sweeper(nx=nx, ny=ny)
        results.append(sw.one_way().values[-1])
    d1 = np.linalg.norm(results[0] - results[1])
    d2 = np.linalg.norm(results[1] - results[2])
    assert d1 / d2 == pytest.approx(4.0, rel=0.05)


def test_beam_moves_right_in_homogeneous_medium():
    sw = homogeneous_sweeper()
    u = sw.one_way().values
    # phase advances by about omega dx per station on the beam axis
    j = sw.domain.ny // 2
    step = np.angle(u[101, j] / u[100, j])
    assert step == pytest.approx(OMEGA * sw.domain.dx, rel=0.02)


def test_sweeper_from_config_matches_medium():
    cfg = RunConfig(omega=OMEGA, pade_terms=3, theta_deg=30.0)
    sw = sweeper_for(cfg)
    assert sw.pade.order == 3 and sw.pade.theta == pytest.approx(math.pi / 6)
    assert sw.domain.shape == (361, 121)


def test_field_shape_checked():
    with pytest.raises(ValueError):
        Field2D(DomainSpec.centered(3, 3), np.zeros((3, 4)))


def test_field_arithmetic():
    d = DomainSpec.centered(3, 2)
    f = Field2D(d, np.ones((3, 2)), 1.0)
    g = f + f - f
    assert np.array_equal(g.values, f.values) and g.omega == 1.0
    assert f.norm() == pytest.approx(math.sqrt(6))

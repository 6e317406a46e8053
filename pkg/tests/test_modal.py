import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from conftest import disc
from oracles import beam_roots_oracle, clamped_plate_fd_lambda, free_free_fd_lambda, trapezoid
from piezoxfmr.laminate import Layer, LayerStack
from piezoxfmr.materials import ElasticMaterial
from piezoxfmr.modal import (
    DeviceGeometry,
    beam_char_roots,
    beam_characteristic,
    beam_mode,
    modal_mass,
    modal_overlap,
    mode_of,
    plate_char_roots,
    plate_characteristic,
    plate_mode,
)

BEAM_KINDS = ["bridge_clamped_clamped", "beam_free_free", "beam_cantilever"]


def uniform(kind, L=0.01, w=1e-3, h=1e-4):
    stack = LayerStack((Layer(ElasticMaterial("steel", s11=5e-12, rho=7800.0), h),))
    if kind == "disc_clamped":
        return DeviceGeometry(kind, L, stack, (0.0, 0.3 * L), (0.6 * L, L))
    return DeviceGeometry(kind, L, stack, (0.0, 0.3 * L), (0.6 * L, L), width=w)


def test_clamped_and_free_roots_match_bisection_oracle():
    want = beam_roots_oracle(1.0, 3)
    assert beam_char_roots("clamped_clamped", 3) == pytest.approx(want, abs=1e-10)
    assert beam_char_roots("free_free", 3) == pytest.approx(want, abs=1e-10)
    assert beam_char_roots("clamped_clamped", 3) == pytest.approx([4.7300407449, 7.8532046241, 10.9956078380], abs=1e-9)


def test_cantilever_roots():
    assert beam_char_roots("cantilever", 2) == pytest.approx(beam_roots_oracle(-1.0, 2), abs=1e-10)
    assert beam_char_roots("cantilever", 2) == pytest.approx([1.8751040687, 4.6940911330], abs=1e-9)


def test_cantilever_roots_approach_odd_half_pi_monotonically():
    roots = beam_char_roots("cantilever", 12)
    gaps = [abs(x - (2 * n - 1) * math.pi / 2) for n, x in enumerate(roots, start=1)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-9


def test_plate_roots():
    roots = plate_char_roots(3)
    assert roots == pytest.approx([3.1962206, 6.3064370, 9.4394991], abs=1e-7)
    for lam in plate_char_roots(10):
        ref = special.j0(lam) * special.i1(lam) + special.i0(lam) * special.j1(lam)
        assert abs(ref) / special.i0(lam) < 1e-9
        assert abs(plate_characteristic(lam)) / special.i0(lam) < 1e-9
    spacing = np.diff(plate_char_roots(30))
    assert abs(spacing[-1] - math.pi) < 1e-3
    assert abs(spacing[-1] - math.pi) < abs(spacing[0] - math.pi)


@pytest.mark.parametrize("bc", ["clamped_clamped", "free_free", "cantilever"])
def test_roots_reproduce_characteristic_function(bc):
    roots = beam_char_roots(bc, 8)
    assert all(b > a for a, b in zip(roots, roots[1:]))
    for x in roots:
        # cos cosh -/+ 1 grows like cosh; compare on the scaled form
        assert abs(beam_characteristic(bc, x)) / math.cosh(x) < 1e-9


@pytest.mark.parametrize("kind", BEAM_KINDS)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_beam_boundary_residuals(kind, n):
    g = uniform(kind)
    m = beam_mode(g, n)
    L = g.extent
    xs = np.linspace(0, L, 20001)
    peak = np.max(np.abs(m(xs)))
    assert 1.0 - 1e-6 < peak <= 1.0 + 1e-12

    def res(x, k):
        return abs(float(m.derivative(x, k))) * (L / m.eigenvalue) ** k

    if kind == "bridge_clamped_clamped":
        checks = [(0, 0), (0, 1), (L, 0), (L, 1)]
    elif kind == "beam_free_free":
        checks = [(0, 2), (0, 3), (L, 2), (L, 3)]
    else:
        checks = [(0, 0), (0, 1), (L, 2), (L, 3)]
    for x, k in checks:
        assert res(x, k) < 1e-9, (x, k)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_plate_boundary_residuals(n):
    g = uniform("disc_clamped", L=1e-3)
    m = plate_mode(g, n)
    a = g.extent
    assert abs(float(m(a))) < 1e-9
    assert abs(float(m.slope(a))) * a / m.eigenvalue < 1e-9
    assert abs(float(m.slope(0.0))) < 1e-12
    # the centre is an extremum and the normalisation peak is there or inside
    assert abs(float(m(0.0))) <= 1.0 + 1e-12


@pytest.mark.parametrize("kind", BEAM_KINDS + ["disc_clamped"])
def test_orthogonality(kind):
    g = uniform(kind)
    modes = [mode_of(g, n) for n in range(1, 5)]
    masses = [modal_mass(m, g) for m in modes]
    for i in range(4):
        for j in range(i + 1, 4):
            assert abs(modal_overlap(modes[i], modes[j], g)) < 1e-6 * math.sqrt(masses[i] * masses[j])


@pytest.mark.parametrize("kind", BEAM_KINDS + ["disc_clamped"])
def test_frequency_scaling(kind):
    g = uniform(kind)
    for n in (1, 2, 3):
        assert mode_of(g.scaled(0.5), n).omega == pytest.approx(4 * mode_of(g, n).omega, rel=1e-12)


def test_free_free_macro_against_fd_oracle(macro_geom):
    m = beam_mode(macro_geom, 1)
    # EI and mu from the hand-built transformed section
    E_m, E_p, h_m, h_p, w = 2e11, 1 / 15.15e-12, 0.0635e-3, 0.1905e-3, 6.35e-3
    zbar = (E_m * h_m**2 / 2 + E_p * h_p * (h_m + h_p / 2)) / (E_m * h_m + E_p * h_p)
    EI = w * (E_m * (h_m**3 / 12 + h_m * (h_m / 2 - zbar) ** 2) + E_p * (h_p**3 / 12 + h_p * (h_m + h_p / 2 - zbar) ** 2))
    mu = w * (2690 * h_m + 7800 * h_p)
    lam_fd = free_free_fd_lambda(2001)[0]
    omega_fd = (lam_fd / 15e-3) ** 2 * math.sqrt(EI / mu)
    assert m.omega == pytest.approx(omega_fd, rel=5e-3)
    assert m.frequency == pytest.approx(4669.088399356084, rel=1e-12)  # pinned


def test_plate_mode1_against_fd_oracle():
    g = uniform("disc_clamped", L=1e-3)
    m = plate_mode(g, 1)
    lam_fd = clamped_plate_fd_lambda(400)[0]
    E, h, nu, rho = 2e11, 1e-4, 0.3, 7800.0
    D = E * h**3 / (12 * (1 - nu**2))
    omega_fd = (lam_fd / 1e-3) ** 2 * math.sqrt(D / (rho * h))
    assert m.omega == pytest.approx(omega_fd, rel=5e-3)


@pytest.mark.parametrize("kind", BEAM_KINDS + ["disc_clamped"])
def test_derivatives_match_finite_differences(kind):
    g = uniform(kind)
    L = g.extent
    for n in (1, 3):
        m = mode_of(g, n)
        h = L * 1e-4
        xs = np.linspace(0.1 * L, 0.9 * L, 17)
        d1 = (m(xs + h) - m(xs - h)) / (2 * h)
        d2 = (m(xs + h) - 2 * m(xs) + m(xs - h)) / h**2
        s1 = np.max(np.abs(m.slope(np.linspace(0, L, 2001))))
        s2 = np.max(np.abs(m.curvature(np.linspace(0, L, 2001))))
        assert np.max(np.abs(d1 - m.slope(xs))) < 1e-5 * s1
        assert np.max(np.abs(d2 - m.curvature(xs))) < 1e-5 * s2


def test_modal_mass_rigid_body_and_trapezoid_oracle():
    g = uniform("bridge_clamped_clamped")
    mu = g.mass_density()
    assert modal_mass(lambda x: np.ones_like(np.asarray(x, dtype=float)), g) == pytest.approx(mu * g.extent, rel=1e-12)
    m = beam_mode(g, 1)
    xs = np.linspace(0, g.extent, 1_000_001)
    ref = trapezoid(m(xs) ** 2, xs) / g.extent
    assert modal_mass(m, g) / (mu * g.extent) == pytest.approx(ref, abs=1e-7)
    assert modal_mass(m.scaled(0.5), g) == pytest.approx(modal_mass(m, g) / 4, rel=1e-10)


def test_disc_modal_mass_trapezoid_oracle(lib):
    g = disc(lib)
    m = plate_mode(g, 3)
    lam, a = m.eigenvalue, g.extent
    rs = np.linspace(0, a, 1_000_001)
    shape = special.j0(lam * rs / a) - special.j0(lam) / special.i0(lam) * special.i0(lam * rs / a)
    shape /= np.max(np.abs(shape))
    ref = g.mass_density() * trapezoid(2 * math.pi * rs * shape**2, rs)
    assert modal_mass(m, g) == pytest.approx(ref, rel=1e-8)


def test_kind_mismatch_rejected():
    with pytest.raises(ValueError):
        beam_mode(uniform("disc_clamped"), 1)
    with pytest.raises(ValueError):
        plate_mode(uniform("beam_free_free"), 1)
    with pytest.raises(ValueError):
        plate_mode(uniform("disc_clamped"), 2).derivative(0.0, 3)


def test_geometry_validation(macro_stack):
    with pytest.raises(ValueError):
        DeviceGeometry("beam_free_free", 0.01, macro_stack, (0.0, 0.006), (0.005, 0.01), width=1e-3)
    with pytest.raises(ValueError):
        DeviceGeometry("beam_free_free", 0.01, macro_stack, (0.0, 0.02), (0.0, 0.0), width=1e-3)
    with pytest.raises(ValueError):
        DeviceGeometry("beam_free_free", 0.01, macro_stack, (0.0, 0.005), (0.005, 0.01))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(BEAM_KINDS), st.floats(1e-3, 0.1), st.floats(1e-5, 1e-3))
def test_eigenvalue_independent_of_size(kind, L, h):
    g = uniform(kind, L=L, h=h)
    m = beam_mode(g, 2)
    assert m.eigenvalue == beam_mode(uniform(kind), 2).eigenvalue
    assert m.omega == pytest.approx((m.eigenvalue / L) ** 2 * math.sqrt(2e11 * g.width * h**3 / 12 / (7800 * g.width * h)), rel=1e-12)

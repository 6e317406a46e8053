import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from piezoxfmr.laminate import Layer, LayerStack, coupling_arm, flexural_rigidity, mass_per_length, neutral_axis
from piezoxfmr.materials import EPS0, ElasticMaterial, PiezoMaterial

# Macro transformer stack, metal below PZT, computed by hand from the two transformed-section terms
E_M, E_P = 1 / 5e-12, 1 / 15.15e-12
H_M, H_P = 0.0635e-3, 0.1905e-3
W = 6.35e-3
ZBAR = (E_M * H_M * H_M / 2 + E_P * H_P * (H_M + H_P / 2)) / (E_M * H_M + E_P * H_P)
EI = W * (
    E_M * (H_M**3 / 12 + H_M * (H_M / 2 - ZBAR) ** 2) + E_P * (H_P**3 / 12 + H_P * (H_M + H_P / 2 - ZBAR) ** 2)
)

ROLES = ("substrate", "piezo_primary", "piezo_secondary")


def inert(s11=1e-11, rho=1000.0, name="m"):
    """Piezo-capable material with no coupling, usable in any layer role."""
    return PiezoMaterial(name, s11=s11, rho=rho, d31=0.0, eps33T=EPS0)


layers = st.lists(
    st.tuples(st.floats(1e-12, 1e-10), st.floats(100.0, 2e4), st.floats(1e-7, 1e-3)), min_size=1, max_size=3
)


def make_stack(spec) -> LayerStack:
    return LayerStack(tuple(Layer(inert(s11, rho), h, ROLES[i]) for i, (s11, rho, h) in enumerate(spec)))


def homogeneous(h, s11=1e-11, rho=1000.0):
    return LayerStack((Layer(ElasticMaterial("h", s11=s11, rho=rho), h),))


def test_macro_oracle(macro_stack):
    assert neutral_axis(macro_stack) == pytest.approx(ZBAR, rel=1e-13)
    assert flexural_rigidity(macro_stack, W) == pytest.approx(EI, rel=1e-13)
    assert mass_per_length(macro_stack, W) == pytest.approx(6.35e-3 * (7800 * 0.1905e-3 + 2690 * 0.0635e-3), rel=1e-13)
    zc = coupling_arm(macro_stack, "piezo_primary")
    assert zc > 0
    assert zc == pytest.approx(H_M + H_P / 2 - ZBAR, rel=1e-12)


def test_homogeneous_limits():
    s = homogeneous(2e-3)
    assert neutral_axis(s) == pytest.approx(1e-3)
    assert flexural_rigidity(s, 0.01) == pytest.approx(1e11 * 0.01 * (2e-3) ** 3 / 12, rel=1e-13)
    two = LayerStack((Layer(inert(), 1e-3), Layer(inert(), 1e-3, "piezo_primary")))
    assert neutral_axis(two) == pytest.approx(1e-3)


def test_zero_density_layer_adds_no_mass():
    ghost = inert(rho=0.0, name="ghost")
    base = homogeneous(1e-3)
    s = LayerStack(base.layers + (Layer(ghost, 1e-3, "piezo_primary"),))
    assert mass_per_length(s, 0.01) == mass_per_length(base, 0.01)


def test_coupling_arm_sign_and_zero():
    sub = ElasticMaterial("sub", s11=1e-11, rho=1000.0)
    pz = inert(name="pz")
    top = LayerStack((Layer(sub, 1e-3), Layer(pz, 1e-4, "piezo_primary")))
    bottom = LayerStack((Layer(pz, 1e-4, "piezo_primary"), Layer(sub, 1e-3)))
    assert coupling_arm(top, "piezo_primary") == pytest.approx(-coupling_arm(bottom, "piezo_primary"), rel=1e-12)
    # piezo sandwiched at the middle of a symmetric stack
    mid = LayerStack((Layer(sub, 1e-3), Layer(pz, 1e-4, "piezo_primary"), Layer(inert(), 1e-3, "piezo_secondary")))
    assert coupling_arm(mid, "piezo_primary") == pytest.approx(0.0, abs=1e-18)


def test_validation(lib):
    with pytest.raises(ValueError):
        neutral_axis(LayerStack(()))
    with pytest.raises(ValueError):
        Layer(lib["silicon"], 0.0)
    with pytest.raises(ValueError):
        LayerStack((Layer(lib["pzt_film"], 1e-6, "piezo_primary"),))
    with pytest.raises(ValueError):
        LayerStack((Layer(lib["silicon"], 1e-6), Layer(lib["silicon"], 1e-6)))
    s = LayerStack((Layer(lib["silicon"], 1e-6), Layer(lib["pzt_film"], 1e-6, "piezo_primary")))
    with pytest.raises(ValueError):
        coupling_arm(s, "piezo_secondary")


@settings(max_examples=60, deadline=None)
@given(layers, st.floats(0.5, 50.0))
def test_neutral_axis_invariant_under_common_modulus_scaling(spec, factor):
    s = make_stack(spec)
    scaled = make_stack([(s11 / factor, rho, h) for s11, rho, h in spec])
    z = neutral_axis(s)
    assert 0 < z < s.thickness
    assert neutral_axis(scaled) == pytest.approx(z, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(layers, st.sampled_from([-0.1, 0.1]))
def test_rigidity_is_minimal_at_neutral_axis(spec, shift):
    s = make_stack(spec)
    z = neutral_axis(s)
    assert flexural_rigidity(s, 1e-3, axis=z * (1 + shift)) > flexural_rigidity(s, 1e-3)


@settings(max_examples=60, deadline=None)
@given(layers)
def test_additivity_over_layers(spec):
    s = make_stack(spec)
    z = neutral_axis(s)
    bottoms = [sum(x.thickness for x in s.layers[:i]) for i in range(len(s.layers))]
    per_layer = sum(
        flexural_rigidity(LayerStack((Layer(lay.material, lay.thickness),)), 1e-3, axis=z - b)
        for lay, b in zip(s.layers, bottoms)
    )
    assert flexural_rigidity(s, 1e-3) == pytest.approx(per_layer, rel=1e-10)
    mass = sum(mass_per_length(LayerStack((Layer(lay.material, lay.thickness),)), 1e-3) for lay in s.layers)
    assert mass_per_length(s, 1e-3) == pytest.approx(mass, rel=1e-12)


@given(st.floats(0.1, 10.0))
def test_homogeneous_rigidity_scales_with_cube_of_thickness(lam):
    base = flexural_rigidity(homogeneous(1e-3), 1e-2)
    assert flexural_rigidity(homogeneous(1e-3 * lam), 1e-2) == pytest.approx(lam**3 * base, rel=1e-12)

import pytest

from piezoxfmr.laminate import Layer, LayerStack
from piezoxfmr.materials import builtin_materials
from piezoxfmr.modal import DeviceGeometry


@pytest.fixture(scope="session")
def lib():
    return builtin_materials()


@pytest.fixture(scope="session")
def macro_stack(lib):
    return LayerStack(
        (
            Layer(lib["metal_macro"], 0.0635e-3, "substrate"),
            Layer(lib["pzt_macro"], 0.1905e-3, "piezo_primary"),
        )
    )


@pytest.fixture(scope="session")
def macro_geom(macro_stack):
    L = 15e-3
    return DeviceGeometry("beam_free_free", L, macro_stack, (0.0, L / 2), (L / 2, L), width=6.35e-3)


def film_stack(lib, film="pzt_film"):
    return LayerStack((Layer(lib["silicon"], 5e-6, "substrate"), Layer(lib[film], 1e-6, "piezo_primary")))


def bridge(lib, primary="aln_film", secondary="aln_film", L=2e-3):
    stack = film_stack(lib, primary)
    sec = film_stack(lib, secondary).relabelled("piezo_primary", "piezo_secondary")
    return DeviceGeometry(
        "bridge_clamped_clamped", L, stack, (0.0, 0.3 * L), (0.7 * L, L), width=0.5e-3, secondary_stack=sec
    )


def disc(lib, primary="aln_film", secondary="aln_film", a=1e-3):
    stack = film_stack(lib, primary)
    sec = film_stack(lib, secondary).relabelled("piezo_primary", "piezo_secondary")
    return DeviceGeometry("disc_clamped", a, stack, (0.0, 0.4 * a), (0.7 * a, a), secondary_stack=sec)

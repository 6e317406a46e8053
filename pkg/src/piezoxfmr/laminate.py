"""Transformed-section mechanics of a layered beam cross-section."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Literal

from .materials import ElasticMaterial, PiezoMaterial

Role = Literal["substrate", "piezo_primary", "piezo_secondary"]
ROLES = ("substrate", "piezo_primary", "piezo_secondary")
PIEZO_ROLES = ("piezo_primary", "piezo_secondary")


@dataclass(frozen=True)
class Layer:
    material: ElasticMaterial
    thickness: float  # m
    role: Role = "substrate"

    def __post_init__(self):
        if not self.thickness > 0:
            raise ValueError(f"layer thickness must be positive, got {self.thickness}")
        if self.role not in ROLES:
            raise ValueError(f"unknown layer role {self.role!r}")
        if self.role in PIEZO_ROLES and not isinstance(self.material, PiezoMaterial):
            raise ValueError(f"{self.material.name} is not piezoelectric but has role {self.role}")


@dataclass(frozen=True)
class LayerStack:
    """Layers ordered bottom to top; they abut, so z-extents follow from thicknesses."""

    layers: tuple[Layer, ...]
    _bottoms: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if sum(lay.role == "substrate" for lay in layers) > 1:
            raise ValueError("a stack holds at most one substrate layer")
        if any(lay.role in PIEZO_ROLES for lay in layers) and len(layers) < 2:
            raise ValueError("a piezo stack needs at least two layers")
        z = 0.0
        bottoms = []
        for lay in layers:
            bottoms.append(z)
            z += lay.thickness
        object.__setattr__(self, "_bottoms", tuple(bottoms))

    @property
    def thickness(self) -> float:
        return sum(lay.thickness for lay in self.layers)

    def midplanes(self) -> list[float]:
        return [zb + 0.5 * lay.thickness for zb, lay in zip(self._bottoms, self.layers)]

    def find(self, role: str) -> tuple[int, Layer]:
        for i, lay in enumerate(self.layers):
            if lay.role == role:
                return i, lay
        raise ValueError(f"stack has no layer with role {role!r}")

    def piezo_layer(self, role: str) -> Layer:
        return self.find(role)[1]

    def relabelled(self, old: str, new: str) -> "LayerStack":
        return LayerStack(tuple(replace(lay, role=new) if lay.role == old else lay for lay in self.layers))

    def with_material(self, role: str, material: ElasticMaterial) -> "LayerStack":
        idx, lay = self.find(role)
        layers = list(self.layers)
        layers[idx] = replace(lay, material=material)
        return LayerStack(tuple(layers))


def neutral_axis(stack: LayerStack) -> float:
    """Height of the bending neutral plane above the stack bottom (m)."""
    if not stack.layers:
        raise ValueError("empty stack")
    num = 0.0
    den = 0.0
    for lay, zc in zip(stack.layers, stack.midplanes()):
        eh = lay.material.youngs_modulus * lay.thickness
        num += eh * zc
        den += eh
    return num / den


def flexural_rigidity(stack: LayerStack, width: float, axis: float | None = None) -> float:
    """Bending stiffness EI (N m^2) about ``axis`` (the neutral axis by default)."""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    zbar = neutral_axis(stack) if axis is None else axis
    total = 0.0
    for lay, zc in zip(stack.layers, stack.midplanes()):
        h = lay.thickness
        total += lay.material.youngs_modulus * (h**3 / 12.0 + h * (zc - zbar) ** 2)
    return width * total


def mass_per_length(stack: LayerStack, width: float) -> float:
    """Mass per unit length (kg/m); with ``width=1`` this is the areal mass."""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    return width * sum(lay.material.rho * lay.thickness for lay in stack.layers)


def coupling_arm(stack: LayerStack, role: str) -> float:
    """Signed distance from the neutral axis to the midplane of the ``role`` film."""
    idx, _ = stack.find(role)
    return stack.midplanes()[idx] - neutral_axis(stack)

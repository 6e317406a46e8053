"""Material constants for the transformer stacks.

Young's moduli are taken as 1/s11 throughout (1D beam theory). Values not
published for the thin films are defaults that a scenario config may
override.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, replace
from types import MappingProxyType

EPS0 = 8.8541878128e-12  # F/m


@dataclass(frozen=True)
class ElasticMaterial:
    name: str
    s11: float  # elastic compliance (m^2/N)
    rho: float  # density (kg/m^3)

    def __post_init__(self):
        if not self.s11 > 0:
            raise ValueError(f"{self.name}: s11 must be positive, got {self.s11}")
        if not self.rho >= 0:
            raise ValueError(f"{self.name}: rho must be non-negative, got {self.rho}")

    @property
    def youngs_modulus(self) -> float:
        return 1.0 / self.s11

    @property
    def is_piezo(self) -> bool:
        return False


@dataclass(frozen=True)
class PiezoMaterial(ElasticMaterial):
    d31: float = 0.0  # transverse piezoelectric coefficient (m/V), signed
    eps33T: float = EPS0  # free permittivity (F/m)

    def __post_init__(self):
        super().__post_init__()
        if not self.eps33T > 0:
            raise ValueError(f"{self.name}: eps33T must be positive, got {self.eps33T}")
        k2 = self.coupling_k31_sq
        if not 0.0 <= k2 < 1.0:
            raise ValueError(f"{self.name}: k31^2 = {k2:.4g} outside [0, 1)")

    @property
    def coupling_k31_sq(self) -> float:
        return self.d31**2 / (self.s11 * self.eps33T)

    @property
    def is_piezo(self) -> bool:
        return True


Material = ElasticMaterial  # PiezoMaterial is a subclass


def effective_e31(p: PiezoMaterial) -> float:
    """Piezoelectric stress constant d31/s11 in C/m^2 (sign kept)."""
    return p.d31 / p.s11


def clamped_permittivity(p: PiezoMaterial) -> float:
    """Permittivity at constant strain, eps33T * (1 - k31^2)."""
    k2 = p.d31**2 / (p.s11 * p.eps33T)
    if k2 >= 1.0:
        raise ValueError(f"{p.name}: k31^2 = {k2:.4g} >= 1 is unphysical")
    return p.eps33T * (1.0 - k2)


class MaterialLibrary(Mapping):
    """Read-only name -> material map.

    ``extended`` returns a new library; the receiver is never modified, so the
    built-in table can be shared freely.
    """

    def __init__(self, entries: Mapping[str, ElasticMaterial] | None = None):
        table: dict[str, ElasticMaterial] = {}
        for key, mat in (entries or {}).items():
            if key != mat.name:
                raise ValueError(f"library key {key!r} does not match material name {mat.name!r}")
            table[key] = mat
        self._entries = MappingProxyType(table)

    def __getitem__(self, name: str) -> ElasticMaterial:
        try:
            return self._entries[name]
        except KeyError:
            raise KeyError(f"unknown material {name!r}; known: {sorted(self._entries)}") from None

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"MaterialLibrary({sorted(self._entries)})"

    def extended(self, *materials: ElasticMaterial) -> "MaterialLibrary":
        """Copy of this library with ``materials`` added or replacing same-named entries."""
        table = dict(self._entries)
        for mat in materials:
            table[mat.name] = mat
        return MaterialLibrary(table)

    def overridden(self, name: str, **fields: float) -> "MaterialLibrary":
        """Copy with selected constants of one entry changed."""
        return self.extended(replace(self[name], **fields))


_BUILTIN = MaterialLibrary(
    {
        # macroscopic transformer
        "pzt_macro": PiezoMaterial("pzt_macro", s11=15.15e-12, rho=7800.0, d31=-190e-12, eps33T=1800 * EPS0),
        "metal_macro": ElasticMaterial("metal_macro", s11=5e-12, rho=2690.0),
        # thin films: only d31 is published, the rest are defaults
        "pzt_film": PiezoMaterial("pzt_film", s11=15.15e-12, rho=7800.0, d31=1.8e-10, eps33T=1800 * EPS0),
        "aln_film": PiezoMaterial("aln_film", s11=15.15e-12, rho=3260.0, d31=2.65e-12, eps33T=10 * EPS0),
        "silicon": ElasticMaterial("silicon", s11=5.92e-12, rho=2330.0),
    }
)


def builtin_materials() -> MaterialLibrary:
    return _BUILTIN

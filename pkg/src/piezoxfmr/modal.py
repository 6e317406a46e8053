"""Bending eigenmodes of uniform beams and clamped axisymmetric discs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

from . import numerics
from .laminate import LayerStack, flexural_rigidity, mass_per_length

GeometryKind = Literal["beam_cantilever", "bridge_clamped_clamped", "beam_free_free", "disc_clamped"]
BEAM_KINDS = ("beam_cantilever", "bridge_clamped_clamped", "beam_free_free")
BoundaryCondition = Literal["clamped_clamped", "free_free", "cantilever"]

_BC_OF_KIND = {
    "beam_cantilever": "cantilever",
    "bridge_clamped_clamped": "clamped_clamped",
    "beam_free_free": "free_free",
}


@dataclass(frozen=True)
class DeviceGeometry:
    """Resonator outline plus the cross-section under each electrode.

    ``extent`` is the length of a beam or the radius of a disc. Regions are
    ``(start, end)`` intervals along x for beams and annuli in r for discs.
    ``secondary_stack`` defaults to ``stack`` with its film relabelled, i.e.
    one film common to both electrodes. ``stack`` also sets the global
    rigidity and mass of the resonator.
    """

    kind: GeometryKind
    extent: float
    stack: LayerStack
    primary_region: tuple[float, float]
    secondary_region: tuple[float, float]
    width: float | None = None
    secondary_stack: LayerStack | None = None
    poisson: float = 0.3

    def __post_init__(self):
        if self.kind not in BEAM_KINDS and self.kind != "disc_clamped":
            raise ValueError(f"unknown geometry kind {self.kind!r}")
        if not self.extent > 0:
            raise ValueError("extent must be positive")
        if self.is_beam and not (self.width and self.width > 0):
            raise ValueError("beam geometries need a positive width")
        if not -1.0 < self.poisson < 0.5:
            raise ValueError(f"poisson ratio {self.poisson} out of range")
        for name in ("primary_region", "secondary_region"):
            lo, hi = getattr(self, name)
            object.__setattr__(self, name, (float(lo), float(hi)))
            if not 0.0 <= lo <= hi <= self.extent * (1 + 1e-12):
                raise ValueError(f"{name} {lo, hi} outside [0, {self.extent}]")
        (p0, p1), (s0, s1) = self.primary_region, self.secondary_region
        if p0 < s1 and s0 < p1:
            raise ValueError("primary and secondary regions overlap")
        if self.secondary_stack is None:
            sec = self.stack
            if any(lay.role == "piezo_primary" for lay in sec.layers) and not any(
                lay.role == "piezo_secondary" for lay in sec.layers
            ):
                sec = sec.relabelled("piezo_primary", "piezo_secondary")
            object.__setattr__(self, "secondary_stack", sec)

    @property
    def is_beam(self) -> bool:
        return self.kind in BEAM_KINDS

    def region(self, which: str) -> tuple[float, float]:
        return self.primary_region if which == "primary" else self.secondary_region

    def region_stack(self, which: str) -> LayerStack:
        return self.stack if which == "primary" else self.secondary_stack

    def scaled(self, factor: float) -> "DeviceGeometry":
        """Same device with every in-plane dimension multiplied by ``factor``."""
        return replace(
            self,
            extent=self.extent * factor,
            width=None if self.width is None else self.width * factor,
            primary_region=tuple(v * factor for v in self.primary_region),
            secondary_region=tuple(v * factor for v in self.secondary_region),
        )

    def rigidity(self) -> float:
        """EI (N m^2) for beams, D (N m) for discs."""
        if self.is_beam:
            return flexural_rigidity(self.stack, self.width)
        return flexural_rigidity(self.stack, 1.0) / (1.0 - self.poisson**2)

    def mass_density(self) -> float:
        """Mass per length (kg/m) for beams, per area (kg/m^2) for discs."""
        return mass_per_length(self.stack, self.width if self.is_beam else 1.0)


# --- characteristic equations --------------------------------------------


def beam_characteristic(bc: BoundaryCondition, x: float) -> float:
    """cos(x) cosh(x) -/+ 1 for the given boundary condition."""
    sign = 1.0 if bc == "cantilever" else -1.0
    return math.cos(x) * math.cosh(x) + sign


def _beam_scaled(bc: str, x: float) -> float:
    # same roots as beam_characteristic divided by cosh(x); stays O(1)
    sign = 1.0 if bc == "cantilever" else -1.0
    return math.cos(x) + sign / math.cosh(x)


def _search_stop(count: int) -> float:
    return (count + 2) * math.pi * 1.5


def beam_char_roots(bc: BoundaryCondition, count: int) -> list[float]:
    """First ``count`` positive roots beta*L of the beam frequency equation.

    The scan uses cos(x) -/+ sech(x), which shares its roots with
    cos(x)cosh(x) -/+ 1 but does not grow like cosh, so bisection resolves
    the roots to full double precision.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if bc not in ("clamped_clamped", "free_free", "cantilever"):
        raise ValueError(f"unknown boundary condition {bc!r}")
    return numerics.scan_roots(lambda x: _beam_scaled(bc, x), count, math.pi / 8, _search_stop(count))


def plate_characteristic(lam: float) -> float:
    """J0(l) I1(l) + I0(l) J1(l): clamped axisymmetric plate."""
    return numerics.j0(lam) * numerics.i1(lam) + numerics.i0(lam) * numerics.j1(lam)


def _plate_scaled(lam: float) -> float:
    return numerics.j0(lam) * numerics.i1(lam) / numerics.i0(lam) + numerics.j1(lam)


def plate_char_roots(count: int) -> list[float]:
    """First ``count`` positive roots of the clamped-disc frequency equation."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return numerics.scan_roots(_plate_scaled, count, math.pi / 8, _search_stop(count))


# --- mode shapes ------------------------------------------------------------


@dataclass(frozen=True)
class ModeShape:
    """One bending eigenmode, normalised so that max |phi| = 1 (times ``scale``).

    ``derivative(x, k)`` returns the k-th derivative in x (beams) or r (discs).
    """

    kind: GeometryKind
    index: int
    eigenvalue: float
    omega: float
    extent: float
    coeff: float  # beams: 1 - sigma; discs: J0(l)/I0(l)
    scale: float = 1.0
    _peak: float = field(default=1.0, repr=False)

    @property
    def frequency(self) -> float:
        return self.omega / (2.0 * math.pi)

    @property
    def is_beam(self) -> bool:
        return self.kind in BEAM_KINDS

    def scaled(self, factor: float) -> "ModeShape":
        return replace(self, scale=self.scale * factor)

    def __call__(self, x):
        return self.derivative(x, 0)

    def slope(self, x):
        return self.derivative(x, 1)

    def curvature(self, x):
        return self.derivative(x, 2)

    def derivative(self, x, order: int = 0):
        raw = self._beam_raw(x, order) if self.is_beam else self._plate_raw(x, order)
        return raw * (self.scale / self._peak)

    def _beam_raw(self, x, order):
        beta = self.eigenvalue / self.extent
        u = beta * np.asarray(x, dtype=float)
        one_minus = self.coeff
        sigma = 1.0 - one_minus
        trig_sign = 1.0 if self.kind == "beam_free_free" else -1.0
        shift = 0.5 * math.pi * order
        # cosh(u) - sigma sinh(u) split into growing and decaying exponentials
        # so the growing part carries the small factor (1 - sigma)
        hyper = 0.5 * one_minus * np.exp(u) + 0.5 * (1.0 + sigma) * (-1.0) ** order * np.exp(-u)
        trig = trig_sign * (np.cos(u + shift) - sigma * np.sin(u + shift))
        return beta**order * (hyper + trig)

    def _plate_raw(self, r, order):
        k = self.eigenvalue / self.extent
        x = k * np.asarray(r, dtype=float)
        ratio = self.coeff
        if order == 0:
            return numerics.j0(x) - ratio * numerics.i0(x)
        if order == 1:
            return k * (-numerics.j1(x) - ratio * numerics.i1(x))
        if order == 2:
            # J0'' = -J0 + J1/x, I0'' = I0 - I1/x, both -> 1/2 at x = 0
            xs = np.where(np.abs(x) < 1e-8, 1.0, x)
            j1x = np.where(np.abs(x) < 1e-8, 0.5, numerics.j1(xs) / xs)
            i1x = np.where(np.abs(x) < 1e-8, 0.5, numerics.i1(xs) / xs)
            return k * k * (-numerics.j0(x) + j1x - ratio * (numerics.i0(x) - i1x))
        raise ValueError("disc modes provide derivatives up to order 2")


def _one_minus_sigma(bc: str, X: float) -> float:
    em = math.exp(-X)
    if bc == "cantilever":
        return (math.sin(X) - math.cos(X) - em) / (math.sinh(X) + math.sin(X))
    return (math.cos(X) - math.sin(X) - em) / (math.sinh(X) - math.sin(X))


def _normalise(mode: ModeShape) -> ModeShape:
    xs = np.linspace(0.0, mode.extent, 4001)
    vals = np.abs(np.asarray(mode(xs)))
    i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    xpk = numerics.golden_max(lambda x: abs(float(mode(x))), lo, hi)
    peak = max(abs(float(mode(xpk))), float(vals[i]))
    return replace(mode, _peak=peak)


def beam_mode(geom: DeviceGeometry, n: int) -> ModeShape:
    if not geom.is_beam:
        raise ValueError(f"beam_mode needs a beam geometry, got {geom.kind}")
    if n < 1:
        raise ValueError("mode index starts at 1")
    bc = _BC_OF_KIND[geom.kind]
    X = beam_char_roots(bc, n)[-1]
    L = geom.extent
    omega = X**2 / L**2 * math.sqrt(geom.rigidity() / geom.mass_density())
    mode = ModeShape(geom.kind, n, X, omega, L, _one_minus_sigma(bc, X))
    return _normalise(mode)


def plate_mode(geom: DeviceGeometry, n: int) -> ModeShape:
    if geom.kind != "disc_clamped":
        raise ValueError(f"plate_mode needs a disc geometry, got {geom.kind}")
    if n < 1:
        raise ValueError("mode index starts at 1")
    lam = plate_char_roots(n)[-1]
    a = geom.extent
    omega = (lam / a) ** 2 * math.sqrt(geom.rigidity() / geom.mass_density())
    mode = ModeShape(geom.kind, n, lam, omega, a, numerics.j0(lam) / numerics.i0(lam))
    return _normalise(mode)


def mode_of(geom: DeviceGeometry, n: int) -> ModeShape:
    return beam_mode(geom, n) if geom.is_beam else plate_mode(geom, n)


def modal_mass(mode, geom: DeviceGeometry, rtol: float = 1e-8) -> float:
    """Generalised mass of ``mode`` (kg): integral of density * phi^2."""
    mu = geom.mass_density()
    if geom.is_beam:
        return float(mu * numerics.adaptive_simpson(lambda x: np.asarray(mode(x)) ** 2, 0.0, geom.extent, rtol))
    return float(
        mu * numerics.adaptive_simpson(lambda r: 2.0 * math.pi * r * np.asarray(mode(r)) ** 2, 0.0, geom.extent, rtol)
    )


def modal_overlap(m1, m2, geom: DeviceGeometry, rtol: float = 1e-10) -> float:
    """Mass-weighted inner product of two modes (zero for distinct eigenmodes)."""
    mu = geom.mass_density()
    if geom.is_beam:
        return float(mu * numerics.adaptive_simpson(lambda x: m1(x) * m2(x), 0.0, geom.extent, rtol))
    return float(mu * numerics.adaptive_simpson(lambda r: 2.0 * math.pi * r * m1(r) * m2(r), 0.0, geom.extent, rtol))

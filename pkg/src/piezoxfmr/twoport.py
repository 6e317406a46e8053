"""Single-mode electromechanical two-port of a piezoelectric transformer.

The modal coordinate ``eta`` (displacement at the point where |phi| = 1)
obeys

    (k - w^2 m + j w c) eta = psi_p V1 + psi_s V2
    j w (psi_s eta + Cs V2) = -V2 / ZL

with the primary driven by V1 and the secondary loaded by ZL. The charge
relation mirrors the force relation (same psi), which keeps the network
reciprocal and passive.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import NumericalError
from .laminate import coupling_arm
from .materials import clamped_permittivity, effective_e31
from .modal import DeviceGeometry, ModeShape, modal_mass, mode_of

OPEN = math.inf


@dataclass(frozen=True)
class TwoPort:
    Cp: float  # F
    Cs: float  # F
    m: float  # kg
    k: float  # N/m
    c: float  # N s/m
    psi_p: float  # N/V
    psi_s: float  # N/V
    f0: float  # Hz

    def __post_init__(self):
        for name in ("Cp", "Cs", "m", "k"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.c < 0:
            raise ValueError("damping must be non-negative")
        k_expect = (2 * math.pi * self.f0) ** 2 * self.m
        if not math.isclose(self.k, k_expect, rel_tol=1e-9):
            raise ValueError(f"k = {self.k} inconsistent with f0 and m (expected {k_expect})")

    @property
    def omega0(self) -> float:
        return 2 * math.pi * self.f0

    @property
    def Q(self) -> float:
        return math.inf if self.c == 0 else self.omega0 * self.m / self.c

    def mech_impedance(self, omega):
        return self.k - omega**2 * self.m + 1j * omega * self.c


@dataclass(frozen=True)
class GainCurve:
    frequencies: np.ndarray  # Hz
    gain: np.ndarray  # complex V/V
    load: float  # ohm, inf for open circuit

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        g = np.asarray(self.gain, dtype=complex)
        if f.shape != g.shape:
            raise ValueError("frequencies and gain differ in length")
        if f.size > 1 and not np.all(np.diff(f) > 0):
            raise ValueError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "gain", g)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.gain)

    @property
    def phase_deg(self) -> np.ndarray:
        ph = np.degrees(np.angle(self.gain))
        return np.where(ph <= -180.0, ph + 360.0, ph)

    def rows(self) -> list[tuple[float, float, float, float]]:
        return [
            (float(f), float(m), float(p), float(self.load))
            for f, m, p in zip(self.frequencies, self.magnitude, self.phase_deg)
        ]


GAIN_CSV_HEADER = ("freq_hz", "gain_mag", "gain_phase_deg", "load_ohm")


def force_factor(mode: ModeShape, geom: DeviceGeometry, region: str) -> float:
    """Modal force per volt on one electrode (N/V); equals charge per unit
    modal displacement on the shorted electrode."""
    if region not in ("primary", "secondary"):
        raise ValueError(f"region must be primary or secondary, got {region!r}")
    x1, x2 = geom.region(region)
    if x1 == x2:
        warnings.warn(f"{region} electrode region has zero extent; force factor is 0", stacklevel=2)
        return 0.0
    stack = geom.region_stack(region)
    role = f"piezo_{region}"
    e31 = effective_e31(stack.piezo_layer(role).material)
    zc = coupling_arm(stack, role)
    if geom.is_beam:
        return e31 * geom.width * zc * float(mode.slope(x2) - mode.slope(x1))
    # axisymmetric plate: integral of the curvature sum over the annulus
    return e31 * zc * 2 * math.pi * float(x2 * mode.slope(x2) - x1 * mode.slope(x1))


def electrode_area(geom: DeviceGeometry, region: str) -> float:
    x1, x2 = geom.region(region)
    if geom.is_beam:
        return geom.width * (x2 - x1)
    return math.pi * (x2**2 - x1**2)


def clamped_capacitance(geom: DeviceGeometry, region: str) -> float:
    film = geom.region_stack(region).piezo_layer(f"piezo_{region}")
    return clamped_permittivity(film.material) * electrode_area(geom, region) / film.thickness


def build_two_port(geom: DeviceGeometry, mode_index: int, Q: float = 200.0) -> TwoPort:
    if not Q > 0:
        raise ValueError(f"Q must be positive, got {Q}")
    mode = mode_of(geom, mode_index)
    m = modal_mass(mode, geom)
    w0 = mode.omega
    return TwoPort(
        Cp=clamped_capacitance(geom, "primary"),
        Cs=clamped_capacitance(geom, "secondary"),
        m=m,
        k=w0**2 * m,
        c=w0 * m / Q,
        psi_p=force_factor(mode, geom, "primary"),
        psi_s=force_factor(mode, geom, "secondary"),
        f0=mode.frequency,
    )


def _load_admittance(ZL) -> complex:
    if ZL is None or (np.isscalar(ZL) and np.isreal(ZL) and np.isinf(ZL)):
        return 0.0
    if ZL == 0:
        raise ValueError("load impedance must be non-zero")
    return 1.0 / ZL


def voltage_gain(tp: TwoPort, omega, ZL=OPEN):
    """Complex V2/V1 at angular frequency ``omega``; ``ZL=inf`` is an open secondary."""
    w = np.asarray(omega, dtype=float)
    YL = _load_admittance(ZL)
    Zm = tp.mech_impedance(w)
    num = -1j * w * tp.psi_p * tp.psi_s
    den = Zm * (YL + 1j * w * tp.Cs) + 1j * w * tp.psi_s**2
    if YL == 0:
        # the j w factor cancels: keeps the open-circuit limit finite at w = 0
        num = -tp.psi_p * tp.psi_s * np.ones_like(w)
        den = Zm * tp.Cs + tp.psi_s**2
    g = num / den
    return complex(g) if np.ndim(g) == 0 else g


def input_admittance(tp: TwoPort, omega, ZL=OPEN):
    w = np.asarray(omega, dtype=float)
    Ysec = _load_admittance(ZL) + 1j * w * tp.Cs
    y = 1j * w * tp.Cp + 1j * w * tp.psi_p**2 * Ysec / (tp.mech_impedance(w) * Ysec + 1j * w * tp.psi_s**2)
    return complex(y) if np.ndim(y) == 0 else y


def output_impedance(tp: TwoPort, omega):
    """Thevenin impedance of the secondary with the primary shorted."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("output impedance needs omega > 0")
    z = 1.0 / (1j * w * tp.Cs + 1j * w * tp.psi_s**2 / tp.mech_impedance(w))
    return complex(z) if np.ndim(z) == 0 else z


def frequency_sweep(
    tp: TwoPort, f_lo: float, f_hi: float, points: int, RL: float = OPEN, spacing: str = "log"
) -> GainCurve:
    if not 0 < f_lo < f_hi:
        raise ValueError(f"need 0 < f_lo < f_hi, got {f_lo}, {f_hi}")
    if points < 2:
        raise ValueError("a sweep needs at least 2 points")
    if spacing == "log":
        f = np.geomspace(f_lo, f_hi, points)
    elif spacing == "linear":
        f = np.linspace(f_lo, f_hi, points)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    return GainCurve(f, voltage_gain(tp, 2 * np.pi * f, RL), RL)


def find_peak_gain(
    tp: TwoPort, f_lo: float, f_hi: float, RL: float = OPEN, scan_points: int = 4001
) -> tuple[float, float]:
    """Frequency (Hz) and magnitude of the largest |G| inside ``[f_lo, f_hi]``."""
    curve = frequency_sweep(tp, f_lo, f_hi, scan_points, RL)
    mag = curve.magnitude
    i = int(np.argmax(mag))
    if i == 0 or i == len(mag) - 1:
        raise NumericalError(
            f"gain maximum sits on the sweep edge ({curve.frequencies[i]:.6g} Hz); "
            "the bracket does not contain a resonance"
        )
    f = curve.frequencies

    def gain_at(fr: float) -> float:
        return abs(voltage_gain(tp, 2 * math.pi * fr, RL))

    fpk = numerics.golden_max(gain_at, float(f[i - 1]), float(f[i + 1]))
    return fpk, gain_at(fpk)

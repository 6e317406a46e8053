"""Charge-pump (Cockcroft-Walton / Schenkel ladder) transient simulation."""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernel
from .errors import NumericalError


@dataclass(frozen=True)
class ExponentialDiode:
    Is: float = 1e-9  # A
    n: float = 1.2
    VT: float = 25.85e-3  # V

    def __post_init__(self):
        if not (self.Is > 0 and self.n > 0 and self.VT > 0):
            raise ValueError("exponential diode needs Is, n, VT > 0")

    def _params(self):
        return 0, self.Is, self.n * self.VT, 0.0


@dataclass(frozen=True)
class IdealSwitchDiode:
    Ron: float = 1.0  # ohm
    Goff: float = 0.0  # S
    Vdrop: float = 0.0  # V

    def __post_init__(self):
        if not (self.Ron > 0 and self.Goff >= 0 and self.Vdrop >= 0):
            raise ValueError("ideal switch needs Ron > 0, Goff >= 0, Vdrop >= 0")

    def _params(self):
        return 1, self.Ron, self.Goff, self.Vdrop


DiodeModel = ExponentialDiode | IdealSwitchDiode


def diode_current(dm: DiodeModel, V):
    """Current (A) and small-signal conductance (S) at junction voltage ``V``."""
    kind, p0, p1, p2 = dm._params()
    if np.ndim(V) == 0:
        return _kernel.diode_iv(kind, p0, p1, p2, float(V))
    pairs = [_kernel.diode_iv(kind, p0, p1, p2, float(v)) for v in np.ravel(V)]
    cur, g = np.array(pairs).T
    return cur.reshape(np.shape(V)), g.reshape(np.shape(V))


# --- netlist ------------------------------------------------------------------


@dataclass(frozen=True)
class Capacitor:
    a: int
    b: int
    C: float


@dataclass(frozen=True)
class Resistor:
    a: int
    b: int
    R: float


@dataclass(frozen=True)
class Diode:
    anode: int
    cathode: int
    model: DiodeModel


@dataclass(frozen=True)
class SineSource:
    """Sine generator of amplitude ``amplitude`` behind ``rs`` ohms, feeding ``node``."""

    node: int
    amplitude: float
    frequency: float
    rs: float

    def emf(self, t):
        return self.amplitude * np.sin(2 * np.pi * self.frequency * np.asarray(t))


@dataclass(frozen=True)
class Circuit:
    n_nodes: int  # including ground (node 0)
    elements: tuple
    output_node: int

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        sources = self.of_type(SineSource)
        if len(sources) != 1:
            raise ValueError("a circuit needs exactly one sine source")
        for el in self.elements:
            for node in _terminals(el):
                if not 0 <= node < self.n_nodes:
                    raise ValueError(f"{el} references node {node} outside 0..{self.n_nodes - 1}")
        for el in self.elements:
            val = {Capacitor: "C", Resistor: "R"}.get(type(el))
            if val and not getattr(el, val) > 0:
                raise ValueError(f"{el} needs a positive value")
        src = sources[0]
        if not (src.rs > 0 and src.frequency > 0):
            raise ValueError("source needs positive series resistance and frequency")
        if not 0 < self.output_node < self.n_nodes:
            raise ValueError("output node must be a non-ground node")
        unreached = set(range(self.n_nodes)) - _reachable_from_ground(self)
        if unreached:
            raise ValueError(f"nodes {sorted(unreached)} are not connected to ground")

    def of_type(self, cls) -> list:
        return [el for el in self.elements if isinstance(el, cls)]

    @property
    def source(self) -> SineSource:
        return self.of_type(SineSource)[0]


def _terminals(el) -> tuple[int, ...]:
    if isinstance(el, (Capacitor, Resistor)):
        return (el.a, el.b)
    if isinstance(el, Diode):
        return (el.anode, el.cathode)
    return (el.node, 0)


def _reachable_from_ground(c: Circuit) -> set[int]:
    adj: dict[int, set[int]] = defaultdict(set)
    for el in c.elements:
        a, b = _terminals(el)
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    todo = [0]
    while todo:
        for nb in adj[todo.pop()]:
            if nb not in seen:
                seen.add(nb)
                todo.append(nb)
    return seen


def build_ladder(
    levels: int,
    C_stage: float,
    C_load: float,
    R_load: float | None,
    dm: DiodeModel,
    source: tuple[float, float, float],
) -> Circuit:
    """Greinacher / Cockcroft-Walton cascade with ``levels`` doubler stages.

    Node 1 is the source terminal. The AC column a_k and DC column d_k are
    interleaved (a_k = 2k, d_k = 2k + 1) so every element couples nodes at
    most two indices apart, which keeps the nodal matrix narrow-banded.
    """
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    vamp, freq, rs = source
    if not (C_stage > 0 and C_load > 0):
        raise ValueError("capacitances must be positive")
    if R_load is not None and not R_load > 0:
        raise ValueError("load resistance must be positive (or None for open)")

    def ac(k):
        return 1 if k == 0 else 2 * k

    def dc(k):
        return 0 if k == 0 else 2 * k + 1

    els: list = [SineSource(1, vamp, freq, rs)]
    for k in range(1, levels + 1):
        els.append(Capacitor(ac(k - 1), ac(k), C_stage))
        els.append(Capacitor(dc(k - 1), dc(k), C_stage))
        els.append(Diode(dc(k - 1), ac(k), dm))
        els.append(Diode(ac(k), dc(k), dm))
    out = dc(levels)
    els.append(Capacitor(out, 0, C_load))
    if R_load is not None:
        els.append(Resistor(out, 0, R_load))
    return Circuit(2 * levels + 2, tuple(els), out)


def ideal_cw_voltage(levels: int, Vpeak: float, Vdrop: float = 0.0) -> float:
    """No-load, ripple-free output of an ideal ladder."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    return 2.0 * levels * (Vpeak - Vdrop)


# --- transient ----------------------------------------------------------------


@dataclass(frozen=True)
class Waveforms:
    time: np.ndarray  # s, uniform
    v_out: np.ndarray  # V
    v_src: np.ndarray  # V at the source terminal
    i_src: np.ndarray  # A delivered by the source into the circuit
    frequency: float  # Hz of the driving source
    nodes: np.ndarray | None = None  # (samples, n_nodes) incl. ground column
    steady: bool = False  # stopped by the steady-state criterion

    @property
    def dt(self) -> float:
        return float(self.time[1] - self.time[0])

    def rows(self) -> list[tuple[float, float, float, float]]:
        return list(zip(self.time.tolist(), self.v_out.tolist(), self.v_src.tolist(), self.i_src.tolist()))


WAVEFORM_CSV_HEADER = ("t_s", "v_out", "v_src", "i_src")


def _bandwidth(pairs) -> int:
    bw = 1
    for a, b in pairs:
        if a > 0 and b > 0:
            bw = max(bw, abs(a - b))
    return bw


def transient(
    c: Circuit,
    dt: float | None = None,
    t_end: float | None = None,
    until_steady: float | None = None,
    max_steps: int = 1_000_000,
    record_nodes: bool = False,
    max_newton: int = 100,
) -> Waveforms:
    """Fixed-step trapezoidal transient from rest.

    Give either ``t_end`` or ``until_steady`` (relative tolerance between
    consecutive period means of the output, held for 5 periods). With neither,
    the steady-state stop at 1e-6 is used. ``max_steps`` caps either mode.
    """
    src = c.source
    f = src.frequency
    if dt is None:
        dt = 1.0 / (500.0 * f)
    if not dt > 0:
        raise ValueError("dt must be positive")
    if dt > 1.0 / (200.0 * f) * (1 + 1e-12):
        warnings.warn(f"dt = {dt:.3g} s is coarser than 1/(200 f); the waveform is under-resolved", stacklevel=2)
    if t_end is not None and until_steady is not None:
        raise ValueError("give t_end or until_steady, not both")
    if t_end is None and until_steady is None:
        until_steady = 1e-6
    if t_end is not None:
        n_steps = int(round(t_end / dt))
        if n_steps > max_steps:
            raise ValueError(f"t_end needs {n_steps} steps, more than max_steps = {max_steps}")
        tol = 0.0
    else:
        n_steps = max_steps
        tol = float(until_steady)
        if not tol > 0:
            raise ValueError("until_steady tolerance must be positive")
    spp = max(1, int(round(1.0 / (f * dt))))

    caps = c.of_type(Capacitor)
    ress = c.of_type(Resistor)
    dios = c.of_type(Diode)
    params = np.array([d.model._params() for d in dios], dtype=float).reshape(-1, 4)
    pairs = [(x.a, x.b) for x in caps] + [(x.a, x.b) for x in ress] + [(d.anode, d.cathode) for d in dios]

    status, steps, t_stop, v_out, v_src, i_src, nodes = _kernel.run_transient(
        c.n_nodes - 1,
        _bandwidth(pairs),
        np.array([x.a for x in caps], dtype=np.int64),
        np.array([x.b for x in caps], dtype=np.int64),
        np.array([x.C for x in caps], dtype=float),
        np.array([x.a for x in ress], dtype=np.int64),
        np.array([x.b for x in ress], dtype=np.int64),
        np.array([1.0 / x.R for x in ress], dtype=float),
        np.array([d.anode for d in dios], dtype=np.int64),
        np.array([d.cathode for d in dios], dtype=np.int64),
        params[:, 0].astype(np.int64),
        params[:, 1].copy(),
        params[:, 2].copy(),
        params[:, 3].copy(),
        src.node,
        float(src.amplitude),
        float(f),
        1.0 / src.rs,
        c.output_node,
        float(dt),
        n_steps,
        tol,
        spp,
        record_nodes,
        max_newton,
        1e-6,
        1e-6,
        4,
    )
    if status == _kernel.NEWTON_FAILED:
        raise NumericalError(f"Newton iteration did not converge at t = {t_stop:.6g} s, even with dt/16 substeps")
    if status == _kernel.STEP_CAP:
        warnings.warn(f"no steady state within {max_steps} steps ({t_stop:.4g} s); returning the truncated run", stacklevel=2)
    k = steps + 1
    return Waveforms(
        time=np.arange(k) * dt,
        v_out=v_out[:k].copy(),
        v_src=v_src[:k].copy(),
        i_src=i_src[:k].copy(),
        frequency=f,
        nodes=nodes[:k].copy() if record_nodes else None,
        steady=(tol > 0 and status == _kernel.OK),
    )


# --- metrics ------------------------------------------------------------------


@dataclass(frozen=True)
class PumpMetrics:
    Vdc: float  # V, output mean over the last period
    ripple: float  # V peak-to-peak over the last period
    startup_time: float  # s to first reach 95 % of Vdc
    Pin_transient_avg: float  # W, mean source power over the startup
    Pin_steady: float  # W, mean source power over the last period
    Iin_steady_rms: float  # A, rms source current over the last period

    def to_dict(self) -> dict[str, float]:
        return {k: float(v) for k, v in asdict(self).items()}


def steady_state_metrics(w: Waveforms, f_source: float) -> PumpMetrics:
    spp = int(round(1.0 / (f_source * w.dt)))
    n = len(w.time) - 1
    if n < 10 * spp:
        raise ValueError(f"need at least 10 source periods, waveforms cover {n / spp:.2f}")
    last = slice(n - spp + 1, n + 1)
    vout = w.v_out[last]
    vdc = float(np.mean(vout))
    power = w.v_src * w.i_src
    target = 0.95 * vdc
    if vdc == 0.0:
        k95 = 0
    else:
        hit = np.nonzero(w.v_out >= target if vdc > 0 else w.v_out <= target)[0]
        k95 = int(hit[0]) if hit.size else n
    p_transient = float(np.mean(power[1 : k95 + 1])) if k95 > 0 else 0.0
    return PumpMetrics(
        Vdc=vdc,
        ripple=float(np.ptp(vout)),
        startup_time=float(w.time[k95]),
        Pin_transient_avg=p_transient,
        Pin_steady=float(np.mean(power[last])),
        Iin_steady_rms=float(math.sqrt(np.mean(w.i_src[last] ** 2))),
    )

"""Scenario orchestration: build the device from a validated config, run the
requested analysis and write its artifacts."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .config import FilmSet, GeometrySpec, Scenario
from .io import emit_csv, emit_json
from .laminate import Layer, LayerStack
from .materials import MaterialLibrary
from .modal import DeviceGeometry, modal_mass, mode_of
from .pump import (
    WAVEFORM_CSV_HEADER,
    ExponentialDiode,
    IdealSwitchDiode,
    build_ladder,
    ideal_cw_voltage,
    steady_state_metrics,
    transient,
)
from .twoport import (
    GAIN_CSV_HEADER,
    OPEN,
    build_two_port,
    find_peak_gain,
    frequency_sweep,
    output_impedance,
    voltage_gain,
)

log = logging.getLogger(__name__)

MODES_CSV_HEADER = ("mode", "eigenvalue", "freq_hz", "modal_mass_kg", "modal_stiffness_n_per_m")


@dataclass
class RunReport:
    scenario: dict
    files: list[str] = field(default_factory=list)
    headline: dict = field(default_factory=dict)
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def build_stack(layers, lib: MaterialLibrary) -> LayerStack:
    return LayerStack(tuple(Layer(lib[lay.material], lay.thickness_m, lay.role) for lay in layers))


def build_geometry(spec: GeometrySpec, lib: MaterialLibrary, films: FilmSet | None = None) -> DeviceGeometry:
    extent = spec.radius_m if spec.kind == "disc_clamped" else spec.length_m
    stack = build_stack(spec.stack, lib)
    secondary = build_stack(spec.secondary_stack, lib) if spec.secondary_stack else None
    if secondary is None:
        secondary = stack.relabelled("piezo_primary", "piezo_secondary")
    if films is not None:
        stack = stack.with_material("piezo_primary", lib[films.primary])
        secondary = secondary.with_material("piezo_secondary", lib[films.secondary])
    return DeviceGeometry(
        kind=spec.kind,
        extent=extent,
        stack=stack,
        primary_region=tuple(f * extent for f in spec.primary_region),
        secondary_region=tuple(f * extent for f in spec.secondary_region),
        width=spec.width_m,
        secondary_stack=secondary,
        poisson=spec.poisson,
    )


def _load(s: Scenario) -> float:
    return OPEN if s.load_ohm is None else s.load_ohm


def _json_float(x: float):
    return None if math.isinf(x) else float(x)


def _twoport_summary(tp) -> dict:
    return {k: float(v) for k, v in asdict(tp).items()}


def run_modes(s: Scenario, out: Path, report: RunReport) -> None:
    lib = s.library()
    geom = build_geometry(s.geometry, lib)
    rows = []
    for n in range(1, s.n_modes + 1):
        mode = mode_of(geom, n)
        m = modal_mass(mode, geom)
        rows.append((n, float(mode.eigenvalue), float(mode.frequency), float(m), float(mode.omega**2 * m)))
    report.files.append(str(emit_csv(rows, out / "modes.csv", MODES_CSV_HEADER)))
    report.headline["f1_hz"] = rows[0][2]


def _sweep_one(s: Scenario, geom: DeviceGeometry) -> tuple[dict, object]:
    tp = build_two_port(geom, s.mode_index, s.Q)
    if s.f_lo_hz is not None:
        f_lo, f_hi = s.f_lo_hz, s.f_hi_hz
    else:
        f_lo, f_hi = tp.f0 * (1 - s.span), tp.f0 * (1 + s.span)
    load = _load(s)
    curve = frequency_sweep(tp, f_lo, f_hi, s.points, load, s.spacing)
    f_pk, g_pk = find_peak_gain(tp, f_lo, f_hi, load)
    summary = {
        "f0_hz": float(tp.f0),
        "f_peak_hz": float(f_pk),
        "gain_peak": float(g_pk),
        "two_port": _twoport_summary(tp),
    }
    return summary, curve


def run_sweep(s: Scenario, out: Path, report: RunReport) -> None:
    lib = s.library()
    sets = s.films or [None]
    results = {}
    for fs in sets:
        label = fs.label if fs else "device"
        summary, curve = _sweep_one(s, build_geometry(s.geometry, lib, fs))
        if fs:
            summary["films"] = {"primary": fs.primary, "secondary": fs.secondary}
        results[label] = summary
        report.files.append(str(emit_csv(curve.rows(), out / f"gain_{label}.csv", GAIN_CSV_HEADER)))
        log.info("%s: f_peak = %.6g Hz, |G|peak = %.6g", label, summary["f_peak_hz"], summary["gain_peak"])
    doc = {"load_ohm": _json_float(_load(s)), "mode_index": s.mode_index, "Q": s.Q, "configurations": results}
    last = results[list(results)[-1]]
    report.headline.update(f_peak_hz=last["f_peak_hz"], gain_peak=last["gain_peak"])
    if len(results) >= 2:
        labels = list(results)
        first = results[labels[0]]
        factor = last["gain_peak"] / first["gain_peak"]
        doc["comparison"] = {"reference": labels[0], "candidate": labels[-1], "improvement_factor": factor}
        report.headline["gains"] = {k: v["gain_peak"] for k, v in results.items()}
        report.headline["improvement_factor"] = factor
    report.files.append(str(emit_json(doc, out / "summary.json")))


def _diode(s: Scenario):
    d = s.diode
    if d.model == "exponential":
        return ExponentialDiode(d.is_a, d.n, d.vt_v)
    return IdealSwitchDiode(d.ron_ohm, d.goff_s, d.vdrop_v)


def _pump(s: Scenario, amplitude: float, frequency: float, rs: float, out: Path, report: RunReport) -> dict:
    circuit = build_ladder(s.levels, s.c_stage_f, s.c_load_f, s.r_load_ohm, _diode(s), (amplitude, frequency, rs))
    if s.t_end_s is not None:
        w = transient(circuit, dt=s.dt_s, t_end=s.t_end_s, max_steps=s.max_steps)
    else:
        w = transient(circuit, dt=s.dt_s, until_steady=s.steady_tol, max_steps=s.max_steps)
    metrics = steady_state_metrics(w, frequency)
    stride = max(1, math.ceil(len(w.time) / s.waveform_max_rows))
    rows = zip(*(arr[::stride].tolist() for arr in (w.time, w.v_out, w.v_src, w.i_src)))
    report.files.append(str(emit_csv(rows, out / "waveforms.csv", WAVEFORM_CSV_HEADER)))
    report.files.append(str(emit_json(metrics.to_dict(), out / "metrics.json")))
    report.headline.update(Vdc=metrics.Vdc, Pin_steady=metrics.Pin_steady)
    vdrop = s.diode.vdrop_v if s.diode.model == "ideal_switch" else 0.0
    return {
        "levels": s.levels,
        "source": {"amplitude_v": amplitude, "frequency_hz": frequency, "rs_ohm": rs},
        "dt_s": w.dt,
        "steps": len(w.time) - 1,
        "reached_steady_state": bool(w.steady),
        "ideal_bound_v": ideal_cw_voltage(s.levels, amplitude, vdrop),
        "waveform_stride": stride,
        "metrics": metrics.to_dict(),
    }


def run_pump(s: Scenario, out: Path, report: RunReport) -> None:
    rs = s.rs_ohm if s.rs_ohm is not None else 1e3
    doc = _pump(s, s.amplitude_v, s.frequency_hz, rs, out, report)
    report.files.append(str(emit_json(doc, out / "summary.json")))


def run_chain(s: Scenario, out: Path, report: RunReport) -> None:
    lib = s.library()
    fs = s.films[-1] if s.films else None
    geom = build_geometry(s.geometry, lib, fs)
    tp = build_two_port(geom, s.mode_index, s.Q)
    if s.frequency_hz is None:
        f_src, _ = find_peak_gain(tp, tp.f0 * (1 - s.span), tp.f0 * (1 + s.span), OPEN)
    else:
        f_src = s.frequency_hz
    w = 2 * math.pi * f_src
    v_th = abs(voltage_gain(tp, w, OPEN)) * s.drive_v
    rs = s.rs_ohm if s.rs_ohm is not None else abs(output_impedance(tp, w))
    doc = {
        "two_port": _twoport_summary(tp),
        "drive_v": s.drive_v,
        "thevenin": {"frequency_hz": f_src, "v_th": v_th, "z_out_abs_ohm": abs(output_impedance(tp, w))},
    }
    doc["pump"] = _pump(s, v_th, f_src, rs, out, report)
    report.headline["v_th"] = v_th
    report.files.append(str(emit_json(doc, out / "summary.json")))


_RUNNERS = {"modes": run_modes, "sweep": run_sweep, "pump": run_pump, "chain": run_chain}


def run_scenario(s: Scenario, out_dir) -> RunReport:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = RunReport(scenario=s.model_dump(mode="json"))
    t0 = time.perf_counter()
    _RUNNERS[s.kind](s, out, report)
    report.wall_time_s = time.perf_counter() - t0
    return report

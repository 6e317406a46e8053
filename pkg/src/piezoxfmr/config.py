"""Scenario configuration: strict JSON schema with defaults."""

from __future__ import annotations

import json
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError
from .materials import EPS0, ElasticMaterial, MaterialLibrary, PiezoMaterial, builtin_materials

PosFloat = Annotated[float, Field(gt=0)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class MaterialSpec(_Strict):
    """New material, or a partial override of a built-in one."""

    s11: PosFloat | None = None
    rho: Annotated[float, Field(ge=0)] | None = None
    d31: float | None = None
    eps33T_rel: PosFloat | None = None


class LayerSpec(_Strict):
    material: str
    thickness_m: PosFloat
    role: Literal["substrate", "piezo_primary", "piezo_secondary"] = "substrate"


class GeometrySpec(_Strict):
    kind: Literal["beam_cantilever", "bridge_clamped_clamped", "beam_free_free", "disc_clamped"]
    length_m: PosFloat | None = None
    radius_m: PosFloat | None = None
    width_m: PosFloat | None = None
    stack: Annotated[list[LayerSpec], Field(min_length=1)]
    secondary_stack: list[LayerSpec] | None = None
    # electrode intervals as fractions of the length (beams) or radius (discs)
    primary_region: tuple[Annotated[float, Field(ge=0, le=1)], Annotated[float, Field(ge=0, le=1)]]
    secondary_region: tuple[Annotated[float, Field(ge=0, le=1)], Annotated[float, Field(ge=0, le=1)]]
    poisson: Annotated[float, Field(gt=-1, lt=0.5)] = 0.3

    @model_validator(mode="after")
    def _shape(self):
        disc = self.kind == "disc_clamped"
        if disc and self.radius_m is None:
            raise ValueError("disc geometry needs radius_m")
        if not disc and (self.length_m is None or self.width_m is None):
            raise ValueError("beam geometry needs length_m and width_m")
        for name in ("primary_region", "secondary_region"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} must be increasing, got [{lo}, {hi}]")
        return self


class FilmSet(_Strict):
    label: Annotated[str, Field(pattern=r"^[A-Za-z0-9_.-]+$")]
    primary: str
    secondary: str


class ExponentialDiodeSpec(_Strict):
    model: Literal["exponential"]
    is_a: PosFloat = 1e-9
    n: PosFloat = 1.2
    vt_v: PosFloat = 25.85e-3


class SwitchDiodeSpec(_Strict):
    model: Literal["ideal_switch"]
    ron_ohm: PosFloat = 1.0
    goff_s: Annotated[float, Field(ge=0)] = 0.0
    vdrop_v: Annotated[float, Field(ge=0)] = 0.0


DiodeSpec = Annotated[Union[ExponentialDiodeSpec, SwitchDiodeSpec], Field(discriminator="model")]


class Scenario(_Strict):
    kind: Literal["modes", "sweep", "pump", "chain"]
    materials: dict[str, MaterialSpec] = {}
    geometry: GeometrySpec | None = None

    # modal / two-port
    mode_index: Annotated[int, Field(ge=1)] = 1
    n_modes: Annotated[int, Field(ge=1)] = 5
    Q: PosFloat = 200.0
    load_ohm: PosFloat | None = 1e7  # null = open secondary
    films: list[FilmSet] | None = None
    f_lo_hz: PosFloat | None = None
    f_hi_hz: PosFloat | None = None
    span: Annotated[float, Field(gt=0, lt=1)] = 0.2  # default sweep: f0 * (1 -/+ span)
    points: Annotated[int, Field(ge=2)] = 2001
    spacing: Literal["log", "linear"] = "log"

    # pump
    levels: Annotated[int, Field(ge=1)] = 30
    c_stage_f: PosFloat = 100e-12
    c_load_f: PosFloat = 1e-9
    r_load_ohm: PosFloat | None = None
    diode: DiodeSpec = ExponentialDiodeSpec(model="exponential")
    amplitude_v: Annotated[float, Field(ge=0)] = 0.05
    frequency_hz: PosFloat | None = 150e3  # chain: null = drive at the peak-gain frequency
    rs_ohm: PosFloat | None = None  # pump: 1 kohm; chain: |Z_out| of the transformer
    drive_v: Annotated[float, Field(ge=0)] = 0.05  # chain: primary drive amplitude
    dt_s: PosFloat | None = None
    t_end_s: PosFloat | None = None
    steady_tol: PosFloat = 1e-6
    max_steps: Annotated[int, Field(ge=1)] = 1_000_000
    waveform_max_rows: Annotated[int, Field(ge=2)] = 20000

    @model_validator(mode="after")
    def _consistency(self):
        if self.kind in ("modes", "sweep", "chain") and self.geometry is None:
            raise ValueError(f"kind {self.kind!r} needs a geometry")
        if self.f_lo_hz is not None and self.f_hi_hz is not None and not self.f_lo_hz < self.f_hi_hz:
            raise ValueError(f"f_lo_hz ({self.f_lo_hz}) must be below f_hi_hz ({self.f_hi_hz})")
        if (self.f_lo_hz is None) != (self.f_hi_hz is None):
            raise ValueError("give both f_lo_hz and f_hi_hz or neither")
        if self.kind == "pump" and self.frequency_hz is None:
            raise ValueError("pump scenarios need frequency_hz")
        return self

    def library(self) -> MaterialLibrary:
        return build_library(self.materials)

    def referenced_materials(self) -> list[tuple[str, str]]:
        refs: list[tuple[str, str]] = []
        if self.geometry is not None:
            for key in ("stack", "secondary_stack"):
                for i, lay in enumerate(getattr(self.geometry, key) or []):
                    refs.append((f"geometry.{key}.{i}.material", lay.material))
        for i, fs in enumerate(self.films or []):
            refs.append((f"films.{i}.primary", fs.primary))
            refs.append((f"films.{i}.secondary", fs.secondary))
        return refs


def build_library(overrides: dict[str, MaterialSpec]) -> MaterialLibrary:
    lib = builtin_materials()
    for name, spec in overrides.items():
        base = lib.get(name)
        fields = {k: v for k, v in spec.model_dump().items() if v is not None}
        eps_rel = fields.pop("eps33T_rel", None)
        if base is None:
            if "s11" not in fields or "rho" not in fields:
                raise ConfigError(f"materials.{name}: new materials need s11 and rho")
        s11 = fields.get("s11", base.s11 if base else None)
        rho = fields.get("rho", base.rho if base else None)
        d31 = fields.get("d31", getattr(base, "d31", None))
        if eps_rel is not None:
            eps = eps_rel * EPS0
        else:
            eps = getattr(base, "eps33T", None)
        try:
            if d31 is None:
                if eps_rel is not None:
                    raise ValueError("eps33T_rel given for a non-piezoelectric material")
                mat: ElasticMaterial = ElasticMaterial(name, s11=s11, rho=rho)
            else:
                if eps is None:
                    raise ValueError("piezoelectric materials need eps33T_rel")
                mat = PiezoMaterial(name, s11=s11, rho=rho, d31=d31, eps33T=eps)
        except ValueError as exc:
            raise ConfigError(f"materials.{name}: {exc}") from None
        lib = lib.extended(mat)
    return lib


def _format_validation(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        path = ".".join(str(p) for p in e["loc"]) or "<root>"
        msg = e["msg"]
        if e["type"] == "extra_forbidden":
            msg = "unknown key"
        lines.append(f"{path}: {msg}")
    return "; ".join(lines)


def validate_config(data: dict) -> Scenario:
    try:
        scenario = Scenario.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_validation(exc)) from None
    lib = scenario.library()
    for path, name in scenario.referenced_materials():
        if name not in lib:
            raise ConfigError(f"{path}: unknown material {name!r}")
    for fs_idx, fs in enumerate(scenario.films or []):
        for side in ("primary", "secondary"):
            if not lib[getattr(fs, side)].is_piezo:
                raise ConfigError(f"films.{fs_idx}.{side}: {getattr(fs, side)!r} is not piezoelectric")
    return scenario


def parse_config(text: str, overrides: list[str] | None = None, kind: str | None = None) -> Scenario:
    """Parse and validate a JSON scenario. ``overrides`` are ``dotted.path=value``
    strings applied before validation; values are read as JSON when possible.
    ``kind`` fills in a missing ``kind`` key and must match a present one."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("<root>: a scenario must be a JSON object")
    if kind is not None:
        given = data.setdefault("kind", kind)
        if given != kind:
            raise ConfigError(f"kind: config describes a {given!r} scenario, not {kind!r}")
    for item in overrides or []:
        apply_override(data, item)
    return validate_config(data)


def apply_override(data: dict, item: str) -> None:
    key, sep, raw = item.partition("=")
    if not sep or not key:
        raise ConfigError(f"override {item!r} is not of the form key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = data
    for i, part in enumerate(parts[:-1]):
        nxt = _child(node, part, key)
        if nxt is None:
            nxt = {}
            _assign(node, part, nxt, key)
        node = nxt
    _assign(node, parts[-1], value, key)


def _child(node, part, key):
    if isinstance(node, list):
        try:
            return node[int(part)]
        except (ValueError, IndexError):
            raise ConfigError(f"override {key}: bad list index {part!r}") from None
    if isinstance(node, dict):
        return node.get(part)
    raise ConfigError(f"override {key}: cannot descend into a scalar at {part!r}")


def _assign(node, part, value, key):
    if isinstance(node, list):
        try:
            node[int(part)] = value
        except (ValueError, IndexError):
            raise ConfigError(f"override {key}: bad list index {part!r}") from None
    elif isinstance(node, dict):
        node[part] = value
    else:
        raise ConfigError(f"override {key}: cannot assign into a scalar")

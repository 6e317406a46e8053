"""Piezoelectric transformer and Cockcroft-Walton charge-pump simulator."""

from .config import Scenario, parse_config, validate_config
from .errors import ConfigError, NumericalError
from .laminate import Layer, LayerStack, coupling_arm, flexural_rigidity, mass_per_length, neutral_axis
from .materials import (
    EPS0,
    ElasticMaterial,
    MaterialLibrary,
    PiezoMaterial,
    builtin_materials,
    clamped_permittivity,
    effective_e31,
)
from .modal import DeviceGeometry, ModeShape, beam_char_roots, modal_mass, mode_of, plate_char_roots
from .pump import (
    Capacitor,
    Circuit,
    Diode,
    ExponentialDiode,
    IdealSwitchDiode,
    PumpMetrics,
    Resistor,
    SineSource,
    Waveforms,
    build_ladder,
    ideal_cw_voltage,
    steady_state_metrics,
    transient,
)
from .scenarios import RunReport, run_scenario
from .twoport import (
    OPEN,
    GainCurve,
    TwoPort,
    build_two_port,
    find_peak_gain,
    force_factor,
    frequency_sweep,
    input_admittance,
    output_impedance,
    voltage_gain,
)

__version__ = "0.1.0"

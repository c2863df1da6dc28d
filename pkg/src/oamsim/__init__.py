"""Scalar wave-optics simulation of orbital-angular-momentum conservation
in stimulated parametric down-conversion, with fork-interferogram readout."""

from .analysis import (
    ForkReport,
    OAMSpectrum,
    detect_fork,
    dominant_charge,
    estimate_carrier,
    fringe_demodulate,
    measure_charge,
    oam_spectrum,
    winding_number,
)
from .crystal import CrystalConfig, expected_idler_charge, idler_wavelength, stimulated_idler
from .detector import DetectorScan, add_shot_noise, detector_scan, read_pgm, to_grayscale_bitmap
from .errors import (
    ConfigError,
    DemodulationError,
    GeometryError,
    OpticsError,
    SamplingError,
    UnreliableLoopError,
)
from .fields import (
    ComplexField,
    GridSpec,
    LGModeSpec,
    apply_thin_lens,
    conjugate_field,
    inner_product,
    mirror_x,
    propagate_angular_spectrum,
    synthesize_lg,
    total_power,
)
from .michelson import MichelsonConfig, michelson_interferogram, shift_field
from .scenario import (
    ALL_OUTPUTS,
    FIGURES,
    PUMP_WAVELENGTH,
    SIGNAL_WAVELENGTH,
    ScenarioConfig,
    ScenarioReport,
    config_to_dict,
    default_grid,
    default_michelson,
    figure_config,
    load_config,
    report_to_dict,
    run_scenario,
    sweep_configs,
    variant,
)

__version__ = "0.1.0"

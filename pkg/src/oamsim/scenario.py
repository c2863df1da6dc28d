"""Scenario orchestration: configuration, end-to-end runs, figure presets.

A scenario synthesizes pump and auxiliary beams, generates the stimulated
idler, pushes beams through the misaligned Michelson, and measures the
idler charge three independent ways (azimuthal spectrum, direct phase
winding, fork reading of the interferogram).  Detector scans and graymap
bitmaps mirror the scanned-photodiode measurement.
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .analysis import (
    ForkReport,
    OAMSpectrum,
    detect_fork,
    dominant_charge,
    oam_spectrum,
    winding_number,
)
from .crystal import CrystalConfig, expected_idler_charge, stimulated_idler
from .detector import DetectorScan, add_shot_noise, detector_scan, to_grayscale_bitmap
from .errors import ConfigError, OpticsError
from .fields import ComplexField, GridSpec, LGModeSpec, propagate_angular_spectrum, synthesize_lg
from .michelson import MichelsonConfig, michelson_interferogram

__all__ = [
    "ScenarioConfig",
    "ScenarioReport",
    "run_scenario",
    "default_grid",
    "default_michelson",
    "figure_config",
    "load_config",
    "config_to_dict",
    "report_to_dict",
    "FIGURES",
    "ALL_OUTPUTS",
    "PUMP_WAVELENGTH",
    "SIGNAL_WAVELENGTH",
]

# Experimental wavelengths: 442 nm He-Cd pump, ~845 nm auxiliary diode.
PUMP_WAVELENGTH = 442e-9
SIGNAL_WAVELENGTH = 845e-9
DEFAULT_WAIST = 0.5e-3

ALL_OUTPUTS = (
    "idler_intensity",
    "pump_interferogram",
    "idler_interferogram",
    "oam_spectrum",
    "fork_report",
)


def default_grid(
    pump: LGModeSpec, aux: LGModeSpec, n: int = 256
) -> GridSpec:
    """Smallest square grid satisfying the synthesis sampling rules for both
    beams, with a floor of 8 waists."""
    w = max(pump.waist_w0, aux.waist_w0)
    order = max(
        abs(pump.charge_m) + pump.radial_index_p,
        abs(aux.charge_m) + aux.radial_index_p,
    )
    extent = max(8 * w, 6 * w * float(np.sqrt(order + 1)))
    return GridSpec(n, n, extent, extent)


def default_michelson(waist: float, tilt_y_ratio: float = 0.12) -> MichelsonConfig:
    """Misalignment defaults: fringe period waist/4 (several stripes across
    the doughnut, and enough carrier separation to demodulate forks up to
    |charge| 4), horizontal shear 0.8 waist so the side of one arm output
    overlaps the center of the other, and a small vertical tilt that rotates
    the fork axis off vertical."""
    tilt_x = 2 * np.pi / (waist / 4)
    return MichelsonConfig(
        tilt_x=tilt_x,
        tilt_y=tilt_y_ratio * tilt_x,
        shear=(0.8 * waist, 0.0),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulated experiment run."""

    pump: LGModeSpec
    aux: LGModeSpec
    crystal: CrystalConfig = CrystalConfig()
    michelson: MichelsonConfig = None
    grid: GridSpec = None
    scan_idler: tuple = (20, 20)
    scan_pump: tuple = (30, 30)
    scan_extent: float = None
    outputs: tuple = ALL_OUTPUTS
    noise_seed: int = None
    mean_counts: float = None
    propagation_distance: float = 0.0

    def __post_init__(self):
        if self.pump.wavelength >= self.aux.wavelength:
            raise ConfigError(
                "pump wavelength must be shorter than the auxiliary wavelength"
            )
        for dims in (self.scan_idler, self.scan_pump):
            if min(dims) < 8:
                raise ConfigError(f"scan resolution {dims} is below 8x8")
        unknown = set(self.outputs) - set(ALL_OUTPUTS)
        if unknown:
            raise ConfigError(f"unknown outputs requested: {sorted(unknown)}")
        if self.mean_counts is not None and self.mean_counts <= 0:
            raise ConfigError("mean_counts must be positive")

    def resolved_grid(self) -> GridSpec:
        return self.grid if self.grid is not None else default_grid(self.pump, self.aux)

    def resolved_michelson(self) -> MichelsonConfig:
        if self.michelson is not None:
            return self.michelson
        return default_michelson(self.pump.waist_w0)


@dataclass
class ScenarioReport:
    """Products and charge bookkeeping of one scenario run."""

    config: ScenarioConfig
    expected_charge: int
    measured: dict
    spectrum: OAMSpectrum
    fork: ForkReport
    scans: dict = field(default_factory=dict)
    bitmaps: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def conserved(self) -> bool:
        return all(v == self.expected_charge for v in self.measured.values())


def _crop_center(intensity: np.ndarray, grid: GridSpec, extent: float, dims):
    """Central sub-window of roughly the requested extent (whole cells).

    For even detector resolutions the window is shifted by half a detector
    cell so that one cell is centered on the beam axis, mirroring a detector
    scan that was peaked on axis first.
    """
    kx = min(int(round(extent / (2 * grid.dx))), grid.n_x // 2)
    ky = min(int(round(extent / (2 * grid.dy))), grid.n_y // 2)
    if kx < 4 or ky < 4:
        raise ConfigError(f"scan extent {extent:g} m covers too few grid cells")
    off_x = int(round(kx / dims[0])) if dims[0] % 2 == 0 else 0
    off_y = int(round(ky / dims[1])) if dims[1] % 2 == 0 else 0
    kx = min(kx, grid.n_x // 2 - off_x)
    ky = min(ky, grid.n_y // 2 - off_y)
    sx = slice(grid.n_x // 2 - kx + off_x, grid.n_x // 2 + kx + off_x)
    sy = slice(grid.n_y // 2 - ky + off_y, grid.n_y // 2 + ky + off_y)
    return intensity[sx, sy], 2 * kx * grid.dx, 2 * ky * grid.dy


def _scan_product(cfg: ScenarioConfig, intensity, grid, dims, seed_offset):
    if cfg.scan_extent is not None:
        window, ex, ey = _crop_center(intensity, grid, cfg.scan_extent, dims)
    else:
        window, ex, ey = intensity, grid.extent_x, grid.extent_y
    scan = detector_scan(window, ex, ey, dims[0], dims[1])
    if cfg.mean_counts is not None:
        seed = (cfg.noise_seed or 0) + seed_offset
        scan = add_shot_noise(scan, cfg.mean_counts, seed)
    return scan


def _mean_radius(intensity: np.ndarray, grid: GridSpec, center) -> float:
    xx, yy = grid.meshgrid()
    r = np.hypot(xx - center[0], yy - center[1])
    return float((intensity * r).sum() / intensity.sum())


def run_scenario(cfg: ScenarioConfig) -> ScenarioReport:
    """Execute one scenario deterministically and measure the idler charge
    by all three analysis paths."""
    try:
        grid = cfg.resolved_grid()
        mich = cfg.resolved_michelson()
        pump = synthesize_lg(cfg.pump, grid)
        aux = synthesize_lg(cfg.aux, grid)
        idler = stimulated_idler(pump, aux, cfg.crystal)
        if cfg.propagation_distance:
            pump = propagate_angular_spectrum(pump, cfg.propagation_distance)
            idler = propagate_angular_spectrum(idler, cfg.propagation_distance)

        expected = expected_idler_charge(cfg.pump.charge_m, cfg.aux.charge_m)
        center = cfg.pump.center

        spectrum = oam_spectrum(idler, center=center, max_charge=6)
        charge_spectrum = dominant_charge(spectrum)

        idler_i = idler.intensity()
        r_loop = _mean_radius(idler_i, grid, center)
        r_loop = min(
            max(r_loop, 6 * grid.dx),
            grid.extent_x / 2 - abs(center[0]) - grid.dx,
            grid.extent_y / 2 - abs(center[1]) - grid.dy,
        )
        charge_winding = winding_number(
            np.angle(idler.amplitude), grid, center, r_loop
        )

        interferogram = michelson_interferogram(idler, mich)
        fork = detect_fork(interferogram, grid, mich)

        report = ScenarioReport(
            config=cfg,
            expected_charge=expected,
            measured={
                "spectrum": charge_spectrum,
                "winding": charge_winding,
                "fork": fork.charge,
            },
            spectrum=spectrum,
            fork=fork,
        )

        if "idler_intensity" in cfg.outputs:
            scan = _scan_product(cfg, idler_i, grid, cfg.scan_idler, 1)
            report.scans["idler_intensity"] = scan
            report.bitmaps["idler_intensity"] = _bitmap(scan, report)
        if "pump_interferogram" in cfg.outputs:
            pump_ifg = michelson_interferogram(pump, mich)
            scan = _scan_product(cfg, pump_ifg, grid, cfg.scan_pump, 2)
            report.scans["pump_interferogram"] = scan
            report.bitmaps["pump_interferogram"] = _bitmap(scan, report)
        if "idler_interferogram" in cfg.outputs:
            scan = _scan_product(cfg, interferogram, grid, cfg.scan_idler, 3)
            report.scans["idler_interferogram"] = scan
            report.bitmaps["idler_interferogram"] = _bitmap(scan, report)
        return report
    except OpticsError:
        raise
    except ValueError as exc:
        raise type(exc)(f"scenario failed: {exc}") from exc


def _bitmap(scan: DetectorScan, report: ScenarioReport) -> bytes:
    import warnings as _warnings

    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        data = to_grayscale_bitmap(scan)
    for w in caught:
        report.warnings.append(str(w.message))
    return data


# ---------------------------------------------------------------------------
# Figure presets: canonical detector scans of the experiment.

FIGURES = ("fig2", "fig3a", "fig3b", "fig4a", "fig4b")


def figure_config(name: str, waist: float = DEFAULT_WAIST, n: int = 256) -> ScenarioConfig:
    """Preset scenario for one of the canonical figures.

    fig2: 30x30 pump-beam fork interferogram (pump m=+1).
    fig3a/fig3b: 20x20 idler intensity doughnuts for (m_p, m_s) = (+1, 0)
    and (0, +1).  fig4a/fig4b: the matching 20x20 idler interferograms.
    """
    if name not in FIGURES:
        raise ConfigError(f"unknown figure {name!r}; choose one of {FIGURES}")
    charges = {"fig2": (1, 0), "fig3a": (1, 0), "fig3b": (0, 1), "fig4a": (1, 0), "fig4b": (0, 1)}
    outputs = {
        "fig2": ("pump_interferogram",),
        "fig3a": ("idler_intensity",),
        "fig3b": ("idler_intensity",),
        "fig4a": ("idler_interferogram",),
        "fig4b": ("idler_interferogram",),
    }
    m_p, m_s = charges[name]
    # Bitmap-friendly readout: fringe period waist/2 so the coarse detector
    # scans resolve the stripes, and a scan window sized to the beam.
    tilt_x = 4 * np.pi / waist
    return ScenarioConfig(
        pump=LGModeSpec(waist_w0=waist, charge_m=m_p, wavelength=PUMP_WAVELENGTH),
        aux=LGModeSpec(waist_w0=waist, charge_m=m_s, wavelength=SIGNAL_WAVELENGTH),
        michelson=MichelsonConfig(
            tilt_x=tilt_x, tilt_y=0.12 * tilt_x, shear=(0.8 * waist, 0.0)
        ),
        grid=GridSpec(n, n, 10 * waist, 10 * waist),
        scan_extent=(4 * waist if name == "fig2" else 2.8 * waist),
        outputs=outputs[name] + ("oam_spectrum", "fork_report"),
    )


# ---------------------------------------------------------------------------
# JSON configuration and report serialization.


def _mode_from_dict(d: dict, default_wavelength: float) -> LGModeSpec:
    return LGModeSpec(
        waist_w0=d.get("waist", DEFAULT_WAIST),
        radial_index_p=d.get("radial_index", 0),
        charge_m=d.get("charge", 0),
        center=tuple(d.get("center", (0.0, 0.0))),
        global_phase=d.get("phase", 0.0),
        wavelength=d.get("wavelength", default_wavelength),
    )


def load_config(source) -> ScenarioConfig:
    """Build a ScenarioConfig from a JSON file path or an already-parsed
    dict.  Any malformed input raises ConfigError."""
    if isinstance(source, dict):
        doc = source
    else:
        try:
            with open(source) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {source}: {exc}") from exc
    try:
        pump = _mode_from_dict(doc.get("pump", {}), PUMP_WAVELENGTH)
        aux = _mode_from_dict(doc.get("aux", {}), SIGNAL_WAVELENGTH)
        crystal = CrystalConfig(
            gain=doc.get("crystal", {}).get("gain", 1.0),
            crystal_length=doc.get("crystal", {}).get("length", 3e-3),
        )
        mich = None
        if doc.get("michelson") is not None:
            m = doc["michelson"]
            mich = MichelsonConfig(
                tilt_x=m["tilt_x"],
                tilt_y=m.get("tilt_y", 0.0),
                shear=tuple(m.get("shear", (0.0, 0.0))),
                arm_phase=m.get("arm_phase", 0.0),
                arm_ratio=m.get("arm_ratio", 1.0),
            )
        grid = None
        if doc.get("grid") is not None:
            g = doc["grid"]
            n_x = g.get("n_x", g.get("n", 256))
            n_y = g.get("n_y", n_x)
            extent_x = g["extent_x"] if "extent_x" in g else g["extent"]
            extent_y = g.get("extent_y", extent_x)
            grid = GridSpec(n_x, n_y, extent_x, extent_y)
        return ScenarioConfig(
            pump=pump,
            aux=aux,
            crystal=crystal,
            michelson=mich,
            grid=grid,
            scan_idler=tuple(doc.get("scan_idler", (20, 20))),
            scan_pump=tuple(doc.get("scan_pump", (30, 30))),
            scan_extent=doc.get("scan_extent"),
            outputs=tuple(doc.get("outputs", ALL_OUTPUTS)),
            noise_seed=doc.get("noise_seed"),
            mean_counts=doc.get("mean_counts"),
            propagation_distance=doc.get("propagation_distance", 0.0),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid scenario config: {exc}") from exc


def config_to_dict(cfg: ScenarioConfig) -> dict:
    """JSON-serializable echo of a scenario configuration."""

    def mode(m: LGModeSpec):
        return {
            "waist": m.waist_w0,
            "radial_index": m.radial_index_p,
            "charge": m.charge_m,
            "center": list(m.center),
            "phase": m.global_phase,
            "wavelength": m.wavelength,
        }

    mich = cfg.resolved_michelson()
    grid = cfg.resolved_grid()
    return {
        "pump": mode(cfg.pump),
        "aux": mode(cfg.aux),
        "crystal": {"gain": cfg.crystal.gain, "length": cfg.crystal.crystal_length},
        "michelson": {
            "tilt_x": mich.tilt_x,
            "tilt_y": mich.tilt_y,
            "shear": list(mich.shear),
            "arm_phase": mich.arm_phase,
            "arm_ratio": mich.arm_ratio,
        },
        "grid": {
            "n_x": grid.n_x,
            "n_y": grid.n_y,
            "extent_x": grid.extent_x,
            "extent_y": grid.extent_y,
        },
        "scan_idler": list(cfg.scan_idler),
        "scan_pump": list(cfg.scan_pump),
        "scan_extent": cfg.scan_extent,
        "outputs": list(cfg.outputs),
        "noise_seed": cfg.noise_seed,
        "mean_counts": cfg.mean_counts,
        "propagation_distance": cfg.propagation_distance,
    }


def report_to_dict(report: ScenarioReport, files: dict = None) -> dict:
    """JSON-serializable run report: expected vs measured charges, spectrum,
    fork reading, and the paths of any emitted images."""
    return {
        "config": config_to_dict(report.config),
        "expected_charge": report.expected_charge,
        "measured": dict(report.measured),
        "conserved": report.conserved,
        "oam_spectrum": {
            "window": report.spectrum.window,
            "power": {str(m): p for m, p in report.spectrum.power.items()},
            "residual": report.spectrum.residual,
            "total_power": report.spectrum.total_power,
        },
        "fork": {
            "charge": report.fork.charge,
            "singularity_location": list(report.fork.singularity_location),
            "axis_angle": report.fork.axis_angle,
            "confidence": report.fork.confidence,
        },
        "files": dict(files or {}),
        "warnings": list(report.warnings),
    }


def sweep_configs(charges=range(-2, 3), waist: float = DEFAULT_WAIST, n: int = 256):
    """Scenario per (m_p, m_s) pair of the conservation sweep."""
    for m_p in charges:
        for m_s in charges:
            yield ScenarioConfig(
                pump=LGModeSpec(waist_w0=waist, charge_m=m_p, wavelength=PUMP_WAVELENGTH),
                aux=LGModeSpec(waist_w0=waist, charge_m=m_s, wavelength=SIGNAL_WAVELENGTH),
                outputs=("oam_spectrum", "fork_report"),
            )


def variant(cfg: ScenarioConfig, **changes) -> ScenarioConfig:
    """Functional update of a frozen scenario config."""
    return replace(cfg, **changes)

"""Acceptance gate: every release criterion, one pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the criterion lines.
Each test asserts the criterion at its stated tolerance; together they cover
charge conservation, figure reproduction, wavelength bookkeeping, oracle
agreement, numerical hygiene, and shot-noise robustness.
"""

import time

import numpy as np
import pytest

from oamsim import (
    GridSpec,
    LGModeSpec,
    MichelsonConfig,
    PUMP_WAVELENGTH,
    SIGNAL_WAVELENGTH,
    add_shot_noise,
    detect_fork,
    figure_config,
    idler_wavelength,
    inner_product,
    michelson_interferogram,
    propagate_angular_spectrum,
    run_scenario,
    stimulated_idler,
    sweep_configs,
    synthesize_lg,
    total_power,
    variant,
)
from oamsim.fields import mirror_x

WAIST = 0.5e-3


def announce(criterion, ok, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


@pytest.fixture(scope="module")
def sweep_reports():
    """The 25-scenario conservation sweep, shared by several criteria."""
    start = time.perf_counter()
    reports = [run_scenario(cfg) for cfg in sweep_configs()]
    elapsed = time.perf_counter() - start
    return reports, elapsed


def test_criterion_1_charge_conservation_sweep(sweep_reports):
    reports, elapsed = sweep_reports
    failures = [
        (r.config.pump.charge_m, r.config.aux.charge_m, r.measured)
        for r in reports
        if not r.conserved
    ]
    ok = not failures and len(reports) == 25 and elapsed < 30.0
    announce(
        "1 charge-conservation sweep",
        ok,
        f"{25 - len(failures)}/25 conserved in {elapsed:.1f}s; failures={failures}",
    )


def test_criterion_2a_doughnut_dark_axis():
    worst = 0.0
    for name in ("fig3a", "fig3b"):
        cfg = figure_config(name)
        grid = cfg.resolved_grid()
        pump = synthesize_lg(cfg.pump, grid)
        aux = synthesize_lg(cfg.aux, grid)
        intensity = stimulated_idler(pump, aux, cfg.crystal).intensity()
        on_axis = intensity[grid.n_x // 2, grid.n_y // 2] / intensity.max()
        worst = max(worst, on_axis)
    announce(
        "2a doughnut dark axis", worst < 1e-10, f"worst on-axis/peak = {worst:.2e}"
    )


def test_criterion_2b_fork_charges_and_mirror_symmetry():
    charges = {}
    for name, key, expected in (
        ("fig2", "fork", 1),
        ("fig4a", "fork", 1),
        ("fig4b", "fork", -1),
    ):
        charges[name] = run_scenario(figure_config(name)).measured[key]
        assert charges[name] == expected, f"{name} fork read {charges[name]}"

    # With the vertical tilt removed, the two idler interferograms must be
    # exact x-mirror images of one another.
    patterns = {}
    for name in ("fig4a", "fig4b"):
        cfg = figure_config(name)
        mich = cfg.resolved_michelson()
        flat = MichelsonConfig(
            tilt_x=mich.tilt_x, tilt_y=0.0, shear=mich.shear,
            arm_phase=mich.arm_phase, arm_ratio=mich.arm_ratio,
        )
        grid = cfg.resolved_grid()
        pump = synthesize_lg(cfg.pump, grid)
        aux = synthesize_lg(cfg.aux, grid)
        idler = stimulated_idler(pump, aux, cfg.crystal)
        patterns[name] = michelson_interferogram(idler, flat)
    peak = patterns["fig4a"].max()
    diff = np.max(np.abs(patterns["fig4b"] - mirror_x(patterns["fig4a"]))) / peak
    ok = diff < 1e-9
    announce(
        "2b fork charges and mirror symmetry",
        ok,
        f"charges {charges}; mirror residual {diff:.2e} of peak",
    )


def test_criterion_2c_tilted_fork_axis():
    report = run_scenario(figure_config("fig4a"))
    angle = report.fork.axis_angle
    announce(
        "2c tilted fork axis", angle != 0.0, f"axis angle {angle:.4f} rad from vertical"
    )


def test_criterion_3_wavelength_bookkeeping():
    lam_i = idler_wavelength(PUMP_WAVELENGTH, SIGNAL_WAVELENGTH)
    in_band = 920e-9 <= lam_i <= 935e-9
    round_trip = idler_wavelength(PUMP_WAVELENGTH, lam_i)
    rel = abs(round_trip - SIGNAL_WAVELENGTH) / SIGNAL_WAVELENGTH
    ok = in_band and rel < 1e-12
    announce(
        "3 wavelength bookkeeping",
        ok,
        f"idler {lam_i * 1e9:.1f} nm; round-trip error {rel:.1e}",
    )


def test_criterion_4_oracle_triple_agreement(sweep_reports):
    reports, _ = sweep_reports
    agree = sum(
        len(set(r.measured.values())) == 1 and r.conserved for r in reports
    )
    announce("4 oracle triple agreement", agree == 25, f"{agree}/25 scenarios agree")


def test_criterion_5_numerical_hygiene(sweep_reports):
    reports, _ = sweep_reports
    parseval = max(
        abs(sum(r.spectrum.power.values()) + r.spectrum.residual - r.spectrum.total_power)
        / r.spectrum.total_power
        for r in reports
    )

    grid = GridSpec(256, 256, 12 * WAIST, 12 * WAIST)
    f = synthesize_lg(LGModeSpec(waist_w0=WAIST, charge_m=1, wavelength=633e-9), grid)
    drift = abs(total_power(propagate_angular_spectrum(f, 0.25)) - total_power(f))

    modes = {
        m: synthesize_lg(LGModeSpec(waist_w0=WAIST, charge_m=m, wavelength=633e-9), grid)
        for m in range(-2, 3)
    }
    cross = max(
        abs(inner_product(modes[a], modes[b]))
        for a in modes
        for b in modes
        if a != b
    )

    ok = parseval < 1e-9 and drift < 1e-9 and cross < 1e-6
    announce(
        "5 numerical hygiene",
        ok,
        f"Parseval {parseval:.1e}, propagation drift {drift:.1e}, "
        f"orthogonality {cross:.1e}",
    )


def test_criterion_6_shot_noise_robustness():
    cfg = variant(figure_config("fig4a"), outputs=("idler_interferogram",))
    report = run_scenario(cfg)
    scan = report.scans["idler_interferogram"]
    scan_grid = GridSpec(*scan.values.shape, scan.extent_x, scan.extent_y)
    mich = cfg.resolved_michelson()

    hits = 0
    for seed in range(100):
        noisy = add_shot_noise(scan, 1000.0, seed)
        try:
            hits += detect_fork(noisy.values, scan_grid, mich).charge == 1
        except Exception:
            pass
    announce("6 shot-noise robustness", hits >= 95, f"{hits}/100 noisy scans correct")

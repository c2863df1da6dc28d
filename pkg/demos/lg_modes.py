"""Gallery of Laguerre-Gaussian modes.

Synthesizes LG modes for a range of topological charges and radial
indices, prints their basic invariants (power, ring radius, pairwise
orthogonality), and saves an intensity/phase gallery as a PNG.

Run with::

    python3 demos/lg_modes.py [--out-dir OUT]
"""

import argparse
import itertools
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from oamsim import GridSpec, LGModeSpec, inner_product, synthesize_lg, total_power

WAIST = 0.5e-3
WAVELENGTH = 633e-9


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="demo_output", help="output directory")
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    grid = GridSpec(256, 256, 12 * WAIST, 12 * WAIST)
    charges = [-2, -1, 0, 1, 2]
    modes = {
        (m, p): synthesize_lg(
            LGModeSpec(waist_w0=WAIST, charge_m=m, radial_index_p=p,
                       wavelength=WAVELENGTH),
            grid,
        )
        for m in charges
        for p in (0, 1)
    }

    print("mode (m, p)   power      ring radius / w0 (expected sqrt(|m|/2))")
    for (m, p), field in modes.items():
        intensity = field.intensity()
        i, j = np.unravel_index(np.argmax(intensity), intensity.shape)
        radius = np.hypot(grid.x_coords()[i], grid.y_coords()[j]) / WAIST
        print(f"  ({m:+d}, {p})     {total_power(field):.6f}   {radius:.3f}")

    worst = max(
        abs(inner_product(modes[a], modes[b]))
        for a, b in itertools.combinations(modes, 2)
    )
    print(f"worst pairwise overlap: {worst:.2e}")

    fig, axes = plt.subplots(2, len(charges), figsize=(3 * len(charges), 6))
    extent = [-6, 6, -6, 6]  # in waists
    for col, m in enumerate(charges):
        field = modes[(m, 0)]
        axes[0, col].imshow(field.intensity().T, origin="lower", extent=extent,
                            cmap="inferno")
        axes[0, col].set_title(f"m = {m:+d} intensity")
        axes[1, col].imshow(np.angle(field.amplitude).T, origin="lower",
                            extent=extent, cmap="twilight")
        axes[1, col].set_title(f"m = {m:+d} phase")
    for ax in axes.ravel():
        ax.set_xlim(-2.5, 2.5)
        ax.set_ylim(-2.5, 2.5)
    fig.tight_layout()
    path = out / "lg_modes.png"
    fig.savefig(path, dpi=120)
    print(f"wrote {path}")


if __name__ == "__main__":
    main()

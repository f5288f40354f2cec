"""Heading sensitivity of the radical-pair compass, with and without an RF field.

Prints QFI(theta) for the undriven reference pair, the strong-hyperfine
closed form 1 + cos^2(theta), and the perpendicular-RF driven pair.

    python3 demos/compass_qfi.py
"""
import numpy as np

from radical_compass import metrology, model, spinlin, steady


def curve(params, grid):
    fam = steady.SteadyMapFamily(params).family()
    return np.array([metrology.qfi_spectral(fam, t) for t in grid])


def main():
    grid = np.linspace(0.1, np.pi / 2, 8)
    static = curve(model.reference_params(), grid)
    driven = curve(model.reference_params(rf="perpendicular"), grid)
    closed = [metrology.qfi_strong_hf_static(spinlin.singlet_state(), t) for t in grid]
    print(f"{'theta':>7} {'QFI':>9} {'closed':>9} {'QFI_rf':>9} {'drop':>7}")
    for t, q, c, d in zip(grid, static, closed, driven):
        print(f"{t:7.3f} {q:9.4f} {c:9.4f} {d:9.4f} {1 - d / q:7.1%}")


if __name__ == "__main__":
    main()

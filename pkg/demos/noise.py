"""Undriven QFI under the three Lindblad noise channels at rate 0.1k and k.

    python3 demos/noise.py
"""
import numpy as np

from radical_compass import metrology, model, steady


def main():
    grid = np.linspace(0.2, np.pi / 2, 4)
    p = model.reference_params()
    fam = steady.SteadyMapFamily(p).family()
    clean = np.array([metrology.qfi_spectral(fam, t) for t in grid])
    print("clean     " + " ".join(f"{q:8.4f}" for q in clean))
    for kind in ("dephasing", "amplitude_damping", "depolarizing"):
        for scale in (0.1, 1.0):
            noisy = p.with_(noise=model.NoiseSpec(kind, scale * p.k))
            fam = steady.SteadyMapFamily(noisy).family()
            q = np.array([metrology.qfi_spectral(fam, t) for t in grid])
            print(f"{kind[:9]:9s} {scale:>4} " + " ".join(f"{v:8.4f}" for v in q))


if __name__ == "__main__":
    main()

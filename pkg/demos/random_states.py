"""How much an RF field disrupts heading sensitivity for random initial states.

Draws Hilbert-Schmidt mixed electron states and reports the relative QFI
drop caused by a 150 nT perpendicular RF field on a coarse theta grid.

    python3 demos/random_states.py [n_states]
"""
import sys

import numpy as np

from radical_compass import scenarios


def main(n=5):
    grid = tuple(np.linspace(0.2, np.pi / 2, 5))
    sampler = scenarios.RandomStateSampler("hilbert_schmidt_mixed", seed=12345)
    study = scenarios.random_state_study(n, sampler, grid, workers=scenarios.workers_from_env())
    for i, row in enumerate(study.ratios):
        print(f"state {i}: " + " ".join(f"{r:7.3f}" for r in row))
    print(f"minimum ratio {np.nanmin(study.ratios):.3f}, flat points {int(study.flat.sum())}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 5)

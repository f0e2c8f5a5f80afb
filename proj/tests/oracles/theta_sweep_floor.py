"""Independent dense-eigensolve run that fixes the acceptance floor for the
cutoff-stability ratio of the theta sweep (d = 1, T = 2 pi, R_s = 1).

Uses only numpy: in one dimension the ball integral is 2 sin(kR)/k and the
time integral is elementary, so nothing is shared with the C++ code path.

    python3 tests/oracles/theta_sweep_floor.py > tests/oracles/theta_sweep_floor.json
"""

import json

import numpy as np

T = 2 * np.pi
RS = 1.0
GRID = 64


def gramian(theta, cutoff):
    gamma = theta / (2 * np.pi) + np.arange(-cutoff, cutoff + 1)
    k = gamma[:, None] - gamma[None, :]
    lam = gamma[:, None] ** 2 - gamma[None, :] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        space = np.where(k == 0, 2 * RS, 2 * np.sin(k * RS) / k)
        time = np.where(lam == 0, T, (np.exp(1j * T * lam) - 1) / (1j * lam))
    return space * time


def lambda_min(theta, cutoff):
    return float(np.linalg.eigvalsh(gramian(theta, cutoff))[0])


def main():
    thetas = -np.pi + 2 * np.pi * (np.arange(GRID) + 1) / GRID
    coarse = np.array([lambda_min(t, 15) for t in thetas])
    worst = int(np.argmin(coarse))
    fine = lambda_min(thetas[worst], 30)
    ratio = fine / coarse[worst]
    print(json.dumps({
        "theta_worst": float(thetas[worst]),
        "lambda_min_cutoff_15": float(coarse[worst]),
        "lambda_min_cutoff_30": fine,
        "all_positive": bool((coarse > 0).all()),
        "ratio_30_over_15": ratio,
        "floor": 0.5 * ratio,
    }, indent=2))


if __name__ == "__main__":
    main()

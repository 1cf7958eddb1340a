"""Independent reference computations used only by the tests.

These deliberately avoid the library's own solvers: the two-copy oracle is a
dense grid followed by scipy's SLSQP, and the one-copy oracle minimizes the
matrix relative entropy along the separable Werner segment.
"""

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from hwbounds.linalg import relative_entropy
from hwbounds.werner import WernerParams, werner_state


def one_copy_ree_oracle(eta, d):
    rho = werner_state(WernerParams(eta, d))
    res = minimize_scalar(
        lambda s: relative_entropy(rho, werner_state(WernerParams(s, d))),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return res.fun


def _two_copy_feasible(x0, x1, d, slack=0.0):
    return (
        (1 - 2 * x1 >= -slack)
        & (-2 * d * x0 + (2 - d) * x1 + d - 1 >= -slack)
        & (4 * d * x0 + 2 * (d - 1) * x1 + (d - 1) ** 2 >= -slack)
        & (x0 + x1 <= 1 + slack)
        & (x0 >= -slack)
        & (x1 >= -slack)
    )


def _two_copy_objective(eta, x0, x1):
    y = np.array([(1 - eta) ** 2, 2 * (1 - eta) * (1 + eta), (1 + eta) ** 2]) / 4
    x = np.stack([x0, x1, 1 - x0 - x1])
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(y[:, None] > 0, y[:, None] * np.log2(y[:, None] / x), 0.0)
    terms = np.where(np.isnan(terms), np.inf, terms)
    return terms.sum(axis=0) / 2


def two_copy_oracle(eta, d, grid=2000):
    """Brute-force grid over the feasible polytope, then SLSQP refinement.

    Returns (value, x0, x1).
    """
    g = np.linspace(0.0, 1.0, grid + 1)
    best = (np.inf, None, None)
    # rows in chunks keep memory modest for large grids
    for chunk in np.array_split(np.arange(grid + 1), 20):
        x0, x1 = np.meshgrid(g[chunk], g, indexing="ij")
        x0, x1 = x0.ravel(), x1.ravel()
        ok = _two_copy_feasible(x0, x1, d) & (x0 > 0)
        if not ok.any():
            continue
        vals = _two_copy_objective(eta, x0[ok], x1[ok])
        i = int(np.argmin(vals))
        if vals[i] < best[0]:
            best = (vals[i], x0[ok][i], x1[ok][i])

    cons = [
        {"type": "ineq", "fun": lambda v: 1 - 2 * v[1]},
        {"type": "ineq", "fun": lambda v: -2 * d * v[0] + (2 - d) * v[1] + d - 1},
        {"type": "ineq", "fun": lambda v: 4 * d * v[0] + 2 * (d - 1) * v[1] + (d - 1) ** 2},
        {"type": "ineq", "fun": lambda v: 1 - v[0] - v[1] - 1e-15},
    ]

    def f(v):
        return float(_two_copy_objective(eta, np.array([v[0]]), np.array([v[1]]))[0])

    res = minimize(
        f,
        np.array([best[1], best[2]]),
        method="SLSQP",
        bounds=[(1e-15, 1), (0, 1)],
        constraints=cons,
        options={"ftol": 1e-14, "maxiter": 500},
    )
    feasible = bool(_two_copy_feasible(res.x[0], res.x[1], d, slack=1e-12))
    if feasible and np.isfinite(res.fun) and res.fun <= best[0]:
        return float(res.fun), float(res.x[0]), float(res.x[1])
    return float(best[0]), float(best[1]), float(best[2])


def random_simplex(rng, k):
    return rng.dirichlet(np.ones(k))

"""Quick oracle-agreement checks behind ``hwbounds selftest``."""

from __future__ import annotations

import numpy as np

from .measures import (
    ppt_cone_check,
    ree_two_copy_closed,
    ree_two_copy_numeric,
    sigma_x_state,
)
from .linalg import is_psd, partial_transpose
from .network import multi_path_bound, random_network, single_path_bound
from .werner import WernerParams, hw_choi, werner_state


def check_choi_identity():
    worst = 0.0
    for d in range(2, 7):
        for eta in np.linspace(-1, 1, 9):
            p = WernerParams(float(eta), d)
            worst = max(worst, float(np.max(np.abs(hw_choi(p) - werner_state(p)))))
    return worst <= 1e-10, f"max deviation {worst:.2e}"


def check_two_copy_oracle():
    worst = 0.0
    for d in (3, 4, 6):
        for eta in np.linspace(-1, -2 / d, 6):
            p = WernerParams(float(eta), d)
            worst = max(worst, abs(ree_two_copy_closed(p).value - ree_two_copy_numeric(p).value))
    return worst <= 1e-7, f"max |closed - numeric| {worst:.2e}"


def check_ppt_cone(samples: int = 100, seed: int = 7):
    rng = np.random.default_rng(seed)
    mismatches = 0
    for d in (3, 4):
        for x in rng.dirichlet(np.ones(3), size=samples):
            spectral = is_psd(partial_transpose(sigma_x_state(2, x, d), (d,) * 4, (1, 3)))
            mismatches += spectral != ppt_cone_check(2, x, d)
    return mismatches == 0, f"{mismatches} mismatches"


def check_network_duality(count: int = 40, seed: int = 11):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        net = random_network(rng)
        for res in (single_path_bound(net, "E_R2", enumerate_=True),
                    multi_path_bound(net, "E_P_inf", enumerate_=True)):
            worst = max(worst, abs(res.cut_value - res.certificate))
    return worst <= 1e-9, f"max |enumeration - dual| {worst:.2e}"


CHECKS = {
    "choi-identity": check_choi_identity,
    "two-copy-closed-vs-numeric": check_two_copy_oracle,
    "ppt-cone-vs-spectrum": check_ppt_cone,
    "network-duality": check_network_duality,
}


def run_all():
    return [(name, *fn()) for name, fn in CHECKS.items()]

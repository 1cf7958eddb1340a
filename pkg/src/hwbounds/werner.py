"""Werner states and Holevo-Werner channels.

The canonical parametrization is the flip-operator expectation
``eta = Tr(W F)`` together with the local dimension ``d``. The other three
parametrizations (alpha, weighting, anti) are converted to ``eta`` at the
API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .linalg import haar_unitary, random_density_matrix

# slack for eta values produced by arithmetic such as -2/d
_ETA_SLACK = 1e-12

KINDS = ("alpha", "weighting", "expectation", "anti")


@dataclass(frozen=True)
class WernerParams:
    """Werner state ``W_{eta,d}`` / Holevo-Werner channel ``W_{eta,d}``."""

    eta: float
    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 2:
            raise ParameterError(f"d must be an integer >= 2, got {self.d!r}")
        eta = float(self.eta)
        if not math.isfinite(eta) or eta < -1 - _ETA_SLACK or eta > 1 + _ETA_SLACK:
            raise ParameterError(f"eta out of range [-1, 1]: {self.eta!r}")
        object.__setattr__(self, "eta", min(max(eta, -1.0), 1.0))
        object.__setattr__(self, "d", int(self.d))

    @property
    def separable(self) -> bool:
        return self.eta >= 0


def flip_operator(d: int) -> np.ndarray:
    """Swap of two qudits, ``sum_ij |ij><ji|``."""
    if d < 2:
        raise ParameterError("d must be >= 2")
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[i * d + j, j * d + i] = 1.0
    return f


def werner_state(p: WernerParams) -> np.ndarray:
    eta, d = p.eta, p.d
    eye = np.eye(d * d)
    return ((d - eta) * eye + (d * eta - 1) * flip_operator(d)) / (d**3 - d)


def symmetric_extreme(d: int) -> np.ndarray:
    """``W_{1,d}``, the normalized projector on the symmetric subspace."""
    return werner_state(WernerParams(1.0, d))


def antisymmetric_extreme(d: int) -> np.ndarray:
    """``W_{-1,d}``, the normalized projector on the antisymmetric subspace."""
    return werner_state(WernerParams(-1.0, d))


def werner_spectrum(p: WernerParams) -> tuple[float, int, float, int]:
    """Return ``(gamma_plus, n_plus, gamma_minus, n_minus)``.

    ``gamma_plus`` lives on the symmetric subspace (dimension ``d(d+1)/2``),
    ``gamma_minus`` on the antisymmetric one (dimension ``d(d-1)/2``).
    """
    eta, d = p.eta, p.d
    n_plus = d * (d + 1) // 2
    n_minus = d * (d - 1) // 2
    return (1 + eta) / (d * (d + 1)), n_plus, (1 - eta) / (d * (d - 1)), n_minus


# --- parametrizations -------------------------------------------------------
#
# Each map is obtained by computing Tr(rho F) for the state formula of the
# representation. Tr F = d and Tr F^2 = d^2.
#   alpha:      (I - aF)/(d^2 - d a)                 eta = (1 - a d)/(d - a)
#   weighting:  (1-p)(I+F)/(d^2+d) + p(I-F)/(d^2-d)  eta = 1 - 2p
#   anti:       t(I - dF)/(d^2(d-1)) + I/d^2         eta = (1 - t(d+1))/d


def _range(kind: str, d: int) -> tuple[float, float]:
    if kind == "alpha":
        return -1.0, 1.0
    if kind == "weighting":
        return 0.0, 1.0
    if kind == "expectation":
        return -1.0, 1.0
    if kind == "anti":
        # eta = 1 maps to t = -(d-1)/(d+1); see the conversion above
        return -(d - 1) / (d + 1), 1.0
    raise ParameterError(f"unknown representation kind {kind!r}")


def representation_range(kind: str, d: int) -> tuple[float, float]:
    """Closed interval of admissible values for ``kind`` at dimension ``d``."""
    return _range(kind, d)


def _to_eta(kind: str, value: float, d: int) -> float:
    if kind == "alpha":
        return (1 - value * d) / (d - value)
    if kind == "weighting":
        return 1 - 2 * value
    if kind == "expectation":
        return value
    if kind == "anti":
        return (1 - value * (d + 1)) / d
    raise ParameterError(f"unknown representation kind {kind!r}")


def _from_eta(kind: str, eta: float, d: int) -> float:
    if kind == "alpha":
        return (1 - eta * d) / (d - eta)
    if kind == "weighting":
        return (1 - eta) / 2
    if kind == "expectation":
        return eta
    if kind == "anti":
        return (1 - eta * d) / (d + 1)
    raise ParameterError(f"unknown representation kind {kind!r}")


@dataclass(frozen=True)
class WernerRepresentation:
    kind: str
    value: float

    def check(self, d: int) -> None:
        lo, hi = _range(self.kind, d)
        if not lo - _ETA_SLACK <= self.value <= hi + _ETA_SLACK:
            raise ParameterError(
                f"{self.kind} value {self.value!r} outside [{lo}, {hi}] for d={d}"
            )

    def to_params(self, d: int) -> WernerParams:
        self.check(d)
        return WernerParams(_to_eta(self.kind, self.value, d), d)


def convert_representation(rep: WernerRepresentation, to_kind: str, d: int) -> WernerRepresentation:
    if to_kind not in KINDS:
        raise ParameterError(f"unknown representation kind {to_kind!r}")
    eta = rep.to_params(d).eta
    return WernerRepresentation(to_kind, _from_eta(to_kind, eta, d))


def representation_state(rep: WernerRepresentation, d: int) -> np.ndarray:
    """Build the state directly from the representation's own formula."""
    rep.check(d)
    eye, f, v = np.eye(d * d), flip_operator(d), rep.value
    if rep.kind == "alpha":
        return (eye - v * f) / (d * d - d * v)
    if rep.kind == "weighting":
        return (1 - v) / (d * d + d) * (eye + f) + v / (d * d - d) * (eye - f)
    if rep.kind == "expectation":
        return werner_state(WernerParams(v, d))
    return v * (eye - d * f) / (d * d * (d - 1)) + eye / (d * d)


# --- channel ------------------------------------------------------------------


def _hw_linear(eta: float, d: int, x: np.ndarray) -> np.ndarray:
    # linear extension of the channel to arbitrary operators
    return ((d - eta) * np.trace(x) * np.eye(d) + (d * eta - 1) * x.T) / (d * d - 1)


def hw_apply(p: WernerParams, rho) -> np.ndarray:
    """Apply the Holevo-Werner channel ``[(d-eta)I + (d eta-1) rho^T]/(d^2-1)``."""
    rho = np.asarray(rho)
    if rho.shape != (p.d, p.d):
        raise DimensionError(f"input has shape {rho.shape}, channel expects ({p.d}, {p.d})")
    return _hw_linear(p.eta, p.d, rho)


def hw_choi(p: WernerParams) -> np.ndarray:
    """Choi matrix ``(id ⊗ W)(|Phi><Phi|)`` built by acting on matrix units."""
    d = p.d
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e_ij = np.zeros((d, d))
            e_ij[i, j] = 1.0
            out += np.kron(e_ij, _hw_linear(p.eta, d, e_ij)) / d
    return out


def check_teleportation_covariance(
    p: WernerParams, trials: int = 50, seed: int = 0, *, perturbation: float = 0.0
) -> float:
    """Largest violation of ``W(U rho U^dag) = U* W(rho) U^T`` over random trials.

    ``perturbation`` shifts eta on the right-hand side only and exists to
    build negative controls.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    d = p.d
    worst = 0.0
    for _ in range(trials):
        u = haar_unitary(d, rng)
        rho = random_density_matrix(d, rng)
        lhs = _hw_linear(p.eta, d, u @ rho @ u.conj().T)
        rhs = u.conj() @ _hw_linear(p.eta + perturbation, d, rho) @ u.T
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def qubit_shrink_factor(eta: float) -> tuple[float, bool]:
    """Bloch-ball contraction of the qubit channel.

    The Bloch vector maps to ``c * (x, -y, z)`` with ``c = (2 eta - 1)/3``.
    ``reflected`` is true for ``c > 0`` (reflection through the x-z plane);
    for ``c < 0`` the map is a pi rotation about y.
    """
    if not -1 <= eta <= 1:
        raise ParameterError(f"eta out of range [-1, 1]: {eta!r}")
    c = (2 * eta - 1) / 3
    return abs(c), c > 0

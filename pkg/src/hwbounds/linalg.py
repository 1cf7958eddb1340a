"""Dense Hermitian linear algebra and entropic functionals.

Density matrices are plain complex ``numpy`` arrays. All logarithms are
base 2, so entropies and divergences are in bits.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError, ParameterError

HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
# eigenvalues below this are treated as zero in entropy sums
ZERO_EIG = 1e-12
# kernel threshold for the support test of the relative entropy
KERNEL_EIG = 1e-10
KERNEL_WEIGHT = 1e-9


def _square(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(m) -> float:
    m = _square(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_density_matrix(rho, *, psd_tol: float = PSD_TOL, trace_tol: float = 1e-10) -> np.ndarray:
    """Validate ``rho`` as a density matrix and return it as a complex array.

    Raises ``ParameterError`` when ``rho`` is not Hermitian, not of unit
    trace, or has an eigenvalue below ``-psd_tol``.
    """
    rho = np.asarray(_square(rho), dtype=complex)
    if hermiticity_defect(rho) > HERMITIAN_TOL:
        raise ParameterError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > trace_tol:
        raise ParameterError(f"density matrix has trace {tr!r}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -psd_tol:
        raise ParameterError("density matrix is not positive semidefinite")
    return rho


def tensor(a, b) -> np.ndarray:
    """Kronecker product ``a ⊗ b``."""
    return np.kron(_square(a), _square(b))


def tensor_power(a, n: int) -> np.ndarray:
    if n < 1:
        raise ParameterError("tensor power needs n >= 1")
    out = _square(a)
    for _ in range(n - 1):
        out = np.kron(out, a)
    return out


def partial_transpose(rho, dims, systems=None) -> np.ndarray:
    """Partial transpose over ``systems`` of an operator on ``⊗ dims``.

    With two factors and no ``systems`` the second factor is transposed.
    For ``n`` copies of a bipartite state ordered ``A1 B1 A2 B2 ...`` pass
    ``systems=range(1, 2n, 2)`` to transpose every B factor.
    """
    rho = _square(rho)
    dims = tuple(int(x) for x in dims)
    if math.prod(dims) != rho.shape[0]:
        raise DimensionError(
            f"dims {'x'.join(map(str, dims))} do not match matrix dimension {rho.shape[0]}"
        )
    if systems is None:
        systems = (len(dims) - 1,)
    k = len(dims)
    perm = list(range(2 * k))
    for s in systems:
        perm[s], perm[k + s] = k + s, s
    t = rho.reshape(dims + dims).transpose(perm)
    return t.reshape(rho.shape)


def eigvalsh(m) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order."""
    m = _square(m)
    if hermiticity_defect(m) > HERMITIAN_TOL:
        raise ParameterError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)


def is_psd(m, tol: float = PSD_TOL) -> bool:
    return bool(eigvalsh(m)[0] >= -tol)


def shannon_bits(p) -> float:
    """Shannon entropy in bits of a probability-like vector, 0·log 0 = 0."""
    p = np.asarray(p, dtype=float)
    p = p[p > ZERO_EIG]
    return float(-np.sum(p * np.log2(p)))


def vn_entropy(rho) -> float:
    """Von Neumann entropy ``-Tr ρ log2 ρ``."""
    return max(shannon_bits(eigvalsh(rho)), 0.0)


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``S(ρ||σ)`` in bits.

    Returns ``math.inf`` when the support of ``rho`` is not contained in the
    support of ``sigma``. The test projects ``rho`` onto the numerical kernel
    of ``sigma`` (eigenvalues below 1e-10) and declares divergence once that
    weight exceeds 1e-9.
    """
    rho, sigma = _square(rho), _square(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    for m in (rho, sigma):
        if hermiticity_defect(m) > HERMITIAN_TOL:
            raise ParameterError("matrix is not Hermitian")

    s_vals, s_vecs = np.linalg.eigh(sigma)
    # diagonal of rho in the eigenbasis of sigma
    weights = np.einsum("ij,jk,ki->i", s_vecs.conj().T, rho, s_vecs).real
    kernel = s_vals < KERNEL_EIG
    if weights[kernel].sum() > KERNEL_WEIGHT:
        return math.inf
    cross = float(np.sum(weights[~kernel] * np.log2(s_vals[~kernel])))
    neg_entropy = -shannon_bits(np.linalg.eigvalsh(rho))
    return max(neg_entropy - cross, 0.0)


def trace_distance(a, b) -> float:
    """``½ ||a - b||_1``."""
    a, b = _square(a), _square(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(0.5 * np.sum(np.abs(eigvalsh(a - b))))


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``d x d`` unitary via QR with phase-corrected ``R``."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density_matrix(d: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random state from a Ginibre matrix."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real

"""Converse bounds on the two-way capacities of a Holevo-Werner channel.

``K`` (secret key) is bounded by the best of the two-copy REE and the two
squashed-entanglement bounds. ``Q2`` (quantum, equal to entanglement
distribution) is bounded by the regularised PPT relative entropy. The
finite-size helpers give the weak-converse rate bound for ``n`` channel
uses at trace-distance error ``epsilon``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import NoCrossoverError, ParameterError
from .measures import (
    K_POOL,
    Measure,
    ree_one_copy,
    ree_two_copy,
    rppt_regularised,
    squashed_convexity_bound,
    squashed_purification_bound,
)
from .werner import WernerParams


@dataclass(frozen=True)
class BoundReport:
    params: WernerParams
    e_r: float
    e_r2: float
    e_p_inf: float
    esq_tilde: float
    esq_star: float
    k_bound: float
    k_bound_source: Measure
    q2_bound: float

    def as_dict(self) -> dict:
        out = asdict(self)
        out.pop("params")
        out["eta"], out["d"] = self.params.eta, self.params.d
        out["k_bound_source"] = self.k_bound_source.value
        return out


def channel_bounds(p: WernerParams) -> BoundReport:
    e_r = ree_one_copy(p)
    e_r2 = min(ree_two_copy(p), e_r)
    values = {
        Measure.E_R2: e_r2,
        Measure.ESQ_TILDE: squashed_purification_bound(p),
        Measure.ESQ_STAR: squashed_convexity_bound(p),
    }
    # ties resolve to the earliest entry of the pool
    source = min(K_POOL, key=lambda m: values[m])
    e_p_inf = rppt_regularised(p)
    return BoundReport(
        params=p,
        e_r=e_r,
        e_r2=e_r2,
        e_p_inf=e_p_inf,
        esq_tilde=values[Measure.ESQ_TILDE],
        esq_star=values[Measure.ESQ_STAR],
        k_bound=values[source],
        k_bound_source=source,
        q2_bound=e_p_inf,
    )


def _squashed_minus_ree(eta: float, d: int) -> float:
    p = WernerParams(eta, d)
    squashed = min(squashed_purification_bound(p), squashed_convexity_bound(p))
    return squashed - ree_two_copy(p)


def crossover_etas(d: int, tol: float = 1e-9, scan: int = 200) -> list[float]:
    """All ``eta`` in ``(-1, 0)`` where the best squashed bound and the
    two-copy REE bound swap order.

    A ``scan``-point pre-scan brackets sign changes, each refined by
    bisection to ``tol``. Raises ``NoCrossoverError`` when no sign change is
    found; its ``dominant`` attribute names the family that is lower (or
    equal) throughout.
    """
    if d < 3:
        raise ParameterError("crossover search needs d >= 3")
    grid = np.linspace(-1.0, 0.0, scan + 1)[1:-1]
    vals = [_squashed_minus_ree(float(e), d) for e in grid]
    roots = []
    for i in range(len(grid) - 1):
        a, b = float(grid[i]), float(grid[i + 1])
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb > 0 or fb == 0.0:
            continue
        while b - a > tol:
            mid = 0.5 * (a + b)
            fm = _squashed_minus_ree(mid, d)
            if fm == 0.0:
                a = b = mid
                break
            if (fm < 0) == (fa < 0):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    if not roots:
        dominant = "squashed" if max(vals) < 0 else "REE"
        raise NoCrossoverError(
            f"no crossover on (-1, 0) for d={d}; the {dominant} bound is lower throughout",
            dominant=dominant,
        )
    return roots


def crossover_eta(d: int, tol: float = 1e-9) -> float:
    """The lowest crossover point; see ``crossover_etas``."""
    return crossover_etas(d, tol)[0]


def binary_entropy(q: float) -> float:
    if not 0.0 <= q <= 1.0:
        raise ParameterError(f"binary entropy needs 0 <= q <= 1, got {q!r}")
    if q in (0.0, 1.0):
        return 0.0
    return -q * math.log2(q) - (1 - q) * math.log2(1 - q)


def continuity_f(epsilon: float, dim) -> float:
    """Asymptotic-continuity correction ``(eps/2) log2 D + (1 + eps/2) H2(eps/(2+eps))``.

    ``dim`` is either a dimension ``D`` or a pair ``(base, exponent)``
    standing for ``base**exponent``, so ``D = d^{nR}`` never has to be
    formed explicitly.
    """
    if epsilon < 0:
        raise ParameterError("epsilon must be >= 0")
    if isinstance(dim, tuple):
        base, exponent = dim
        if base < 2 or exponent < 0:
            raise ParameterError(f"invalid dimension {base}**{exponent}")
        log_dim = exponent * math.log2(base)
    else:
        if dim < 2:
            raise ParameterError(f"dimension must be >= 2, got {dim}")
        log_dim = math.log2(dim)
    return epsilon / 2 * log_dim + (1 + epsilon / 2) * binary_entropy(epsilon / (2 + epsilon))


@dataclass(frozen=True)
class FiniteSizeParams:
    epsilon: float
    d: int
    n: int

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 2.0:
            raise ParameterError(f"epsilon must lie in [0, 2), got {self.epsilon!r}")
        if self.d < 2:
            raise ParameterError(f"d must be >= 2, got {self.d!r}")
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n!r}")
        if self.denominator_factor <= 0:
            raise ParameterError(
                f"1 - (epsilon/2) log2 d = {self.denominator_factor:.6g} is not positive"
            )

    @property
    def denominator_factor(self) -> float:
        return 1 - self.epsilon / 2 * math.log2(self.d)


def finite_rate_bound(fs: FiniteSizeParams, e_p_n: float) -> float:
    """Rate bound ``[E_P(n copies) + (1+eps/2) H2(eps/(2+eps))] / (n (1 - (eps/2) log2 d))``."""
    eps = fs.epsilon
    correction = (1 + eps / 2) * binary_entropy(eps / (2 + eps))
    return (e_p_n + correction) / (fs.n * fs.denominator_factor)


def finite_rate_limit(fs: FiniteSizeParams, e_p_inf: float) -> float:
    """Large-``n`` limit of ``finite_rate_bound`` when ``e_p_n / n -> e_p_inf``."""
    return e_p_inf / fs.denominator_factor

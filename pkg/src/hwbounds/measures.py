"""Entanglement measures of Werner states, in bits.

Closed forms cover the one-copy relative entropy of entanglement (REE,
which equals the PPT relative entropy for Werner states), the regularised
PPT relative entropy and two squashed-entanglement upper bounds. The
two-copy REE has a closed form for ``eta <= -2/d`` and a numerical
minimizer used as an independent check. For ``n <= 3`` copies the
PPT-restricted problem is solved directly over the invariant family of
states ``sigma_x^n`` by an interior-point method.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .werner import WernerParams, antisymmetric_extreme, symmetric_extreme

_LN2 = math.log(2.0)
_SLACK = 1e-12
MAX_SIGMA_DIM = 4096


class Measure(str, enum.Enum):
    E_R = "E_R"
    E_R2 = "E_R2"
    E_P_INF = "E_P_inf"
    ESQ_TILDE = "Esq_tilde"
    ESQ_STAR = "Esq_star"
    # per-edge minimum over the computable secret-key pool
    K_BEST = "K_best"


K_POOL = (Measure.E_R2, Measure.ESQ_TILDE, Measure.ESQ_STAR)


def _xlog2(c: float, a: float) -> float:
    """``c * log2(a)`` with the ``0 * log 0 = 0`` convention."""
    if c == 0.0:
        return 0.0
    return c * math.log2(a)


def ree_one_copy(p: WernerParams) -> float:
    """One-copy REE, equal to the one-copy PPT relative entropy.

    The closest separable state is ``W_{0,d}``, so the value does not depend
    on ``d``.
    """
    eta = p.eta
    if eta >= 0:
        return 0.0
    return max(_xlog2((1 + eta) / 2, 1 + eta) + _xlog2((1 - eta) / 2, 1 - eta), 0.0)


def rppt_regularised(p: WernerParams) -> float:
    """Regularised PPT relative entropy ``E_P^inf(W_{eta,d})``."""
    eta, d = p.eta, p.d
    if eta >= 0:
        return 0.0
    if eta >= -2 / d:
        return ree_one_copy(p)
    return max(math.log2((d + 2) / d) + _xlog2((1 + eta) / 2, (d - 2) / (d + 2)), 0.0)


def squashed_purification_bound(p: WernerParams) -> float:
    """Half the conditional mutual information of the purified Werner state.

    The formula stays slightly positive for small ``eta > 0``; those states
    are separable, so 0 is returned there instead.
    """
    eta, d = p.eta, p.d
    if eta > 0:
        return 0.0
    val = (
        math.log2(d)
        + _xlog2((1 + eta) / 4, (1 + eta) / (d * (d + 1)))
        + _xlog2((1 - eta) / 4, (1 - eta) / (d * (d - 1)))
    )
    return max(val, 0.0)


def squashed_convexity_bound(p: WernerParams) -> float:
    """Squashed-entanglement bound from ``W_eta = (1+eta) W_0 - eta W_{-1}``."""
    eta, d = p.eta, p.d
    if eta >= 0:
        return 0.0
    if d % 2 == 0:
        return -eta * math.log2((d + 2) / d)
    return -eta / 2 * math.log2((d + 3) / (d - 1))


# --- symmetric family ---------------------------------------------------------


@dataclass(frozen=True)
class SymmetricPPTPoint:
    """Weights ``x_0..x_n`` of ``sigma_x^n``; ``x_k`` multiplies the terms with
    ``k`` factors of ``W_{1,d}`` and ``n-k`` factors of ``W_{-1,d}``."""

    n: int
    x: tuple[float, ...] = field(default=())

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        if self.n < 1:
            raise ParameterError("n must be >= 1")
        if len(x) != self.n + 1:
            raise ParameterError(f"expected {self.n + 1} weights, got {len(x)}")
        if min(x) < -1e-12 or abs(sum(x) - 1.0) > 1e-12:
            raise ParameterError(f"weights are not a probability vector: {x}")
        object.__setattr__(self, "x", x)

    @classmethod
    def of(cls, x) -> SymmetricPPTPoint:
        x = tuple(x)
        return cls(len(x) - 1, x)

    def expanded(self) -> np.ndarray:
        """The ``2^n`` vector with ``x_k / C(n,k)`` on every bit string of weight k."""
        return _expansion(self.n) @ np.asarray(self.x)


def _bitstrings(n: int):
    return list(itertools.product((0, 1), repeat=n))


def _expansion(n: int) -> np.ndarray:
    e = np.zeros((2**n, n + 1))
    for row, bits in enumerate(_bitstrings(n)):
        k = sum(bits)
        e[row, k] = 1.0 / math.comb(n, k)
    return e


def ppt_cone_matrix(n: int, d: int) -> np.ndarray:
    """Rows of ``M^{⊗n} E`` acting on ``x``; ``sigma_x^n`` is PPT iff all are >= 0."""
    m = np.array([[-1.0, 1.0], [1.0, (d - 1) / (d + 1)]])
    mn = np.ones((1, 1))
    for _ in range(n):
        mn = np.kron(mn, m)
    return mn @ _expansion(n)


def _as_point(n: int, x) -> SymmetricPPTPoint:
    if isinstance(x, SymmetricPPTPoint):
        if x.n != n:
            raise ParameterError(f"point has n={x.n}, expected {n}")
        return x
    return SymmetricPPTPoint(n, tuple(x))


def ppt_cone_check(n: int, x, d: int, tol: float = 1e-10) -> bool:
    pt = _as_point(n, x)
    return bool(np.all(ppt_cone_matrix(n, d) @ np.asarray(pt.x) >= -tol))


def sigma_x_state(n: int, x, d: int) -> np.ndarray:
    """Explicit ``d^{2n}``-dimensional matrix of ``sigma_x^n``."""
    pt = _as_point(n, x)
    if d ** (2 * n) > MAX_SIGMA_DIM:
        raise ParameterError(
            f"sigma_x^n has dimension {d ** (2 * n)} > {MAX_SIGMA_DIM}; "
            "use the classical form of the objective instead"
        )
    factors = (antisymmetric_extreme(d), symmetric_extreme(d))
    out = np.zeros((d ** (2 * n), d ** (2 * n)))
    for bits in _bitstrings(n):
        w = pt.x[sum(bits)] / math.comb(n, sum(bits))
        if w == 0.0:
            continue
        term = np.ones((1, 1))
        for b in bits:
            term = np.kron(term, factors[b])
        out += w * term
    return out


def ncopy_weights(n: int, eta: float) -> np.ndarray:
    """Weights ``y_i`` of ``W_eta^{⊗n}`` on the blocks with ``i`` symmetric factors."""
    return np.array(
        [math.comb(n, i) * (1 - eta) ** (n - i) * (1 + eta) ** i / 2**n for i in range(n + 1)]
    )


def ncopy_objective(n: int, eta: float, x) -> float:
    """``S(W_eta^{⊗n} || sigma_x^n) = sum_i y_i log2(y_i / x_i)``; may be ``inf``."""
    y = ncopy_weights(n, eta)
    x = np.asarray(x.x if isinstance(x, SymmetricPPTPoint) else x, dtype=float)
    if x.shape != y.shape:
        raise ParameterError(f"expected {n + 1} weights, got {x.shape}")
    total = 0.0
    for yi, xi in zip(y, x):
        if yi == 0.0:
            continue
        if xi <= 0.0:
            return math.inf
        total += float(yi * math.log2(yi / xi))
    return total


# --- two copies ---------------------------------------------------------------


@dataclass(frozen=True)
class TwoCopySolution:
    theta: float
    x0: float
    x1: float
    value: float

    @property
    def point(self) -> SymmetricPPTPoint:
        x2 = max(1.0 - self.x0 - self.x1, 0.0)
        return SymmetricPPTPoint(2, (self.x0, self.x1, x2))


def two_copy_constraints(d: int) -> list[tuple[float, float, float]]:
    """Feasible set in ``(x0, x1)`` as rows ``(a0, a1, b)`` with ``a0 x0 + a1 x1 + b >= 0``."""
    return [
        (0.0, -2.0, 1.0),
        (-2.0 * d, 2.0 - d, d - 1.0),
        (4.0 * d, 2.0 * (d - 1), (d - 1.0) ** 2),
        (-1.0, -1.0, 1.0),
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
    ]


def _two_copy_value(eta: float, x0: float, x1: float) -> float:
    return ncopy_objective(2, eta, (x0, x1, 1.0 - x0 - x1)) / 2


def ree_two_copy_closed(p: WernerParams) -> TwoCopySolution:
    """Stationary point of the two-copy problem for ``d >= 3``, ``eta <= -2/d``."""
    eta, d = p.eta, p.d
    if d < 3 or eta > -2 / d + _SLACK:
        raise ParameterError(
            f"closed form needs d >= 3 and eta <= -2/d (got eta={eta}, d={d}); use ree_two_copy"
        )
    e2 = eta * eta
    theta = (
        d**4 * (e2 + 1) ** 2
        - 4 * d**3 * eta * (e2 - 3)
        - 4 * d**2 * (e2 * e2 + 3 * e2 - 1)
        + 8 * d * eta * (e2 - 3)
        + 4 * (e2 + 1) ** 2
    )
    root = math.sqrt(theta)
    x0 = (d * d * (e2 + 1) + root - 2 * d * (eta - 2) - 2 * e2 - 2) / (8 * d * (d + 2))
    x1 = -(d * d * (e2 - 3) + root - 2 * d * eta - 2 * e2 + 6) / (4 * (d * d - 4))
    # x1 vanishes analytically at eta = -1 but not in floating point
    x1 = x1 if x1 > 0 else 0.0
    return TwoCopySolution(theta, x0, x1, _two_copy_value(eta, x0, x1))


def _golden(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, e = b - invphi * (b - a), a + invphi * (b - a)
    fc, fe = f(c), f(e)
    while b - a > tol:
        if fc <= fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = f(e)
    best = min(((fc, c), (fe, e), (f(a), a), (f(b), b)))
    return best[1], best[0]


def _convex_min_1d(f, lo: float, hi: float, tol: float, grid: int = 33) -> tuple[float, float]:
    """Minimize a convex function on ``[lo, hi]``: grid scan, then golden section."""
    if hi - lo <= tol:
        mid = 0.5 * (lo + hi)
        return mid, f(mid)
    xs = np.linspace(lo, hi, grid)
    vals = [f(float(v)) for v in xs]
    i = int(np.argmin(vals))
    a, b = float(xs[max(i - 1, 0)]), float(xs[min(i + 1, grid - 1)])
    x, fx = _golden(f, a, b, tol)
    if vals[i] < fx:
        return float(xs[i]), vals[i]
    return x, fx


def _polytope_range(cons, axis: int) -> tuple[float, float]:
    """Extent of a bounded 2-D polytope along one axis, from its vertices."""
    pts = []
    for (a0, a1, b), (c0, c1, e) in itertools.combinations(cons, 2):
        det = a0 * c1 - a1 * c0
        if abs(det) < 1e-15:
            continue
        u = (-b * c1 + a1 * e) / det
        v = (-a0 * e + b * c0) / det
        if all(g0 * u + g1 * v + h >= -1e-12 for g0, g1, h in cons):
            pts.append((u, v))
    if not pts:
        raise ParameterError("empty feasible polytope")
    coord = [pt[axis] for pt in pts]
    return min(coord), max(coord)


def _interval_at(cons, x1: float) -> tuple[float, float]:
    lo, hi = -math.inf, math.inf
    for a0, a1, b in cons:
        rest = a1 * x1 + b
        if a0 > 0:
            lo = max(lo, -rest / a0)
        elif a0 < 0:
            hi = min(hi, -rest / a0)
    return lo, hi


def ree_two_copy_numeric(p: WernerParams, tol: float = 1e-11) -> TwoCopySolution:
    """Brute-force minimization of the two-copy objective over the PPT polytope.

    The feasible set is a polygon in ``(x0, x1)``. For fixed ``x1`` the
    admissible ``x0`` form an interval, and the partial minimum over that
    interval is again convex in ``x1``, so two nested 1-D convex searches
    (grid bracket plus golden section, ``tol`` in parameter space) find the
    global minimum. No use is made of the closed form.
    """
    eta, d = p.eta, p.d
    if eta > 0:
        raise ParameterError("numeric two-copy REE is defined for eta <= 0")
    cons = two_copy_constraints(d)
    lo1, hi1 = _polytope_range(cons, axis=1)

    def inner(x1: float) -> tuple[float, float]:
        lo0, hi0 = _interval_at(cons, x1)
        lo0, hi0 = max(lo0, 0.0), max(hi0, max(lo0, 0.0))
        return _convex_min_1d(lambda x0: _two_copy_value(eta, x0, x1), lo0, hi0, tol)

    x1, value = _convex_min_1d(lambda v: inner(v)[1], lo1, hi1, tol)
    x0, value = inner(x1)
    return TwoCopySolution(math.nan, x0, x1, value)


def ree_two_copy(p: WernerParams) -> float:
    """Two-copy REE per copy, ``E_R(W^{⊗2})/2``.

    Uses the closed form for ``eta < -2/d`` and additivity (the one-copy
    value) on ``-2/d <= eta <= 0``.
    """
    if p.eta >= 0:
        return 0.0
    if p.eta >= -2 / p.d:
        return ree_one_copy(p)
    return ree_two_copy_closed(p).value


# --- n copies, PPT ------------------------------------------------------------


def _barrier_minimize(y: np.ndarray, g: np.ndarray, x_start: np.ndarray, gap: float) -> np.ndarray:
    """Minimize ``sum y_i log2(y_i/x_i)`` over ``{x : g x >= 0, sum x = 1}``.

    Log-barrier path following. Newton steps are taken in an orthonormal
    basis of the hyperplane ``sum x = 1`` and solved after symmetric
    diagonal scaling, which keeps the system usable when the barrier weight
    ``t`` is large. Stops once the duality gap ``m/t`` drops below ``gap``.
    """
    pos = y > 0
    m, k = g.shape
    # columns span {v : sum v = 0}
    basis = np.linalg.svd(np.ones((1, k)))[2][1:].T

    def f(x):
        return float(np.sum(y[pos] * np.log2(y[pos] / x[pos])))

    def phi(x, t):
        s = g @ x
        if np.any(s <= 0):
            return math.inf
        return t * f(x) - float(np.sum(np.log(s)))

    x = x_start.copy()
    t = 1.0
    while True:
        for _ in range(200):
            s = g @ x
            grad = -g.T @ (1 / s)
            hess = g.T @ (g / (s**2)[:, None])
            grad[pos] -= t * y[pos] / (x[pos] * _LN2)
            hess[np.diag_indices(k)] += np.where(pos, t * y / (np.maximum(x, 1e-300) ** 2 * _LN2), 0)
            h_red = basis.T @ hess @ basis
            g_red = basis.T @ grad
            scale = 1 / np.sqrt(np.diag(h_red))
            try:
                z = np.linalg.solve(h_red * np.outer(scale, scale), -g_red * scale) * scale
            except np.linalg.LinAlgError:
                z = np.linalg.lstsq(h_red, -g_red, rcond=None)[0]
            dx = basis @ z
            dec = float(-grad @ dx)
            if dec / 2 <= 1e-13:
                break
            step, base = 1.0, phi(x, t)
            while step > 1e-16:
                cand = x + step * dx
                if phi(cand, t) <= base - 0.25 * step * dec:
                    break
                step *= 0.5
            else:
                break
            x = cand
        if m / t < gap:
            return x
        t *= 8.0


def rppt_ncopy_numeric(n: int, p: WernerParams, tol: float = 1e-10) -> float:
    """``E_P(W^{⊗n})/n`` over the PPT members of the invariant family ``sigma_x^n``.

    Valid for ``n`` in {1, 2, 3}. For ``n >= 3`` the feasible states are only
    known to be PPT, so the result is a PPT relative entropy, not an REE.
    """
    if n not in (1, 2, 3):
        raise ParameterError(f"n must be 1, 2 or 3, got {n}")
    eta, d = p.eta, p.d
    if eta > 0:
        raise ParameterError("numeric n-copy RPPT is defined for eta <= 0")
    if eta == 0:
        return 0.0
    y = ncopy_weights(n, eta)
    cone = ppt_cone_matrix(n, d)
    cone = np.unique(cone / np.linalg.norm(cone, axis=1)[:, None], axis=0)
    g = np.vstack([np.eye(n + 1), cone])
    # W_{1/2,d}^{⊗n} lies strictly inside every constraint
    x_start = ncopy_weights(n, 0.5)
    x = _barrier_minimize(y, g, x_start, gap=tol / 10)
    return ncopy_objective(n, eta, x) / n


def measure_value(measure: Measure | str, p: WernerParams) -> float:
    """Evaluate a measure tag on ``W_{eta,d}``."""
    measure = Measure(measure)
    if measure is Measure.K_BEST:
        return min(measure_value(m, p) for m in K_POOL)
    return _MEASURE_FUNCS[measure](p)


_MEASURE_FUNCS = {
    Measure.E_R: ree_one_copy,
    Measure.E_R2: ree_two_copy,
    Measure.E_P_INF: rppt_regularised,
    Measure.ESQ_TILDE: squashed_purification_bound,
    Measure.ESQ_STAR: squashed_convexity_bound,
}

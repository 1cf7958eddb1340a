import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hwbounds.errors import DimensionError, ParameterError
from hwbounds.linalg import eigvalsh, haar_unitary, is_psd, random_density_matrix
from hwbounds.werner import (
    KINDS,
    WernerParams,
    WernerRepresentation,
    check_teleportation_covariance,
    convert_representation,
    flip_operator,
    hw_apply,
    hw_choi,
    qubit_shrink_factor,
    representation_range,
    representation_state,
    werner_spectrum,
    werner_state,
)

ETA_GRID = [round(-1 + 0.1 * k, 10) for k in range(21)]


def test_params_validation():
    with pytest.raises(ParameterError):
        WernerParams(-1.5, 3)
    with pytest.raises(ParameterError):
        WernerParams(0.0, 1)
    with pytest.raises(ParameterError):
        WernerParams(0.0, 2.5)
    assert WernerParams(-0.1, 3).separable is False
    assert WernerParams(0.0, 3).separable is True


def test_flip_operator():
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert np.array_equal(flip_operator(2), swap)
    for d in range(2, 7):
        f = flip_operator(d)
        assert np.array_equal(f @ f, np.eye(d * d))
        assert np.trace(f) == d
    vals = eigvalsh(flip_operator(3))
    assert np.allclose(vals, [-1] * 3 + [1] * 6)


def test_werner_state_examples():
    f2 = flip_operator(2)
    assert np.allclose(werner_state(WernerParams(1, 2)), (np.eye(4) + f2) / 6)
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    assert np.allclose(werner_state(WernerParams(-1, 2)), np.outer(singlet, singlet))
    w = werner_state(WernerParams(-0.37, 5))
    assert np.trace(w @ flip_operator(5)) == pytest.approx(-0.37, abs=1e-12)


@given(st.floats(-1, 1), st.integers(2, 6), st.integers(0, 10**6))
def test_werner_state_invariants(eta, d, seed):
    w = werner_state(WernerParams(eta, d))
    assert np.trace(w) == pytest.approx(1.0, abs=1e-12)
    assert np.trace(w @ flip_operator(d)) == pytest.approx(eta, abs=1e-12)
    assert is_psd(w)
    u = haar_unitary(d, np.random.default_rng(seed))
    uu = np.kron(u, u)
    assert np.max(np.abs(uu @ w @ uu.conj().T - w)) <= 1e-10


def test_spectrum_examples():
    gp, n_p, gm, n_m = werner_spectrum(WernerParams(-1, 3))
    assert (gm, n_m) == (pytest.approx(1 / 3), 3) and (gp, n_p) == (0.0, 6)
    gp, n_p, gm, n_m = werner_spectrum(WernerParams(0, 2))
    assert gp == pytest.approx(1 / 6) and n_p == 3
    assert gm == pytest.approx(1 / 2) and n_m == 1
    for d in range(2, 7):
        gp, n_p, gm, n_m = werner_spectrum(WernerParams(1, d))
        assert gm == 0.0 and gp == pytest.approx(2 / (d * (d + 1)))


@pytest.mark.parametrize("d", range(2, 7))
@pytest.mark.parametrize("eta", ETA_GRID)
def test_spectrum_matches_eigendecomposition(eta, d):
    gp, n_p, gm, n_m = werner_spectrum(WernerParams(eta, d))
    assert n_p * gp + n_m * gm == pytest.approx(1.0, abs=1e-14)
    expected = sorted([gp] * n_p + [gm] * n_m)
    assert np.allclose(eigvalsh(werner_state(WernerParams(eta, d))), expected, atol=1e-10)


# representation conversions: derived by matching Tr(rho F) of each state formula


def test_conversion_examples():
    for d in range(2, 7):
        assert convert_representation(WernerRepresentation("alpha", 1 / d), "expectation", d).value == pytest.approx(0.0, abs=1e-12)
        assert convert_representation(WernerRepresentation("weighting", 1.0), "expectation", d).value == pytest.approx(-1.0)
        t = convert_representation(WernerRepresentation("expectation", 1.0), "anti", d).value
        assert t == pytest.approx(-(d - 1) / (d + 1), abs=1e-12)
        sym = werner_state(WernerParams(1.0, d))
        assert np.max(np.abs(representation_state(WernerRepresentation("anti", t), d) - sym)) <= 1e-12


@pytest.mark.parametrize("d", range(2, 7))
def test_representation_states_agree(d):
    for kind in KINDS:
        lo, hi = representation_range(kind, d)
        for v in np.linspace(lo, hi, 7):
            rep = WernerRepresentation(kind, float(v))
            direct = representation_state(rep, d)
            via_eta = werner_state(rep.to_params(d))
            assert np.max(np.abs(direct - via_eta)) <= 1e-12
            assert is_psd(direct)


@pytest.mark.parametrize("d", range(2, 7))
def test_extremes_and_boundary_correspond(d):
    # (separable extreme, boundary, entangled extreme) per representation
    table = {
        "alpha": (-1.0, 1 / d, 1.0),
        "weighting": (0.0, 0.5, 1.0),
        "expectation": (1.0, 0.0, -1.0),
        "anti": (-(d - 1) / (d + 1), 1 / (d + 1), 1.0),
    }
    for kind, values in table.items():
        etas = [WernerRepresentation(kind, v).to_params(d).eta for v in values]
        assert etas == pytest.approx([1.0, 0.0, -1.0], abs=1e-12)


@given(st.integers(2, 8), st.floats(0, 1), st.sampled_from(KINDS), st.sampled_from(KINDS))
def test_round_trip(d, frac, k1, k2):
    lo, hi = representation_range(k1, d)
    rep = WernerRepresentation(k1, lo + frac * (hi - lo))
    back = convert_representation(convert_representation(rep, k2, d), k1, d)
    assert back.value == pytest.approx(rep.value, abs=1e-12)


def test_conversion_out_of_range():
    with pytest.raises(ParameterError):
        convert_representation(WernerRepresentation("weighting", 1.2), "alpha", 3)
    with pytest.raises(ParameterError):
        convert_representation(WernerRepresentation("alpha", 0.0), "bogus", 3)


def test_hw_apply_examples():
    for d in (2, 3, 5):
        for eta in (-1, -0.3, 0.6):
            out = hw_apply(WernerParams(eta, d), np.eye(d) / d)
            assert np.allclose(out, np.eye(d) / d)
        rng = np.random.default_rng(d)
        rho = random_density_matrix(d, rng)
        assert np.allclose(hw_apply(WernerParams(1 / d, d), rho), np.eye(d) / d)
    out = hw_apply(WernerParams(-1, 2), np.diag([1.0, 0.0]))
    assert np.allclose(out, np.diag([0.0, 1.0]))


def test_hw_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        hw_apply(WernerParams(0.2, 3), np.eye(2) / 2)


@given(st.floats(-1, 1), st.integers(2, 5), st.integers(0, 10**6))
def test_hw_apply_outputs_states(eta, d, seed):
    rng = np.random.default_rng(seed)
    p = WernerParams(eta, d)
    a, b = random_density_matrix(d, rng), random_density_matrix(d, rng)
    out = hw_apply(p, a)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    assert is_psd(out)
    # linearity on mixtures
    mixed = hw_apply(p, 0.3 * a + 0.7 * b)
    assert np.allclose(mixed, 0.3 * out + 0.7 * hw_apply(p, b), atol=1e-12)


@pytest.mark.parametrize("d", range(2, 7))
@pytest.mark.parametrize("eta", ETA_GRID)
def test_choi_identity(eta, d):
    p = WernerParams(eta, d)
    choi = hw_choi(p)
    assert np.max(np.abs(choi - werner_state(p))) <= 1e-10
    assert np.trace(choi).real == pytest.approx(1.0, abs=1e-12)
    # complete positivity via the Choi criterion
    assert is_psd(choi)


def test_choi_examples():
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    assert np.allclose(hw_choi(WernerParams(-1, 2)), np.outer(singlet, singlet))
    assert np.allclose(hw_choi(WernerParams(0.5, 4)), werner_state(WernerParams(0.5, 4)))


@pytest.mark.parametrize("eta, d", list(itertools.product((-1, -0.4, 0.3, 1), (2, 3, 5))))
def test_teleportation_covariance(eta, d):
    assert check_teleportation_covariance(WernerParams(eta, d), trials=50, seed=1) < 1e-10


def test_teleportation_covariance_depolarizing_point():
    for d in (2, 3, 4):
        assert check_teleportation_covariance(WernerParams(1 / d, d), trials=20, seed=2) < 1e-12


def test_teleportation_covariance_negative_control():
    dev = check_teleportation_covariance(WernerParams(-0.5, 3), trials=20, seed=3, perturbation=0.05)
    assert dev > 1e-3


def test_teleportation_covariance_deterministic():
    p = WernerParams(-0.2, 4)
    a = check_teleportation_covariance(p, trials=5, seed=9, perturbation=0.1)
    b = check_teleportation_covariance(p, trials=5, seed=9, perturbation=0.1)
    assert a == b


def _bloch(rho):
    return np.real([rho[0, 1] + rho[1, 0], 1j * (rho[0, 1] - rho[1, 0]), rho[0, 0] - rho[1, 1]])


def test_qubit_shrink_factor_examples():
    assert qubit_shrink_factor(0.5) == (0.0, False)
    f, refl = qubit_shrink_factor(-1)
    assert f == pytest.approx(1.0) and refl is False
    f, refl = qubit_shrink_factor(1)
    assert f == pytest.approx(1 / 3) and refl is True


@pytest.mark.parametrize("eta", [-1, -0.5, 0.2, 0.9, 1])
def test_qubit_shrink_factor_matches_bloch_map(eta):
    rng = np.random.default_rng(5)
    factor, reflected = qubit_shrink_factor(eta)
    for _ in range(5):
        rho = random_density_matrix(2, rng)
        r_in = _bloch(rho)
        r_out = _bloch(hw_apply(WernerParams(eta, 2), rho))
        assert np.linalg.norm(r_out) == pytest.approx(factor * np.linalg.norm(r_in), abs=1e-12)
        if reflected:
            expected = factor * r_in * np.array([1, -1, 1])
        else:
            expected = factor * r_in * np.array([-1, 1, -1])
        assert np.allclose(r_out, expected, atol=1e-12)

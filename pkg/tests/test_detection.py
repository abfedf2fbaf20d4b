"""
Cooperative MMSE detection: Test Suite.

 Group 1: Full CSI
   1.  Scalar example: v = 0.5, MSE = 0.5
   2.  Zero estimate gives zero weights and unit MSE
   3.  First-order optimality v A = sqrt(p) h_hat^H across cluster sizes
   4.  MSE of the weights equals the closed-form minimum
   5.  Perturbing the weights never lowers the MSE
   6.  Agreement with a numerical minimiser for L = 2, 3

 Group 2: Full-CSI rate
   7.  One satellite at unit SNR gives one bit
   8.  Rate is invariant to scaling the weights
   9.  Equal-gain channels add their SNRs
  10.  Adding a satellite raises the perfect-CSI rate
  11.  MMSE weights maximise the rate over random directions

 Group 3: Partial CSI
  12.  B and S for a two-satellite example
  13.  Scalar example and equal-gain Sherman-Morrison weights
  14.  First-order optimality and agreement with a numerical minimiser
  15.  With perfect CSI the partial-CSI rate equals the full-CSI rate
  16.  Local normalisation, clamping and zero estimates

 Group 4: Symbols
  17.  Noiseless decisions recover the transmitted bit
  18.  AWGN BER matches Q(sqrt(2 gamma))
"""

import math

import numpy as np
import pytest
from scipy.optimize import minimize
from scipy.special import erfc

from satcoop.channel.moments import ChannelMoments
from satcoop.detection.full_csi import (
    FullCsiInput,
    detect_full,
    minimum_mse_full,
    mmse_full,
    mse_full,
    rate_full,
)
from satcoop.detection.partial_csi import (
    PartialCsiInput,
    build_B_S,
    detect_partial,
    local_normalize,
    mmse_partial,
    mse_partial,
    rate_partial,
)
from satcoop.detection.symbols import bpsk_modulate, detect_symbol, detect_symbols
from satcoop.errors import DomainError
from satcoop.experiments.ber import Received, ber_montecarlo
from satcoop.utils.rng import complex_normal

# ── Shared fixtures ───────────────────────────────────────────────────────────


def _random_full_input(rng, L):
    return FullCsiInput(
        h_hat=complex_normal(rng, L),
        sigma_h=rng.uniform(0.0, 0.5, L),
        p=rng.uniform(0.5, 2.0),
        sigma2=rng.uniform(0.1, 1.0),
    )


def _moments(e_inv, error_power=0.0, e_abs=1.0):
    return ChannelMoments(
        var_h=error_power / 9.0,
        e_abs_hhat_sq=e_abs,
        e_abs_htilde_sq=error_power,
        e_inv_hhat_sq=e_inv,
        epsilon=3.0 if error_power else 0.0,
    )


def _perfect_partial_input(h, p, sigma2):
    """Controller view when every |h_hat_m| is exactly |h_m|."""
    return PartialCsiInput(
        h_hat_1=h[0],
        h_tilde_var_1=0.0,
        moments=[_moments(1.0 / abs(x) ** 2, e_abs=abs(x) ** 2) for x in h[1:]],
        p=p,
        sigma2=sigma2,
    )


def _random_channel(rng, L):
    return rng.uniform(0.2, 2.0, L) * np.exp(2j * np.pi * rng.random(L))


def _q(x):
    return 0.5 * erfc(x / math.sqrt(2.0))


# ── Group 1: Full CSI ─────────────────────────────────────────────────────────


def test_scalar_full_csi_example():
    inp = FullCsiInput([1.0], [0.0], 1.0, 1.0)
    v = mmse_full(inp)
    assert v[0] == pytest.approx(0.5)
    assert mse_full(v, inp) == pytest.approx(0.5)
    assert minimum_mse_full(inp) == pytest.approx(0.5)


def test_zero_estimate():
    inp = FullCsiInput([0.0, 0.0], [0.1, 0.1], 1.0, 1.0)
    v = mmse_full(inp)
    assert not np.any(v)
    assert mse_full(v, inp) == pytest.approx(1.0)
    assert detect_full(inp, 1e6).rate_bits_per_use == 0.0


@pytest.mark.parametrize("L", [1, 2, 4, 8, 16, 28])
def test_first_order_optimality(L):
    rng = np.random.default_rng(100 + L)
    for _ in range(200):
        inp = _random_full_input(rng, L)
        v = mmse_full(inp)
        residual = v @ inp.gram() - math.sqrt(inp.p) * np.conj(inp.h_hat)
        scale = math.sqrt(inp.p) * np.max(np.abs(inp.h_hat))
        assert np.max(np.abs(residual)) < 1e-10 * scale


@pytest.mark.parametrize("L", [1, 3, 12, 28])
def test_mse_matches_minimum(L):
    rng = np.random.default_rng(200 + L)
    for _ in range(50):
        inp = _random_full_input(rng, L)
        mse = mse_full(mmse_full(inp), inp)
        assert mse == pytest.approx(minimum_mse_full(inp), rel=1e-10)
        assert 0.0 < mse <= 1.0


def test_perturbation_never_helps(rng):
    inp = _random_full_input(rng, 6)
    v = mmse_full(inp)
    best = mse_full(v, inp)
    for _ in range(100):
        delta = 1e-3 * complex_normal(rng, 6)
        assert mse_full(v + delta, inp) >= best


@pytest.mark.parametrize("L", [2, 3])
def test_full_csi_matches_numerical_minimiser(L):
    rng = np.random.default_rng(300 + L)
    inp = _random_full_input(rng, L)
    A = inp.gram()
    target = math.sqrt(inp.p) * np.conj(inp.h_hat)

    def objective(x):
        return mse_full(x[:L] + 1j * x[L:], inp)

    def gradient(x):
        z = (x[:L] + 1j * x[L:]) @ A - target
        return np.concatenate([2.0 * z.real, 2.0 * z.imag])

    result = minimize(
        objective, np.zeros(2 * L), jac=gradient, method="BFGS", options={"gtol": 1e-10}
    )
    numeric = result.x[:L] + 1j * result.x[L:]
    np.testing.assert_allclose(numeric, mmse_full(inp), atol=1e-6)


def test_full_csi_validation():
    with pytest.raises(DomainError):
        FullCsiInput([1.0], [-0.1], 1.0, 1.0)
    with pytest.raises(DomainError):
        FullCsiInput([1.0], [0.0], 1.0, 0.0)
    with pytest.raises(DomainError):
        FullCsiInput([], [], 1.0, 1.0)


# ── Group 2: Full-CSI rate ────────────────────────────────────────────────────


def test_unit_snr_gives_one_bit():
    inp = FullCsiInput([1.0], [0.0], 1.0, 1.0)
    result = detect_full(inp, 500e6)
    assert result.rate_bits_per_use == pytest.approx(1.0)
    assert result.rate_bits_per_sec == pytest.approx(500e6)


def test_rate_scale_invariance(rng):
    h = complex_normal(rng, 5)
    v = complex_normal(rng, 5)
    base = rate_full(v, h, 2.0, 0.3)
    assert rate_full((2 - 3j) * v, h, 2.0, 0.3) == pytest.approx(base, rel=1e-12)


def test_equal_gain_channels():
    h = np.array([0.8, 0.8])
    v = mmse_full(FullCsiInput(h, [0.0, 0.0], 1.5, 0.5))
    assert rate_full(v, h, 1.5, 0.5) == pytest.approx(math.log2(1 + 2 * 1.5 * 0.64 / 0.5))


def test_zero_weights_give_zero_rate():
    assert rate_full(np.zeros(3), np.ones(3), 1.0, 1.0) == 0.0


def test_adding_a_satellite_raises_rate(rng):
    h = complex_normal(rng, 12)
    previous = 0.0
    for L in range(1, 13):
        inp = FullCsiInput(h[:L], np.zeros(L), 1.0, 1.0)
        rate = rate_full(mmse_full(inp), h[:L], 1.0, 1.0)
        assert rate > previous
        previous = rate


def test_mmse_weights_maximise_rate(rng):
    h = complex_normal(rng, 4)
    inp = FullCsiInput(h, np.zeros(4), 1.0, 0.5)
    best = rate_full(mmse_full(inp), h, 1.0, 0.5)
    assert best == pytest.approx(math.log2(1 + np.sum(np.abs(h) ** 2) / 0.5))
    for _ in range(1000):
        assert rate_full(complex_normal(rng, 4), h, 1.0, 0.5) <= best + 1e-12


# ── Group 3: Partial CSI ──────────────────────────────────────────────────────


def test_B_and_S_example():
    inp = PartialCsiInput(
        h_hat_1=2.0,
        h_tilde_var_1=0.1,
        moments=[_moments(e_inv=0.5, error_power=0.2, e_abs=2.0)],
        p=1.0,
        sigma2=1.0,
    )
    B, S = build_B_S(inp)
    np.testing.assert_allclose(B, np.diag([0.25, 0.5]))
    np.testing.assert_allclose(S, np.diag([0.025, 0.1]))


def test_B_uses_floor_for_small_controller_estimate():
    inp = PartialCsiInput(1e-9, 0.0, [], 1.0, 1.0, h_hat_1_floor=1e-3)
    B, _ = build_B_S(inp)
    assert B[0, 0] == pytest.approx(1e6)


def test_scalar_partial_example():
    B, S = np.diag([1.0]), np.diag([0.0])
    w = mmse_partial(B, S, 1.0)
    assert w[0] == pytest.approx(0.5)
    assert mse_partial(w, B, S, 1.0) == pytest.approx(0.5)


def test_equal_gain_sherman_morrison():
    L, p, sigma2, gain = 5, 2.0, 0.4, 0.8
    B = np.diag(np.full(L, sigma2 / gain))
    w = mmse_partial(B, np.zeros((L, L)), p)
    np.testing.assert_allclose(w, math.sqrt(p) / (p * L + sigma2 / gain))


@pytest.mark.parametrize("L", [1, 2, 5, 28])
def test_partial_first_order_optimality(L):
    rng = np.random.default_rng(400 + L)
    for _ in range(100):
        p = rng.uniform(0.5, 2.0)
        B = np.diag(rng.uniform(0.1, 2.0, L))
        S = np.diag(rng.uniform(0.0, 0.5, L))
        w = mmse_partial(B, S, p)
        M = p * np.ones((L, L)) + p * S + B
        assert np.max(np.abs(w @ M - math.sqrt(p))) < 1e-10 * math.sqrt(p)


@pytest.mark.parametrize("L", [2, 3])
def test_partial_matches_numerical_minimiser(L):
    rng = np.random.default_rng(500 + L)
    p = 1.3
    B = np.diag(rng.uniform(0.1, 2.0, L))
    S = np.diag(rng.uniform(0.0, 0.5, L))
    M = p * np.ones((L, L)) + p * S + B

    def objective(w):
        return mse_partial(w, B, S, p)

    def gradient(w):
        return 2.0 * (w @ M - math.sqrt(p))

    result = minimize(objective, np.zeros(L), jac=gradient, method="BFGS", options={"gtol": 1e-10})
    np.testing.assert_allclose(result.x, mmse_partial(B, S, p).real, atol=1e-6)


def test_partial_rate_scale_invariance(rng):
    B = np.diag(rng.uniform(0.1, 2.0, 4))
    w = rng.uniform(0.1, 1.0, 4)
    assert rate_partial(-3.0 * w, B, 1.0) == pytest.approx(rate_partial(w, B, 1.0), rel=1e-12)


def test_single_satellite_partial_equals_full():
    h = 0.7 - 0.4j
    partial = detect_partial(PartialCsiInput(h, 0.0, [], 2.0, 0.5), 1.0)
    full = detect_full(FullCsiInput([h], [0.0], 2.0, 0.5), 1.0)
    assert partial.rate_bits_per_use == pytest.approx(full.rate_bits_per_use, rel=1e-12)


def test_perfect_csi_rates_agree(rng):
    for _ in range(1000):
        L = int(rng.integers(1, 29))
        h = _random_channel(rng, L)
        p, sigma2 = rng.uniform(0.5, 2.0), rng.uniform(0.1, 1.0)
        partial = detect_partial(_perfect_partial_input(h, p, sigma2), 1.0).rate_bits_per_use
        v = mmse_full(FullCsiInput(h, np.zeros(L), p, sigma2))
        full = rate_full(v, h, p, sigma2)
        closed_form = math.log2(1 + p * np.sum(np.abs(h) ** 2) / sigma2)
        assert partial == pytest.approx(full, rel=1e-9)
        assert full == pytest.approx(closed_form, rel=1e-9)


def test_true_controller_channel_changes_only_the_rate():
    inp = PartialCsiInput(1.5, 0.2, [_moments(2.0, 0.1)], 1.0, 1.0)
    estimated = detect_partial(inp, 1.0)
    true = detect_partial(inp, 1.0, h_true_1=1.0)
    np.testing.assert_array_equal(estimated.weights, true.weights)
    assert true.rate_bits_per_use < estimated.rate_bits_per_use


def test_local_normalize():
    assert local_normalize(2 + 2j, 1 + 1j) == pytest.approx(2.0)
    assert local_normalize(1.0, 1e-6, floor=1e-3) == pytest.approx(1e3)
    assert local_normalize(1.0, -1e-6, floor=1e-3) == pytest.approx(-1e3)
    np.testing.assert_allclose(local_normalize(np.array([2.0, 4.0]), np.array([2.0, 1j])), [1, -4j])
    with pytest.raises(DomainError):
        local_normalize(1.0, 0.0)


# ── Group 4: Symbols ──────────────────────────────────────────────────────────


@pytest.mark.parametrize("bit", [0, 1])
def test_noiseless_decision(bit):
    h = np.array([0.5 + 0.5j, -0.3j, 1.1])
    v = mmse_full(FullCsiInput(h, np.zeros(3), 4.0, 0.1))
    y = 2.0 * h * bpsk_modulate(bit)
    decision = detect_symbol(v, y)
    assert decision.bit == bit
    assert decision.symbol == (1 if bit else -1)
    _, bits = detect_symbols(v, np.vstack([y, y]))
    assert list(bits) == [bit, bit]


@pytest.mark.parametrize("snr_db", [0.0, 3.0, 6.0])
def test_awgn_ber_matches_closed_form(snr_db):
    gamma = 10 ** (snr_db / 10)
    received = Received(weights=np.array([1.0 + 0j]), h=np.array([1.0 + 0j]))
    estimate = ber_montecarlo(
        lambda block: received,
        1_000_000,
        lambda block: np.random.default_rng([77, int(snr_db), block]),
        p=gamma,
        sigma2=1.0,
    )
    expected = _q(math.sqrt(2 * gamma))
    standard_error = math.sqrt(expected * (1 - expected) / estimate.symbols)
    assert abs(estimate.ber - expected) < 3 * standard_error
    assert estimate.ci_low <= estimate.ber <= estimate.ci_high

"""Network-controller combining from locally normalised samples.

Each satellite divides its sample by its own channel estimate and forwards it;
the controller (satellite 1) knows its own instantaneous estimate and only the
long-term moments of the others.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from satcoop.channel.moments import ChannelMoments
from satcoop.detection.full_csi import DetectorResult
from satcoop.detection.linalg import solve_positive_definite
from satcoop.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartialCsiInput:
    h_hat_1: complex
    h_tilde_var_1: float
    moments: tuple[ChannelMoments, ...]
    p: float
    sigma2: float
    h_hat_1_floor: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "moments", tuple(self.moments))
        if not np.isfinite(self.h_hat_1):
            raise DomainError(f"h_hat_1 must be finite, got {self.h_hat_1}")
        if not (math.isfinite(self.h_tilde_var_1) and self.h_tilde_var_1 >= 0):
            raise DomainError(f"h_tilde_var_1 must be finite and >= 0, got {self.h_tilde_var_1}")
        if not (math.isfinite(self.p) and self.p > 0):
            raise DomainError(f"p must be > 0, got {self.p}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2}")
        if self.h_hat_1_floor < 0:
            raise DomainError(f"h_hat_1_floor must be >= 0, got {self.h_hat_1_floor}")

    @property
    def L(self) -> int:
        return 1 + len(self.moments)


def local_normalize(y_m, h_hat_m, floor=0.0):
    """y'_m = y_m / h_hat_m, with |h_hat_m| raised to ``floor`` where smaller.

    Works elementwise on arrays; the phase of a clamped estimate is kept.
    """
    h = np.asarray(h_hat_m, dtype=complex)
    magnitude = np.abs(h)
    low = magnitude < floor
    if np.any(low):
        clamped = int(np.count_nonzero(low))
        logger.debug("Clamped %d local normalisations below |h_hat| floor", clamped)
        phase = np.divide(h, magnitude, out=np.ones_like(h), where=magnitude > 0)
        h = np.where(low, floor * phase, h)
    if np.any(h == 0):
        raise DomainError("cannot normalise by a zero channel estimate")
    y_prime = np.asarray(y_m) / h
    return complex(y_prime) if np.ndim(y_prime) == 0 else y_prime


def build_B_S(inp: PartialCsiInput) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal noise (B) and estimation-error (S) matrices of the normalised samples."""
    gain_1 = max(abs(inp.h_hat_1) ** 2, inp.h_hat_1_floor**2)
    if gain_1 == 0:
        raise DomainError("controller channel estimate is zero and no clamp floor is set")
    inverse_gains = np.array([1.0 / gain_1] + [m.e_inv_hhat_sq for m in inp.moments])
    error_powers = np.array([inp.h_tilde_var_1] + [m.e_abs_htilde_sq for m in inp.moments])
    return np.diag(inp.sigma2 * inverse_gains), np.diag(error_powers * inverse_gains)


def mmse_partial(B: np.ndarray, S: np.ndarray, p: float) -> np.ndarray:
    """w = sqrt(p) * 1^T (p 1 1^T + p S + B)^-1."""
    w, _ = _mmse_partial(B, S, p)
    return w


def _mmse_partial(B, S, p):
    L = B.shape[0]
    ones = np.ones(L)
    M = p * np.outer(ones, ones) + p * np.asarray(S) + np.asarray(B)
    x, ridged = solve_positive_definite(M, ones)
    return math.sqrt(p) * x, ridged


def mse_partial(w: np.ndarray, B: np.ndarray, S: np.ndarray, p: float) -> float:
    """E|w y' - s|^2 of the normalised-sample model, a quadratic form in w."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    w_sum = w.sum()
    return float(
        p * abs(w_sum) ** 2
        - 2.0 * math.sqrt(p) * w_sum.real
        + p * np.real(np.conj(w) @ S @ w)
        + np.real(np.conj(w) @ B @ w)
        + 1.0
    )


def rate_partial(w: np.ndarray, B: np.ndarray, p: float) -> float:
    """log2(1 + p |w 1|^2 / (w B w^H)) in bits per channel use."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    if not np.any(w):
        logger.debug("Zero combining vector; rate set to 0")
        return 0.0
    noise = float(np.real(w @ B @ np.conj(w)))
    return float(np.log2(1.0 + p * abs(w.sum()) ** 2 / noise))


def partial_input_for_cluster(
    h_hat: Sequence[complex],
    moments: Sequence[ChannelMoments],
    p: float,
    sigma2: float,
    clamp_delta: float,
) -> PartialCsiInput:
    """Controller view of a cluster: satellite 1 instantaneous, the rest long-term."""
    first = moments[0]
    return PartialCsiInput(
        h_hat_1=complex(h_hat[0]),
        h_tilde_var_1=first.e_abs_htilde_sq,
        moments=tuple(moments[1:]),
        p=p,
        sigma2=sigma2,
        h_hat_1_floor=clamp_delta * math.sqrt(first.e_abs_hhat_sq),
    )


def detect_partial(
    inp: PartialCsiInput, bandwidth_hz: float, h_true_1: Optional[complex] = None
) -> DetectorResult:
    """Weights from the controller's view; the rate optionally uses the true h_1.

    With ``h_true_1`` the controller's own noise entry is sigma^2 / |h_1|^2, so
    estimation error on satellite 1 is not counted as received signal power.
    """
    B, S = build_B_S(inp)
    w, ridged = _mmse_partial(B, S, inp.p)
    B_rate = B
    if h_true_1 is not None:
        B_rate = build_B_S(replace(inp, h_hat_1=complex(h_true_1)))[0]
    rate = rate_partial(w, B_rate, inp.p)
    return DetectorResult(
        weights=w.astype(complex),
        mse=mse_partial(w, B, S, inp.p),
        rate_bits_per_use=rate,
        rate_bits_per_sec=bandwidth_hz * rate,
        ridge_applied=ridged,
    )

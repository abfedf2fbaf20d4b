"""Centralised MMSE combining when every satellite forwards its channel estimate."""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from satcoop.detection.linalg import solve_positive_definite
from satcoop.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FullCsiInput:
    h_hat: np.ndarray
    sigma_h: np.ndarray
    p: float
    sigma2: float

    def __post_init__(self):
        h_hat = np.atleast_1d(np.asarray(self.h_hat, dtype=complex))
        sigma_h = np.atleast_1d(np.asarray(self.sigma_h, dtype=float))
        object.__setattr__(self, "h_hat", h_hat)
        object.__setattr__(self, "sigma_h", sigma_h)
        if h_hat.ndim != 1 or len(h_hat) < 1:
            raise DomainError("h_hat must be a non-empty vector")
        if sigma_h.shape != h_hat.shape:
            raise DomainError(f"sigma_h has shape {sigma_h.shape}, expected {h_hat.shape}")
        if not (np.all(np.isfinite(h_hat)) and np.all(np.isfinite(sigma_h))):
            raise DomainError("full-CSI input contains non-finite values")
        if np.any(sigma_h < 0):
            raise DomainError("sigma_h entries must be >= 0")
        if not (math.isfinite(self.p) and self.p > 0):
            raise DomainError(f"p must be > 0, got {self.p}")
        if not (math.isfinite(self.sigma2) and self.sigma2 > 0):
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2}")

    @property
    def L(self) -> int:
        return len(self.h_hat)

    def gram(self) -> np.ndarray:
        """p * h_hat h_hat^H + sigma2 * I + p * diag(sigma_h)."""
        h = self.h_hat
        return (
            self.p * np.outer(h, h.conj())
            + self.sigma2 * np.eye(self.L)
            + self.p * np.diag(self.sigma_h)
        )


@dataclass(frozen=True)
class DetectorResult:
    weights: np.ndarray
    mse: float
    rate_bits_per_use: float
    rate_bits_per_sec: float
    ridge_applied: bool = False


def mmse_full(inp: FullCsiInput) -> np.ndarray:
    """v = sqrt(p) * h_hat^H * A^-1, returned as a 1-D (row) vector."""
    v, _ = _mmse_full(inp)
    return v


def _mmse_full(inp: FullCsiInput):
    x, ridged = solve_positive_definite(inp.gram(), inp.h_hat)
    return math.sqrt(inp.p) * np.conj(x), ridged


def mse_full(v: np.ndarray, inp: FullCsiInput) -> float:
    """E|v y - s|^2 for unit-power s, expanded as a quadratic form in v."""
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    if v.shape != inp.h_hat.shape:
        raise DomainError(f"weights have shape {v.shape}, expected {inp.h_hat.shape}")
    vh = np.dot(v, inp.h_hat)
    power = np.abs(v) ** 2
    mse = (
        inp.p * abs(vh) ** 2
        - 2.0 * math.sqrt(inp.p) * vh.real
        + inp.p * float(np.dot(power, inp.sigma_h))
        + inp.sigma2 * float(power.sum())
        + 1.0
    )
    return float(mse)


def minimum_mse_full(inp: FullCsiInput) -> float:
    """1 - p * h_hat^H A^-1 h_hat."""
    x, _ = solve_positive_definite(inp.gram(), inp.h_hat)
    return float(1.0 - inp.p * np.real(np.vdot(inp.h_hat, x)))


def rate_full(v: np.ndarray, h_true: np.ndarray, p: float, sigma2: float) -> float:
    """log2(1 + p |v h|^2 / (sigma2 ||v||^2)) in bits per channel use."""
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    h_true = np.atleast_1d(np.asarray(h_true, dtype=complex))
    if v.shape != h_true.shape:
        raise DomainError(f"weights have shape {v.shape}, channel has {h_true.shape}")
    norm_sq = float(np.sum(np.abs(v) ** 2))
    if norm_sq == 0.0:
        logger.debug("Zero combining vector; rate set to 0")
        return 0.0
    snr = p * abs(np.dot(v, h_true)) ** 2 / (sigma2 * norm_sq)
    return float(np.log2(1.0 + snr))


def detect_full(
    inp: FullCsiInput,
    bandwidth_hz: float,
    h_true: Optional[np.ndarray] = None,
) -> DetectorResult:
    """Weights, MSE and rate for one realisation.

    The rate uses ``h_true`` when given and the estimate otherwise.
    """
    v, ridged = _mmse_full(inp)
    rate = rate_full(v, inp.h_hat if h_true is None else h_true, inp.p, inp.sigma2)
    return DetectorResult(
        weights=v,
        mse=mse_full(v, inp),
        rate_bits_per_use=rate,
        rate_bits_per_sec=bandwidth_hz * rate,
        ridge_applied=ridged,
    )

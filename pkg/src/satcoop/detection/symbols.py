from dataclasses import dataclass

import numpy as np

from satcoop.errors import DomainError


@dataclass(frozen=True)
class SymbolDecision:
    s_hat: complex
    bit: int

    @property
    def symbol(self) -> int:
        """BPSK symbol of the decision: bit 1 is +1, bit 0 is -1."""
        return 1 if self.bit else -1


def bpsk_modulate(bits: np.ndarray) -> np.ndarray:
    return 2.0 * np.asarray(bits, dtype=float) - 1.0


def detect_symbol(weights: np.ndarray, y: np.ndarray) -> SymbolDecision:
    weights = np.atleast_1d(np.asarray(weights))
    y = np.atleast_1d(np.asarray(y))
    if weights.shape != y.shape:
        raise DomainError(f"weights have shape {weights.shape}, samples have {y.shape}")
    s_hat = complex(np.dot(weights, y))
    return SymbolDecision(s_hat=s_hat, bit=int(s_hat.real >= 0))


def detect_symbols(weights: np.ndarray, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hard decisions for a block of samples ``Y`` of shape (n_symbols, L)."""
    weights = np.atleast_1d(np.asarray(weights))
    Y = np.atleast_2d(np.asarray(Y))
    if Y.shape[1] != weights.shape[0]:
        raise DomainError(
            f"weights have length {weights.shape[0]}, samples have {Y.shape[1]} columns"
        )
    s_hat = Y @ weights
    return s_hat, (s_hat.real >= 0).astype(np.int8)

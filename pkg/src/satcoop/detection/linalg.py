import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from satcoop.errors import SingularSystemError

logger = logging.getLogger(__name__)

RIDGE_SCALE = 1e-12


def solve_positive_definite(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, bool]:
    """Solve A x = b for Hermitian positive-definite A via Cholesky.

    If the factorisation fails a ridge of 1e-12 * trace(A) / L is added once;
    the second return value reports whether that happened.
    """
    try:
        return cho_solve(cho_factor(A, lower=True), b), False
    except LinAlgError:
        pass

    L = A.shape[0]
    ridge = RIDGE_SCALE * float(np.real(np.trace(A))) / L
    logger.warning("Matrix not positive definite; retrying with ridge %.3e", ridge)
    try:
        return cho_solve(cho_factor(A + ridge * np.eye(L), lower=True), b), True
    except LinAlgError:
        diagonal = np.real(np.diag(A))
        worst = int(np.argmin(diagonal))
        raise SingularSystemError(
            f"Singular combining system: diagonal entry {worst} is {diagonal[worst]:.6g}"
        ) from None

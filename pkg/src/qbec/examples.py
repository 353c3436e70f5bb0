"""Closed-form two-qutrit families and their channels.

Basis labels are 0-based throughout: ``P(i, j) = |i><j|``.
"""

import numpy as np

from .channels import KrausChannel
from .errors import OutOfRange
from .states import BipartiteState, max_entangled

ALPHA_RANGE = (2.0, 5.0)
# entangled with positive partial transpose on this half-open interval
ALPHA_BOUND_ENTANGLED = (3.0, 4.0)


def P(i: int, j: int, d: int = 3) -> np.ndarray:
    out = np.zeros((d, d), dtype=complex)
    out[i, j] = 1.0
    return out


def _check_alpha(alpha: float) -> float:
    lo, hi = ALPHA_RANGE
    if not lo <= alpha <= hi:
        raise OutOfRange(f"alpha must lie in [{lo}, {hi}], got {alpha}")
    return float(alpha)


def _check_a(a: float) -> float:
    if not 0.0 < a < 1.0:
        raise OutOfRange(f"a must lie in (0, 1), got {a}")
    return float(a)


def _shift_projector(step: int) -> np.ndarray:
    # (1/3) sum_k |k, k+step><k, k+step|
    out = np.zeros((9, 9), dtype=complex)
    for k in range(3):
        idx = 3 * k + (k + step) % 3
        out[idx, idx] = 1.0 / 3.0
    return out


def sigma_alpha(alpha: float) -> BipartiteState:
    """``(2/7) P+ + (alpha/7) sigma_+ + ((5 - alpha)/7) sigma_-`` on 3 (x) 3."""
    alpha = _check_alpha(alpha)
    rho = (
        (2.0 / 7.0) * max_entangled(3).rho
        + (alpha / 7.0) * _shift_projector(1)
        + ((5.0 - alpha) / 7.0) * _shift_projector(-1)
    )
    return BipartiteState(rho, 3, 3)


def channel_alpha(alpha: float) -> KrausChannel:
    """Channel whose Choi state is :func:`sigma_alpha`.

    Kraus set ``sqrt(2/7) I``, ``sqrt(alpha/7) |k+1><k|`` and
    ``sqrt((5 - alpha)/7) |k-1><k|`` for ``k = 0, 1, 2`` (indices mod 3). The
    ``1/3`` normalisation of ``sigma_+-`` is absorbed by the ``1/m`` of the
    Choi convention, so each shift operator carries the full weight ``alpha/7``.
    """
    alpha = _check_alpha(alpha)
    ops = [np.sqrt(2.0 / 7.0) * np.eye(3)]
    ops += [np.sqrt(alpha / 7.0) * P((k + 1) % 3, k) for k in range(3)]
    ops += [np.sqrt((5.0 - alpha) / 7.0) * P((k - 1) % 3, k) for k in range(3)]
    return KrausChannel(tuple(ops), 3, 3)


def rho_a(a: float) -> BipartiteState:
    """Two-qutrit family with a non-maximally-mixed reduction, ``0 < a < 1``.

    Its A-reduction is ``diag(3a, 3a, 1 + 2a) / (8a + 1)``.
    """
    a = _check_a(a)
    m = np.zeros((9, 9), dtype=complex)
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            m[i, j] = a
    for i in (1, 2, 3, 5, 7):
        m[i, i] = a
    m[6, 6] = m[8, 8] = (1.0 + a) / 2.0
    m[6, 8] = m[8, 6] = np.sqrt(1.0 - a * a) / 2.0
    return BipartiteState(m / (8.0 * a + 1.0), 3, 3)


# Prefactors of the side-A channel of rho_a, re-derived under the trace-one
# Choi convention (Kraus V_i of theta composed with the filter
# diag(3a, 3a, 1 + 2a)^{-1/2} sqrt((8a + 1) / 3)):
#   identity part        sqrt(a) * diag(1/sqrt(3a), 1/sqrt(3a), 1/sqrt(2a+1))
#   shifts out of 0 or 1 1/sqrt(3)           (|1><0|, |2><0|, |0><1|, |2><1|)
#   shift out of 2       sqrt(a / (2a + 1))  (|1><2|)
#   W-tilde              sqrt((1 +- a) / (2 (2a + 1))) on |0><2| and |2><2|
SHIFT_WEIGHT = 1.0 / 3.0
SHIFTS_FROM_LOW = ((1, 0), (2, 0), (0, 1), (2, 1))
SHIFTS_FROM_HIGH = ((1, 2),)


def channel_a_closed_form(a: float) -> KrausChannel:
    """Closed-form trace-preserving channel whose Choi state is the A-filtered :func:`rho_a`."""
    a = _check_a(a)
    v = np.diag([1.0 / np.sqrt(3 * a), 1.0 / np.sqrt(3 * a), 1.0 / np.sqrt(2 * a + 1)])
    ops = [np.sqrt(a) * v]
    ops += [np.sqrt(SHIFT_WEIGHT) * P(i, j) for i, j in SHIFTS_FROM_LOW]
    ops += [np.sqrt(a / (2 * a + 1)) * P(i, j) for i, j in SHIFTS_FROM_HIGH]
    w_tilde = np.sqrt((1 + a) / (2 * (2 * a + 1))) * P(0, 2) + np.sqrt(
        (1 - a) / (2 * (2 * a + 1))
    ) * P(2, 2)
    ops.append(w_tilde)
    return KrausChannel(tuple(ops), 3, 3)

"""Pure-Python fallback for the two-state outcome-chain kernels.

Semantics (and floating-point operation order) match ``_chain_cy`` exactly,
so both backends return identical results for identical inputs.
"""

from __future__ import annotations

import numpy as np


def count_plus_labels(q_pp: float, q_pm: float, uniforms: np.ndarray, burn_in: int) -> int:
    """Walk the outcome chain over pre-drawn uniforms, counting '+' labels.

    The chain starts in '+', transitions with P(+ | current) given by q_pp
    or q_pm, and only labels after the first ``burn_in`` steps are counted.
    """
    u = np.ascontiguousarray(uniforms, dtype=np.float64)
    n = u.shape[0]
    if burn_in < 0 or burn_in >= n:
        raise ValueError(f"burn_in must be in [0, {n}), got {burn_in}")
    plus = True
    count = 0
    for i, x in enumerate(u.tolist()):
        plus = x < (q_pp if plus else q_pm)
        if i >= burn_in and plus:
            count += 1
    return count


def power_iterate(q_pp: float, q_pm: float, p0: float, n_steps: int) -> float:
    """n_steps applications of p -> q_pp p + q_pm (1 - p)."""
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    p = float(p0)
    for _ in range(n_steps):
        p = q_pp * p + q_pm * (1.0 - p)
    return p

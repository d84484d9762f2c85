"""Masks over N cells and the brute-force truth-functional filter.

An algebra element is encoded as an integer bitmask: bit ``j`` set means
cell ``j`` is part of the sum.  The filter below does not assume the
Boolean structure of masks; callers hand it operation tables computed from
the actual indicators or projectors.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import MaskLengthMismatch, TooLarge

MAX_EXHAUSTIVE_CELLS = 4


def mask_to_int(mask: Sequence[int] | int, n: int) -> int:
    if isinstance(mask, (int, np.integer)) and not isinstance(mask, bool):
        if not 0 <= mask < (1 << n):
            raise MaskLengthMismatch(f"mask {mask} out of range for {n} cells")
        return int(mask)
    bits = list(mask)
    if len(bits) != n:
        raise MaskLengthMismatch(f"mask has length {len(bits)}, expected {n}")
    out = 0
    for j, b in enumerate(bits):
        if b not in (0, 1, True, False):
            raise MaskLengthMismatch(f"mask entries must be 0/1, got {b!r}")
        if b:
            out |= 1 << j
    return out


def int_to_bits(m: int, n: int) -> tuple[int, ...]:
    return tuple((m >> j) & 1 for j in range(n))


def cell_functional_table(n: int, k: int) -> tuple[int, ...]:
    """Valuation table of the functional that selects cell ``k``."""
    return tuple((m >> k) & 1 for m in range(1 << n))


def filter_truth_functionals(
    n_elements: int,
    top: int,
    negation: Sequence[int],
    product: np.ndarray,
) -> list[tuple[int, ...]]:
    """All 0/1 maps on ``n_elements`` elements obeying the truth-functional rules.

    ``negation[m]`` is the index of I - P_m, ``product[a, b]`` that of
    P_a P_b.  Every one of the 2**n_elements candidate maps is tested.
    """
    if n_elements > 1 << MAX_EXHAUSTIVE_CELLS:
        raise TooLarge(f"{n_elements} algebra elements is too many for exhaustive search")
    candidates = np.arange(1 << n_elements, dtype=np.int64)
    # values[c, m] = theta_c(P_m)
    values = ((candidates[:, None] >> np.arange(n_elements)[None, :]) & 1).astype(np.int8)

    ok = values[:, top] == 1
    neg = np.asarray(negation)
    ok &= np.all(values[:, neg] == 1 - values, axis=1)
    product = np.asarray(product)
    for a in range(n_elements):
        ok &= np.all(values[:, product[a]] == values[:, [a]] * values, axis=1)
    return [tuple(int(x) for x in row) for row in values[ok]]

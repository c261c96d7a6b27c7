"""Numba-compiled training kernels.

Kept in a separate module so that importing the package never pulls in
numba; this module is imported only when the numba backend is active.
``epoch_serial_jit`` is compiled from the very function that the numpy
backend runs, not from a copy.
"""

import math

import numba
from numba import prange

from ._kernels import epoch_serial

epoch_serial_jit = numba.njit(cache=True)(epoch_serial)


@numba.njit(parallel=True, cache=True)
def epoch_hogwild(w_main, w_ctx, b_main, b_ctx, g_main, g_ctx, gb_main, gb_ctx,
                  rec_i, rec_j, log_x, weight, order, lr):
    """Lock-free parallel epoch: same arithmetic as the serial pass, but
    rows are updated without synchronization, so concurrent writes race.

    prange cannot break early, so a non-finite residual marks the record
    and skips its update instead of stopping the pass.
    """
    dim = w_main.shape[1]
    total = 0.0
    bad = -1
    for t in prange(order.shape[0]):
        r = order[t]
        i = rec_i[r]
        j = rec_j[r]
        dot = 0.0
        for c in range(dim):
            dot += w_main[i, c] * w_ctx[j, c]
        diff = dot + b_main[i] + b_ctx[j] - log_x[r]
        if not math.isfinite(diff):
            bad = r
        else:
            wgt = weight[r]
            total += wgt * diff * diff
            g = 2.0 * wgt * diff
            for c in range(dim):
                gi = g * w_ctx[j, c]
                gj = g * w_main[i, c]
                w_main[i, c] -= lr * gi / math.sqrt(g_main[i, c])
                g_main[i, c] += gi * gi
                w_ctx[j, c] -= lr * gj / math.sqrt(g_ctx[j, c])
                g_ctx[j, c] += gj * gj
            b_main[i] -= lr * g / math.sqrt(gb_main[i])
            gb_main[i] += g * g
            b_ctx[j] -= lr * g / math.sqrt(gb_ctx[j])
            gb_ctx[j] += g * g
    return total, bad

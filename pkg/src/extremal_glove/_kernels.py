"""Hot training loops with a selectable execution backend.

The serial epoch body is written once, in plain Python over scalars and
preallocated float64 arrays.  Under the numba backend that same function
object is compiled with ``@njit``; under the numpy fallback it runs in
CPython unchanged.  Both paths execute the identical sequence of float64
operations, so single-threaded training is bit-for-bit reproducible
across backends (numba keeps strict IEEE semantics by default).

Backend selection: the ``EXTREMAL_GLOVE_BACKEND`` environment variable
takes the values ``auto`` (default: numba when importable, else numpy),
``numba``, or ``numpy``.

The multi-threaded variant is lock-free: concurrent updates to shared
rows race by design, so results with threads > 1 vary run to run.  It
exists only under the numba backend; the numpy fallback runs serially
regardless of the thread setting.
"""

from __future__ import annotations

import math
import os
import warnings

from .errors import UsageError

BACKEND_ENV = "EXTREMAL_GLOVE_BACKEND"
THREADS_ENV = "EXTREMAL_GLOVE_THREADS"
BACKEND_CHOICES = ("auto", "numba", "numpy")


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def resolve_backend(requested: str | None = None) -> str:
    """Map a requested backend name (or the env var) to 'numba' or 'numpy'."""
    if requested is None:
        requested = os.environ.get(BACKEND_ENV, "auto")
    name = requested.strip().lower()
    if name not in BACKEND_CHOICES:
        raise UsageError(
            f"unknown backend {requested!r}; {BACKEND_ENV} accepts {BACKEND_CHOICES}"
        )
    if name == "numpy":
        return "numpy"
    if name == "numba":
        if not numba_available():
            raise UsageError("numba backend requested but numba is not importable")
        return "numba"
    return "numba" if numba_available() else "numpy"


def epoch_serial(w_main, w_ctx, b_main, b_ctx, g_main, g_ctx, gb_main, gb_ctx,
                 rec_i, rec_j, log_x, weight, order, lr):
    """One pass over the records in the given visit order.

    Updates parameters and squared-gradient accumulators in place and
    returns (weighted loss over the records visited, index of the first
    record whose residual was non-finite, or -1).  On a non-finite
    residual the pass stops before applying that record's update.
    """
    dim = w_main.shape[1]
    total = 0.0
    for t in range(order.shape[0]):
        r = order[t]
        i = rec_i[r]
        j = rec_j[r]
        dot = 0.0
        for c in range(dim):
            dot += w_main[i, c] * w_ctx[j, c]
        diff = dot + b_main[i] + b_ctx[j] - log_x[r]
        if not math.isfinite(diff):
            return total, r
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
    return total, -1


def serial_kernel(backend: str):
    """The serial epoch function for the given resolved backend."""
    if backend == "numpy":
        return epoch_serial
    if backend == "numba":
        from . import _numba_kernels
        return _numba_kernels.epoch_serial_jit
    raise ValueError(f"unresolved backend {backend!r}")


def parallel_kernel():
    """The lock-free multi-threaded epoch function (numba only)."""
    from . import _numba_kernels
    return _numba_kernels.epoch_hogwild


def clamp_threads(threads: int, backend: str) -> int:
    """Thread count the kernel will actually run with.

    The numpy backend is always serial; numba is capped by its own
    thread-pool size, fixed at process start.
    """
    if threads < 1:
        raise UsageError(f"thread count must be >= 1, got {threads}")
    if threads == 1:
        return 1
    if backend == "numpy":
        warnings.warn(
            f"numpy backend runs single-threaded; ignoring threads={threads}",
            RuntimeWarning,
            stacklevel=2,
        )
        return 1
    import numba

    limit = int(numba.config.NUMBA_NUM_THREADS)
    if threads > limit:
        warnings.warn(
            f"requested {threads} threads but the numba pool has {limit}; using {limit}",
            RuntimeWarning,
            stacklevel=2,
        )
        return limit
    return threads

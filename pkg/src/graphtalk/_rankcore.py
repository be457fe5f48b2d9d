"""Power-iteration kernel for damped PageRank.

Two interchangeable implementations of the same iteration: a numba
``@njit`` edge loop and a pure-numpy ``bincount`` formulation.  Setting
``GRAPHTALK_PURE_NUMPY=1`` forces the numpy path; otherwise numba is
used when importable.  Both accept the graph as COO arrays with
row-normalized edge values plus a dangling-node mask, and both
redistribute dangling mass according to the teleport distribution.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised indirectly via backend dispatch
    import numba
except ImportError:  # pragma: no cover
    numba = None

def _force_numpy() -> bool:
    # Read per call so the flag can be flipped without re-importing.
    return os.environ.get("GRAPHTALK_PURE_NUMPY", "") == "1"


def _numpy_power_iteration(src, dst, val, dangling, teleport,
                           damping, epsilon, max_iterations):
    n = teleport.shape[0]
    x = teleport.copy()
    for _ in range(max_iterations):
        pulled = np.bincount(dst, weights=val * x[src], minlength=n)
        loose = float(x[dangling].sum())
        x_next = (1.0 - damping) * teleport + damping * (pulled + loose * teleport)
        delta = float(np.abs(x_next - x).sum())
        x = x_next
        if delta < epsilon:
            break
    return x


if numba is not None:

    @numba.njit(cache=True)
    def _numba_power_iteration(src, dst, val, dangling, teleport,
                               damping, epsilon, max_iterations):
        n = teleport.shape[0]
        x = teleport.copy()
        pulled = np.zeros(n)
        for _ in range(max_iterations):
            pulled[:] = 0.0
            for e in range(src.shape[0]):
                pulled[dst[e]] += val[e] * x[src[e]]
            loose = 0.0
            for i in range(n):
                if dangling[i]:
                    loose += x[i]
            delta = 0.0
            for i in range(n):
                xi = (1.0 - damping) * teleport[i] + damping * (pulled[i] + loose * teleport[i])
                delta += abs(xi - x[i])
                x[i] = xi
            if delta < epsilon:
                break
        return x

else:  # pragma: no cover
    _numba_power_iteration = None


def backend_name() -> str:
    """Which implementation :func:`power_iteration` dispatches to."""
    if _force_numpy() or _numba_power_iteration is None:
        return "numpy"
    return "numba"


def power_iteration(
    src: np.ndarray,
    dst: np.ndarray,
    val: np.ndarray,
    dangling: np.ndarray,
    teleport: np.ndarray,
    damping: float,
    epsilon: float,
    max_iterations: int,
) -> np.ndarray:
    """Iterate ``x' = (1-d)*t + d*(P^T x + loose_mass * t)`` to a fixed point.

    ``src``/``dst``/``val`` encode the row-normalized transition matrix in
    COO form, ``dangling`` is a boolean mask of nodes with no out-edges,
    and ``teleport`` is the (already normalized) restart distribution.
    Stops when the L1 change drops below ``epsilon`` or after
    ``max_iterations`` sweeps.  The result is not renormalized here.
    """
    src = np.ascontiguousarray(src, dtype=np.int64)
    dst = np.ascontiguousarray(dst, dtype=np.int64)
    val = np.ascontiguousarray(val, dtype=np.float64)
    dangling = np.ascontiguousarray(dangling, dtype=np.bool_)
    teleport = np.ascontiguousarray(teleport, dtype=np.float64)
    if backend_name() == "numba":
        return _numba_power_iteration(
            src, dst, val, dangling, teleport,
            float(damping), float(epsilon), int(max_iterations),
        )
    return _numpy_power_iteration(
        src, dst, val, dangling, teleport,
        float(damping), float(epsilon), int(max_iterations),
    )

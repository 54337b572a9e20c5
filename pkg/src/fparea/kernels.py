"""Block-scan kernels for the first-passage path simulator.

A kernel scans one block of Gaussian increments for the first crossing of
zero, accumulating the running increment sum and trapezoid area, and
returns either the crossing site or the carries for the next block.

Two interchangeable backends exist: a scalar scan compiled with numba, and
a vectorized numpy twin used when numba is unavailable or when
FPAREA_NO_NUMBA is set.  They are bitwise-identical by construction, which
the test suite asserts draw-for-draw:

- the increment prefix sum folds the incoming carry into element 0, so the
  numpy cumsum performs exactly the scalar left-fold addition sequence;
- positions are always formed as x0 + s, never updated incrementally;
- the bridge acceptance argument is written ((-2*x_prev)*x_next)/dt in
  both, compiled without fastmath so no reassociation sneaks in, and
  short-circuited to rejection below BRIDGE_LOG_FLOOR by the same rule;
- crossing finalization (interpolation, partial areas) lives in the
  driver, shared by both backends.

Draw blocks are generated by the caller, so backends consume identical
RNG streams positionally and results cannot depend on block sizing.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - environment without numba
    njit = None
    HAS_NUMBA = False

NO_EVENT = 0
ENDPOINT_HIT = 1
BRIDGE_HIT = 2

# Bridge acceptance short-circuit: below this log-probability exp underflows
# to at most one subnormal ulp, so the test is defined to reject without
# evaluating exp.  Both backends apply the identical rule.
BRIDGE_LOG_FLOOR = -745.0


def scan_block_reference(x0, s_carry, area_carry, drift, sqrt_dt, dt, use_bridge, z, u):
    """Scalar reference scan; also the source compiled by numba.

    Walks X_{k+1} = X_k + drift + sqrt_dt * Z_k from X = x0 + s_carry.  A
    step ending at or below zero is an ENDPOINT_HIT; otherwise, when
    use_bridge, the step is a BRIDGE_HIT with probability
    exp(-2 X_k X_{k+1} / dt) decided by the matching uniform draw.

    Returns (status, j, x_before, x_after, s_before, area_before) where j
    is the in-block step index of the hit and the s/area values exclude
    the hit step.  On NO_EVENT, j is the block length and the last four
    values are the end-of-block state (x repeated twice).
    """
    s = s_carry
    area = area_carry
    x = x0 + s
    for j in range(z.shape[0]):
        s_next = s + (drift + sqrt_dt * z[j])
        x_next = x0 + s_next
        if x_next <= 0.0:
            return ENDPOINT_HIT, j, x, x_next, s, area
        if use_bridge:
            arg = ((-2.0 * x) * x_next) / dt
            if arg >= BRIDGE_LOG_FLOOR and u[j] < np.exp(arg):
                return BRIDGE_HIT, j, x, x_next, s, area
        area = area + (0.5 * (x + x_next)) * dt
        s = s_next
        x = x_next
    return NO_EVENT, z.shape[0], x, x, s, area


def scan_block_numpy(x0, s_carry, area_carry, drift, sqrt_dt, dt, use_bridge, z, u):
    """Vectorized twin of `scan_block_reference`; see module docstring."""
    nsteps = z.shape[0]
    delta = drift + sqrt_dt * z
    delta[0] = s_carry + delta[0]
    s = np.cumsum(delta)
    x_next = x0 + s
    x_prev = np.empty_like(x_next)
    x_prev[0] = x0 + s_carry
    x_prev[1:] = x_next[:-1]

    endpoint = x_next <= 0.0
    if use_bridge:
        arg = ((-2.0 * x_prev) * x_next) / dt
        p = np.zeros(nsteps)
        live = np.flatnonzero(arg >= BRIDGE_LOG_FLOOR)
        if live.size:
            # past an endpoint hit the argument goes positive and can
            # overflow; those lanes are dead, the endpoint hit wins first
            with np.errstate(over="ignore"):
                p[live] = np.exp(arg[live])
        event = endpoint | (u < p)
    else:
        event = endpoint
    hit = np.flatnonzero(event)
    trap = (0.5 * (x_prev + x_next)) * dt
    if hit.size == 0:
        trap[0] = area_carry + trap[0]
        area_end = float(np.cumsum(trap)[-1])
        return NO_EVENT, nsteps, float(x_next[-1]), float(x_next[-1]), float(s[-1]), area_end
    j = int(hit[0])
    status = ENDPOINT_HIT if endpoint[j] else BRIDGE_HIT
    if j == 0:
        s_before = s_carry
        area_before = area_carry
    else:
        trap[0] = area_carry + trap[0]
        s_before = float(s[j - 1])
        area_before = float(np.cumsum(trap[:j])[-1])
    return status, j, float(x_prev[j]), float(x_next[j]), s_before, area_before


if HAS_NUMBA:
    scan_block_compiled = njit(cache=True, fastmath=False)(scan_block_reference)
else:  # pragma: no cover
    scan_block_compiled = None

_force_numpy = bool(os.environ.get("FPAREA_NO_NUMBA"))
USING_NUMBA = HAS_NUMBA and not _force_numpy

# mc looks this up at call time, so tests can swap backends per-case.
scan_block = scan_block_compiled if USING_NUMBA else scan_block_numpy


def backend_name() -> str:
    return "numba" if scan_block is not None and scan_block is scan_block_compiled else "numpy"

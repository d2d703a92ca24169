"""Jit-compiled inner loops for the two-coefficient map.

Arithmetic here mirrors `dynamics.step` expression-for-expression so that
compiled and interpreted paths produce bit-identical trajectories (asserted
in the test suite).  The seeding helpers mirror `seeding.mix64` /
`seeding.uniform01` the same way.

Kind codes shared with `classify`: 0 divergent, 1 fixed point, 2 periodic,
3 chaotic, 4 marginal.
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange

KIND_DIVERGENT = 0
KIND_FIXED_POINT = 1
KIND_PERIODIC = 2
KIND_CHAOTIC = 3
KIND_MARGINAL = 4

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _finalize(z):
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def mix2(a, b):
    state = _finalize(np.uint64(0) + _GAMMA + a)
    state = _finalize(state + _GAMMA + b)
    return state


@njit(cache=True)
def mix3(a, b, c):
    state = _finalize(np.uint64(0) + _GAMMA + a)
    state = _finalize(state + _GAMMA + b)
    state = _finalize(state + _GAMMA + c)
    return state


@njit(cache=True)
def unif_at(seed, k):
    # k-th double in [0, 1) of the stream, k >= 1
    z = _finalize(seed + np.uint64(k) * _GAMMA)
    return (z >> np.uint64(11)) * 2.0**-53


@njit(cache=True)
def _run_transient(x1, x2, alpha, beta, c0, c1, n, guard):
    """Advance n steps; returns (x1, x2, ok)."""
    for _ in range(n):
        w = c0 * x1 + c1 * x2
        x1, x2 = alpha - w * w + beta * x2, x1
        if not (np.isfinite(x1) and np.isfinite(x2)) or abs(x1) > guard:
            return x1, x2, False
    return x1, x2, True


@njit(cache=True)
def _fill_tail(x1, x2, alpha, beta, c0, c1, tail, guard):
    """Advance len(tail) steps recording states; returns (x1, x2, ok)."""
    for n in range(tail.shape[0]):
        w = c0 * x1 + c1 * x2
        x1, x2 = alpha - w * w + beta * x2, x1
        if not (np.isfinite(x1) and np.isfinite(x2)) or abs(x1) > guard:
            return x1, x2, False
        tail[n, 0] = x1
        tail[n, 1] = x2
    return x1, x2, True


@njit(cache=True)
def period_of_tail(tail, tol, max_period):
    """Smallest k <= max_period with ||s(n)-s(n-k)||_inf < tol over the last
    max_period samples; 0 when none."""
    n = tail.shape[0]
    for k in range(1, max_period + 1):
        ok = True
        for i in range(n - max_period, n):
            if abs(tail[i, 0] - tail[i - k, 0]) >= tol or abs(tail[i, 1] - tail[i - k, 1]) >= tol:
                ok = False
                break
        if ok:
            return k
    return 0


@njit(cache=True)
def lyap_largest_kernel(x1, x2, alpha, beta, c0, c1, n_total, n_transient, renorm_interval, guard):
    """Largest Lyapunov exponent by the tangent-map method.

    The tangent vector starts at (1, 0), is multiplied by the Jacobian at
    each step, and is renormalized every `renorm_interval` steps (and at the
    transient boundary, so the accumulation window is exact).  Log-growth is
    accumulated from step n_transient on; h = acc / (n_total - n_transient).
    Returns (h, diverged).
    """
    v1, v2 = 1.0, 0.0
    acc = 0.0
    since = 0
    for n in range(n_total):
        w = c0 * x1 + c1 * x2
        nx1 = alpha - w * w + beta * x2
        nx2 = x1
        j11 = -2.0 * c0 * w
        j12 = -2.0 * c1 * w + beta
        nv1 = j11 * v1 + j12 * v2
        nv2 = v1
        x1, x2 = nx1, nx2
        if not (np.isfinite(x1) and np.isfinite(x2)) or abs(x1) > guard:
            return np.nan, True
        v1, v2 = nv1, nv2
        since += 1
        if since == renorm_interval or n == n_transient - 1 or n == n_total - 1:
            norm = np.sqrt(v1 * v1 + v2 * v2)
            if n >= n_transient:
                acc += np.log(norm)
            v1, v2 = v1 / norm, v2 / norm
            since = 0
    return acc / (n_total - n_transient), False


@njit(cache=True)
def lyap_spectrum_kernel(x1, x2, alpha, beta, c0, c1, n_total, n_transient, guard):
    """Both Lyapunov exponents via a 2-frame with per-step Gram-Schmidt.

    Returns (h0, h1, diverged); h0 is the first-vector rate (the caller
    orders the pair).
    """
    a1, a2 = 1.0, 0.0
    b1, b2 = 0.0, 1.0
    acc0 = 0.0
    acc1 = 0.0
    for n in range(n_total):
        w = c0 * x1 + c1 * x2
        nx1 = alpha - w * w + beta * x2
        nx2 = x1
        j11 = -2.0 * c0 * w
        j12 = -2.0 * c1 * w + beta
        na1 = j11 * a1 + j12 * a2
        na2 = a1
        nb1 = j11 * b1 + j12 * b2
        nb2 = b1
        x1, x2 = nx1, nx2
        if not (np.isfinite(x1) and np.isfinite(x2)) or abs(x1) > guard:
            return np.nan, np.nan, True
        r0 = np.sqrt(na1 * na1 + na2 * na2)
        a1, a2 = na1 / r0, na2 / r0
        proj = nb1 * a1 + nb2 * a2
        ob1 = nb1 - proj * a1
        ob2 = nb2 - proj * a2
        r1 = np.sqrt(ob1 * ob1 + ob2 * ob2)
        b1, b2 = ob1 / r1, ob2 / r1
        if n >= n_transient:
            acc0 += np.log(r0)
            acc1 += np.log(r1)
    m = n_total - n_transient
    return acc0 / m, acc1 / m, False


@njit(cache=True)
def classify_kernel(
    x1,
    x2,
    alpha,
    beta,
    c0,
    c1,
    transient,
    tail_len,
    tol,
    max_period,
    lyap_total,
    lyap_transient,
    renorm_interval,
    h_threshold,
    guard,
):
    """Classify the orbit from (x1, x2).

    Precedence: divergent if the guard trips anywhere; fixed point/periodic
    if the post-transient tail repeats within tol; otherwise by the sign of
    the tangent-map exponent h against h_threshold (|h| <= threshold, or
    h < -threshold with no detected period, lands in marginal).

    Returns (kind, period, h, fx1, fx2) where (fx1, fx2) is the state at the
    end of the recorded tail (a point on the attractor when bounded).
    """
    x1, x2, ok = _run_transient(x1, x2, alpha, beta, c0, c1, transient, guard)
    if not ok:
        return KIND_DIVERGENT, 0, np.nan, x1, x2
    tail = np.empty((tail_len, 2))
    x1, x2, ok = _fill_tail(x1, x2, alpha, beta, c0, c1, tail, guard)
    if not ok:
        return KIND_DIVERGENT, 0, np.nan, x1, x2
    k = period_of_tail(tail, tol, max_period)
    if k == 1:
        return KIND_FIXED_POINT, 1, np.nan, x1, x2
    if k > 1:
        return KIND_PERIODIC, k, np.nan, x1, x2
    h, div = lyap_largest_kernel(
        x1, x2, alpha, beta, c0, c1, lyap_total, lyap_transient, renorm_interval, guard
    )
    if div:
        return KIND_DIVERGENT, 0, np.nan, x1, x2
    if h > h_threshold:
        return KIND_CHAOTIC, 0, h, x1, x2
    return KIND_MARGINAL, 0, h, x1, x2


@njit(cache=True, parallel=True)
def scan_grid_kernel(
    c0_values,
    c1_values,
    alpha,
    beta,
    seed,
    n_ics,
    box_lo1,
    box_hi1,
    box_lo2,
    box_hi2,
    n_total,
    n_transient,
    renorm_interval,
    transient,
    tail_len,
    tol,
    max_period,
    h_threshold,
    guard,
):
    """Per-cell Lyapunov ensemble plus classification over a coefficient grid.

    Cell (row j, column i) covers (c0_values[i], c1_values[j]); its seed is
    mix3(seed, j, i) and IC k within the cell uses mix2(cell_seed, k), so
    results are independent of scheduling and worker count.  Classification
    starts from IC 0.
    """
    n0 = c0_values.shape[0]
    n1 = c1_values.shape[0]
    h_mean = np.full((n1, n0), np.nan)
    h_std = np.full((n1, n0), np.nan)
    n_valid = np.zeros((n1, n0), dtype=np.int64)
    kind = np.zeros((n1, n0), dtype=np.int64)
    period = np.zeros((n1, n0), dtype=np.int64)
    for j in prange(n1):
        hs = np.empty(n_ics)
        for i in range(n0):
            c0 = c0_values[i]
            c1 = c1_values[j]
            cell_seed = mix3(np.uint64(seed), np.uint64(j), np.uint64(i))
            valid = 0
            ic0_x1 = 0.0
            ic0_x2 = 0.0
            for k in range(n_ics):
                ic_seed = mix2(cell_seed, np.uint64(k))
                x1 = box_lo1 + (box_hi1 - box_lo1) * unif_at(ic_seed, 1)
                x2 = box_lo2 + (box_hi2 - box_lo2) * unif_at(ic_seed, 2)
                if k == 0:
                    ic0_x1 = x1
                    ic0_x2 = x2
                h, div = lyap_largest_kernel(
                    x1, x2, alpha, beta, c0, c1, n_total, n_transient, renorm_interval, guard
                )
                if not div:
                    hs[valid] = h
                    valid += 1
            n_valid[j, i] = valid
            if valid > 0:
                m = 0.0
                for k in range(valid):
                    m += hs[k]
                m /= valid
                h_mean[j, i] = m
                if valid > 1:
                    var = 0.0
                    for k in range(valid):
                        d = hs[k] - m
                        var += d * d
                    h_std[j, i] = np.sqrt(var / (valid - 1))
                else:
                    h_std[j, i] = 0.0
            knd, per, _, _, _ = classify_kernel(
                ic0_x1,
                ic0_x2,
                alpha,
                beta,
                c0,
                c1,
                transient,
                tail_len,
                tol,
                max_period,
                n_total,
                n_transient,
                renorm_interval,
                h_threshold,
                guard,
            )
            kind[j, i] = knd
            period[j, i] = per
    return h_mean, h_std, n_valid, kind, period


@njit(cache=True)
def bifurcation_line_kernel(
    c0_values,
    c1_values,
    alpha,
    beta,
    seed,
    transient,
    tail_len,
    tol,
    max_period,
    n_record,
    n_total,
    n_transient,
    renorm_interval,
    h_threshold,
    guard,
    continuation,
):
    """Sweep along a parameter line, classifying and recording attractor
    x1 samples at each point.

    With continuation, point idx starts from the attractor state reached at
    point idx-1; at idx 0 and after a divergent point, the IC is a fresh
    unit-square draw seeded by mix2(seed, idx).  Periodic points record their
    k cycle values; bounded aperiodic points record the last n_record tail
    values; divergent points record none.
    """
    n = c0_values.shape[0]
    kind = np.zeros(n, dtype=np.int64)
    period = np.zeros(n, dtype=np.int64)
    hs = np.full(n, np.nan)
    counts = np.zeros(n, dtype=np.int64)
    values = np.zeros((n, n_record))
    x1 = 0.0
    x2 = 0.0
    have_state = False
    tail = np.empty((tail_len, 2))
    for idx in range(n):
        c0 = c0_values[idx]
        c1 = c1_values[idx]
        if not (continuation and have_state):
            s = mix2(np.uint64(seed), np.uint64(idx))
            x1 = unif_at(s, 1)
            x2 = unif_at(s, 2)
        tx1, tx2, ok = _run_transient(x1, x2, alpha, beta, c0, c1, transient, guard)
        if ok:
            tx1, tx2, ok = _fill_tail(tx1, tx2, alpha, beta, c0, c1, tail, guard)
        if not ok:
            kind[idx] = KIND_DIVERGENT
            have_state = False
            continue
        x1, x2 = tx1, tx2
        have_state = True
        k = period_of_tail(tail, tol, max_period)
        if k > 0:
            kind[idx] = KIND_FIXED_POINT if k == 1 else KIND_PERIODIC
            period[idx] = k
            counts[idx] = k
            for m in range(k):
                values[idx, m] = tail[tail_len - k + m, 0]
            continue
        h, div = lyap_largest_kernel(
            x1, x2, alpha, beta, c0, c1, n_total, n_transient, renorm_interval, guard
        )
        if div:
            kind[idx] = KIND_DIVERGENT
            have_state = False
            continue
        hs[idx] = h
        kind[idx] = KIND_CHAOTIC if h > h_threshold else KIND_MARGINAL
        counts[idx] = n_record
        for m in range(n_record):
            values[idx, m] = tail[tail_len - n_record + m, 0]
    return kind, period, hs, counts, values

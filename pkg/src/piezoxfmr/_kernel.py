"""Compiled inner loop of the transient solver.

Pure nodal formulation: unknowns are the voltages of nodes 1..n, ground is
node 0. Capacitors use trapezoidal companions, the sine source is a Norton
equivalent through its series resistance, diodes are Newton-linearised.
The conductance matrix is symmetric and diagonally dominant, so a banded
LU without pivoting is safe.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - slow pure-Python fallback

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


EXP_CLAMP = 80.0

OK = 0
NEWTON_FAILED = 1
STEP_CAP = 2


@njit(cache=True)
def diode_iv(kind, p0, p1, p2, v):
    """(current, conductance) of one diode at junction voltage v.

    kind 0: exponential, p0 = Is, p1 = n * VT.
    kind 1: ideal switch, p0 = Ron, p1 = Goff, p2 = Vdrop.
    """
    if kind == 0:
        x = v / p1
        if x > EXP_CLAMP:
            ex = math.exp(EXP_CLAMP)
            return p0 * (ex * (1.0 + x - EXP_CLAMP) - 1.0), p0 * ex / p1
        ex = math.exp(x)
        return p0 * (ex - 1.0), p0 * ex / p1
    if v > p2:
        return (v - p2) / p0, 1.0 / p0
    return p1 * v, p1


@njit(cache=True)
def _stamp(A, bw, a, b, g):
    if a > 0:
        A[a - 1, bw] += g
    if b > 0:
        A[b - 1, bw] += g
    if a > 0 and b > 0:
        A[a - 1, bw + b - a] -= g
        A[b - 1, bw + a - b] -= g


@njit(cache=True)
def _band_solve(A, rhs, bw, x):
    n = rhs.shape[0]
    for k in range(n):
        piv = A[k, bw]
        top = min(n, k + bw + 1)
        for i in range(k + 1, top):
            f = A[i, bw + k - i] / piv
            if f != 0.0:
                for j in range(k, top):
                    A[i, bw + j - i] -= f * A[k, bw + j - k]
                rhs[i] -= f * rhs[k]
    for i in range(n - 1, -1, -1):
        s = rhs[i]
        top = min(n, i + bw + 1)
        for j in range(i + 1, top):
            s -= A[i, bw + j - i] * x[j + 1]
        x[i + 1] = s / A[i, bw]


@njit(cache=True)
def _segment(kind, p2, v):
    # ideal switch: 1 when conducting; exponential diodes have no segments
    if kind == 1 and v > p2:
        return 1
    return 0


@njit(cache=True)
def _advance(v, icap, t, h, n, bw, ca, cb, cv, ra, rb, rg, da, dk, dkind, dp0, dp1, dp2,
             snode, amp, freq, gs, maxiter, abstol, reltol, A, A_lin, rhs, vn):
    """One trapezoidal step of length h from state (v, icap). On success the
    new voltages are left in vn and True is returned; v and icap untouched.

    A_lin must hold the stamps of capacitors (for this h), resistors and the
    source conductance.
    """
    e_new = amp * math.sin(2.0 * math.pi * freq * (t + h))
    rhs_lin = np.zeros(n)
    for q in range(ca.shape[0]):
        a = ca[q]
        b = cb[q]
        ieq = 2.0 * cv[q] / h * (v[a] - v[b]) + icap[q]
        if a > 0:
            rhs_lin[a - 1] += ieq
        if b > 0:
            rhs_lin[b - 1] -= ieq
    rhs_lin[snode - 1] += e_new * gs

    all_pwl = True
    for q in range(da.shape[0]):
        if dkind[q] != 1:
            all_pwl = False
    vg = v.copy()
    for it in range(maxiter):
        A[:, :] = A_lin
        rhs[:] = rhs_lin
        for q in range(da.shape[0]):
            a = da[q]
            b = dk[q]
            vd = vg[a] - vg[b]
            cur, g = diode_iv(dkind[q], dp0[q], dp1[q], dp2[q], vd)
            _stamp(A, bw, a, b, g)
            ieq = cur - g * vd
            if a > 0:
                rhs[a - 1] -= ieq
            if b > 0:
                rhs[b - 1] += ieq
        _band_solve(A, rhs, bw, vn)
        done = True
        for i in range(1, n + 1):
            if abs(vn[i] - vg[i]) > abstol + reltol * abs(vn[i]):
                done = False
                break
        if not done and all_pwl:
            # piecewise-linear devices: the linear model is exact if no
            # diode changed segment, whatever the size of the update
            done = True
            for q in range(da.shape[0]):
                a = da[q]
                b = dk[q]
                if _segment(1, dp2[q], vn[a] - vn[b]) != _segment(1, dp2[q], vg[a] - vg[b]):
                    done = False
                    break
        if done:
            return True
        for i in range(1, n + 1):
            vg[i] = vn[i]
    return False


@njit(cache=True)
def _linear_matrix(A_lin, bw, h, ca, cb, cv, ra, rb, rg, snode, gs):
    A_lin[:, :] = 0.0
    for q in range(ca.shape[0]):
        _stamp(A_lin, bw, ca[q], cb[q], 2.0 * cv[q] / h)
    for q in range(ra.shape[0]):
        _stamp(A_lin, bw, ra[q], rb[q], rg[q])
    _stamp(A_lin, bw, snode, 0, gs)


@njit(cache=True)
def run_transient(n, bw, ca, cb, cv, ra, rb, rg, da, dk, dkind, dp0, dp1, dp2,
                  snode, amp, freq, gs, out_node, dt, n_steps, steady_tol, spp,
                  record_nodes, maxiter, abstol, reltol, max_halvings):
    """Integrate from rest. ``steady_tol > 0`` enables the steady-state stop
    (n_steps is then the hard cap). Returns status, steps taken, end (or
    failure) time and the trace buffers; only the first steps + 1 samples of
    each buffer are meaningful."""
    v = np.zeros(n + 1)
    vn = np.zeros(n + 1)
    vsub = np.zeros(n + 1)
    icap = np.zeros(ca.shape[0])
    icap_sub = np.zeros(ca.shape[0])
    A = np.zeros((n, 2 * bw + 1))
    A_lin = np.zeros((n, 2 * bw + 1))
    A_sub = np.zeros((n, 2 * bw + 1))
    _linear_matrix(A_lin, bw, dt, ca, cb, cv, ra, rb, rg, snode, gs)
    rhs = np.zeros(n)
    v_out = np.zeros(n_steps + 1)
    v_src = np.zeros(n_steps + 1)
    i_src = np.zeros(n_steps + 1)
    if record_nodes:
        nodes = np.zeros((n_steps + 1, n + 1))
    else:
        nodes = np.zeros((1, n + 1))

    period_sum = 0.0
    prev_mean = 0.0
    n_periods = 0
    calm = 0
    for step in range(n_steps):
        t = step * dt
        sub = 1
        while True:
            h = dt / sub
            for i in range(n + 1):
                vsub[i] = v[i]
            for q in range(ca.shape[0]):
                icap_sub[q] = icap[q]
            ok = True
            if sub > 1:
                _linear_matrix(A_sub, bw, h, ca, cb, cv, ra, rb, rg, snode, gs)
            for s in range(sub):
                if not _advance(vsub, icap_sub, t + s * h, h, n, bw, ca, cb, cv, ra, rb, rg,
                                da, dk, dkind, dp0, dp1, dp2, snode, amp, freq, gs,
                                maxiter, abstol, reltol, A, A_sub if sub > 1 else A_lin, rhs, vn):
                    ok = False
                    break
                for q in range(ca.shape[0]):
                    a = ca[q]
                    b = cb[q]
                    g = 2.0 * cv[q] / h
                    icap_sub[q] = g * ((vn[a] - vn[b]) - (vsub[a] - vsub[b])) - icap_sub[q]
                for i in range(n + 1):
                    vsub[i] = vn[i]
            if ok:
                break
            sub *= 2
            if sub > 2**max_halvings:
                return NEWTON_FAILED, step, t, v_out, v_src, i_src, nodes
        for i in range(n + 1):
            v[i] = vsub[i]
        for q in range(ca.shape[0]):
            icap[q] = icap_sub[q]

        k = step + 1
        e = amp * math.sin(2.0 * math.pi * freq * k * dt)
        v_out[k] = v[out_node]
        v_src[k] = v[snode]
        i_src[k] = (e - v[snode]) * gs
        if record_nodes:
            for i in range(n + 1):
                nodes[k, i] = v[i]

        if steady_tol > 0.0:
            period_sum += v[out_node]
            if k % spp == 0:
                mean = period_sum / spp
                period_sum = 0.0
                n_periods += 1
                if n_periods > 1 and abs(mean - prev_mean) <= steady_tol * abs(mean):
                    calm += 1
                else:
                    calm = 0
                prev_mean = mean
                if calm >= 5 and n_periods >= 10:
                    return OK, k, k * dt, v_out, v_src, i_src, nodes
    status = STEP_CAP if steady_tol > 0.0 else OK
    return status, n_steps, n_steps * dt, v_out, v_src, i_src, nodes

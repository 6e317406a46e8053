"""Small scalar numerical kernels: bracketing root search, golden-section
maximisation, adaptive Simpson quadrature and the four Bessel functions
J0, J1, I0, I1 needed by the plate modes."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def bisect(f: Callable[[float], float], lo: float, hi: float, maxiter: int = 200) -> float:
    """Bisect a sign change of ``f`` on ``[lo, hi]`` down to float resolution."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_roots(
    f: Callable[[float], float], count: int, step: float, stop: float, start: float = 0.0
) -> list[float]:
    """First ``count`` roots of ``f`` on ``(start, stop]`` found by a fixed-step
    sign-change scan followed by bisection. ``start`` itself is never sampled,
    which keeps trivial roots at the origin out of the result."""
    roots: list[float] = []
    x0 = start + step
    f0 = f(x0)
    while len(roots) < count and x0 < stop:
        x1 = x0 + step
        f1 = f(x1)
        if f0 == 0.0:
            roots.append(x0)
        elif (f0 > 0) != (f1 > 0):
            roots.append(bisect(f, x0, x1))
        x0, f0 = x1, f1
    if len(roots) < count:
        raise ValueError(f"found only {len(roots)} of {count} roots below {stop}")
    return roots


def golden_max(f: Callable[[float], float], lo: float, hi: float, rtol: float = 1e-12) -> float:
    """Abscissa of the maximum of a unimodal ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    scale = max(abs(lo), abs(hi))
    while b - a > rtol * scale:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return c if fc >= fd else d


def adaptive_simpson(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rtol: float = 1e-8,
    panels: int = 32,
    max_depth: int = 40,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson bisection.

    ``f`` must accept a numpy array. The interval is first cut into ``panels``
    equal pieces; a composite Simpson estimate over those sets the absolute
    error budget ``rtol * |I|`` that the adaptive refinement then honours.
    """
    if a == b:
        return 0.0
    edges = np.linspace(a, b, panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    fe = np.asarray(f(edges), dtype=float)
    fm = np.asarray(f(mids), dtype=float)
    h = edges[1:] - edges[:-1]
    whole = h / 6.0 * (fe[:-1] + 4.0 * fm + fe[1:])
    # integrals that cancel to ~0 (orthogonality checks) use the L1 scale
    scale = max(abs(whole.sum()), float(np.sum(np.abs(whole))) * 1e-3, 1e-300)
    tol = rtol * scale / panels

    total = 0.0
    for i in range(panels):
        stack = [(edges[i], edges[i + 1], fe[i], fm[i], fe[i + 1], whole[i], tol, 0)]
        while stack:
            x0, x1, f0, fmid, f1, s, eps, depth = stack.pop()
            xm = 0.5 * (x0 + x1)
            ql, qr = 0.5 * (x0 + xm), 0.5 * (xm + x1)
            fl, fr = np.asarray(f(np.array([ql, qr])), dtype=float)
            left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + fmid)
            right = (x1 - xm) / 6.0 * (fmid + 4.0 * fr + f1)
            err = left + right - s
            if depth >= max_depth or abs(err) <= 15.0 * eps:
                total += left + right + err / 15.0
            else:
                stack.append((xm, x1, fmid, fr, f1, right, 0.5 * eps, depth + 1))
                stack.append((x0, xm, f0, fl, fmid, left, 0.5 * eps, depth + 1))
    return total


# --- Bessel functions -------------------------------------------------------

_SERIES_LIMIT = 12.0


def _series(x: float, order: int, alternating: bool) -> float:
    half = 0.5 * x
    q = half * half
    term = half**order / math.factorial(order)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + order))
        if alternating:
            term = -term
        total += term
        if k > half and abs(term) < 1e-18 * max(abs(total), 1.0):
            return total
        if k > 200:
            return total


def _hankel_terms(order: int, x: float) -> list[float]:
    """Terms a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! (8x)^k), truncated at
    the smallest term of the asymptotic series."""
    mu = 4.0 * order * order
    terms = [1.0]
    k = 0
    while True:
        k += 1
        nxt = terms[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(nxt) >= abs(terms[-1]) or abs(nxt) < 1e-18 or k > 60:
            if abs(nxt) < abs(terms[-1]):
                terms.append(nxt)
            return terms
        terms.append(nxt)


def _j_asymptotic(order: int, x: float) -> float:
    terms = _hankel_terms(order, x)
    p = sum(t * (-1) ** (k // 2) for k, t in enumerate(terms) if k % 2 == 0)
    q = sum(t * (-1) ** ((k - 1) // 2) for k, t in enumerate(terms) if k % 2 == 1)
    chi = x - (0.5 * order + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _i_asymptotic(order: int, x: float) -> float:
    terms = _hankel_terms(order, x)
    s = sum(t * (-1) ** k for k, t in enumerate(terms))
    return math.exp(x) / math.sqrt(2.0 * math.pi * x) * s


def _bessel(order: int, modified: bool, x: float) -> float:
    ax = abs(x)
    if ax <= _SERIES_LIMIT:
        val = _series(ax, order, alternating=not modified)
    elif modified:
        val = _i_asymptotic(order, ax)
    else:
        val = _j_asymptotic(order, ax)
    return -val if (order % 2 == 1 and x < 0) else val


def _vectorize(order: int, modified: bool):
    def fn(x):
        if np.ndim(x) == 0:
            return _bessel(order, modified, float(x))
        arr = np.asarray(x, dtype=float)
        return np.array([_bessel(order, modified, float(v)) for v in arr.ravel()]).reshape(arr.shape)

    return fn


j0 = _vectorize(0, False)
j1 = _vectorize(1, False)
i0 = _vectorize(0, True)
i1 = _vectorize(1, True)

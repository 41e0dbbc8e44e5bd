"""Independent reference computations used by the tests.

Nothing here calls the library's evaluation code: knot lists are evaluated
with a plain Python loop, suprema are taken over dense grids augmented with
one-sided probes, and the fuzzy-number conditions are checked by sampling.
"""

from __future__ import annotations

import math

import numpy as np

PROBE = 1e-12


def normalise(knots):
    """Sorted list of (lam, value, right) triples; right defaults to value."""
    out = []
    for k in knots:
        if isinstance(k, dict):
            lam, v, r = k["lambda"], k["value"], k.get("right", k["value"])
        elif len(k) == 2:
            lam, v = k
            r = v
        else:
            lam, v, r = k
        out.append((float(lam), float(v), float(r)))
    return sorted(out)


def ev(knots, x):
    """Evaluate the càglàd piecewise-linear function given by ``knots`` at ``x``."""
    return _ev(normalise(knots), x)


def _ev(ks, x):
    if x <= ks[0][0]:
        return ks[0][1]
    for (l0, _, r0), (l1, v1, _) in zip(ks, ks[1:]):
        if l0 < x <= l1:
            if x == l1:
                return v1
            return r0 + (v1 - r0) * ((x - l0) / (l1 - l0))
    return ks[-1][1]


def right(knots, x):
    ks = normalise(knots)
    for lam, _, r in ks:
        if lam == x:
            return r
    return ev(knots, x)


def dense_points(*knot_lists, n=2001):
    pts = set(np.linspace(0.0, 1.0, n).tolist())
    for ks in knot_lists:
        for lam, _, _ in normalise(ks):
            pts.add(lam)
            for h in (PROBE, 1e-9, 1e-6):
                if 0 <= lam - h:
                    pts.add(lam - h)
                if lam + h <= 1:
                    pts.add(lam + h)
    return sorted(pts)


def brute_sup_distance(f_knots, g_knots):
    """Dense-grid sup of |f - g| plus stored right limits at every knot."""
    best = 0.0
    for x in dense_points(f_knots, g_knots):
        best = max(best, abs(ev(f_knots, x) - ev(g_knots, x)))
    lams = {k[0] for k in normalise(f_knots)} | {k[0] for k in normalise(g_knots)}
    for lam in lams:
        if lam < 1:
            best = max(best, abs(right(f_knots, lam) - right(g_knots, lam)))
    return best


def brute_sup_hausdorff(u, v, n=1001):
    """sup over lambda of the level-set Hausdorff distance, right-limit aware.

    ``u`` and ``v`` are pairs (lower_knots, upper_knots).
    """
    u = [normalise(ks) for ks in u]
    v = [normalise(ks) for ks in v]
    best = 0.0
    for x in dense_points(*u, *v, n=n):
        d = max(abs(_ev(u[0], x) - _ev(v[0], x)), abs(_ev(u[1], x) - _ev(v[1], x)))
        best = max(best, d)
    lams = {k[0] for ks in (*u, *v) for k in ks}
    for lam in lams:
        if lam < 1:
            d = max(abs(right(u[0], lam) - right(v[0], lam)), abs(right(u[1], lam) - right(v[1], lam)))
            best = max(best, d)
    return best


def brute_endpoint_ok(knots, increasing: bool) -> bool:
    """Conditions (i)-(iii) for one endpoint function, by sampling."""
    try:
        ks = normalise(knots)
    except (TypeError, ValueError):
        return False
    lams = [k[0] for k in ks]
    if not all(math.isfinite(c) for k in ks for c in k):
        return False
    if len(set(lams)) != len(lams) or lams[0] != 0.0 or lams[-1] != 1.0 or len(ks) < 2:
        return False
    # right continuity at 0
    if abs(ev(ks, 2.0**-40) - ev(ks, 0.0)) > 1e-6:
        return False
    # left continuity on (0, 1]: approach each knot from the left
    for lam in lams[1:]:
        if abs(ev(ks, lam - 2.0**-40) - ev(ks, lam)) > 1e-6:
            return False
    pts = dense_points(ks, n=513)
    # right limits just after each knot must also respect the order
    seq = sorted([(x, ev(ks, x)) for x in pts] + [(lam + 1e-15, r) for lam, _, r in ks if lam < 1])
    vals = [v for _, v in seq]
    if increasing:
        return all(b >= a for a, b in zip(vals, vals[1:]))
    return all(b <= a for a, b in zip(vals, vals[1:]))


def brute_accepts(lower, upper) -> bool:
    """Brute-force acceptance of a (lower, upper) knot-list pair as a fuzzy number."""
    if not brute_endpoint_ok(lower, True) or not brute_endpoint_ok(upper, False):
        return False
    return ev(lower, 1.0) <= ev(upper, 1.0)


def brute_membership(lower, upper, x, n=20001):
    """sup of lambda on a dense grid with lower(lam) <= x <= upper(lam)."""
    best = 0.0
    found = False
    for lam in np.linspace(0.0, 1.0, n):
        if ev(lower, lam) <= x <= ev(upper, lam):
            best = lam
            found = True
    return best if found else 0.0

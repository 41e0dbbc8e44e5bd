"""Hypothesis strategies and seeded generators for random test data."""

from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from levelfuzzy import bivariate as bv
from levelfuzzy import fuzzy
from levelfuzzy import regulated as rg
from levelfuzzy.domain import ConvergentSequence, IntervalGrid
from levelfuzzy.fuzzymap import FuzzyMap
from levelfuzzy.regulated import Direction

# lambdas on a dyadic lattice keep every knot exactly representable
LATTICE = [i / 16 for i in range(17)]


@st.composite
def monotone_knots(draw, increasing: bool = True, lo: float = -4.0, hi: float = 4.0):
    """Knot triples of a valid monotone PLJ function."""
    inner = draw(st.lists(st.sampled_from(LATTICE[1:-1]), unique=True, max_size=5))
    lams = [0.0] + sorted(inner) + [1.0]
    # per knot after the first: the rise into it, then its jump
    steps = draw(st.lists(st.integers(0, 4), min_size=2 * len(lams), max_size=2 * len(lams)))
    cur = draw(st.integers(int(lo * 4), int(hi * 4))) / 4
    vals, rights = [cur], [cur]
    for i in range(1, len(lams)):
        cur += steps[2 * i] / 4
        vals.append(cur)
        if i < len(lams) - 1:
            cur += steps[2 * i + 1] / 4
        rights.append(cur)
    if not increasing:
        vals = [-v for v in vals]
        rights = [-r for r in rights]
    return list(zip(lams, vals, rights))


@st.composite
def plj(draw, direction: Direction = Direction.NONDECREASING):
    knots = draw(monotone_knots(direction == Direction.NONDECREASING))
    return rg.validate(knots, direction)


@st.composite
def fuzzy_knots(draw):
    """(lower_knots, upper_knots) of a valid fuzzy number."""
    lower = draw(monotone_knots(True, -4, 0))
    upper_raw = draw(monotone_knots(False, -4, 0))
    # shift the upper endpoint so upper(1) >= lower(1)
    gap = draw(st.integers(0, 8)) / 4
    shift = lower[-1][1] - upper_raw[-1][1] + gap
    upper = [(l, v + shift, r + shift) for l, v, r in upper_raw]
    return lower, upper


@st.composite
def fuzzy_numbers(draw):
    lo, up = draw(fuzzy_knots())
    return fuzzy.make(rg.validate(lo, Direction.NONDECREASING), rg.validate(up, Direction.NONINCREASING))


# ---------------------------------------------------------------------------
# seeded numpy generators (for the acceptance suite and large pools)


def random_monotone_knots(rng: np.random.Generator, increasing: bool = True, max_inner: int = 5, scale: float = 1.0):
    n_inner = int(rng.integers(0, max_inner + 1))
    lams = [0.0] + sorted(rng.choice(np.arange(1, 16), size=n_inner, replace=False) / 16) + [1.0]
    vals, rights = [], []
    cur = float(rng.integers(-8, 9)) / 4 * scale
    for i, lam in enumerate(lams):
        if i > 0:
            cur += float(rng.integers(0, 5)) / 4 * scale
        vals.append(cur)
        if 0 < i < len(lams) - 1 and rng.random() < 0.3:
            cur += float(rng.integers(1, 5)) / 4 * scale
        rights.append(cur)
    if not increasing:
        vals = [-v for v in vals]
        rights = [-r for r in rights]
    return [(float(a), float(b), float(c)) for a, b, c in zip(lams, vals, rights)]


def random_fuzzy(rng: np.random.Generator, scale: float = 1.0) -> fuzzy.FuzzyNumber:
    lower = random_monotone_knots(rng, True, scale=scale)
    upper = random_monotone_knots(rng, False, scale=scale)
    shift = lower[-1][1] - upper[-1][1] + float(rng.integers(0, 5)) / 4 * scale
    upper = [(l, v + shift, r + shift) for l, v, r in upper]
    return fuzzy.make(rg.validate(lower, Direction.NONDECREASING), rg.validate(upper, Direction.NONINCREASING))


def random_fuzzy_map(rng: np.random.Generator, domain) -> FuzzyMap:
    return FuzzyMap(domain, {t: random_fuzzy(rng) for t in domain.points})


def smooth_lcc(rng: np.random.Generator, domain, direction: Direction = Direction.NONDECREASING) -> bv.LCCFunction:
    """``F(lam, t) = a(t) G(lam) + b(t)`` with slowly varying ``a > 0`` and ``b``.

    The columns are monotone and the cross-sections continuous in ``t``
    (tail-convergent on a convergent-sequence domain).
    """
    G = rg.validate(random_monotone_knots(rng, direction == Direction.NONDECREASING), direction)
    # normalise so that |G| <= 1 and adjacent sample points stay eps-close
    G = rg.scale(1.0 / max(1.0, rg.sup_norm(G).value), G)
    c1, c2 = rng.uniform(-0.1, 0.1, size=2)
    w1, w2 = rng.uniform(0.5, 2.0, size=2)
    cols = {}
    for t in domain.points:
        x = float(t)
        a = 1.0 + c1 * np.sin(w1 * x)
        b = c2 * np.cos(w2 * x)
        cols[t] = rg.add(rg.scale(float(a), G), rg.constant(float(b), direction))
    return bv.LCCFunction(domain, cols)


def random_lcc_pool(seed: int = 0, count: int = 20) -> list[bv.LCCFunction]:
    rng = np.random.default_rng(seed)
    pool = []
    for i in range(count):
        if i % 4 == 3:
            domain = ConvergentSequence.harmonic(int(rng.integers(10, 40)))
        else:
            domain = IntervalGrid.uniform(0.0, 1.0, int(rng.integers(11, 42)))
        direction = Direction.NONDECREASING if i % 2 == 0 else Direction.NONINCREASING
        pool.append(smooth_lcc(rng, domain, direction))
    return pool


MUTATIONS = (
    "none",
    "break_monotone",
    "jump_against",
    "right_jump_at_zero",
    "drop_endpoint",
    "duplicate_lambda",
    "endpoint_order",
    "nonfinite",
    "lambda_outside",
    "tiny_dip",
)


def _mutate(rng: np.random.Generator, knots: list, increasing: bool, kind: str) -> list:
    ks = [list(k) for k in knots]
    sign = 1.0 if increasing else -1.0
    if kind == "break_monotone":
        i = int(rng.integers(1, len(ks)))
        ks[i][1] = ks[i - 1][2] - sign * float(rng.integers(1, 5)) / 4
        if i < len(ks) - 1:
            ks[i][2] = ks[i][1]
    elif kind == "jump_against" and len(ks) > 2:
        i = int(rng.integers(1, len(ks) - 1))
        ks[i][2] = ks[i][1] - sign * 0.25
    elif kind == "right_jump_at_zero":
        ks[0][2] = ks[0][1] + sign * 0.5
    elif kind == "drop_endpoint":
        ks.pop(0 if rng.random() < 0.5 else -1)
    elif kind == "duplicate_lambda" and len(ks) > 2:
        i = int(rng.integers(1, len(ks) - 1))
        ks.insert(i, [ks[i][0], ks[i][1], ks[i][1]])
    elif kind == "nonfinite":
        ks[int(rng.integers(len(ks)))][1] = float("inf")
    elif kind == "lambda_outside":
        ks[-1][0] = 1.25
    elif kind == "tiny_dip":
        i = int(rng.integers(1, len(ks)))
        ks[i][1] = ks[i - 1][2] - sign * 2.0**-30
        if i < len(ks) - 1:
            ks[i][2] = ks[i][1]
    return [tuple(k) for k in ks]


def random_knot_list_pair(rng: np.random.Generator) -> tuple[list, list, str]:
    """A (lower, upper) knot-list pair, valid or broken by one random mutation."""
    lower = random_monotone_knots(rng, True)
    upper = random_monotone_knots(rng, False)
    shift = lower[-1][1] - upper[-1][1] + float(rng.integers(0, 5)) / 4
    upper = [(l, v + shift, r + shift) for l, v, r in upper]
    kind = MUTATIONS[int(rng.integers(len(MUTATIONS)))] if rng.random() < 0.6 else "none"
    if kind == "endpoint_order":
        upper = [(l, v - (upper[-1][1] - lower[-1][1]) - 0.5, r - (upper[-1][1] - lower[-1][1]) - 0.5) for l, v, r in upper]
    elif kind != "none":
        if rng.random() < 0.5:
            lower = _mutate(rng, lower, True, kind)
        else:
            upper = _mutate(rng, upper, False, kind)
    return lower, upper, kind

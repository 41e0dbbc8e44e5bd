import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from levelfuzzy import bivariate as bv
from levelfuzzy import fixtures, fuzzy, fuzzymap
from levelfuzzy import regulated as rg
from levelfuzzy.bivariate import LCCFunction, ProductElement, Verdict
from levelfuzzy.domain import ConvergentSequence, IntervalGrid
from levelfuzzy.errors import DomainMismatch, InvalidEpsilon, NegativeCoefficient, OutOfDomain, ValidationError
from levelfuzzy.fuzzymap import FuzzyMap, constant_map
from strategies import random_fuzzy_map

GRID = IntervalGrid.uniform(0.0, 1.0, 6)


@pytest.fixture(scope="module")
def example():
    return fixtures.example_level_not_dinf()


@st.composite
def maps(draw, domain=GRID):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_fuzzy_map(np.random.default_rng(seed), domain)


class TestFuzzyMap:
    def test_missing_point(self):
        with pytest.raises(ValidationError):
            FuzzyMap(GRID, {0.0: fuzzy.crisp(0.0)})

    def test_call(self):
        f = constant_map(GRID, fuzzy.crisp(3.0))
        assert f(0.2) == fuzzy.crisp(3.0)

    def test_at_uses_resampler(self, example):
        u = example.at(0.3)
        assert rg.evaluate(u.lower, 0.75) == pytest.approx(0.25**0.3, abs=1e-6)


class TestRep:
    def test_example(self, example):
        P = fuzzymap.rep(example)
        assert all(P.second.column(t).is_constant and P.second.column(t).values[0] == 1.0 for t in example.domain.points)
        assert bv.evaluate(P.first, 0.75, 1.0) == 0.25

    def test_constant_crisp(self):
        P = fuzzymap.rep(constant_map(GRID, fuzzy.crisp(3.0)))
        for t in GRID.points:
            assert P.first.column(t) == rg.constant(3.0) and P.second.column(t) == rg.constant(3.0)

    def test_constant_jump(self):
        f = fixtures.example_constant_noncontinuous()
        u0 = f(0.0)
        P = fuzzymap.rep(f)
        assert all(P.first.column(t) == u0.lower and P.second.column(t) == u0.upper for t in f.domain.points)

    def test_embed_zero(self):
        P = fuzzymap.embed(constant_map(GRID, fuzzy.crisp(0.0)))
        z = LCCFunction(GRID, {t: rg.constant(0.0) for t in GRID.points})
        assert bv.product_distance(P, ProductElement(z, z)) == 0.0

    @settings(max_examples=25, deadline=None)
    @given(maps())
    def test_unembed_inverts(self, f):
        assert fuzzymap.unembed(fuzzymap.embed(f)) == f

    @settings(max_examples=25, deadline=None)
    @given(maps(), maps())
    def test_injective(self, f, g):
        d = bv.product_distance(fuzzymap.embed(f), fuzzymap.embed(g))
        assert (d == 0) == (f == g)

    def test_unembed_rejects_off_image(self):
        z = LCCFunction(GRID, {t: rg.constant(1.0) for t in GRID.points})
        with pytest.raises(ValidationError):
            fuzzymap.unembed(ProductElement(z, bv.scale(0.0, z)))


class TestMetric:
    def test_self(self, example):
        assert fuzzymap.metric_D(example, example) == 0.0

    def test_crisp(self):
        assert fuzzymap.metric_D(constant_map(GRID, fuzzy.crisp(0.0)), constant_map(GRID, fuzzy.crisp(2.0))) == 2.0

    def test_example_vs_constant(self, example):
        g = constant_map(example.domain, example(0.0))
        assert fuzzymap.metric_D(example, g) == 1.0
        assert fuzzymap.isometry_residual(example, g) == 0.0

    def test_mismatch(self, example):
        with pytest.raises(DomainMismatch):
            fuzzymap.metric_D(example, constant_map(GRID, fuzzy.crisp(0.0)))

    @settings(max_examples=25, deadline=None)
    @given(maps(), maps(), maps())
    def test_axioms(self, f, g, h):
        D = fuzzymap.metric_D
        assert D(f, g) == D(g, f)
        assert (D(f, g) == 0) == (f == g)
        assert D(f, h) <= D(f, g) + D(g, h) + 1e-12

    @settings(max_examples=25, deadline=None)
    @given(maps(), maps())
    def test_isometry(self, f, g):
        assert fuzzymap.isometry_residual(f, g) <= 1e-12


class TestCone:
    def test_identity(self):
        rng = np.random.default_rng(0)
        f, g = random_fuzzy_map(rng, GRID), random_fuzzy_map(rng, GRID)
        assert fuzzymap.cone_combine(1.0, f, 0.0, g) == f
        assert fuzzymap.cone_combine(0.0, f, 0.0, g) == constant_map(GRID, fuzzy.crisp(0.0))

    def test_negative(self):
        f = constant_map(GRID, fuzzy.crisp(0.0))
        with pytest.raises(NegativeCoefficient):
            fuzzymap.cone_combine(-1.0, f, 1.0, f)

    def test_mismatch(self):
        with pytest.raises(DomainMismatch):
            fuzzymap.cone_combine(1.0, constant_map(GRID, fuzzy.crisp(0.0)), 1.0, constant_map(IntervalGrid.uniform(0, 1, 3), fuzzy.crisp(0.0)))

    def test_fixture_homomorphism(self):
        f = fixtures.example_constant_noncontinuous(GRID)
        g = constant_map(GRID, fuzzy.triangular(-1, 0, 2))
        assert fuzzymap.cone_residual(2.0, f, 3.0, g) <= 1e-12

    @settings(max_examples=25, deadline=None)
    @given(maps(), maps(), st.floats(0, 5), st.floats(0, 5))
    def test_homomorphism(self, f, g, mu, eta):
        assert fuzzymap.cone_residual(mu, f, eta, g) <= 1e-12


class TestClassify:
    def test_example_level_passes(self, example):
        r = fuzzymap.classify_continuity(example, 0.0, "level", tol=1e-3)
        assert r.passed

    def test_example_dinf_fails_with_residual_one(self, example):
        r = fuzzymap.classify_continuity(example, 0.0, "dinf", tol=1e-3)
        assert r.verdict == Verdict.FAIL
        assert r.details["tail_residuals"] == [1.0] * 5
        assert all(row == [1.0] * 5 for row in r.details["refined_residuals"])

    @pytest.mark.parametrize("mode", ["level", "dinf"])
    def test_constant_noncontinuous(self, mode):
        f = fixtures.example_constant_noncontinuous()
        for t in (0.0, 0.5, 1.0):
            assert fuzzymap.classify_continuity(f, t, mode).passed

    def test_isolated_point(self):
        f = constant_map(ConvergentSequence.harmonic(3), fuzzy.crisp(1.0))
        assert fuzzymap.classify_continuity(f, 0.5, "dinf").passed

    def test_grid_limited_without_resampler(self):
        dom = ConvergentSequence.harmonic(10)
        f = FuzzyMap(dom, {t: fuzzy.crisp(float(t)) for t in dom.points})
        r = fuzzymap.classify_continuity(f, 0.0, "dinf", tol=1e-6)
        assert r.verdict == Verdict.GRID_LIMITED

    def test_fail_without_resampler(self):
        dom = ConvergentSequence.harmonic(10)
        f = FuzzyMap(dom, {t: fuzzy.crisp(0.0 if t == 0.0 else 1.0) for t in dom.points})
        r = fuzzymap.classify_continuity(f, 0.0, "level")
        assert r.verdict == Verdict.FAIL and r.witness[0].residual == 1.0

    def test_grid_resampling(self):
        f = FuzzyMap(GRID, {t: fuzzy.crisp(t) for t in GRID.points}, resampler=lambda t: fuzzy.crisp(float(t)))
        r = fuzzymap.classify_continuity(f, 0.4, "dinf", tol=1e-3)
        assert r.passed and "resampled" in r.resolution

    def test_errors(self, example):
        with pytest.raises(OutOfDomain):
            fuzzymap.classify_continuity(example, 0.3)
        with pytest.raises(InvalidEpsilon):
            fuzzymap.classify_continuity(example, 0.0, tol=0.0)
        with pytest.raises(ValueError):
            fuzzymap.classify_continuity(example, 0.0, mode="weak")

    @settings(max_examples=30, deadline=None)
    @given(maps(ConvergentSequence.harmonic(6)), st.sampled_from([1e-3, 0.5, 2.0, 5.0]))
    def test_hierarchy(self, f, tol):
        if fuzzymap.classify_continuity(f, 0.0, "dinf", tol=tol).passed:
            assert fuzzymap.classify_continuity(f, 0.0, "level", tol=tol).passed


class TestRepresentationStructure:
    @settings(max_examples=25, deadline=None)
    @given(maps())
    def test_rep_properties(self, f):
        assert fuzzymap.check_rep_properties(fuzzymap.rep(f)).passed

    def test_example(self, example):
        r = fuzzymap.check_rep_properties(fuzzymap.rep(example))
        assert r.passed
        assert r.details["tail_sup_distances"] == [1.0] * 5

    def test_modulus(self):
        f = FuzzyMap(GRID, {t: fuzzy.crisp(t) for t in GRID.points})
        assert fuzzymap.check_rep_properties(fuzzymap.rep(f), modulus=0.25).passed
        assert not fuzzymap.check_rep_properties(fuzzymap.rep(f), modulus=0.1).passed

    def test_image_conditions_reject(self):
        one = LCCFunction(GRID, {t: rg.constant(1.0) for t in GRID.points})
        zero = LCCFunction(GRID, {t: rg.constant(0.0) for t in GRID.points})
        r = fuzzymap.check_image_conditions(ProductElement(one, zero))
        assert r.verdict == Verdict.FAIL and r.witness[0].kind == "endpoint_order"
        up = LCCFunction(GRID, {t: rg.line(0.0, 1.0) for t in GRID.points})
        r = fuzzymap.check_image_conditions(ProductElement(zero, bv.scale(1.0, up)))
        assert r.verdict == Verdict.FAIL


class TestSerialisation:
    def test_round_trip(self):
        f = random_fuzzy_map(np.random.default_rng(3), GRID)
        assert fuzzymap.from_json(json.loads(json.dumps(f.to_json()))) == f

    def test_fixture_resampler_restored(self):
        f = fixtures.example_level_not_dinf(ConvergentSequence.harmonic(5))
        g = fuzzymap.from_json(json.loads(json.dumps(f.to_json())))
        assert g.resampler is not None and g.hot_knots == (0.5,)
        assert fuzzymap.classify_continuity(g, 0.0, "level", tol=1e-3).passed

    def test_csv(self):
        f = constant_map(IntervalGrid(0.0, 1.0, (0.0, 1.0)), fuzzy.triangular(0, 1, 2))
        lines = fuzzymap.to_csv(f, [0.5]).splitlines()
        assert lines == ["t,lambda,f1,f2", "0.0,0.5,0.5,1.5", "1.0,0.5,0.5,1.5"]

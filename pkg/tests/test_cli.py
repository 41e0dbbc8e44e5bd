import json

import numpy as np
import pytest

from levelfuzzy import cli, fixtures, fuzzy, fuzzymap, topology
from levelfuzzy import io as lio
from levelfuzzy import regulated as rg
from levelfuzzy.domain import ConvergentSequence, IntervalGrid
from strategies import random_fuzzy, random_fuzzy_map


def write(path, obj):
    path.write_text(json.dumps(obj.to_json() if hasattr(obj, "to_json") else obj))
    return str(path)


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    d = tmp_path_factory.mktemp("corpus")
    assert cli.main(["corpus", "example_level_not_dinf", "--dir", str(d), "--out", str(d / "log.json")]) == 0
    return d


class TestValidate:
    def test_valid(self, tmp_path, capsys):
        code, out, _ = run(["validate", write(tmp_path / "u.json", fuzzy.triangular(0, 1, 2))], capsys)
        assert code == 0 and json.loads(out) == {"kind": "fuzzy_number", "valid": True, "violations": []}

    def test_endpoint_order(self, tmp_path, capsys):
        doc = {"lower": {"knots": [{"lambda": 0, "value": 3}, {"lambda": 1, "value": 3}]}, "upper": {"knots": [{"lambda": 0, "value": 1}, {"lambda": 1, "value": 1}]}}
        code, out, _ = run(["validate", write(tmp_path / "bad.json", doc)], capsys)
        res = json.loads(out)
        assert code == 1 and not res["valid"]
        assert res["violations"][0]["code"] == "EndpointOrderViolation"

    def test_nonmonotone_plj(self, tmp_path, capsys):
        doc = {"direction": "nondecreasing", "knots": [{"lambda": 0, "value": 0}, {"lambda": 0.5, "value": 1}, {"lambda": 1, "value": 0}]}
        code, out, _ = run(["validate", write(tmp_path / "f.json", doc)], capsys)
        assert code == 1 and "NonMonotone" in [v["code"] for v in json.loads(out)["violations"]]

    def test_malformed_json(self, tmp_path, capsys):
        p = tmp_path / "x.json"
        p.write_text("{not json")
        code, _, err = run(["validate", p], capsys)
        assert code == 2 and json.loads(err)["error"] == "JSONDecodeError"

    def test_unknown_shape(self, tmp_path, capsys):
        code, _, err = run(["validate", write(tmp_path / "x.json", {"foo": 1})], capsys)
        assert code == 2 and json.loads(err)["error"] == "SchemaError"

    def test_missing_file(self, tmp_path, capsys):
        code, _, _ = run(["validate", tmp_path / "nope.json"], capsys)
        assert code == 2


class TestDist:
    def test_crisp(self, tmp_path, capsys):
        a = write(tmp_path / "a.json", fuzzy.crisp(0.0))
        b = write(tmp_path / "b.json", fuzzy.crisp(2.0))
        code, out, _ = run(["dist", a, b, "--grid", 3], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["d_infinity"] == 2.0
        assert doc["hausdorff_curve"] == [[0.0, 2.0], [0.5, 2.0], [1.0, 2.0]]

    def test_golden(self, tmp_path, capsys):
        rng = np.random.default_rng(11)
        u, v = random_fuzzy(rng), random_fuzzy(rng)
        code, out, _ = run(["dist", write(tmp_path / "u.json", u), write(tmp_path / "v.json", v)], capsys)
        assert code == 0 and out == lio.dumps(cli.dist_document(u, v, 101))

    def test_invalid_input(self, tmp_path, capsys):
        code, _, err = run(["dist", write(tmp_path / "a.json", {"knots": []}), write(tmp_path / "b.json", fuzzy.crisp(0.0))], capsys)
        assert code == 2

    def test_grid_size(self, tmp_path, capsys):
        a = write(tmp_path / "a.json", fuzzy.crisp(0.0))
        assert run(["dist", a, a, "--grid", 1], capsys)[0] == 2


class TestConverge:
    def test_example(self, corpus, capsys):
        code, out, _ = run(
            ["converge", corpus / "example_level_not_dinf.sequence.json", corpus / "example_level_not_dinf.target.json", "--tol", "1e-3"], capsys
        )
        doc = json.loads(out)
        assert code == 1
        assert doc["level"]["converges"] is True and doc["dinf"]["converges"] is False
        assert doc["dinf"]["residuals"] == [1.0] * 5

    def test_golden(self, corpus, capsys):
        seq = lio.load(corpus / "example_level_not_dinf.sequence.json")
        target = lio.load(corpus / "example_level_not_dinf.target.json")
        grid = topology.LambdaSet.default(target, *seq, size=101)
        direct = topology.compare_convergence(seq, target, grid, tol=1e-3, tail=5)
        _, out, _ = run(
            ["converge", corpus / "example_level_not_dinf.sequence.json", corpus / "example_level_not_dinf.target.json", "--tol", "1e-3"], capsys
        )
        assert out == lio.dumps({k: r.to_json() for k, r in direct.items()})

    def test_env_tolerance(self, corpus, capsys, monkeypatch):
        args = ["converge", corpus / "example_level_not_dinf.sequence.json", corpus / "example_level_not_dinf.target.json"]
        monkeypatch.setenv(cli.TOL_ENV, "2.0")
        code, out, _ = run(args, capsys)
        assert code == 0 and json.loads(out)["dinf"]["tol"] == 2.0
        monkeypatch.setenv(cli.TOL_ENV, "-1")
        assert run(args, capsys)[0] == 2

    def test_negative_tol_flag(self, corpus, capsys):
        code, _, _ = run(["converge", corpus / "example_level_not_dinf.sequence.json", corpus / "example_level_not_dinf.target.json", "--tol", "-1"], capsys)
        assert code == 2


class TestClassify:
    def test_dinf_fails(self, corpus, capsys):
        code, out, _ = run(["classify", corpus / "example_level_not_dinf.json", "--t0", "0", "--mode", "dinf", "--tol", "1e-3"], capsys)
        doc = json.loads(out)
        assert code == 1 and doc["verdict"] == "fail"
        assert [w["residual"] for w in doc["witness"]] == [1.0] * 5

    def test_level_passes(self, corpus, capsys):
        code, out, _ = run(["classify", corpus / "example_level_not_dinf.json", "--t0", "0.0", "--tol", "1e-3"], capsys)
        assert code == 0 and json.loads(out)["verdict"] == "pass"

    def test_golden(self, corpus, capsys):
        f = lio.load(corpus / "example_level_not_dinf.json")
        direct = fuzzymap.classify_continuity(f, 0.0, "dinf", tol=1e-3)
        _, out, _ = run(["classify", corpus / "example_level_not_dinf.json", "--t0", "0", "--mode", "dinf", "--tol", "1e-3"], capsys)
        assert out == lio.dumps(direct.to_json())

    def test_unknown_point(self, corpus, capsys):
        assert run(["classify", corpus / "example_level_not_dinf.json", "--t0", "0.3"], capsys)[0] == 2

    def test_wrong_document(self, corpus, capsys):
        assert run(["classify", corpus / "example_level_not_dinf.target.json", "--t0", "0"], capsys)[0] == 2


class TestEmbed:
    def test_isometry(self, tmp_path, capsys):
        rng = np.random.default_rng(4)
        dom = IntervalGrid.uniform(0.0, 1.0, 5)
        f, g = random_fuzzy_map(rng, dom), random_fuzzy_map(rng, dom)
        code, out, _ = run(["embed", write(tmp_path / "f.json", f), "--against", write(tmp_path / "g.json", g)], capsys)
        doc = json.loads(out)
        assert code == 0
        assert doc["metric_D"] == fuzzymap.metric_D(f, g) and doc["isometry_residual"] <= 1e-12
        assert doc["embedding"] == fuzzymap.embed(f).to_json()


class TestCorpus:
    def test_list(self, capsys):
        code, out, _ = run(["corpus", "list"], capsys)
        assert code == 0 and json.loads(out)["fixtures"] == sorted(fixtures.FIXTURES)

    @pytest.mark.parametrize("name", sorted(fixtures.FIXTURES))
    def test_every_fixture_validates(self, name, tmp_path, capsys):
        code, out, _ = run(["corpus", name, "--dir", tmp_path, "--param", "N=4"] if "alexandroff" in name else ["corpus", name, "--dir", tmp_path], capsys)
        assert code == 0
        for path in json.loads(out)["written"]:
            code, res, _ = run(["validate", path], capsys)
            assert code == 0, res

    def test_files_round_trip(self, corpus):
        f = lio.load(corpus / "example_level_not_dinf.json")
        assert f == fixtures.example_level_not_dinf()

    def test_deterministic(self, tmp_path, capsys):
        for d in ("a", "b"):
            run(["corpus", "example_constant_noncontinuous", "--param", "grid=5", "--dir", tmp_path / d], capsys)
        a = (tmp_path / "a" / "example_constant_noncontinuous.json").read_bytes()
        assert a == (tmp_path / "b" / "example_constant_noncontinuous.json").read_bytes()

    def test_bad_param(self, tmp_path, capsys):
        assert run(["corpus", "example_level_not_dinf", "--param", "n", "--dir", tmp_path], capsys)[0] == 2
        assert run(["corpus", "nope", "--dir", tmp_path], capsys)[0] == 2


class TestExport:
    def test_fuzzy_number_csv(self, tmp_path, capsys):
        code, out, _ = run(["export", write(tmp_path / "u.json", fuzzy.triangular(0, 1, 2)), "--grid", 3], capsys)
        assert code == 0 and out.splitlines() == ["lambda,lower,upper", "0.0,0.0,2.0", "0.5,0.5,1.5", "1.0,1.0,1.0"]

    def test_map_csv(self, tmp_path, capsys):
        f = fuzzymap.constant_map(ConvergentSequence.harmonic(2), fuzzy.crisp(1.0))
        code, out, _ = run(["export", write(tmp_path / "f.json", f), "--grid", 2], capsys)
        assert out.splitlines()[0] == "t,lambda,f1,f2" and len(out.splitlines()) == 7

    def test_floats_round_trip_bit_identical(self, tmp_path, capsys):
        u = random_fuzzy(np.random.default_rng(2), scale=1 / 3)
        path = write(tmp_path / "u.json", u)
        _, out, _ = run(["export", path, "--format", "json"], capsys)
        assert fuzzy.from_json(json.loads(out)) == u
        _, csv_text, _ = run(["export", path], capsys)
        for row in csv_text.splitlines()[1:]:
            lam, lo, hi = (float(x) for x in row.split(","))
            assert lo == rg.evaluate(u.lower, lam) and hi == rg.evaluate(u.upper, lam)

    def test_golden(self, tmp_path, capsys):
        f = random_fuzzy_map(np.random.default_rng(9), IntervalGrid.uniform(0.0, 1.0, 3))
        _, out, _ = run(["export", write(tmp_path / "f.json", f)], capsys)
        assert out == cli.export_text(f, "csv", None)


def test_help_exits_zero(capsys):
    assert run(["--help"], capsys)[0] == 0


def test_missing_subcommand(capsys):
    assert run([], capsys)[0] == 2

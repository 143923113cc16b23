import csv
import io
import json

import pytest

from clustcompare.cli import main
from clustcompare.harness import derive_seed, run_experiment
from clustcompare.io import read_clusters


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCompare:
    @pytest.mark.parametrize(
        "a, b, expected",
        [
            ("0 1 2\n", "0\n0 1 2\n", 11 / 12),
            ("0\n0 1 2\n", "0\n1 2\n", 55 / 72),
            ("0 1 2\n", "0\n1 2\n", 11 / 18),
        ],
    )
    def test_counterexample_files(self, files, capsys, a, b, expected):
        fa, fb = files("a.clusters", "#n=3\n" + a), files("b.clusters", "#n=3\n" + b)
        code, out, _ = run(capsys, "compare", fa, fb, "--measures", "fstar_wo,fstar_w")
        assert code == 0
        doc = json.loads(out)
        assert doc["measures"]["fstar_wo"] == pytest.approx(expected, abs=1e-12)
        assert doc["measures"]["fstar_w"] == pytest.approx(expected, abs=1e-12)

    def test_identical_files_all_measures(self, files, capsys):
        f = files("a.clusters", "#n=6\n0 1 2\n2 3\n4 5\n")
        code, out, _ = run(capsys, "compare", f, f, "--measures", ",".join(
            ["fstar_wo", "fstar_w", "omega", "onmi_lfk", "onmi_mgh"]))
        assert code == 0
        assert set(json.loads(out)["measures"].values()) == {1.0}

    def test_swapped_arguments(self, files, capsys):
        fa = files("a.clusters", "#n=6\n0 1 2\n2 3\n")
        fb = files("b.clusters", "#n=6\n0 1\n2 3 4\n")
        measures = "fstar_wo,fstar_w,omega,onmi_lfk,onmi_mgh"
        _, ab, _ = run(capsys, "compare", fa, fb, "--measures", measures)
        _, ba, _ = run(capsys, "compare", fb, fa, "--measures", measures)
        assert json.loads(ab)["measures"] == json.loads(ba)["measures"]

    def test_duplicate_cluster_exit_2(self, files, capsys):
        fa = files("a.clusters", "#n=3\n0 1\n2\n1 0\n")
        fb = files("b.clusters", "#n=3\n0 1\n")
        code, _, err = run(capsys, "compare", fa, fb)
        assert code == 2
        assert "DuplicateCluster at line 4" in err and "a.clusters" in err

    def test_universe_mismatch_exit_3(self, files, capsys):
        fa = files("a.clusters", "#n=3\n0 1\n")
        fb = files("b.clusters", "#n=4\n0 1\n")
        code, _, err = run(capsys, "compare", fa, fb)
        assert code == 3 and "UniverseMismatch" in err

    def test_n_override(self, files, capsys):
        fa = files("a.clusters", "0 1\n")
        fb = files("b.clusters", "0 1 2\n")
        code, out, _ = run(capsys, "compare", fa, fb, "--n", "4")
        assert code == 0
        assert json.loads(out)["measures"]["fstar_wo"] == pytest.approx(29 / 48, abs=1e-12)

    def test_missing_universe_exit_2(self, files, capsys):
        code, _, err = run(capsys, "compare", files("a", "0 1\n"), files("b", "0\n"))
        assert code == 2 and "universe size not declared" in err

    def test_per_cluster_json(self, files, capsys):
        fa = files("a.clusters", "#n=3\n0 1 2\n")
        fb = files("b.clusters", "#n=3\n0\n0 1 2\n")
        _, out, _ = run(capsys, "compare", fa, fb, "--per-cluster")
        doc = json.loads(out)
        assert doc["per_cluster"]["a_to_b"] == [
            {"cluster": 0, "size": 3, "match": 1, "fstar": 1.0, "weight": 1.0}
        ]
        assert [r["match"] for r in doc["per_cluster"]["b_to_a"]] == [0, 0]
        assert doc["outlier_jaccard"] is None

    def test_csv_output(self, files, capsys):
        fa = files("a.clusters", "#n=4\n0 1\n")
        fb = files("b.clusters", "#n=4\n0 1 2\n")
        _, out, _ = run(capsys, "compare", fa, fb, "--format", "csv", "--per-cluster")
        head, rows = out.split("\n\n")
        assert head.splitlines() == ["measure,value", "fstar_wo,0.604166666667"]
        table = list(csv.DictReader(io.StringIO(rows)))
        assert [r["direction"] for r in table] == ["a_to_b", "b_to_a"]

    def test_baseline_outlier_warning(self, files, capsys):
        fa = files("a.clusters", "#n=4\n0 1\n")
        fb = files("b.clusters", "#n=4\n0 1 2\n")
        code, _, err = run(capsys, "compare", fa, fb, "--measures", "omega")
        assert code == 0 and "outliers" in err

    def test_unknown_measure(self, files, capsys):
        f = files("a.clusters", "#n=2\n0\n")
        with pytest.raises(SystemExit) as exc:
            main(["compare", f, f, "--measures", "bogus"])
        assert exc.value.code == 2


class TestExperiment:
    def test_byte_identical_reruns(self, tmp_path, capsys):
        argv = ["experiment", "shuffle", "--grid", "0,0.5,1", "--reps", "3", "--seed", "9"]
        assert main(argv + ["--out", str(tmp_path / "r1.csv")]) == 0
        assert main(argv + ["--out", str(tmp_path / "r2.csv")]) == 0
        for name in ("r1.csv", "r1.agg.csv"):
            other = name.replace("r1", "r2")
            assert (tmp_path / name).read_bytes() == (tmp_path / other).read_bytes()

    def test_schema_and_row_count(self, tmp_path, capsys):
        out = tmp_path / "k.csv"
        main(["experiment", "kclusters", "--grid", "8,1024", "--reps", "2",
              "--measures", "fstar_wo,fstar_w", "--out", str(out)])
        rows = list(csv.DictReader(out.open()))
        assert list(rows[0]) == ["scenario", "param", "rep", "seed", "measure", "value"]
        assert len(rows) == 2 * 2 * 2
        assert {r["value"] for r in rows if r["param"] == "1024"} == {"0.0078125"}
        agg = list(csv.DictReader((tmp_path / "k.agg.csv").open()))
        assert list(agg[0]) == ["scenario", "param", "measure", "mean", "std", "reps"]
        assert len(agg) == 4 and {r["reps"] for r in agg} == {"2"}

    def test_bad_grid_exit_2(self, tmp_path, capsys):
        code, _, err = run(capsys, "experiment", "kclusters", "--grid", "3", "--out", str(tmp_path / "x.csv"))
        assert code == 2 and "does not divide" in err

    def test_seed_column_reproduces_row(self, tmp_path):
        res = run_experiment("shuffle", grid=[0.3, 0.6], reps=2, seed=5)
        gi, rep, seed, _, _ = res.rows[3]
        assert seed == derive_seed(5, gi, rep)

    def test_partial_grid_reproduces_subset(self):
        full = run_experiment("kclusters", grid=[8, 16, 32], reps=2, seed=4)
        part = run_experiment("kclusters", grid=[8, 16], reps=2, seed=4)
        assert part.rows == full.rows[: len(part.rows)]

    def test_worker_pool_same_rows(self):
        serial = run_experiment("outliers", grid=[0.3, 0.5], reps=3, seed=2)
        pooled = run_experiment("outliers", grid=[0.3, 0.5], reps=3, seed=2, jobs=2)
        assert serial.raw_csv() == pooled.raw_csv()


class TestGenerate:
    def test_writes_pair(self, tmp_path, capsys):
        prefix = tmp_path / "sh"
        assert main(["generate", "shuffle", "--fraction", "0", "--seed", "1", "--out", str(prefix)]) == 0
        a = read_clusters(f"{prefix}.a.clusters")
        b = read_clusters(f"{prefix}.b.clusters")
        assert a == b and a.n == 1024

    def test_outlier_pair(self, tmp_path, capsys):
        prefix = tmp_path / "o"
        main(["generate", "outliers", "--eta", "0.3", "--seed", "1", "--sizes", "16x8", "--out", str(prefix)])
        b = read_clusters(f"{prefix}.b.clusters")
        assert b.n == 128 and len(b.outliers()) > 0


class TestInduce:
    def test_path_graph(self, files, capsys, tmp_path):
        g = files("path.edges", "#n=4\n0 1\n1 2\n2 3\n")
        c = files("v.clusters", "#n=4\n0 1\n2 3\n")
        out = tmp_path / "e.clusters"
        code, _, err = run(capsys, "induce", g, c, "--out", str(out))
        assert code == 0
        e = read_clusters(out)
        assert e.to_sets() == [{0}, {2}]
        assert "1 edge outliers" in err
        assert (tmp_path / "e.clusters.map.csv").read_text() == "edge_id,u,v\n0,0,1\n1,1,2\n2,2,3\n"

    def test_triangle_closure(self, files, capsys, tmp_path):
        g = files("tri.edges", "#n=3\n0 1\n1 2\n0 2\n")
        e = files("e.clusters", "#n=3\n0 2\n")  # edges (0,1) and (1,2)
        out = tmp_path / "closed.clusters"
        code, _, _ = run(capsys, "induce", g, e, "--from-edges", "--closure", "--out", str(out))
        assert code == 0
        assert read_clusters(out).to_sets() == [{0, 1, 2}]

    def test_wrong_vertex_count(self, files, capsys, tmp_path):
        g = files("path.edges", "#n=4\n0 1\n1 2\n2 3\n")
        c = files("v.clusters", "#n=5\n0 1\n")
        code, _, _ = run(capsys, "induce", g, c, "--out", str(tmp_path / "x"))
        assert code == 3

    def test_self_loop_rejected(self, files, capsys, tmp_path):
        g = files("bad.edges", "#n=3\n0 1\n2 2\n")
        c = files("v.clusters", "#n=3\n0 1\n")
        code, _, err = run(capsys, "induce", g, c, "--out", str(tmp_path / "x"))
        assert code == 2 and "line 3" in err

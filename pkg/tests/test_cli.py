import json

import numpy as np
import pytest

from sigpath.cli import main


def write_ndjson(path, records):
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n")


@pytest.fixture
def simple_dataset(tmp_path):
    rng = np.random.default_rng(7)
    records = []
    for i in range(6):
        values = rng.integers(-3, 4, size=(2, 5)).tolist()
        records.append({"id": f"s{i}", "label": i % 2, "channels": values})
    path = tmp_path / "data.ndjson"
    write_ndjson(path, records)
    return path


def read_header(path):
    return path.read_text().splitlines()[0].split(",")


class TestFeaturize:
    def test_column_count_linear(self, simple_dataset, tmp_path, capsys):
        out = tmp_path / "f.csv"
        rc = main(["featurize", str(simple_dataset), "-o", str(out),
                   "--embedding", "linear", "--order", "2"])
        assert rc == 0
        header = read_header(out)
        assert header == ["id", "label"] + [f"f_{i}" for i in range(6)]
        assert len(out.read_text().splitlines()) == 7
        assert "6 rows x 6 features" in capsys.readouterr().out

    def test_dyadic_order_multiplies_columns(self, simple_dataset, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["featurize", str(simple_dataset), "-o", str(out),
                     "--order", "2", "--dyadic-order", "1"]) == 0
        assert len(read_header(out)) == 2 + 12

    def test_include_constant(self, simple_dataset, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["featurize", str(simple_dataset), "-o", str(out),
                     "--order", "2", "--include-constant"]) == 0
        assert len(read_header(out)) == 2 + 7

    def test_lag_flag_sets_leadlag(self, simple_dataset, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["featurize", str(simple_dataset), "-o", str(out),
                     "--embedding", "leadlag", "--lag", "2", "--order", "1"]) == 0
        # embedded dim 2*(2+1)+1 = 7
        assert len(read_header(out)) == 2 + 7

    def test_single_point_stream_gives_zero_row(self, tmp_path):
        data = tmp_path / "one.ndjson"
        write_ndjson(data, [{"id": "a", "channels": [[5.0], [2.0]]}])
        out = tmp_path / "f.csv"
        assert main(["featurize", str(data), "-o", str(out), "--order", "2"]) == 0
        row = out.read_text().splitlines()[1].split(",")
        assert all(float(v) == 0.0 for v in row[2:])

    def test_stroke_embedding_needs_strokes(self, simple_dataset, tmp_path, capsys):
        out = tmp_path / "f.csv"
        rc = main(["featurize", str(simple_dataset), "-o", str(out),
                   "--embedding", "stroke2"])
        assert rc == 2
        err = capsys.readouterr().err
        assert err.count("\n") == 1
        assert "s0" in err and "stroke" in err

    def test_stroke_embedding_with_strokes(self, tmp_path):
        data = tmp_path / "ink.ndjson"
        write_ndjson(data, [
            {"id": "a", "label": 0, "channels": [[0, 1, 2, 3]], "strokes": [1, 1, 2, 2]},
            {"id": "b", "label": 1, "channels": [[3, 2, 1, 0]], "strokes": [1, 2, 2, 3]},
        ])
        out = tmp_path / "f.csv"
        assert main(["featurize", str(data), "-o", str(out),
                     "--embedding", "stroke3", "--order", "2"]) == 0
        assert len(read_header(out)) == 2 + 6  # embedded dim 2

    def test_malformed_json_reports_line(self, tmp_path, capsys):
        data = tmp_path / "bad.ndjson"
        data.write_text('{"id": "a", "channels": [[1, 2]]}\n{oops\n')
        assert main(["featurize", str(data), "-o", str(tmp_path / "f.csv")]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_missing_channels_reports_line(self, tmp_path, capsys):
        data = tmp_path / "bad.ndjson"
        write_ndjson(data, [{"id": "a", "label": 1}])
        assert main(["featurize", str(data), "-o", str(tmp_path / "f.csv")]) == 2
        assert "line 1" in capsys.readouterr().err

    def test_ragged_channels_rejected(self, tmp_path, capsys):
        data = tmp_path / "bad.ndjson"
        write_ndjson(data, [{"id": "a", "channels": [[1, 2], [1, 2, 3]]}])
        assert main(["featurize", str(data), "-o", str(tmp_path / "f.csv")]) == 2
        assert "equal-length" in capsys.readouterr().err

    def test_inconsistent_channel_count_rejected(self, tmp_path, capsys):
        data = tmp_path / "bad.ndjson"
        write_ndjson(data, [
            {"id": "a", "channels": [[1, 2]]},
            {"id": "b", "channels": [[1, 2], [3, 4]]},
        ])
        assert main(["featurize", str(data), "-o", str(tmp_path / "f.csv")]) == 2
        assert "b" in capsys.readouterr().err

    def test_feature_budget(self, simple_dataset, tmp_path, capsys):
        rc = main(["featurize", str(simple_dataset), "-o", str(tmp_path / "f.csv"),
                   "--order", "6", "--cap", "100"])
        assert rc == 2
        assert "feature budget exceeded" in capsys.readouterr().err

    def test_missing_input_file(self, tmp_path, capsys):
        assert main(["featurize", str(tmp_path / "nope.ndjson"),
                     "-o", str(tmp_path / "f.csv")]) == 2
        assert capsys.readouterr().err.startswith("sigpath: ")

    def test_worker_count_does_not_change_bytes(self, simple_dataset, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["featurize", str(simple_dataset), "--order", "3",
                "--embedding", "leadlag:1", "--dyadic-order", "1"]
        assert main(args + ["-o", str(a), "--jobs", "1"]) == 0
        assert main(args + ["-o", str(b), "--jobs", "3"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_jobs_env_fallback(self, simple_dataset, tmp_path, monkeypatch):
        out = tmp_path / "f.csv"
        monkeypatch.setenv("SIGPATH_JOBS", "2")
        assert main(["featurize", str(simple_dataset), "-o", str(out)]) == 0
        monkeypatch.setenv("SIGPATH_JOBS", "two")
        assert main(["featurize", str(simple_dataset), "-o", str(out)]) == 2


class TestExperiment:
    QUICK = ["--length", "20", "--n", "20", "--orders", "1,2", "--replicates", "2"]

    def test_embeddings_run(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        rc = main(["experiment", "ar-embeddings", "-o", str(out),
                   "--embeddings", "linear,time", "--seed", "4"] + self.QUICK)
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("experiment,embedding,lag,order,n,replicate")
        assert len(lines) == 1 + 8
        assert "best: embedding=" in capsys.readouterr().out

    def test_same_seed_same_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["experiment", "ar-lag-sweep", "--lags", "1,2", "--seed", "4"] + self.QUICK
        assert main(args + ["-o", str(a)]) == 0
        assert main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_truncation_summary(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        rc = main(["experiment", "ar-truncation", "-o", str(out),
                   "--sizes", "20,30", "--seed", "1"] + self.QUICK)
        assert rc == 0
        assert "validation-selected orders" in capsys.readouterr().out

    def test_phi_p_mismatch(self, tmp_path, capsys):
        rc = main(["experiment", "ar-embeddings", "-o", str(tmp_path / "r.csv"),
                   "--phi", "0.1,0.2", "--p", "3"])
        assert rc == 2
        assert "phi has 2 coefficients but p=3" in capsys.readouterr().err

    def test_bad_orders_list(self, tmp_path, capsys):
        rc = main(["experiment", "ar-embeddings", "-o", str(tmp_path / "r.csv"),
                   "--orders", "1,zwei"])
        assert rc == 2
        assert "integer list" in capsys.readouterr().err

    def test_unknown_experiment_name(self, tmp_path, capsys):
        rc = main(["experiment", "ar-magic", "-o", str(tmp_path / "r.csv")])
        assert rc == 2
        assert capsys.readouterr().err.count("\n") == 1


def write_feature_csv(path, X, labels=None):
    import csv

    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["id", "label"] + [f"f_{i}" for i in range(X.shape[1])])
        for i, row in enumerate(X):
            label = "" if labels is None else labels[i]
            writer.writerow([f"r{i}", label] + [repr(float(v)) for v in row])


class TestFitPredict:
    def test_ridge_round_trip(self, tmp_path, capsys):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(20, 3))
        y = X @ [2.0, -1.0, 0.5] + 3.0
        train = tmp_path / "train.csv"
        write_feature_csv(train, X, [repr(float(v)) for v in y])
        model = tmp_path / "model.txt"
        assert main(["fit", str(train), "--learner", "ridge",
                     "--model", str(model), "--lambda", "0"]) == 0
        out = tmp_path / "pred.csv"
        assert main(["predict", str(train), "--model", str(model), "-o", str(out)]) == 0
        captured = capsys.readouterr().out
        assert "l2_error=" in captured
        preds = [float(l.split(",")[1]) for l in out.read_text().splitlines()[1:]]
        assert np.abs(np.array(preds) - y).max() < 1e-8

    def test_knn_memorizes_training_set(self, tmp_path, capsys):
        rng = np.random.default_rng(10)
        X = rng.integers(-4, 5, size=(12, 2)).astype(float)
        labels = rng.integers(0, 3, size=12)
        train = tmp_path / "train.csv"
        write_feature_csv(train, X, [str(v) for v in labels])
        model = tmp_path / "model.txt"
        assert main(["fit", str(train), "--learner", "knn",
                     "--model", str(model), "--k", "1"]) == 0
        out = tmp_path / "pred.csv"
        assert main(["predict", str(train), "--model", str(model), "-o", str(out)]) == 0
        assert "accuracy=1" in capsys.readouterr().out
        got = [int(l.split(",")[1]) for l in out.read_text().splitlines()[1:]]
        assert got == list(labels)

    def test_softmax_separable(self, tmp_path, capsys):
        X = np.array([[-2.0], [-1.5], [-1.0], [1.0], [1.5], [2.0]])
        train = tmp_path / "train.csv"
        write_feature_csv(train, X, ["0", "0", "0", "1", "1", "1"])
        model = tmp_path / "model.txt"
        assert main(["fit", str(train), "--learner", "softmax",
                     "--model", str(model), "--epochs", "150"]) == 0
        out = tmp_path / "pred.csv"
        assert main(["predict", str(train), "--model", str(model), "-o", str(out)]) == 0
        assert "accuracy=1" in capsys.readouterr().out

    def test_predict_feature_count_mismatch(self, tmp_path, capsys):
        rng = np.random.default_rng(11)
        train = tmp_path / "train.csv"
        write_feature_csv(train, rng.normal(size=(8, 6)), ["1.0"] * 8)
        model = tmp_path / "model.txt"
        assert main(["fit", str(train), "--learner", "ridge", "--model", str(model)]) == 0
        narrow = tmp_path / "narrow.csv"
        write_feature_csv(narrow, rng.normal(size=(3, 4)))
        assert main(["predict", str(narrow), "--model", str(model),
                     "-o", str(tmp_path / "p.csv")]) == 2
        assert "model expects 6, data has 4" in capsys.readouterr().err

    def test_predict_without_labels(self, tmp_path, capsys):
        rng = np.random.default_rng(12)
        train = tmp_path / "train.csv"
        write_feature_csv(train, rng.normal(size=(8, 2)), ["0.5"] * 8)
        model = tmp_path / "model.txt"
        assert main(["fit", str(train), "--learner", "ridge", "--model", str(model)]) == 0
        query = tmp_path / "query.csv"
        write_feature_csv(query, rng.normal(size=(4, 2)))
        assert main(["predict", str(query), "--model", str(model),
                     "-o", str(tmp_path / "p.csv")]) == 0
        assert "wrote 4 predictions" in capsys.readouterr().out

    def test_fit_needs_labels(self, tmp_path, capsys):
        train = tmp_path / "train.csv"
        write_feature_csv(train, np.eye(3))
        assert main(["fit", str(train), "--learner", "ridge",
                     "--model", str(tmp_path / "m.txt")]) == 2
        assert "label" in capsys.readouterr().err

    def test_fit_knn_bad_k(self, tmp_path, capsys):
        train = tmp_path / "train.csv"
        write_feature_csv(train, np.eye(3), ["0", "1", "0"])
        assert main(["fit", str(train), "--learner", "knn",
                     "--model", str(tmp_path / "m.txt"), "--k", "9"]) == 2
        assert "k must be in 1..3" in capsys.readouterr().err

    def test_classifier_needs_integer_labels(self, tmp_path, capsys):
        train = tmp_path / "train.csv"
        write_feature_csv(train, np.eye(3), ["a", "b", "a"])
        assert main(["fit", str(train), "--learner", "softmax",
                     "--model", str(tmp_path / "m.txt")]) == 2
        assert "integer labels" in capsys.readouterr().err

    def test_predict_on_non_model_file(self, tmp_path, capsys):
        bogus = tmp_path / "m.txt"
        bogus.write_text("learner=ridge\n")
        query = tmp_path / "q.csv"
        write_feature_csv(query, np.eye(2))
        assert main(["predict", str(query), "--model", str(bogus),
                     "-o", str(tmp_path / "p.csv")]) == 2
        assert "not a model file" in capsys.readouterr().err

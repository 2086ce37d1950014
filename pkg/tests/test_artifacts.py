"""Model artifact container: exact round trips, versioning, corruption."""

import pytest

from triagekit.artifacts import (ArtifactError, dump_model, load_model,
                                 read_model, save_model)
from triagekit.learners import ClassifierSpec, predict, train
from triagekit.vectorize import SparseVector

from helpers import dataset_with_counts

KINDS = ["zero_r", "naive_bayes_multinomial", "knn", "logistic_regression",
         "sgd_text", "random_forest"]


@pytest.fixture(scope="module")
def data():
    return dataset_with_counts({"A": 14, "B": 10}, n_features=5)


def probe_vectors(data, n=50):
    probes = list(data.vectors)[:20] + [SparseVector(())]
    i = 0
    while len(probes) < n:
        probes.append(SparseVector(((i % 5, 0.5 + i * 0.13),)))
        i += 1
    return probes


@pytest.mark.parametrize("kind", KINDS)
def test_round_trip_predictions_exact(kind, data):
    hyper = {"trees": 8} if kind == "random_forest" else {"epochs": 25}
    model = train(ClassifierSpec(kind=kind, hyperparameters=hyper, seed=13),
                  data)
    blob = dump_model(model)
    loaded = load_model(blob)
    assert loaded.spec == model.spec
    assert loaded.label_set == model.label_set
    assert loaded.space == model.space
    for v in probe_vectors(data):
        assert predict(loaded, v).scores == predict(model, v).scores


def test_header_and_magic(data):
    model = train(ClassifierSpec(kind="zero_r"), data)
    blob = dump_model(model)
    assert blob.startswith(b"triagekit-model 1\n")
    with pytest.raises(ArtifactError, match="magic"):
        load_model(b"something-else 1\n" + blob.split(b"\n", 1)[1])


def test_newer_schema_rejected(data):
    model = train(ClassifierSpec(kind="zero_r"), data)
    blob = dump_model(model)
    future = blob.replace(b"triagekit-model 1\n", b"triagekit-model 99\n", 1)
    with pytest.raises(ArtifactError, match="newer"):
        load_model(future)


def test_truncated_rejected():
    with pytest.raises(ArtifactError):
        load_model(b"no newline here")


def test_file_round_trip(tmp_path, data):
    model = train(ClassifierSpec(kind="knn"), data)
    path = tmp_path / "model.tkm"
    save_model(model, path)
    loaded = read_model(path)
    for v in probe_vectors(data, n=10):
        assert predict(loaded, v).scores == predict(model, v).scores


def test_training_window_preserved(data):
    from datetime import datetime

    window = (datetime(2019, 1, 1), datetime(2019, 7, 1))
    model = train(ClassifierSpec(kind="zero_r"), data, training_window=window)
    assert load_model(dump_model(model)).training_window == window

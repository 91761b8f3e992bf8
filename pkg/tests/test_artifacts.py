import json
import math

import numpy as np
import pytest

from levicat import (CollapseParams, ConfigurationError, NumericalError,
                     default_separation_grid, generate_synthetic_dataset)
from levicat.artifacts import (file_digest, format_float, read_rate_dataset,
                               write_json_artifact, write_manifest,
                               write_rate_dataset, write_table)

COLLAPSE = CollapseParams(lambda_csl=1e-21, r_c=100e-9, m0=1.66e-27,
                          r0_dp=1e-10)


def test_format_float_round_trips_exactly():
    for value in (0.1, 1e-300, 2.1390834033171613e-54, -math.pi,
                  1.0000000000000002):
        assert float(format_float(value)) == value
    assert format_float(1.0) == "1"


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_format_float_rejects_non_finite(bad):
    with pytest.raises(NumericalError):
        format_float(bad)


def test_table_header_and_cells(tmp_path):
    path = write_table(tmp_path / "t.csv", ("a", "b", "flag"),
                       [(1.5, 2, True), (2.5, 3, False)], tool="demo",
                       seed=11, config={"x": 1})
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# levicat ")
    assert lines[1] == "# tool: demo"
    assert lines[2] == "# seed: 11"
    assert lines[3] == '# config: {"x":1}'
    assert lines[4] == "a,b,flag"
    assert lines[5] == "1.5,2,1"
    assert lines[6] == "2.5,3,0"


def test_empty_table_is_header_only(tmp_path):
    path = write_table(tmp_path / "empty.csv", ("a",), [], tool="demo")
    lines = path.read_text().splitlines()
    assert lines[-1] == "a"


def test_table_rejects_ragged_rows_and_nan(tmp_path):
    with pytest.raises(ConfigurationError):
        write_table(tmp_path / "r.csv", ("a", "b"), [(1.0,)], tool="demo")
    with pytest.raises(NumericalError):
        write_table(tmp_path / "n.csv", ("a",), [(math.nan,)], tool="demo")


def test_json_artifact_structure(tmp_path):
    path = write_json_artifact(tmp_path / "out.json", {"value": 3.5},
                               tool="fit", seed=3, config={"c": 1})
    doc = json.loads(path.read_text())
    assert doc["tool"] == "fit"
    assert doc["seed"] == 3
    assert doc["config"] == {"c": 1}
    assert doc["result"] == {"value": 3.5}
    with pytest.raises(NumericalError):
        write_json_artifact(tmp_path / "bad.json", {"value": math.nan},
                            tool="fit")


def test_dataset_round_trip_is_exact(tmp_path):
    grid = default_separation_grid(COLLAPSE, 12)
    data = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, 1e-17, 50e-9,
                                      grid, 0.05, seed=7)
    path = write_rate_dataset(tmp_path / "d.csv", data, config={"k": 2})
    loaded = read_rate_dataset(path)
    assert np.array_equal(loaded.delta_x, data.delta_x)
    assert np.array_equal(loaded.gamma, data.gamma)
    assert np.array_equal(loaded.sigma, data.sigma)
    assert loaded.lambda_true == data.lambda_true
    assert loaded.d_pp_true == data.d_pp_true
    assert loaded.noise_fraction == data.noise_fraction
    assert loaded.seed == data.seed
    assert loaded.n_resampled == data.n_resampled


def test_dataset_write_is_byte_deterministic(tmp_path):
    grid = default_separation_grid(COLLAPSE, 6)
    data = generate_synthetic_dataset(1e-21, 1.2e-42, COLLAPSE, 1e-17, 50e-9,
                                      grid, 0.05, seed=1)
    a = write_rate_dataset(tmp_path / "a.csv", data)
    b = write_rate_dataset(tmp_path / "b.csv", data)
    assert a.read_bytes() == b.read_bytes()


def test_read_dataset_rejects_malformed(tmp_path):
    with pytest.raises(ConfigurationError):
        read_rate_dataset(tmp_path / "missing.csv")
    bad_cols = tmp_path / "cols.csv"
    bad_cols.write_text("x,y\n1,2\n")
    with pytest.raises(ConfigurationError):
        read_rate_dataset(bad_cols)
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("delta_x,gamma,sigma\n1e-8,2.0\n")
    with pytest.raises(ConfigurationError):
        read_rate_dataset(ragged)
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ConfigurationError):
        read_rate_dataset(empty)


def test_manifest_lists_checksums(tmp_path):
    f1 = tmp_path / "one.csv"
    f1.write_text("a\n1\n")
    f2 = tmp_path / "two.csv"
    f2.write_text("b\n2\n")
    path = write_manifest(tmp_path, [f1, f2], tool="rates", seed=5,
                          duration_s=0.25)
    doc = json.loads(path.read_text())
    assert doc["files"]["one.csv"] == file_digest(f1)
    assert doc["files"]["two.csv"] == file_digest(f2)
    assert doc["seed"] == 5
    assert doc["duration_s"] == 0.25

"""Matrix file parsing, report payloads, canonical JSON."""

import json

import jsonschema
import numpy as np
import pytest

from hoffbound import (
    DimensionError,
    OracleResult,
    ParseError,
    RunConfig,
    UnsupportedFormat,
    bound_h0,
    canonical_report_json,
    load_matrix,
    lower_bound_monte_carlo,
    report_to_dict,
    save_matrix_csv,
)

from helpers import instance


def _schema():
    import importlib.resources as ir
    text = (ir.files("hoffbound") / "schemas" / "report-v1.schema.json").read_text()
    return json.loads(text)


# --- CSV -------------------------------------------------------------------

def test_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(8)
    A = rng.standard_normal((5, 3)) * np.array([1e-200, 1.0, 1e120])
    path = tmp_path / "m.csv"
    save_matrix_csv(path, A)
    assert np.array_equal(load_matrix(path), A)


def test_csv_skips_comments_and_blank_lines(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# header comment\n1,2\n\n# middle\n3,4\n")
    assert np.array_equal(load_matrix(path), [[1.0, 2.0], [3.0, 4.0]])


def test_csv_ragged_rows_name_the_line(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,2\n3\n")
    with pytest.raises(DimensionError, match="line 2"):
        load_matrix(path)


def test_csv_bad_number_names_line_and_column(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,abc\n")
    with pytest.raises(ParseError, match="line 1, column 2"):
        load_matrix(path)


def test_csv_without_data_rows(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("# nothing here\n\n")
    with pytest.raises(ParseError, match="no data rows"):
        load_matrix(path)


# --- Matrix Market -----------------------------------------------------------

def _write(tmp_path, text):
    path = tmp_path / "m.mtx"
    path.write_text(text)
    return path


def test_mtx_array_is_column_major(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n")
    assert np.array_equal(load_matrix(p), [[1.0, 3.0], [2.0, 4.0]])


def test_mtx_coordinate_sums_duplicates(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate real general\n"
                         "2 2 3\n1 1 1.5\n1 1 0.5\n2 2 -1\n")
    assert np.array_equal(load_matrix(p), [[2.0, 0.0], [0.0, -1.0]])


def test_mtx_symmetric_mirrors_entries(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate real symmetric\n"
                         "2 2 2\n1 1 3\n2 1 5\n")
    assert np.array_equal(load_matrix(p), [[3.0, 5.0], [5.0, 0.0]])


def test_mtx_skew_symmetric(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate real skew-symmetric\n"
                         "2 2 1\n2 1 7\n")
    assert np.array_equal(load_matrix(p), [[0.0, -7.0], [7.0, 0.0]])


def test_mtx_integer_field(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate integer general\n"
                         "1 2 1\n1 2 9\n")
    assert np.array_equal(load_matrix(p), [[0.0, 9.0]])


@pytest.mark.parametrize("header", [
    "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n",
    "%%MatrixMarket matrix array complex general\n1 1\n1 0\n",
])
def test_mtx_unsupported_fields(tmp_path, header):
    with pytest.raises(UnsupportedFormat):
        load_matrix(_write(tmp_path, header))


def test_mtx_rejects_out_of_range_indices(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix coordinate real general\n"
                         "2 2 1\n3 1 1.0\n")
    with pytest.raises(DimensionError, match="out of range"):
        load_matrix(p)


def test_mtx_rejects_truncated_array(tmp_path):
    p = _write(tmp_path, "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n")
    with pytest.raises(DimensionError):
        load_matrix(p)


def test_mtx_rejects_missing_banner(tmp_path):
    with pytest.raises(ParseError, match="MatrixMarket header"):
        load_matrix(_write(tmp_path, "%%NotMarket stuff\n1 1\n1\n"))


# --- format detection ----------------------------------------------------------

def test_auto_detection_sniffs_contents(tmp_path):
    p1 = tmp_path / "a.txt"
    p1.write_text("%%MatrixMarket matrix array real general\n1 1\n42\n")
    assert load_matrix(p1).tolist() == [[42.0]]
    p2 = tmp_path / "b.txt"
    p2.write_text("1,2\n3,4\n")
    assert load_matrix(p2).tolist() == [[1.0, 2.0], [3.0, 4.0]]


def test_explicit_format_overrides_extension(tmp_path):
    p = tmp_path / "data.csv"
    p.write_text("%%MatrixMarket matrix array real general\n1 1\n7\n")
    assert load_matrix(p, fmt="mtx").tolist() == [[7.0]]
    with pytest.raises(ValueError):
        load_matrix(p, fmt="bogus")


def test_parse_error_hierarchy():
    assert issubclass(DimensionError, ParseError)
    assert issubclass(UnsupportedFormat, ParseError)


# --- run configuration -----------------------------------------------------------

def test_run_config_validation():
    RunConfig(matrix_path="m.csv")  # defaults are valid
    with pytest.raises(ValueError):
        RunConfig(matrix_path="m.csv", num_samples=-1)
    with pytest.raises(ValueError):
        RunConfig(matrix_path="m.csv", output="xml")
    with pytest.raises(ValueError):
        RunConfig(matrix_path="m.csv", fmt="bogus")


# --- report payloads ---------------------------------------------------------------

def test_payload_shape_and_schema_for_each_branch():
    schema = _schema()
    for A in (np.zeros((2, 2)), -np.eye(3), np.array([[1.0], [-1.0]]),
              np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]])):
        inst = instance(A)
        rep = bound_h0(inst)
        orc = lower_bound_monte_carlo(inst, num_samples=4, seed=0)
        for payload in (report_to_dict(rep), report_to_dict(rep, orc)):
            jsonschema.validate(payload, schema)
            assert payload["version"] == "1"
            assert set(payload) == {"version", "branch", "partition", "bounds",
                                    "oracle", "sandwich", "diagnostics"}


def test_payload_without_oracle_has_null_sandwich():
    rep = bound_h0(instance(-np.eye(3)))
    payload = report_to_dict(rep)
    assert payload["oracle"] is None
    assert payload["sandwich"] is None


def test_sandwich_block_flags_violations():
    inst = instance(-np.eye(3))
    rep = bound_h0(inst)
    fake = OracleResult(lower_bound=rep.total + 1.0, best_u=None,
                        samples_used=1, skipped=0, seed=0)
    payload = report_to_dict(rep, fake)
    assert payload["sandwich"]["ok"] is False
    honest = lower_bound_monte_carlo(inst, num_samples=4, seed=0)
    assert report_to_dict(rep, honest)["sandwich"]["ok"] is True


def test_schema_rejects_unknown_keys():
    rep = bound_h0(instance(-np.eye(3)))
    payload = report_to_dict(rep)
    payload["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(payload, _schema())


# --- canonical JSON ------------------------------------------------------------------

def test_canonical_json_is_a_fixed_point():
    rep = bound_h0(instance(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]])))
    js = canonical_report_json(report_to_dict(rep))
    assert js == json.dumps(json.loads(js), sort_keys=True, separators=(",", ":"))


def test_canonical_json_drops_timings():
    rep = bound_h0(instance(-np.eye(3)))
    assert "timings" in rep.diagnostics
    js = canonical_report_json(report_to_dict(rep))
    assert '"timings"' not in js


def test_canonical_json_is_bit_stable_across_recomputation():
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]])

    def run():
        inst = instance(A)
        rep = bound_h0(inst)
        orc = lower_bound_monte_carlo(inst, num_samples=8, seed=2,
                                      x_hat=rep.partition.x_hat)
        return canonical_report_json(report_to_dict(rep, orc))

    assert run() == run()


def test_canonical_json_round_trips_values():
    rep = bound_h0(instance(-np.eye(3)))
    payload = json.loads(canonical_report_json(report_to_dict(rep)))
    assert payload["bounds"]["total"] == rep.total

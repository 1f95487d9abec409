import numpy as np
import pytest

from faceset import ClassProbabilitySet, EmbeddingSet, unit_valid_rows
from faceset.errors import DegenerateEmbedding, InvalidInput

from helpers import make_set


def test_create_basic_properties():
    s = make_set([[1.0, 0.0], [0.0, 1.0]], ids=["a", "b"])
    assert s.n == 2
    assert s.dim == 2
    assert s.valid_count == 2
    assert s.valid_ids() == ("a", "b")
    assert s.matrix.dtype == np.float64


def test_matrix_is_read_only():
    s = make_set([[1.0, 0.0]])
    with pytest.raises(ValueError):
        s.matrix[0, 0] = 5.0


def test_float32_input_widens_to_float64():
    m = np.array([[0.1, 0.2]], dtype=np.float32)
    s = make_set(m)
    assert s.matrix.dtype == np.float64
    assert s.matrix[0, 0] == float(np.float32(0.1))


def test_duplicate_ids_rejected():
    with pytest.raises(InvalidInput):
        make_set([[1.0], [2.0]], ids=["x", "x"])


def test_id_count_mismatch_rejected():
    with pytest.raises(InvalidInput):
        EmbeddingSet.create(["only"], np.ones((2, 3)))


def test_invalid_rows_must_be_zero():
    with pytest.raises(InvalidInput):
        make_set([[1.0], [2.0]], face_found=[True, False])
    s = make_set([[1.0], [0.0]], face_found=[True, False])
    assert s.valid_count == 1


def test_nonfinite_valid_row_rejected():
    with pytest.raises(InvalidInput):
        make_set([[np.nan], [1.0]])


def test_normalized_claim_checked():
    with pytest.raises(InvalidInput):
        make_set([[3.0, 4.0]], normalized=True)
    make_set([[0.6, 0.8]], normalized=True)  # honest claim passes


def test_unit_valid_rows_normalizes_when_flag_false():
    s = make_set([[3.0, 0.0], [0.0, 5.0]], ids=["a", "b"])
    ids, rows = unit_valid_rows(s)
    assert ids == ("a", "b")
    np.testing.assert_allclose(np.linalg.norm(rows, axis=1), 1.0, atol=1e-15)


def test_unit_valid_rows_keeps_claimed_rows_untouched():
    m = np.array([[0.6, 0.8], [1.0, 0.0]])
    s = make_set(m, normalized=True)
    _, rows = unit_valid_rows(s)
    assert np.array_equal(rows, m)


def test_unit_valid_rows_skips_invalid_rows():
    s = make_set([[1.0, 0.0], [0.0, 0.0]], ids=["ok", "gone"], face_found=[True, False])
    ids, rows = unit_valid_rows(s)
    assert ids == ("ok",)
    assert rows.shape == (1, 2)


def test_unit_valid_rows_zero_norm_is_degenerate():
    s = make_set([[1.0, 0.0], [0.0, 0.0]], ids=["fine", "bad"])
    with pytest.raises(DegenerateEmbedding) as err:
        unit_valid_rows(s)
    assert err.value.row_id == "bad"


def test_probability_set_row_sums_enforced():
    with pytest.raises(InvalidInput):
        ClassProbabilitySet.create(["a"], [[0.5, 0.4]])
    ClassProbabilitySet.create(["a"], [[0.5, 0.5]])


def test_probability_entries_must_be_in_unit_interval():
    with pytest.raises(InvalidInput):
        ClassProbabilitySet.create(["a"], [[1.5, -0.5]])


def test_matrix_must_be_two_dimensional():
    with pytest.raises(InvalidInput):
        EmbeddingSet.create(["a"], np.ones(3))

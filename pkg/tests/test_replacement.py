import numpy as np
from numpy.testing import assert_allclose

import pytest

from nrurn.errors import ReplacementMatrixError
from nrurn.replacement import validate_replacement_matrix


def test_identity_flags():
    flags = validate_replacement_matrix(np.eye(2)).flags
    assert flags['row_stochastic']
    assert flags['doubly_stochastic']
    assert flags['normal']
    assert flags['identity']
    assert flags['permutation']
    assert not flags['uniform_J_over_k']


def test_validation_idempotent():
    rng = np.random.default_rng(7)
    for k in (2, 3, 5, 8):
        for scale in (1.0, 2.0, 7.5):
            first = validate_replacement_matrix(scale * rng.dirichlet(np.ones(k), size=k))
            second = validate_replacement_matrix(first.entries)
            assert second == first
            assert second.flags == first.flags
            assert validate_replacement_matrix(first) == first


def test_uniform_flag():
    assert validate_replacement_matrix([[0.5, 0.5], [0.5, 0.5]]).uniform_J_over_k


def test_not_doubly_stochastic():
    R = validate_replacement_matrix([[1, 0], [0.5, 0.5]])
    assert R.row_stochastic
    assert not R.doubly_stochastic
    assert_allclose(R.spectral_norm, 1.1441228, rtol=1e-6)


def test_balanced_matrix_is_normalised():
    R = validate_replacement_matrix([[2, 0], [1, 1]])
    assert_allclose(R.entries, [[1, 0], [0.5, 0.5]])


def test_unbalanced_rows_reported():
    with pytest.raises(ReplacementMatrixError, match=r"rows \[1\]"):
        validate_replacement_matrix([[1, 0], [1, 1]])


def test_negative_entry():
    with pytest.raises(ReplacementMatrixError) as e:
        validate_replacement_matrix([[1.5, -0.5], [0.5, 0.5]])
    assert e.value.path == "R[0][1]"


def test_not_square():
    with pytest.raises(ReplacementMatrixError, match="square"):
        validate_replacement_matrix([[1, 0, 0], [0, 1, 0]])


def test_entries_read_only():
    R = validate_replacement_matrix(np.eye(3))
    with pytest.raises(ValueError):
        R.entries[0, 0] = 2

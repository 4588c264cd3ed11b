import numpy as np
import pytest
from hypothesis import given, settings

from deqlens import from_dense, read_matrix_market, write_matrix_market
from deqlens.errors import MatrixMarketError, NotHermitian
from deqlens.mmio import dumps, loads

from conftest import corpus, hermitian_matrices


def test_symmetric_file_mirrors_lower_triangle():
    text = """%%MatrixMarket matrix coordinate real symmetric
% a comment
3 3 4
1 1 0.6
2 1 0.3
2 2 0.2
3 3 1e-3
"""
    a = loads(text)
    expected = np.array([[0.6, 0.3, 0], [0.3, 0.2, 0], [0, 0, 1e-3]])
    np.testing.assert_array_equal(a.to_dense(), expected)


def test_hermitian_file_conjugates_mirror():
    text = """%%MatrixMarket matrix coordinate complex hermitian
2 2 3
1 1 0.5 0
2 1 0 0.25
2 2 -0.3 0
"""
    a = loads(text)
    np.testing.assert_array_equal(a.to_dense(), [[0.5, -0.25j], [0.25j, -0.3]])


def test_general_and_pattern_fields():
    a = loads("%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n2 1\n")
    np.testing.assert_array_equal(a.to_dense(), [[0, 1], [1, 0]])
    with pytest.raises(NotHermitian):
        loads("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1.0\n")


@pytest.mark.parametrize("text,lineno", [
    ("", 1),
    ("hello\n", 1),
    ("%%MatrixMarket matrix array real general\n2 2\n", 1),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1.0\n", 3),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 abc\n", 3),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1.0\n", 2),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n%\n1 1 1.0\n", 4),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1.0\n", 3),
    ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1\n", 3),
    ("%%MatrixMarket matrix coordinate real hermitian\n2 2 1\n1 1 1.0\n", 1),
])
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(MatrixMarketError) as info:
        loads(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_round_trip_through_file_keeps_comments(tmp_path):
    for a in corpus()[:30]:
        path = tmp_path / "m.mtx"
        write_matrix_market(path, a, ["provenance line"])
        b, comments = read_matrix_market(path, with_comments=True)
        assert comments == ["provenance line"]
        assert b == a


@settings(max_examples=100, deadline=None)
@given(hermitian_matrices())
def test_round_trip_is_exact(m):
    a = from_dense(m)
    b = loads(dumps(a))
    # exactly Hermitian input is stored as its lower triangle; the mirror is rebuilt
    np.testing.assert_allclose(b.to_dense(), a.to_dense(), rtol=1e-15, atol=0)
    if a.herm_deviation == 0.0:
        assert b == a


def test_nearly_hermitian_input_is_written_general():
    a = from_dense([[1.0, 0.5], [0.5 + 1e-14, 1.0]])
    text = dumps(a)
    assert "general" in text.splitlines()[0]
    assert loads(text) == a

import pytest

from weakcat.globset import (DimensionError, GlobularSet, empty_glob,
                             glob_binary, parallel_pairs, terminal_glob,
                             validate_globular)


def two_cell_glob():
    # 0-cells a, b; 1-cells f, g: a -> b and h: a -> a
    return GlobularSet(
        1,
        [["a", "b"], ["f", "g", "h"]],
        [{}, {"f": "a", "g": "a", "h": "a"}],
        [{}, {"f": "b", "g": "b", "h": "a"}],
    )


def test_validate_single_point():
    X = GlobularSet(0, [["x"]], [{}], [{}])
    assert validate_globular(X) == []


def test_validate_flags_broken_globe_relation():
    X = GlobularSet(
        2,
        [["a", "b", "c"], ["f", "g"], ["al"]],
        [{}, {"f": "a", "g": "b"}, {"al": "f"}],
        [{}, {"f": "b", "g": "c"}, {"al": "g"}],
    )
    report = validate_globular(X)
    assert any("ss != st" in r for r in report)


def test_validate_terminal():
    assert validate_globular(terminal_glob(3)) == []


def test_parallel_pairs_dim0_full_square():
    X = GlobularSet(0, [["a", "b"]], [{}], [{}])
    assert len(parallel_pairs(X, 0)) == 4


def test_parallel_pairs_dim1():
    X = two_cell_glob()
    pairs = set(parallel_pairs(X, 1))
    assert pairs == {("f", "f"), ("f", "g"), ("g", "f"), ("g", "g"), ("h", "h")}


def test_parallel_pairs_oracle_brute_force():
    X = two_cell_glob()
    brute = [(a, b) for a in X.cells[1] for b in X.cells[1]
             if X.src[1][a] == X.src[1][b] and X.tgt[1][a] == X.tgt[1][b]]
    assert parallel_pairs(X, 1) == brute


def test_parallel_pairs_empty():
    assert parallel_pairs(empty_glob(2), 2) == []


def test_parallel_pairs_above_truncation_errors():
    with pytest.raises(DimensionError):
        parallel_pairs(terminal_glob(1), 2)


def test_product_counts():
    X = two_cell_glob()
    Y = two_cell_glob()
    P = glob_binary(X, Y, "product")
    for k in range(2):
        assert len(P.cells[k]) == len(X.cells[k]) * len(Y.cells[k])
    assert validate_globular(P) == []


def test_product_with_terminal_is_isomorphic():
    X = two_cell_glob()
    T = terminal_glob(1)
    P = glob_binary(T, X, "product")
    for k in range(2):
        assert len(P.cells[k]) == len(X.cells[k])


def test_coproduct_with_empty():
    X = two_cell_glob()
    C = glob_binary(X, empty_glob(1), "coproduct")
    for k in range(2):
        assert len(C.cells[k]) == len(X.cells[k])
    assert validate_globular(C) == []


def test_terminal_counts():
    assert sum(len(c) for c in terminal_glob(0).cells) == 1
    assert sum(len(c) for c in terminal_glob(2).cells) == 3


def test_json_round_trip_byte_stable():
    X = two_cell_glob()
    s = X.to_json()
    Y = GlobularSet.from_json(s)
    assert Y.to_json() == s
    assert Y.cells == X.cells

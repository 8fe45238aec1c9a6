from itertools import product

import numpy as np
import pytest

from services.fredkin import (
    check_bit,
    fredkin_eval,
    fredkin_inverse,
    fredkin_truth_table,
    gate_is_conservative,
    gate_is_reversible,
    popcount,
)
from utils.exceptions import InvalidBitError


def test_truth_table_matches_equations():
    for (x1, x2, x3), (y1, y2, y3) in fredkin_truth_table():
        assert y1 == x1
        assert y2 == ((1 - x1) & x2) | (x1 & x3)
        assert y3 == (x1 & x2) | ((1 - x1) & x3)


def test_truth_table_rows_in_ascending_order():
    rows = [inp for inp, _ in fredkin_truth_table()]
    assert rows == list(product((0, 1), repeat=3))


@pytest.mark.parametrize("bits,expected", [
    ((1, 0, 1), (1, 1, 0)),
    ((0, 1, 0), (0, 1, 0)),
    ((1, 1, 0), (1, 0, 1)),
])
def test_known_rows(bits, expected):
    assert fredkin_eval(*bits) == expected


def test_involution_and_conservativity():
    for row, out in fredkin_truth_table():
        assert fredkin_inverse(*out) == row
        assert popcount(row) == popcount(out)
    assert gate_is_reversible()
    assert gate_is_conservative()


def test_vectorised_evaluation_matches_scalar():
    rows = np.array(list(product((0, 1), repeat=3)), dtype=np.uint8)
    y1, y2, y3 = fredkin_eval(rows[:, 0], rows[:, 1], rows[:, 2])
    for i, row in enumerate(rows.tolist()):
        assert (int(y1[i]), int(y2[i]), int(y3[i])) == fredkin_eval(*row)


@pytest.mark.parametrize("value", [2, -1, 0.0, "1", None])
def test_check_bit_rejects_non_bits(value):
    with pytest.raises(InvalidBitError):
        check_bit("x", value)


def test_check_bit_accepts_bits():
    assert check_bit("x", 0) == 0
    assert check_bit("x", 1) == 1
    assert check_bit("x", True) == 1

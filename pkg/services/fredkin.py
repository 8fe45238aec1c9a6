"""Fredkin gate semantics.

The gate is a conditional switch: the control line x1 passes through, and
when it is high the two data lines are exchanged. It is reversible (its own
inverse) and conservative (the number of ones is preserved).

The equations below use only bitwise operators, so the same definition works
on Python ints and element-wise on numpy ``uint8`` columns.
"""
from itertools import product
from typing import Iterable, List, Tuple

from utils.exceptions import InvalidBitError

Triple = Tuple[int, int, int]


def check_bit(name: str, value) -> int:
    if value not in (0, 1) or isinstance(value, float):
        raise InvalidBitError(name, value)
    return int(value)


def fredkin_eval(x1, x2, x3):
    nx1 = x1 ^ 1
    y1 = x1
    y2 = (nx1 & x2) | (x1 & x3)
    y3 = (x1 & x2) | (nx1 & x3)
    return y1, y2, y3


# The gate is an involution
fredkin_inverse = fredkin_eval


def fredkin_truth_table() -> List[Tuple[Triple, Triple]]:
    """All eight rows in ascending binary order of (x1, x2, x3)"""
    return [(row, fredkin_eval(*row)) for row in product((0, 1), repeat=3)]


def popcount(bits: Iterable[int]) -> int:
    return sum(bits)


def gate_is_reversible() -> bool:
    outputs = [out for _, out in fredkin_truth_table()]
    return len(set(outputs)) == len(outputs)


def gate_is_conservative() -> bool:
    return all(popcount(inp) == popcount(out) for inp, out in fredkin_truth_table())

"""Exact q-analogue counts."""

from __future__ import annotations


def gaussian(a: int, b: int, q: int) -> int:
    """Gaussian binomial [a choose b]_q, the number of b-subspaces of F_q^a."""
    if a < 0 or b < 0 or b > a:
        raise ValueError(f"gaussian({a}, {b}) needs 0 <= b <= a")
    num, den = 1, 1
    for k in range(b):
        num *= q ** (a - k) - 1
        den *= q ** (k + 1) - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def gl_count(i: int, q: int) -> int:
    """(q^i - 1)(q^i - q)...(q^i - q^(i-1)), the order of GL(i, q)."""
    out = 1
    for j in range(i):
        out *= q**i - q**j
    return out

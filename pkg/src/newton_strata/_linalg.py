"""Small exact linear-algebra helpers shared by the modules.

Hot loops work on tuples of ``Fraction``; the one-off per-datum
precomputations (inverses, kernels, Smith forms) go through sympy.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_decomp

Matrix = tuple[tuple[Fraction, ...], ...]


def to_frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"not an exact rational: {x!r}")


def frac_str(x: Fraction) -> str:
    """Render a rational as ``"p/q"`` (or ``"p"`` for integers)."""
    x = to_frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def to_sympy(rows: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(to_frac(v).numerator, to_frac(v).denominator) for v in row] for row in rows])


def from_sympy(m: sympy.Matrix) -> Matrix:
    return tuple(tuple(to_frac(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def int_matrix(m: sympy.Matrix) -> tuple[tuple[int, ...], ...]:
    out = []
    for i in range(m.rows):
        row = []
        for j in range(m.cols):
            v = m[i, j]
            if not v.is_integer:
                raise ValueError(f"matrix entry {v} is not integral")
            row.append(int(v))
        out.append(tuple(row))
    return tuple(out)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m))


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def dot(x: Iterable, y: Iterable):
    return sum(a * b for a, b in zip(x, y))


def smith_decomposition(rows: Sequence[Sequence[int]]):
    """Integer Smith form ``D = U A V`` of a (possibly non-square) matrix.

    Returns ``(diag, U, V)`` with ``diag`` the list of diagonal entries
    (length ``min(rows, cols)``, made nonnegative) and ``U``, ``V`` as
    integer tuple matrices.
    """
    a = sympy.Matrix(rows)
    if a.rows == 0 or a.cols == 0:
        return [], identity(a.rows), identity(a.cols)
    d, u, v = smith_normal_decomp(a, domain=sympy.ZZ)
    diag = []
    u_rows = [list(r) for r in int_matrix(u)]
    for i in range(min(d.rows, d.cols)):
        entry = int(d[i, i])
        if entry < 0:
            entry = -entry
            u_rows[i] = [-x for x in u_rows[i]]
        diag.append(entry)
    return diag, tuple(tuple(r) for r in u_rows), int_matrix(v)

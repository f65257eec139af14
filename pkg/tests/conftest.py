"""Shared reference implementations (oracles) kept independent of the
library's code paths: plain list-of-lists elimination, itertools
enumeration, and a memo-free search."""

from __future__ import annotations

import itertools
from fractions import Fraction

from lincirc import BitMatrix, SplitMix64


def ref_rank_gf2(mat: BitMatrix) -> int:
    """Textbook row reduction on 0/1 lists."""
    rows = [mat.row_bits(i) for i in range(mat.rows)]
    rank = 0
    for col in range(mat.cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def ref_det(mat: BitMatrix) -> Fraction:
    """Fraction-based Gaussian elimination determinant."""
    n = mat.rows
    rows = [[Fraction(v) for v in mat.row_bits(i)] for i in range(n)]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col] * inv
            if factor:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def ref_mul_gf2(a: BitMatrix, b: BitMatrix) -> list[list[int]]:
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = 0
            for k in range(a.cols):
                acc ^= a.entry(i, k) & b.entry(k, j)
            row.append(acc)
        out.append(row)
    return out


def ref_mul_bool(a: BitMatrix, b: BitMatrix) -> list[list[int]]:
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = 0
            for k in range(a.cols):
                acc |= a.entry(i, k) & b.entry(k, j)
            row.append(acc)
        out.append(row)
    return out


def ref_has_allones(mat: BitMatrix, size: int) -> bool:
    """Brute-force itertools check for a size x size all-ones block."""
    for rows in itertools.combinations(range(mat.rows), size):
        for cols in itertools.combinations(range(mat.cols), size):
            if all(mat.entry(i, j) for i in rows for j in cols):
                return True
    return False


def random_bits_matrix(rng: SplitMix64, m: int, n: int) -> BitMatrix:
    return BitMatrix(m, n, [rng.bits(n) for _ in range(m)])

"""Shared test oracles, independent of the package's own linear algebra."""

from __future__ import annotations

import numpy as np
import pytest

from cssdec.gf2 import SparseBitMatrix


def dense_rank_gf2(array: np.ndarray) -> int:
    """Reference rank via dense elimination on a uint8 copy."""
    a = (np.asarray(array) % 2).astype(np.uint8).copy()
    m, n = a.shape
    r = 0
    for c in range(n):
        if r >= m:
            break
        hits = np.flatnonzero(a[r:, c])
        if hits.size == 0:
            continue
        pivot = r + int(hits[0])
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        others = np.flatnonzero(a[:, c])
        for i in others:
            if i != r:
                a[i] ^= a[r]
        r += 1
    return r


def dense_solutions_gf2(array: np.ndarray, rhs: np.ndarray) -> list[np.ndarray]:
    """All solutions of a small system by exhaustive enumeration."""
    a = (np.asarray(array) % 2).astype(np.uint8)
    b = (np.asarray(rhs) % 2).astype(np.uint8)
    n = a.shape[1]
    out = []
    for bits in range(1 << n):
        x = np.array([(bits >> i) & 1 for i in range(n)], dtype=np.uint8)
        if np.array_equal(a.dot(x) % 2, b):
            out.append(x)
    return out


def random_sparse(rng: np.random.Generator, num_rows: int, num_cols: int, density: float = 0.25) -> SparseBitMatrix:
    rows = []
    for _ in range(num_rows):
        sup = np.flatnonzero(rng.random(num_cols) < density)
        rows.append([int(c) for c in sup])
    return SparseBitMatrix(num_rows, num_cols, rows)


def random_regular_rows(rng: np.random.Generator, num_rows: int, num_cols: int, weight: int) -> SparseBitMatrix:
    rows = [sorted(int(c) for c in rng.choice(num_cols, size=weight, replace=False)) for _ in range(num_rows)]
    return SparseBitMatrix(num_rows, num_cols, rows)


@pytest.fixture(scope="session")
def surface3():
    from cssdec.codes import surface_code

    return surface_code(3)


@pytest.fixture(scope="session")
def surface5():
    from cssdec.codes import surface_code

    return surface_code(5)

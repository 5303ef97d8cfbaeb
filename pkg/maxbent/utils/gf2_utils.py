"""
Linear algebra over F_2.

Vectors are plain integers (bit j = coordinate j). Matrices are numpy uint8 arrays of shape
(rows, cols), entry [r, c] being the coefficient of input bit c in output bit r.
"""

from typing import Iterable, List, Optional, Tuple

import numpy as np


def xor_basis(vectors: Iterable[int]) -> List[int]:
    """Reduced echelon basis (by leading bit) of the span of `vectors`."""
    basis: List[int] = []
    for vec in vectors:
        vec = int(vec)
        for b in basis:
            vec = min(vec, vec ^ b)
        if vec:
            basis.append(vec)
            basis.sort(reverse=True)
    return basis


def span_rank(vectors: Iterable[int]) -> int:
    return len(xor_basis(vectors))


def is_subspace(members: Iterable[int]) -> bool:
    """True iff the set is closed under XOR (equivalently: contains 0 and has size 2^rank)."""
    members = set(int(m) for m in members)
    if 0 not in members:
        return False
    return len(members) == 1 << span_rank(members)


def columns(matrix: np.ndarray) -> List[int]:
    """Column j packed as an integer (bit r = matrix[r, j])."""
    rows = matrix.shape[0]
    weights = (1 << np.arange(rows, dtype=np.int64)).astype(object)
    return [int(np.dot(matrix[:, j].astype(object), weights)) for j in range(matrix.shape[1])]


def rank(matrix: np.ndarray) -> int:
    return span_rank(columns(matrix))


def is_invertible(matrix: np.ndarray) -> bool:
    rows, cols = matrix.shape
    return rows == cols and rank(matrix) == rows


def identity(size: int) -> np.ndarray:
    return np.eye(size, dtype=np.uint8)


def matmul(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return ((left.astype(np.int64) @ right.astype(np.int64)) & 1).astype(np.uint8)


def matvec(matrix: np.ndarray, vector: int) -> int:
    result = 0
    for j, col in enumerate(columns(matrix)):
        if (vector >> j) & 1:
            result ^= col
    return result


def apply_to_points(matrix: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Multiply every integer-encoded vector in `points` by `matrix`."""
    points = np.asarray(points, dtype=np.int64)
    result = np.zeros_like(points)
    for j, col in enumerate(columns(matrix)):
        if col:
            result ^= np.where((points >> j) & 1, np.int64(col), np.int64(0))
    return result


def inverse(matrix: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; raises ValueError on singular input."""
    size = matrix.shape[0]
    if matrix.shape != (size, size):
        raise ValueError("matrix is not square")
    work = np.concatenate([matrix.astype(np.uint8) & 1, identity(size)], axis=1)
    for col in range(size):
        pivots = np.nonzero(work[col:, col])[0]
        if pivots.size == 0:
            raise ValueError("matrix is singular")
        pivot = col + int(pivots[0])
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]
        hits = np.nonzero(work[:, col])[0]
        for row in hits:
            if row != col:
                work[row] ^= work[col]
    return work[:, size:].copy()


def nullspace(matrix: np.ndarray) -> List[int]:
    """Basis of {v : matrix v = 0}, vectors packed as integers."""
    rows, cols = matrix.shape
    work = matrix.astype(np.uint8).copy() & 1
    pivot_cols: List[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        hits = np.nonzero(work[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            work[[row, pivot]] = work[[pivot, row]]
        for other in np.nonzero(work[:, col])[0]:
            if other != row:
                work[other] ^= work[row]
        pivot_cols.append(col)
        row += 1
    basis = []
    for free in (c for c in range(cols) if c not in pivot_cols):
        vec = 1 << free
        for r, pc in enumerate(pivot_cols):
            if work[r, free]:
                vec |= 1 << pc
        basis.append(vec)
    return basis


def span(basis: Iterable[int]) -> List[int]:
    """All 2^len(basis) combinations, sorted."""
    members = [0]
    for vec in basis:
        members += [m ^ int(vec) for m in members]
    return sorted(members)


def from_columns(cols: Iterable[int], rows: int) -> np.ndarray:
    cols = list(cols)
    matrix = np.zeros((rows, len(cols)), dtype=np.uint8)
    for j, col in enumerate(cols):
        for r in range(rows):
            matrix[r, j] = (col >> r) & 1
    return matrix


def random_matrix(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)


def random_invertible(size: int, rng: np.random.Generator, max_attempts: Optional[int] = None) -> Tuple[np.ndarray, int]:
    """
    Uniform invertible matrix by rejection on rank.

    Returns the matrix and the number of draws it took.
    """
    attempts = 0
    while max_attempts is None or attempts < max_attempts:
        attempts += 1
        candidate = random_matrix(size, size, rng)
        if is_invertible(candidate):
            return candidate, attempts
    raise RuntimeError(f"no invertible {size}x{size} matrix after {attempts} draws")

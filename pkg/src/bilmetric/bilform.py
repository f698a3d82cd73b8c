"""The bilinear forms graph H_q(n, d).

Vertices are n x d matrices over F_q.  Matrix ``f`` stands for the
d-subspace {(f y, y) : y in F_q^d} of F_q^(n+d); the distinguished subspace N
is the span of the first n coordinates.  Distance is rank(f - g).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .gf import FieldSpec, field_of_order
from .linalg import LinalgError, Subspace, batch_rank, rank, rref
from .qbinom import gaussian, gl_count

DEFAULT_ENUM_CAP = 2**24


class CapExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class GraphSpec:
    field: FieldSpec
    n: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError(f"H_q(n, d) needs n, d >= 1, got n={self.n}, d={self.d}")

    @classmethod
    def of(cls, q: int, n: int, d: int) -> "GraphSpec":
        return cls(field_of_order(q), n, d)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def ambient(self) -> int:
        return self.n + self.d

    @property
    def num_vertices(self) -> int:
        return self.q ** (self.n * self.d)

    @property
    def diameter(self) -> int:
        return min(self.n, self.d)

    @property
    def N(self) -> Subspace:
        return Subspace.coordinate(self.field, self.ambient, range(self.n))

    def transposed(self) -> "GraphSpec":
        return GraphSpec(self.field, self.d, self.n)

    def check_cap(self, cap: int = DEFAULT_ENUM_CAP) -> None:
        if self.num_vertices > cap:
            raise CapExceeded(f"H_{self.q}({self.n},{self.d}) has {self.num_vertices} vertices, cap is {cap}")

    # -- index <-> matrix --------------------------------------------------

    def vertex(self, idx: int) -> np.ndarray:
        if not 0 <= idx < self.num_vertices:
            raise IndexError(f"vertex index {idx} out of range")
        nd = self.n * self.d
        digits = [(idx // self.q ** (nd - 1 - k)) % self.q for k in range(nd)]
        return np.array(digits, dtype=np.int64).reshape(self.n, self.d)

    def index(self, matrix) -> int:
        m = np.asarray(matrix, dtype=np.int64)
        if m.shape != (self.n, self.d):
            raise ValueError(f"expected a {self.n}x{self.d} matrix, got shape {m.shape}")
        idx = 0
        for c in m.reshape(-1).tolist():
            if not 0 <= c < self.q:
                raise ValueError(f"entry {c} outside GF({self.q})")
            idx = idx * self.q + c
        return idx

    def digit_block(self, start: int, stop: int) -> np.ndarray:
        """Row-major digits of vertices ``start..stop-1``, shape (stop-start, n*d)."""
        nd = self.n * self.d
        idx = np.arange(start, stop, dtype=np.int64)
        powers = self.q ** np.arange(nd - 1, -1, -1, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % self.q

    @property
    def digit_weights(self) -> np.ndarray:
        nd = self.n * self.d
        return self.q ** np.arange(nd - 1, -1, -1, dtype=np.int64)

    def difference_indices(self, indices: np.ndarray, other: int) -> np.ndarray:
        """Index of f_u - f_other for every u in ``indices``."""
        indices = np.asarray(indices, dtype=np.int64)
        if self.q == 2:
            return indices ^ other
        nd = self.n * self.d
        w = self.digit_weights
        du = (indices[:, None] // w[None, :]) % self.q
        dv = np.array([(other // int(x)) % self.q for x in w], dtype=np.int64)
        diff = np.asarray(self.field.sub(du, dv[None, :]), dtype=np.int64).reshape(-1, nd)
        return diff @ w


def enumerate_vertices(spec: GraphSpec, cap: int = DEFAULT_ENUM_CAP) -> Iterator[tuple[int, np.ndarray]]:
    spec.check_cap(cap)
    for idx in range(spec.num_vertices):
        yield idx, spec.vertex(idx)


def distance(spec: GraphSpec, u, v) -> int:
    """Rank distance between two vertex matrices."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != (spec.n, spec.d) or v.shape != (spec.n, spec.d):
        raise ValueError("vertex shape does not match the graph")
    return rank(spec.field, spec.field.sub(u, v))


def subspace_of(spec: GraphSpec, v) -> Subspace:
    """Row space of [f^T | I_d]: the subspace {(f y, y)}."""
    f = np.asarray(v, dtype=np.int64).reshape(spec.n, spec.d)
    gens = np.hstack([f.T, np.eye(spec.d, dtype=np.int64)])
    return Subspace.span(spec.field, gens, spec.ambient)


def vertex_of(spec: GraphSpec, u: Subspace) -> np.ndarray:
    """Inverse of :func:`subspace_of`; fails if ``u`` meets N nontrivially."""
    if u.ambient != spec.ambient or u.dim != spec.d:
        raise LinalgError(f"need a {spec.d}-subspace of F_q^{spec.ambient}")
    n, d = spec.n, spec.d
    order = list(range(n, n + d)) + list(range(n))
    red, r, piv = rref(spec.field, u.basis[:, order])
    if r != d or piv != list(range(d)):
        raise LinalgError("subspace meets N nontrivially")
    return red[:, d:].T.copy()


def transpose_map(v) -> np.ndarray:
    """H_q(n,d) -> H_q(d,n) isomorphism."""
    return np.asarray(v).T.copy()


def rank_class_sizes(spec: GraphSpec) -> list[int]:
    """Number of n x d matrices of each rank i = 0..min(n, d)."""
    q, n, d = spec.q, spec.n, spec.d
    return [gaussian(n, i, q) * gaussian(d, i, q) * gl_count(i, q) for i in range(min(n, d) + 1)]


@lru_cache(maxsize=16)
def rank_table(spec: GraphSpec, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """rank of the matrix with each index; distance(u, v) = table[index(u - v)]."""
    spec.check_cap(cap)
    total = spec.num_vertices
    out = np.empty(total, dtype=np.uint8)
    chunk = 1 << 16
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        mats = spec.digit_block(start, stop).reshape(-1, spec.n, spec.d)
        out[start:stop] = batch_rank(spec.field, mats)
    out.setflags(write=False)
    return out


def distance_matrix(spec: GraphSpec, cap: int = 2**14) -> np.ndarray:
    """All pairwise distances; meant for small graphs only."""
    spec.check_cap(cap)
    table = rank_table(spec)
    idx = np.arange(spec.num_vertices)
    return np.stack([table[spec.difference_indices(idx, v)] for v in range(spec.num_vertices)], axis=1)


def write_vertices_json(spec: GraphSpec, vertices) -> str:
    return json.dumps([np.asarray(v).tolist() for v in vertices])


def write_vertices_csv(spec: GraphSpec, vertices) -> str:
    """One line per vertex: its row-major base-q digit string."""
    if spec.q > 10:
        raise ValueError("digit strings are only defined for q <= 10")
    lines = ["".join(str(c) for c in np.asarray(v).reshape(-1).tolist()) for v in vertices]
    return "\n".join(lines) + ("\n" if lines else "")


def read_vertices_json(spec: GraphSpec, text: str) -> list[np.ndarray]:
    out = [np.array(m, dtype=np.int64).reshape(spec.n, spec.d) for m in json.loads(text)]
    for m in out:
        spec.index(m)
    return out


def read_vertices_csv(spec: GraphSpec, text: str) -> list[np.ndarray]:
    out = []
    for line in text.split():
        digits = [int(ch) for ch in line.strip()]
        out.append(spec.vertex(spec.index(np.array(digits).reshape(spec.n, spec.d))))
    return out

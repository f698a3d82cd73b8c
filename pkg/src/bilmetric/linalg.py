"""Exact linear algebra over F_q and canonical subspaces.

Matrices are 2-d integer numpy arrays of element codes; the field is passed
alongside.  Over GF(2) row reduction packs each row into a Python int and
eliminates with XOR.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldSpec, make_field


class LinalgError(ValueError):
    pass


def matmul(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"shape mismatch {a.shape} @ {b.shape}")
    if field.is_prime_field and field.p < 2**20:
        return (a @ b) % field.p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = field.add(out, field.mul(a[:, k, None], b[None, k, :]))
    return np.asarray(out, dtype=np.int64).reshape(a.shape[0], b.shape[1])


# -- row reduction -----------------------------------------------------------


def _rref_gf2(m: np.ndarray):
    rows, cols = m.shape
    weights = 1 << np.arange(cols - 1, -1, -1, dtype=object)
    packed = [int(sum(w for w, bit in zip(weights, row) if bit)) for row in m.tolist()]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        bit = 1 << (cols - 1 - c)
        for i in range(r, rows):
            if packed[i] & bit:
                break
        else:
            continue
        packed[r], packed[i] = packed[i], packed[r]
        pr = packed[r]
        for j in range(rows):
            if j != r and packed[j] & bit:
                packed[j] ^= pr
        pivots.append(c)
        r += 1
        if r == rows:
            break
    out = np.zeros((rows, cols), dtype=np.int64)
    for i, v in enumerate(packed[:r]):
        out[i] = [(v >> (cols - 1 - c)) & 1 for c in range(cols)]
    return out, r, pivots


def rref(field: FieldSpec, m) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form with unit pivots.

    Returns ``(reduced, rank, pivots)``; ``reduced`` keeps the input shape,
    with the zero rows at the bottom.
    """
    m = np.array(m, dtype=np.int64)
    if m.ndim != 2:
        raise LinalgError("rref expects a 2-d matrix")
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m.copy(), 0, []
    if field.q == 2:
        return _rref_gf2(m)
    return _rref_generic(field, m)


def _rref_generic(field: FieldSpec, m: np.ndarray):
    m = np.array(m, dtype=np.int64)
    rows, cols = m.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        lead = int(m[r, c])
        if lead != 1:
            m[r] = field.mul(field.inv(lead), m[r])
        factors = m[:, c].copy()
        factors[r] = 0
        if factors.any():
            m = np.asarray(field.sub(m, field.mul(factors[:, None], m[r][None, :])), dtype=np.int64)
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, r, pivots


def rank(field: FieldSpec, m) -> int:
    return rref(field, m)[1]


def batch_rank(field: FieldSpec, stack: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices of shape (B, r, c), eliminated in lockstep."""
    m = np.array(stack, dtype=np.int64)
    b, rows, cols = m.shape
    if rows > cols:
        m = m.transpose(0, 2, 1).copy()
        rows, cols = cols, rows
    ranks = np.zeros(b, dtype=np.int64)
    row_ids = np.arange(rows)
    all_b = np.arange(b)
    for c in range(cols):
        cand = (m[:, :, c] != 0) & (row_ids[None, :] >= ranks[:, None])
        has = cand.any(axis=1) & (ranks < rows)
        if not has.any():
            continue
        sel = all_b[has]
        piv = cand[sel].argmax(axis=1)
        tgt = ranks[sel]
        prow = m[sel, piv].copy()
        m[sel, piv] = m[sel, tgt]
        m[sel, tgt] = prow
        lead = prow[:, c]
        prow = np.asarray(field.mul(field.inv(lead)[:, None], prow), dtype=np.int64).reshape(prow.shape)
        m[sel, tgt] = prow
        factors = m[sel, :, c].copy()
        factors[np.arange(sel.size), tgt] = 0
        upd = field.mul(factors[:, :, None], prow[:, None, :])
        m[sel] = np.asarray(field.sub(m[sel], upd), dtype=np.int64).reshape(sel.size, rows, cols)
        ranks[sel] += 1
    return ranks


# -- subspaces -----------------------------------------------------------------


class Subspace:
    """A subspace of F_q^m held as its canonical reduced row echelon basis.

    Two instances compare equal exactly when they are the same set of
    vectors, since the basis matrix is canonical.
    """

    __slots__ = ("field", "ambient", "basis", "pivots", "_key")

    def __init__(self, field: FieldSpec, ambient: int, basis: np.ndarray, pivots: Sequence[int]):
        self.field = field
        self.ambient = ambient
        basis = np.asarray(basis, dtype=np.int64).reshape(len(pivots), ambient)
        basis.setflags(write=False)
        self.basis = basis
        self.pivots = tuple(pivots)
        self._key = (field, ambient, basis.tobytes())

    @classmethod
    def span(cls, field: FieldSpec, vectors, ambient: int | None = None) -> "Subspace":
        m = np.array(vectors, dtype=np.int64)
        if m.ndim == 1:
            if ambient is None:
                ambient = m.size
            m = m.reshape(-1, ambient)
        if ambient is None:
            ambient = m.shape[1]
        if m.shape[1] != ambient:
            raise LinalgError(f"vectors of length {m.shape[1]} in ambient {ambient}")
        if np.any((m < 0) | (m >= field.q)):
            raise LinalgError("entries outside the field")
        red, r, piv = rref(field, m)
        return cls(field, ambient, red[:r], piv)

    @classmethod
    def zero(cls, field: FieldSpec, ambient: int) -> "Subspace":
        return cls(field, ambient, np.zeros((0, ambient), dtype=np.int64), ())

    @classmethod
    def coordinate(cls, field: FieldSpec, ambient: int, axes: Iterable[int]) -> "Subspace":
        axes = sorted(set(axes))
        return cls.span(field, np.eye(ambient, dtype=np.int64)[axes], ambient)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(q={self.field.q}, ambient={self.ambient}, basis={self.basis.tolist()})"

    def _compatible(self, other: "Subspace") -> None:
        if self.field != other.field or self.ambient != other.ambient:
            raise LinalgError("subspaces live in different ambient spaces")

    def member(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        if v.size != self.ambient:
            raise LinalgError(f"vector of length {v.size} in ambient {self.ambient}")
        if not v.any():
            return True
        if self.dim == 0:
            return False
        # reduce v against the canonical basis using its pivot columns
        coeffs = v[list(self.pivots)]
        residual = self.field.sub(v, _combine(self.field, coeffs, self.basis))
        return not np.any(residual)

    def __contains__(self, v) -> bool:
        return self.member(v)

    def contains(self, other: "Subspace") -> bool:
        self._compatible(other)
        return all(self.member(row) for row in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._compatible(other)
        return Subspace.span(self.field, np.vstack([self.basis, other.basis]), self.ambient)

    __add__ = sum

    def intersect_dim(self, other: "Subspace") -> int:
        self._compatible(other)
        stacked = np.vstack([self.basis, other.basis])
        return self.dim + other.dim - rank(self.field, stacked)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection by the Zassenhaus row reduction of [[A, A], [B, 0]]."""
        self._compatible(other)
        m = self.ambient
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, m)
        top = np.hstack([self.basis, self.basis])
        bottom = np.hstack([other.basis, np.zeros_like(other.basis)])
        red, r, _ = rref(self.field, np.vstack([top, bottom]))
        rows = [row[m:] for row in red[:r] if not row[:m].any()]
        if not rows:
            return Subspace.zero(self.field, m)
        return Subspace.span(self.field, np.array(rows), m)

    def transform(self, frame: np.ndarray) -> "Subspace":
        """Image under the row-vector map ``v -> v @ frame``."""
        if self.dim == 0:
            return Subspace.zero(self.field, frame.shape[1])
        return Subspace.span(self.field, matmul(self.field, self.basis, frame), frame.shape[1])

    def vectors(self):
        """Every vector of the subspace, as rows (q^dim of them)."""
        q = self.field.q
        out = []
        for idx in range(q**self.dim):
            coeffs = [(idx // q**k) % q for k in range(self.dim)]
            out.append(_combine(self.field, np.array(coeffs, dtype=np.int64), self.basis))
        return np.array(out, dtype=np.int64).reshape(-1, self.ambient)

    def to_dict(self) -> dict:
        return {"field": self.field.to_dict(), "ambient": self.ambient, "basis": self.basis.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "Subspace":
        f = FieldSpec.from_dict(obj["field"]) if "field" in obj else make_field(2)
        return cls.span(f, np.array(obj["basis"], dtype=np.int64).reshape(-1, obj["ambient"]), obj["ambient"])


def _combine(field: FieldSpec, coeffs: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Linear combination sum_k coeffs[k] * rows[k]."""
    out = np.zeros(rows.shape[1], dtype=np.int64)
    for c, row in zip(coeffs.tolist(), rows):
        if c:
            out = np.asarray(field.add(out, field.mul(c, row)), dtype=np.int64)
    return out


def combine(field: FieldSpec, coeffs, rows) -> np.ndarray:
    return _combine(field, np.asarray(coeffs, dtype=np.int64), np.asarray(rows, dtype=np.int64))


def intersect_dim(a: Subspace, b: Subspace) -> int:
    return a.intersect_dim(b)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def member(s: Subspace, v) -> bool:
    return s.member(v)


def extend_to_basis(independent, within: Subspace) -> np.ndarray:
    """Complete ``independent`` to a basis of ``within``.

    The input rows come first, in order; completion rows are the canonical
    basis rows of ``within`` that keep the set independent, scanned in order.
    """
    f = within.field
    vecs = np.array(independent, dtype=np.int64).reshape(-1, within.ambient)
    if vecs.shape[0] and rank(f, vecs) != vecs.shape[0]:
        raise LinalgError("input vectors are linearly dependent")
    for v in vecs:
        if not within.member(v):
            raise LinalgError(f"vector {v.tolist()} is not in the target subspace")
    out = list(vecs)
    for row in within.basis:
        if len(out) == within.dim:
            break
        trial = np.array(out + [row]).reshape(-1, within.ambient)
        if rank(f, trial) == len(out) + 1:
            out.append(row.copy())
    return np.array(out, dtype=np.int64).reshape(-1, within.ambient)

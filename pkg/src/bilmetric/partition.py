"""{s, t}-partitions of F_q^(s+t) cut out of a Desarguesian spread.

With K = F_{q^t} viewed as an F_q-space and H the span of the first ``s``
power-basis vectors of K, the space H x K is covered by {0} x K together
with the q^t subspaces {(x, a x) : x in H}, a in K.  Every nonzero vector
lies in exactly one of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .bilform import CapExceeded
from .gf import ExtensionField, FieldSpec
from .linalg import Subspace, matmul

DEFAULT_PIECE_CAP = 2**16
DEFAULT_VERIFY_CAP = 2**22


@dataclass(frozen=True)
class STPartition:
    field: FieldSpec
    s_small: int
    t_big: int
    big_piece: Subspace
    small_pieces: tuple[Subspace, ...]
    labels: tuple[int, ...]
    frame: np.ndarray

    @property
    def ambient(self) -> int:
        return self.s_small + self.t_big

    @property
    def pieces(self) -> tuple[Subspace, ...]:
        return (self.big_piece,) + self.small_pieces

    def cardinality_identity(self) -> bool:
        q = self.field.q
        covered = (q**self.big_piece.dim - 1) + sum(q**p.dim - 1 for p in self.small_pieces)
        return covered == q**self.ambient - 1

    def to_dict(self) -> dict:
        return {
            "field": self.field.to_dict(),
            "s_small": self.s_small,
            "t_big": self.t_big,
            "frame": self.frame.tolist(),
            "big_piece": self.big_piece.basis.tolist(),
            "small_pieces": [[a, p.basis.tolist()] for a, p in zip(self.labels, self.small_pieces)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "STPartition":
        f = FieldSpec.from_dict(obj["field"])
        m = obj["s_small"] + obj["t_big"]

        def sub(rows):
            return Subspace.span(f, np.array(rows, dtype=np.int64).reshape(-1, m), m)

        return cls(
            field=f,
            s_small=obj["s_small"],
            t_big=obj["t_big"],
            big_piece=sub(obj["big_piece"]),
            small_pieces=tuple(sub(b) for _, b in obj["small_pieces"]),
            labels=tuple(a for a, _ in obj["small_pieces"]),
            frame=np.array(obj["frame"], dtype=np.int64),
        )


@dataclass(frozen=True)
class PartitionCheck:
    ok: bool
    vector: tuple[int, ...] | None = None
    covering: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def build_partition(
    field: FieldSpec,
    t_big: int,
    s_small: int,
    frame: np.ndarray | None = None,
    cap: int = DEFAULT_PIECE_CAP,
    verify: bool = True,
) -> STPartition:
    """Partition of F_q^(s+t) into one t-space and q^t s-spaces.

    Construction coordinates put the H part first; ``frame`` (row-vector
    convention, default identity) carries them to the returned coordinates.
    """
    if not 1 <= s_small <= t_big:
        raise ValueError(f"need 1 <= s_small <= t_big, got s={s_small}, t={t_big}")
    q = field.q
    if q**t_big > cap:
        raise CapExceeded(f"{q}^{t_big} small pieces exceeds cap {cap}")
    m = s_small + t_big
    frame = np.eye(m, dtype=np.int64) if frame is None else np.asarray(frame, dtype=np.int64)
    if frame.shape != (m, m) or Subspace.span(field, frame, m).dim != m:
        raise ValueError("frame must be an invertible (s+t) x (s+t) matrix")

    ext = ExtensionField(field, t_big)
    big = np.hstack([np.zeros((t_big, s_small), dtype=np.int64), np.eye(t_big, dtype=np.int64)])
    pieces = []
    labels = list(range(ext.order))
    for a in labels:
        mult = ext.mul_matrix(a)
        # row j: (e_j, coordinates of a * x^j)
        rows = np.hstack([np.eye(s_small, dtype=np.int64), mult[:, :s_small].T])
        pieces.append(Subspace.span(field, matmul(field, rows, frame), m))
    part = STPartition(
        field=field,
        s_small=s_small,
        t_big=t_big,
        big_piece=Subspace.span(field, matmul(field, big, frame), m),
        small_pieces=tuple(pieces),
        labels=tuple(labels),
        frame=frame,
    )
    if verify:
        check = verify_partition(part)
        if not check.ok:
            raise AssertionError(f"partition construction failed at {check}")
    return part


def _all_vectors(field: FieldSpec, m: int) -> np.ndarray:
    q = field.q
    idx = np.arange(q**m, dtype=np.int64)
    powers = q ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def _members(piece: Subspace, vectors: np.ndarray) -> np.ndarray:
    """Boolean mask of which rows of ``vectors`` lie in ``piece``."""
    if piece.dim == 0:
        return ~vectors.any(axis=1)
    coeffs = vectors[:, list(piece.pivots)]
    recon = matmul(piece.field, coeffs, piece.basis)
    return (recon == vectors).all(axis=1)


def verify_partition(part: STPartition, cap: int = DEFAULT_VERIFY_CAP) -> PartitionCheck:
    """Check every nonzero ambient vector is covered by exactly one piece."""
    q, m = part.field.q, part.ambient
    if q**m > cap:
        raise CapExceeded(f"{q}^{m} ambient vectors exceeds cap {cap}")
    vectors = _all_vectors(part.field, m)[1:]
    counts = np.zeros(len(vectors), dtype=np.int64)
    for piece in part.pieces:
        counts += _members(piece, vectors)
    bad = np.nonzero(counts != 1)[0]
    if bad.size:
        k = int(bad[0])
        return PartitionCheck(False, tuple(int(c) for c in vectors[k]), int(counts[k]))
    return PartitionCheck(True)

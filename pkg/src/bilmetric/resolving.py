"""Landmark sets for H_q(n, d) from a mixed-dimension partition.

Two regimes:

* ``n >= d + 2``: an {n-1, d+1}-partition {N~, W_1, ..., W_m} with N~ inside N.
  Each block W_i meets N in a line L_i, and the landmarks in W_i are the
  d-subspaces of W_i avoiding L_i.  |M| = q^(n+d-1).
* ``d <= n <= d + 1``: an {n, d}-partition {N, V_1, ..., V_m}; a fixed line
  L of N is added to every V_i to form W_i = L + V_i, and the landmarks in
  W_i are its d-subspaces avoiding L.  |M| = q^(n+d).

:func:`find_separating_landmark` reproduces, pair by pair, the argument
that these landmarks resolve the graph.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bilform import (
    DEFAULT_ENUM_CAP,
    GraphSpec,
    distance,
    rank_table,
    subspace_of,
    vertex_of,
)
from .gf import ExtensionField, FieldSpec
from .linalg import Subspace, combine, extend_to_basis, matmul, rank
from .partition import STPartition, build_partition


class ConstructionError(RuntimeError):
    """An internal consistency check of the construction failed."""


@dataclass(frozen=True)
class Block:
    """One W_i with its excluded line L_i and the frame {l, w_1..w_d} of W_i."""

    label: int
    W: Subspace
    L: Subspace
    frame: np.ndarray  # rows: l, w_1, ..., w_d


@dataclass(frozen=True)
class ConstructionContext:
    case_tag: int
    graph: GraphSpec
    partition: STPartition
    N: Subspace
    anchor: Subspace  # N~ (dim n-1) in the first regime, the fixed line of N in the second
    blocks: tuple[Block, ...]

    def summary(self) -> dict:
        return {
            "case": self.case_tag,
            "q": self.graph.q,
            "n": self.graph.n,
            "d": self.graph.d,
            "blocks": len(self.blocks),
            "block_dim": self.graph.d + 1,
            "anchor_dim": self.anchor.dim,
            "partition": [self.partition.s_small, self.partition.t_big],
        }


@dataclass
class LandmarkSet:
    graph: GraphSpec
    matrices: list[np.ndarray]
    provenance: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.matrices)

    def __getitem__(self, k: int) -> np.ndarray:
        return self.matrices[k]

    @property
    def indices(self) -> list[int]:
        return [self.graph.index(m) for m in self.matrices]

    @classmethod
    def from_indices(cls, graph: GraphSpec, indices: Sequence[int]) -> "LandmarkSet":
        return cls(graph, [graph.vertex(int(i)) for i in indices])

    def without(self, k: int) -> "LandmarkSet":
        prov = self.provenance[:k] + self.provenance[k + 1 :] if self.provenance else []
        return LandmarkSet(self.graph, self.matrices[:k] + self.matrices[k + 1 :], prov)

    def to_dict(self) -> dict:
        g = self.graph
        out = {
            "spec": {"q": g.q, "n": g.n, "d": g.d, "field": g.field.to_dict()},
            "landmarks": [m.tolist() for m in self.matrices],
        }
        if self.provenance:
            out["provenance"] = [{"block": b, "coords": list(c)} for b, c in self.provenance]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "LandmarkSet":
        s = obj["spec"]
        f = FieldSpec.from_dict(s["field"]) if "field" in s else None
        graph = GraphSpec(f, s["n"], s["d"]) if f else GraphSpec.of(s["q"], s["n"], s["d"])
        mats = [np.array(m, dtype=np.int64).reshape(graph.n, graph.d) for m in obj["landmarks"]]
        for m in mats:
            graph.index(m)
        prov = [(p["block"], tuple(p["coords"])) for p in obj.get("provenance", [])]
        return cls(graph, mats, prov)


# -- construction --------------------------------------------------------------


def _permutation(positions: Sequence[int]) -> np.ndarray:
    """Row-vector frame sending construction coordinate c to position[c]."""
    m = len(positions)
    frame = np.zeros((m, m), dtype=np.int64)
    for c, pos in enumerate(positions):
        frame[c, pos] = 1
    return frame


def hyperplane_frame(W: Subspace, L: Subspace) -> np.ndarray:
    if L.dim != 1 or not W.contains(L):
        raise ValueError("L must be a line inside W")
    return extend_to_basis(L.basis, W)


def hyperplanes_avoiding(W: Subspace, L: Subspace, frame: np.ndarray | None = None) -> list[Subspace]:
    """The q^(dim W - 1) hyperplanes of W meeting the line L trivially.

    With W = <l, w_1, ..., w_k>, the hyperplane for c in F_q^k is
    <w_j - c_j l>; c runs lexicographically.
    """
    if frame is None:
        frame = hyperplane_frame(W, L)
    f = W.field
    ell, ws = frame[0], frame[1:]
    out = []
    for c in itertools.product(range(f.q), repeat=len(ws)):
        rows = [f.sub(w, f.mul(cj, ell)) for w, cj in zip(ws, c)]
        out.append(Subspace.span(f, np.array(rows, dtype=np.int64).reshape(len(ws), W.ambient), W.ambient))
    return out


def build_context(spec: GraphSpec) -> ConstructionContext:
    n, d, f = spec.n, spec.d, spec.field
    if not n >= d >= 2:
        raise ValueError(f"construction needs n >= d >= 2, got n={n}, d={d}")
    m = n + d
    N_std = spec.N
    if n >= d + 2:
        # construction coords: H (d+1) then K (n-1); h0 -> e_0, K -> e_1..e_{n-1}
        positions = [0] + list(range(n, m)) + list(range(1, n))
        frame = _permutation(positions)
        part = build_partition(f, t_big=n - 1, s_small=d + 1, frame=frame)
        ext = ExtensionField(f, n - 1)
        anchor = part.big_piece
        h0 = np.zeros(m, dtype=np.int64)
        h0[0] = 1
        N = anchor.sum(Subspace.span(f, h0, m))
        blocks = []
        for a, W in zip(part.labels, part.small_pieces):
            L = W.intersect(N)
            if L.dim != 1:
                raise ConstructionError(f"W_{a} meets N in dimension {L.dim}")
            # closed form: the image of (h0, a*h0) in standard coordinates
            raw = np.zeros((1, m), dtype=np.int64)
            raw[0, 0] = 1
            raw[0, d + 1 :] = ext.mul_matrix(a)[:, 0]
            closed = Subspace.span(f, matmul(f, raw, frame), m)
            if closed != L:
                raise ConstructionError(f"N_{a} disagrees with its closed form")
            blocks.append(Block(a, W, L, hyperplane_frame(W, L)))
        case = 1
    else:
        # construction coords: H (d) then K (n); K -> e_0..e_{n-1}
        positions = list(range(n, m)) + list(range(n))
        frame = _permutation(positions)
        part = build_partition(f, t_big=n, s_small=d, frame=frame)
        N = part.big_piece
        anchor = Subspace.span(f, N.basis[0], m)
        blocks = []
        for a, V in zip(part.labels, part.small_pieces):
            W = anchor.sum(V)
            if W.dim != d + 1:
                raise ConstructionError(f"W_{a} has dimension {W.dim}")
            blocks.append(Block(a, W, anchor, hyperplane_frame(W, anchor)))
        case = 2
    if N != N_std:
        raise ConstructionError("frame does not carry N onto the first n coordinates")
    return ConstructionContext(case, spec, part, N, anchor, tuple(blocks))


def build_landmarks(spec: GraphSpec, cap: int = 2**20) -> tuple[LandmarkSet, ConstructionContext]:
    """Construct the landmark family and the frame data used to build it."""
    expected = theorem_size(spec)
    if expected > cap:
        raise ValueError(f"{expected} landmarks exceeds cap {cap}")
    ctx = build_context(spec)
    mats, prov = [], []
    for bi, block in enumerate(ctx.blocks):
        coords = itertools.product(range(spec.q), repeat=spec.d)
        for c, U in zip(coords, hyperplanes_avoiding(block.W, block.L, block.frame)):
            if U.intersect_dim(ctx.N) != 0:
                raise ConstructionError(f"landmark in block {bi} meets N")
            mats.append(vertex_of(spec, U))
            prov.append((bi, tuple(c)))
    if len(mats) != expected:
        raise ConstructionError(f"built {len(mats)} landmarks, expected {expected}")
    return LandmarkSet(spec, mats, prov), ctx


def theorem_size(spec: GraphSpec) -> int:
    q, n, d = spec.q, spec.n, spec.d
    return q ** (n + d - 1) if n >= d + 2 else q ** (n + d)


# -- signatures and verification -------------------------------------------------


def signature(spec: GraphSpec, v, M: LandmarkSet) -> np.ndarray:
    """Distances from ``v`` to each landmark, in landmark order."""
    return np.array([distance(spec, v, lm) for lm in M.matrices], dtype=np.int64)


@dataclass
class Certificate:
    resolving: bool
    counterexample: tuple[int, int] | None
    q: int
    n: int
    d: int
    landmarks: int
    stats: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        out = {
            "resolving": self.resolving,
            "spec": {"q": self.q, "n": self.n, "d": self.d},
            "landmarks": self.landmarks,
        }
        if self.counterexample is not None:
            out["counterexample"] = list(self.counterexample)
        return out

    def to_dict(self, canonical: bool = False) -> dict:
        out = self.canonical()
        if not canonical:
            out["stats"] = self.stats
        return out

    def to_json(self, canonical: bool = False) -> str:
        return json.dumps(self.to_dict(canonical), sort_keys=True, indent=2) + "\n"


def _signature_chunk(spec: GraphSpec, landmark_idx: Sequence[int], start: int, stop: int, cap: int) -> np.ndarray:
    table = rank_table(spec, cap)
    idx = np.arange(start, stop, dtype=np.int64)
    sig = np.empty((stop - start, len(landmark_idx)), dtype=np.uint8)
    for k, lm in enumerate(landmark_idx):
        sig[:, k] = table[spec.difference_indices(idx, lm)]
    return _pack(sig, max(1, spec.diameter.bit_length()))


def _pack(sig: np.ndarray, bits: int) -> np.ndarray:
    """Pack each signature row into bytes, ``bits`` bits per entry."""
    planes = np.unpackbits(sig[:, :, None], axis=2)[:, :, 8 - bits :]
    return np.packbits(planes.reshape(sig.shape[0], -1), axis=1)


def first_collision(packed: np.ndarray) -> tuple[int, int] | None:
    """Smallest-signature colliding pair after a stable lexicographic sort."""
    rows = packed.shape[0]
    if rows < 2:
        return None
    if packed.shape[1] == 0:
        return (0, 1)
    order = np.lexsort(packed.T[::-1])
    s = packed[order]
    same = (s[1:] == s[:-1]).all(axis=1)
    hits = np.nonzero(same)[0]
    if hits.size == 0:
        return None
    j = int(hits[0])
    return int(order[j]), int(order[j + 1])


def verify_resolving(
    M: LandmarkSet,
    spec: GraphSpec | None = None,
    workers: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
    chunk: int = 1 << 15,
) -> Certificate:
    """Exhaustively decide whether ``M`` resolves the graph."""
    spec = spec or M.graph
    spec.check_cap(cap)
    t0 = time.perf_counter()
    lms = M.indices
    total = spec.num_vertices
    ranges = [(s, min(total, s + chunk)) for s in range(0, total, chunk)]
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_signature_chunk, *zip(*[(spec, lms, a, b, cap) for a, b in ranges])))
    else:
        parts = [_signature_chunk(spec, lms, a, b, cap) for a, b in ranges]
    packed = np.concatenate(parts, axis=0)
    pair = first_collision(packed)
    stats = {
        "vertices_checked": total,
        "wall_time_s": round(time.perf_counter() - t0, 6),
        "workers": workers,
    }
    return Certificate(pair is None, pair, spec.q, spec.n, spec.d, len(lms), stats)


# -- separating witnesses ----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    position: int  # index into the landmark list
    block: int
    coords: tuple[int, ...]
    landmark: np.ndarray
    dims: tuple[int, int]  # (dim(A & U), dim(B & U)) in the caller's order
    branch: str  # "1.1", "1.2.1" or "1.2.2"
    theta: np.ndarray
    alpha: np.ndarray | None
    subspace: Subspace


def _landmark_coords(block: Block, U: Subspace) -> tuple[int, ...]:
    f = U.field
    ell = block.frame[0]
    coords = []
    for w in block.frame[1:]:
        for c in range(f.q):
            if U.member(f.sub(w, f.mul(c, ell))):
                coords.append(c)
                break
        else:
            raise ConstructionError("hyperplane is not of the landmark form")
    return tuple(coords)


def find_separating_landmark(A, B, ctx: ConstructionContext) -> Witness:
    """Pick a landmark U with dim(A & U) != dim(B & U), following the proof.

    Raises ``ValueError`` if A == B and ``ConstructionError`` if any step of
    the argument fails to hold.
    """
    spec = ctx.graph
    f = spec.field
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if np.array_equal(A, B):
        raise ValueError("A and B are the same vertex")
    SA, SB = subspace_of(spec, A), subspace_of(spec, B)

    for bi, block in enumerate(ctx.blocks):
        Ai, Bi = SA.intersect(block.W), SB.intersect(block.W)
        if Ai != Bi:
            break
    else:
        raise ConstructionError("A and B agree on every block")

    swapped = Ai.dim > Bi.dim
    if swapped:
        Ai, Bi = Bi, Ai
    W = block.W
    theta = block.L.basis[0]
    betas = Bi.basis
    t = Bi.dim
    alpha = None
    if Ai.dim < t:
        branch = "1.1"
        basis = extend_to_basis(np.vstack([theta, betas]), W)
        gens = basis[1:]
    else:
        alpha = next(row for row in Ai.basis if not Bi.member(row))
        with_alpha = np.vstack([alpha, theta, betas])
        if rank(f, with_alpha) == t + 1:
            branch = "1.2.1"
            basis = extend_to_basis(np.vstack([theta, betas]), W)
            gens = basis[1:]
        else:
            branch = "1.2.2"
            basis = extend_to_basis(with_alpha, W)
            gens = np.vstack([combine(f, [1, 1], [alpha, theta]), basis[2:]])
    U = Subspace.span(f, gens, W.ambient)

    if U.dim != spec.d or not W.contains(U) or U.member(theta):
        raise ConstructionError(f"branch {branch} produced an invalid hyperplane")
    if alpha is not None and U.member(alpha):
        raise ConstructionError("alpha lies in U")
    dA, dB = SA.intersect_dim(U), SB.intersect_dim(U)
    if dA == dB:
        raise ConstructionError(f"branch {branch} failed to separate the pair")

    coords = _landmark_coords(block, U)
    pos = 0
    for c in coords:
        pos = pos * spec.q + c
    pos += bi * spec.q**spec.d
    return Witness(
        position=pos,
        block=bi,
        coords=coords,
        landmark=vertex_of(spec, U),
        dims=(dA, dB),
        branch=branch,
        theta=theta.copy(),
        alpha=None if alpha is None else alpha.copy(),
        subspace=U,
    )

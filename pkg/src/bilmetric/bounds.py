"""Upper bounds on the metric dimension of H_q(n, d) and small-case baselines.

``theorem_bound`` is the size of the constructed landmark family.  The two
comparison bounds come from Babai's results on primitive distance-regular
graphs and are only evaluated here, not derived.  ``log_base`` is a tag:
``"e"`` (default), ``"2"``, ``"10"`` or any positive number as a string.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .bilform import GraphSpec, distance_matrix
from .qbinom import gaussian, gl_count

__all__ = [
    "gaussian",
    "gl_count",
    "theorem_bound",
    "babai_general",
    "babai_strong",
    "babai_M",
    "greedy_resolving",
    "greedy_landmarks",
    "exact_min_resolving",
    "min_resolving_set",
    "compare_report",
    "BoundsRow",
    "DEFAULT_GRID",
    "bounds_row",
    "report_csv",
    "report_json",
]


def _log(x_exponent: float, q: int, log_base: str) -> float:
    """log of q^x_exponent in the requested base, without forming q^x."""
    ln = x_exponent * math.log(q)
    if log_base == "e":
        return ln
    b = float(log_base)
    if b <= 0 or b == 1:
        raise ValueError(f"invalid log base {log_base!r}")
    return ln / math.log(b)


def theorem_bound(q: int, n: int, d: int) -> int:
    if d < 2 or n < d:
        raise ValueError(f"bound stated for n >= d >= 2, got n={n}, d={d}")
    return q ** (n + d - 1) if n >= d + 2 else q ** (n + d)


def babai_general(q: int, n: int, d: int, log_base: str = "e") -> float:
    """4 sqrt(v) log(v) with v = q^(nd)."""
    nd = n * d
    return 4.0 * q ** (nd / 2) * _log(nd, q, log_base)


def babai_M(q: int, n: int, d: int) -> int:
    """max over i of [n,i]_q [d,i]_q |GL(i,q)|, i.e. the largest rank class."""
    return max(gaussian(n, i, q) * gaussian(d, i, q) * gl_count(i, q) for i in range(min(n, d) + 1))


def babai_strong(q: int, n: int, d: int, log_base: str = "e") -> tuple[float, int]:
    """2d * v/(v - M) * log(v) with v = q^(nd); returns (bound, M)."""
    v = q ** (n * d)
    M = babai_M(q, n, d)
    if M >= v:
        raise ValueError("M must be smaller than the vertex count")
    ratio = Fraction(v, v - M)
    return 2 * d * float(ratio) * _log(n * d, q, log_base), M


# -- baselines -------------------------------------------------------------------


def _pair_count(labels: np.ndarray) -> int:
    counts = np.bincount(labels)
    return int((counts * (counts - 1) // 2).sum())


def greedy_landmarks(dist: np.ndarray) -> list[int]:
    """Greedy resolving set for a distance matrix.

    Each step adds the vertex that splits the most still-unresolved pairs,
    breaking ties by the smallest index.
    """
    dist = np.asarray(dist, dtype=np.int64)
    V = dist.shape[0]
    labels = np.zeros(V, dtype=np.int64)
    width = int(dist.max(initial=0)) + 1
    chosen: list[int] = []
    while _pair_count(labels) > 0:
        keys = labels[:, None] * width + dist
        remaining = np.array([_pair_count(np.unique(keys[:, w], return_inverse=True)[1]) for w in range(V)])
        w = int(np.argmin(remaining))
        chosen.append(w)
        labels = np.unique(keys[:, w], return_inverse=True)[1]
    return chosen


def greedy_resolving(spec: GraphSpec, cap: int = 2**12):
    from .resolving import LandmarkSet

    return LandmarkSet.from_indices(spec, greedy_landmarks(distance_matrix(spec, cap)))


def min_resolving_set(dist: np.ndarray, k_max: int, anchor: int | None = None) -> list[int] | None:
    """A smallest resolving set of size <= k_max, or None.

    Depth-first search that branches on the vertices separating the first
    unresolved pair; once a separator has been tried it is excluded from the
    later sibling branches, so each set is visited once.  A branch is cut when
    its largest class cannot be split into singletons by the landmarks left.
    For a vertex-transitive graph, ``anchor`` may be fixed as a member.
    """
    dist = np.asarray(dist, dtype=np.int64)
    V = dist.shape[0]
    width = int(dist.max(initial=0)) + 1

    def refine(labels, w):
        return np.unique(labels * width + dist[:, w], return_inverse=True)[1]

    def search(labels, chosen, banned, left):
        counts = np.bincount(labels)
        biggest = int(counts.max())
        if biggest <= 1:
            return chosen
        if left == 0 or biggest > width**left:
            return None
        cls = int(np.argmax(counts >= 2))
        u, v = np.nonzero(labels == cls)[0][:2]
        banned = set(banned)
        for w in np.nonzero(dist[u] != dist[v])[0].tolist():
            if w in banned:
                continue
            found = search(refine(labels, w), chosen + [w], banned, left - 1)
            if found is not None:
                return found
            banned.add(w)
        return None

    start = np.zeros(V, dtype=np.int64)
    chosen: list[int] = []
    if anchor is not None and V > 1:
        start, chosen = refine(start, anchor), [anchor]
    for k in range(len(chosen), k_max + 1):
        found = search(start, chosen, (), k - len(chosen))
        if found is not None:
            return found
    return None


def exact_min_resolving(spec: GraphSpec, k_max: int, cap: int = 128) -> int | None:
    spec.check_cap(cap)
    # translations f -> f - g are automorphisms, so some minimum set contains 0
    found = min_resolving_set(distance_matrix(spec, cap), k_max, anchor=0)
    return None if found is None else len(found)


# -- comparison report -------------------------------------------------------------

DEFAULT_GRID: tuple[tuple[int, int, int], ...] = tuple(
    (q, n, d) for q in (2, 3) for n in range(2, 7) for d in range(2, n + 1)
)

CSV_COLUMNS = [
    "q",
    "n",
    "d",
    "theorem_bound",
    "babai_general",
    "babai_strong",
    "babai_M",
    "log_base",
    "greedy_size",
    "exact_min",
    "best",
]


@dataclass
class BoundsRow:
    q: int
    n: int
    d: int
    theorem_bound: int
    babai_general: float
    babai_strong: float
    babai_M: int
    log_base: str
    greedy_size: int | None = None
    exact_min: int | None = None
    best: str = ""
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def bounds_row(q: int, n: int, d: int, log_base: str = "e", baselines: bool = False) -> BoundsRow:
    """One comparison row; (n, d) with n < d is swapped, the graphs being isomorphic."""
    if n < d:
        n, d = d, n
    thm = theorem_bound(q, n, d)
    gen = babai_general(q, n, d, log_base)
    strong, M = babai_strong(q, n, d, log_base)
    values = {"theorem": thm, "babai_general": gen, "babai_strong": strong}
    best = min(values, key=lambda k: (values[k], k != "theorem"))
    row = BoundsRow(
        q, n, d, thm, gen, strong, M, log_base, best=best,
        flags={"theorem_beats_general": thm < gen, "theorem_beats_strong": thm < strong},
    )
    if baselines:
        spec = GraphSpec.of(q, n, d)
        if spec.num_vertices <= 2**12:
            row.greedy_size = len(greedy_resolving(spec))
        if spec.num_vertices <= 16:
            row.exact_min = exact_min_resolving(spec, k_max=thm)
    return row


def compare_report(
    grid: Iterable[Sequence[int]] = DEFAULT_GRID, log_base: str = "e", baselines: bool = False
) -> list[BoundsRow]:
    return [bounds_row(int(q), int(n), int(d), log_base, baselines) for q, n, d in grid]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_csv(rows: Sequence[BoundsRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        d = r.to_dict()
        w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def report_json(rows: Sequence[BoundsRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], sort_keys=True, indent=2) + "\n"

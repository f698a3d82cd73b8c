"""Quick invariant checks run by ``bilmetric selftest``."""

from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from .bilform import GraphSpec, distance, subspace_of
from .gf import ExtensionField, make_field
from .linalg import Subspace, matmul, rref
from .partition import build_partition, verify_partition


def check_fields() -> bool:
    for p, e in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4)]:
        f = make_field(p, e)
        els = range(f.q)
        for a, b in itertools.product(els, repeat=2):
            if f.add(a, b) != f.add(b, a) or f.mul(a, b) != f.mul(b, a):
                return False
            for c in els:
                if f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)):
                    return False
        if any(f.mul(a, f.inv(a)) != 1 for a in range(1, f.q)):
            return False
    ext = ExtensionField(make_field(2), 3)
    for a, b in itertools.product(range(ext.order), repeat=2):
        lhs = ext.mul_matrix(ext.mul(a, b))
        rhs = (ext.mul_matrix(a) @ ext.mul_matrix(b)) % 2
        if not np.array_equal(lhs, rhs):
            return False
    return True


def check_linalg(seed: int = 0) -> bool:
    rng = np.random.default_rng(seed)
    for q in (2, 3, 4):
        f = make_field(*{2: (2, 1), 3: (3, 1), 4: (2, 2)}[q])
        for _ in range(40):
            m = rng.integers(0, q, size=(4, 6))
            red, r, _ = rref(f, m)
            if not np.array_equal(rref(f, red)[0], red):
                return False
            s = Subspace.span(f, m, 6)
            mix = rng.integers(0, q, size=(5, 4))
            if Subspace.span(f, np.vstack([matmul(f, mix, m), m]), 6) != s:
                return False
            t = Subspace.span(f, rng.integers(0, q, size=(3, 6)), 6)
            if s.sum(t).dim + s.intersect_dim(t) != s.dim + t.dim:
                return False
            if s.intersect(t).dim != s.intersect_dim(t):
                return False
    return True


def check_partitions() -> bool:
    for q, t, s in [(2, 1, 1), (2, 3, 3), (2, 4, 3), (3, 2, 2)]:
        part = build_partition(make_field(q), t, s, verify=False)
        if not verify_partition(part).ok or not part.cardinality_identity():
            return False
    return True


def check_distance_oracle(seed: int = 0, samples: int = 500) -> bool:
    rng = np.random.default_rng(seed)
    for q, n, d in [(2, 2, 2), (2, 4, 2), (3, 2, 2)]:
        g = GraphSpec.of(q, n, d)
        for _ in range(samples):
            u, v = (g.vertex(int(x)) for x in rng.integers(0, g.num_vertices, size=2))
            if distance(g, u, v) != d - subspace_of(g, u).intersect_dim(subspace_of(g, v)):
                return False
    return True


SUITES: dict[str, Callable[[], bool]] = {
    "field": check_fields,
    "linalg": check_linalg,
    "partition": check_partitions,
    "distance": check_distance_oracle,
}


def run_all() -> dict[str, bool]:
    return {name: fn() for name, fn in SUITES.items()}

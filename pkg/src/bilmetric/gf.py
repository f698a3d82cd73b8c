"""Finite fields F_q, q = p^e, with elements stored as integer codes.

An element code is the integer whose base-p digits are the coefficients of
the residue polynomial, lowest degree first.  ``ExtensionField`` applies the
same encoding one level up (base-q digits over a :class:`FieldSpec`) and is
what the partition construction uses to realise F_{q^t} as an F_q-space.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_FIELD_ORDER = 2**16
TABLE_LIMIT = 2**8


class FieldError(ValueError):
    """Raised for invalid field parameters or mixed-field arithmetic."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


# -- polynomial helpers over an abstract coefficient ring -------------------
#
# Polynomials are lists of coefficient codes, lowest degree first.  ``ops`` is
# any object with scalar ``add``, ``sub``, ``mul`` and an ``inv`` for nonzero
# codes; both FieldSpec and a bare prime field satisfy this.


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, ops):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = ops.add(out[i + j], ops.mul(x, y))
    return _trim(out)


def _poly_rem(a, m, ops):
    """Remainder of ``a`` modulo a monic polynomial ``m``."""
    a = _trim(list(a))
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for j, c in enumerate(m):
            if c:
                a[shift + j] = ops.sub(a[shift + j], ops.mul(lead, c))
        _trim(a)
    return a


def _monic_polys(degree: int, q: int):
    """Monic polynomials of ``degree``, lexicographic in (c0, c1, ...)."""
    for coeffs in itertools.product(range(q), repeat=degree):
        yield list(coeffs) + [1]


def _is_irreducible(m, q: int, ops) -> bool:
    deg = len(m) - 1
    for k in range(1, deg // 2 + 1):
        for g in _monic_polys(k, q):
            if not _poly_rem(m, g, ops):
                return False
    return True


def _smallest_irreducible(degree: int, q: int, ops) -> tuple[int, ...]:
    for m in _monic_polys(degree, q):
        if _is_irreducible(m, q, ops):
            return tuple(m)
    raise FieldError(f"no irreducible polynomial of degree {degree}")  # unreachable


def _digits(code: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        code, r = divmod(code, base)
        out.append(r)
    return out


def _undigits(digits, base: int) -> int:
    code = 0
    for c in reversed(digits):
        code = code * base + c
    return code


class _PrimeOps:
    def __init__(self, p: int):
        self.p = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The field F_{p^e} = F_p[x] / (modulus)."""

    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={list(self.modulus)})"

    # -- scalar arithmetic ---------------------------------------------------

    @cached_property
    def _prime(self) -> _PrimeOps:
        return _PrimeOps(self.p)

    def _check(self, *codes):
        for c in codes:
            if not 0 <= c < self.q:
                raise FieldError(f"code {c} is not an element of GF({self.q})")

    def _poly_add(self, a: int, b: int, sign: int) -> int:
        da = _digits(a, self.p, self.e)
        db = _digits(b, self.p, self.e)
        return _undigits([(x + sign * y) % self.p for x, y in zip(da, db)], self.p)

    def _poly_mulmod(self, a: int, b: int) -> int:
        prod = _poly_mul(_trim(_digits(a, self.p, self.e)), _trim(_digits(b, self.p, self.e)), self._prime)
        r = _poly_rem(prod, self.modulus, self._prime)
        return _undigits(r, self.p)

    def _scalar_add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        return self._poly_add(a, b, 1)

    def _scalar_sub(self, a, b):
        if self.e == 1:
            return (a - b) % self.p
        return self._poly_add(a, b, -1)

    def _scalar_mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        return self._poly_mulmod(a, b)

    def _scalar_inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        # a^(q-2) by square-and-multiply
        result, base, k = 1, a, self.q - 2
        while k:
            if k & 1:
                result = self._scalar_mul(result, base)
            base = self._scalar_mul(base, base)
            k >>= 1
        return result

    # -- tables --------------------------------------------------------------

    @property
    def has_tables(self) -> bool:
        return self.q <= TABLE_LIMIT

    @cached_property
    def tables(self) -> dict[str, np.ndarray]:
        """Full add/sub/mul tables and neg/inv vectors (only for q <= 256)."""
        if not self.has_tables:
            raise FieldError("tables are only built for q <= 256")
        q = self.q
        r = np.arange(q)
        if self.e == 1:
            add = (r[:, None] + r[None, :]) % q
            sub = (r[:, None] - r[None, :]) % q
            mul = (r[:, None] * r[None, :]) % q
        else:
            add = np.array([[self._scalar_add(a, b) for b in r] for a in r])
            sub = np.array([[self._scalar_sub(a, b) for b in r] for a in r])
            mul = np.array([[self._scalar_mul(a, b) for b in r] for a in r])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        dt = np.uint8 if q <= 256 else np.int64
        out = {
            "add": add.astype(dt),
            "sub": sub.astype(dt),
            "mul": mul.astype(dt),
            "neg": sub[0].astype(dt),
            "inv": inv.astype(dt),
        }
        for t in out.values():
            t.setflags(write=False)
        return out

    # -- public arithmetic (scalars or integer arrays) -------------------------

    def _apply(self, name, scalar, a, b=None):
        if self.has_tables:
            t = self.tables[name]
            res = t[a] if b is None else t[a, b]
            return int(res) if np.ndim(res) == 0 else res.astype(np.int64)
        if self.e == 1:
            if b is None:
                return scalar(a)
            res = scalar(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            return int(res) if np.ndim(res) == 0 else res
        if np.ndim(a) == 0 and (b is None or np.ndim(b) == 0):
            return scalar(int(a)) if b is None else scalar(int(a), int(b))
        f = np.vectorize(scalar, otypes=[np.int64])
        return f(a) if b is None else f(a, b)

    def add(self, a, b):
        return self._apply("add", self._scalar_add, a, b)

    def sub(self, a, b):
        return self._apply("sub", self._scalar_sub, a, b)

    def mul(self, a, b):
        return self._apply("mul", self._scalar_mul, a, b)

    def neg(self, a):
        return self._apply("neg", lambda x: self._scalar_sub(0, x), a)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._apply("inv", self._scalar_inv, a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def arith(self, a: int, b: int, op: str) -> int:
        """Scalar ``a op b`` for ``op`` in add, sub, mul, div."""
        self._check(a, b)
        try:
            fn = {"add": self.add, "sub": self.sub, "mul": self.mul, "div": self.div}[op]
        except KeyError:
            raise FieldError(f"unknown operation {op!r}") from None
        return int(fn(a, b))

    def elements(self) -> range:
        return range(self.q)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "FieldSpec":
        f = make_field(int(obj["p"]), int(obj["e"]))
        if list(f.modulus) != [int(c) for c in obj["modulus"]]:
            mod = tuple(int(c) for c in obj["modulus"])
            _validate_modulus(f.p, f.e, mod)
            f = FieldSpec(f.p, f.e, mod)
        return f


def _validate_modulus(p: int, e: int, modulus: tuple[int, ...]) -> None:
    if len(modulus) != e + 1 or modulus[-1] != 1 or any(not 0 <= c < p for c in modulus):
        raise FieldError(f"modulus {modulus} is not monic of degree {e} over F_{p}")
    if e > 1 and not _is_irreducible(list(modulus), p, _PrimeOps(p)):
        raise FieldError(f"modulus {modulus} is reducible over F_{p}")


_FIELDS: dict[tuple[int, int], FieldSpec] = {}


def make_field(p: int, e: int = 1, max_order: int = MAX_FIELD_ORDER) -> FieldSpec:
    """Return F_{p^e} with the lexicographically smallest monic irreducible modulus.

    Fields are cached, so repeated calls share multiplication tables.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if p**e > max_order:
        raise FieldError(f"q = {p}^{e} exceeds the bound {max_order}")
    key = (p, e)
    if key not in _FIELDS:
        if e == 1:
            modulus = (0, 1)
        else:
            modulus = _smallest_irreducible(e, p, _PrimeOps(p))
        _FIELDS[key] = FieldSpec(p, e, modulus)
    return _FIELDS[key]


def field_of_order(q: int) -> FieldSpec:
    """Field with ``q`` elements; ``q`` must be a prime power."""
    if q < 2:
        raise FieldError(f"no field of order {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1 or not is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return make_field(p, e)


class ExtensionField:
    """F_{q^t} presented as F_q[x]/(g) over a base field F_q.

    Element codes use base-q digits; digit j is the F_q code of the x^j
    coefficient, so the code's digit vector is the element's coordinate
    vector in the power basis {1, x, ..., x^(t-1)}.
    """

    def __init__(self, base: FieldSpec, degree: int, max_order: int = 2**20):
        if degree < 1:
            raise FieldError("extension degree must be >= 1")
        if base.q**degree > max_order:
            raise FieldError(f"extension of order {base.q}^{degree} is too large")
        self.base = base
        self.degree = degree
        self.modulus = _smallest_irreducible(degree, base.q, _BaseOps(base))

    @property
    def order(self) -> int:
        return self.base.q**self.degree

    def coords(self, a: int) -> list[int]:
        return _digits(a, self.base.q, self.degree)

    def from_coords(self, coords) -> int:
        return _undigits([int(c) for c in coords], self.base.q)

    def add(self, a: int, b: int) -> int:
        ca, cb = self.coords(a), self.coords(b)
        return self.from_coords([self.base.add(x, y) for x, y in zip(ca, cb)])

    def mul(self, a: int, b: int) -> int:
        ops = _BaseOps(self.base)
        prod = _poly_mul(_trim(self.coords(a)), _trim(self.coords(b)), ops)
        return self.from_coords(_poly_rem(prod, self.modulus, ops) + [0] * self.degree)

    def mul_matrix(self, alpha: int) -> np.ndarray:
        """Matrix over F_q of ``x -> alpha * x`` in the power basis.

        Column j holds the coordinates of ``alpha * x^j``, so the matrix acts
        on coordinate column vectors.
        """
        if not 0 <= alpha < self.order:
            raise FieldError(f"{alpha} is not an element of this extension")
        t = self.degree
        m = np.zeros((t, t), dtype=np.int64)
        for j in range(t):
            basis_j = self.base.q**j
            m[:, j] = self.coords(self.mul(alpha, basis_j))
        return m


class _BaseOps:
    def __init__(self, f: FieldSpec):
        self.add = f._scalar_add
        self.sub = f._scalar_sub
        self.mul = f._scalar_mul
        self.inv = f._scalar_inv


def mul_matrix(alpha: int, ext: ExtensionField) -> np.ndarray:
    return ext.mul_matrix(alpha)

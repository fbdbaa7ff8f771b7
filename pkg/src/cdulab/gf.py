"""Construction of GF(p^m) and exact table-driven arithmetic.

Every field element is an integer index in [0, q).  The base-p digits of
the index, least significant digit first, are the coefficients of the
residue polynomial: index 0 is the zero element, index 1 the one element,
index p the class of x.  For p = 2 addition of indices is plain XOR.

Canonical choices, fixed so that results reproduce bit-for-bit:

  * modulus: the lexicographically smallest monic irreducible of degree m,
    comparing coefficient vectors as base-p integers, constant term first;
  * primitive element w: the generator of the multiplicative group with
    the smallest index.

Multiplication, inversion and powering run on dense log/antilog tables, so
a field costs O(q) memory and the order is capped at 2^20.  Towers are not
separate objects: the subfield of order p^s inside GF(p^m) is the fixed
set of x -> x^(p^s), and all subfield-related operations test exactly
that.

Element literals, used by the CLI and report formats:

  * ``0``            the zero element;
  * ``w^k`` or ``w`` a power of the canonical primitive element;
  * ``[d0,d1,...]``  base-p digits, low degree first;
  * a plain integer  the element index itself;
  * any of the above with a leading ``-`` for the additive inverse.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BadDivisorError,
    BadTowerError,
    DivisionByZeroError,
    FieldMismatchError,
    FieldTooLargeError,
    NonPrimeError,
    ZeroElementError,
)

MAX_ORDER = 1 << 20

# dense q x q addition tables are cached below this order (odd p only)
_ADD_TABLE_MAX = 2048

# antilog tables are filled in blocks of this width via matrix powers
_EXP_BLOCK = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, by trial division."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n, sorted."""
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


# ---------------------------------------------------------------------------
# construction-time polynomial arithmetic over F_p (digit lists, low first)
# ---------------------------------------------------------------------------

def _digits(value: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(value % p)
        value //= p
    return out


def _poly_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num by monic den; returns a (possibly shorter) digit list."""
    rem = list(num)
    dd = len(den) - 1
    for k in range(len(rem) - 1, dd - 1, -1):
        c = rem[k] % p
        if c:
            for j in range(dd + 1):
                rem[k - dd + j] = (rem[k - dd + j] - c * den[j]) % p
    del rem[dd:]
    return rem


def _poly_is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(poly)/2."""
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for t in range(p**d):
            den = _digits(t, p, d) + [1]
            if not any(_poly_mod(list(poly), den, p)):
                return False
    return True


def _canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    for t in range(p**m):
        cand = _digits(t, p, m) + [1]
        if _poly_is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


def _mul_indices(a: int, b: int, p: int, modulus: Sequence[int]) -> int:
    """Table-free product of two element indices (construction time only)."""
    m = len(modulus) - 1
    da = _digits(a, p, m)
    db = _digits(b, p, m)
    conv = [0] * (2 * m - 1)
    for i, ca in enumerate(da):
        if ca:
            for j, cb in enumerate(db):
                conv[i + j] = (conv[i + j] + ca * cb) % p
    rem = _poly_mod(conv, list(modulus), p)
    idx = 0
    for c in reversed(rem):
        idx = idx * p + c
    return idx


def _pow_index(a: int, e: int, p: int, modulus: Sequence[int]) -> int:
    result = 1
    base = a
    while e:
        if e & 1:
            result = _mul_indices(result, base, p, modulus)
        base = _mul_indices(base, base, p, modulus)
        e >>= 1
    return result


def _matpow_mod(mat: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.eye(mat.shape[0], dtype=np.int64)
    base = mat % p
    while e:
        if e & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# the field itself
# ---------------------------------------------------------------------------

class Field:
    """A fully materialized GF(p^m); immutable once constructed."""

    def __init__(self, p: int, m: int):
        if not is_prime(p):
            raise NonPrimeError(f"characteristic {p} is not prime")
        if m < 1:
            raise NonPrimeError(f"extension degree must be >= 1, got {m}")
        q = p**m
        if q > MAX_ORDER:
            raise FieldTooLargeError(f"p^m = {q} exceeds the cap {MAX_ORDER}")
        self.p = p
        self.m = m
        self.q = q
        self.modulus = _canonical_modulus(p, m)
        self.primitive = self._find_generator()
        self._build_log_tables()
        if p != 2:
            self._build_neg_table()
        else:
            self._neg_table = None
        self._arange = np.arange(q, dtype=np.int64)
        self._add_table: np.ndarray | None = None
        self._lanes: tuple | None = None

    # -- construction helpers ------------------------------------------

    def _find_generator(self) -> int:
        q1 = self.q - 1
        checks = [q1 // r for r in prime_factors(q1)]
        for g in range(1, self.q):
            if all(_pow_index(g, e, self.p, self.modulus) != 1 for e in checks):
                return g
        raise AssertionError("no generator found")  # unreachable

    def _build_log_tables(self) -> None:
        p, m, q = self.p, self.m, self.q
        q1 = q - 1
        exp = np.empty(q1, dtype=np.int64)
        if m == 1:
            cur = 1
            for k in range(q1):
                exp[k] = cur
                cur = cur * self.primitive % p
        else:
            # multiplication by w is F_p-linear; fill the table in blocks,
            # advancing a whole block with one matrix product
            mat = np.empty((m, m), dtype=np.int64)
            for j in range(m):
                mat[:, j] = _digits(
                    _mul_indices(self.primitive, p**j, p, self.modulus), p, m
                )
            powers = p ** np.arange(m, dtype=np.int64)
            width = min(_EXP_BLOCK, q1)
            block = np.zeros((m, width), dtype=np.int64)
            block[0, 0] = 1
            for k in range(1, width):
                block[:, k] = (mat @ block[:, k - 1]) % p
            exp[:width] = powers @ block
            filled = width
            if filled < q1:
                step = _matpow_mod(mat, width, p)
                while filled < q1:
                    block = (step @ block) % p
                    take = min(width, q1 - filled)
                    exp[filled : filled + take] = powers @ block[:, :take]
                    filled += take
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q1, dtype=np.int64)
        assert log[0] == -1 and (log[1:] >= 0).all()
        exp.setflags(write=False)
        log.setflags(write=False)
        self.exp = exp
        self.log = log

    def _build_neg_table(self) -> None:
        idx = np.arange(self.q, dtype=np.int64)
        neg = np.zeros(self.q, dtype=np.int64)
        pe = 1
        for _ in range(self.m):
            neg += ((self.p - (idx // pe) % self.p) % self.p) * pe
            pe *= self.p
        neg.setflags(write=False)
        self._neg_table = neg

    # -- basic protocol --------------------------------------------------

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self) -> int:
        return hash((Field, self.p, self.m))

    def check_index(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.q:
            raise ValueError(f"element index {x} out of range for {self!r}")
        return x

    # -- scalar arithmetic on element indices ----------------------------

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        acc = 0
        pe = 1
        for _ in range(self.m):
            acc += ((x // pe + y // pe) % self.p) * pe
            pe *= self.p
        return acc

    def neg(self, x: int) -> int:
        if self.p == 2:
            return x
        return int(self._neg_table[x])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return int(self.exp[(self.log[x] + self.log[y]) % (self.q - 1)])

    def inv(self, x: int) -> int:
        if x == 0:
            raise DivisionByZeroError(f"inverse of zero in {self!r}")
        return int(self.exp[(self.q - 1 - self.log[x]) % (self.q - 1)])

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        """x^e for any integer e; 0^0 = 1 and 0^e = 0 for e > 0."""
        if x == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZeroError("negative power of zero")
            return 0
        return int(self.exp[(self.log[x] * (e % (self.q - 1))) % (self.q - 1)])

    def from_int(self, n: int) -> int:
        """The element n * 1 (image of the integer n in the prime subfield)."""
        return n % self.p

    def frobenius(self, x: int) -> int:
        return self.pow(x, self.p)

    # -- traces and subfields ---------------------------------------------

    def tower_degree(self, sub_order: int) -> int:
        """s such that sub_order = p^s with s | m; raises otherwise."""
        if sub_order < self.p:
            raise BadTowerError(f"{sub_order} is not a subfield order of {self!r}")
        s = 0
        n = sub_order
        while n % self.p == 0:
            n //= self.p
            s += 1
        if n != 1 or s == 0 or self.m % s != 0:
            raise BadTowerError(f"{sub_order} is not a subfield order of {self!r}")
        return s

    def abs_trace(self, x: int) -> int:
        """Sum of the p-power conjugates; lands in the prime subfield."""
        acc = x
        t = x
        for _ in range(self.m - 1):
            t = self.pow(t, self.p)
            acc = self.add(acc, t)
        return acc

    def rel_trace(self, x: int, sub_order: int, n: int | None = None) -> int:
        """Trace onto the subfield of the given order; fixes that subfield's n*x."""
        s = self.tower_degree(sub_order)
        steps = self.m // s
        if n is not None and n != steps:
            raise BadTowerError(
                f"{sub_order}^{n} != {self.q}; tower degree here is {steps}"
            )
        acc = x
        t = x
        for _ in range(steps - 1):
            t = self.pow(t, sub_order)
            acc = self.add(acc, t)
        return acc

    def in_subfield(self, x: int, sub_order: int) -> bool:
        self.tower_degree(sub_order)
        return self.pow(x, sub_order) == x

    def subfield(self, sub_order: int) -> np.ndarray:
        """Sorted indices of the subfield of the given order."""
        self.tower_degree(sub_order)
        fixed = self.pow_all(sub_order) == self._arange
        return np.flatnonzero(fixed).astype(np.int64)

    # -- multiplicative structure ----------------------------------------

    def coset_index(self, x: int, l: int) -> int:
        """Which cyclotomic class D_i of index l contains x."""
        self._check_coset_divisor(l)
        if x == 0:
            raise ZeroElementError("zero belongs to no multiplicative coset")
        return int(self.log[x]) % l

    def _check_coset_divisor(self, l: int) -> None:
        if l <= 1 or (self.q - 1) % l != 0:
            raise BadDivisorError(f"l = {l} must divide q-1 = {self.q - 1}, l > 1")

    def cyclotomic_partition(self, l: int) -> "CyclotomicPartition":
        self._check_coset_divisor(l)
        return CyclotomicPartition(self, l)

    def generators(self) -> list[int]:
        """All generators of the multiplicative group, ascending by index."""
        q1 = self.q - 1
        ks = [k for k in range(1, q1) if math.gcd(k, q1) == 1] if q1 > 1 else [0]
        return sorted(int(self.exp[k]) for k in ks)

    def multiplicative_order(self, x: int) -> int:
        if x == 0:
            raise ZeroElementError("zero has no multiplicative order")
        q1 = self.q - 1
        return q1 // math.gcd(int(self.log[x]), q1)

    # -- vectorized arithmetic on index arrays -----------------------------

    def add_arrays(self, xs, ys) -> np.ndarray:
        """Elementwise sum of two index arrays (broadcasting allowed).

        Char 2 is XOR; prime fields reduce mod p; small odd fields use a
        cached dense addition table; large odd extensions use a carry-free
        lane encoding.  The digit loop is the reference fallback.
        """
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(xs, ys)
        if self.m == 1:
            return (xs + ys) % self.p
        if self.q <= _ADD_TABLE_MAX:
            return self._dense_add_table()[xs, ys]
        return self._add_lanes(xs, ys)

    def _add_digits(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        acc = np.zeros(np.broadcast_shapes(xs.shape, ys.shape), dtype=np.int64)
        pe = 1
        for _ in range(self.m):
            acc += ((xs // pe + ys // pe) % self.p) * pe
            pe *= self.p
        return acc

    def _dense_add_table(self) -> np.ndarray:
        if self._add_table is None:
            tab = self._add_digits(self._arange[:, None], self._arange[None, :])
            tab.setflags(write=False)
            self._add_table = tab
        return self._add_table

    def _lane_tables(self):
        """Digits packed into bit lanes wide enough that a single sum never
        carries across lanes; two half-word LUTs map a raw lane sum back to
        the canonical index."""
        if self._lanes is None:
            p, m = self.p, self.m
            w = (2 * p - 1).bit_length()
            shifts = w * np.arange(m, dtype=np.int64)
            digits = (self._arange[:, None] // (p ** np.arange(m, dtype=np.int64))) % p
            enc = (digits << shifts).sum(axis=1)
            m_lo = (m + 1) // 2
            bits_lo = int(w * m_lo)

            def canon(ndigits: int, place: int) -> np.ndarray:
                raw = np.arange(1 << (w * ndigits), dtype=np.int64)
                out = np.zeros_like(raw)
                for i in range(ndigits):
                    lane = (raw >> (w * i)) & ((1 << w) - 1)
                    out += (lane % p) * (p ** (place + i))
                return out

            lo = canon(m_lo, 0)
            hi = canon(m - m_lo, m_lo)
            for arr in (enc, lo, hi):
                arr.setflags(write=False)
            self._lanes = (enc, lo, hi, bits_lo, (1 << bits_lo) - 1)
        return self._lanes

    def _add_lanes(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        enc, lo, hi, bits_lo, mask_lo = self._lane_tables()
        raw = enc[xs] + enc[ys]
        return lo[raw & mask_lo] + hi[raw >> bits_lo]

    def neg_array(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if self.p == 2:
            return xs.copy()
        return self._neg_table[xs]

    def sub_arrays(self, xs, ys) -> np.ndarray:
        return self.add_arrays(xs, self.neg_array(ys))

    def mul_scalar(self, c: int, xs) -> np.ndarray:
        """c * xs elementwise for a fixed element c."""
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros_like(xs)
        if c == 0:
            return out
        lc = int(self.log[c])
        nz = xs != 0
        out[nz] = self.exp[(lc + self.log[xs[nz]]) % (self.q - 1)]
        return out

    def mul_arrays(self, xs, ys) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        xs, ys = np.broadcast_arrays(xs, ys)
        out = np.zeros(xs.shape, dtype=np.int64)
        nz = (xs != 0) & (ys != 0)
        out[nz] = self.exp[(self.log[xs[nz]] + self.log[ys[nz]]) % (self.q - 1)]
        return out

    def pow_all(self, e: int) -> np.ndarray:
        """x^e for every x in the field, with the zero-extension convention."""
        q1 = self.q - 1
        out = np.zeros(self.q, dtype=np.int64)
        if e == 0:
            out[:] = 1
            return out
        er = e % q1
        ks = np.arange(q1, dtype=np.int64)
        out[self.exp] = self.exp[(ks * er) % q1]
        return out

    def pow_array(self, xs, e: int) -> np.ndarray:
        """xs^e elementwise; zero entries follow the zero-extension convention."""
        xs = np.asarray(xs, dtype=np.int64)
        if e == 0:
            return np.ones_like(xs)
        if e < 0 and (xs == 0).any():
            raise DivisionByZeroError("negative power of zero")
        q1 = self.q - 1
        er = e % q1
        out = np.zeros_like(xs)
        nz = xs != 0
        out[nz] = self.exp[(self.log[xs[nz]] * er) % q1]
        return out

    def shift_rows(self, a_indices) -> np.ndarray:
        """Rows of the addition table: entry [i, x] is a_indices[i] + x."""
        a_indices = np.asarray(a_indices, dtype=np.int64)
        return self.add_arrays(a_indices[:, None], self._arange[None, :])

    # -- literals ----------------------------------------------------------

    def element(self, spec) -> int:
        """Parse an element literal (see module docstring); ints pass through."""
        if isinstance(spec, FieldElement):
            if spec.field != self:
                raise FieldMismatchError(f"element of {spec.field!r} given to {self!r}")
            return spec.index
        if isinstance(spec, (int, np.integer)):
            return self.check_index(int(spec))
        text = spec.strip()
        negate = text.startswith("-")
        if negate:
            text = text[1:].strip()
        if text.startswith("w"):
            k = 1
            if len(text) > 1:
                if not text[1] == "^":
                    raise ValueError(f"bad element literal {spec!r}")
                k = int(text[2:])
            idx = int(self.exp[k % (self.q - 1)]) if self.q > 2 else 1
        elif text.startswith("["):
            if not text.endswith("]"):
                raise ValueError(f"bad element literal {spec!r}")
            parts = [t.strip() for t in text[1:-1].split(",") if t.strip()]
            if len(parts) > self.m:
                raise ValueError(f"too many digits in {spec!r} for {self!r}")
            idx = 0
            for d in reversed([int(t) for t in parts]):
                if not 0 <= d < self.p:
                    raise ValueError(f"digit out of range in {spec!r}")
                idx = idx * self.p + d
        else:
            idx = self.check_index(int(text))
        return self.neg(idx) if negate else idx

    def format_element(self, x: int) -> str:
        """Canonical literal: '0' or 'w^k'."""
        x = self.check_index(x)
        if x == 0:
            return "0"
        return f"w^{int(self.log[x])}"

    # -- element wrapper ----------------------------------------------------

    def el(self, spec) -> "FieldElement":
        return FieldElement(self, self.element(spec))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def w(self) -> "FieldElement":
        return FieldElement(self, self.primitive)

    def elements(self) -> Iterator["FieldElement"]:
        return (FieldElement(self, i) for i in range(self.q))


@dataclass(frozen=True)
class CyclotomicPartition:
    """The classes D_i = w^i <w^l>, i in [0, l), partitioning the nonzero elements."""

    field: Field
    l: int

    def index_of(self, x: int) -> int:
        return self.field.coset_index(x, self.l)

    def coset(self, i: int) -> np.ndarray:
        """Sorted element indices of D_i."""
        f = self.field
        ks = np.arange(f.q - 1, dtype=np.int64)
        members = f.exp[ks % self.l == i % self.l]
        return np.sort(members)

    def indices(self) -> np.ndarray:
        """Array over all q indices: class of x for x != 0, -1 at x = 0."""
        f = self.field
        out = np.full(f.q, -1, dtype=np.int64)
        out[f.exp] = np.arange(f.q - 1, dtype=np.int64) % self.l
        return out


class FieldElement:
    """A single element bound to its field, with operator sugar.

    Mixed operations accept plain ints as element indices of the same
    field; elements of two different fields never mix.
    """

    __slots__ = ("field", "index")

    def __init__(self, field: Field, index: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "index", field.check_index(index))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"cannot combine elements of {self.field!r} and {other.field!r}"
                )
            return other.index
        if isinstance(other, (int, np.integer)):
            return self.field.check_index(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.index, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.index, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(o, self.index))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.index, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.index, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(o, self.index))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.index))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.index, e))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.index == other.index
        if isinstance(other, (int, np.integer)):
            return self.index == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.index))

    def __int__(self) -> int:
        return self.index

    def __index__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        return f"{self.field.format_element(self.index)}@{self.field!r}"

    def __str__(self) -> str:
        return self.field.format_element(self.index)

    def trace(self) -> "FieldElement":
        return FieldElement(self.field, self.field.abs_trace(self.index))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.index))


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int) -> Field:
    """The canonical GF(p^m); cached, deterministic, immutable."""
    return Field(p, m)

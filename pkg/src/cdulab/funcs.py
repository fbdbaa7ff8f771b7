"""Models of functions F: GF(q) -> GF(q) and structural predicates.

Three carriers, all reducible to a full lookup table:

  * ``SparsePoly``      sum of c * x^e terms; exponents are kept as exact
                        integers (no silent reduction), reduction modulo
                        x^q - x happens only on request;
  * ``LinearizedPoly``  sum of c_i * x^(b^i) with b a subfield order, the
                        additive maps of the theory;
  * ``FuncTable``       the value table itself, index -> index.

The polynomial mini-language accepted by :func:`parse_poly` is a sum of
terms ``COEFF x^EXP`` with the coefficient in element-literal notation,
e.g. ``w^3 x^17 + x + w^0`` or ``x^4 - x``.  Lookup tables travel as CSV
with header ``x,Fx``, both columns in element-literal notation.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import FieldMismatchError, NotAPermutationError
from .gf import Field

__all__ = [
    "FuncTable",
    "SparsePoly",
    "LinearizedPoly",
    "kernel_intersection",
    "compose_affine",
    "parse_poly",
    "parse_linearized",
    "read_table_csv",
    "write_table_csv",
]


class FuncTable:
    """A function as its dense value table; values[x] = F(x)."""

    __slots__ = ("field", "values", "__weakref__")

    def __init__(self, field: Field, values):
        vals = np.asarray(values, dtype=np.int64)
        if vals.shape != (field.q,):
            raise ValueError(f"table must have exactly q = {field.q} entries")
        if vals.size and (vals.min() < 0 or vals.max() >= field.q):
            raise ValueError("table entries must be element indices")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("FuncTable is immutable")

    @classmethod
    def from_callable(cls, field: Field, fn: Callable[[int], int]) -> "FuncTable":
        return cls(field, [fn(x) for x in range(field.q)])

    def __call__(self, x: int) -> int:
        return int(self.values[self.field.check_index(x)])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FuncTable)
            and self.field == other.field
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.field, self.values.tobytes()))

    def __repr__(self) -> str:
        return f"FuncTable({self.field!r}, q={self.field.q})"

    def image_histogram(self) -> dict[int, int]:
        """Attained value -> number of preimages."""
        counts = np.bincount(self.values, minlength=self.field.q)
        return {int(v): int(c) for v, c in enumerate(counts) if c}

    def max_preimage_count(self) -> int:
        return int(np.bincount(self.values, minlength=self.field.q).max())

    def is_permutation(self) -> bool:
        return self.max_preimage_count() == 1

    def is_2to1(self) -> bool:
        """Every attained value has exactly two preimages."""
        counts = np.bincount(self.values, minlength=self.field.q)
        attained = counts[counts > 0]
        return bool((attained == 2).all())


def _check_same_field(a: Field, b: Field) -> None:
    if a != b:
        raise FieldMismatchError(f"{a!r} and {b!r} differ")


class SparsePoly:
    """Polynomial with few terms; term exponents are exact integers >= 0."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: Iterable[tuple[int, int]]):
        merged: dict[int, int] = {}
        for e, c in terms:
            e = int(e)
            if e < 0:
                raise ValueError("exponents must be >= 0")
            c = field.check_index(int(c))
            if e in merged:
                merged[e] = field.add(merged[e], c)
            else:
                merged[e] = c
        clean = tuple(sorted((e, c) for e, c in merged.items() if c != 0))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, SparsePoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.terms))

    def __repr__(self) -> str:
        return f"SparsePoly({self.field!r}, {self.as_text()!r})"

    def as_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms, reverse=True):
            coeff = self.field.format_element(c)
            if e == 0:
                parts.append(coeff)
            else:
                xpart = "x" if e == 1 else f"x^{e}"
                parts.append(xpart if c == 1 else f"{coeff} {xpart}")
        return " + ".join(parts)

    def eval(self, x) -> int:
        f = self.field
        if isinstance(x, np.ndarray):
            raise TypeError("use eval_all/to_table for bulk evaluation")
        xi = f.check_index(int(x))
        acc = 0
        for e, c in self.terms:
            acc = f.add(acc, f.mul(c, f.pow(xi, e)))
        return acc

    def eval_all(self) -> np.ndarray:
        """Values at every field element, zero-extension convention for x = 0."""
        f = self.field
        q1 = f.q - 1
        acc = np.zeros(f.q, dtype=np.int64)
        for e, c in self.terms:
            if e == 0:
                term = np.full(f.q, c, dtype=np.int64)
            else:
                term = f.mul_scalar(c, f.pow_all(e))
            acc = f.add_arrays(acc, term)
        return acc

    def to_table(self) -> FuncTable:
        return FuncTable(self.field, self.eval_all())

    def reduced(self) -> "SparsePoly":
        """Reduce modulo x^q - x; preserves the induced table."""
        q1 = self.field.q - 1
        out = []
        for e, c in self.terms:
            if e >= self.field.q:
                e = (e - 1) % q1 + 1
            out.append((e, c))
        return SparsePoly(self.field, out)

    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1


class LinearizedPoly:
    """Additive polynomial sum c_i x^(base^i); induces a base-linear map."""

    __slots__ = ("field", "base_order", "coeffs")

    def __init__(self, field: Field, base_order: int, coeffs: Iterable[int]):
        field.tower_degree(base_order)  # validates base_order = p^s, s | m
        cs = tuple(field.check_index(int(c)) for c in coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "base_order", base_order)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("LinearizedPoly is immutable")

    @classmethod
    def trace(cls, field: Field, sub_order: int) -> "LinearizedPoly":
        """The relative trace onto the subfield of the given order."""
        n = field.m // field.tower_degree(sub_order)
        return cls(field, sub_order, (1,) * n)

    @classmethod
    def frobenius_difference(cls, field: Field, sub_order: int) -> "LinearizedPoly":
        """x^sub_order - x."""
        return cls(field, sub_order, (field.neg(1), 1))

    def __eq__(self, other):
        return (
            isinstance(other, LinearizedPoly)
            and self.field == other.field
            and self.base_order == other.base_order
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.base_order, self.coeffs))

    def __repr__(self) -> str:
        return f"LinearizedPoly({self.field!r}, {self.as_sparse().as_text()!r})"

    def as_sparse(self) -> SparsePoly:
        return SparsePoly(
            self.field,
            [(self.base_order**i, c) for i, c in enumerate(self.coeffs)],
        )

    def eval(self, x: int) -> int:
        f = self.field
        xi = f.check_index(int(x))
        acc = 0
        conj = xi
        for i, c in enumerate(self.coeffs):
            if i:
                conj = f.pow(conj, self.base_order)
            acc = f.add(acc, f.mul(c, conj))
        return acc

    def eval_all(self) -> np.ndarray:
        f = self.field
        acc = np.zeros(f.q, dtype=np.int64)
        frob = f.pow_all(self.base_order) if len(self.coeffs) > 1 else None
        conj = np.arange(f.q, dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            if i:
                conj = frob[conj]
            acc = f.add_arrays(acc, f.mul_scalar(c, conj))
        return acc

    def to_table(self) -> FuncTable:
        return FuncTable(self.field, self.eval_all())

    def kernel(self) -> frozenset[int]:
        vals = self.eval_all()
        return frozenset(int(x) for x in np.flatnonzero(vals == 0))

    def is_permutation(self) -> bool:
        return self.to_table().is_permutation()


def kernel_intersection(a: LinearizedPoly, b: LinearizedPoly) -> frozenset[int]:
    _check_same_field(a.field, b.field)
    return a.kernel() & b.kernel()


def compose_affine(t: FuncTable, L: LinearizedPoly, shift: int = 0) -> FuncTable:
    """Table of x -> F(L(x) + shift); the affine map must be a permutation."""
    _check_same_field(t.field, L.field)
    f = t.field
    shift = f.check_index(int(shift))
    inner = f.add_arrays(L.eval_all(), np.full(f.q, shift, dtype=np.int64))
    if np.bincount(inner, minlength=f.q).max() != 1:
        raise NotAPermutationError("x -> L(x) + shift is not a permutation")
    return FuncTable(f, t.values[inner])


# ---------------------------------------------------------------------------
# mini-language and CSV interchange
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""^\s*
        (?P<coeff>w(?:\^\d+)?|\[[0-9,\s]*\]|\d+)?   # element literal
        \s*\*?\s*
        (?:x(?:\^(?P<exp>\d+))?)?
        \s*$""",
    re.VERBOSE,
)


def _split_signed_terms(text: str) -> list[tuple[int, str]]:
    """Split on top-level +/- (minus means additive inverse of the term)."""
    terms = []
    sign, depth, cur = 1, 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth == 0 and ch in "+-" and cur and "".join(cur).strip():
            terms.append((sign, "".join(cur)))
            sign, cur = (1 if ch == "+" else -1), []
        elif depth == 0 and ch in "+-" and not "".join(cur).strip():
            # leading sign of the very first term
            sign = sign * (1 if ch == "+" else -1)
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        terms.append((sign, "".join(cur)))
    return terms


def parse_poly(field: Field, text: str) -> SparsePoly:
    """Parse the mini-language into a SparsePoly."""
    pieces = _split_signed_terms(text)
    if not pieces:
        raise ValueError(f"empty polynomial expression {text!r}")
    terms = []
    for sign, piece in pieces:
        mt = _TERM_RE.match(piece)
        if not mt or (mt.group("coeff") is None and "x" not in piece):
            raise ValueError(f"cannot parse term {piece!r} in {text!r}")
        coeff = field.element(mt.group("coeff")) if mt.group("coeff") else 1
        if "x" in piece:
            exp = int(mt.group("exp")) if mt.group("exp") else 1
        else:
            exp = 0
        if sign < 0:
            coeff = field.neg(coeff)
        terms.append((exp, coeff))
    return SparsePoly(field, terms)


def parse_linearized(field: Field, text: str, base_order: int) -> LinearizedPoly:
    """Parse the mini-language, requiring every exponent to be a base power."""
    sp = parse_poly(field, text)
    coeffs: dict[int, int] = {}
    for e, c in sp.terms:
        i, pe = 0, 1
        while pe < e:
            pe *= base_order
            i += 1
        if pe != e:
            raise ValueError(
                f"exponent {e} is not a power of {base_order}; not an additive polynomial"
            )
        coeffs[i] = c
    width = max(coeffs) + 1 if coeffs else 0
    return LinearizedPoly(
        field, base_order, [coeffs.get(i, 0) for i in range(width)]
    )


def read_table_csv(field: Field, path) -> FuncTable:
    """Read a lookup table from CSV with header ``x,Fx`` in element literals."""
    values = np.full(field.q, -1, dtype=np.int64)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["x", "Fx"]:
            raise ValueError(f"{path}: expected header 'x,Fx'")
        for row in reader:
            if not row:
                continue
            x = field.element(row[0])
            if values[x] != -1:
                raise ValueError(f"{path}: duplicate entry for x = {row[0]}")
            values[x] = field.element(row[1])
    if (values == -1).any():
        raise ValueError(f"{path}: table does not cover all {field.q} inputs")
    return FuncTable(field, values)


def write_table_csv(t: FuncTable, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "Fx"])
        for x in range(t.field.q):
            writer.writerow(
                [t.field.format_element(x), t.field.format_element(int(t.values[x]))]
            )

"""Builders for the function families under study.

Each builder returns a :class:`Construction`: the function table, the set
of c values for which the family's uniformity guarantee applies (with a
per-c record of which hypothesis branch admitted it), the guaranteed
bound, and any structural diagnostics (kernel conditions and the like).

Families are addressed by short codes, used by the CLI and the manifest:

  T1    x * (sum_i x^((q-1)i/l) + u), u scaled by cyclotomic class
  T2    (x^(3^k) - x)^((q-1)/2 + 3^(ik)) + a1 x + a2 x^(3^k) + a3 x^(3^2k)
  P1    switch of a base function f across the trace hyperplane
  C1    x + gamma * Tr(x^(2^k+1)), gamma a d-th root of unity
  T4    L(x) + L(gamma) * Tr(x)^(q-1)
  T5    x^(2^k+1) + gamma * Tr(x)
  T6    x^(q+1) + a0 x^q + a1 x over GF(q^2)
  T7    inverse with the images of 0 and t exchanged
  T8    u phi(x) + g(Tr(x))^q - g(Tr(x))
  T9    u (x^q - x) + g(Tr(x))
  T10   u phi(x) + g(Tr(x)), p | n
  T11   u phi(x) + sum_i g(x^q - x)^((q^n-1)/d_i)   (C2 = same builder)
  MONO  x^e with the zero-extension convention

Validity sets are enumerated exhaustively over the ambient field rather
than solved symbolically; at desk scale that is cheap and makes condition
transcription errors visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping

import numpy as np

from .errors import (
    BadDivisorError,
    BadDivisorListError,
    BadGammaError,
    BadNError,
    BadParametersError,
    BadUError,
    CoeffOutsideSubfieldError,
    DegenerateCoefficientsError,
    EvenQuotientError,
    ForbiddenUError,
    GammaNotDthRootError,
    GEscapesSubfieldError,
    GNotSubfieldPermutationError,
    NotAPermutationError,
    PhiOneZeroError,
    WrongCharacteristicError,
    ZeroGammaError,
    ZeroTError,
)
from .funcs import FuncTable, LinearizedPoly, SparsePoly, parse_linearized, parse_poly
from .gf import Field, make_field

__all__ = [
    "Claim",
    "ValidCSet",
    "Construction",
    "coset_multiplier",
    "signed_difference_power",
    "trace_switch",
    "trace_perturbed_identity",
    "linear_plus_trace_indicator",
    "gold_plus_trace",
    "norm_plus_linear",
    "swapped_inverse",
    "linear_plus_trace_difference",
    "frobenius_difference_plus_trace",
    "linear_plus_trace_composite",
    "linear_plus_power_residue_sum",
    "monomial",
    "FAMILY_CODES",
    "build_from_params",
    "random_table",
    "random_sparse_poly",
    "random_linearized",
    "random_affine_permutation",
]


@dataclass(frozen=True)
class Claim:
    """The uniformity guarantee attached to a construction's valid c-set.

    kinds: ``eq``/``le`` compare every delta against ``value``;
    ``exists_gt`` demands some delta exceed ``value`` (the failing branch
    of an if-and-only-if family); ``eq_base_spectrum``/``le_double_base``
    are relative to a base function (switch construction); ``none`` makes
    no promise.
    """

    kind: str
    value: int | None = None

    def describe(self) -> str:
        if self.kind == "eq":
            return f"delta = {self.value}"
        if self.kind == "le":
            return f"delta <= {self.value}"
        if self.kind == "exists_gt":
            return f"delta > {self.value} for some valid c"
        if self.kind == "eq_base_spectrum":
            return "delta matches the base function for every c"
        if self.kind == "le_double_base":
            return "delta <= 2 * base delta for every c"
        return "no claim"

    def check(self, deltas: Mapping[int, int]) -> bool:
        if self.kind == "eq":
            return all(d == self.value for d in deltas.values())
        if self.kind == "le":
            return all(d <= self.value for d in deltas.values())
        if self.kind == "exists_gt":
            return any(d > self.value for d in deltas.values())
        if self.kind == "none":
            return True
        raise ValueError(f"claim {self.kind!r} needs a base spectrum to check")


@dataclass(frozen=True)
class ValidCSet:
    """The c values admitted by a family's hypotheses, with annotations."""

    family: str
    cs: tuple[int, ...]
    branches: Mapping[int, str]

    def __contains__(self, c: int) -> bool:
        return int(c) in self.branches

    def __iter__(self):
        return iter(self.cs)

    def __len__(self):
        return len(self.cs)


@dataclass(frozen=True)
class Construction:
    """One built family instance, ready for the analyzer."""

    family: str
    field: Field
    table: FuncTable
    valid_cs: ValidCSet | None
    claim: Claim
    diagnostics: dict = dc_field(default_factory=dict)
    params: dict = dc_field(default_factory=dict)
    hypothesis: Callable[[int], str | None] | None = None

    def recheck(self, c: int) -> str | None:
        """Re-evaluate the family hypothesis for one c from scratch."""
        if self.hypothesis is None:
            return None
        return self.hypothesis(int(c))


def _collect_valid(field: Field, family: str, hyp) -> ValidCSet:
    branches = {}
    for c in range(field.q):
        if c == 1:
            continue
        tag = hyp(c)
        if tag is not None:
            branches[c] = tag
    return ValidCSet(family, tuple(sorted(branches)), branches)


def _subfield_cs(field: Field, sub_order: int, family: str) -> ValidCSet:
    members = [int(c) for c in field.subfield(sub_order) if c != 1]
    return ValidCSet(family, tuple(members), {c: "base-subfield" for c in members})


def _element(field: Field, v) -> int:
    return field.element(int(v) if hasattr(v, "__index__") else v)


# ---------------------------------------------------------------------------
# T1: cyclotomic-class multiplier
# ---------------------------------------------------------------------------

def coset_multiplier(field: Field, l: int, u) -> Construction:
    """x * (sum_{i=1..l-1} x^((q-1)i/l) + u): scales each cyclotomic class.

    Valid c: both of 1 -+ l/((1-c)(u+l-1)) style ratios land in the class
    D_0 of l-th power residues, in either the plain or the c-scaled form.
    Guarantee on that set: delta <= 2.
    """
    q = field.q
    if l <= 1 or (q - 1) % l != 0:
        raise BadDivisorError(f"l = {l} must divide q-1 = {q - 1} and exceed 1")
    u = _element(field, u)
    if u == 1 or u == field.from_int(1 - l):
        raise ForbiddenUError("u may be neither 1 nor (1-l) mod p")

    l_el = field.from_int(l)
    k_res = field.add(u, field.from_int(l - 1))  # multiplier on D_0
    k_non = field.sub(u, 1)  # multiplier off D_0

    step = (q - 1) // l
    poly = SparsePoly(field, [(1, u)] + [(step * i + 1, 1) for i in range(1, l)])
    table_poly = poly.to_table()

    classes = field.cyclotomic_partition(l).indices()
    xs = np.arange(q, dtype=np.int64)
    piecewise = np.where(
        classes == 0, field.mul_scalar(k_res, xs), field.mul_scalar(k_non, xs)
    )
    piecewise[0] = 0
    assert np.array_equal(table_poly.values, piecewise), "dual builds disagree"

    def in_d0(x: int) -> bool:
        return x != 0 and int(field.log[x]) % l == 0

    def hyp(c: int) -> str | None:
        omc = field.sub(1, c)
        r1 = field.sub(1, field.div(l_el, field.mul(omc, k_res)))
        r2 = field.add(1, field.div(l_el, field.mul(omc, k_non)))
        first = in_d0(r1) and in_d0(r2)
        cl = field.mul(c, l_el)
        r3 = field.add(1, field.div(cl, field.mul(omc, k_res)))
        r4 = field.sub(1, field.div(cl, field.mul(omc, k_non)))
        second = in_d0(r3) and in_d0(r4)
        if first and second:
            return "both"
        if first:
            return "first"
        if second:
            return "second"
        return None

    return Construction(
        family="T1",
        field=field,
        table=table_poly,
        valid_cs=_collect_valid(field, "T1", hyp),
        claim=Claim("le", 2),
        params={"l": l, "u": field.format_element(u)},
        hypothesis=hyp,
    )


# ---------------------------------------------------------------------------
# T2: quadratic-character twist of x^(3^k) - x, characteristic 3
# ---------------------------------------------------------------------------

def signed_difference_power(
    field: Field, d: int, k: int, i: int, a1: int, a2: int, a3: int
) -> Construction:
    """(x^(3^k) - x)^((q-1)/2 + 3^(ik)) + a1 x + a2 x^(3^k) + a3 x^(3^2k).

    Fixed guarantee: delta <= 2 at c = -1.
    """
    if field.p != 3:
        raise BadParametersError("requires characteristic 3")
    if d < 1 or field.m != 3 * d:
        raise BadParametersError(f"extension degree must be 3d, got m={field.m}, d={d}")
    if k not in (d, 2 * d):
        raise BadParametersError(f"k must be d or 2d, got k={k}")
    if i not in (0, 1, 2):
        raise BadParametersError(f"i must be in 0..2, got {i}")
    scalars = tuple(int(a) % 3 for a in (a1, a2, a3))
    if sum(scalars) % 3 == 0:
        raise BadParametersError("a1 + a2 + a3 must be nonzero mod 3")

    q = field.q
    exponent = (q - 1) // 2 + 3 ** (i * k)
    pk = 3**k
    xs = np.arange(q, dtype=np.int64)
    y = field.sub_arrays(field.pow_all(pk), xs)
    linear = field.add_arrays(
        field.mul_scalar(scalars[0], xs),
        field.add_arrays(
            field.mul_scalar(scalars[1], field.pow_all(pk)),
            field.mul_scalar(scalars[2], field.pow_all(pk * pk)),
        ),
    )
    direct = field.add_arrays(field.pow_array(y, exponent), linear)

    # independent route: y^((q-1)/2) is the quadratic character, so the
    # power term is +-y^(3^(ik)) by the class of y, 0 at y = 0
    sign = field.pow_array(y, (q - 1) // 2)  # 0, 1, or -1
    twisted = field.pow_array(y, 3 ** (i * k))
    term = np.where(sign == 1, twisted, np.where(sign == 0, 0, field.neg_array(twisted)))
    assert np.array_equal(direct, field.add_arrays(term, linear)), "dual builds disagree"

    minus_one = field.neg(1)
    valid = ValidCSet("T2", (minus_one,), {minus_one: "fixed c = -1"})
    return Construction(
        family="T2",
        field=field,
        table=FuncTable(field, direct),
        valid_cs=valid,
        claim=Claim("le", 2),
        params={"d": d, "k": k, "i": i, "a": scalars},
        hypothesis=lambda c: "fixed c = -1" if c == minus_one else None,
    )


# ---------------------------------------------------------------------------
# P1: switch of a base function across the trace hyperplane (char 2)
# ---------------------------------------------------------------------------

def trace_switch(f: FuncTable, gamma) -> Construction:
    """F = f on the Tr = 0 hyperplane, x -> f(x + gamma) elsewhere.

    Tr(gamma) = 0 keeps every delta of f; otherwise delta at most doubles.
    """
    field = f.field
    if field.p != 2:
        raise WrongCharacteristicError("switching requires characteristic 2")
    gamma = _element(field, gamma)
    if gamma == 0:
        raise ZeroGammaError("gamma must be nonzero")
    tr = LinearizedPoly.trace(field, 2).eval_all()
    shifted = f.values[field.shift_rows(np.asarray([gamma]))[0]]
    piecewise = np.where(tr == 0, f.values, shifted)
    # formula route: f(x)(Tr(x) + 1) + f(x + gamma) Tr(x)
    formula = field.add_arrays(
        field.mul_arrays(f.values, field.add_arrays(tr, np.int64(1))),
        field.mul_arrays(shifted, tr),
    )
    assert np.array_equal(piecewise, formula), "dual builds disagree"

    tr_gamma = field.abs_trace(gamma)
    cs = tuple(c for c in range(field.q) if c != 1)
    kind = "eq_base_spectrum" if tr_gamma == 0 else "le_double_base"
    return Construction(
        family="P1",
        field=field,
        table=FuncTable(field, piecewise),
        valid_cs=ValidCSet("P1", cs, {c: "any c != 1" for c in cs}),
        claim=Claim(kind),
        diagnostics={"gamma_trace": int(tr_gamma), "base": f},
        params={"gamma": field.format_element(gamma)},
    )


# ---------------------------------------------------------------------------
# C1: identity plus a trace-of-Gold perturbation (char 2, square field)
# ---------------------------------------------------------------------------

def trace_perturbed_identity(field: Field, k: int, gamma) -> Construction:
    """x + gamma * Tr(x^(2^k+1)) over GF(2^(2m)); gamma^d = 1 required.

    Valid c: c = 0 or c^d = 1 (c != 1), with d = gcd(2^k+1, 2^(2m)-1);
    guarantee delta = 1.
    """
    if field.p != 2:
        raise WrongCharacteristicError("requires characteristic 2")
    if field.m % 2 != 0:
        raise BadParametersError("requires the square extension GF(2^(2m))")
    gamma = _element(field, gamma)
    d = math.gcd(2**k + 1, field.q - 1)
    if field.pow(gamma, d) != 1:
        raise GammaNotDthRootError(f"gamma must satisfy gamma^{d} = 1")

    tr = LinearizedPoly.trace(field, 2).eval_all()
    gold = field.pow_all(2**k + 1)
    values = field.add_arrays(
        np.arange(field.q, dtype=np.int64), field.mul_scalar(gamma, tr[gold])
    )

    def hyp(c: int) -> str | None:
        if c == 0:
            return "c = 0"
        if field.pow(c, d) == 1:
            return f"c^{d} = 1"
        return None

    return Construction(
        family="C1",
        field=field,
        table=FuncTable(field, values),
        valid_cs=_collect_valid(field, "C1", hyp),
        claim=Claim("eq", 1),
        params={"k": k, "d": d, "gamma": field.format_element(gamma)},
        hypothesis=hyp,
    )


# ---------------------------------------------------------------------------
# T4: additive permutation plus an indicator jump
# ---------------------------------------------------------------------------

def linear_plus_trace_indicator(
    field: Field, sub_order: int, L: LinearizedPoly, gamma
) -> Construction:
    """L(x) + L(gamma) * Tr(x)^(q-1): equals L(x) on ker Tr, L(x + gamma) off it.

    Valid c: Tr(L(gamma)/(1-c)) = 0; guarantee delta = 1.
    """
    s = field.tower_degree(sub_order)
    n = field.m // s
    if L.field != field:
        raise BadParametersError("L must live in the ambient field")
    if any(not field.in_subfield(c, sub_order) for c in L.coeffs):
        raise CoeffOutsideSubfieldError("all coefficients of L must lie in the subfield")
    l_vals = L.eval_all()
    if np.bincount(l_vals, minlength=field.q).max() != 1:
        raise NotAPermutationError("L must be a linearized permutation")
    gamma = _element(field, gamma)
    if gamma == 0 or field.rel_trace(gamma, sub_order) != 0:
        raise BadGammaError("gamma must be nonzero with zero relative trace")

    l_gamma = L.eval(gamma)
    tr = LinearizedPoly.trace(field, sub_order).eval_all()
    values = np.where(
        tr == 0, l_vals, field.add_arrays(l_vals, np.int64(l_gamma))
    )

    def hyp(c: int) -> str | None:
        ratio = field.div(l_gamma, field.sub(1, c))
        return "trace ratio vanishes" if field.rel_trace(ratio, sub_order) == 0 else None

    return Construction(
        family="T4",
        field=field,
        table=FuncTable(field, values),
        valid_cs=_collect_valid(field, "T4", hyp),
        claim=Claim("eq", 1),
        params={
            "q": sub_order,
            "n": n,
            "L": L.as_sparse().as_text(),
            "gamma": field.format_element(gamma),
        },
        hypothesis=hyp,
    )


# ---------------------------------------------------------------------------
# T5: Gold function plus a trace perturbation (char 2)
# ---------------------------------------------------------------------------

def gold_plus_trace(field: Field, k: int, gamma) -> Construction:
    """x^(2^k+1) + gamma * Tr(x) with m/gcd(m,k) odd.

    Valid c: the subfield GF(2^gcd(m,k)) minus 1; guarantee delta <= 2.
    """
    if field.p != 2:
        raise WrongCharacteristicError("requires characteristic 2")
    d = math.gcd(field.m, k)
    if (field.m // d) % 2 == 0:
        raise EvenQuotientError(f"m/gcd(m,k) = {field.m // d} must be odd")
    gamma = _element(field, gamma)
    if gamma == 0:
        raise ZeroGammaError("gamma must be nonzero")

    tr = LinearizedPoly.trace(field, 2).eval_all()
    values = field.add_arrays(field.pow_all(2**k + 1), field.mul_scalar(gamma, tr))
    return Construction(
        family="T5",
        field=field,
        table=FuncTable(field, values),
        valid_cs=_subfield_cs(field, 2**d, "T5"),
        claim=Claim("le", 2),
        params={"k": k, "d": d, "gamma": field.format_element(gamma)},
        hypothesis=lambda c: (
            "base-subfield" if c != 1 and field.in_subfield(c, 2**d) else None
        ),
    )


# ---------------------------------------------------------------------------
# T6: norm-type binomial plus linear part over a square extension
# ---------------------------------------------------------------------------

def norm_plus_linear(field: Field, a0, a1) -> Construction:
    """x^(q+1) + a0 x^q + a1 x over GF(q^2), a1 != a0^q.

    Valid c: GF(q) minus 1; guarantee delta = 2 exactly.
    """
    if field.m % 2 != 0:
        raise BadParametersError("requires a square extension GF(q^2)")
    q0 = field.p ** (field.m // 2)
    a0 = _element(field, a0)
    a1 = _element(field, a1)
    if a1 == field.pow(a0, q0):
        raise DegenerateCoefficientsError("a1 = a0^q collapses the construction")
    poly = SparsePoly(field, [(q0 + 1, 1), (q0, a0), (1, a1)])
    return Construction(
        family="T6",
        field=field,
        table=poly.to_table(),
        valid_cs=_subfield_cs(field, q0, "T6"),
        claim=Claim("eq", 2),
        params={
            "q": q0,
            "a0": field.format_element(a0),
            "a1": field.format_element(a1),
        },
        hypothesis=lambda c: (
            "base-subfield" if c != 1 and field.in_subfield(c, q0) else None
        ),
    )


# ---------------------------------------------------------------------------
# T7: inverse function with two output points exchanged (char 2)
# ---------------------------------------------------------------------------

def swapped_inverse(field: Field, t) -> Construction:
    """x^(q-2) with the images of 0 and t swapped: F(t) = 0, F(0) = t^(q-2).

    Valid c: c outside {0, 1} with Tr(c) = Tr(1/c) = 1; guarantee delta <= 3.
    """
    if field.p != 2:
        raise WrongCharacteristicError("requires characteristic 2")
    t = _element(field, t)
    if t == 0:
        raise ZeroTError("the swap point t must be nonzero")

    swapped = field.pow_all(field.q - 2).copy()
    swapped[0], swapped[t] = swapped[t], swapped[0]
    piecewise = FuncTable.from_callable(
        field,
        lambda x: 0 if x == t else (field.pow(t, field.q - 2) if x == 0 else field.pow(x, field.q - 2)),
    )
    assert np.array_equal(swapped, piecewise.values), "dual builds disagree"

    def hyp(c: int) -> str | None:
        if c in (0, 1):
            return None
        if field.abs_trace(c) == 1 and field.abs_trace(field.inv(c)) == 1:
            return "Tr(c) = Tr(1/c) = 1"
        return None

    return Construction(
        family="T7",
        field=field,
        table=piecewise,
        valid_cs=_collect_valid(field, "T7", hyp),
        claim=Claim("le", 3),
        params={"t": field.format_element(t)},
        hypothesis=hyp,
    )


# ---------------------------------------------------------------------------
# shared validation for the additive-criterion families T8-T11
# ---------------------------------------------------------------------------

def _check_u(field: Field, sub_order: int, u) -> int:
    u = _element(field, u)
    if u == 0 or not field.in_subfield(u, sub_order):
        raise BadUError("u must be a nonzero element of the base subfield")
    return u


def _check_phi_strict(field: Field, sub_order: int, phi: LinearizedPoly) -> None:
    """phi must act as phi(1) * x on the base subfield: base-order exponents
    and subfield coefficients."""
    if phi.field != field:
        raise BadParametersError("phi must live in the ambient field")
    if phi.base_order != sub_order:
        raise BadParametersError(
            f"phi must be composed of x^({sub_order}^i) terms for this family"
        )
    if any(not field.in_subfield(c, sub_order) for c in phi.coeffs):
        raise CoeffOutsideSubfieldError("phi's coefficients must lie in the subfield")
    if phi.eval(1) == 0:
        raise PhiOneZeroError("phi(1) = 0")


def _g_table(field: Field, g: SparsePoly) -> np.ndarray:
    if g.field != field:
        raise BadParametersError("g must live in the ambient field")
    return g.eval_all()


# ---------------------------------------------------------------------------
# T8: u phi(x) + g(Tr(x))^q - g(Tr(x))
# ---------------------------------------------------------------------------

def linear_plus_trace_difference(
    field: Field, sub_order: int, phi: LinearizedPoly, g: SparsePoly, u
) -> Construction:
    """Valid c: the base subfield minus 1.  PcN on that set if and only if
    ker(phi) and ker(Tr) meet only in 0; the built diagnostics record it."""
    field.tower_degree(sub_order)
    u = _check_u(field, sub_order, u)
    _check_phi_strict(field, sub_order, phi)
    trace = LinearizedPoly.trace(field, sub_order)
    tr = trace.eval_all()
    gv = _g_table(field, g)
    g_tr = gv[tr]
    frob = field.pow_all(sub_order)
    values = field.add_arrays(
        field.mul_scalar(u, phi.eval_all()),
        field.sub_arrays(frob[g_tr], g_tr),
    )
    kernel_ok = (phi.kernel() & trace.kernel()) == {0}
    return Construction(
        family="T8",
        field=field,
        table=FuncTable(field, values),
        valid_cs=_subfield_cs(field, sub_order, "T8"),
        claim=Claim("eq", 1) if kernel_ok else Claim("exists_gt", 1),
        diagnostics={"kernel_condition": kernel_ok},
        params={
            "q": sub_order,
            "n": field.m // field.tower_degree(sub_order),
            "phi": phi.as_sparse().as_text(),
            "g": g.as_text(),
            "u": field.format_element(u),
        },
        hypothesis=lambda c: (
            "base-subfield" if c != 1 and field.in_subfield(c, sub_order) else None
        ),
    )


# ---------------------------------------------------------------------------
# T9: u (x^q - x) + g(Tr(x)) with g permuting the base subfield
# ---------------------------------------------------------------------------

def frobenius_difference_plus_trace(
    field: Field, sub_order: int, g: SparsePoly, u
) -> Construction:
    """Valid c: the base subfield minus 1; guarantee delta = 1 (needs p not
    dividing n and g restricting to a permutation of the subfield)."""
    s = field.tower_degree(sub_order)
    n = field.m // s
    if n % field.p == 0:
        raise BadNError(f"p = {field.p} must not divide n = {n}")
    u = _check_u(field, sub_order, u)
    gv = _g_table(field, g)
    sub = field.subfield(sub_order)
    image = gv[sub]
    if sorted(int(v) for v in image) != [int(v) for v in sub]:
        raise GNotSubfieldPermutationError(
            "g restricted to the base subfield must permute it"
        )
    tr = LinearizedPoly.trace(field, sub_order).eval_all()
    fd = LinearizedPoly.frobenius_difference(field, sub_order).eval_all()
    values = field.add_arrays(field.mul_scalar(u, fd), gv[tr])
    return Construction(
        family="T9",
        field=field,
        table=FuncTable(field, values),
        valid_cs=_subfield_cs(field, sub_order, "T9"),
        claim=Claim("eq", 1),
        params={
            "q": sub_order,
            "n": n,
            "g": g.as_text(),
            "u": field.format_element(u),
        },
        hypothesis=lambda c: (
            "base-subfield" if c != 1 and field.in_subfield(c, sub_order) else None
        ),
    )


# ---------------------------------------------------------------------------
# T10: u phi(x) + g(Tr(x)) with p | n and g preserving the subfield
# ---------------------------------------------------------------------------

def linear_plus_trace_composite(
    field: Field, sub_order: int, phi: LinearizedPoly, g: SparsePoly, u
) -> Construction:
    """Valid c: the base subfield minus 1.  PcN on that set if and only if
    ker(phi) and ker(Tr) meet only in 0."""
    s = field.tower_degree(sub_order)
    n = field.m // s
    if n % field.p != 0:
        raise BadNError(f"p = {field.p} must divide n = {n}")
    u = _check_u(field, sub_order, u)
    _check_phi_strict(field, sub_order, phi)
    gv = _g_table(field, g)
    sub = field.subfield(sub_order)
    if any(not field.in_subfield(int(v), sub_order) for v in gv[sub]):
        raise GEscapesSubfieldError("g must map the base subfield into itself")
    trace = LinearizedPoly.trace(field, sub_order)
    values = field.add_arrays(
        field.mul_scalar(u, phi.eval_all()), gv[trace.eval_all()]
    )
    kernel_ok = (phi.kernel() & trace.kernel()) == {0}
    return Construction(
        family="T10",
        field=field,
        table=FuncTable(field, values),
        valid_cs=_subfield_cs(field, sub_order, "T10"),
        claim=Claim("eq", 1) if kernel_ok else Claim("exists_gt", 1),
        diagnostics={"kernel_condition": kernel_ok},
        params={
            "q": sub_order,
            "n": n,
            "phi": phi.as_sparse().as_text(),
            "g": g.as_text(),
            "u": field.format_element(u),
        },
        hypothesis=lambda c: (
            "base-subfield" if c != 1 and field.in_subfield(c, sub_order) else None
        ),
    )


# ---------------------------------------------------------------------------
# T11 / C2: u phi(x) + sum_i g(x^q - x)^((q^n-1)/d_i)
# ---------------------------------------------------------------------------

def linear_plus_power_residue_sum(
    field: Field,
    sub_order: int,
    phi: LinearizedPoly,
    g: SparsePoly,
    u,
    d_list,
    family: str = "T11",
) -> Construction:
    """Additive map plus power-residue indicators of x^q - x.

    Diagnostics record the two structural conditions: ker(phi) meets the
    base subfield only in 0, and phi permutes the set J = {x^q - x}.  Both
    holding is equivalent to PcN on the subfield c-set; for even q, phi
    2-to-1 on the subfield plus permuting J gives delta = 2 instead.
    """
    s = field.tower_degree(sub_order)
    d_list = tuple(int(d) for d in d_list)
    if not d_list or any(d < 1 or (sub_order - 1) % d != 0 for d in d_list):
        raise BadDivisorListError(
            f"every d_i must divide q-1 = {sub_order - 1}"
        )
    u = _check_u(field, sub_order, u)
    if phi.field != field:
        raise BadParametersError("phi must live in the ambient field")
    if any(not field.in_subfield(c, sub_order) for c in phi.coeffs):
        raise CoeffOutsideSubfieldError("phi's coefficients must lie in the subfield")

    y = LinearizedPoly.frobenius_difference(field, sub_order).eval_all()
    gv = _g_table(field, g)
    g_y = gv[y]
    values = field.mul_scalar(u, phi.eval_all())
    for d in d_list:
        values = field.add_arrays(values, field.pow_array(g_y, (field.q - 1) // d))

    phi_all = phi.eval_all()
    big_j = np.unique(y)
    sub = field.subfield(sub_order)
    kernel = phi.kernel()
    kernel_sub_trivial = all(k == 0 or k not in set(int(v) for v in sub) for k in kernel)
    permutes_j = np.array_equal(np.unique(phi_all[big_j]), big_j)
    counts = np.bincount(phi_all[sub], minlength=field.q)
    two_to_one_on_sub = bool((counts[counts > 0] == 2).all()) if field.p == 2 else False

    if kernel_sub_trivial and permutes_j:
        claim = Claim("eq", 1)
    elif field.p == 2 and two_to_one_on_sub and permutes_j:
        claim = Claim("eq", 2)
    else:
        claim = Claim("exists_gt", 1)
    return Construction(
        family=family,
        field=field,
        table=FuncTable(field, values),
        valid_cs=_subfield_cs(field, sub_order, family),
        claim=claim,
        diagnostics={
            "kernel_meets_subfield_only_at_zero": kernel_sub_trivial,
            "phi_permutes_difference_set": bool(permutes_j),
            "phi_two_to_one_on_subfield": two_to_one_on_sub,
        },
        params={
            "q": sub_order,
            "n": field.m // s,
            "phi": phi.as_sparse().as_text(),
            "g": g.as_text(),
            "u": field.format_element(u),
            "d_list": d_list,
        },
        hypothesis=lambda c: (
            "base-subfield" if c != 1 and field.in_subfield(c, sub_order) else None
        ),
    )


# ---------------------------------------------------------------------------
# MONO: plain power maps (the known baselines)
# ---------------------------------------------------------------------------

def monomial(field: Field, exponent: int) -> Construction:
    """x^e with 0 -> 0; e = q-2 is the zero-extended inverse."""
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    return Construction(
        family="MONO",
        field=field,
        table=FuncTable(field, field.pow_all(exponent)),
        valid_cs=None,
        claim=Claim("none"),
        params={"exponent": exponent},
    )


# ---------------------------------------------------------------------------
# parameter-dict front door (CLI / manifest)
# ---------------------------------------------------------------------------

FAMILY_CODES = (
    "T1",
    "T2",
    "P1",
    "C1",
    "T4",
    "T5",
    "T6",
    "T7",
    "T8",
    "T9",
    "T10",
    "T11",
    "C2",
    "MONO",
)


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise BadParametersError(f"{q} is not a prime power")
    p = min(f for f in range(2, q + 1) if q % f == 0)
    s = 0
    while q % p == 0:
        q //= p
        s += 1
    if q != 1:
        raise BadParametersError("q must be a prime power")
    return p, s


def _need(params: Mapping, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise BadParametersError(f"missing parameters: {', '.join(missing)}")
    return [params[k] for k in keys]


def build_from_params(family: str, params: Mapping) -> Construction:
    """Build a family instance from a flat parameter mapping.

    Fields arrive as ``field: [p, m]`` or as ``q``/``n`` (base subfield
    order and extension degree); element parameters in literal notation;
    polynomial parameters in the mini-language.
    """
    family = family.upper()
    if family not in FAMILY_CODES:
        raise BadParametersError(f"unknown family {family!r}")

    if family == "T1":
        (p, m), l, u = _need(params, "field", "l", "u")
        return coset_multiplier(make_field(int(p), int(m)), int(l), u)

    if family == "T2":
        d, k, i, a1, a2, a3 = _need(params, "d", "k", "i", "a1", "a2", "a3")
        f = make_field(3, 3 * int(d))
        return signed_difference_power(
            f, int(d), int(k), int(i), int(a1), int(a2), int(a3)
        )

    if family == "P1":
        (p, m), fexpr, gamma = _need(params, "field", "f", "gamma")
        f = make_field(int(p), int(m))
        base = parse_poly(f, fexpr).to_table()
        return trace_switch(base, gamma)

    if family == "C1":
        m, k, gamma = _need(params, "m", "k", "gamma")
        f = make_field(2, 2 * int(m))
        return trace_perturbed_identity(f, int(k), gamma)

    if family == "T4":
        q, n, lexpr, gamma = _need(params, "q", "n", "L", "gamma")
        p, s = _prime_power(int(q))
        f = make_field(p, s * int(n))
        L = parse_linearized(f, lexpr, p)
        return linear_plus_trace_indicator(f, int(q), L, gamma)

    if family == "T5":
        m, k, gamma = _need(params, "m", "k", "gamma")
        f = make_field(2, int(m))
        return gold_plus_trace(f, int(k), gamma)

    if family == "T6":
        q, a0, a1 = _need(params, "q", "a0", "a1")
        p, s = _prime_power(int(q))
        f = make_field(p, 2 * s)
        return norm_plus_linear(f, a0, a1)

    if family == "T7":
        m, t = _need(params, "m", "t")
        f = make_field(2, int(m))
        return swapped_inverse(f, t)

    if family in ("T8", "T10"):
        q, n, phiexpr, gexpr, u = _need(params, "q", "n", "phi", "g", "u")
        p, s = _prime_power(int(q))
        f = make_field(p, s * int(n))
        phi = parse_linearized(f, phiexpr, int(q))
        g = parse_poly(f, gexpr)
        builder = (
            linear_plus_trace_difference if family == "T8" else linear_plus_trace_composite
        )
        return builder(f, int(q), phi, g, u)

    if family == "T9":
        q, n, gexpr, u = _need(params, "q", "n", "g", "u")
        p, s = _prime_power(int(q))
        f = make_field(p, s * int(n))
        return frobenius_difference_plus_trace(f, int(q), parse_poly(f, gexpr), u)

    if family in ("T11", "C2"):
        q, n, phiexpr, gexpr, u, d_list = _need(
            params, "q", "n", "phi", "g", "u", "d_list"
        )
        p, s = _prime_power(int(q))
        f = make_field(p, s * int(n))
        phi = parse_linearized(f, phiexpr, p)
        g = parse_poly(f, gexpr)
        if isinstance(d_list, str):
            d_list = [int(x) for x in d_list.split(",") if x.strip()]
        return linear_plus_power_residue_sum(
            f, int(q), phi, g, u, d_list, family=family
        )

    # MONO
    (p, m), e = _need(params, "field", "exponent")
    return monomial(make_field(int(p), int(m)), int(e))


# ---------------------------------------------------------------------------
# seeded sampling for property suites
# ---------------------------------------------------------------------------

def random_table(field: Field, rng: np.random.Generator) -> FuncTable:
    return FuncTable(field, rng.integers(0, field.q, size=field.q))


def random_sparse_poly(
    field: Field,
    rng: np.random.Generator,
    max_terms: int = 4,
    max_exp: int | None = None,
) -> SparsePoly:
    max_exp = field.q - 1 if max_exp is None else max_exp
    n_terms = int(rng.integers(1, max_terms + 1))
    exps = rng.choice(max_exp + 1, size=min(n_terms, max_exp + 1), replace=False)
    terms = [(int(e), int(rng.integers(1, field.q))) for e in exps]
    return SparsePoly(field, terms)


def random_linearized(
    field: Field,
    rng: np.random.Generator,
    base_order: int | None = None,
    coeff_pool=None,
) -> LinearizedPoly:
    base = field.p if base_order is None else base_order
    width = field.m // field.tower_degree(base)
    pool = np.arange(field.q) if coeff_pool is None else np.asarray(coeff_pool)
    while True:
        coeffs = [int(pool[rng.integers(0, len(pool))]) for _ in range(width)]
        if any(coeffs):
            return LinearizedPoly(field, base, coeffs)


def random_affine_permutation(
    field: Field, rng: np.random.Generator
) -> tuple[LinearizedPoly, int]:
    """A random (L, shift) with x -> L(x) + shift a permutation."""
    while True:
        L = random_linearized(field, rng)
        if L.is_permutation():
            return L, int(rng.integers(0, field.q))

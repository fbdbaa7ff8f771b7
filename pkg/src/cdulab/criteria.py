"""Executable forms of the supporting permutation/2-to-1 criteria.

Two kinds of checks, both used as independent cross-validators:

  * char-2 quadratic root counting: x^2 + a x + b has two roots exactly
    when Tr(b/a^2) = 0, verified against brute-force exhaustion;
  * the additive compositional criterion for maps of the shape
    f(x) = h(psi(x)) phi(x) + g(psi(x)): f permutes the field iff
    ker(phi) meets ker(psi) only in 0 and the reduced map
    x -> h(x) phi(x) + psi(g(x)) permutes the image set psi(F); in
    characteristic 2, a kernel intersection {0, alpha} plus the same
    reduced-map condition forces f to be 2-to-1 (one-way).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import HRangeViolationError, WrongCharacteristicError, ZeroAError
from .funcs import FuncTable, LinearizedPoly, SparsePoly
from .gf import Field

__all__ = [
    "quad_root_count",
    "quad_trace_census",
    "AgwInstance",
    "AgwPermutationCheck",
    "agw_permutation_check",
    "agw_2to1_check",
]


def quad_root_count(field: Field, a, b) -> tuple[int, int]:
    """Roots of x^2 + a x + b over GF(2^m) by exhaustion, plus Tr(b/a^2).

    Returns (count, trace); the count is 0 or 2, and count = 2 exactly
    when the trace flag is 0.
    """
    if field.p != 2:
        raise WrongCharacteristicError("quadratic root counting is a char-2 tool")
    a = field.element(a)
    b = field.element(b)
    if a == 0:
        raise ZeroAError("the linear coefficient a must be nonzero")
    count = 0
    for x in range(field.q):
        if field.mul(x, x) ^ field.mul(a, x) ^ b == 0:
            count += 1
    trace = field.abs_trace(field.div(b, field.mul(a, a)))
    return count, trace


def quad_trace_census(field: Field) -> bool:
    """Exhaustively confirm count = 2 <=> Tr(b/a^2) = 0 over all (a != 0, b).

    Vectorized sweep: for fixed a the values x^2 + a x enumerate the roots'
    b-histogram; the predicate is compared for every pair.
    """
    if field.p != 2:
        raise WrongCharacteristicError("quadratic census is a char-2 tool")
    q = field.q
    squares = field.pow_all(2)
    trace_table = LinearizedPoly.trace(field, 2).eval_all()
    for a in range(1, q):
        image = np.bitwise_xor(squares, field.mul_scalar(a, np.arange(q, dtype=np.int64)))
        counts = np.bincount(image, minlength=q)
        a_sq_inv = field.inv(field.mul(a, a))
        traces = trace_table[field.mul_scalar(a_sq_inv, np.arange(q, dtype=np.int64))]
        if not np.array_equal(counts == 2, traces == 0):
            return False
        if not set(np.unique(counts)) <= {0, 2}:
            return False
    return True


@dataclass(frozen=True)
class AgwInstance:
    """One instance of the compositional shape h(psi(x)) phi(x) + g(psi(x)).

    phi, psi are additive maps of the ambient field; h must send the
    psi-image into the nonzero part of the base subfield (checked at
    construction).
    """

    field: Field
    sub_order: int
    phi: LinearizedPoly
    psi: LinearizedPoly
    g: SparsePoly
    h: SparsePoly

    def __post_init__(self):
        self.field.tower_degree(self.sub_order)
        for poly in (self.phi, self.psi):
            if poly.field != self.field:
                raise ValueError("phi/psi must live in the ambient field")
        for poly in (self.g, self.h):
            if poly.field != self.field:
                raise ValueError("g/h must live in the ambient field")
        h_vals = self.h.eval_all()
        for v in self.psi_image():
            hv = int(h_vals[v])
            if hv == 0 or not self.field.in_subfield(hv, self.sub_order):
                raise HRangeViolationError(
                    "h must map the psi-image into the nonzero base subfield"
                )

    def psi_image(self) -> np.ndarray:
        return np.unique(self.psi.eval_all())

    def f_table(self) -> FuncTable:
        """h(psi(x)) phi(x) + g(psi(x)) as a table."""
        f = self.field
        psi_vals = self.psi.eval_all()
        h_vals = self.h.eval_all()[psi_vals]
        g_vals = self.g.eval_all()[psi_vals]
        return FuncTable(
            f, f.add_arrays(f.mul_arrays(h_vals, self.phi.eval_all()), g_vals)
        )

    def reduced_map_on_image(self) -> tuple[np.ndarray, np.ndarray]:
        """(image points s, values h(s) phi(s) + psi(g(s)))."""
        f = self.field
        image = self.psi_image()
        h_vals = self.h.eval_all()[image]
        phi_vals = self.phi.eval_all()[image]
        psi_of_g = self.psi.eval_all()[self.g.eval_all()[image]]
        return image, f.add_arrays(f.mul_arrays(h_vals, phi_vals), psi_of_g)


class AgwPermutationCheck(NamedTuple):
    kernels_meet_trivially: bool
    reduced_map_permutes_image: bool
    direct_permutation: bool


def agw_permutation_check(inst: AgwInstance) -> AgwPermutationCheck:
    """The two structural conditions and the direct permutation test.

    Contract under the criterion's hypotheses: the conjunction of the two
    conditions holds if and only if the direct test does.
    """
    cond1 = (inst.phi.kernel() & inst.psi.kernel()) == {0}
    image, reduced = inst.reduced_map_on_image()
    cond2 = bool(np.array_equal(np.unique(reduced), image))
    direct = inst.f_table().is_permutation()
    return AgwPermutationCheck(cond1, cond2, direct)


def agw_2to1_check(inst: AgwInstance, alpha) -> tuple[bool, bool]:
    """(hypotheses, direct_2to1) for the char-2 two-to-one variant.

    hypotheses: ker(phi) and ker(psi) meet exactly in {0, alpha} with
    alpha != 0, and the reduced map permutes the psi-image.  The criterion
    is one-way: hypotheses imply the direct test, never conversely.
    """
    if inst.field.p != 2:
        raise WrongCharacteristicError("the 2-to-1 variant is stated for char 2")
    alpha = inst.field.element(alpha)
    meet = inst.phi.kernel() & inst.psi.kernel()
    kernel_ok = alpha != 0 and meet == {0, alpha}
    image, reduced = inst.reduced_map_on_image()
    reduced_ok = bool(np.array_equal(np.unique(reduced), image))
    hypotheses = kernel_ok and reduced_ok
    direct = inst.f_table().is_2to1()
    return hypotheses, direct

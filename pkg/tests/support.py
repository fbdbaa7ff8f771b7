"""Shared helpers for the test suite."""

import numpy as np

from cdulab.criteria import AgwInstance
from cdulab.families import random_linearized, random_sparse_poly
from cdulab.funcs import LinearizedPoly, SparsePoly


def count_solutions(t, a, c, b) -> int:
    """Direct per-point recount of the c-differential equation at (a, b)."""
    f = t.field
    return sum(1 for x in range(f.q) if f.sub(t(f.add(x, a)), f.mul(c, t(x))) == b)


def seeded_agw_instances(field, sub_order, n, seed):
    """Random instances inside the compositional criterion's envelope:
    psi strictly subfield-linear, phi additive with subfield coefficients,
    h a nonzero subfield constant, g arbitrary."""
    rng = np.random.default_rng(seed)
    sub = field.subfield(sub_order)
    psis = [
        LinearizedPoly.trace(field, sub_order),
        LinearizedPoly.frobenius_difference(field, sub_order),
    ]
    out = []
    while len(out) < n:
        phi = random_linearized(field, rng, base_order=field.p, coeff_pool=sub)
        psi = psis[int(rng.integers(0, len(psis)))]
        g = random_sparse_poly(field, rng)
        h_const = int(sub[int(rng.integers(1, len(sub)))])
        out.append(
            AgwInstance(
                field=field,
                sub_order=sub_order,
                phi=phi,
                psi=psi,
                g=g,
                h=SparsePoly(field, [(0, h_const)]),
            )
        )
    return out

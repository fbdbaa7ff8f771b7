"""Family builders: preconditions, validity sets, and guarantee bounds."""

import numpy as np
import pytest

from cdulab.analyzer import delta_for_c, oracle_delta, spectrum
from cdulab.errors import (
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
from cdulab.families import (
    build_from_params,
    coset_multiplier,
    frobenius_difference_plus_trace,
    gold_plus_trace,
    linear_plus_power_residue_sum,
    linear_plus_trace_composite,
    linear_plus_trace_difference,
    linear_plus_trace_indicator,
    monomial,
    norm_plus_linear,
    random_sparse_poly,
    random_table,
    signed_difference_power,
    swapped_inverse,
    trace_perturbed_identity,
    trace_switch,
)
from cdulab.funcs import LinearizedPoly, SparsePoly, parse_linearized, parse_poly
from cdulab.gf import make_field


# ---------------------------------------------------------------------------
# T1: cyclotomic-class multiplier
# ---------------------------------------------------------------------------

def test_t1_preconditions(f7):
    with pytest.raises(BadDivisorError):
        coset_multiplier(f7, 4, 3)  # 4 does not divide 6
    with pytest.raises(ForbiddenUError):
        coset_multiplier(f7, 2, 1)
    with pytest.raises(ForbiddenUError):
        coset_multiplier(f7, 3, f7.from_int(1 - 3))


def test_t1_f7_exhaustive_vs_oracle(f7):
    con = coset_multiplier(f7, 2, 3)
    assert len(con.valid_cs) >= 1
    for c in con.valid_cs:
        d = delta_for_c(con.table, c).delta
        assert d <= 2
        assert d == oracle_delta(con.table, c)


def test_t1_valid_set_recheck_is_stable(f25):
    con = coset_multiplier(f25, 4, f25.primitive)
    for c in con.valid_cs:
        assert con.recheck(c) == con.valid_cs.branches[c]
    for c in range(25):
        if c != 1 and c not in con.valid_cs.branches:
            assert con.recheck(c) is None


def test_t1_branch_annotations_recorded(f25):
    con = coset_multiplier(f25, 4, f25.primitive)
    assert set(con.valid_cs.branches.values()) <= {"first", "second", "both"}
    assert con.valid_cs.branches[0] in ("second", "both")  # c = 0 always admits


def test_t1_bound_holds_everywhere_on_valid_set(f25):
    con = coset_multiplier(f25, 2, 3)
    rep = spectrum(con.table, con.valid_cs.cs)
    assert con.claim.check(rep.deltas())


def test_t1_c_zero_splits_by_multiplier_ratio(f25):
    """At c = 0 the map is a bijection (delta 1) exactly when the two class
    multipliers lie in the same power-residue class; otherwise one class is
    double-covered (delta 2).  This exact characterization is why the
    strict delta = 2 reading cannot hold for every generator u."""
    l = 4
    for u in f25.generators():
        con = coset_multiplier(f25, l, u)
        ratio = f25.div(f25.add(u, f25.from_int(l - 1)), f25.sub(u, 1))
        same_class = f25.coset_index(ratio, l) == 0
        d0 = delta_for_c(con.table, 0).delta
        assert con.table.is_permutation() == same_class
        assert d0 == (1 if same_class else 2)
        assert 0 in con.valid_cs  # second branch admits c = 0 unconditionally


# ---------------------------------------------------------------------------
# T2: quadratic-character twist in characteristic 3
# ---------------------------------------------------------------------------

def test_t2_preconditions(f27, f9):
    with pytest.raises(BadParametersError):
        signed_difference_power(f9, 1, 1, 0, 0, 1, 1)  # m != 3d
    with pytest.raises(BadParametersError):
        signed_difference_power(f27, 1, 3, 0, 0, 1, 1)  # k not in {d, 2d}
    with pytest.raises(BadParametersError):
        signed_difference_power(f27, 1, 1, 3, 0, 1, 1)  # i out of range
    with pytest.raises(BadParametersError):
        signed_difference_power(f27, 1, 1, 0, 1, 1, 1)  # a1+a2+a3 = 0 mod 3
    with pytest.raises(BadParametersError):
        signed_difference_power(make_field(2, 3), 1, 1, 0, 0, 1, 1)


@pytest.mark.parametrize("params,expected", [
    ((1, 1, 0, 0, 1, 1), None),   # bound only
    ((1, 2, 2, 1, 1, -1), 1),     # measured PcN instance
])
def test_t2_f27_bound_at_minus_one(f27, params, expected):
    con = signed_difference_power(f27, *params)
    (c,) = con.valid_cs.cs
    assert c == f27.neg(1)
    d = delta_for_c(con.table, c).delta
    assert d <= 2
    assert d == oracle_delta(con.table, c)
    if expected is not None:
        assert d == expected


# ---------------------------------------------------------------------------
# P1: switch across the trace hyperplane
# ---------------------------------------------------------------------------

def test_p1_preconditions(f8, f9):
    ident9 = SparsePoly(f9, [(1, 1)]).to_table()
    with pytest.raises(WrongCharacteristicError):
        trace_switch(ident9, 2)
    ident8 = SparsePoly(f8, [(1, 1)]).to_table()
    with pytest.raises(ZeroGammaError):
        trace_switch(ident8, 0)


def test_p1_zero_trace_gamma_keeps_linearity(f16):
    gamma = next(g for g in range(1, 16) if f16.abs_trace(g) == 0)
    ident = SparsePoly(f16, [(1, 1)]).to_table()
    con = trace_switch(ident, gamma)
    assert con.diagnostics["gamma_trace"] == 0
    for c in con.valid_cs:
        assert delta_for_c(con.table, c).delta == 1


def test_p1_zero_trace_gamma_preserves_spectrum(f16):
    inv = SparsePoly(f16, [(14, 1)]).to_table()
    gamma = next(g for g in range(1, 16) if f16.abs_trace(g) == 0)
    con = trace_switch(inv, gamma)
    cs = [c for c in range(16) if c != 1]
    assert spectrum(con.table, cs).deltas() == spectrum(inv, cs).deltas()


def test_p1_unit_trace_gamma_at_most_doubles(f8, rng):
    for _ in range(5):
        base = random_table(f8, rng)
        con = trace_switch(base, 1)  # Tr(1) = 1 for odd m
        assert con.diagnostics["gamma_trace"] == 1
        for c in range(8):
            if c == 1:
                continue
            assert (
                delta_for_c(con.table, c).delta <= 2 * delta_for_c(base, c).delta
            )


def test_p1_identity_plus_unit_trace_exact_values(f8):
    ident = SparsePoly(f8, [(1, 1)]).to_table()
    con = trace_switch(ident, 1)
    for c in range(8):
        if c == 1:
            continue
        d = delta_for_c(con.table, c).delta
        assert d == oracle_delta(con.table, c) <= 2


# ---------------------------------------------------------------------------
# C1: trace-perturbed identity
# ---------------------------------------------------------------------------

def test_c1_preconditions(f64):
    with pytest.raises(GammaNotDthRootError):
        trace_perturbed_identity(f64, 1, f64.primitive)  # w^3 != 1
    with pytest.raises(GammaNotDthRootError):
        trace_perturbed_identity(f64, 1, 0)
    with pytest.raises(BadParametersError):
        trace_perturbed_identity(make_field(2, 5), 1, 1)
    with pytest.raises(WrongCharacteristicError):
        trace_perturbed_identity(make_field(3, 4), 1, 1)


def test_c1_pcn_on_valid_set(f64):
    gamma = f64.pow(f64.primitive, 21)  # order-3 root of unity, gamma^3 = 1
    con = trace_perturbed_identity(f64, 1, gamma)
    assert con.params["d"] == 3
    assert 0 in con.valid_cs
    for c in con.valid_cs:
        assert delta_for_c(con.table, c).delta == 1
    # c = 0 valid means the map is a permutation
    assert con.table.is_permutation()


# ---------------------------------------------------------------------------
# T4: additive permutation plus indicator jump
# ---------------------------------------------------------------------------

def test_t4_preconditions(f25):
    L = parse_linearized(f25, "x", 5)
    with pytest.raises(BadGammaError):
        linear_plus_trace_indicator(f25, 5, L, 0)
    bad_gamma = next(g for g in range(1, 25) if f25.rel_trace(g, 5) != 0)
    with pytest.raises(BadGammaError):
        linear_plus_trace_indicator(f25, 5, L, bad_gamma)
    with pytest.raises(CoeffOutsideSubfieldError):
        linear_plus_trace_indicator(
            f25, 5, LinearizedPoly(f25, 5, [f25.primitive]), 1
        )
    singular = LinearizedPoly.frobenius_difference(f25, 5)
    gamma = next(g for g in range(1, 25) if f25.rel_trace(g, 5) == 0)
    with pytest.raises(NotAPermutationError):
        linear_plus_trace_indicator(f25, 5, singular, gamma)


def test_t4_identity_instance_f25(f25):
    L = parse_linearized(f25, "x", 5)
    for gamma in range(1, 25):
        if f25.rel_trace(gamma, 5) != 0:
            continue
        con = linear_plus_trace_indicator(f25, 5, L, gamma)
        for c in con.valid_cs:
            assert delta_for_c(con.table, c).delta == 1


def test_t4_valid_set_matches_trace_condition(f25):
    L = parse_linearized(f25, "x", 5)
    gamma = next(g for g in range(1, 25) if f25.rel_trace(g, 5) == 0)
    con = linear_plus_trace_indicator(f25, 5, L, gamma)
    for c in range(25):
        if c == 1:
            continue
        expected = f25.rel_trace(f25.div(gamma, f25.sub(1, c)), 5) == 0
        assert (c in con.valid_cs) == expected


# ---------------------------------------------------------------------------
# T5: Gold plus trace
# ---------------------------------------------------------------------------

def test_t5_preconditions(f9):
    with pytest.raises(EvenQuotientError):
        gold_plus_trace(make_field(2, 4), 2, 1)  # m/d = 2
    with pytest.raises(ZeroGammaError):
        gold_plus_trace(make_field(2, 5), 1, 0)
    with pytest.raises(WrongCharacteristicError):
        gold_plus_trace(f9, 1, 1)


def test_t5_f32_exact_deltas(f32):
    con = gold_plus_trace(f32, 1, f32.primitive)
    assert con.valid_cs.cs == (0,)
    for c in con.valid_cs:
        d = delta_for_c(con.table, c).delta
        assert d == oracle_delta(con.table, c)
        assert d <= 2


# ---------------------------------------------------------------------------
# T6: norm-type binomial plus linear part
# ---------------------------------------------------------------------------

def test_t6_preconditions(f9):
    with pytest.raises(DegenerateCoefficientsError):
        norm_plus_linear(f9, 2, f9.pow(2, 3))
    with pytest.raises(BadParametersError):
        norm_plus_linear(make_field(3, 3), 0, 1)


def test_t6_f9_exhaustive_all_pairs(f9):
    hits = 0
    for a0 in range(9):
        for a1 in range(9):
            if a1 == f9.pow(a0, 3):
                continue
            con = norm_plus_linear(f9, a0, a1)
            assert con.valid_cs.cs == (0, 2)
            for c in con.valid_cs:
                assert delta_for_c(con.table, c).delta == 2
            hits += 1
    assert hits == 9 * 9 - 9


# ---------------------------------------------------------------------------
# T7: swapped inverse
# ---------------------------------------------------------------------------

def test_t7_preconditions(f16, f9):
    with pytest.raises(ZeroTError):
        swapped_inverse(f16, 0)
    with pytest.raises(WrongCharacteristicError):
        swapped_inverse(f9, 1)


def test_t7_f16_bound_and_exact_values(f16):
    con = swapped_inverse(f16, 1)
    assert con.table(1) == 0 and con.table(0) == f16.pow(1, 14)
    for c in con.valid_cs:
        assert f16.abs_trace(c) == 1 and f16.abs_trace(f16.inv(c)) == 1
        d = delta_for_c(con.table, c).delta
        assert d <= 3
        assert d == oracle_delta(con.table, c)


# ---------------------------------------------------------------------------
# T8/T9/T10: trace-composite families
# ---------------------------------------------------------------------------

def u_f4(field):
    return int(field.subfield(4)[2])  # a fixed nonzero element of F_4 minus {0,1}


def test_t8_preconditions(f64):
    phi = parse_linearized(f64, "x", 4)
    g = parse_poly(f64, "x")
    with pytest.raises(BadUError):
        linear_plus_trace_difference(f64, 4, phi, g, 0)
    with pytest.raises(BadUError):
        linear_plus_trace_difference(f64, 4, phi, g, f64.primitive)  # outside F_4
    with pytest.raises(CoeffOutsideSubfieldError):
        linear_plus_trace_difference(
            f64, 4, LinearizedPoly(f64, 4, [f64.primitive]), g, 1
        )
    tr = LinearizedPoly.trace(f64, 4)
    two_term = LinearizedPoly(f64, 4, [1, 1])  # x + x^4: (1+1) = 0 in char 2
    with pytest.raises(PhiOneZeroError):
        linear_plus_trace_difference(f64, 4, two_term, g, 1)


def test_t8_identity_phi_is_pcn(f64, rng):
    phi = parse_linearized(f64, "x", 4)
    for _ in range(3):
        g = random_sparse_poly(f64, rng)
        con = linear_plus_trace_difference(f64, 4, phi, g, u_f4(f64))
        assert con.diagnostics["kernel_condition"]
        for c in con.valid_cs:
            assert delta_for_c(con.table, c).delta == 1


def test_t8_failing_kernel_denies_pcn(f64, rng):
    # phi = Tr has ker(phi) = ker(Tr) != {0}: the only-if direction
    phi = LinearizedPoly.trace(f64, 4)
    g = random_sparse_poly(f64, rng)
    con = linear_plus_trace_difference(f64, 4, phi, g, 1)
    assert not con.diagnostics["kernel_condition"]
    deltas = spectrum(con.table, con.valid_cs.cs).deltas()
    assert con.claim.kind == "exists_gt"
    assert con.claim.check(deltas)


def test_t8_zero_g_reduces_to_scaled_phi(f64):
    phi = parse_linearized(f64, "x", 4)
    con = linear_plus_trace_difference(f64, 4, phi, SparsePoly(f64, []), 1)
    assert con.table.is_permutation()
    for c in con.valid_cs:
        assert delta_for_c(con.table, c).delta == 1


def test_t9_preconditions(f64, f27):
    with pytest.raises(BadNError):
        frobenius_difference_plus_trace(f27, 3, parse_poly(f27, "x"), 1)  # 3 | 3
    with pytest.raises(GNotSubfieldPermutationError):
        frobenius_difference_plus_trace(f64, 4, SparsePoly(f64, []), 1)
    with pytest.raises(BadUError):
        frobenius_difference_plus_trace(f64, 4, parse_poly(f64, "x"), 0)


def test_t9_g_frobenius_is_pcn(f64):
    for g_text in ("x^2", "x"):
        con = frobenius_difference_plus_trace(f64, 4, parse_poly(f64, g_text), u_f4(f64))
        assert len(con.valid_cs) == 3  # F_4 minus 1
        for c in con.valid_cs:
            assert delta_for_c(con.table, c).delta == 1


def test_t10_preconditions(f64, f27):
    phi27 = parse_linearized(f27, "x", 3)
    with pytest.raises(BadNError):
        linear_plus_trace_composite(f64, 4, parse_linearized(f64, "x", 4),
                                    parse_poly(f64, "x"), 1)  # 2 does not divide 3
    with pytest.raises(GEscapesSubfieldError):
        linear_plus_trace_composite(
            f27, 3, phi27, parse_poly(f27, "w x"), 2
        )


def test_t10_identity_phi_is_pcn(f27):
    con = linear_plus_trace_composite(
        f27, 3, parse_linearized(f27, "x", 3), parse_poly(f27, "x^2"), 2
    )
    assert con.valid_cs.cs == (0, 2)
    for c in con.valid_cs:
        assert delta_for_c(con.table, c).delta == 1


def test_t10_failing_kernel_denies_pcn(f64):
    """Only-if direction: phi = x^4 + x^2 + x over GF(2^6) viewed over
    GF(2) has phi(1) = 1 but kernel F_4, which meets ker(Tr); some valid c
    must then exceed delta 1."""
    phi = LinearizedPoly(f64, 2, [1, 1, 1])
    assert phi.eval(1) == 1
    tr = LinearizedPoly.trace(f64, 2)
    assert (phi.kernel() & tr.kernel()) != {0}
    con = linear_plus_trace_composite(f64, 2, phi, parse_poly(f64, "x^2"), 1)
    assert not con.diagnostics["kernel_condition"]
    assert con.claim.kind == "exists_gt"
    deltas = spectrum(con.table, con.valid_cs.cs).deltas()
    assert con.claim.check(deltas)


# ---------------------------------------------------------------------------
# T11 / C2: power-residue sums
# ---------------------------------------------------------------------------

def test_t11_preconditions(f81):
    phi = parse_linearized(f81, "x", 3)
    g = parse_poly(f81, "x")
    with pytest.raises(BadDivisorListError):
        linear_plus_power_residue_sum(f81, 9, phi, g, 2, [3])  # 3 does not divide 8
    with pytest.raises(BadDivisorListError):
        linear_plus_power_residue_sum(f81, 9, phi, g, 2, [])
    with pytest.raises(BadUError):
        linear_plus_power_residue_sum(f81, 9, phi, g, f81.primitive, [2])


def test_t11_odd_char_pcn_instance(f81):
    con = linear_plus_power_residue_sum(
        f81, 9, parse_linearized(f81, "x", 3), parse_poly(f81, "x"), 2, [2, 8]
    )
    assert con.diagnostics["kernel_meets_subfield_only_at_zero"]
    assert con.diagnostics["phi_permutes_difference_set"]
    assert con.claim.kind == "eq" and con.claim.value == 1
    for c in con.valid_cs:
        assert delta_for_c(con.table, c).delta == 1


def test_c2_char2_apcn_instance(f64):
    con = linear_plus_power_residue_sum(
        f64, 4, parse_linearized(f64, "x^2 + x", 2), parse_poly(f64, "x"),
        1, [3], family="C2",
    )
    assert not con.diagnostics["kernel_meets_subfield_only_at_zero"]
    assert con.diagnostics["phi_two_to_one_on_subfield"]
    assert con.diagnostics["phi_permutes_difference_set"]
    assert con.claim.kind == "eq" and con.claim.value == 2
    for c in con.valid_cs:
        assert delta_for_c(con.table, c).delta == 2


# ---------------------------------------------------------------------------
# MONO baselines
# ---------------------------------------------------------------------------

def test_mono_square_f5(f5):
    con = monomial(f5, 2)
    for c in (0, 2, 3, 4):
        assert delta_for_c(con.table, c).delta == 2


def test_mono_inverse_convention(f16):
    con = monomial(f16, 14)
    assert con.table(0) == 0
    for x in range(1, 16):
        assert con.table(x) == f16.inv(x)


def test_mono_half_power_f9_matches_oracle(f9):
    con = monomial(f9, 2)  # (3^1 + 1)/2
    for c in range(9):
        if c == 1:
            continue
        assert delta_for_c(con.table, c).delta == oracle_delta(con.table, c)


def test_mono_rejects_zero_exponent(f5):
    with pytest.raises(ValueError):
        monomial(f5, 0)


# ---------------------------------------------------------------------------
# the parameter-dict front door
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("family,params", [
    ("T1", {"field": [7, 1], "l": 2, "u": "3"}),
    ("T2", {"d": 1, "k": 2, "i": 2, "a1": 1, "a2": 1, "a3": -1}),
    ("P1", {"field": [2, 3], "f": "x", "gamma": "w^0"}),
    ("C1", {"m": 3, "k": 1, "gamma": "w^21"}),
    ("T4", {"q": 25, "n": 2, "L": "x", "gamma": "w^13"}),
    ("T5", {"m": 5, "k": 1, "gamma": "w"}),
    ("T6", {"q": 3, "a0": "2", "a1": "1"}),
    ("T7", {"m": 4, "t": "w^3"}),
    ("T8", {"q": 4, "n": 3, "phi": "x", "g": "w^5 x^3 + w^2", "u": "w^21"}),
    ("T9", {"q": 4, "n": 3, "g": "x^2", "u": "w^21"}),
    ("T10", {"q": 3, "n": 3, "phi": "x", "g": "x^2", "u": "2"}),
    ("T11", {"q": 9, "n": 2, "phi": "x", "g": "x", "u": "2", "d_list": [2, 8]}),
    ("C2", {"q": 16, "n": 3, "phi": "x^2 + x", "g": "x", "u": "1", "d_list": "3,5"}),
    ("MONO", {"field": [5, 1], "exponent": 2}),
])
def test_build_from_params_all_families(family, params):
    con = build_from_params(family, params)
    assert con.family == family
    assert con.table.field.q == len(con.table.values)


def test_build_from_params_missing_key():
    with pytest.raises(BadParametersError):
        build_from_params("T1", {"field": [7, 1], "l": 2})
    with pytest.raises(BadParametersError):
        build_from_params("NOPE", {})


def test_random_generators_deterministic(f16):
    a = random_table(f16, np.random.default_rng(5))
    b = random_table(f16, np.random.default_rng(5))
    assert a == b
    pa = random_sparse_poly(f16, np.random.default_rng(5))
    pb = random_sparse_poly(f16, np.random.default_rng(5))
    assert pa == pb

import itertools

import pytest
from hypothesis import given, strategies as st

from kcalc.ahss import CohomologyTable, iter_multisets
from kcalc.charring import sp, spin, su
from kcalc.criteria import (NOT_SURJECTIVE, SURJECTIVE, UNDETERMINED, SimpleFactorData, SurjectivityVerdict,
                            catalog_lookup, conjugation_trivial, cp_k_model, dim7_realification_surjective,
                            dim7_verdicts, enumerate_flag_products, factor_from_group_data, flag_surjective,
                            h_minus_catalog, load_dim7_table, load_flag_catalog, product_combinator,
                            s2_times_wu_cokernel, s8n_combinator, sphere_k_model, sphere_tuple_mechanism,
                            sphere_tuple_scsq, witt_degree_zero_dimension)
from kcalc.errors import DataError, OutOfScopeError, PreconditionError, StructuralError
from kcalc.exactlin import FinAbGroup
from kcalc.tate import h_minus

CATALOG = load_flag_catalog()
PAPER_FLAGS = {
    ("SU(2)",), ("SU(3)",), ("SU(4)",), ("SU(5)",), ("SU(7)",), ("Spin(7)",), ("G2",),
    ("SU(2)", "SU(2)"), ("SU(2)", "SU(2)", "SU(2)"), ("SU(3)", "SU(3)"), ("SU(3)", "SU(3)", "SU(3)"),
    ("SU(3)", "SU(4)"), ("SU(3)", "SU(5)"), ("G2", "SU(3)"),
}
Z2 = FinAbGroup(0, (2,))
S = SurjectivityVerdict(SURJECTIVE, "r", "c")
N = SurjectivityVerdict(NOT_SURJECTIVE, "r", "c")
U = SurjectivityVerdict(UNDETERMINED)


def flag(*names):
    return flag_surjective(catalog_lookup(names))


# ------------------------------------------------------------------ flags

def test_flag_examples():
    assert flag("SU(3)").surjective
    assert flag("SU(2)", "SU(2)", "SU(2)", "SU(2)").verdict == NOT_SURJECTIVE
    assert flag("SU(3)", "G2").surjective
    assert flag("Sp(1)", "Sp(1)").surjective  # Sp(1) = SU(2)
    assert not flag("SU(5)", "SU(5)").surjective


def test_enumeration_matches_list():
    assert set(enumerate_flag_products(CATALOG, 3)) == PAPER_FLAGS
    assert set(enumerate_flag_products(CATALOG, 4)) == PAPER_FLAGS


def test_enumeration_pairs_and_empty():
    pairs = [p for p in enumerate_flag_products(CATALOG, 2) if len(p) == 2]
    assert ("SU(3)", "SU(5)") in pairs and ("SU(5)", "SU(5)") not in pairs
    assert enumerate_flag_products([], 3) == []


def test_flag_rule_matches_exterior_algebra_count():
    # alpha_O onto iff the degree-0 part of the graded exterior algebra is 1-dimensional
    for k in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(CATALOG[:12], k):
            assert flag_surjective(combo).surjective == (witt_degree_zero_dimension(combo) == 1), combo


@pytest.mark.parametrize("g", [su(2), su(3), su(4), su(5), su(6), su(7), sp(2), sp(3), spin(7), spin(8),
                               spin(9), spin(10), spin(11), spin(12)])
def test_catalog_agrees_with_character_data(g):
    f = factor_from_group_data(g)
    (c,) = catalog_lookup([g.name])
    assert (f.b_C, f.b_R, f.b_H) == (c.b_C, c.b_R, c.b_H)


def test_factor_validation():
    with pytest.raises(DataError):
        SimpleFactorData("X", 2, 1, 1, 0, False)  # odd b_C
    with pytest.raises(DataError):
        SimpleFactorData("X", 3, 0, 1, 0, True)  # counts do not add up
    with pytest.raises(DataError):
        SimpleFactorData("SU(3)", 2, 0, 2, 0, True)  # contradicts type rule


def test_verdict_needs_citation():
    with pytest.raises(StructuralError):
        SurjectivityVerdict(SURJECTIVE)


# ------------------------------------------------------------------ dim 7

def test_dim7_examples():
    rows = {r.name: r for r in load_dim7_table()}
    assert len(rows) == 9
    assert dim7_realification_surjective(rows["Wu"].table()).verdict == NOT_SURJECTIVE
    assert dim7_realification_surjective(rows["B7"].table()).surjective
    assert dim7_realification_surjective(rows["W7_pq"].table()).surjective


def test_dim7_rule_by_hand():
    # no 2-torsion in H^{n-2} <=> surjective, for rows with torsion-free H^5
    for r in load_dim7_table():
        h5 = r.groups.get(5, FinAbGroup())
        hn2 = r.groups.get(r.dimension - 2, FinAbGroup())
        if not h5.torsion:
            expected = SURJECTIVE if not hn2.has_two_torsion() else NOT_SURJECTIVE
            assert dim7_realification_surjective(r.table()).verdict == expected, r.name


def test_dim7_verdicts():
    v = dim7_verdicts()
    assert {k for k, x in v.items() if not x.surjective} == {"Wu", "S2xWu"}
    assert v["S2xWu"].rule == "S2xWu-cokernel"
    assert {"S2xS5", "S3xS4", "CP3", "S2xCP2"} <= set(v)


def test_s2_times_wu_path():
    p = s2_times_wu_cokernel()
    assert p.cokernel == Z2 and p.d3_vanish and p.generator_is_w2


def test_dim7_out_of_scope():
    t = CohomologyTable.from_groups("S8", 8, {0: FinAbGroup(1), 8: FinAbGroup(1)}, sq2_zero=True)
    with pytest.raises(OutOfScopeError):
        dim7_realification_surjective(t)


# ------------------------------------------------------------------ spheres

def test_sphere_examples():
    assert sphere_tuple_scsq([4, 4, 3]).verdict == UNDETERMINED
    assert sphere_tuple_scsq([2, 2, 2]).surjective
    assert sphere_tuple_scsq([8, 4, 4]).surjective
    assert sphere_tuple_scsq([2, 6]).verdict == UNDETERMINED


def test_sphere_preconditions():
    with pytest.raises(PreconditionError):
        sphere_tuple_scsq([])
    with pytest.raises(PreconditionError):
        sphere_tuple_scsq([0, 4])


def test_table_agrees_with_mechanism():
    for dims in iter_multisets(18, 2):
        a, b = sphere_tuple_scsq(dims), sphere_tuple_mechanism(dims)
        assert a.surjective == b.surjective, dims


@given(st.lists(st.integers(1, 20), min_size=1, max_size=4), st.randoms(use_true_random=False),
       st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_sphere_shift_and_permutation(dims, rnd, shifts):
    base = sphere_tuple_scsq(dims).verdict
    moved = [d + 8 * s for d, s in zip(dims, shifts)]
    rnd.shuffle(moved)
    assert sphere_tuple_scsq(moved).verdict == base


# ------------------------------------------------------------------ combinators

def test_product_combinator_examples():
    assert product_combinator(S, S, True, False).surjective
    assert product_combinator(S, S, False, False).verdict == NOT_SURJECTIVE
    assert product_combinator(N, S, True, True).verdict == NOT_SURJECTIVE
    assert product_combinator(U, S, True, True).verdict == UNDETERMINED


def test_product_combinator_commutative():
    for v1, v2 in itertools.product((S, N, U), repeat=2):
        for h1, h2 in itertools.product((True, False), repeat=2):
            assert product_combinator(v1, v2, h1, h2).verdict == product_combinator(v2, v1, h2, h1).verdict


def test_s8n():
    assert s8n_combinator(S).surjective
    assert s8n_combinator(N).verdict == UNDETERMINED


def test_conjugation_trivial():
    assert conjugation_trivial(["Sp(1)"] * 3)
    assert conjugation_trivial(["Spin(8)", "G2", "Spin(7)"])
    assert not conjugation_trivial(["SU(3)"])
    assert not conjugation_trivial(["Spin(10)"])
    assert not conjugation_trivial(["E6"])


# ------------------------------------------------------------------ h-

def test_h_minus_catalog():
    cat = h_minus_catalog(2)
    for n in range(3):
        assert cat[f"S{8 * n + 2}"] == Z2 and cat[f"S{8 * n + 6}"] == Z2
        assert cat[f"S{8 * n + 4}"].is_trivial and cat[f"S{8 * n + 8}"].is_trivial
        assert cat[f"CP{2 * n + 1}"] == Z2 and cat[f"HP{n + 1}"].is_trivial


def test_cp_model_is_conjugation():
    # t(x) = (1+x)^-1 - 1 is an involution and h- of CP^m is Z_2 for m odd
    for m in range(1, 7):
        assert h_minus(cp_k_model(m)) == (Z2 if m % 2 else FinAbGroup())
    with pytest.raises(PreconditionError):
        sphere_k_model(3)

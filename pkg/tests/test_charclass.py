import random
from math import comb

import pytest

from kcalc.berger import b13_cohomology_ring
from kcalc.charclass import (TruncGradedRing, chern_of_combination, chern_of_laurent, conjugate_class,
                             exterior_ring, pontryagin_closed_form, pontryagin_from_chern, pontryagin_of_ko_class,
                             restrict_mod2, rp_ring, rp_sw, series_inverse, sw_from_fibre, sw_from_wu, total,
                             wu_classes)
from kcalc.errors import DataError, OutOfScopeError, StructuralError

R = b13_cohomology_ring()
ONE = R.one()
B = R.element({"b": 1})
B2, B4 = B ** 2, B ** 4
# y = b + b^-1 - 2 and y^2 as Laurent polynomials in the line class b
Y = {(1,): 1, (-1,): 1, (0,): -2}
Y2 = {(2,): 1, (-2,): 1, (1,): -4, (-1,): -4, (0,): 6}


def c_of(poly, sign=1):
    return chern_of_laurent(R, poly, [B.scale(sign)])


def test_ring_data():
    assert R.check_cartan() == []
    assert B ** 3 * 5 == R.element()  # 5 b^3 = 0
    assert (B ** 5).is_zero()


def test_series_inverse_examples():
    assert series_inverse(ONE) == ONE
    inv = series_inverse(ONE - B2)
    assert inv == ONE + B2 + B4
    assert inv * (ONE - B2) == ONE


def test_series_inverse_rejects_non_unit():
    with pytest.raises(StructuralError):
        series_inverse(B2)


def test_series_inverse_random():
    rng = random.Random(200)
    g = R.element({"g": 1})
    for _ in range(200):
        t = ONE + B.scale(rng.randint(-9, 9)) + B2.scale(rng.randint(-9, 9)) + g.scale(rng.randint(-3, 3)) \
            + B4.scale(rng.randint(-9, 9))
        inv = series_inverse(t)
        assert inv * t == ONE and t * inv == ONE


def test_chern_examples():
    for s in (1, -1):
        assert c_of({(1,): 1, (0,): -1}, s) == ONE + B.scale(s)  # c(u) = 1 ± b
        assert c_of(Y, s) == ONE - B2
        # (1 - 4b^2)(1 - b^2)^-4 = 1 - 6b^4 = 1 - b^4
        assert c_of(Y2, s) == ONE - B4
    assert c_of({}) == ONE


def test_c_y2_by_hand():
    lhs = (ONE - B2.scale(4)) * series_inverse(ONE - B2) ** 4
    assert lhs == ONE - B4.scale(6) == ONE - B4


def test_whitney():
    rng = random.Random(4)
    for _ in range(30):
        p = {(rng.randint(-3, 3),): rng.randint(-2, 2) for _ in range(3)}
        q = {(rng.randint(-3, 3),): rng.randint(-2, 2) for _ in range(3)}
        s = dict(p)
        for m, v in q.items():
            s[m] = s.get(m, 0) + v
        assert c_of(s) == c_of(p) * c_of(q)


def test_chern_of_combination():
    data = {"u": ONE + B, "y": ONE - B2}
    assert chern_of_combination(data, {"u": 2, "y": -1}) == (ONE + B) ** 2 * (ONE + B2 + B4)
    assert chern_of_combination(data, {}) == ONE
    with pytest.raises(OutOfScopeError):
        chern_of_combination(data, {"z": 1})


def test_conjugate_class():
    c = ONE + B + B2
    assert conjugate_class(c) == ONE - B + B2


def test_pontryagin_examples():
    assert pontryagin_from_chern(ONE - B2) == ONE + B2       # p(y')
    assert pontryagin_from_chern(ONE) == ONE                # p(w)
    assert pontryagin_from_chern(ONE - B4) == ONE - B4      # p(y'^2)


def test_pontryagin_of_ko_class_examples():
    cy, cy2 = c_of(Y), c_of(Y2)
    assert pontryagin_of_ko_class(cy, cy2, 0, 0, 1) == ONE
    assert pontryagin_of_ko_class(cy, cy2, 1, 0, 0) == ONE + B2
    assert pontryagin_of_ko_class(cy, cy2, 0, 0, 0) == ONE


@pytest.mark.parametrize("sign", [1, -1])
def test_pontryagin_scan(sign):
    cy, cy2 = c_of(Y, sign), c_of(Y2, sign)
    trivial = []
    for mu in range(10):
        for nu in range(5):
            for delta in range(2):
                p = pontryagin_of_ko_class(cy, cy2, mu, nu, delta)
                # closed form, with C(mu, 2) computed independently
                assert p == ONE + B2.scale(mu) + B4.scale(comb(mu, 2) - nu)
                assert p == pontryagin_closed_form(R, "b", mu, nu)
                if p == ONE:
                    trivial.append((mu, nu, delta))
    assert trivial == [(0, 0, 0), (0, 0, 1)]


def _b13_sw():
    low = sw_from_fibre(R, rp_ring(5), {"b": frozenset({(2,)}), "g": frozenset()}, rp_sw(5), 5)
    wu = wu_classes(R, low)
    return wu, sw_from_wu(R, wu.nu)


def test_b13_wu_and_sw():
    wu, w = _b13_sw()
    assert R.fmt2(total(wu.nu)) == "1 + b"
    assert R.fmt2(total(w)) == "1 + b + b^2"


def test_b13_sw_restricts_to_rp5():
    _, w = _b13_sw()
    img = restrict_mod2(R, rp_ring(5), {"b": frozenset({(2,)}), "g": frozenset()}, total(w))
    assert img == frozenset({(0,), (2,), (4,)})
    assert total(rp_sw(5)) == img


def test_rp_sw():
    # (1 + a)^(n+1) mod 2
    assert total(rp_sw(5)) == frozenset({(0,), (2,), (4,)})
    assert total(rp_sw(3)) == frozenset({(0,)})
    assert total(rp_sw(2)) == frozenset({(0,), (1,), (2,)})


@pytest.mark.parametrize("n", [2, 3, 4, 7, 8])
def test_sphere_wu_trivial(n):
    s = exterior_ring([n])
    wu = wu_classes(s)
    assert total(wu.nu) == frozenset({s.unit})
    assert total(sw_from_wu(s, wu.nu)) == frozenset({s.unit})


def test_cp2_wu():
    # Sq^2 x = x^2 on CP^2, so nu_2 = x and w = 1 + x + x^2
    cp2 = TruncGradedRing(("x",), (2,), 4, {(0,): 0, (1,): 0, (2,): 0}, frozenset({(0,), (1,), (2,)}),
                          sq2={(1,): frozenset({(2,)})})
    wu = wu_classes(cp2)
    assert wu.nu[2] == frozenset({(1,)})
    assert total(sw_from_wu(cp2, wu.nu)) == frozenset({(0,), (1,), (2,)})


def test_degenerate_pairing():
    bad = TruncGradedRing(("a", "t"), (1, 4), 4, {(0, 0): 0, (1, 0): 0, (0, 1): 0},
                          frozenset({(0, 0), (1, 0), (0, 1)}))
    with pytest.raises(DataError):
        wu_classes(bad)


def test_bad_ring_data():
    with pytest.raises(StructuralError):
        TruncGradedRing(("x",), (2,), 4, {(0,): 0, (2,): 0}, frozenset())
    with pytest.raises(StructuralError):
        TruncGradedRing(("x",), (2,), 4, {(0,): 0, (1,): 0}, frozenset({(1,)}), sq2={(1,): frozenset({(1,)})})

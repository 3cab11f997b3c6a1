from fractions import Fraction

import pytest

from krfoam.ring import (
    Field,
    Poly,
    QQ,
    laurent_mul,
    newton_convert,
    qbinom,
    quantum_int,
    sl2_on_poly,
)


def test_char_two_rejected():
    with pytest.raises(ValueError):
        Field(2)


def test_field_fp():
    F = Field(3)
    assert F.of(Fraction(1, 2)) == 2  # 1/2 = 2 mod 3
    assert F.inv(2) == 2


def test_quantum_int():
    assert quantum_int(1) == {0: 1}
    assert quantum_int(2) == {1: 1, -1: 1}
    assert quantum_int(3) == {2: 1, 0: 1, -2: 1}
    assert quantum_int(-2) == {1: -1, -1: -1}
    # [2][3] = [4] + [2]
    assert laurent_mul(quantum_int(2), quantum_int(3)) == {3: 1, 1: 2, -1: 2, -3: 1}


def test_qbinom():
    assert qbinom(2, 1) == quantum_int(2)
    assert qbinom(4, 2) == {4: 1, 2: 1, 0: 2, -2: 1, -4: 1}
    # [N choose a] is symmetric and specializes to binomials at q=1
    b = qbinom(5, 2)
    assert b == {-k: v for k, v in b.items()}
    assert sum(b.values()) == 10


def test_newton_power_sums():
    # N = 2: p_1 = E1, p_2 = E1^2 - 2E2
    p2 = newton_convert(2, "p", 2)
    E1 = Poly.var(QQ, "E1")
    E2 = Poly.var(QQ, "E2")
    assert p2 == E1 * E1 - E2.scale(2)
    # h_2 = E1^2 - E2
    h2 = newton_convert(2, "h", 2)
    assert h2 == E1 * E1 - E2
    # degree check: p_j homogeneous of degree 2j
    assert newton_convert(3, "p", 4).degree() == 6


def test_sl2_derivation_rules():
    E1 = Poly.var(QQ, "E1")
    E2 = Poly.var(QQ, "E2")
    # N=2: e(E2) = -E1, e(E1) = -2
    assert sl2_on_poly("e", E2, 2) == -E1
    assert sl2_on_poly("e", E1, 2) == Poly.const(QQ, -2)
    # f(E1) = E1^2 - 2E2 for N=2
    assert sl2_on_poly("f", E1, 2) == E1 * E1 - E2.scale(2)
    # h = -deg
    assert sl2_on_poly("h", E2, 2) == E2.scale(-4)


def test_sl2_relations_on_polys():
    # [e,f] = h and [h,e] = 2e on a sample of polynomials, N = 2 and 3
    for N in (2, 3):
        samples = [
            Poly.var(QQ, "E1", 2),
            Poly.var(QQ, "E2") * Poly.var(QQ, "x"),
            Poly.var(QQ, "x", 3),
        ]
        if N >= 3:
            samples.append(Poly.var(QQ, "E3"))
        for p in samples:
            ef = sl2_on_poly("e", sl2_on_poly("f", p, N), N)
            fe = sl2_on_poly("f", sl2_on_poly("e", p, N), N)
            assert ef - fe == sl2_on_poly("h", p, N)
            he = sl2_on_poly("h", sl2_on_poly("e", p, N), N)
            eh = sl2_on_poly("e", sl2_on_poly("h", p, N), N)
            assert he - eh == sl2_on_poly("e", p, N).scale(2)


def test_substitute_and_coefficient():
    x = Poly.var(QQ, "x")
    E1 = Poly.var(QQ, "E1")
    p = x * x + E1 * x
    q = p.substitute({"x": E1})
    assert q == (E1 * E1).scale(2)
    assert p.coefficient_of("x", 1) == E1

import pytest

from krfoam.ring import Field, laurent_mul, quantum_int
from krfoam.diagrams import LinkDiagram, parse_braid, parse_pd
from krfoam.invariants import (
    _web_value_algebraic,
    jordan_blocks,
    laurent_mod_cyclotomic,
    moy_polynomial,
    moy_series,
    pdg_e_report,
    pdg_f_report,
    rasmussen_s,
)

UNKNOT = LinkDiagram(crossings=[], joins=[], free_circles=1)


def test_moy_unknot_is_quantum_n():
    for N in (2, 3, 5):
        assert moy_polynomial(UNKNOT, N) == quantum_int(N)


def test_moy_known_values():
    hopf = moy_polynomial(parse_braid("s1 s1"), 2, framing="unframed")
    assert hopf == {0: 1, 2: 1, 4: 1, 6: 1}
    fig8 = moy_polynomial(parse_braid("s1 s-2 s1 s-2"), 2, framing="unframed")
    assert fig8 == {-5: 1, 5: 1}
    # mirror trefoils have mirror polynomials
    left = moy_polynomial(parse_braid("s1 s1 s1"), 2, framing="unframed")
    right = moy_polynomial(parse_braid("s-1 s-1 s-1"), 2, framing="unframed")
    assert right == {-k: v for k, v in left.items()}


def test_moy_pd_and_braid_presentations_agree():
    pairs = [
        ("X[1,3,2,4] X[3,1,4,2]", "s1 s1"),
        ("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]", "s-1 s-1 s-1"),
        ("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]", "s1 s-2 s1 s-2"),
    ]
    for pd, braid in pairs:
        for N in (2, 3):
            assert moy_polynomial(parse_pd(pd), N, framing="unframed") == \
                moy_polynomial(parse_braid(braid), N, framing="unframed")


def test_web_value_algebraic_matches_reducer():
    from itertools import product
    from krfoam.webfoam import moy_polynomial_of_web
    from krfoam.complexes import resolve_crossing
    d = parse_braid("s1 s2 s1")
    for N in (2, 3):
        for u in product((0, 1), repeat=3):
            state = [resolve_crossing(c.sign, uc)[0]
                     for c, uc in zip(d.crossings, u)]
            web, _ = d.resolution_web(state)
            try:
                expected = moy_polynomial_of_web(web, N)
            except ValueError:
                continue
            assert _web_value_algebraic(web, N) == expected, (N, u)


def test_moy_series_truncation():
    # 1/(1 - q^2)^2 expansion of the unknot value [2]
    ser = moy_series(quantum_int(2), 2, 7)
    assert ser[-1] == 1 and ser[1] == 2 and ser[3] == 3 and ser[7] == 5


def test_rasmussen_values():
    assert rasmussen_s(UNKNOT) == 0
    assert rasmussen_s(parse_braid("s-1 s-1 s-1")) == 2
    assert rasmussen_s(parse_braid("s1 s1 s1")) == -2
    with pytest.raises(ValueError):
        rasmussen_s(parse_braid("s1 s1"))  # links rejected


def test_laurent_mod_cyclotomic():
    # q^{2p} folds to 1; the cyclotomic column sums to zero
    p = 3
    assert laurent_mod_cyclotomic({6: 1}, p) == {0: 1}
    assert laurent_mod_cyclotomic({0: 1, 2: 1, 4: 1}, p) == {}
    assert laurent_mod_cyclotomic(laurent_mul(quantum_int(3), quantum_int(2)), p) == {}


def test_jordan_blocks():
    F = Field(3)
    # nilpotent single 3-block stepping degree down by 2
    M = {(1, 0): F.one, (2, 1): F.one}
    dense = [[F.zero] * 3 for _ in range(3)]
    for (i, j), v in M.items():
        dense[i][j] = v
    blocks = jordan_blocks(F, dense, [4, 2, 0], -2, 3)
    assert blocks == [(4, 3, 1)]


def test_pdg_e_unknot_and_hopf():
    rep = pdg_e_report([1], 3)
    assert rep["image_mod_cyclotomic"] == {}
    rep = pdg_e_report([1, 1], 3)
    assert rep["image_mod_cyclotomic"] == {}
    # every slash block has size != p by construction
    for blocks in rep["slash"].values():
        for _a, size, _m in blocks:
            assert size != 3


def test_pdg_f_unknot_vanishes():
    rep = pdg_f_report(UNKNOT, 3, qmax=13)
    assert rep["slash_total_dim"] == 0

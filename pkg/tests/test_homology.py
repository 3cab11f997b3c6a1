from krfoam.ring import Field
from krfoam.diagrams import LinkDiagram
from krfoam.complexes import cube_complex
from krfoam.homology import (
    GradedHomology,
    decompose,
    e_monomials,
    locally_finite_parts,
    nullspace,
    rank,
    rref,
    solve,
)

F = Field(0)


def _f(rows):
    return [[F.of(x) for x in row] for row in rows]


def test_rank_and_nullspace():
    assert rank(F, _f([[1, 2], [2, 4]])) == 1
    assert rank(F, _f([[1, 0], [0, 1]])) == 2
    ns = nullspace(F, _f([[1, 2]]), 2)
    assert len(ns) == 1
    v = ns[0]
    assert F.add(v[0], F.mul(F.of(2), v[1])) == F.zero


def test_rref_rows_fully_reduced():
    # every returned row must be reduced against all later pivots (a stale
    # partially-reduced row corrupts nullspace/solve downstream)
    rows, pivots = rref(F, _f([[1, 1, 1], [0, 1, 1], [0, 0, 1]]))
    for r, row in enumerate(rows):
        for c in pivots[r + 1:]:
            assert F.is_zero(row[c]), (r, c)


def test_solve():
    cols = [[F.of(1), F.of(0)], [F.of(1), F.of(1)]]
    x = solve(F, cols, [F.of(3), F.of(2)])
    assert x is not None
    assert [F.add(F.mul(x[0], cols[0][i]), F.mul(x[1], cols[1][i]))
            for i in range(2)] == [F.of(3), F.of(2)]
    assert solve(F, [[F.of(1), F.of(0)]], [F.of(0), F.of(1)]) is None


def test_e_monomials():
    # deg E1 = 2, deg E2 = 4
    assert e_monomials(2, 0) == [()]
    assert len(e_monomials(2, 4)) == 2   # E1^2, E2
    assert len(e_monomials(2, 6)) == 2   # E1^3, E1 E2
    assert e_monomials(2, 3) == []
    assert e_monomials(2, -2) == []


def test_unknot_homology_and_decomposition():
    cx = cube_complex(LinkDiagram(crossings=[], free_circles=1), F)
    hom = GradedHomology(cx, 11)
    assert hom.dim(0, -1) == 1 and hom.dim(0, 1) == 2
    assert hom.dim(0, 0) == 0
    dec = decompose(hom, 0)
    assert dec["consistent"]
    types = [s["type"] for s in dec["summands"]]
    assert types[0] == "P(-3)" and types[1] == "M(-1)"
    lf = locally_finite_parts(dec)
    assert lf["gamma"] == [] and lf["z"] == []


def test_weight_is_kappa_minus_q():
    cx = cube_complex(LinkDiagram(crossings=[], free_circles=1), F)
    hom = GradedHomology(cx, 7)
    for q in (-1, 1, 3):
        hmat = hom.op_on_homology("h", 0, q)
        n = hom.dim(0, q)
        assert hmat == [[F.of(-q) if i == j else F.zero for j in range(n)]
                        for i in range(n)]

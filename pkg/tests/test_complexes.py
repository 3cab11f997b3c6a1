from fractions import Fraction

from krfoam.ring import Field
from krfoam.diagrams import LinkDiagram, parse_braid
from krfoam.webfoam import GreenDot
from krfoam.complexes import (
    check_equivariance,
    check_sl2_relations,
    cube_complex,
    frame_correct,
    simplify,
    slide_green_dot,
)
from krfoam.homology import GradedHomology

F = Field(0)


def test_cube_is_complex_and_equivariant():
    for word in ("s1", "s1 s-1", "s1 s1 s1"):
        cx = cube_complex(parse_braid(word), F)
        cx.check_d_squared()
        cx.check_homogeneous()
        assert check_equivariance(cx)
        assert check_sl2_relations(cx)


def test_kappa_values():
    # framed closures pick up -1 per writhe unit; unframed knots sit at 0
    assert cube_complex(parse_braid("s1"), F).kappa == -1
    assert cube_complex(parse_braid("s1 s1"), F).kappa == -2
    assert cube_complex(parse_braid("s1"), F, framing="unframed").kappa == 0
    assert cube_complex(parse_braid("s1 s1 s1"), F, framing="unframed").kappa == 0


def test_twist_family_gives_same_reports():
    # any t1 + t2 = 1 produces an equivariant complex with the same homology
    base = None
    for t1 in (Fraction(1, 2), Fraction(1, 4), Fraction(0), Fraction(1)):
        cx = cube_complex(parse_braid("s1 s1"), F, t1=t1, t2=1 - t1)
        assert check_equivariance(cx)
        red, _, _ = simplify(cx)
        gd = GradedHomology(red, 6).gdims()
        if base is None:
            base = (red.kappa, gd)
        else:
            assert base == (red.kappa, gd)


def test_frame_correct_matches_unframed():
    a = frame_correct(parse_braid("s1"), F)
    b = cube_complex(parse_braid("s1"), F, framing="unframed")
    assert a.kappa == b.kappa == 0
    assert GradedHomology(simplify(a)[0], 7).gdims() == \
        GradedHomology(simplify(b)[0], 7).gdims()


def test_simplify_is_quasi_isomorphism():
    cx = cube_complex(parse_braid("s1 s-1"), F)
    red, iota, pi = simplify(cx)
    red.check_d_squared()
    assert check_equivariance(red)
    assert GradedHomology(cx, 5).gdims() == GradedHomology(red, 5).gdims()
    # the reduced complex is genuinely smaller
    assert sum(len(g) for g in red.gens.values()) < \
        sum(len(g) for g in cx.gens.values())


def test_slide_green_dot_relocates():
    dots = [GreenDot("hollow", 1, ("a", 0, 0))]
    moved = slide_green_dot(dots, {("a", 0, 0): ("a", 1, 1)})
    assert moved[0].arc == ("a", 1, 1)
    assert moved[0].kind == "hollow" and moved[0].mult == 1


def test_dotted_complex_reports_match():
    # a green dot anywhere on the same strand gives the same homology
    base = None
    for arc in (("a", 0, 0), ("a", 1, 1), ("a", 0, 2)):
        cx = cube_complex(parse_braid("s1 s1"), F,
                          dots=[GreenDot("hollow", Fraction(1), arc)])
        assert check_equivariance(cx)
        gd = GradedHomology(simplify(cx)[0], 6).gdims()
        if base is None:
            base = gd
        else:
            assert gd == base

import pytest

from krfoam.diagrams import LinkDiagram, parse_braid, parse_pd


def test_parse_pd_unknot_aliases():
    for text in ("", "unknot", "U"):
        d = parse_pd(text)
        assert d.free_circles == 1 and not d.crossings


def test_parse_pd_hopf():
    d = parse_pd("X[1,3,2,4] X[3,1,4,2]")
    assert [c.sign for c in d.crossings] == [1, 1]
    assert len(d.components()) == 2


def test_parse_pd_trefoil():
    d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]")
    assert sorted(c.sign for c in d.crossings) == [-1, -1, -1]
    assert len(d.components()) == 1
    assert d.writhe() == -3


def test_parse_pd_figure_eight():
    d = parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]")
    assert sorted(c.sign for c in d.crossings) == [-1, -1, 1, 1]
    assert len(d.components()) == 1
    assert d.writhe() == 0


def test_parse_pd_rejects_bad_arcs():
    with pytest.raises(ValueError):
        parse_pd("X[1,2,3,4]")  # arcs occur once each
    with pytest.raises(ValueError):
        parse_pd("garbage")


def test_parse_braid_basic():
    d = parse_braid("s1 s-2 s1 s-2")
    assert [c.sign for c in d.crossings] == [1, -1, 1, -1]
    assert d.writhe() == 0
    with pytest.raises(ValueError):
        parse_braid("s0")
    with pytest.raises(ValueError):
        parse_braid("t1")
    with pytest.raises(ValueError):
        parse_braid("")


def test_braid_closure_components():
    assert len(parse_braid("s1").components()) == 1      # unknot
    assert len(parse_braid("s1 s1").components()) == 2   # Hopf link
    assert len(parse_braid("s1 s1 s1").components()) == 1


def test_smoothing_circles():
    d = parse_braid("s1 s1")
    # all-oriented smoothing of the Hopf closure: 2 circles; all-bridge: 2
    assert len(d.smoothing_circles([1, 1])) == 2
    assert len(d.smoothing_circles([0, 0])) == 2
    assert len(d.smoothing_circles([0, 1])) == 1

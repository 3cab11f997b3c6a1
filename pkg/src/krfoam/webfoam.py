"""Combinatorial webs (thin circles joined by thickness-2 bridges), green dots,
and the symbolic layer of basic foams: degrees and the sl2 action tables.

A web is stored by how its thin structure passes through bridges: each bridge
has two "through" passes (side 1 and side 2, the oriented-smoothing strands);
`nxt[(b, side)]` names the bridge pass reached by following the thin arc that
leaves the split vertex of `b` on that side.  Vertex-free circles are counted
separately.  This is exactly the data a link-diagram resolution produces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .ring import (
    Laurent,
    laurent_add,
    laurent_mul,
    laurent_scale,
    laurent_shift,
    quantum_int,
    qbinom,
)

Pass = Tuple[int, int]  # (bridge id, side 1|2)


@dataclass
class GreenDot:
    """A green dot of multiplicity `mult` on arc `arc`; kind 'hollow' or 'solid'."""

    kind: str
    mult: Fraction
    arc: object

    def __post_init__(self):
        if self.kind not in ("hollow", "solid"):
            raise ValueError("green dot kind must be 'hollow' or 'solid'")
        self.mult = Fraction(self.mult)


@dataclass
class Web:
    """Closed (1,2)-web: `bridges` ids, `nxt` the thin-arc successor map on bridge
    passes, and `free_circles` vertex-free circles."""

    bridges: List[int]
    nxt: Dict[Pass, Pass]
    free_circles: int = 0
    dots: List[GreenDot] = field(default_factory=list)

    def validate(self):
        passes = {(b, s) for b in self.bridges for s in (1, 2)}
        assert set(self.nxt) == passes, "nxt must be defined on every bridge pass"
        assert set(self.nxt.values()) == passes, "nxt must be a bijection on passes"

    def smoothing_circles(self) -> List[List[Pass]]:
        """Cycles of bridge passes under nxt (the oriented-smoothing circles that
        meet at least one bridge)."""
        seen = set()
        out = []
        for b in self.bridges:
            for s in (1, 2):
                if (b, s) in seen:
                    continue
                cyc = []
                cur = (b, s)
                while cur not in seen:
                    seen.add(cur)
                    cyc.append(cur)
                    cur = self.nxt[cur]
                out.append(cyc)
        return out


def moy_polynomial_of_web(web: Web, N: int) -> Laurent:
    """MOY evaluation of a closed web by circle removal, loop (digon) removal and
    parallel-bridge (square) fusion.  Raises if the web is not reducible by these
    moves (cannot happen for link-diagram resolutions)."""
    value: Laurent = {0: 1}
    nxt = dict(web.nxt)
    bridges = set(web.bridges)
    circ = quantum_int(N)
    for _ in range(web.free_circles):
        value = laurent_mul(value, circ)

    def remove_bridge(b: int, keep_side: int):
        # splice the keep side through, drop both passes of b
        for s in (1, 2):
            nxt.pop((b, s), None)

    while bridges:
        progress = False
        # vertex-free circles appear as a pass whose whole cycle collapsed; handled
        # below via splicing, so first: free loop (a pass that returns directly to
        # its own bridge on the same side => digon)
        for b in list(bridges):
            for s in (1, 2):
                tgt = nxt.get((b, s))
                if tgt is not None and tgt[0] == b:
                    # a thin loop from the split of b back to its own merge:
                    # digon removal, factor [N-1]; splice the through strand
                    value = laurent_mul(value, quantum_int(N - 1))
                    out_slot = 3 - s  # remaining split output
                    in_slot = 3 - tgt[1]  # remaining merge input
                    succ = nxt[(b, out_slot)]
                    pred = next(p for p, q in nxt.items() if q == (b, in_slot))
                    remove_bridge(b, 1)
                    if succ[0] == b:
                        # theta web: the through strand also closed up on b
                        value = laurent_mul(value, circ)
                    else:
                        nxt[pred] = succ
                    bridges.discard(b)
                    progress = True
                    break
            if progress:
                break
        if progress:
            continue
        # parallel bridges: nxt[(b,1)] = (b',i) and nxt[(b,2)] = (b',other i)
        for b in list(bridges):
            t1 = nxt.get((b, 1))
            t2 = nxt.get((b, 2))
            if t1 and t2 and t1[0] == t2[0] and t1[0] != b and {t1[1], t2[1]} == {1, 2}:
                bp = t1[0]
                value = laurent_mul(value, quantum_int(2))
                # fuse: b's inputs flow to bp's outputs
                for s in (1, 2):
                    target = nxt[(b, s)]  # (bp, side)
                    succ = nxt[target]
                    nxt[(b, s)] = succ
                for s in (1, 2):
                    nxt.pop((bp, s), None)
                bridges.discard(bp)
                progress = True
                break
        if not progress:
            raise ValueError("web not reducible by circle/digon/square moves")
    # leftover spliced passes that formed pure cycles were consumed above; any
    # remaining structure means free circles created by splicing
    return value


# ---------------------------------------------------------------------------
# Basic foams: degree table and sl2 action

FOAM_KINDS = (
    "decoration",
    "assoc",
    "digon_cup",
    "digon_cap",
    "zip",
    "unzip",
    "cup",
    "cap",
    "saddle",
    "isotopy",
)


def foam_degree(kind: str, N: int, a: int = 1, b: int = 1, poly_degree: int = 0) -> int:
    """q-degree of a basic foam slice (facet thicknesses a, b where relevant)."""
    if kind == "decoration":
        return poly_degree
    if kind in ("assoc", "isotopy"):
        return 0
    if kind in ("digon_cup", "digon_cap"):
        return -a * b
    if kind in ("zip", "unzip"):
        return a * b
    if kind == "cup":
        return -a * (N - a)
    if kind == "cap":
        return -a * (N - a)
    if kind == "saddle":
        return a * (N - a)
    raise ValueError(f"unknown foam kind {kind!r}")


def binding_degree(a: int, b: int, N: int) -> int:
    """Degree weight of a binding where thicknesses a, b merge into a+b."""
    return a * b + (a + b) * (N - a - b)


def singular_vertex_degree(a: int, b: int, c: int, N: int) -> int:
    return a * b + b * c + c * a + (a + b + c) * (N - a - b - c)


@dataclass
class DottedTerm:
    """coeff * (the basic foam decorated by `which` on facet `facet`).

    `which` is 'p1' (first power sum of the facet alphabet) or 'pbar1'
    (complementary first power sum, E1 - p1 on a thin facet)."""

    coeff: Fraction
    which: str
    facet: str


def sl2_on_basic(
    gen: str,
    kind: str,
    N: int,
    a: int = 1,
    b: int = 1,
    t1: Fraction = Fraction(1, 2),
    t2: Fraction = Fraction(1, 2),
):
    """sl2 action on a basic foam slice.

    Returns a Fraction scalar for gen='h' (the foam times that scalar), 0 for
    gen='e' on non-decoration slices, and a list of DottedTerm for gen='f'.
    Decorations are handled by ring.sl2_on_poly and rejected here.
    """
    t1, t2 = Fraction(t1), Fraction(t2)
    tb1, tb2 = 1 - t1, 1 - t2
    if kind == "decoration":
        raise ValueError("decoration slices act through ring.sl2_on_poly")
    if kind not in FOAM_KINDS:
        raise ValueError(f"unknown foam kind {kind!r}")
    if gen == "e":
        return 0
    if gen == "h":
        return {
            "assoc": Fraction(0),
            "isotopy": Fraction(0),
            "digon_cup": a * b * (t1 + t2),
            "digon_cap": a * b * (tb1 + tb2),
            "zip": -a * b * (tb1 + tb2),
            "unzip": -a * b * (t1 + t2),
            "cup": Fraction(a * (N - a)),
            "cap": Fraction(a * (N - a)),
            "saddle": Fraction(-a * (N - a)),
        }[kind]
    if gen == "f":
        if kind in ("assoc", "isotopy"):
            return []
        if kind == "digon_cup":
            return [DottedTerm(-t1, "p1", "digon1"), DottedTerm(-t2, "p1", "digon2")]
        if kind == "digon_cap":
            return [DottedTerm(-tb1, "p1", "digon1"), DottedTerm(-tb2, "p1", "digon2")]
        if kind == "zip":
            return [DottedTerm(tb1, "p1", "side1"), DottedTerm(tb2, "p1", "side2")]
        if kind == "unzip":
            return [DottedTerm(t1, "p1", "side2"), DottedTerm(t2, "p1", "side1")]
        # cup/cap/saddle: the flat combination of p1 and the complementary pbar1
        c1 = Fraction(N - a, 2)
        c2 = Fraction(a, 2)
        if kind in ("cup", "cap"):
            return [DottedTerm(-c1, "p1", "facet"), DottedTerm(-c2, "pbar1", "facet")]
        return [DottedTerm(c1, "p1", "facet"), DottedTerm(c2, "pbar1", "facet")]
    raise ValueError(f"unknown sl2 generator {gen!r}")


def sl2_word_h(word: List[Tuple[str, dict]], N: int, t1=Fraction(1, 2), t2=Fraction(1, 2)):
    """h-scalar of a composite of basic non-decoration slices (Leibniz rule:
    the h-eigenvalue is the sum of the slice scalars, i.e. minus the foam degree
    contribution in weights)."""
    total = Fraction(0)
    for kind, params in word:
        total += sl2_on_basic("h", kind, N, t1=t1, t2=t2, **params)
    return total


def twist_scalars(dot: GreenDot, N: int, a: int = 1) -> Tuple[Fraction, str]:
    """(h-twist constant, f-twist decoration kind) of one green dot on an edge of
    thickness a: hollow λ gives (-λ a, λ·p1); solid λ gives (-λ(N-a), λ·pbar1)."""
    if dot.kind == "hollow":
        return (-dot.mult * a, "p1")
    return (-dot.mult * (N - a), "pbar1")


def greendot_normalize(dots: List[GreenDot]):
    """Merge same-kind dots on one arc; cancel equal hollow+solid multiplicity into
    a central decoration.  Returns (dots, central) where central is a list of
    (arc, coeff) meaning multiplication by coeff*E1 on that component."""
    acc: Dict[Tuple[object, str], Fraction] = {}
    for d in dots:
        key = (d.arc, d.kind)
        acc[key] = acc.get(key, Fraction(0)) + d.mult
    central: List[Tuple[object, Fraction]] = []
    out: List[GreenDot] = []
    arcs = {arc for arc, _ in acc}
    for arc in sorted(arcs, key=repr):
        h = acc.get((arc, "hollow"), Fraction(0))
        s = acc.get((arc, "solid"), Fraction(0))
        common = min(h, s) if h * s > 0 else Fraction(0)
        if common:
            central.append((arc, common))
            h -= common
            s -= common
        if h:
            out.append(GreenDot("hollow", h, arc))
        if s:
            out.append(GreenDot("solid", s, arc))
    return out, central

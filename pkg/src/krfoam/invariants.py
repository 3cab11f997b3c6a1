"""Link-level invariants derived from the equivariant complexes.

- moy_polynomial: the decategorified state sum (web evaluations with q-weights),
  the Euler-characteristic oracle for the homology reports.
- rasmussen_s: the s-invariant of a knot (N = 2, rationals), computed two
  independent ways that must agree: the free part of homology over k[E2] after
  E1 -> 0 (free part = k[x]{-1-s}), and the filtration jumps of the Lee-style
  specialization E1 -> 0, E2 -> -1.
- pdg_e_report / pdg_f_report: slash homology of the two p-differential
  structures (the derivation e on the all-E-zero theory at N = p, and the
  twisted operator f on the N = 2 theory over F_p).
"""

from __future__ import annotations

from itertools import product
from typing import Dict, List, Optional, Tuple

from .ring import (
    Field,
    Laurent,
    Poly,
    laurent_add,
    laurent_scale,
    laurent_shift,
)
from .diagrams import LinkDiagram
from .webfoam import moy_polynomial_of_web
from .complexes import ChainComplex, cube_complex, resolve_crossing, simplify
from .homology import GradedHomology, nullspace, rank, scalar_homology
from .tqft import TwoStrandEngine


# ---------------------------------------------------------------------------
# MOY polynomial


def _web_value_algebraic(web, N: int) -> Laurent:
    """Evaluate a closed web as the graded dimension of its state space: one
    variable per strand segment, relations per bridge (elementary symmetric
    matching of the in/out pairs, plus h_{N-1} = h_N = 0 of each in pair),
    centered to the balanced normalization (closed-web values are palindromic).
    Fallback for webs the circle/digon/square reducer cannot simplify."""
    from .tqft import ClosedWebSpace, hpoly
    from .ring import quantum_int, laurent_mul
    F = Field(0)
    seg = {src: f"x{i}" for i, (src, _) in enumerate(sorted(web.nxt.items(), key=str))}
    in_pair: Dict[int, List[str]] = {b: [] for b in web.bridges}
    out_pair: Dict[int, List[str]] = {b: [] for b in web.bridges}
    for src, tgt in web.nxt.items():
        out_pair[src[0]].append(seg[src])
        in_pair[tgt[0]].append(seg[src])
    rels = []
    for b in web.bridges:
        (p, q), (r, s) = sorted(in_pair[b]), sorted(out_pair[b])
        xp, xq = Poly.var(F, p), Poly.var(F, q)
        xr, xs = Poly.var(F, r), Poly.var(F, s)
        if {p, q} != {r, s}:
            rels.append(xp + xq - xr - xs)
            rels.append(xp * xq - xr * xs)
        rels.append(hpoly(F, N - 1, p, q))
        rels.append(hpoly(F, N, p, q))
    sp = ClosedWebSpace(F, N, sorted(seg.values()), rels, 0)
    gd = sp.gdim()
    if not gd:
        return {}
    center = (max(gd) + min(gd)) // 2
    val = {d - center: m for d, m in gd.items()}
    for _ in range(web.free_circles):
        val = laurent_mul(val, quantum_int(N))
    return val


def moy_polynomial(diagram: LinkDiagram, N: int, framing: str = "framed") -> Laurent:
    """State sum over all resolutions: sum (-1)^h q^{qshift} (web evaluation)."""
    n = len(diagram.crossings)
    signs = [c.sign for c in diagram.crossings]
    total: Laurent = {}
    for u in product((0, 1), repeat=n):
        state = []
        h = 0
        qs = 0
        for sign, uc in zip(signs, u):
            s, dh, dq = resolve_crossing(sign, uc)
            state.append(s)
            h += dh
            qs += dq
        web, _ = diagram.resolution_web(state)
        try:
            val = moy_polynomial_of_web(web, N)
        except ValueError:
            val = _web_value_algebraic(web, N)
        total = laurent_add(total, laurent_scale(laurent_shift(val, qs), -1 if h % 2 else 1))
    if framing == "unframed":
        w = diagram.writhe()
        total = laurent_shift(total, 2 * w)
        if w % 2:
            total = laurent_scale(total, -1)
    return total


def moy_series(moy: Laurent, N: int, qmax: int) -> Dict[int, int]:
    """Coefficients up to qmax of moy * prod_{i=1}^{N} 1/(1 - q^{2i}) (the graded
    dimension series a free module with that MOY evaluation has over the base
    ring)."""
    cur = dict(moy)
    for i in range(1, N + 1):
        nxt: Dict[int, int] = {}
        for k, v in cur.items():
            e = k
            while e <= qmax:
                nxt[e] = nxt.get(e, 0) + v
                e += 2 * i
        cur = nxt
    return {k: v for k, v in cur.items() if v and k <= qmax}


def euler_characteristic(hom: GradedHomology) -> Dict[int, int]:
    """Per-q Euler characteristic of the homology within the window."""
    out: Dict[int, int] = {}
    for t, row in hom.gdims().items():
        s = -1 if t % 2 else 1
        for q, dmn in row.items():
            out[q] = out.get(q, 0) + s * dmn
    return {q: v for q, v in out.items() if v}


# ---------------------------------------------------------------------------
# Specialization of the base ring


def specialize(cx: ChainComplex, values: Dict[str, object]) -> ChainComplex:
    """Evaluate some E-variables at scalars in the differential.  The result is
    only filtered (not graded) by the recorded generator degrees."""
    F = cx.field
    subs = {v: Poly.const(F, c) for v, c in values.items()}
    d = {}
    for t, mat in cx.d.items():
        new = {}
        for key, p in mat.items():
            q = p.substitute(subs)
            if not q.is_zero():
                new[key] = q
        d[t] = new
    return ChainComplex(field=F, gens={t: list(g) for t, g in cx.gens.items()},
                        d=d, N=cx.N, kappa=cx.kappa)


def _dense_scalar_d(cx: ChainComplex, t: int) -> List[List[object]]:
    """Dense matrix of d_t with constant entries (rows = degree t+1)."""
    F = cx.field
    nr = len(cx.gens.get(t + 1, []))
    nc = len(cx.gens.get(t, []))
    out = [[F.zero] * nc for _ in range(nr)]
    for (i, j), p in cx.d.get(t, {}).items():
        assert p.is_constant(), "entry not fully specialized"
        out[i][j] = p.constant()
    return out


# ---------------------------------------------------------------------------
# Rasmussen s-invariant


def _monomial_quot(field: Field, a: Poly, b: Poly) -> Poly:
    """Exact quotient of a by the single-term polynomial b."""
    (bm, bc), = b.terms.items()
    bexp = dict(bm)
    out = {}
    for m, c in a.terms.items():
        d = dict(m)
        for v, e in bexp.items():
            d[v] = d.get(v, 0) - e
            assert d[v] >= 0, "division not exact"
        key = tuple(sorted((v, e) for v, e in d.items() if e))
        out[key] = field.mul(c, field.inv(bc))
    return Poly(field, out)


def _smith_graded(field: Field, mat: List[List[Poly]], ncols: Optional[int] = None,
                  track: bool = False):
    """Smith reduction of a graded matrix over k[y] (homogeneous entries, hence
    single-term).  No row/column swaps, so index degrees are preserved.

    Returns (pivots, V, Vinv) with pivots a list of (row, col, diagonal Poly);
    V/Vinv (or None) track the column operations: new source basis = columns
    of V in the old coordinates, Vinv its inverse.
    """
    nr = len(mat)
    nc = ncols if ncols is not None else (len(mat[0]) if nr else 0)
    work = [[p for p in row] for row in mat]
    one = Poly.one(field)
    zero = Poly.zero(field)
    V = [[one if i == j else zero for j in range(nc)] for i in range(nc)] if track else None
    Vinv = [[one if i == j else zero for j in range(nc)] for i in range(nc)] if track else None
    row_active = set(range(nr))
    col_active = set(range(nc))
    pivots = []
    while True:
        best = None
        for i in row_active:
            for j in col_active:
                p = work[i][j]
                if p.is_zero():
                    continue
                if best is None or p.degree() < best[2]:
                    best = (i, j, p.degree())
        if best is None:
            break
        r, c, _ = best
        piv = work[r][c]
        assert len(piv.terms) == 1, "graded entry must be a single term"
        # clear row r by column operations col_j -= m * col_c
        for j in list(col_active):
            if j == c or work[r][j].is_zero():
                continue
            m = _monomial_quot(field, work[r][j], piv)
            for i in range(nr):
                work[i][j] = work[i][j] - m * work[i][c]
            if track:
                for i in range(nc):
                    V[i][j] = V[i][j] - m * V[i][c]
                for j2 in range(nc):
                    Vinv[c][j2] = Vinv[c][j2] + m * Vinv[j][j2]
        # clear column c by row operations (no tracking needed)
        for i in list(row_active):
            if i == r or work[i][c].is_zero():
                continue
            m = _monomial_quot(field, work[i][c], piv)
            for j in range(nc):
                work[i][j] = work[i][j] - m * work[r][j]
        pivots.append((r, c, work[r][c]))
        row_active.discard(r)
        col_active.discard(c)
    return pivots, V, Vinv


def free_torsion_parts(cx: ChainComplex, t: int):
    """Homology of a complex over k[y] (one remaining E-variable) at degree t,
    as (free generator degrees, torsion list of (degree, exponent))."""
    F = cx.field
    src = cx.gens.get(t, [])
    nr = len(cx.gens.get(t + 1, []))
    nc = len(src)
    zero = Poly.zero(F)
    d0 = [[zero] * nc for _ in range(nr)]
    for (i, j), p in cx.d.get(t, {}).items():
        d0[i][j] = p
    pivots, V, Vinv = _smith_graded(F, d0, ncols=nc, track=True)
    pivot_cols = {c for _, c, _ in pivots}
    ker_cols = [j for j in range(nc) if j not in pivot_cols]
    ker_degs = [src[j] for j in ker_cols]
    # express the incoming boundaries in the kernel basis
    nprev = len(cx.gens.get(t - 1, []))
    din = cx.d.get(t - 1, {})
    X = [[zero] * nprev for _ in ker_cols]
    for b in range(nprev):
        col = [zero] * nc
        for (i, j), p in din.items():
            if j == b:
                col[i] = p
        # coordinates in the new source basis: y = Vinv * col
        y = []
        for i in range(nc):
            acc = zero
            for j in range(nc):
                if not col[j].is_zero() and not Vinv[i][j].is_zero():
                    acc = acc + Vinv[i][j] * col[j]
            y.append(acc)
        for _, c, _ in pivots:
            assert y[c].is_zero(), "boundary not in the kernel"
        for ki, j in enumerate(ker_cols):
            X[ki][b] = y[j]
    xpiv, _, _ = _smith_graded(F, X, ncols=nprev)
    free = []
    torsion = []
    hit = {}
    for r, _, diag in xpiv:
        hit[r] = diag
    for ki, deg in enumerate(ker_degs):
        diag = hit.get(ki)
        if diag is None:
            free.append(deg)
        else:
            exp = sum(e for _, e in next(iter(diag.terms)))
            if exp:
                torsion.append((deg, exp))
    return sorted(free), sorted(torsion)


def _lee_levels(red: ChainComplex) -> List[int]:
    """Filtration levels of the two Lee classes of a knot: specialize E1 -> 0,
    E2 -> -1, compute homology (dimension 2, homological degree 0) and, per
    class, the least q with the class hit by the homology of the subcomplex
    spanned by generators of degree <= q (the differential lowers degrees)."""
    F = red.field
    sp = specialize(red, {"E1": 0, "E2": -1})
    dims = {}
    for t in sp.degrees():
        n = len(sp.gens[t])
        dout = _dense_scalar_d(sp, t)
        din = _dense_scalar_d(sp, t - 1)
        cycles = nullspace(F, dout, n)
        bnd = [[din[r][c] for r in range(n)] for c in range(len(sp.gens.get(t - 1, [])))]
        dims[t] = len(cycles) - rank(F, bnd)
    assert all(v == 0 for t, v in dims.items() if t != 0), (
        "Lee homology of a knot must sit in homological degree 0"
    )
    assert dims.get(0) == 2, "Lee homology of a knot must have dimension 2"
    n = len(sp.gens[0])
    qs = sp.gens[0]
    dout = _dense_scalar_d(sp, 0)
    din = _dense_scalar_d(sp, -1)
    bnd = [[din[r][c] for r in range(n)] for c in range(len(sp.gens.get(-1, [])))]
    rank_b = rank(F, bnd)
    levels: List[int] = []
    seen = 0
    for q in sorted(set(qs)):
        keep = [i for i in range(n) if qs[i] <= q]
        sub = [[dout[r][i] for i in keep] for r in range(len(dout))]
        ker = nullspace(F, sub, len(keep))
        vecs = []
        for v in ker:
            full = [F.zero] * n
            for x, i in zip(v, keep):
                full[i] = x
            vecs.append(full)
        hit = rank(F, bnd + vecs) - rank_b
        while seen < hit:
            levels.append(q)
            seen += 1
    return levels


def rasmussen_s(diagram: LinkDiagram) -> int:
    """The s-invariant of a knot, from the free part of N = 2 homology over the
    rationals (free part = k[x]{-1-s} after E1 -> 0), cross-checked against the
    Lee-specialization filtration and the weight of the free generator."""
    if len(diagram.components()) + diagram.free_circles != 1:
        raise ValueError("the s-invariant is defined for knots")
    F = Field(0)
    cx = cube_complex(diagram, F, framing="unframed")
    red, _, _ = simplify(cx)
    spec = specialize(red, {"E1": 0})
    free, _ = free_torsion_parts(spec, 0)
    assert len(free) == 2 and free[1] == free[0] + 2, (
        f"free part of a knot must be one copy of k[x]: got degrees {free}"
    )
    for t in red.degrees():
        if t != 0:
            other, _ = free_torsion_parts(spec, t)
            assert not other, f"free part away from degree 0 at t={t}: {other}"
    s_free = -1 - free[0]
    levels = _lee_levels(red)
    assert levels[0] + 2 == levels[1], f"Lee levels must differ by 2: {levels}"
    s_lee = -(levels[0] + 1)
    assert s_free == s_lee, f"free-part route {s_free} != Lee route {s_lee}"
    # weight cross-check: the free generator has weight mu = kappa - q, s = mu - 1
    mu = int(red.kappa) - free[0]
    assert s_free == mu - 1, f"s = mu - 1 fails: s={s_free}, mu={mu}"
    return s_free


# ---------------------------------------------------------------------------
# Jordan blocks of a graded nilpotent operator


def _matmul(field: Field, a: List[List[object]], b: List[List[object]]):
    n, m = len(a), len(b[0]) if b else 0
    out = [[field.zero] * m for _ in range(n)]
    for i in range(n):
        for k in range(len(b)):
            x = a[i][k]
            if field.is_zero(x):
                continue
            for j in range(m):
                y = b[k][j]
                if not field.is_zero(y):
                    out[i][j] = field.add(out[i][j], field.mul(x, y))
    return out


def jordan_blocks(field: Field, M: List[List[object]], qdegs: List[int],
                  delta: int, pmax: int) -> List[Tuple[int, int, int]]:
    """Jordan block profile of a nilpotent graded operator that shifts the
    q-degree by delta.  Returns (start degree, size, multiplicity) triples,
    where the start degree is the block's entry point (its q-degree of maximal
    |weight| in the direction opposite to delta)."""
    n = len(qdegs)
    ident = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    powers = [ident]
    for _ in range(pmax + 1):
        powers.append(_matmul(field, M, powers[-1]))
    assert all(field.is_zero(x) for row in powers[pmax] for x in row), (
        f"operator is not nilpotent of order {pmax} on this space"
    )

    def rk(s: int, a: int) -> int:
        cols = [j for j in range(n) if qdegs[j] == a]
        rows = [i for i in range(n) if qdegs[i] == a + delta * s]
        if not cols or not rows:
            return 0
        sub = [[powers[s][i][j] for j in cols] for i in rows]
        return rank(field, sub)

    out = []
    for a in sorted(set(qdegs), reverse=(delta < 0)):
        for s in range(1, pmax + 1):
            n_ge = rk(s - 1, a) - rk(s, a - delta)
            n_gt = rk(s, a) - rk(s + 1, a - delta)
            cnt = n_ge - n_gt
            if cnt:
                out.append((a, s, cnt))
    return out


# ---------------------------------------------------------------------------
# p-differential reports


def laurent_mod_cyclotomic(val: Laurent, p: int) -> Laurent:
    """Canonical representative modulo (1 + q^2 + ... + q^{2p-2}) in the Laurent
    ring (where q^{2p} = 1): exponents folded into [0, 2p), then reduced to
    degree < 2p - 2."""
    folded: Dict[int, int] = {}
    for k, v in val.items():
        kk = k % (2 * p)
        folded[kk] = folded.get(kk, 0) + v
    for d in range(2 * p - 1, 2 * p - 3, -1):
        c = folded.pop(d, 0)
        if not c:
            continue
        # q^d = q^{d-2p+2} * q^{2p-2} = -q^{d-2p+2} (1 + q^2 + ... + q^{2p-4})
        for i in range(p - 1):
            e = d - (2 * p - 2) + 2 * i
            folded[e] = folded.get(e, 0) - c
    return {k: v for k, v in folded.items() if v}


def pdg_e_report(word: List[int], p: int) -> Dict[str, object]:
    """Slash homology of the derivation differential on the all-E-zero theory at
    N = p over F_p, for the closure of a 2-strand braid word (entries +-1).

    Reports the Jordan block profile of the operator on homology per
    homological degree, the slash classes (blocks of size < p) and their image
    in the cyclotomic Grothendieck ring.
    """
    F = Field(p)
    eng = TwoStrandEngine(F, p)
    data = eng.braid_complex(list(word))
    hom = scalar_homology(F, data["gens"], data["d"], ops={"e": data["e"]})
    blocks: Dict[int, List[Tuple[int, int, int]]] = {}
    slash: Dict[int, List[Tuple[int, int, int]]] = {}
    image: Laurent = {}
    for t, entry in hom.items():
        if not entry["reps"]:
            continue
        prof = jordan_blocks(F, entry["e"], entry["qdegs"], delta=-2, pmax=p)
        blocks[t] = prof
        sl = [(a, s, c) for (a, s, c) in prof if s != p]
        if sl:
            slash[t] = sl
        sign = -1 if t % 2 else 1
        for a, s, c in sl:
            contrib = {a - 2 * i: c for i in range(s)}
            image = laurent_add(image, laurent_scale(contrib, sign))
    return {
        "p": p,
        "blocks": blocks,
        "slash": slash,
        "image": image,
        "image_mod_cyclotomic": laurent_mod_cyclotomic(image, p),
    }


def pdg_f_report(diagram: LinkDiagram, p: int, qmax: int,
                 framing: str = "framed") -> Dict[str, object]:
    """Slash homology of the twisted lowering operator f on the N = 2 theory
    over F_p.  f shifts q by +2; blocks are certified when fully measurable
    inside the window (start degree a with a + 2p <= qmax)."""
    F = Field(p)
    cx = cube_complex(diagram, F, framing=framing)
    red, _, _ = simplify(cx)
    hom = GradedHomology(red, qmax)
    blocks: Dict[int, List[Tuple[int, int, int]]] = {}
    slash: Dict[int, List[Tuple[int, int, int]]] = {}
    for t in sorted(red.gens):
        # assemble the windowed operator on homology
        qs: List[int] = []
        offset: Dict[int, int] = {}
        for q in hom.qrange():
            offset[q] = len(qs)
            qs.extend([q] * hom.dim(t, q))
        n = len(qs)
        if n == 0:
            continue
        M = [[F.zero] * n for _ in range(n)]
        for q in hom.qrange():
            if hom.dim(t, q) == 0 or q + 2 > hom.qmax or hom.dim(t, q + 2) == 0:
                continue
            sub = hom.op_on_homology("f", t, q)
            for r in range(len(sub)):
                for c in range(len(sub[r])):
                    M[offset[q + 2] + r][offset[q] + c] = sub[r][c]
        prof = jordan_blocks(F, M, qs, delta=2, pmax=p)
        certified = [(a, s, c) for (a, s, c) in prof if a + 2 * p <= qmax]
        blocks[t] = certified
        sl = [(a, s, c) for (a, s, c) in certified if s != p]
        if sl:
            slash[t] = sl
    return {
        "p": p,
        "window": [hom.qmin, qmax],
        "blocks": blocks,
        "slash": slash,
        "slash_total_dim": sum(s * c for per in slash.values() for (_, s, c) in per),
    }


# ---------------------------------------------------------------------------
# Canonical homology + sl2 reports and the invariance suite


def sl2_homology_report(diagram: LinkDiagram, field: Field, qmax: int,
                        framing: str = "framed", dots=None,
                        t1=None, t2=None) -> Dict[str, object]:
    """Canonical serializable report: graded dimensions, weight constant, the
    module decomposition per homological degree and its locally finite parts.
    Two diagrams of the same (framed) link must produce equal reports."""
    from fractions import Fraction
    kw = {}
    if t1 is not None:
        kw["t1"] = Fraction(t1)
    if t2 is not None:
        kw["t2"] = Fraction(t2)
    cx = cube_complex(diagram, field, dots=dots, framing=framing, **kw)
    red, _, _ = simplify(cx)
    hom = GradedHomology(red, qmax)
    from .homology import decompose, locally_finite_parts
    out: Dict[str, object] = {
        "kappa": _ser_scalar(field, red.kappa),
        "window_qmax": qmax,
        "gdims": {},
        "decomposition": {},
        "gamma": {},
        "z": {},
    }
    for t, row in sorted(hom.gdims().items()):
        out["gdims"][str(t)] = {str(q): d for q, d in sorted(row.items())}
    if field.char == 0:
        for t in sorted(red.gens):
            if not any(hom.dim(t, q) for q in hom.qrange()):
                continue
            dec = decompose(hom, t)
            lf = locally_finite_parts(dec)
            out["decomposition"][str(t)] = {
                "summands": dec["summands"],
                "uncertified_tops": dec["uncertified_tops"],
                "consistent": dec["consistent"],
            }
            out["gamma"][str(t)] = lf["gamma"]
            out["z"][str(t)] = lf["z"]
    return out


def _ser_scalar(field: Field, value) -> List[int]:
    """Serialize an exact scalar as [numerator, denominator]."""
    if field.char:
        return [int(value), 1]
    from fractions import Fraction
    f = Fraction(value)
    return [f.numerator, f.denominator]


def invariance_suite(field: Optional[Field] = None, qmax: int = 9) -> List[Dict[str, object]]:
    """Built-in Reidemeister/green-dot/framing pairs: each entry compares the
    canonical homology + sl2 reports of two presentations of the same link."""
    from .diagrams import parse_braid
    from .webfoam import GreenDot
    F = field or Field(0)
    results: List[Dict[str, object]] = []

    def check(name: str, rep_a, rep_b):
        results.append({"name": name, "pass": rep_a == rep_b})

    unlink2 = LinkDiagram(crossings=[], joins=[], free_circles=2)
    unknot = LinkDiagram(crossings=[], joins=[], free_circles=1)
    # RII, both variants: the two-crossing cancelling pairs close to the unlink
    for name, word in (("RII-updown", "s1 s-1"), ("RII-downup", "s-1 s1")):
        check(name,
              sl2_homology_report(parse_braid(word), F, qmax),
              sl2_homology_report(unlink2, F, qmax))
    # RIII: braid relation
    check("RIII",
          sl2_homology_report(parse_braid("s1 s2 s1"), F, qmax),
          sl2_homology_report(parse_braid("s2 s1 s2"), F, qmax))
    # framed RI with the framing correction: a one-crossing unknot
    check("RI-framed",
          sl2_homology_report(parse_braid("s1"), F, qmax, framing="unframed"),
          sl2_homology_report(unknot, F, qmax, framing="unframed"))
    # green-dot slides: one hollow dot at three spots along a strand passing
    # through the crossings of the Hopf link closure
    arcs = [("a", 0, 0), ("a", 1, 1), ("a", 0, 2)]
    reports = [
        sl2_homology_report(parse_braid("s1 s1"), F, qmax,
                            dots=[GreenDot("hollow", 1, arc)])
        for arc in arcs
    ]
    check("greendot-slide-1", reports[0], reports[1])
    check("greendot-slide-2", reports[1], reports[2])
    return results

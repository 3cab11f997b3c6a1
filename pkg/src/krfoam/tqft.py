"""State spaces of diagram resolutions and the maps between them.

For the thin (N = 2) theory a resolution's state space is the tensor product of
one rank-2 algebra A = R[x]/(x^2 - E1 x + E2) per smoothing circle, R =
k[E1, E2].  Arcs traversed against their link orientation carry the antipode
variable E1 - x.  Saddle maps are the merge (facet-matched substitution) and
split (multiplication by a degree-2 element after lifting).

The second half of the file is a closed two-strand engine valid for every N
with all E_i specialised to 0: resolutions of 2-strand braid closures are
either two circles or a "necklace" of thick bridges, and their state spaces
are presented as explicit finite-dimensional quotient algebras.  It exists for
the p-differential theories at N = p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .ring import Field, Mono, Poly, QQ, sl2_on_poly
from .diagrams import Crossing, LinkDiagram
from .webfoam import GreenDot


def _xvar(i: int) -> str:
    return f"x{i}"


@dataclass
class StateSpace:
    """Free R-module A^(tensor m) attached to one cube vertex."""

    field: Field
    circles: List[List[Tuple[object, int]]]  # (arc, +-1 vs link orientation)
    shift: int  # q-degree shift of the module

    def __post_init__(self):
        self.m = len(self.circles)
        self.facet_index: Dict[object, Tuple[int, int]] = {}
        for i, circ in enumerate(self.circles):
            for arc, direction in circ:
                self.facet_index[arc] = (i, direction)

    def basis(self) -> List[Mono]:
        out = []
        for eps in product((0, 1), repeat=self.m):
            vars_ = tuple((_xvar(i), 1) for i, e in enumerate(eps) if e)
            out.append(vars_)
        return out

    def basis_qdeg(self, mono: Mono) -> int:
        return 2 * len(mono) + self.shift

    def xv(self, i: int) -> Poly:
        return Poly.var(self.field, _xvar(i))

    def facetvar(self, arc) -> Poly:
        """Facet variable on `arc`: x_i when the circle traversal agrees with the
        link orientation of the arc, E1 - x_i otherwise."""
        i, direction = self.facet_index[arc]
        x = self.xv(i)
        if direction == 1:
            return x
        return Poly.var(self.field, "E1") - x

    def reduce(self, p: Poly) -> Poly:
        """Rewrite x_i^k (k >= 2) via x^2 = E1 x - E2."""
        e1 = Poly.var(self.field, "E1")
        e2 = Poly.var(self.field, "E2")
        changed = True
        while changed:
            changed = False
            for mono, coeff in list(p.terms.items()):
                for v, k in mono:
                    if v.startswith("x") and k >= 2:
                        rest = tuple((w, j) for w, j in mono if w != v)
                        xi = Poly.var(self.field, v)
                        repl = (e1 * xi - e2) * xi.pow(k - 2)
                        p = p - Poly(self.field, {mono: coeff}) + (
                            Poly(self.field, {rest: coeff}) * repl
                        )
                        changed = True
                        break
                if changed:
                    break
        return p

    def expand(self, p: Poly) -> Dict[Mono, Poly]:
        """Write a reduced element as sum coeff(E) * basis monomial."""
        out: Dict[Mono, Poly] = {}
        for mono, coeff in p.terms.items():
            xs = tuple((v, k) for v, k in mono if v.startswith("x"))
            es = tuple((v, k) for v, k in mono if not v.startswith("x"))
            if any(k >= 2 for _, k in xs):
                raise ValueError("expand needs a reduced element")
            cur = out.setdefault(xs, Poly.zero(self.field))
            out[xs] = cur + Poly(self.field, {es: coeff})
        return {k: v for k, v in out.items() if not v.is_zero()}


def statespace(field: Field, diagram: LinkDiagram, state: Sequence[int], shift: int = 0) -> StateSpace:
    circles = diagram.smoothing_circles(list(state))
    for _ in range(diagram.free_circles):
        circles.append([])
    # a vertex-free circle still carries a module; give it a synthetic arc
    fixed = []
    for idx, c in enumerate(circles):
        fixed.append(c if c else [(("free", idx), 1)])
    return StateSpace(field, fixed, shift)


# ---------------------------------------------------------------------------
# Saddle maps


def _substitution(src: StateSpace, tgt: StateSpace, skip: Optional[int] = None) -> Dict[str, Poly]:
    """x_i (source) -> circle variable of the target circle through the same arc,
    for every source circle except `skip`.

    The differential uses the plain Frobenius structure of A per circle (so the
    cube commutes on the nose); arc orientations enter only through decorations
    and the sl2 twists, never through the saddles.
    """
    sub: Dict[str, Poly] = {}
    for i, circ in enumerate(src.circles):
        if i == skip:
            continue
        arc, _ = circ[0]
        sub[_xvar(i)] = tgt.xv(tgt.facet_index[arc][0])
    return sub


def saddle_map(src: StateSpace, tgt: StateSpace, crossing: Crossing, to_bridge: bool):
    """Matrix of the saddle at `crossing` from src to tgt as {(row_mono, col_mono):
    Poly in E}.  `to_bridge` is True when the target smoothing is the turnback
    (bridge) one at this crossing."""
    e1 = Poly.var(tgt.field, "E1")
    if tgt.m == src.m - 1:
        sub = _substitution(src, tgt)
        apply = lambda p: tgt.reduce(p.substitute(sub))
    elif tgt.m == src.m + 1:
        # the splitting source circle is the one through the crossing
        i0 = src.facet_index[crossing.under_in][0]
        assert src.facet_index[crossing.over_in][0] == i0
        sub = _substitution(src, tgt, skip=i0)
        arc, _ = src.circles[i0][0]
        sub[_xvar(i0)] = tgt.xv(tgt.facet_index[arc][0])
        # comultiplication: multiply by x_a + x_b - E1 for the two circles born
        # from the split (bottom/top pair of the local arcs)
        second = crossing.over_in if not to_bridge else crossing.under_out
        a = tgt.facet_index[crossing.under_in][0]
        b = tgt.facet_index[second][0]
        assert a != b, "split must separate the local arcs"
        mult = tgt.xv(a) + tgt.xv(b) - e1
        apply = lambda p: tgt.reduce(mult * p.substitute(sub))
    else:
        raise ValueError("saddle must change the circle count by one")
    mat: Dict[Tuple[Mono, Mono], Poly] = {}
    for col in src.basis():
        img = apply(Poly(src.field, {col: src.field.one}))
        for row, coeff in tgt.expand(img).items():
            mat[(row, col)] = coeff
    return mat


def foam_matrix(kind: str, src: StateSpace, tgt: StateSpace, **kw):
    """Matrix of a basic closed-foam slice between state spaces.

    kinds: 'saddle' (kw: crossing, to_bridge), 'dot' (kw: arc, power), 'cup'
    (kw: circle index in tgt), 'cap' (kw: circle index in src)."""
    if kind == "saddle":
        return saddle_map(src, tgt, kw["crossing"], kw["to_bridge"])
    mat: Dict[Tuple[Mono, Mono], Poly] = {}
    if kind == "dot":
        fv = src.facetvar(kw["arc"]).pow(kw.get("power", 1))
        for col in src.basis():
            img = src.reduce(fv * Poly(src.field, {col: src.field.one}))
            for row, coeff in src.expand(img).items():
                mat[(row, col)] = coeff
        return mat
    if kind == "cup":
        j = kw["circle"]
        assert tgt.m == src.m + 1
        sub = {_xvar(i): Poly.var(tgt.field, _xvar(i if i < j else i + 1)) for i in range(src.m)}
        for col in src.basis():
            img = Poly(src.field, {col: src.field.one}).substitute(sub)
            for row, coeff in tgt.expand(img).items():
                mat[(row, col)] = coeff
        return mat
    if kind == "cap":
        j = kw["circle"]
        assert tgt.m == src.m - 1
        # counit: 1 -> 0, x_j -> 1; other circles relabel
        for col in src.basis():
            p = src.reduce(Poly(src.field, {col: src.field.one}))
            for mono, coeff in p.terms.items():
                d = dict(mono)
                kj = d.pop(_xvar(j), 0)
                if kj == 0:
                    continue
                row_vars = []
                epart = []
                for v, e in sorted(d.items()):
                    if v.startswith("x"):
                        i = int(v[1:])
                        row_vars.append((_xvar(i if i < j else i - 1), e))
                    else:
                        epart.append((v, e))
                row = tuple(row_vars)
                cur = mat.get((row, col), Poly.zero(src.field))
                mat[(row, col)] = cur + Poly(src.field, {tuple(epart): coeff})
        return {k: v for k, v in mat.items() if not v.is_zero()}
    raise ValueError(f"unknown foam matrix kind {kind!r}")


# ---------------------------------------------------------------------------
# Closed two-strand engine at E = 0 (arbitrary N)
#
# A resolution of the closure of a 2-strand braid word is either two circles
# (no bridge chosen) or a necklace of j bridges separated by j gaps; gap g
# carries a left arc variable l_g and a right arc variable r_g, both of
# q-degree 2.  State spaces:
#   circles:  k[u, v] / (u^N, v^N)
#   necklace: k[l_g, r_g] / ( matching of e1, e2 across each bridge,
#                             h_{N-1}(l, r) and h_N(l, r) at each bridge )
# where the h_k are complete homogeneous polynomials of the bridge alphabet.
# The differential closes the zip/unzip foams:
#   remove a bridge (positive crossing): multiply by (l - r) of the merged gap
#       after identifying the two adjacent gaps          (degree +2)
#   add a bridge (negative crossing): relabel the split gap's variables
#       to the gap below the new bridge                  (degree 0)


def hpoly(field: Field, k: int, lv: str, rv: str) -> Poly:
    out = Poly.zero(field)
    for a in range(k + 1):
        entries = {}
        if a:
            entries[lv] = a
        if k - a:
            entries[rv] = k - a
        mono = tuple(sorted(entries.items()))
        out = out + Poly(field, {mono: field.one})
    return out


class ClosedWebSpace:
    """Finite-dimensional graded quotient k[vars]/(vars^N, extra relations),
    with a fixed monomial spanning set and a row-reduced basis per degree."""

    def __init__(self, field: Field, N: int, variables: List[str], relations: List[Poly], shift: int):
        self.field = field
        self.N = N
        self.vars = list(variables)
        self.shift = shift
        # ambient monomials: exponents < N in each variable
        self.amb: List[Mono] = []
        for exps in product(range(N), repeat=len(self.vars)):
            mono = tuple(sorted((v, e) for v, e in zip(self.vars, exps) if e))
            self.amb.append(mono)
        self.amb.sort(key=lambda m: (sum(e for _, e in m), m))
        self.amb_index = {m: i for i, m in enumerate(self.amb)}
        # ideal: span of (ambient monomial) * (relation generator), truncated
        gens = []
        for rel in relations:
            for m in self.amb:
                p = self._truncate(Poly(field, {m: field.one}) * rel)
                if not p.is_zero():
                    gens.append(p)
        self._build_basis(gens)

    def _truncate(self, p: Poly) -> Poly:
        out = {}
        for m, c in p.terms.items():
            if all(e < self.N for _, e in m):
                out[m] = c
        return Poly(self.field, out)

    def _to_vec(self, p: Poly):
        v = {}
        for m, c in p.terms.items():
            v[self.amb_index[m]] = c
        return v

    def _build_basis(self, ideal_gens: List[Poly]):
        F = self.field
        n = len(self.amb)
        # row reduce the ideal span; pivots = leading ambient monomials in the ideal
        rows: Dict[int, Dict[int, object]] = {}  # pivot index -> row
        for g in ideal_gens:
            row = self._to_vec(g)
            while row:
                lead = max(row)
                if lead in rows:
                    c = row[lead]
                    piv = rows[lead]
                    fac = F.mul(c, F.inv(piv[lead]))
                    for j, pv in piv.items():
                        r = F.add(row.get(j, F.zero), F.neg(F.mul(fac, pv)))
                        if F.is_zero(r):
                            row.pop(j, None)
                        else:
                            row[j] = r
                else:
                    rows[lead] = row
                    break
        self._ideal_rows = rows
        self.basis = [m for i, m in enumerate(self.amb) if i not in rows]
        self.basis_index = {m: i for i, m in enumerate(self.basis)}

    def dim(self) -> int:
        return len(self.basis)

    def qdeg(self, mono: Mono) -> int:
        return 2 * sum(e for _, e in mono) + self.shift

    def gdim(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for m in self.basis:
            out[self.qdeg(m)] = out.get(self.qdeg(m), 0) + 1
        return out

    def nf(self, p: Poly) -> Dict[int, object]:
        """Normal form of an element as a vector over the quotient basis."""
        F = self.field
        row = self._to_vec(self._truncate(p))
        out: Dict[int, object] = {}
        while row:
            lead = max(row)
            if lead in self._ideal_rows:
                piv = self._ideal_rows[lead]
                fac = F.mul(row[lead], F.inv(piv[lead]))
                for j, pv in piv.items():
                    r = F.add(row.get(j, F.zero), F.neg(F.mul(fac, pv)))
                    if F.is_zero(r):
                        row.pop(j, None)
                    else:
                        row[j] = r
            else:
                mono = self.amb[lead]
                out[self.basis_index[mono]] = row.pop(lead)
        return out


class TwoStrandEngine:
    """Complexes of closures of 2-strand braid words with all E_i = 0.

    Vertices of the resolution cube are ClosedWebSpaces; differentials are
    k-matrices between their bases.  The derivation e (e(var) = -1) descends to
    every space when the characteristic divides N; this is the operator of the
    p-differential theory at N = p.
    """

    def __init__(self, field: Field, N: int):
        self.field = field
        self.N = N

    # -- vertex spaces -------------------------------------------------

    def circles_space(self, shift: int) -> ClosedWebSpace:
        return ClosedWebSpace(self.field, self.N, ["u", "v"], [], shift)

    def necklace_space(self, j: int, shift: int) -> ClosedWebSpace:
        F = self.field
        variables = []
        for g in range(j):
            variables += [f"l{g}", f"r{g}"]
        rels: List[Poly] = []
        for t in range(j):
            g0 = (t - 1) % j  # gap below bridge t
            g1 = t  # gap above bridge t
            l0, r0 = Poly.var(F, f"l{g0}"), Poly.var(F, f"r{g0}")
            l1, r1 = Poly.var(F, f"l{g1}"), Poly.var(F, f"r{g1}")
            if g0 != g1:
                rels.append(l0 + r0 - l1 - r1)
                rels.append(l0 * r0 - l1 * r1)
            rels.append(hpoly(F, self.N - 1, f"l{g0}", f"r{g0}"))
            rels.append(hpoly(F, self.N, f"l{g0}", f"r{g0}"))
        return ClosedWebSpace(F, self.N, variables, rels, shift)

    # -- cube ------------------------------------------------------------

    def braid_complex(self, word: List[int]):
        """Complex of the closure of prod sigma^{sign_i}, word = list of +-1.

        Returns a dict with chain data: 'spaces' per homological degree as a
        list of (ClosedWebSpace, basis offset is implicit), 'gens' q-degrees,
        'd' matrices, 'e' matrices (the derivation closed on each basis), all
        over the engine's field.
        """
        n = len(word)
        n_neg = sum(1 for s in word if s < 0)
        F = self.field
        verts: Dict[Tuple[int, ...], ClosedWebSpace] = {}
        hdeg: Dict[Tuple[int, ...], int] = {}
        bridge_sets: Dict[Tuple[int, ...], List[int]] = {}
        for u in product((0, 1), repeat=n):
            bridges = []
            h = 0
            qs = 0
            for c, (sgn, uc) in enumerate(zip(word, u)):
                if sgn > 0:
                    smoothing = uc
                    h += uc
                    qs += -1 if uc else 0
                else:
                    smoothing = 1 - uc
                    h += uc - 1
                    qs += 1 if uc == 0 else 0
                if smoothing == 0:
                    bridges.append(c)
            j = len(bridges)
            shift = qs - 2 * (self.N - 1) + (2 - j if j >= 1 else 0)
            verts[u] = (bridges, shift)
            hdeg[u] = h
            bridge_sets[u] = bridges
        # build spaces (cache necklace spaces by j and shift)
        spaces: Dict[Tuple[int, ...], ClosedWebSpace] = {}
        for u, (bridges, shift) in verts.items():
            j = len(bridges)
            if j == 0:
                spaces[u] = self.circles_space(shift)
            else:
                spaces[u] = self.necklace_space(j, shift)
        return self._assemble(word, spaces, hdeg, bridge_sets)

    # gap naming: for a vertex with bridges at sorted crossing positions
    # [c_0 < c_1 < ... < c_{j-1}], gap g lies between bridge g and bridge g+1
    # (cyclically), i.e. it contains the strand segments strictly after
    # crossing c_g and up to c_{g+1}.

    def _edge_map(self, word, u, v, i, src: ClosedWebSpace, tgt: ClosedWebSpace,
                  bridges_u: List[int], bridges_v: List[int]):
        """Matrix of d on the cube edge flipping crossing i from u to v."""
        F = self.field
        if word[i] > 0:
            # unzip: bridge at crossing i removed; bridges_v = bridges_u - {i}
            t = bridges_u.index(i)
            j = len(bridges_u)
            if j == 1:
                # necklace_1 -> two circles: l -> u, r -> v, multiply by (u - v)
                sub = {"l0": Poly.var(F, "u"), "r0": Poly.var(F, "v")}
                mult = Poly.var(F, "u") - Poly.var(F, "v")
            else:
                # gaps t-1 and t of src merge into one target gap: a plain
                # identification of variables, no multiplier
                sub, merged_gap = self._unzip_sub(bridges_u, bridges_v, t)
                mult = Poly.one(F)
            return self._matrix(src, tgt, lambda p: mult * p.substitute(sub))
        # zip: bridge at crossing i added; bridges_v = bridges_u + {i}
        t = bridges_v.index(i)
        j = len(bridges_v)
        if j == 1:
            sub = {"u": Poly.var(F, "l0"), "v": Poly.var(F, "r0")}
            mult = Poly.one(F)
        else:
            sub = self._zip_sub(bridges_u, bridges_v, t)
            # splitting a gap in two: multiply by l(gap below) - r(gap above);
            # modulo the matching relations this kills the ambiguity of which
            # of the two new gaps receives the old gap's variables
            g0, g1 = (t - 1) % j, t % j
            mult = Poly.var(F, f"l{g0}") - Poly.var(F, f"r{g1}")
        return self._matrix(src, tgt, lambda p: mult * p.substitute(sub))

    def _unzip_sub(self, bridges_u, bridges_v, t):
        """Substitution for removing bridge t: src gaps renamed to tgt gaps;
        src gaps t-1 and t both map to the merged target gap."""
        j = len(bridges_u)
        sub = {}
        # target gap containing a source gap: source gap g sits after bridge g;
        # in the target the bridge list loses index t, so source gap g maps to
        # target gap (g if g < t else g - 1), with gap t-1 and t coinciding.
        merged = (t - 1) % (j - 1)
        for g in range(j):
            if g == t - 1 or (t == 0 and g == j - 1):
                tg = merged
            elif g < t:
                tg = g
            elif g == t:
                tg = merged
            else:
                tg = g - 1
            sub[f"l{g}"] = Poly.var(self.field, f"l{tg}")
            sub[f"r{g}"] = Poly.var(self.field, f"r{tg}")
        return sub, merged

    def _zip_sub(self, bridges_u, bridges_v, t):
        """Substitution for inserting bridge t: source gap variables renamed to
        the target gap *below* the new bridge where split."""
        j = len(bridges_v)
        sub = {}
        # source gaps are indexed by bridges_u; source gap g maps to target gap:
        # target gaps with index < t keep their index, >= t shift by one; the
        # split source gap (the one between the target bridges t-1 and t+1)
        # goes to the gap below the new bridge, i.e. target gap t-1.
        for g in range(j - 1):
            tg = g if g < t else g + 1
            if g == (t - 1) % (j - 1):
                tg = (t - 1) % j
            sub[f"l{g}"] = Poly.var(self.field, f"l{tg}")
            sub[f"r{g}"] = Poly.var(self.field, f"r{tg}")
        return sub

    def _matrix(self, src: ClosedWebSpace, tgt: ClosedWebSpace, fn):
        mat: Dict[Tuple[int, int], object] = {}
        F = self.field
        for jcol, mono in enumerate(src.basis):
            img = tgt.nf(fn(Poly(F, {mono: F.one})))
            for irow, c in img.items():
                mat[(irow, jcol)] = c
        return mat

    def e_matrix(self, sp: ClosedWebSpace):
        """The derivation with var -> -1 closed on the quotient basis."""
        F = self.field
        mat: Dict[Tuple[int, int], object] = {}
        for jcol, mono in enumerate(sp.basis):
            p = Poly(F, {mono: F.one})
            img = Poly.zero(F)
            for v, e in mono:
                rest = dict(mono)
                if e == 1:
                    rest.pop(v)
                else:
                    rest[v] = e - 1
                img = img + Poly(F, {tuple(sorted(rest.items())): F.mul(F.of(e), F.of(-1))})
            for irow, c in sp.nf(img).items():
                mat[(irow, jcol)] = c
        return mat

    def _assemble(self, word, spaces, hdeg, bridge_sets):
        F = self.field
        n = len(word)
        # flatten generators per homological degree
        index: Dict[Tuple[Tuple[int, ...], int], Tuple[int, int]] = {}
        gens: Dict[int, List[int]] = {}
        for u in sorted(spaces):
            sp = spaces[u]
            t = hdeg[u]
            for b, mono in enumerate(sp.basis):
                gens.setdefault(t, [])
                index[(u, b)] = (t, len(gens[t]))
                gens[t].append(sp.qdeg(mono))
        d: Dict[int, Dict[Tuple[int, int], object]] = {}
        for u in sorted(spaces):
            for i in range(n):
                if u[i] == 1:
                    continue
                v = u[:i] + (1,) + u[i + 1 :]
                sgn = (-1) ** sum(u[:i])
                mat = self._edge_map(
                    word, u, v, i, spaces[u], spaces[v], bridge_sets[u], bridge_sets[v]
                )
                t = hdeg[u]
                dd = d.setdefault(t, {})
                for (bi, bj), c in mat.items():
                    key = (index[(v, bi)][1], index[(u, bj)][1])
                    r = F.add(dd.get(key, F.zero), F.mul(F.of(sgn), c))
                    if F.is_zero(r):
                        dd.pop(key, None)
                    else:
                        dd[key] = r
        em: Dict[int, Dict[Tuple[int, int], object]] = {}
        for u in sorted(spaces):
            sp = spaces[u]
            t = hdeg[u]
            mat = self.e_matrix(sp)
            ee = em.setdefault(t, {})
            for (bi, bj), c in mat.items():
                ee[(index[(u, bi)][1], index[(u, bj)][1])] = c
        return {"gens": gens, "d": d, "e": em, "field": F}

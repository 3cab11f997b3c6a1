"""Cube of resolutions for the thin (N = 2) theory, with the sl2 structure.

Local crossing complexes (framed conventions):
  positive:  [ bridge smoothing at homological degree 0 ] --unzip--> [ q^{-1} oriented at degree 1 ]
  negative:  [ q oriented at degree -1 ] --zip--> [ bridge at degree 0 ]

The sl2 operators on each cube vertex are: e = the coefficient derivation
(e(x) = -1, e(E1) = -2, e(E2) = -E1), f = derivation (f(x) = x^2) plus
multiplication by a degree-2 twist psi_v, and h = [e, f] = -(internal degree)
+ e(psi_v).  The twists are pinned by one anchor -- psi = -(1/2) E1 per circle
at the all-oriented vertex -- and propagated to every vertex by solving the
linear system expressing that f commutes with the differential.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .ring import Field, Mono, Poly, sl2_on_poly
from .diagrams import LinkDiagram
from .tqft import StateSpace, statespace, saddle_map, foam_matrix, _xvar
from .webfoam import GreenDot

Matrix = Dict[Tuple[int, int], Poly]


@dataclass
class ChainComplex:
    """Complex of free R-modules.  gens[t] lists the q-degrees of the free
    generators in homological degree t; d[t] maps degree t to t+1, entries
    indexed (row in t+1, col in t).  Operators are stored as
    (derivation, matrix) pairs: op(r * g_j) = deriv(r) g_j + r * sum M_ij g_i.
    """

    field: Field
    gens: Dict[int, List[int]]
    d: Dict[int, Matrix]
    N: int = 2
    ops: Dict[str, Dict[int, Matrix]] = dfield(default_factory=dict)
    labels: Dict[int, List[object]] = dfield(default_factory=dict)
    # weight constant: h acts on a homogeneous class of reported q-degree q
    # as the scalar kappa - q
    kappa: object = None

    def degrees(self) -> List[int]:
        return sorted(self.gens)

    def check_d_squared(self):
        for t in self.degrees():
            a = self.d.get(t)
            b = self.d.get(t + 1)
            if not a or not b:
                continue
            prod = compose(b, a, self.field)
            assert not prod, f"d^2 != 0 at degree {t}"

    def check_homogeneous(self):
        for t, mat in self.d.items():
            for (i, j), p in mat.items():
                if p.is_zero():
                    continue
                want = self.gens[t][j] - self.gens[t + 1][i]
                assert p.degree() == want, (
                    f"differential entry at t={t} ({i},{j}) has degree "
                    f"{p.degree()}, expected {want}"
                )


def compose(b: Matrix, a: Matrix, field: Field) -> Matrix:
    out: Matrix = {}
    by_col: Dict[int, List[Tuple[int, Poly]]] = {}
    for (i, j), p in b.items():
        by_col.setdefault(j, []).append((i, p))
    for (j, k), q in a.items():
        for i, p in by_col.get(j, []):
            cur = out.get((i, k))
            s = p * q if cur is None else cur + p * q
            if s.is_zero():
                out.pop((i, k), None)
            else:
                out[(i, k)] = s
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    out = dict(a)
    for key, p in b.items():
        cur = out.get(key)
        s = p if cur is None else cur + p
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return out


def mat_neg(a: Matrix) -> Matrix:
    return {k: p.neg() for k, p in a.items()}


def mat_deriv(a: Matrix, gen: str, N: int) -> Matrix:
    """Entrywise derivation of a matrix."""
    out = {}
    for k, p in a.items():
        q = sl2_on_poly(gen, p, N)
        if not q.is_zero():
            out[k] = q
    return out


# ---------------------------------------------------------------------------
# Cube construction


def resolve_crossing(sign: int, u: int) -> Tuple[int, int, int]:
    """(smoothing, local homological degree, local q-shift) of position u in the
    two-term complex of a crossing: smoothing 1 = oriented, 0 = bridge."""
    if sign > 0:
        return (u, u, -1 if u else 0)
    return (1 - u, u - 1, 1 if u == 0 else 0)


@dataclass
class Cube:
    diagram: LinkDiagram
    field: Field
    vertices: Dict[Tuple[int, ...], StateSpace]
    hdeg: Dict[Tuple[int, ...], int]
    edges: List[Tuple[Tuple[int, ...], Tuple[int, ...], int, Matrix]]
    psi: Dict[Tuple[int, ...], Poly] = dfield(default_factory=dict)


def cube(diagram: LinkDiagram, field: Field, dots: Optional[List[GreenDot]] = None) -> Cube:
    n = len(diagram.crossings)
    signs = [c.sign for c in diagram.crossings]
    vertices: Dict[Tuple[int, ...], StateSpace] = {}
    hdeg: Dict[Tuple[int, ...], int] = {}
    for u in product((0, 1), repeat=n):
        state = []
        h = 0
        qs = 0
        for sign, uc in zip(signs, u):
            s, dh, dq = resolve_crossing(sign, uc)
            state.append(s)
            h += dh
            qs += dq
        sp = statespace(field, diagram, state, shift=0)
        sp.shift = qs - sp.m
        sp.state = tuple(state)
        vertices[u] = sp
        hdeg[u] = h
    edges = []
    for u in vertices:
        for i in range(n):
            if u[i] == 1:
                continue
            v = u[:i] + (1,) + u[i + 1 :]
            sign = (-1) ** sum(u[:i])
            src, tgt = vertices[u], vertices[v]
            to_bridge = signs[i] < 0
            mat = saddle_map(src, tgt, diagram.crossings[i], to_bridge)
            edges.append((u, v, sign, mat))
    return Cube(diagram, field, vertices, hdeg, edges)


# ---------------------------------------------------------------------------
# Twist solver


def _twist_basis(space: StateSpace) -> List[Poly]:
    """Allowed degree-2 twist components: E1 and the circle variables."""
    out = [Poly.var(space.field, "E1")]
    for i in range(space.m):
        out.append(Poly.var(space.field, _xvar(i)))
    return out


def solve_twists(cb: Cube, dots: Optional[List[GreenDot]] = None,
                 t1: Fraction = Fraction(1, 2), t2: Fraction = Fraction(1, 2)):
    """Find psi_v for every vertex so that F = f_derivation + psi_v commutes with
    the differential, anchored at the all-oriented vertex by
    -(t1 x + t2 (E1 - x)) per circle plus green-dot contributions.  Green dots
    add their own twist to the anchor and to each vertex via the facet variable
    of the dotted arc.

    Returns {vertex: Poly}.  Raises if the linear system is inconsistent.
    """
    t1, t2 = Fraction(t1), Fraction(t2)
    field = cb.field
    verts = list(cb.vertices)
    # green-dot twist at a vertex: hollow lam on arc -> lam * facetvar,
    # solid lam -> lam * (E1 - facetvar); these are *fixed* additions, so solve
    # for the dot-free psi and add dot twists afterwards per vertex.
    def dot_twist(space: StateSpace) -> Poly:
        phi = Poly.zero(field)
        for d in dots or []:
            fv = space.facetvar(d.arc)
            lam = field.of(Fraction(d.mult))
            e1 = Poly.var(field, "E1")
            phi = phi + (fv if d.kind == "hollow" else e1 - fv).scale(lam)
        return phi

    # unknown layout
    offs: Dict[Tuple[int, ...], int] = {}
    nvar = 0
    bases: Dict[Tuple[int, ...], List[Poly]] = {}
    for u in verts:
        b = _twist_basis(cb.vertices[u])
        bases[u] = b
        offs[u] = nvar
        nvar += len(b)
    rows: List[Dict[int, object]] = []
    rhs: List[object] = []

    def add_equation(coeffs: Dict[int, Poly], target: Poly):
        # expand a Poly-valued linear equation into scalar equations per monomial
        monos = set(target.terms)
        for p in coeffs.values():
            monos |= set(p.terms)
        for mono in monos:
            row = {}
            for var, p in coeffs.items():
                c = p.terms.get(mono)
                if c is not None:
                    row[var] = c
            rows.append(row)
            rhs.append(target.terms.get(mono, field.zero))

    # anchor: all-oriented vertex
    anchor = None
    for u, sp in cb.vertices.items():
        if all(s == 1 for s in getattr(sp, "state", ())) or not sp.state:
            anchor = u
    assert anchor is not None
    sp0 = cb.vertices[anchor]
    e1p = Poly.var(field, "E1")
    anchor_val = Poly.zero(field)
    for i in range(sp0.m):
        x = sp0.xv(i)
        anchor_val = anchor_val - (x.scale(field.of(t1)) + (e1p - x).scale(field.of(t2)))
    coeffs = {offs[anchor] + k: b for k, b in enumerate(bases[anchor])}
    add_equation(coeffs, anchor_val)

    # edge equations: psi_tgt * d(b) - d(psi_src * b) = d(f(b)) - f(d(b))
    for (u, v, sign, mat) in cb.edges:
        src, tgt = cb.vertices[u], cb.vertices[v]
        dphi_src = dot_twist(src)
        dphi_tgt = dot_twist(tgt)
        cols: Dict[Mono, List[Tuple[Mono, Poly]]] = {}
        for (row_m, col_m), p in _matrix_by_monos(mat).items():
            cols.setdefault(col_m, []).append((row_m, p))
        for col_m in src.basis():
            img = cols.get(col_m, [])  # d(col) as list of (target mono, coeff)
            # rhs = f_deriv(d b) - d(f_deriv b), including fixed dot twists
            b_poly = Poly(field, {col_m: field.one})
            db = Poly.zero(field)
            for row_m, p in img:
                db = db + p * Poly(field, {row_m: field.one})
            f_db = tgt.reduce(sl2_on_poly("f", db, 2))
            f_b = src.reduce(sl2_on_poly("f", b_poly, 2))
            d_fb = _apply_matrix(mat, tgt, src, f_b)
            fixed = tgt.reduce(dphi_tgt * db) - _apply_matrix(
                mat, tgt, src, src.reduce(dphi_src * b_poly)
            )
            target = tgt.reduce(d_fb - f_db - fixed)
            # lhs: psi_tgt * db - d(psi_src * b)
            lhs: Dict[int, Poly] = {}
            for k, bp in enumerate(bases[v]):
                val = tgt.reduce(bp * db)
                if not val.is_zero():
                    lhs[offs[v] + k] = val
            for k, bp in enumerate(bases[u]):
                val = _apply_matrix(mat, tgt, src, src.reduce(bp * b_poly))
                if not val.is_zero():
                    cur = lhs.get(offs[u] + k)
                    lhs[offs[u] + k] = (cur - val) if cur is not None else val.neg()
            add_equation(lhs, target)

    sol = _solve_linear(rows, rhs, nvar, field)
    psi = {}
    for u in verts:
        p = dot_twist(cb.vertices[u])
        for k, bp in enumerate(bases[u]):
            c = sol[offs[u] + k]
            if not field.is_zero(c):
                p = p + bp.scale(c)
        psi[u] = p
    cb.psi = psi
    return psi


def _matrix_by_monos(mat) -> Dict[Tuple[Mono, Mono], Poly]:
    return mat


def _apply_matrix(mat, tgt: StateSpace, src: StateSpace, p: Poly) -> Poly:
    """Apply an R-linear saddle matrix (indexed by basis monomials) to a reduced
    source element."""
    out = Poly.zero(tgt.field)
    expanded = src.expand(p)
    for (row_m, col_m), entry in mat.items():
        c = expanded.get(col_m)
        if c is not None:
            out = out + entry * c * Poly(tgt.field, {row_m: tgt.field.one})
    return tgt.reduce(out)


def _solve_linear(rows, rhs, nvar, field: Field):
    """Solve a sparse linear system; returns one solution.  Raises ValueError if
    inconsistent."""
    dense = [[field.zero] * nvar + [b] for b in rhs]
    for r, row in enumerate(rows):
        for c, val in row.items():
            dense[r][c] = val
    pivots = []
    r = 0
    for c in range(nvar):
        piv = None
        for rr in range(r, len(dense)):
            if not field.is_zero(dense[rr][c]):
                piv = rr
                break
        if piv is None:
            continue
        dense[r], dense[piv] = dense[piv], dense[r]
        inv = field.inv(dense[r][c])
        dense[r] = [field.mul(inv, x) for x in dense[r]]
        for rr in range(len(dense)):
            if rr != r and not field.is_zero(dense[rr][c]):
                fac = dense[rr][c]
                dense[rr] = [
                    field.add(x, field.neg(field.mul(fac, y)))
                    for x, y in zip(dense[rr], dense[r])
                ]
        pivots.append((r, c))
        r += 1
    for rr in range(r, len(dense)):
        if not field.is_zero(dense[rr][nvar]):
            raise ValueError("twist system inconsistent")
    sol = [field.zero] * nvar
    for rr, c in pivots:
        sol[c] = dense[rr][nvar]
    return sol


# ---------------------------------------------------------------------------
# Flattening the cube into a ChainComplex with sl2 operators


def cube_complex(
    diagram: LinkDiagram,
    field: Field,
    dots: Optional[List[GreenDot]] = None,
    framing: str = "framed",
    t1: Fraction = Fraction(1, 2),
    t2: Fraction = Fraction(1, 2),
) -> ChainComplex:
    cb = cube(diagram, field, dots)
    psi = solve_twists(cb, dots, t1=t1, t2=t2)
    n = len(diagram.crossings)
    w = diagram.writhe()
    qcorr = 2 * w if framing == "unframed" else 0
    tcorr = -w if framing == "unframed" else 0
    if framing == "unframed":
        # framing twist: + (w/2) E1 per component self-writhe; for N=2 the solid
        # and hollow parts combine to the central element (w/2) E1
        e1 = Poly.var(field, "E1")
        for u in psi:
            psi[u] = psi[u] + e1.scale(field.of(Fraction(w, 2)))

    # global generator index per homological degree
    index: Dict[Tuple[Tuple[int, ...], Mono], Tuple[int, int]] = {}
    gens: Dict[int, List[int]] = {}
    labels: Dict[int, List[object]] = {}
    for u in sorted(cb.vertices):
        sp = cb.vertices[u]
        t = cb.hdeg[u] + tcorr
        for mono in sp.basis():
            gens.setdefault(t, [])
            labels.setdefault(t, [])
            index[(u, mono)] = (t, len(gens[t]))
            gens[t].append(sp.basis_qdeg(mono) + qcorr)
            labels[t].append((u, mono))
    d: Dict[int, Matrix] = {}
    for (u, v, sign, mat) in cb.edges:
        t = cb.hdeg[u] + tcorr
        for (row_m, col_m), p in mat.items():
            i = index[(v, row_m)][1]
            j = index[(u, col_m)][1]
            cur = d.setdefault(t, {}).get((i, j))
            val = p.scale(field.of(sign))
            s = val if cur is None else cur + val
            if s.is_zero():
                d[t].pop((i, j), None)
            else:
                d[t][(i, j)] = s

    cx = ChainComplex(field=field, gens=gens, d=d, labels=labels)
    # sl2 matrices per degree (the derivation part is implicit)
    Em: Dict[int, Matrix] = {}
    Fm: Dict[int, Matrix] = {}
    for u in sorted(cb.vertices):
        sp = cb.vertices[u]
        t = cb.hdeg[u] + tcorr
        for col_m in sp.basis():
            j = index[(u, col_m)][1]
            p = Poly(field, {col_m: field.one})
            e_img = _basis_action(sp, "e", col_m)
            f_img = _basis_action(sp, "f", col_m) + sp.reduce(psi[u] * p)
            for row_m, c in sp.expand(e_img).items():
                Em.setdefault(t, {})[(index[(u, row_m)][1], j)] = c
            for row_m, c in sp.expand(sp.reduce(f_img)).items():
                Fm.setdefault(t, {})[(index[(u, row_m)][1], j)] = c
    cx.ops = {"e": Em, "f": Fm}
    # h = [e, f] acts on a class of reported q-degree q as kappa - q, with
    # kappa = shift + q-correction + e(psi) the same at every vertex
    kappa = None
    for u in sorted(cb.vertices):
        sp = cb.vertices[u]
        c = sl2_on_poly("e", psi[u], 2)
        assert c.is_constant(), "e(psi) must be a scalar"
        k_u = field.add(field.of(sp.shift + qcorr), c.constant())
        if kappa is None:
            kappa = k_u
        else:
            assert kappa == k_u, "weight constant differs between vertices"
    cx.kappa = kappa
    Hm: Dict[int, Matrix] = {}
    for t, qs in gens.items():
        for j, q in enumerate(qs):
            Hm.setdefault(t, {})[(j, j)] = Poly.const(field, field.add(kappa, field.of(-q)))
    cx.ops["h"] = Hm
    return cx


def _basis_action(sp: StateSpace, gen: str, mono: Mono) -> Poly:
    """Derivation applied to a pure basis monomial (no E-part)."""
    p = Poly(sp.field, {mono: sp.field.one})
    return sp.reduce(sl2_on_poly(gen, p, 2))


def check_equivariance(cx: ChainComplex) -> bool:
    """d must commute with the full operators e and f.  For op = deriv + matrix M:
    commuting means M_tgt d - d M_src = deriv(d) entrywise (sign: d applied after
    the derivation acts on matrix entries)."""
    for gen in ("e", "f"):
        M = cx.ops[gen]
        for t in cx.degrees():
            dmat = cx.d.get(t)
            if dmat is None:
                continue
            lhs = mat_add(
                compose(M.get(t + 1, {}), dmat, cx.field),
                mat_neg(compose(dmat, M.get(t, {}), cx.field)),
            )
            rhs = mat_neg(mat_deriv(dmat, gen, cx.N))
            if mat_add(lhs, mat_neg(rhs)):
                return False
    return True


def check_sl2_relations(cx: ChainComplex) -> bool:
    """Chain-level commutators [h,e] = 2e, [h,f] = -2f, [e,f] = h.  Each
    operator is (derivation on coordinates) + (matrix): the derivation parts
    satisfy the relations on the base ring, so the commutator reduces to
    [Ma, Mb] + deriv_a(Mb) - deriv_b(Ma) = scalar * Mc degreewise."""
    F = cx.field
    for a, b, c, scalar in (("h", "e", "e", 2), ("h", "f", "f", -2), ("e", "f", "h", 1)):
        Ma, Mb, Mc = cx.ops[a], cx.ops[b], cx.ops[c]
        for t in cx.degrees():
            ma = Ma.get(t, {})
            mb = Mb.get(t, {})
            comm = mat_add(compose(ma, mb, F), mat_neg(compose(mb, ma, F)))
            comm = mat_add(comm, mat_deriv(mb, a, cx.N))
            comm = mat_add(comm, mat_neg(mat_deriv(ma, b, cx.N)))
            target = {k: p.scale(F.of(scalar)) for k, p in Mc.get(t, {}).items()}
            if mat_add(comm, mat_neg(target)):
                return False
    return True


# ---------------------------------------------------------------------------
# Green dot sliding and framing correction helpers


def slide_green_dot(dots: List[GreenDot], arc_map: Dict[object, object]) -> List[GreenDot]:
    """Relocate green dots along arcs (the homology report must not change)."""
    return [GreenDot(d.kind, d.mult, arc_map.get(d.arc, d.arc)) for d in dots]


def frame_correct(diagram, field, dots=None, t1=Fraction(1, 2), t2=Fraction(1, 2)):
    """Convenience: build the unframed (Reidemeister-I invariant) complex."""
    return cube_complex(diagram, field, dots, framing="unframed", t1=t1, t2=t2)


# ---------------------------------------------------------------------------
# Gaussian elimination over R


def simplify(cx: ChainComplex) -> Tuple[ChainComplex, Dict[int, Matrix], Dict[int, Matrix]]:
    """Cancel differential entries that are nonzero constants.

    Returns (reduced complex, iota, pi): iota[t] includes reduced gens into the
    originals, pi[t] projects originals onto reduced gens; both are chain maps
    and mutually inverse up to homotopy.
    """
    field = cx.field
    # working copies
    gens = {t: list(g) for t, g in cx.gens.items()}
    d = {t: dict(m) for t, m in cx.d.items()}
    alive = {t: [True] * len(g) for t, g in gens.items()}
    # iota/pi as matrices original <- reduced built at the end by composing
    # elementary reductions; store elementary data instead
    iota = {t: _identity(len(g), field) for t, g in gens.items()}
    pi = {t: _identity(len(g), field) for t, g in gens.items()}

    changed = True
    while changed:
        changed = False
        for t in sorted(d):
            mat = d[t]
            pivot = None
            for (i, j), p in sorted(mat.items()):
                if not alive[t][j] or not alive.get(t + 1, [])[i]:
                    continue
                if p.is_constant() and not p.is_zero():
                    pivot = (i, j, p.constant())
                    break
            if pivot is None:
                continue
            i0, j0, c = pivot
            cinv = field.inv(c)
            # Gaussian elimination: for all other entries a_{i,j0}, b_{i0,j}:
            # d'_{i,j} = d_{i,j} - a * c^{-1} * b
            col = {i: p for (i, j), p in mat.items() if j == j0 and i != i0}
            row = {j: p for (i, j), p in mat.items() if i == i0 and j != j0}
            for i, a in col.items():
                if not alive[t + 1][i]:
                    continue
                for j, b in row.items():
                    if not alive[t][j]:
                        continue
                    cur = mat.get((i, j))
                    delta = (a * b).scale(field.neg(cinv))
                    s = delta if cur is None else cur + delta
                    if s.is_zero():
                        mat.pop((i, j), None)
                    else:
                        mat[(i, j)] = s
            alive[t][j0] = False
            alive[t + 1][i0] = False
            # update transport: surviving source gens j: iota column j gains
            # -c^{-1} * d_{i0, j} * (old gen j0); pi row for target i gains
            # -c^{-1} d_{i, j0} * old-pi of i0
            _record_cancel(iota, pi, cx, t, i0, j0, cinv, row, col, field)
            # strike entries in row i0 / col j0
            for key in [k for k in mat if k[0] == i0 or k[1] == j0]:
                mat.pop(key)
            # also entries of d[t-1] into j0 and of d[t+1] out of i0 vanish in the
            # reduced complex (they are composed with the homotopy);
            # Gaussian elimination guarantees d^2=0 keeps them consistent: for
            # the standard two-term cancellation they must be removed via the
            # homotopy correction on neighbouring differentials:
            _fix_neighbours(d, t, i0, j0, cinv, field)
            changed = True
    # build reduced complex
    keep = {t: [k for k, a in enumerate(alive[t]) if a] for t in gens}
    remap = {t: {old: new for new, old in enumerate(keep[t])} for t in gens}
    new_gens = {t: [gens[t][old] for old in keep[t]] for t in gens if keep[t]}
    new_d: Dict[int, Matrix] = {}
    for t, mat in d.items():
        for (i, j), p in mat.items():
            if alive[t][j] and alive.get(t + 1, [False])[i] and not p.is_zero():
                new_d.setdefault(t, {})[(remap[t + 1][i], remap[t][j])] = p
    iota_f = {
        t: {
            (i, remap[t][j]): p
            for (i, j), p in iota[t].items()
            if alive[t][j] and not p.is_zero()
        }
        for t in gens
    }
    pi_f = {
        t: {
            (remap[t][i], j): p
            for (i, j), p in pi[t].items()
            if alive[t][i] and not p.is_zero()
        }
        for t in gens
    }
    red = ChainComplex(field=field, gens=new_gens, d=new_d, N=cx.N, kappa=cx.kappa)
    # transport sl2 operators: M' = pi (deriv(iota) + M iota)
    red.ops = {}
    for gen, M in cx.ops.items():
        newM: Dict[int, Matrix] = {}
        for t in new_gens:
            io = iota_f.get(t, {})
            term = mat_add(mat_deriv(io, gen, cx.N), compose(M.get(t, {}), io, field))
            newM[t] = compose(pi_f.get(t, {}), term, field)
        red.ops[gen] = newM
    return red, iota_f, pi_f


def _identity(n: int, field: Field) -> Matrix:
    one = Poly.const(field, 1)
    return {(i, i): one for i in range(n)}


def _record_cancel(iota, pi, cx, t, i0, j0, cinv, row, col, field):
    # iota: original <- reduced; cancelling the pair (gen j0 at t, gen i0 at t+1)
    # modifies the inclusion of the surviving t-generators:
    #   iota(g_j) += -cinv * d_{i0, j} * g_{j0}
    old_io = iota[t]
    corr: Matrix = {}
    for j, b in row.items():
        corr[(j0, j)] = b.scale(field.neg(cinv))
    if corr:
        iota[t] = _iota_update(old_io, corr, field)
    # pi at t+1: pi(g_i) += -cinv * d_{i, j0} * pi(g_{i0})
    old_pi = pi[t + 1]
    corr2: Matrix = {}
    for i, a in col.items():
        corr2[(i, i0)] = a.scale(field.neg(cinv))
    if corr2:
        pi[t + 1] = _pi_update(old_pi, corr2, field)


def _iota_update(io: Matrix, corr: Matrix, field: Field) -> Matrix:
    # io' = io + io . corr  (corr maps current gens to current gens)
    return mat_add(io, compose(io, corr, field))


def _pi_update(pi_m: Matrix, corr: Matrix, field: Field) -> Matrix:
    # pi' = pi + corr-induced mixing of rows through the cancelled generator
    return _corr_after(pi_m, corr, field)


def _corr_after(pi_m: Matrix, corr: Matrix, field: Field) -> Matrix:
    # rows of pi get corrections: row i of pi' = row i of pi + corr_{i,i0} row i0
    out: Matrix = {}
    for (i, i0), c in corr.items():
        for (ii, j), p in pi_m.items():
            if ii == i0:
                key = (i, j)
                cur = out.get(key)
                val = (p * c) if cur is None else cur + p * c
                out[key] = val
    return mat_add(pi_m, out)


def _fix_neighbours(d, t, i0, j0, cinv, field):
    # incoming differential d[t-1] columns mapping into gen j0 must be pushed
    # through the homotopy; in basic Gaussian elimination with d^2 = 0 the
    # corrected incoming/outgoing entries through the cancelled pair vanish,
    # so it suffices to delete them.
    prev = d.get(t - 1)
    if prev is not None:
        for key in [k for k in prev if k[0] == j0]:
            prev.pop(key)
    nxt = d.get(t + 1)
    if nxt is not None:
        for key in [k for k in nxt if k[1] == i0]:
            nxt.pop(key)

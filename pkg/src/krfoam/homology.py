"""Degreewise homology of the equivariant complexes, with the sl2 structure.

The chain groups are free graded modules over k[E_1..E_N]; in each fixed
q-degree they are finite dimensional over k, so homology is computed exactly,
one (homological degree, q-degree) pair at a time, for every q up to a chosen
cutoff.  The operator h acts on a class of q-degree q as the scalar kappa - q,
so weight spaces are q-graded pieces; e raises the weight by 2 (lowers q), f
lowers it.

The module-structure report peels the homology in each homological degree into
indecomposable summands of the four kinds that occur: Verma modules M(lambda),
dual Vermas M*(lambda) (lambda >= 0), finite simples L(lambda) (lambda >= 0)
and the projectives P(-lambda-2) (extensions of M(lambda) by M(-lambda-2)).
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .ring import Field, Mono, Poly, mono_degree, sl2_on_poly
from .complexes import ChainComplex

Vec = List[object]


# ---------------------------------------------------------------------------
# dense linear algebra over a Field


def rref(field: Field, rows: List[Vec]) -> Tuple[List[Vec], List[int]]:
    """Row-reduce; returns (reduced nonzero rows, pivot column indices)."""
    rows = [list(r) for r in rows]
    ncol = len(rows[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for col in range(ncol):
        piv = None
        for i in range(r, len(rows)):
            if not field.is_zero(rows[i][col]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][col])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][col]):
                c = rows[i][col]
                rows[i] = [
                    field.add(x, field.neg(field.mul(c, y)))
                    for x, y in zip(rows[i], rows[r])
                ]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(field: Field, rows: List[Vec]) -> int:
    return len(rref(field, rows)[0]) if rows else 0


def nullspace(field: Field, mat: List[Vec], ncols: int) -> List[Vec]:
    """Kernel basis of the matrix given as list of rows (len ncols each)."""
    if not mat:
        return [unit_vec(field, ncols, j) for j in range(ncols)]
    red, pivots = rref(field, mat)
    pivset = set(pivots)
    free = [j for j in range(ncols) if j not in pivset]
    basis = []
    for j in free:
        v = [field.zero] * ncols
        v[j] = field.one
        for row, pc in zip(red, pivots):
            v[pc] = field.neg(row[j])
        basis.append(v)
    return basis


def unit_vec(field: Field, n: int, j: int) -> Vec:
    v = [field.zero] * n
    v[j] = field.one
    return v


def solve(field: Field, cols: List[Vec], target: Vec) -> Optional[Vec]:
    """Solve sum_i x_i cols[i] = target; None if inconsistent."""
    n = len(target)
    aug = [[cols[i][r] for i in range(len(cols))] + [target[r]] for r in range(n)]
    red, pivots = rref(field, aug) if aug else ([], [])
    x = [field.zero] * len(cols)
    for row, pc in zip(red, pivots):
        if pc == len(cols):
            return None
    for row, pc in zip(red, pivots):
        x[pc] = row[-1]
    return x


# ---------------------------------------------------------------------------
# graded chain bases


def e_monomials(N: int, deg: int) -> List[Mono]:
    """Monomials in E_1..E_N (deg E_i = 2i) of total degree deg."""
    if deg < 0 or deg % 2:
        return []
    out: List[Mono] = []

    def rec(i: int, rem: int, acc: List[Tuple[str, int]]):
        if i > N:
            if rem == 0:
                out.append(tuple(acc))
            return
        step = 2 * i
        k = 0
        while k * step <= rem:
            rec(i + 1, rem - k * step, acc + ([(f"E{i}", k)] if k else []))
            k += 1

    rec(1, deg, [])
    return [tuple(sorted(m)) for m in out]


class GradedHomology:
    """Homology of a ChainComplex in all q-degrees <= qmax."""

    def __init__(self, cx: ChainComplex, qmax: int):
        self.cx = cx
        self.field = cx.field
        self.qmax = qmax
        self.qmin = min((min(g) for g in cx.gens.values() if g), default=0)
        self._basis: Dict[Tuple[int, int], List[Tuple[int, Mono]]] = {}
        self._index: Dict[Tuple[int, int], Dict[Tuple[int, Mono], int]] = {}
        self._dmat: Dict[Tuple[int, int], List[Vec]] = {}
        self._hom: Dict[Tuple[int, int], Dict[str, object]] = {}
        self._opmat: Dict[Tuple[str, int, int], List[Vec]] = {}

    # -- chain level -------------------------------------------------------

    def basis(self, t: int, q: int) -> List[Tuple[int, Mono]]:
        key = (t, q)
        if key not in self._basis:
            gens = self.cx.gens.get(t, [])
            b = []
            for j, gq in enumerate(gens):
                for m in e_monomials(self.cx.N, q - gq):
                    b.append((j, m))
            self._basis[key] = b
            self._index[key] = {bm: i for i, bm in enumerate(b)}
        return self._basis[key]

    def _expand(self, t: int, q: int, j: int, p: Poly, out: Vec):
        """Accumulate p * g_j (p a polynomial in the E's) into out."""
        idx = self._index[(t, q)]
        for m, c in p.terms.items():
            i = idx[(j, m)]
            out[i] = self.field.add(out[i], c)

    def dmat(self, t: int, q: int) -> List[Vec]:
        """Matrix of d: C_t^q -> C_{t+1}^q, rows = target basis."""
        key = (t, q)
        if key in self._dmat:
            return self._dmat[key]
        F = self.field
        src = self.basis(t, q)
        tgt = self.basis(t + 1, q)
        cols = []
        mat = self.cx.d.get(t, {})
        by_col: Dict[int, List[Tuple[int, Poly]]] = {}
        for (i, j), p in mat.items():
            by_col.setdefault(j, []).append((i, p))
        for (j, m) in src:
            out = [F.zero] * len(tgt)
            mono_p = Poly(F, {m: F.one})
            for i, p in by_col.get(j, []):
                self._expand(t + 1, q, i, p * mono_p, out)
            cols.append(out)
        rows = [[cols[c][r] for c in range(len(cols))] for r in range(len(tgt))]
        self._dmat[key] = rows
        return rows

    def opmat(self, gen: str, t: int, q: int) -> List[Vec]:
        """Matrix of the full operator (derivation + matrix part) on C_t^q.

        e maps into q-2, f into q+2, h into q.  Rows index the target basis.
        """
        key = (gen, t, q)
        if key in self._opmat:
            return self._opmat[key]
        F = self.field
        shift = {"e": -2, "f": 2, "h": 0}[gen]
        src = self.basis(t, q)
        tgt = self.basis(t, q + shift)
        M = self.cx.ops[gen].get(t, {})
        by_col: Dict[int, List[Tuple[int, Poly]]] = {}
        for (i, j), p in M.items():
            by_col.setdefault(j, []).append((i, p))
        cols = []
        for (j, m) in src:
            out = [F.zero] * len(tgt)
            mono_p = Poly(F, {m: F.one})
            der = sl2_on_poly(gen, mono_p, self.cx.N)
            if not der.is_zero():
                self._expand(t, q + shift, j, der, out)
            for i, p in by_col.get(j, []):
                self._expand(t, q + shift, i, p * mono_p, out)
            cols.append(out)
        rows = [[cols[c][r] for c in range(len(cols))] for r in range(len(tgt))]
        self._opmat[key] = rows
        return rows

    # -- homology ------------------------------------------------------------

    def _homology(self, t: int, q: int) -> Dict[str, object]:
        key = (t, q)
        if key in self._hom:
            return self._hom[key]
        F = self.field
        n = len(self.basis(t, q))
        dout = self.dmat(t, q)
        din = self.dmat(t - 1, q)
        cycles = nullspace(F, dout, n)
        # boundaries: columns of din
        nin = len(self.basis(t - 1, q))
        bnd = []
        for c in range(nin):
            col = [din[r][c] for r in range(n)]
            bnd.append(col)
        bred, bpiv = rref(F, bnd) if bnd else ([], [])
        # homology representatives: cycles independent modulo boundaries
        reps: List[Vec] = []
        span = list(bred)
        piv = list(bpiv)
        for z in cycles:
            v = list(z)
            for row, pc in zip(span, piv):
                if not F.is_zero(v[pc]):
                    c = v[pc]
                    v = [F.add(x, F.neg(F.mul(c, y))) for x, y in zip(v, row)]
            if any(not F.is_zero(x) for x in v):
                reps.append(list(z))
                # normalize v and extend the span for subsequent reduction
                lead = next(i for i, x in enumerate(v) if not F.is_zero(x))
                inv = F.inv(v[lead])
                v = [F.mul(inv, x) for x in v]
                span.append(v)
                piv.append(lead)
        # solver columns: reps then boundary basis
        sol_cols = reps + [list(r) for r in bred]
        res = {"reps": reps, "dim": len(reps), "sol_cols": sol_cols}
        self._hom[key] = res
        return res

    def dim(self, t: int, q: int) -> int:
        return self._homology(t, q)["dim"]

    def reps(self, t: int, q: int) -> List[Vec]:
        return self._homology(t, q)["reps"]

    def project(self, t: int, q: int, vec: Vec) -> Vec:
        """Coordinates of a cycle's class in the homology basis."""
        h = self._homology(t, q)
        if not h["reps"]:
            return []
        x = solve(self.field, h["sol_cols"], vec)
        assert x is not None, "vector is not a cycle up to boundaries"
        return x[: len(h["reps"])]

    def op_on_homology(self, gen: str, t: int, q: int) -> List[Vec]:
        """Matrix (rows = target homology basis) of e/f/h from H_t^q."""
        F = self.field
        shift = {"e": -2, "f": 2, "h": 0}[gen]
        reps = self.reps(t, q)
        if q + shift > self.qmax:
            reps = []
        ncols = len(reps)
        nrows = self.dim(t, q + shift) if q + shift <= self.qmax else 0
        if ncols == 0 or nrows == 0:
            return [[F.zero] * ncols for _ in range(nrows)]
        op = self.opmat(gen, t, q)
        cols = []
        for z in reps:
            img = [
                _dot(F, op[r], z) for r in range(len(op))
            ]
            cols.append(self.project(t, q + shift, img))
        return [[cols[c][r] for c in range(ncols)] for r in range(nrows)]

    # -- reports ---------------------------------------------------------

    def gdims(self) -> Dict[int, Dict[int, int]]:
        out: Dict[int, Dict[int, int]] = {}
        for t in self.cx.degrees():
            row = {}
            for q in self.qrange():
                dmn = self.dim(t, q)
                if dmn:
                    row[q] = dmn
            if row:
                out[t] = row
        return out

    def qrange(self) -> List[int]:
        return list(range(self.qmin, self.qmax + 1))

    def weight_of_q(self, q: int):
        return self.cx.kappa - self.field.of(q) if self.field.char == 0 else None


def _dot(field: Field, row: Vec, v: Vec):
    acc = field.zero
    for a, b in zip(row, v):
        if not field.is_zero(a) and not field.is_zero(b):
            acc = field.add(acc, field.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# sl2-module decomposition from weight-space statistics


def decompose(hom: GradedHomology, t: int) -> Dict[str, object]:
    """Decompose H_t into M / M* / L / P summands.

    Uses four weight-space statistics: dim, dim ker e (highest weight
    vectors), dim ker f, and rank(f.e).  Peeling from the highest weight down,
    a group of summands with common top lambda is sized by ker e at lambda;
    ker f at -lambda counts its M* + L members; the rank of f.e and the
    dimension at -lambda-2 then separate P from M and L from M*.  Groups whose
    critical weight -lambda-2 falls below the window are reported with the
    M*/L and M/P splits unresolved (counted as M* and M).
    """
    F = hom.field
    kappa = hom.cx.kappa
    assert kappa is not None
    kappa = int(kappa)
    # weight w corresponds to q = kappa - w
    wmin = kappa - hom.qmax
    wmax = kappa - hom.qmin

    def dim_w(w):
        return hom.dim(t, kappa - w) if wmin <= w <= wmax else 0

    def ker_dim(gen, w):
        mat = hom.op_on_homology(gen, t, kappa - w)
        return dim_w(w) - rank(F, mat)

    def fe_rank(w):
        # rank of f.e on the weight-w piece: e maps q to q-2, f maps back
        e = hom.op_on_homology("e", t, kappa - w)
        f = hom.op_on_homology("f", t, kappa - w - 2)
        if not e or not f or not e[0]:
            return 0
        prod = [[_dot(F, f[r], [e[i][c] for i in range(len(e))])
                 for c in range(len(e[0]))] for r in range(len(f))]
        return rank(F, prod)

    # groups[lam] = {total, sl, m, s, l, p (splits None until resolved)}
    groups: Dict[int, Dict[str, Optional[int]]] = {}
    ok = True

    for w in range(wmax, wmin - 1, -2):
        # second highest-weight vectors at w come from the group lam = -w-2
        second = 0
        g2 = groups.get(-w - 2)
        if g2 is not None:
            second = g2["total"] - (g2["sl"] or 0)  # one per M and per P
        new = ker_dim("e", w) - second
        if new < 0:
            ok = False
            new = 0
        if new:
            if w < 0:
                groups[w] = {"total": new, "sl": 0, "m": new, "s": 0, "l": 0, "p": 0}
            else:
                sl = ker_dim("f", -w) if -w - 2 >= wmin else None
                groups[w] = {"total": new, "sl": sl, "m": None, "s": None,
                             "l": None, "p": None}
        # resolve the group whose critical weight -lam-2 equals w
        lam = -w - 2
        grp = groups.get(lam)
        if grp is not None and lam >= 0 and grp["m"] is None:
            total, sl = grp["total"], grp["sl"]
            # expected fe rank / dim at w from all other groups: an unresolved
            # group with top mu > lam contributes 1 per summand to both; a
            # resolved group mu < lam contributes m + s + 2p to both (its L
            # members have died out by now)
            exp = 0
            for mu, g in groups.items():
                if mu == lam:
                    continue
                if g["m"] is None:
                    if w <= mu - 2:
                        exp += g["total"]
                else:
                    if w <= mu - 2 and (mu < 0 or w != -mu - 2):
                        # below a resolved group's own critical weight the
                        # count is m + s + 2p; at exactly -mu-2 it is handled
                        # when that group resolves
                        if mu >= 0 and w < -mu - 2:
                            exp += g["m"] + g["s"] + 2 * g["p"]
                        elif mu >= 0 and -mu - 2 < w:
                            exp += g["m"] + g["s"] + g["p"] + (g["l"] if w >= -mu else 0)
                        elif mu < 0:
                            exp += g["m"]
            p = fe_rank(w) - exp
            # dim at w: same expected contributions, plus the group's own
            # m + s + 2p, plus any brand-new tops at w (just created above)
            own_new = groups.get(w, {}).get("total", 0) if w != lam else 0
            d_here = dim_w(w) - exp - own_new
            mp = total - sl
            if not (0 <= p <= mp):
                ok = False
                p = max(0, min(p, mp))
            m = mp - p
            s = d_here - m - 2 * p
            if not (0 <= s <= sl):
                ok = False
                s = max(0, min(s, sl))
            grp.update({"m": m, "s": s, "l": sl - s, "p": p})

    # groups never resolved (critical weight below window): best effort
    uncertified: List[int] = []
    for lam, g in groups.items():
        if g["m"] is None:
            uncertified.append(lam)
            sl = g["sl"] if g["sl"] is not None else 0
            g.update({"m": g["total"] - sl, "s": sl, "l": 0, "p": 0})

    summands: List[Dict[str, object]] = []
    for lam in sorted(groups, reverse=True):
        g = groups[lam]
        for kind, label, mult in (
            ("m", f"M({lam})", g["m"]),
            ("s", f"M*({lam})", g["s"]),
            ("l", f"L({lam})", g["l"]),
            ("p", f"P({-lam - 2})", g["p"]),
        ):
            if mult:
                summands.append({"type": label, "mult": mult})
    return {
        "summands": summands,
        "uncertified_tops": sorted(uncertified),
        "window_weights": [wmin, wmax],
        "consistent": ok,
    }


def locally_finite_parts(decomp: Dict[str, object]) -> Dict[str, List[Dict]]:
    """Zuckerman (max locally finite sub) and Bernstein (max locally finite
    quotient) functors evaluated on a decomposed module.

    Gamma keeps L(lambda) from each L(lambda) and each M*(lambda); Z keeps
    L(lambda) from each L(lambda) and each M(lambda) with lambda >= 0.  Verma
    modules with negative highest weight and the projectives contribute
    nothing to either.
    """
    gamma: Dict[int, int] = {}
    z: Dict[int, int] = {}
    for part in decomp["summands"]:
        label, mult = part["type"], part["mult"]
        kind, lam = label.split("(")[0], int(label.split("(")[1][:-1])
        if kind in ("L", "M*"):
            gamma[lam] = gamma.get(lam, 0) + mult
        if kind == "L" or (kind == "M" and lam >= 0):
            z[lam] = z.get(lam, 0) + mult
    fmt = lambda d: [
        {"type": f"L({lam})", "mult": m} for lam, m in sorted(d.items(), reverse=True)
    ]
    return {"gamma": fmt(gamma), "z": fmt(z)}


# ---------------------------------------------------------------------------
# finite scalar complexes (the all-E_i-zero engines)


def scalar_homology(field: Field, gens: Dict[int, List[int]],
                    d: Dict[int, Dict[Tuple[int, int], object]],
                    ops: Optional[Dict[str, Dict[int, Dict]]] = None):
    """Homology of a complex of finite dimensional graded vector spaces.

    d[t] maps degree t to t+1 with scalar entries (row, col).  Returns per
    homological degree: q-graded dims, representatives, and the matrices of
    any supplied degree -2 operators on homology (e.g. the derivation e).
    """
    out = {}
    for t in sorted(gens):
        n = len(gens[t])
        dout = [[field.zero] * n for _ in range(len(gens.get(t + 1, [])))]
        for (i, j), c in d.get(t, {}).items():
            dout[i][j] = c
        din_cols = []
        nprev = len(gens.get(t - 1, []))
        dprev = d.get(t - 1, {})
        for c in range(nprev):
            col = [field.zero] * n
            for (i, j), val in dprev.items():
                if j == c:
                    col[i] = val
            din_cols.append(col)
        cycles = nullspace(field, dout, n)
        bred, bpiv = rref(field, din_cols) if din_cols else ([], [])
        reps = []
        span, piv = list(bred), list(bpiv)
        for zv in cycles:
            v = list(zv)
            for row, pc in zip(span, piv):
                if not field.is_zero(v[pc]):
                    cfc = v[pc]
                    v = [field.add(x, field.neg(field.mul(cfc, y))) for x, y in zip(v, row)]
            if any(not field.is_zero(x) for x in v):
                reps.append(list(zv))
                lead = next(i for i, x in enumerate(v) if not field.is_zero(x))
                inv = field.inv(v[lead])
                span.append([field.mul(inv, x) for x in v])
                piv.append(lead)
        sol_cols = reps + [list(r) for r in bred]
        qdegs = []
        for zv in reps:
            supp = [gens[t][i] for i, x in enumerate(zv) if not field.is_zero(x)]
            assert len(set(supp)) == 1, "homology representative not homogeneous"
            qdegs.append(supp[0])
        entry = {"reps": reps, "qdegs": qdegs, "sol_cols": sol_cols}
        out[t] = entry
    if ops:
        for name, M in ops.items():
            for t, entry in out.items():
                reps, sol_cols = entry["reps"], entry["sol_cols"]
                mat = M.get(t, {})
                cols = []
                for zv in reps:
                    img = [field.zero] * len(zv)
                    for (i, j), c in mat.items():
                        if not field.is_zero(zv[j]):
                            img[i] = field.add(img[i], field.mul(c, zv[j]))
                    x = solve(field, sol_cols, img)
                    assert x is not None, f"operator {name} image not a cycle mod boundaries"
                    cols.append(x[: len(reps)])
                entry[name] = [[cols[c][r] for c in range(len(reps))] for r in range(len(reps))]
    return out

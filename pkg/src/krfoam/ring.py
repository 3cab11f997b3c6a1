"""Graded base ring k[E_1..E_N], symmetric-function identities, quantum integers,
and the sl2 derivation action on polynomials.

Conventions: deg E_i = 2i, every circle/arc variable has degree 2.  The sl2
generators act on an N-variable alphabet by e = -sum d/dx_i, f = sum x_i^2 d/dx_i,
h = -deg; on the elementary symmetric polynomials this gives the closed rules
implemented in `_E_RULES` below.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple


class Field:
    """Exact field: the rationals (char 0) or a prime field of odd characteristic.

    2 must be invertible throughout the theory, so characteristic 2 is rejected.
    """

    def __init__(self, char: int = 0):
        if char == 2:
            raise ValueError("characteristic 2 is not allowed (2 must be invertible)")
        if char < 0 or char == 1:
            raise ValueError("char must be 0 or an odd prime")
        if char:
            if any(char % d == 0 for d in range(2, int(char**0.5) + 1)):
                raise ValueError(f"{char} is not prime")
        self.char = char

    def of(self, value) -> object:
        if self.char:
            if isinstance(value, Fraction):
                return (value.numerator * pow(value.denominator, -1, self.char)) % self.char
            return int(value) % self.char
        if isinstance(value, Fraction):
            return value
        return Fraction(value)

    def add(self, a, b):
        r = a + b
        return r % self.char if self.char else r

    def mul(self, a, b):
        r = a * b
        return r % self.char if self.char else r

    def neg(self, a):
        return (-a) % self.char if self.char else -a

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.char:
            return pow(a, -1, self.char)
        return Fraction(1) / a

    def is_zero(self, a) -> bool:
        return a == 0

    @property
    def zero(self):
        return self.of(0)

    @property
    def one(self):
        return self.of(1)

    def __repr__(self):
        return "QQ" if self.char == 0 else f"GF({self.char})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))


QQ = Field(0)

Mono = Tuple[Tuple[str, int], ...]  # sorted ((var, exp), ...)


def var_degree(name: str) -> int:
    """q-degree of a variable: E_i has degree 2i, every other variable degree 2."""
    if name.startswith("E") and name[1:].isdigit():
        return 2 * int(name[1:])
    return 2


def mono_degree(m: Mono) -> int:
    return sum(var_degree(v) * e for v, e in m)


def _mono(entries: Mapping[str, int]) -> Mono:
    return tuple(sorted((v, e) for v, e in entries.items() if e))


def mono_mul(a: Mono, b: Mono) -> Mono:
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return _mono(d)


class Poly:
    """Sparse polynomial over a Field in named (graded) commuting variables."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: Dict[Mono, object] | None = None):
        self.field = field
        self.terms: Dict[Mono, object] = {}
        if terms:
            for m, c in terms.items():
                if not field.is_zero(c):
                    self.terms[m] = c

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(field: Field) -> "Poly":
        return Poly(field)

    @staticmethod
    def const(field: Field, c) -> "Poly":
        c = field.of(c)
        return Poly(field, {(): c})

    @staticmethod
    def var(field: Field, name: str, exp: int = 1, coeff=1) -> "Poly":
        return Poly(field, {_mono({name: exp}): field.of(coeff)})

    @staticmethod
    def one(field: Field) -> "Poly":
        return Poly.const(field, 1)

    def pow(self, n: int) -> "Poly":
        out = Poly.const(self.field, 1)
        for _ in range(n):
            out = out * self
        return out

    def neg(self) -> "Poly":
        return -self

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self):
        return self.terms.get((), self.field.zero)

    # -- ring ops -----------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        F = self.field
        for m, c in other.terms.items():
            r = F.add(t.get(m, F.zero), c)
            if F.is_zero(r):
                t.pop(m, None)
            else:
                t[m] = r
        return Poly(F, t)

    def __neg__(self) -> "Poly":
        F = self.field
        return Poly(F, {m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        F = self.field
        t: Dict[Mono, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                r = F.add(t.get(m, F.zero), F.mul(c1, c2))
                if F.is_zero(r):
                    t.pop(m, None)
                else:
                    t[m] = r
        return Poly(F, t)

    def scale(self, c) -> "Poly":
        F = self.field
        c = F.of(c)
        return Poly(F, {m: F.mul(cc, c) for m, cc in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, tuple(sorted(self.terms.items()))))

    # -- grading ------------------------------------------------------
    def degree(self) -> int:
        """Degree of a homogeneous polynomial (raises otherwise); 0 for the zero poly."""
        degs = {mono_degree(m) for m in self.terms}
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError(f"not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def homogeneous_parts(self) -> Dict[int, "Poly"]:
        parts: Dict[int, Poly] = {}
        for m, c in self.terms.items():
            d = mono_degree(m)
            parts.setdefault(d, Poly(self.field))
            parts[d].terms[m] = c
        return parts

    # -- substitution -------------------------------------------------
    def substitute(self, subs: Mapping[str, "Poly"]) -> "Poly":
        F = self.field
        out = Poly(F)
        for m, c in self.terms.items():
            term = Poly.const(F, c)
            for v, e in m:
                base = subs.get(v, Poly.var(F, v))
                for _ in range(e):
                    term = term * base
            out = out + term
        return out

    def coefficient_of(self, var: str, exp: int) -> "Poly":
        """Collect the coefficient of var**exp (a polynomial in the other variables)."""
        F = self.field
        out = Poly(F)
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(var, 0) == exp:
                d.pop(var, None)
                out = out + Poly(F, {_mono(d): c})
        return out

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items(), key=lambda kv: (mono_degree(kv[0]), kv[0])):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in m) or "1"
            bits.append(f"({c})*{mono}")
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# sl2 action


def _e_rule(name: str, N: int, field: Field) -> Poly:
    """Image of a single variable under e = -sum d/dX_i on the N-variable alphabet."""
    if name.startswith("E") and name[1:].isdigit():
        j = int(name[1:])
        if j == 1:
            return Poly.const(field, -N)
        return Poly.var(field, f"E{j-1}", coeff=-(N - j + 1))
    return Poly.const(field, -1)


def _f_rule(name: str, N: int, field: Field) -> Poly:
    """Image of a single variable under f = sum X_i^2 d/dX_i."""
    if name.startswith("E") and name[1:].isdigit():
        j = int(name[1:])
        out = Poly.var(field, "E1") * Poly.var(field, f"E{j}")
        if j + 1 <= N:
            out = out + Poly.var(field, f"E{j+1}", coeff=-(j + 1))
        return out
    return Poly.var(field, name, exp=2)


def sl2_on_poly(gen: str, poly: Poly, N: int) -> Poly:
    """Apply an sl2 generator ('e', 'f' or 'h') to a polynomial in E_i and
    degree-2 facet variables, as a derivation.

    h acts by -degree on each homogeneous component; e and f extend the
    single-variable rules by the Leibniz rule.
    """
    F = poly.field
    if gen == "h":
        out = Poly(F)
        for d, part in poly.homogeneous_parts().items():
            out = out + part.scale(-d)
        return out
    if gen not in ("e", "f"):
        raise ValueError(f"unknown sl2 generator {gen!r}")
    rule = _e_rule if gen == "e" else _f_rule
    out = Poly(F)
    for m, c in poly.terms.items():
        for v, e in m:
            rest = dict(m)
            if e == 1:
                rest.pop(v)
            else:
                rest[v] = e - 1
            out = out + (Poly(F, {_mono(rest): F.mul(c, F.of(e))}) * rule(v, N, F))
    return out


# ---------------------------------------------------------------------------
# Quantum integers / Laurent polynomials in q (integer coefficients)

Laurent = Dict[int, int]


def laurent(d: Mapping[int, int] | None = None) -> Laurent:
    return {k: v for k, v in (d or {}).items() if v}


def laurent_add(a: Laurent, b: Laurent) -> Laurent:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
        if out[k] == 0:
            del out[k]
    return out


def laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    out: Laurent = {}
    for k1, v1 in a.items():
        for k2, v2 in b.items():
            k = k1 + k2
            out[k] = out.get(k, 0) + v1 * v2
            if out[k] == 0:
                del out[k]
    return out


def laurent_scale(a: Laurent, c: int) -> Laurent:
    return {k: v * c for k, v in a.items() if v * c}


def laurent_shift(a: Laurent, s: int) -> Laurent:
    return {k + s: v for k, v in a.items()}


def laurent_divexact(num: Laurent, den: Laurent) -> Laurent:
    """Exact division in Z[q, q^-1]; raises if the division is not exact."""
    if not den:
        raise ZeroDivisionError
    if not num:
        return {}
    out: Laurent = {}
    num = dict(num)
    dmin = min(den)
    dc = den[dmin]
    while num:
        nmin = min(num)
        k = nmin - dmin
        q, r = divmod(num[nmin], dc)
        if r:
            raise ValueError("division not exact")
        out[k] = q
        num = laurent_add(num, laurent_scale(laurent_shift(den, k), -q))
    return out


def quantum_int(n: int) -> Laurent:
    """[n] = (q^n - q^-n)/(q - q^-1) = q^{n-1} + q^{n-3} + ... + q^{1-n}."""
    if n < 0:
        return laurent_scale(quantum_int(-n), -1)
    return {n - 1 - 2 * i: 1 for i in range(n)}


def qbinom(m: int, a: int) -> Laurent:
    """Balanced quantum binomial [m choose a] = prod_{i=1}^{a} [m+1-i]/[i]."""
    if a < 0:
        return {}
    num: Laurent = {0: 1}
    den: Laurent = {0: 1}
    for i in range(1, a + 1):
        num = laurent_mul(num, quantum_int(m + 1 - i))
        den = laurent_mul(den, quantum_int(i))
    return laurent_divexact(num, den)


# ---------------------------------------------------------------------------
# Newton identities: power sums and complete homogeneous in terms of E_i


def newton_convert(j: int, target: str, N: int, field: Field = QQ) -> Poly:
    """The j-th power sum ('p') or complete homogeneous ('h') symmetric function of
    the full N-variable alphabet, written as a polynomial in E_1..E_N.
    """
    if j < 0:
        raise ValueError("j must be >= 0")

    def E(i: int) -> Poly:
        if i == 0:
            return Poly.const(field, 1)
        if i > N:
            return Poly.zero(field)
        return Poly.var(field, f"E{i}")

    if target == "h":
        # sum_{i=0}^{j} (-1)^i e_i h_{j-i} = 0  (j >= 1)
        hs = [Poly.const(field, 1)]
        for k in range(1, j + 1):
            acc = Poly.zero(field)
            for i in range(1, k + 1):
                acc = acc + (E(i) * hs[k - i]).scale((-1) ** (i + 1))
            hs.append(acc)
        return hs[j]
    if target == "p":
        if j == 0:
            return Poly.const(field, N)
        # p_j = e1 p_{j-1} - e2 p_{j-2} + ... + (-1)^{j-1} j e_j
        ps = [Poly.const(field, N)]
        for k in range(1, j + 1):
            acc = E(k).scale(((-1) ** (k + 1)) * k)
            for i in range(1, k):
                acc = acc + (E(i) * ps[k - i]).scale((-1) ** (i + 1))
            ps.append(acc)
        return ps[j]
    raise ValueError("target must be 'p' or 'h'")

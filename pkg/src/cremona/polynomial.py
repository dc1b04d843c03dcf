"""Sparse homogeneous polynomials over a FieldSpec, and dense univariate
polynomials over Q.

HomoPoly enforces homogeneity on construction; the zero polynomial carries
degree None.  Monomials are exponent tuples ordered graded-lex with
x > y > z.  GCDs are exact: pure variable powers are split off, the rest is
dehomogenized and handled by a subresultant remainder sequence, variable by
variable, then rehomogenized.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .numfield import (QQ, ComplexInterval, FieldElement, FieldSpec,
                       SpecMismatch, _horner_interval)

Monomial = tuple[int, ...]


class PolyError(Exception):
    pass


class DegreeMismatch(PolyError):
    pass


class InexactDivision(PolyError):
    pass


def _coeff(spec: FieldSpec, c) -> FieldElement:
    if isinstance(c, FieldElement):
        if c.spec != spec:
            raise SpecMismatch("coefficient from a different field")
        return c
    return spec.element(c)


class HomoPoly:
    """Homogeneous polynomial in 2 or 3 variables over a FieldSpec."""

    __slots__ = ("spec", "arity", "terms", "degree", "_key")

    def __init__(self, spec: FieldSpec, arity: int,
                 terms: Mapping[Monomial, object] | Iterable[tuple[Monomial, object]]):
        if arity not in (2, 3):
            raise ValueError("arity must be 2 or 3")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Monomial, FieldElement] = {}
        deg: Optional[int] = None
        for mono, c in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != arity or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono}")
            fe = _coeff(spec, c)
            if not fe:
                continue
            d = sum(mono)
            if deg is None:
                deg = d
            elif d != deg:
                raise DegreeMismatch(f"mixed total degrees {deg} and {d}")
            if mono in clean:
                fe = clean[mono] + fe
                if not fe:
                    del clean[mono]
                    continue
            clean[mono] = fe
        if not clean:
            deg = None
        self.spec = spec
        self.arity = arity
        self.terms = clean
        self.degree = deg
        self._key = None

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec, arity: int = 3) -> "HomoPoly":
        return cls(spec, arity, {})

    @classmethod
    def monomial(cls, spec: FieldSpec, arity: int, expts: Monomial, coeff=1) -> "HomoPoly":
        return cls(spec, arity, {tuple(expts): coeff})

    @classmethod
    def variable(cls, spec: FieldSpec, arity: int, index: int) -> "HomoPoly":
        e = [0] * arity
        e[index] = 1
        return cls.monomial(spec, arity, tuple(e))

    # -- basics ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _sorted_items(self):
        if self._key is None:
            self._key = tuple(sorted(self.terms.items(),
                                     key=lambda kv: (sum(kv[0]), kv[0]), reverse=True))
        return self._key

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self._sorted_items()[0][0]

    def leading_coeff(self) -> FieldElement:
        return self.terms[self.leading_monomial()]

    def coeff(self, mono: Monomial) -> FieldElement:
        return self.terms.get(tuple(mono), self.spec.zero())

    def canonical(self) -> "HomoPoly":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc == self.spec.one():
            return self
        inv = lc.inverse()
        return HomoPoly(self.spec, self.arity,
                        {m: c * inv for m, c in self.terms.items()})

    # -- ring operations ---------------------------------------------------------

    def _check(self, other: "HomoPoly"):
        if not isinstance(other, HomoPoly):
            raise TypeError("expected HomoPoly")
        if other.spec != self.spec:
            raise SpecMismatch("polynomials over different fields")
        if other.arity != self.arity:
            raise DegreeMismatch("different arities")

    def __add__(self, other: "HomoPoly") -> "HomoPoly":
        self._check(other)
        if self.degree is not None and other.degree is not None and self.degree != other.degree:
            raise DegreeMismatch(
                f"adding degrees {self.degree} and {other.degree} breaks homogeneity")
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return HomoPoly(self.spec, self.arity, out)

    def __neg__(self) -> "HomoPoly":
        return HomoPoly(self.spec, self.arity, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "HomoPoly") -> "HomoPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomoPoly":
        if isinstance(other, (int, Fraction, FieldElement)):
            c = _coeff(self.spec, other)
            if not c:
                return HomoPoly.zero(self.spec, self.arity)
            return HomoPoly(self.spec, self.arity,
                            {m: v * c for m, v in self.terms.items()})
        self._check(other)
        if not self.terms or not other.terms:
            return HomoPoly.zero(self.spec, self.arity)
        out: dict[Monomial, FieldElement] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                s = out.get(m)
                s = p if s is None else s + p
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return HomoPoly(self.spec, self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HomoPoly":
        if n < 0:
            raise ValueError("negative power")
        result = HomoPoly.monomial(self.spec, self.arity, (0,) * self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, HomoPoly) and self.spec == other.spec
                and self.arity == other.arity and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.arity, self._sorted_items()))

    # -- calculus / substitution -------------------------------------------------

    def partial(self, index: int) -> "HomoPoly":
        out: dict[Monomial, FieldElement] = {}
        for m, c in self.terms.items():
            e = m[index]
            if e:
                m2 = list(m)
                m2[index] = e - 1
                key = tuple(m2)
                v = c * e
                s = out.get(key)
                s = v if s is None else s + v
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return HomoPoly(self.spec, self.arity, out)

    def substitute(self, gs: Sequence["HomoPoly"]) -> "HomoPoly":
        """p(g0, ..., g_{arity-1}); the g_i homogeneous of one common degree."""
        if len(gs) != self.arity:
            raise ValueError("wrong number of substitution polynomials")
        degs = {g.degree for g in gs if g.degree is not None}
        if len(degs) > 1:
            raise DegreeMismatch("substitution components of different degrees")
        out_arity = gs[0].arity
        spec = self.spec
        if not self.terms:
            return HomoPoly.zero(spec, out_arity)
        # cache powers of each g
        maxe = [max(m[i] for m in self.terms) for i in range(self.arity)]
        pows: list[list[HomoPoly]] = []
        for i, g in enumerate(gs):
            pl = [HomoPoly.monomial(spec, out_arity, (0,) * out_arity, 1)]
            for _ in range(maxe[i]):
                pl.append(pl[-1] * g)
            pows.append(pl)
        total = HomoPoly.zero(spec, out_arity)
        for m, c in self._sorted_items():
            term = pows[0][m[0]]
            for i in range(1, self.arity):
                if m[i]:
                    term = term * pows[i][m[i]]
            if total.is_zero():
                total = term * c
            else:
                total = total + term * c
        return total

    def eval_point(self, coords: Sequence[FieldElement]) -> FieldElement:
        acc = self.spec.zero()
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(m):
                for _ in range(e):
                    v = v * coords[i]
            acc = acc + v
        return acc

    # -- variable structure ----------------------------------------------------

    def min_exponent(self, index: int) -> int:
        if not self.terms:
            return 0
        return min(m[index] for m in self.terms)

    def uses_variable(self, index: int) -> bool:
        return any(m[index] for m in self.terms)

    def shift_variable(self, index: int, amount: int) -> "HomoPoly":
        """Multiply (amount > 0) or exactly divide (amount < 0) by var^\\|amount\\|."""
        out = {}
        for m, c in self.terms.items():
            e = m[index] + amount
            if e < 0:
                raise InexactDivision("variable power does not divide")
            m2 = list(m)
            m2[index] = e
            out[tuple(m2)] = c
        return HomoPoly(self.spec, self.arity, out)

    def restrict_line(self, index: int, target: int, scale: FieldElement) -> "HomoPoly":
        """Substitute var_index := scale * var_target; stays homogeneous."""
        out: dict[Monomial, FieldElement] = {}
        for m, c in self.terms.items():
            e = m[index]
            v = c * scale ** e if e else c
            m2 = list(m)
            m2[index] = 0
            m2[target] += e
            key = tuple(m2)
            s = out.get(key)
            s = v if s is None else s + v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return HomoPoly(self.spec, self.arity, out)

    # -- printing ----------------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"HomoPoly({format_poly(self)})"


VAR_NAMES = ("x", "y", "z")


def format_poly(p: HomoPoly, names: Sequence[str] = VAR_NAMES) -> str:
    if not p.terms:
        return "0"
    parts = []
    for m, c in p._sorted_items():
        factors = []
        for i, e in enumerate(m):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        mono = "*".join(factors)
        cs = str(c)
        if mono:
            if cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            elif cs.startswith("["):
                parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        else:
            parts.append(cs)
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# exact division and GCD
# ---------------------------------------------------------------------------

def _mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def poly_divexact(p: HomoPoly, d: HomoPoly) -> HomoPoly:
    """Exact division p / d; raises InexactDivision if d does not divide p."""
    p._check(d)
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero():
        return p
    if p.degree < d.degree:
        raise InexactDivision("degree too small")
    lead_d = d.leading_monomial()
    lc_inv = d.terms[lead_d].inverse()
    rem = dict(p.terms)
    quo: dict[Monomial, FieldElement] = {}
    d_items = list(d.terms.items())
    while rem:
        lm = max(rem, key=lambda m: (sum(m), m))
        if not _mono_divides(lead_d, lm):
            raise InexactDivision("not divisible")
        t = tuple(a - b for a, b in zip(lm, lead_d))
        c = rem[lm] * lc_inv
        quo[t] = c
        for m2, c2 in d_items:
            key = tuple(a + b for a, b in zip(t, m2))
            s = rem.get(key, None)
            v = c * c2
            s = -v if s is None else s - v
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return HomoPoly(p.spec, p.arity, quo)


def poly_divides(d: HomoPoly, p: HomoPoly) -> bool:
    try:
        poly_divexact(p, d)
        return True
    except InexactDivision:
        return False


def _rat_content(fe: FieldElement) -> Fraction:
    """gcd of the rational coordinates of a field element (0 for zero)."""
    from math import gcd
    g, l = 0, 1
    for c in fe.coeffs:
        if c:
            g = gcd(g, abs(c.numerator))
            l = l * c.denominator // gcd(l, c.denominator)
    return Fraction(g, l) if g else Fraction(0)


def _int_prs_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive PRS gcd for integer coefficient lists (ascending)."""
    from math import gcd as igcd

    def content(v):
        g = 0
        for c in v:
            g = igcd(g, abs(c))
            if g == 1:
                return 1
        return g or 1

    def primitive(v):
        c = content(v)
        return [x // c for x in v] if c > 1 else list(v)

    def prem(u, v):
        r = list(u)
        dv, lv = len(v) - 1, v[-1]
        while r and len(r) - 1 >= dv:
            lr = r[-1]
            shift = len(r) - 1 - dv
            r = [lv * c for c in r]
            for i, vi in enumerate(v):
                r[shift + i] -= lr * vi
            while r and r[-1] == 0:
                r.pop()
        return r

    f, g = primitive(a), primitive(b)
    if len(f) < len(g):
        f, g = g, f
    while True:
        r = prem(f, g)
        if not r:
            break
        f, g = g, primitive(r)
        if len(g) == 1:
            return [1]
    return primitive(g)


def _uni_gcd_field(a: list[FieldElement], b: list[FieldElement],
                   spec: FieldSpec) -> list[FieldElement]:
    """gcd in K[t] for dense ascending lists; fast integer path over Q."""
    while a and not a[-1]:
        a.pop()
    while b and not b[-1]:
        b.pop()
    if not a and not b:
        return []
    if not a or not b:
        src = a or b
        lead = src[-1].inverse()
        return [c * lead for c in src]
    if spec.degree == 1:
        from math import gcd as igcd
        den = 1
        for v in a + b:
            d = v.coeffs[0].denominator
            den = den * d // igcd(den, d)
        ia = [int(v.coeffs[0] * den) for v in a]
        ib = [int(v.coeffs[0] * den) for v in b]
        g = _int_prs_gcd(ia, ib)
        lead = Fraction(g[-1])
        return [spec.element(Fraction(c) / lead) for c in g]
    # number field: primitive PRS with rational-content stripping
    def strip(v):
        from math import gcd as igcd
        g, l = 0, 1
        for fe in v:
            c = _rat_content(fe)
            if c:
                g = igcd(g, c.numerator)
                l = l * c.denominator // igcd(l, c.denominator)
        if not g:
            return v
        inv = Fraction(l, g)
        return [fe * inv for fe in v]

    def prem(u, v):
        r = list(u)
        dv, lv = len(v) - 1, v[-1]
        while r and len(r) - 1 >= dv:
            lr = r[-1]
            shift = len(r) - 1 - dv
            r = [lv * c for c in r]
            for i, vi in enumerate(v):
                r[shift + i] = r[shift + i] - lr * vi
            while r and not r[-1]:
                r.pop()
        return r

    f, g = strip(list(a)), strip(list(b))
    if len(f) < len(g):
        f, g = g, f
    while True:
        r = prem(f, g)
        if not r:
            break
        f, g = g, strip(r)
        if len(g) == 1:
            return [spec.one()]
    lead = g[-1].inverse()
    return [c * lead for c in g]


# dense recursive representation for the subresultant walk: a polynomial in
# K[v_0][v_1]... is a nested list, innermost entries FieldElement.

def _to_dense(p: HomoPoly, skip: int) -> list:
    """Dehomogenize (var skip := 1) into nested dense lists over the other vars."""
    other = [i for i in range(p.arity) if i != skip]

    def build(terms: dict, vs: list[int]):
        if not vs:
            acc = None
            for _, c in terms.items():
                acc = c if acc is None else acc + c
            return acc if acc is not None else p.spec.zero()
        v = vs[0]
        deg = max((m[v] for m in terms), default=0)
        buckets: list[dict] = [dict() for _ in range(deg + 1)]
        for m, c in terms.items():
            buckets[m[v]][m] = c
        return [build(b, vs[1:]) if b else None for b in buckets]

    raw = build(dict(p.terms), other)
    return _dense_norm(raw, len(other), p.spec)


def _dense_norm(v, depth: int, spec: FieldSpec):
    if depth == 0:
        if v is None:
            return spec.zero()
        return v
    if v is None:
        return []
    out = [_dense_norm(c, depth - 1, spec) for c in v]
    while out and _dense_is_zero(out[-1], depth - 1):
        out.pop()
    return out


def _dense_is_zero(v, depth: int) -> bool:
    if depth == 0:
        return not v
    return len(v) == 0


def _dense_add(a, b, depth, spec):
    if depth == 0:
        return a + b
    n = max(len(a), len(b))
    out = []
    zero = [] if depth > 1 else spec.zero()
    for i in range(n):
        x = a[i] if i < len(a) else zero
        y = b[i] if i < len(b) else zero
        out.append(_dense_add(x, y, depth - 1, spec))
    while out and _dense_is_zero(out[-1], depth - 1):
        out.pop()
    return out


def _dense_neg(a, depth):
    if depth == 0:
        return -a
    return [_dense_neg(c, depth - 1) for c in a]


def _dense_mul(a, b, depth, spec):
    if depth == 0:
        return a * b
    if not a or not b:
        return []
    out = [[] if depth > 1 else spec.zero() for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if _dense_is_zero(ai, depth - 1):
            continue
        for j, bj in enumerate(b):
            if _dense_is_zero(bj, depth - 1):
                continue
            out[i + j] = _dense_add(out[i + j], _dense_mul(ai, bj, depth - 1, spec),
                                    depth - 1, spec)
    while out and _dense_is_zero(out[-1], depth - 1):
        out.pop()
    return out


def _dense_divexact(a, b, depth, spec):
    """Exact division in (K[y]..)[x]; raises InexactDivision when not exact."""
    if depth == 0:
        if not b:
            raise ZeroDivisionError
        return a / b
    if _dense_is_zero(a, depth):
        return []
    if len(b) == 0:
        raise ZeroDivisionError
    rem = [c for c in a]
    quo = [[] if depth > 1 else spec.zero()] * (len(a) - len(b) + 1) if len(a) >= len(b) else []
    quo = list(quo)
    while rem and len(rem) >= len(b):
        lead = rem[-1]
        c = _dense_divexact(lead, b[-1], depth - 1, spec)
        shift = len(rem) - len(b)
        quo[shift] = c
        for i, bi in enumerate(b):
            t = _dense_mul(c, bi, depth - 1, spec)
            idx = shift + i
            rem[idx] = _dense_add(rem[idx], _dense_neg(t, depth - 1), depth - 1, spec)
        while rem and _dense_is_zero(rem[-1], depth - 1):
            rem.pop()
    if rem:
        raise InexactDivision("inexact dense division")
    while quo and _dense_is_zero(quo[-1], depth - 1):
        quo.pop()
    return quo


def _dense_pseudo_rem(a, b, depth, spec):
    """prem(a, b) w.r.t. the outer variable; coefficients in the inner ring."""
    la, lb = len(a) - 1, len(b) - 1
    lead_b = b[-1]
    r = [c for c in a]
    while r and len(r) - 1 >= lb:
        lead_r = r[-1]
        shift = len(r) - 1 - lb
        # r := lead_b * r - lead_r * x^shift * b
        r = [_dense_mul(lead_b, c, depth - 1, spec) for c in r]
        for i, bi in enumerate(b):
            t = _dense_mul(lead_r, bi, depth - 1, spec)
            r[shift + i] = _dense_add(r[shift + i], _dense_neg(t, depth - 1), depth - 1, spec)
        while r and _dense_is_zero(r[-1], depth - 1):
            r.pop()
    return r


def _dense_content(a, depth, spec):
    """Content of a dense poly: gcd of its coefficients in the inner ring.
    At the scalar level this is the rational content, which is what keeps the
    primitive remainder sequences height-controlled."""
    if depth == 1:
        from math import gcd as igcd
        g, l = 0, 1
        for fe in a:
            c = _rat_content(fe)
            if c:
                g = igcd(g, c.numerator)
                l = l * c.denominator // igcd(l, c.denominator)
        return spec.element(Fraction(g, l)) if g else spec.zero()
    cont = None
    for c in a:
        if _dense_is_zero(c, depth - 1):
            continue
        cont = c if cont is None else _dense_gcd(cont, c, depth - 1, spec)
        if len(cont) == 1 and _dense_is_unit(cont, depth - 1, spec):
            break
    return cont


def _dense_is_unit(a, depth, spec) -> bool:
    if depth == 0:
        return bool(a)
    return len(a) == 1 and _dense_is_unit(a[0], depth - 1, spec)


def _dense_monicize(a, depth, spec):
    """Divide by the leading coefficient when that is a unit of the inner ring;
    otherwise divide by content to get a primitive representative."""
    if depth == 0:
        return spec.one() if a else spec.zero()
    if not a:
        return a
    cont = _dense_content(a, depth, spec)
    a = [_dense_divexact(c, cont, depth - 1, spec) for c in a]
    # normalize the leading scalar if the (fully nested) lead is a unit
    lead = a[-1]
    if _dense_is_unit(lead, depth - 1, spec):
        inv = _dense_unit_inverse(lead, depth - 1, spec)
        a = [_dense_mul(inv, c, depth - 1, spec) for c in a]
    return a


def _dense_unit_inverse(a, depth, spec):
    if depth == 0:
        return a.inverse()
    return [_dense_unit_inverse(a[0], depth - 1, spec)]


def _dense_gcd(a, b, depth, spec):
    """Primitive-PRS subresultant gcd in the nested dense representation."""
    if _dense_is_zero(a, depth):
        return _dense_monicize(b, depth, spec)
    if _dense_is_zero(b, depth):
        return _dense_monicize(a, depth, spec)
    if depth == 0:
        return spec.one()
    if depth == 1:
        return _uni_gcd_field(list(a), list(b), spec)
    ca = _dense_content(a, depth, spec)
    cb = _dense_content(b, depth, spec)
    cg = _dense_gcd(ca, cb, depth - 1, spec)
    f = [_dense_divexact(c, ca, depth - 1, spec) for c in a]
    g = [_dense_divexact(c, cb, depth - 1, spec) for c in b]
    if len(f) < len(g):
        f, g = g, f
    while True:
        r = _dense_pseudo_rem(f, g, depth, spec)
        if not r:
            break
        rc = _dense_content(r, depth, spec)
        r = [_dense_divexact(c, rc, depth - 1, spec) for c in r]
        f, g = g, r
        if len(g) == 1:
            break
    if len(g) == 1:
        prim = [_dense_unit_or_one(spec, depth - 1)]
    else:
        prim = _dense_monicize(g, depth, spec)
    if _dense_is_unit_scalar(cg, depth - 1, spec):
        return prim
    return [_dense_mul(cg, c, depth - 1, spec) for c in prim]


def _dense_unit_or_one(spec, depth):
    if depth == 0:
        return spec.one()
    return [_dense_unit_or_one(spec, depth - 1)]


def _dense_is_unit_scalar(a, depth, spec) -> bool:
    if depth == 0:
        return a == spec.one()
    return len(a) == 1 and _dense_is_unit_scalar(a[0], depth - 1, spec)


def _from_dense(v, depth: int, skip: int, arity: int, spec: FieldSpec,
                hom_degree: Optional[int]) -> HomoPoly:
    """Rehomogenize a dense nested poly back into a HomoPoly using var ``skip``."""
    other = [i for i in range(arity) if i != skip]
    terms: dict[Monomial, FieldElement] = {}

    def walk(node, vs: list[int], expts: dict[int, int]):
        if not vs:
            if node:
                m = [0] * arity
                for i, e in expts.items():
                    m[i] = e
                terms[tuple(m)] = terms.get(tuple(m), spec.zero()) + node
            return
        for e, child in enumerate(node):
            if _dense_is_zero(child, len(vs) - 1):
                continue
            expts[vs[0]] = e
            walk(child, vs[1:], expts)
        expts.pop(vs[0], None)

    walk(v, other, {})
    terms = {m: c for m, c in terms.items() if c}
    if not terms:
        return HomoPoly.zero(spec, arity)
    deg = max(sum(m) for m in terms)
    if hom_degree is not None:
        deg = max(deg, hom_degree)
    out = {}
    for m, c in terms.items():
        m2 = list(m)
        m2[skip] = deg - sum(m)
        out[tuple(m2)] = c
    return HomoPoly(spec, arity, out)


def poly_gcd(p: HomoPoly, q: HomoPoly) -> HomoPoly:
    """Exact GCD of homogeneous polynomials, canonical (leading coeff 1)."""
    p._check(q)
    spec, arity = p.spec, p.arity
    if p.is_zero():
        return q.canonical()
    if q.is_zero():
        return p.canonical()
    # split off pure variable powers
    var_part = [0] * arity
    sp_, sq_ = p, q
    for i in range(arity):
        e = min(sp_.min_exponent(i), sq_.min_exponent(i))
        if e:
            var_part[i] = e
        if sp_.min_exponent(i):
            sp_ = sp_.shift_variable(i, -sp_.min_exponent(i))
        if sq_.min_exponent(i):
            sq_ = sq_.shift_variable(i, -sq_.min_exponent(i))
    if sp_.degree == 0 or sq_.degree == 0:
        core = HomoPoly.monomial(spec, arity, (0,) * arity, 1)
    else:
        # dehomogenize by the last variable present in both, else the last variable
        skip = arity - 1
        for i in range(arity - 1, -1, -1):
            if sp_.uses_variable(i) and sq_.uses_variable(i):
                skip = i
                break
        depth = arity - 1
        da = _to_dense(sp_, skip)
        db = _to_dense(sq_, skip)
        dg = _dense_gcd(da, db, depth, spec)
        core = _from_dense(dg, depth, skip, arity, spec, None)
    mono = HomoPoly.monomial(spec, arity, tuple(var_part), 1)
    return (core * mono).canonical()


def gcd_many(polys: Sequence[HomoPoly]) -> HomoPoly:
    it = iter(polys)
    g = next(it)
    for p in it:
        if g.degree == 0:
            break
        g = poly_gcd(g, p)
    return g.canonical() if g else g


def coprime_certificate(polys: Sequence[HomoPoly], scales: Sequence[int] = (1, 2, -3, 5, -7)) -> bool:
    """True means gcd of the polys is certainly 1 (restriction to a projective
    line through a coordinate point stays coprime; Bezout rules out a common
    positive-degree factor).  False is inconclusive."""
    nz = [p for p in polys if not p.is_zero()]
    if not nz:
        return False
    if any(p.degree == 0 for p in nz):
        return True
    arity = nz[0].arity
    if any(min(p.min_exponent(i) for p in nz) > 0 for i in range(arity)):
        return False
    pairs = [(j, k) for j in range(arity) for k in range(arity) if j != k]
    for a in scales:
        sc = nz[0].spec.element(a)
        for (j, k) in pairs:
            rs = [p.restrict_line(j, k, sc) for p in nz]
            if any(r.is_zero() for r in rs):
                continue
            g = rs[0]
            for r in rs[1:]:
                g = _binary_gcd(g, r)
                if g.degree == 0:
                    break
            if g.degree == 0:
                return True
    return False


def _binary_gcd(p: HomoPoly, q: HomoPoly) -> HomoPoly:
    """GCD of two homogeneous polynomials supported on two variables."""
    return poly_gcd(p, q)


# ---------------------------------------------------------------------------
# public operation aliases
# ---------------------------------------------------------------------------

_CERT_PRIMES = (2147483647, 2305843009213693951, 4611686018427387847)


def _binary_to_int_univariate(p: HomoPoly) -> list[int]:
    """Dehomogenize a two-variable form (vars s=0, t=1) by t := 1 and clear
    denominators; ascending int coefficients in s."""
    from math import gcd as igcd
    den = 1
    for c in p.terms.values():
        d = c.coeffs[0].denominator
        den = den * d // igcd(den, d)
    deg = max(m[0] for m in p.terms)
    out = [0] * (deg + 1)
    for m, c in p.terms.items():
        out[m[0]] = int(c.coeffs[0] * den)
    return out


def _modp_gcd_is_one(a: list[int], b: list[int], p: int) -> bool:
    fa = [c % p for c in a]
    fb = [c % p for c in b]
    while fa and fa[-1] == 0:
        fa.pop()
    while fb and fb[-1] == 0:
        fb.pop()
    if not fa or not fb:
        return False
    while fb:
        # fa mod fb over GF(p)
        inv = pow(fb[-1], p - 2, p)
        r = list(fa)
        while r and len(r) >= len(fb):
            c = r[-1] * inv % p
            shift = len(r) - len(fb)
            for i, bi in enumerate(fb):
                r[shift + i] = (r[shift + i] - c * bi) % p
            while r and r[-1] == 0:
                r.pop()
        fa, fb = fb, r
    return len(fa) == 1


def binary_coprime_certificate(polys: Sequence[HomoPoly]) -> bool:
    """Rigorous coprimality check for two-variable forms over Q.

    A common factor either involves a pure variable power (checked by min
    exponents) or survives dehomogenization; gcd over Q reduces mod p whenever
    p divides no leading coefficient, so a mod-p gcd of 1 is a certificate.
    Returns False when inconclusive.
    """
    nz = [p for p in polys if not p.is_zero()]
    if not nz:
        return False
    if any(p.degree == 0 for p in nz):
        return True
    if nz[0].spec.degree != 1:
        return False
    for i in (0, 1):
        if all(p.min_exponent(i) > 0 for p in nz):
            return False
    ints = [_binary_to_int_univariate(p) for p in nz]
    # a common t-power shows up as all dehomogenized degrees dropping together,
    # which the min-exponent test above already excluded
    a = ints[0]
    for prime in _CERT_PRIMES:
        if a[-1] % prime == 0:
            continue
        ok_all = True
        for b in ints[1:]:
            if b[-1] % prime == 0 or not _modp_gcd_is_one(a, b, prime):
                ok_all = False
                break
        if ok_all:
            return True
        # one certified-coprime pair is enough for a triple
        for b in ints[1:]:
            if b[-1] % prime != 0 and _modp_gcd_is_one(a, b, prime):
                return True
    return False


def poly_add(p: HomoPoly, q: HomoPoly) -> HomoPoly:
    return p + q


def poly_mul(p: HomoPoly, q: HomoPoly) -> HomoPoly:
    return p * q


def poly_substitute(p: HomoPoly, g0: HomoPoly, g1: HomoPoly, g2: HomoPoly) -> HomoPoly:
    return p.substitute([g0, g1, g2])


# ---------------------------------------------------------------------------
# univariate polynomials over Q (characteristic polynomials, Sturm chains)
# ---------------------------------------------------------------------------

class UniPoly:
    """Dense univariate polynomial over Q, ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Union[int, Fraction]]):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls(())

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial degree")
        return len(self.coeffs) - 1

    def lc(self) -> Fraction:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                       for i in range(n))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        result = UniPoly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError
        r = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(r) - len(other.coeffs) + 1)
        d = other.coeffs
        while r and len(r) >= len(d):
            c = r[-1] / d[-1]
            shift = len(r) - len(d)
            q[shift] = c
            for i, di in enumerate(d):
                r[shift + i] -= c * di
            while r and r[-1] == 0:
                r.pop()
        return UniPoly(q), UniPoly(r)

    def divexact(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise InexactDivision("nonzero remainder")
        return q

    def gcd(self, other: "UniPoly") -> "UniPoly":
        f, g = self, other
        while not g.is_zero():
            f, g = g, f.divmod(g)[1]
        if f.is_zero():
            return f
        return f * (1 / f.lc())

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def squarefree_part(self) -> "UniPoly":
        if self.is_zero():
            return self
        g = self.gcd(self.derivative())
        if g.is_zero() or g.degree == 0:
            return self * (1 / self.lc())
        q = self.divexact(g)
        return q * (1 / q.lc())

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def eval(self, x: Union[int, Fraction]) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, x: ComplexInterval) -> ComplexInterval:
        return _horner_interval(list(self.coeffs), x)

    def shift_compose_linear(self, a: Fraction, b: Fraction) -> "UniPoly":
        """p(a*X + b)."""
        acc = UniPoly.zero()
        lin = UniPoly((b, a))
        for c in reversed(self.coeffs):
            acc = acc * lin + UniPoly((c,))
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            xs = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if i == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(xs)
            elif c == -1:
                parts.append(f"-{xs}")
            else:
                parts.append(f"{c}*{xs}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"UniPoly({self})"


def uni_mul(p: UniPoly, q: UniPoly) -> UniPoly:
    return p * q


def uni_pow(p: UniPoly, n: int) -> UniPoly:
    return p ** n


def uni_eval(p: UniPoly, x) -> Union[Fraction, ComplexInterval]:
    if isinstance(x, ComplexInterval):
        return p.eval_interval(x)
    return p.eval(x)


def uni_divexact(p: UniPoly, q: UniPoly) -> UniPoly:
    return p.divexact(q)

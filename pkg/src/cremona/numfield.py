"""Exact arithmetic over Q and simple extensions Q[x]/(p(x)).

Elements are residue classes represented by their canonical reduced
representative (degree < deg p), with Fraction coordinates.  Equality of
residues is therefore literal equality of coefficient tuples, which is what
every downstream projective-identity check relies on.

The modulus is required to be monic and squarefree but *not* irreducible:
inverting a zero divisor raises ``NonInvertible`` instead of silently
producing garbage.  Plain Q is the degree-1 field with modulus x.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Scalar = Union[int, Fraction, "FieldElement"]


class NumFieldError(Exception):
    """Base class for field arithmetic errors."""


class SpecMismatch(NumFieldError):
    """Operands live in different fields."""


class ZeroInverse(NumFieldError, ZeroDivisionError):
    """Inversion of zero."""


class NonInvertible(NumFieldError):
    """The residue is a zero divisor (the modulus is reducible)."""

    def __init__(self, element, cofactor_gcd):
        super().__init__(f"residue {element!r} is a zero divisor")
        self.element = element
        self.cofactor_gcd = cofactor_gcd


class NotSquarefree(NumFieldError):
    """Modulus fails the gcd(p, p') = const check."""


class NoEmbedding(NumFieldError):
    """The field spec carries no embedding hint."""


# ---------------------------------------------------------------------------
# small dense univariate helpers over Fraction (ascending coefficients)
# ---------------------------------------------------------------------------

def _strip(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _uni_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return _strip(out)


def _uni_rem(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and _strip(r):
        if not r:
            break
        q = r[-1] / lb
        shift = len(r) - 1 - db
        for i, bi in enumerate(b):
            r[shift + i] -= q * bi
        _strip(r)
    return r


def _uni_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    f, g = _strip(list(a)), _strip(list(b))
    while g:
        f, g = g, _uni_rem(f, g)
    if f:
        lead = f[-1]
        f = [c / lead for c in f]
    return f


def _uni_xgcd(a: Sequence[Fraction], b: Sequence[Fraction]):
    """Extended Euclid: returns monic g = gcd(a, b) and u with u*a = g mod b."""
    r0, r1 = _strip(list(a)), _strip(list(b))
    s0, s1 = [Fraction(1)], []

    def sub_scaled(p, q, c, shift):
        need = shift + len(q)
        if len(p) < need:
            p = p + [Fraction(0)] * (need - len(p))
        for i, qi in enumerate(q):
            p[shift + i] -= c * qi
        return _strip(p)

    while r1:
        q: list[Fraction] = []
        r = list(r0)
        db, lb = len(r1) - 1, r1[-1]
        while r and len(r) - 1 >= db:
            c = r[-1] / lb
            shift = len(r) - 1 - db
            if len(q) < shift + 1:
                q = q + [Fraction(0)] * (shift + 1 - len(q))
            q[shift] += c
            r = sub_scaled(r, r1, c, shift)
        news = list(s0)
        for i, qi in enumerate(q):
            if qi:
                news = sub_scaled(news, s1, qi, i)
        r0, r1 = r1, r
        s0, s1 = s1, news
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
    return r0, s0


class FieldSpec:
    """A coefficient field Q[x]/(p(x)) with monic squarefree modulus p."""

    __slots__ = ("modulus", "embedding_hint", "name", "_red_table", "_hash")

    def __init__(self, modulus: Sequence[Union[int, Fraction]],
                 embedding_hint: Optional["ComplexInterval"] = None,
                 name: Optional[str] = None):
        coeffs = [Fraction(c) for c in modulus]
        _strip(coeffs)
        if len(coeffs) < 2:
            raise ValueError("modulus must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("modulus must be monic")
        dp = [i * c for i, c in enumerate(coeffs)][1:]
        if len(_uni_gcd(coeffs, dp)) != 1:
            raise NotSquarefree(f"modulus {coeffs} is not squarefree")
        self.modulus = tuple(coeffs)
        self.embedding_hint = embedding_hint
        self.name = name
        d = len(coeffs) - 1
        # x^k mod p for d <= k <= 2d-2, used by multiplication
        table = []
        cur = [Fraction(0)] * d
        # x^d = -(p - x^d)
        xd = [-c for c in coeffs[:-1]]
        cur = list(xd)
        table.append(tuple(cur))
        for _ in range(d - 2):
            cur = [Fraction(0)] + cur
            if len(cur) > d:
                top = cur.pop()
                if top:
                    cur = [c + top * m for c, m in zip(cur, xd)]
            table.append(tuple(cur))
        self._red_table = tuple(table)
        self._hash = hash(self.modulus)

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FieldSpec({modulus_str(self.modulus)})"

    # -- element constructors ------------------------------------------------

    def element(self, coeffs: Union[Scalar, Iterable[Union[int, Fraction]]]) -> "FieldElement":
        if isinstance(coeffs, FieldElement):
            if coeffs.spec != self:
                raise SpecMismatch("element belongs to a different field")
            return coeffs
        if isinstance(coeffs, (int, Fraction)):
            vec = [Fraction(coeffs)] + [Fraction(0)] * (self.degree - 1)
            return FieldElement(self, tuple(vec))
        vec = [Fraction(c) for c in coeffs]
        if len(vec) > self.degree:
            raise ValueError("too many coefficients for residue representative")
        vec += [Fraction(0)] * (self.degree - len(vec))
        return FieldElement(self, tuple(vec))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self) -> "FieldElement":
        """The residue class of x."""
        if self.degree == 1:
            return self.element(-self.modulus[0])
        return self.element([0, 1])


#: the rational field, realized as Q[x]/(x)
QQ = FieldSpec([0, 1], name="QQ")


class FieldElement:
    """Residue in Q[x]/(p), stored in canonical reduced form."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple[Fraction, ...]):
        self.spec = spec
        self.coeffs = coeffs

    # -- predicates ----------------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- ring structure --------------------------------------------------------

    def _coerce(self, other: Scalar) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise SpecMismatch("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.spec.element(other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Scalar) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.spec, tuple(-a for a in self.coeffs))

    def __sub__(self, other: Scalar) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.spec, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other: Scalar) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self.spec.degree
        if d == 1:
            return FieldElement(self.spec, (self.coeffs[0] * o.coeffs[0],))
        a, b = self.coeffs, o.coeffs
        prod = [Fraction(0)] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] += ai * bj
        out = prod[:d]
        table = self.spec._red_table
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = table[k - d]
                out = [v + c * r for v, r in zip(out, red)]
        return FieldElement(self.spec, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self:
            raise ZeroInverse("inverse of zero")
        d = self.spec.degree
        if d == 1:
            return FieldElement(self.spec, (1 / self.coeffs[0],))
        g, u = _uni_xgcd(list(self.coeffs), list(self.spec.modulus))
        if len(g) != 1:
            raise NonInvertible(self, g)
        inv = _uni_rem(u, list(self.spec.modulus))
        vec = list(inv) + [Fraction(0)] * (d - len(inv))
        return FieldElement(self.spec, tuple(vec[:d]))

    def __truediv__(self, other: Scalar) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Scalar) -> "FieldElement":
        return self.inverse() * other

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- identity ------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.spec.element(other)
        return (isinstance(other, FieldElement)
                and self.spec == other.spec and self.coeffs == other.coeffs)

    def __hash__(self) -> int:
        return hash((self.spec._hash, self.coeffs))

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def __str__(self) -> str:
        if self.spec.degree == 1 or self.is_rational():
            return str(self.coeffs[0])
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"


# ---------------------------------------------------------------------------
# public operation aliases matching the module surface
# ---------------------------------------------------------------------------

def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_neg(a: FieldElement) -> FieldElement:
    return -a


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def modulus_str(mod: Sequence[Fraction]) -> str:
    parts = []
    for i in range(len(mod) - 1, -1, -1):
        c = mod[i]
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            xs = "x" if i == 1 else f"x^{i}"
            if c == 1:
                parts.append(xs)
            elif c == -1:
                parts.append(f"-{xs}")
            else:
                parts.append(f"{c}*{xs}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


# ---------------------------------------------------------------------------
# complex rectangle intervals with exact rational endpoints
# ---------------------------------------------------------------------------

class ComplexInterval:
    """Axis-aligned rectangle [re_lo, re_hi] x i[im_lo, im_hi], exact endpoints."""

    __slots__ = ("re_lo", "re_hi", "im_lo", "im_hi")

    def __init__(self, re_lo, re_hi=None, im_lo=0, im_hi=None):
        self.re_lo = Fraction(re_lo)
        self.re_hi = Fraction(re_hi if re_hi is not None else re_lo)
        self.im_lo = Fraction(im_lo)
        self.im_hi = Fraction(im_hi if im_hi is not None else im_lo)
        if self.re_lo > self.re_hi or self.im_lo > self.im_hi:
            raise ValueError("empty interval")

    @classmethod
    def point(cls, re, im=0) -> "ComplexInterval":
        return cls(re, re, im, im)

    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def midpoint(self) -> tuple[Fraction, Fraction]:
        return ((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)

    def contains(self, other: "ComplexInterval") -> bool:
        return (self.re_lo <= other.re_lo and other.re_hi <= self.re_hi
                and self.im_lo <= other.im_lo and other.im_hi <= self.im_hi)

    def contains_zero(self) -> bool:
        return (self.re_lo <= 0 <= self.re_hi) and (self.im_lo <= 0 <= self.im_hi)

    def widened(self, eps: Fraction) -> "ComplexInterval":
        return ComplexInterval(self.re_lo - eps, self.re_hi + eps,
                               self.im_lo - eps, self.im_hi + eps)

    def intersect(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(max(self.re_lo, other.re_lo), min(self.re_hi, other.re_hi),
                               max(self.im_lo, other.im_lo), min(self.im_hi, other.im_hi))

    def __add__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(self.re_lo + other.re_lo, self.re_hi + other.re_hi,
                               self.im_lo + other.im_lo, self.im_hi + other.im_hi)

    def __neg__(self) -> "ComplexInterval":
        return ComplexInterval(-self.re_hi, -self.re_lo, -self.im_hi, -self.im_lo)

    def __sub__(self, other: "ComplexInterval") -> "ComplexInterval":
        return self + (-other)

    def __mul__(self, other: "ComplexInterval") -> "ComplexInterval":
        # (a+bi)(c+di) = (ac - bd) + (ad + bc)i, each via endpoint products
        def rng(xlo, xhi, ylo, yhi):
            vals = (xlo * ylo, xlo * yhi, xhi * ylo, xhi * yhi)
            return min(vals), max(vals)

        ac = rng(self.re_lo, self.re_hi, other.re_lo, other.re_hi)
        bd = rng(self.im_lo, self.im_hi, other.im_lo, other.im_hi)
        ad = rng(self.re_lo, self.re_hi, other.im_lo, other.im_hi)
        bc = rng(self.im_lo, self.im_hi, other.re_lo, other.re_hi)
        return ComplexInterval(ac[0] - bd[1], ac[1] - bd[0], ad[0] + bc[0], ad[1] + bc[1])

    def inverse(self) -> "ComplexInterval":
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        # 1/(a+bi) = (a - bi)/(a^2+b^2); bound |z|^2 from endpoint extremes
        def sq_rng(lo, hi):
            if lo <= 0 <= hi:
                return Fraction(0), max(lo * lo, hi * hi)
            v = (lo * lo, hi * hi)
            return min(v), max(v)

        a2 = sq_rng(self.re_lo, self.re_hi)
        b2 = sq_rng(self.im_lo, self.im_hi)
        nlo, nhi = a2[0] + b2[0], a2[1] + b2[1]
        assert nlo > 0

        def div_rng(lo, hi):
            vals = (lo / nlo, lo / nhi, hi / nlo, hi / nhi)
            return min(vals), max(vals)

        r = div_rng(self.re_lo, self.re_hi)
        i = div_rng(-self.im_hi, -self.im_lo)
        return ComplexInterval(r[0], r[1], i[0], i[1])

    def __truediv__(self, other: "ComplexInterval") -> "ComplexInterval":
        return self * other.inverse()

    def __repr__(self) -> str:
        return (f"ComplexInterval([{self.re_lo}, {self.re_hi}] + "
                f"[{self.im_lo}, {self.im_hi}]i)")

    def approx_str(self, digits: int = 10) -> str:
        rm, im = self.midpoint()
        return f"{float(rm):.{digits}f}{float(im):+.{digits}f}i"


def _horner_interval(coeffs: Sequence[Fraction], x: ComplexInterval) -> ComplexInterval:
    acc = ComplexInterval.point(0)
    for c in reversed(coeffs):
        acc = acc * x + ComplexInterval.point(c)
    return acc


def embed_approx(a: FieldElement, precision_bits: int = 64) -> ComplexInterval:
    """Certified rectangle containing the image of ``a`` under the hinted embedding.

    The root of the modulus near the embedding hint is refined by interval
    Newton until evaluating the residue representative on it gives a rectangle
    of width at most 2^-precision_bits.  Raises NoEmbedding when the spec has
    no hint (degree-1 specs embed exactly and need none).
    """
    spec = a.spec
    if a.is_rational():
        return ComplexInterval.point(a.coeffs[0])
    if spec.embedding_hint is None:
        raise NoEmbedding("field spec has no embedding hint")
    tol = Fraction(1, 2 ** precision_bits)
    root = _refine_root(spec, tol / 4)
    guess_bits = precision_bits
    while True:
        val = _horner_interval(a.coeffs, root)
        if val.width() <= tol:
            return val
        guess_bits *= 2
        root = _refine_root(spec, Fraction(1, 2 ** guess_bits))


def _refine_root(spec: FieldSpec, tol: Fraction) -> ComplexInterval:
    """Certified root box of the modulus near the hint, of width <= tol."""
    mod = list(spec.modulus)
    dmod = [i * c for i, c in enumerate(mod)][1:]
    hint = spec.embedding_hint
    mre, mim = hint.midpoint()

    def newton_step(re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
        pv = _eval_c(mod, re, im)
        dv = _eval_c(dmod, re, im)
        n2 = dv[0] * dv[0] + dv[1] * dv[1]
        if n2 == 0:
            return re, im
        qre = (pv[0] * dv[0] + pv[1] * dv[1]) / n2
        qim = (pv[1] * dv[0] - pv[0] * dv[1]) / n2
        return re - qre, im - qim

    # polish the midpoint; cap denominators to keep arithmetic small
    limit = 1 << 80
    for _ in range(64):
        nre, nim = newton_step(mre, mim)
        nre, nim = nre.limit_denominator(limit), nim.limit_denominator(limit)
        if abs(nre - mre) + abs(nim - mim) < tol / 16:
            mre, mim = nre, nim
            break
        mre, mim = nre, nim
        limit <<= 32

    # certify: find a box X around (mre, mim) with K(X) = m - p(m)/p'(X) inside X
    rad = max(tol / 8, Fraction(1, 1 << 200))
    for _ in range(200):
        X = ComplexInterval(mre - rad, mre + rad, mim - rad, mim + rad)
        try:
            dX = _horner_interval([Fraction(c) for c in dmod], X)
            pm = _eval_c(mod, mre, mim)
            K = ComplexInterval.point(mre, mim) - ComplexInterval.point(*pm) / dX
        except ZeroDivisionError:
            rad /= 2
            continue
        if X.contains(K):
            root = K
            # contract until small enough
            while root.width() > tol:
                m2 = root.midpoint()
                pm2 = _eval_c(mod, *m2)
                dX2 = _horner_interval([Fraction(c) for c in dmod], root)
                K2 = (ComplexInterval.point(*m2) - ComplexInterval.point(*pm2) / dX2)
                nxt = K2.intersect(root)
                if nxt.width() >= root.width():
                    # fall back to plain midpoint polishing at higher precision
                    mre, mim = newton_step(*root.midpoint())
                    half = root.width() / 4
                    nxt = ComplexInterval(mre - half, mre + half, mim - half, mim + half)
                    dX2 = _horner_interval([Fraction(c) for c in dmod], nxt)
                    pm2 = _eval_c(mod, mre, mim)
                    K2 = ComplexInterval.point(mre, mim) - ComplexInterval.point(*pm2) / dX2
                    if not nxt.contains(K2):
                        rad /= 2
                        break
                    nxt = K2.intersect(nxt)
                root = nxt
            else:
                return root
            continue
        rad /= 2
    raise NumFieldError("could not certify a root near the embedding hint")


def _eval_c(coeffs: Sequence[Fraction], re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    are, aim = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        are, aim = are * re - aim * im + c, are * im + aim * re
    return are, aim

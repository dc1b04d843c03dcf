"""Truncated bivariate power-series germs.

A Series2 is a polynomial truncation of a power series in two chart
variables; a Germ2 is a pair of them: the germ of a holomorphic map between
chart neighbourhoods.  The module computes Taylor expansions of plane maps at
points, composes and inverts truncated series, lifts germs through chains of
infinitely near blowups, and evaluates the gluing conditions that decide
whether a germ carries one blowup cluster onto another.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .numfield import FieldElement, FieldSpec, SpecMismatch
from .maps import IndeterminacyHit, Mat3, ProjPoint, RationalMapP2, map_apply
from .polynomial import HomoPoly


class GermError(Exception):
    pass


class OriginNotFixed(GermError):
    pass


class NonUnit(GermError):
    pass


class OrderTooLow(GermError):
    pass


class GuardViolation(GermError):
    pass


class ChartMismatch(GermError):
    pass


class Series2:
    """Truncated power series sum c_{ij} u^i v^j with i + j <= order."""

    __slots__ = ("spec", "order", "terms", "varnames")

    def __init__(self, spec: FieldSpec, order: int, terms=None,
                 varnames: tuple[str, str] = ("u", "v")):
        if order < 0:
            raise ValueError("order must be >= 0")
        clean: dict[tuple[int, int], FieldElement] = {}
        if terms:
            items = terms.items() if hasattr(terms, "items") else terms
            for (i, j), c in items:
                if i < 0 or j < 0:
                    raise ValueError("negative exponent")
                if i + j > order:
                    continue
                fe = c if isinstance(c, FieldElement) else spec.element(c)
                if fe.spec != spec:
                    raise SpecMismatch("coefficient from another field")
                if fe:
                    prev = clean.get((i, j))
                    fe = fe if prev is None else prev + fe
                    if fe:
                        clean[(i, j)] = fe
                    else:
                        clean.pop((i, j), None)
        self.spec = spec
        self.order = order
        self.terms = clean
        self.varnames = varnames

    # -- access ---------------------------------------------------------------

    def coeff(self, i: int, j: int) -> FieldElement:
        return self.terms.get((i, j), self.spec.zero())

    def constant_term(self) -> FieldElement:
        return self.coeff(0, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def truncate(self, order: int) -> "Series2":
        return Series2(self.spec, order, self.terms, self.varnames)

    def rename(self, varnames: tuple[str, str]) -> "Series2":
        return Series2(self.spec, self.order, self.terms, varnames)

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "Series2"):
        if other.spec != self.spec:
            raise SpecMismatch("series over different fields")

    def __add__(self, other: Union["Series2", int, Fraction, FieldElement]) -> "Series2":
        if isinstance(other, (int, Fraction, FieldElement)):
            other = Series2(self.spec, self.order, {(0, 0): other}, self.varnames)
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            s = c if prev is None else prev + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Series2(self.spec, order, out, self.varnames)

    def __neg__(self) -> "Series2":
        return Series2(self.spec, self.order,
                       {k: -c for k, c in self.terms.items()}, self.varnames)

    def __sub__(self, other) -> "Series2":
        if isinstance(other, (int, Fraction, FieldElement)):
            other = Series2(self.spec, self.order, {(0, 0): other}, self.varnames)
        return self + (-other)

    def __mul__(self, other) -> "Series2":
        if isinstance(other, (int, Fraction, FieldElement)):
            c = other if isinstance(other, FieldElement) else self.spec.element(other)
            return Series2(self.spec, self.order,
                           {k: v * c for k, v in self.terms.items()}, self.varnames)
        self._check(other)
        order = min(self.order, other.order)
        out: dict[tuple[int, int], FieldElement] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                i, j = i1 + i2, j1 + j2
                if i + j > order:
                    continue
                p = c1 * c2
                prev = out.get((i, j))
                s = p if prev is None else prev + p
                if s:
                    out[(i, j)] = s
                else:
                    out.pop((i, j), None)
        return Series2(self.spec, order, out, self.varnames)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Series2":
        result = Series2(self.spec, self.order, {(0, 0): 1}, self.varnames)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return (isinstance(other, Series2) and self.spec == other.spec
                and self.order == other.order and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.order, tuple(sorted(self.terms.items()))))

    def invert_unit(self) -> "Series2":
        """1/self for a unit constant term, exact to the truncation order."""
        c0 = self.constant_term()
        if not c0:
            raise NonUnit("series has no unit constant term")
        inv0 = c0.inverse()
        # geometric series in r = 1 - self/c0 (r has positive valuation)
        r = Series2(self.spec, self.order, {(0, 0): 1}, self.varnames) - self * inv0
        acc = Series2(self.spec, self.order, {(0, 0): 1}, self.varnames)
        pw = r
        for _ in range(self.order):
            if pw.is_zero():
                break
            acc = acc + pw
            pw = pw * r
        return acc * inv0

    def subs_pair(self, h1: "Series2", h2: "Series2") -> "Series2":
        """Substitute (u, v) -> (h1, h2); requires h1, h2 without constant term."""
        if h1.constant_term() or h2.constant_term():
            raise OriginNotFixed("substitution series must vanish at the origin")
        order = min(self.order, h1.order, h2.order)
        one = Series2(self.spec, order, {(0, 0): 1}, h1.varnames)
        maxi = max((k[0] for k in self.terms), default=0)
        maxj = max((k[1] for k in self.terms), default=0)
        p1 = [one]
        for _ in range(maxi):
            p1.append(p1[-1] * h1)
        p2 = [one]
        for _ in range(maxj):
            p2.append(p2[-1] * h2)
        acc = Series2(self.spec, order, {}, h1.varnames)
        for (i, j), c in sorted(self.terms.items()):
            acc = acc + p1[i] * p2[j] * c
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        u, v = self.varnames
        parts = []
        for (i, j) in sorted(self.terms, key=lambda k: (k[0] + k[1], k)):
            c = self.terms[(i, j)]
            mono = "".join([f"{u}^{i}" if i > 1 else (u if i else ""),
                            f"{v}^{j}" if j > 1 else (v if j else "")])
            cs = str(c)
            if mono:
                parts.append(mono if cs == "1" else (f"-{mono}" if cs == "-1"
                                                     else f"{cs}*{mono}"))
            else:
                parts.append(cs)
        return (" + ".join(parts) + f" + O({u},{v})^{self.order + 1}").replace("+ -", "- ")


class Germ2:
    """Pair of truncated series: germ of a map between two chart patches."""

    __slots__ = ("first", "second")

    def __init__(self, first: Series2, second: Series2):
        if first.spec != second.spec or first.order != second.order:
            raise ValueError("germ components need one field and one order")
        self.first = first
        self.second = second

    @property
    def spec(self) -> FieldSpec:
        return self.first.spec

    @property
    def order(self) -> int:
        return self.first.order

    @classmethod
    def identity(cls, spec: FieldSpec, order: int,
                 varnames: tuple[str, str] = ("u", "v")) -> "Germ2":
        return cls(Series2(spec, order, {(1, 0): 1}, varnames),
                   Series2(spec, order, {(0, 1): 1}, varnames))

    def fixes_origin(self) -> bool:
        return not self.first.constant_term() and not self.second.constant_term()

    def components(self) -> tuple[Series2, Series2]:
        return (self.first, self.second)

    def linear_part(self) -> tuple[tuple[FieldElement, ...], ...]:
        return ((self.first.coeff(1, 0), self.first.coeff(0, 1)),
                (self.second.coeff(1, 0), self.second.coeff(0, 1)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Germ2) and self.first == other.first
                and self.second == other.second)

    def __repr__(self) -> str:
        return f"Germ2({self.first}; {self.second})"


def germ_compose(g: Germ2, h: Germ2) -> Germ2:
    """g after h; h must fix the origin so the truncation is well defined."""
    if g.spec != h.spec:
        raise SpecMismatch("germs over different fields")
    if not h.fixes_origin():
        raise OriginNotFixed("inner germ must fix the origin")
    return Germ2(g.first.subs_pair(h.first, h.second),
                 g.second.subs_pair(h.first, h.second))


def series_invert_unit(s: Series2) -> Series2:
    return s.invert_unit()


# ---------------------------------------------------------------------------
# Taylor expansion of a plane map at a point
# ---------------------------------------------------------------------------

def _affine_series(poly: HomoPoly, chart: int, offsets, order: int,
                   varnames) -> Series2:
    """Expand poly(chart var = 1, other vars = offset + local var) to ``order``."""
    spec = poly.spec
    others = [i for i in range(3) if i != chart]
    # binomial expansion caches: (offset + t)^e as dense coefficient lists
    maxe = [0, 0]
    for m in poly.terms:
        for k, idx in enumerate(others):
            maxe[k] = max(maxe[k], m[idx])

    def shifted_powers(a: FieldElement, top: int) -> list[list[FieldElement]]:
        rows = [[spec.one()]]
        for e in range(1, top + 1):
            prev = rows[-1]
            row = [spec.zero()] * (e + 1)
            for k, c in enumerate(prev):
                row[k] = row[k] + c * a
                row[k + 1] = row[k + 1] + c
            rows.append(row)
        return rows

    pw1 = shifted_powers(offsets[0], maxe[0])
    pw2 = shifted_powers(offsets[1], maxe[1])
    out: dict[tuple[int, int], FieldElement] = {}
    for m, c in poly.terms.items():
        e1, e2 = m[others[0]], m[others[1]]
        row1, row2 = pw1[e1], pw2[e2]
        for i, a in enumerate(row1):
            if not a:
                continue
            if i > order:
                break
            for j, b in enumerate(row2):
                if i + j > order:
                    break
                if not b:
                    continue
                v = c * a * b
                prev = out.get((i, j))
                s = v if prev is None else prev + v
                if s:
                    out[(i, j)] = s
                else:
                    out.pop((i, j), None)
    return Series2(spec, order, out, varnames)


CHART_NAMES = {0: "x", 1: "y", 2: "z"}
LOCAL_VARS = {0: ("y", "z"), 1: ("x", "z"), 2: ("x", "y")}


def germ_of_map_at(f: RationalMapP2, p: ProjPoint, q: ProjPoint,
                   chart_p: int, chart_q: int, order: int) -> Germ2:
    """Germ of f in affine charts centered at p (source) and q = f(p) (target).

    Charts are the standard ones (index of the coordinate set to 1); the germ
    components are the two remaining target coordinates as series in the two
    local source coordinates, both recentered, exact to ``order``.
    """
    if chart_p not in (0, 1, 2) or chart_q not in (0, 1, 2):
        raise ChartMismatch("charts are 0 (x=1), 1 (y=1), 2 (z=1)")
    if not p.coords[chart_p]:
        raise ChartMismatch(f"point {p} outside affine chart {CHART_NAMES[chart_p]}=1")
    if not q.coords[chart_q]:
        raise ChartMismatch(f"point {q} outside affine chart {CHART_NAMES[chart_q]}=1")
    img = map_apply(f, p)                       # raises IndeterminacyHit at Ind f
    if img != q:
        raise ChartMismatch(f"f({p}) = {img} differs from the requested target {q}")
    pop = p.coords[chart_p].inverse()
    others_p = [i for i in range(3) if i != chart_p]
    offsets = [p.coords[others_p[0]] * pop, p.coords[others_p[1]] * pop]
    varnames = LOCAL_VARS[chart_p]
    comps = [_affine_series(c, chart_p, offsets, order, varnames)
             for c in f.components]
    den = comps[chart_q]
    if not den.constant_term():
        raise ChartMismatch("image leaves the target chart at the center")
    inv = den.invert_unit()
    others_q = [i for i in range(3) if i != chart_q]
    qop = q.coords[chart_q].inverse()
    first = comps[others_q[0]] * inv - q.coords[others_q[0]] * qop
    second = comps[others_q[1]] * inv - q.coords[others_q[1]] * qop
    return Germ2(first, second)


# ---------------------------------------------------------------------------
# lifting through a chain of infinitely near points (all on one exceptional axis)
# ---------------------------------------------------------------------------

def lift_through_omega_d(g: Germ2, d: int):
    """Lift through the length-d tower of origins linked by u_i = u_{i+1} v_{i+1},
    v_i = v_{i+1}.

    Returns (True, lifted_germ) when the obstruction coefficients vanish:
    both constant terms and the first-component coefficients of v, v^2, ...,
    v^{d-1}.  Otherwise returns (False, residuals).  The lifted germ lives in
    the level-(d+1) chart and is exact to order (order of g) - d.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if g.order < d + 1:
        raise OrderTooLow(f"order {g.order} < d + 1 = {d + 1}")
    spec = g.spec
    alpha, beta = g.first, g.second
    residuals: list[tuple[str, FieldElement]] = []
    residuals.append(("alpha_0_0", alpha.coeff(0, 0)))
    residuals.append(("beta_0_0", beta.coeff(0, 0)))
    for j in range(1, d):
        residuals.append((f"alpha_0_{j}", alpha.coeff(0, j)))
    if any(v for _, v in residuals):
        return False, residuals
    b01 = beta.coeff(0, 1)
    if not b01:
        raise GermError("degenerate germ: linear part is singular on the axis")
    new_order = g.order - d
    names = g.first.varnames
    num: dict[tuple[int, int], FieldElement] = {}
    den: dict[tuple[int, int], FieldElement] = {}
    sec: dict[tuple[int, int], FieldElement] = {}
    for (i, j), c in alpha.terms.items():
        if i == 0 and j < d:
            continue
        ii, jj = i, d * (i - 1) + j
        if ii + jj <= new_order:
            num[(ii, jj)] = num.get((ii, jj), spec.zero()) + c
    for (i, j), c in beta.terms.items():
        if (i, j) == (0, 0):
            continue
        ii, jj = i, d * i + j - 1
        if ii + jj <= new_order:
            den[(ii, jj)] = den.get((ii, jj), spec.zero()) + c
        if ii + (jj + 1) <= new_order:
            sec[(ii, jj + 1)] = sec.get((ii, jj + 1), spec.zero()) + c
    num_s = Series2(spec, new_order, num, names)
    den_s = Series2(spec, new_order, den, names)
    sec_s = Series2(spec, new_order, sec, names)
    lifted = Germ2(num_s * den_s.invert_unit(), sec_s)
    return True, lifted


def blowdown_chain(g: Germ2, d: int) -> Germ2:
    """Conjugate a level-(d+1) germ back down: pi o g with pi(u, v) = (u v^d, v).

    Composes to the germ's own order; used for the round-trip law
    blowdown(lift(g)) = g o pi up to order (order of g) - d.
    """
    return Germ2(g.first * g.second ** d, g.second)


def pullback_through_chain(g: Germ2, d: int) -> Germ2:
    """g o pi for pi(u, v) = (u v^d, v), exact to the order of g."""
    spec = g.spec
    names = g.first.varnames
    order = g.order
    u_sub = Series2(spec, order, {(1, d): 1}, names)
    v_sub = Series2(spec, order, {(0, 1): 1}, names)
    return Germ2(g.first.subs_pair(u_sub, v_sub), g.second.subs_pair(u_sub, v_sub))


# ---------------------------------------------------------------------------
# gluing condition checkers
# ---------------------------------------------------------------------------

class GluingFamily(Enum):
    PHI_N = "phi_n"
    PHI_2_QUADRATIC = "phi2_quadratic"
    CUBIC_QUADRATIC = "cubic_quadratic"
    STAB_ZETA2 = "stab_zeta2"


@dataclass
class GluingReport:
    family: str
    passed: bool
    residuals: list[tuple[str, FieldElement]]

    def failing(self) -> list[str]:
        return [name for name, v in self.residuals if v]

    def __str__(self) -> str:
        status = "pass" if self.passed else "fail"
        return f"GluingReport({self.family}: {status}; " + ", ".join(
            f"{n}={v}" for n, v in self.residuals) + ")"


def default_order(family: GluingFamily, n: Optional[int] = None) -> int:
    """Smallest safe truncation order for each family's checker."""
    if family is GluingFamily.PHI_N:
        return max(n or 3, 4) + 1
    return 5


def check_gluing(g: Germ2, family: GluingFamily, n: Optional[int] = None) -> GluingReport:
    """Evaluate the coefficient conditions under which the germ carries the
    second blowup cluster of the family onto the first."""
    if family is GluingFamily.PHI_N:
        if n is None or n < 3:
            raise ValueError("PHI_N needs n >= 3")
        if g.order < max(n, 4):
            raise OrderTooLow(f"order {g.order} too small for degree-{n} checks")
    elif g.order < 4:
        raise OrderTooLow("gluing checks need order >= 4")
    m = g.first.coeff
    nn = g.second.coeff
    res: list[tuple[str, FieldElement]]
    if family is GluingFamily.PHI_N:
        if n == 3:
            m10 = m(1, 0)
            if not m10:
                raise GuardViolation("m10 = 0: cleared-denominator guard fails")
            res = [
                ("m00", m(0, 0)),
                ("n00", nn(0, 0)),
                ("n10", nn(1, 0)),
                ("m10^3 + n01^2", m(1, 0) ** 3 + nn(0, 1) ** 2),
                ("2*m10*n20 - 3*m01*n01",
                 m(1, 0) * nn(2, 0) * 2 - m(0, 1) * nn(0, 1) * 3),
            ]
        else:
            res = [
                ("m00", m(0, 0)),
                ("n00", nn(0, 0)),
                ("n10", nn(1, 0)),
                (f"m10^{n} + n01^{n - 1}", m(1, 0) ** n + nn(0, 1) ** (n - 1)),
                ("m01", m(0, 1)),
                ("n20", nn(2, 0)),
            ]
    elif family is GluingFamily.PHI_2_QUADRATIC:
        res = [
            ("m00", m(0, 0)),
            ("n00", nn(0, 0)),
            ("n10", nn(1, 0)),
            ("m10^2 - n20 + n01", m(1, 0) ** 2 - nn(2, 0) + nn(0, 1)),
        ]
    elif family is GluingFamily.CUBIC_QUADRATIC:
        res = [
            ("m00", m(0, 0)),
            ("n00", nn(0, 0)),
            ("n01", nn(0, 1)),
            ("n02 + n10 + m01^2", nn(0, 2) + nn(1, 0) + m(0, 1) ** 2),
            ("n03 + n11 + 2*m01*(m02 + m10)",
             nn(0, 3) + nn(1, 1) + m(0, 1) * (m(0, 2) + m(1, 0)) * 2),
        ]
    elif family is GluingFamily.STAB_ZETA2:
        res = [
            ("m00", m(0, 0)),
            ("n00", nn(0, 0)),
            ("m01", m(0, 1)),
            ("m02 + m10 - n01^2", m(0, 2) + m(1, 0) - nn(0, 1) ** 2),
            ("m03 + m11 - 2*n01*(n02 + n10)",
             m(0, 3) + m(1, 1) - nn(0, 1) * (nn(0, 2) + nn(1, 0)) * 2),
        ]
    else:
        raise ValueError(f"unknown family {family}")
    return GluingReport(family.value if family is not GluingFamily.PHI_N
                        else f"phi_n({n})", not any(v for _, v in res), res)

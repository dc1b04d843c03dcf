"""Rational self-maps of the projective plane.

A map is a normalized triple of homogeneous polynomials of one degree with no
common factor; normalization also fixes the projective scale so that identity
of maps is literal equality of coefficient data.  Composition cancels the
common factor exactly; iteration keeps a history of pullback candidates so
cancellation stays cheap along orbits, with a subresultant fallback that is
always correct.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .numfield import FieldElement, FieldSpec, QQ, SpecMismatch
from .polynomial import (HomoPoly, binary_coprime_certificate, coprime_certificate, gcd_many,
                         poly_divexact, poly_divides, InexactDivision)


class MapError(Exception):
    pass


class IndeterminacyHit(MapError):
    def __init__(self, point, step: Optional[int] = None):
        msg = f"map undefined at {point}"
        if step is not None:
            msg += f" (iteration step {step})"
        super().__init__(msg)
        self.point = point
        self.step = step


class ZeroMap(MapError):
    pass


class SingularMatrix(MapError):
    pass


class GrowthInconclusive(MapError):
    pass


# ---------------------------------------------------------------------------
# projective points
# ---------------------------------------------------------------------------

class ProjPoint:
    """Point of P^2 with coordinates in a FieldSpec, first nonzero coord = 1."""

    __slots__ = ("spec", "coords")

    def __init__(self, spec: FieldSpec, coords: Sequence):
        cs = [spec.element(c) if not isinstance(c, FieldElement) else c for c in coords]
        if len(cs) != 3:
            raise ValueError("need 3 coordinates")
        for c in cs:
            if c.spec != spec:
                raise SpecMismatch("coordinate from a different field")
        pivot = next((c for c in cs if c), None)
        if pivot is None:
            raise ValueError("(0:0:0) is not a projective point")
        inv = pivot.inverse()
        self.spec = spec
        self.coords = tuple(c * inv for c in cs)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ProjPoint) and self.spec == other.spec
                and self.coords == other.coords)

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


# ---------------------------------------------------------------------------
# 3x3 matrices over a field
# ---------------------------------------------------------------------------

class Mat3:
    """3x3 matrix over a FieldSpec; projective linear maps and witnesses."""

    __slots__ = ("spec", "rows")

    def __init__(self, spec: FieldSpec, rows: Sequence[Sequence]):
        self.spec = spec
        self.rows = tuple(tuple(spec.element(e) if not isinstance(e, FieldElement) else e
                                for e in row) for row in rows)
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("need a 3x3 matrix")

    @classmethod
    def identity(cls, spec: FieldSpec) -> "Mat3":
        one, zero = 1, 0
        return cls(spec, [[one, zero, zero], [zero, one, zero], [zero, zero, one]])

    @classmethod
    def diagonal(cls, spec: FieldSpec, d0, d1, d2) -> "Mat3":
        return cls(spec, [[d0, 0, 0], [0, d1, 0], [0, 0, d2]])

    def det(self) -> FieldElement:
        r = self.rows
        return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))

    def adjugate(self) -> "Mat3":
        r = self.rows

        def cof(i, j):
            rows = [k for k in range(3) if k != i]
            cols = [k for k in range(3) if k != j]
            m = (r[rows[0]][cols[0]] * r[rows[1]][cols[1]]
                 - r[rows[0]][cols[1]] * r[rows[1]][cols[0]])
            return m if (i + j) % 2 == 0 else -m

        return Mat3(self.spec, [[cof(j, i) for j in range(3)] for i in range(3)])

    def inverse(self) -> "Mat3":
        d = self.det()
        if not d:
            raise SingularMatrix("matrix is singular")
        inv = d.inverse()
        adj = self.adjugate()
        return Mat3(self.spec, [[e * inv for e in row] for row in adj.rows])

    def __mul__(self, other: "Mat3") -> "Mat3":
        a, b = self.rows, other.rows
        return Mat3(self.spec,
                    [[sum((a[i][k] * b[k][j] for k in range(3)), self.spec.zero())
                      for j in range(3)] for i in range(3)])

    def apply_point(self, p: ProjPoint) -> ProjPoint:
        out = [sum((self.rows[i][j] * p.coords[j] for j in range(3)), self.spec.zero())
               for i in range(3)]
        return ProjPoint(self.spec, out)

    def as_map(self) -> "RationalMapP2":
        vs = [HomoPoly.variable(self.spec, 3, j) for j in range(3)]
        comps = []
        for i in range(3):
            acc = HomoPoly.zero(self.spec, 3)
            for j in range(3):
                if self.rows[i][j]:
                    acc = acc + vs[j] * self.rows[i][j]
            comps.append(acc)
        return RationalMapP2(comps)

    def __repr__(self) -> str:
        return "Mat3(" + "; ".join(", ".join(str(e) for e in row) for row in self.rows) + ")"


# ---------------------------------------------------------------------------
# rational maps
# ---------------------------------------------------------------------------

class RationalMapP2:
    """Dominant-ish rational map given by 3 homogeneous components, normalized."""

    __slots__ = ("spec", "components", "degree")

    def __init__(self, components: Sequence[HomoPoly],
                 cancel_candidates: Sequence[HomoPoly] = (), normalized: bool = False):
        comps = list(components)
        if len(comps) != 3:
            raise ValueError("a plane map needs 3 components")
        spec = comps[0].spec
        if any(c.spec != spec or c.arity != 3 for c in comps):
            raise SpecMismatch("components over different fields or arities")
        if all(c.is_zero() for c in comps):
            raise ZeroMap("all components vanish identically")
        degs = {c.degree for c in comps if c.degree is not None}
        if len(degs) != 1:
            raise ValueError(f"components of different degrees {degs}")
        if not normalized:
            comps = _cancel_common(comps, cancel_candidates)
            comps = _scale_triple(comps)
        self.spec = spec
        self.components = tuple(comps)
        self.degree = next(c.degree for c in self.components if c.degree is not None)

    @classmethod
    def identity(cls, spec: FieldSpec) -> "RationalMapP2":
        return Mat3.identity(spec).as_map()

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalMapP2) and self.spec == other.spec
                and self.components == other.components)

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return "(" + " : ".join(str(c) for c in self.components) + ")"


def _scale_triple(comps: list[HomoPoly]) -> list[HomoPoly]:
    lead = None
    for c in comps:
        if c.is_zero():
            continue
        m = c.leading_monomial()
        if lead is None or (sum(m), m) > (sum(lead), lead):
            lead = m
    for c in comps:
        if not c.is_zero() and c.leading_monomial() == lead:
            lc = c.leading_coeff()
            if lc == c.spec.one():
                return comps
            inv = lc.inverse()
            return [ci * inv for ci in comps]
    return comps


def _cancel_common(comps: list[HomoPoly], candidates: Sequence[HomoPoly]) -> list[HomoPoly]:
    spec = comps[0].spec
    # pure variable powers first
    for i in range(3):
        e = min(c.min_exponent(i) if not c.is_zero() else 10 ** 9 for c in comps)
        if e and e < 10 ** 9:
            comps = [c if c.is_zero() else c.shift_variable(i, -e) for c in comps]
    nz = [c for c in comps if not c.is_zero()]
    if any(c.degree == 0 for c in nz):
        return comps
    # known pullback factors (iteration history) are tried before the general gcd
    for cand in candidates:
        if cand.is_zero() or cand.degree == 0:
            continue
        while min(c.degree for c in nz) >= cand.degree and all(poly_divides(cand, c) for c in nz):
            comps = [c if c.is_zero() else poly_divexact(c, cand) for c in comps]
            nz = [c for c in comps if not c.is_zero()]
            if any(c.degree == 0 for c in nz):
                return comps
    if coprime_certificate(nz):
        return comps
    g = gcd_many(nz)
    if g.degree and g.degree > 0:
        comps = [c if c.is_zero() else poly_divexact(c, g) for c in comps]
    return comps


def map_compose(f: RationalMapP2, g: RationalMapP2,
                cancel_candidates: Sequence[HomoPoly] = ()) -> RationalMapP2:
    """f after g, with the common factor of the raw composition cancelled."""
    if f.spec != g.spec:
        raise SpecMismatch("composing maps over different fields")
    raw = [c.substitute(list(g.components)) for c in f.components]
    if all(c.is_zero() for c in raw):
        raise ZeroMap("composition vanishes identically (image inside Ind)")
    cands = list(cancel_candidates) + [c for c in g.components if not c.is_zero()]
    return RationalMapP2(raw, cancel_candidates=cands)


def map_apply(f: RationalMapP2, p: ProjPoint) -> ProjPoint:
    vals = [c.eval_point(list(p.coords)) for c in f.components]
    if not any(vals):
        raise IndeterminacyHit(p)
    return ProjPoint(f.spec, vals)


def jacobian_det(f: RationalMapP2) -> HomoPoly:
    """Determinant of the 3x3 matrix of partial derivatives."""
    parts = [[c.partial(j) for j in range(3)] for c in f.components]

    def minor(c0, c1):
        return parts[1][c0] * parts[2][c1] - parts[1][c1] * parts[2][c0]

    t0 = parts[0][0] * minor(1, 2)
    t1 = parts[0][1] * minor(0, 2)
    t2 = parts[0][2] * minor(0, 1)
    return t0 - t1 + t2


def proj_equal(f: RationalMapP2, g: RationalMapP2) -> bool:
    """Equality up to one common scalar, by pairwise cross-multiplication."""
    if f.spec != g.spec:
        raise SpecMismatch("maps over different fields")
    fc, gc = f.components, g.components
    for i in range(3):
        for j in range(i + 1, 3):
            if fc[i] * gc[j] != fc[j] * gc[i]:
                return False
    return True


def map_conjugate(f: RationalMapP2, M: Mat3) -> RationalMapP2:
    """M f M^{-1}, exact; raises SingularMatrix when det M = 0."""
    if not M.det():
        raise SingularMatrix("conjugating by a singular matrix")
    Minv_map = M.adjugate().as_map()       # projectively equals M^{-1}
    inner = map_compose(f, Minv_map)
    return map_compose(M.as_map(), inner)


# ---------------------------------------------------------------------------
# iteration and growth
# ---------------------------------------------------------------------------

#: past this raw-composition degree, degree_sequence switches from full
#: trivariate iteration to iteration of two independent line restrictions
EXACT_DEGREE_LIMIT = 45


def degree_sequence(f: RationalMapP2, N: int) -> list[int]:
    """[deg f, deg f^2, ..., deg f^N] by repeated normalized composition.

    Small iterates are composed exactly in P^2.  Once the raw degree passes
    EXACT_DEGREE_LIMIT the iteration continues on restrictions of the map to
    projective lines (normalized binary-form triples); two independent lines
    must agree, a third breaks ties, which rules out a non-generic choice.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    degs: list[int] = []
    cur = f
    history: list[HomoPoly] = [c for c in f.components]
    restricted: Optional[list[dict]] = None
    lines = _restriction_lines(f.spec)
    for step in range(1, N + 1):
        if step == 1:
            degs.append(f.degree)
            continue
        if restricted is None and (cur.degree * f.degree) <= EXACT_DEGREE_LIMIT:
            cur = map_compose(f, cur, cancel_candidates=history)
            history.extend(cur.components)
            degs.append(cur.degree)
            continue
        if restricted is None:
            if f.spec.degree == 1:
                restricted = [_qq_restrict_state(f, cur, history, c)
                              for c in _LINE_COORDS[:2]]
            else:
                restricted = [_restrict_state(f, cur, history, L) for L in lines[:2]]
        restricted = [_restricted_step(f, st) for st in restricted]
        step_degs = [st["degree"] for st in restricted]
        if len(set(step_degs)) != 1:
            # a non-generic line only ever over-cancels, so the max is the
            # true degree; drop the degenerate line
            best = max(step_degs)
            restricted = [st for st, d in zip(restricted, step_degs) if d == best]
        degs.append(max(step_degs))
    return degs


_LINE_COORDS = (((1, 2), (3, 5), (7, 11)),
                ((2, -1), (5, 3), (1, 4)),
                ((1, 1), (-2, 3), (4, -5)))


def _il_restrict(int_terms: dict, coords) -> list[int]:
    """Restrict a trivariate int-coefficient form to the line
    (x, y, z) = (a0 s + b0 t, ...); ascending int list at t = 1."""
    base = [[pair[1], pair[0]] for pair in coords]
    maxe = [0, 0, 0]
    for m in int_terms:
        for i in range(3):
            maxe[i] = max(maxe[i], m[i])
    pows = []
    for i in range(3):
        pl = [[1]]
        for _ in range(maxe[i]):
            pl.append(_il_strip(_il_mul(pl[-1], base[i])))
        pows.append(pl)
    deg = max((sum(m) for m in int_terms), default=0)
    out = [0] * (deg + 1)
    for m, c in int_terms.items():
        prod = pows[0][m[0]]
        if m[1]:
            prod = _il_mul(prod, pows[1][m[1]])
        if m[2]:
            prod = _il_mul(prod, pows[2][m[2]])
        for j, v in enumerate(prod):
            if v:
                out[j] += c * v
    return _il_strip(out)


def _il_candidate(D: int, coeffs: list[int]) -> Optional[tuple[int, list[int]]]:
    """Reduce to the s- and t-free core usable as a division candidate."""
    c = _il_strip(list(coeffs))
    if not c:
        return None
    smin = next(i for i, v in enumerate(c) if v)
    c = c[smin:]
    cd = len(c) - 1
    if cd <= 0:
        return None
    from math import gcd as igcd
    g = 0
    for v in c:
        g = igcd(g, v)
    if g > 1:
        c = [v // g for v in c]
    return (cd, c)


def _qq_restrict_state(f: RationalMapP2, cur: RationalMapP2,
                       history: Sequence[HomoPoly], coords) -> dict:
    f_int = _qq_clear_triple(f.components)
    cands = []
    for h in history:
        if h.is_zero() or h.degree == 0:
            continue
        cc = _il_candidate(h.degree, _il_restrict(_qq_clear_component(h), coords))
        if cc:
            cands.append(cc)
    # the coordinate forms restrict to candidates too (contracted lines)
    for i in range(3):
        cc = _il_candidate(1, _il_restrict({(int(i == 0), int(i == 1), int(i == 2)): 1},
                                           coords))
        if cc:
            cands.append(cc)
    cleared = _qq_clear_triple(cur.components)
    tri = _QQBinTriple(cur.degree,
                       [_il_restrict(d, coords) for d in cleared])
    tri = tri.normalize(cands)
    return {"kind": "qq", "f_int": f_int, "f_deg": f.degree, "triple": tri,
            "cands": cands, "degree": tri.D}


def _qq_step(state: dict) -> dict:
    tri: _QQBinTriple = state["triple"]
    f_int, f_deg = state["f_int"], state["f_deg"]
    maxe = [0, 0, 0]
    for comp in f_int:
        for m in comp:
            for i in range(3):
                maxe[i] = max(maxe[i], m[i])
    pows = []
    for i in range(3):
        pl = [[1]]
        src = tri.comps[i]
        for _ in range(maxe[i]):
            pl.append(_il_mul(pl[-1], src))
        pows.append(pl)
    raws = []
    for comp in f_int:
        acc: dict[int, int] = {}
        for m, c in comp.items():
            prod = pows[0][m[0]]
            for i in (1, 2):
                if m[i]:
                    if not prod:
                        break
                    prod = _il_mul(prod, pows[i][m[i]])
            else:
                for j, v in enumerate(prod):
                    if v:
                        acc[j] = acc.get(j, 0) + c * v
        n = max(acc, default=-1) + 1
        out = [0] * n
        for j, v in acc.items():
            out[j] = v
        raws.append(_il_strip(out))
    cands = list(state["cands"])
    for c in tri.comps:
        cc = _il_candidate(tri.D, c)
        if cc:
            cands.append(cc)
    new = _QQBinTriple(f_deg * tri.D, raws).normalize(cands)
    if new.D > 0 and not new.coprime_certified():
        new = _qq_slow_cancel(new)
    return {"kind": "qq", "f_int": f_int, "f_deg": f_deg, "triple": new,
            "cands": cands, "degree": new.D}


def _qq_slow_cancel(tri: _QQBinTriple) -> _QQBinTriple:
    """Exact fallback: full gcd of the dehomogenized forms plus t-power logic."""
    from .polynomial import _int_prs_gcd
    nz = [c for c in tri.comps if c]
    g = nz[0]
    for c in nz[1:]:
        g = _int_prs_gcd(g, c)
        if len(g) == 1:
            break
    D = tri.D
    comps = tri.comps
    if len(g) > 1:
        qs = _il_divide_triple(comps, g)
        if qs is not None:
            comps = _il_strip_content(qs)
            D -= len(g) - 1
    dmax = max(len(c) - 1 for c in comps if c)
    if dmax < D:
        D = dmax
    return _QQBinTriple(D, comps)


# -- integer fast lane for restricted iteration over Q ------------------------
#
# A binary form of homogeneous degree D is stored dehomogenized at t = 1 as an
# ascending int list c (s-exponent j has t-exponent D - j), primitive up to
# the triple-wide content.

def _qq_clear_component(c: HomoPoly) -> dict:
    from math import gcd as igcd
    den = 1
    for v in c.terms.values():
        d = v.coeffs[0].denominator
        den = den * d // igcd(den, d)
    return {m: int(v.coeffs[0] * den) for m, v in c.terms.items()}


def _qq_clear_triple(comps: Sequence[HomoPoly]) -> list[dict]:
    """Clear denominators with ONE multiplier so relative scales survive."""
    from math import gcd as igcd
    den = 1
    for c in comps:
        for v in c.terms.values():
            d = v.coeffs[0].denominator
            den = den * d // igcd(den, d)
    return [{m: int(v.coeffs[0] * den) for m, v in c.terms.items()} for c in comps]


def _il_mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _il_shift(a: list[int], k: int) -> list[int]:
    return [0] * k + a


def _il_strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _il_divexact(a: list[int], b: list[int]) -> Optional[tuple[list[int], int]]:
    """Fraction-free trial division: returns (q, s) with q = s * (a/b) and
    s = lc(b)^(deg a - deg b + 1), or None when b does not divide a.
    Pure int arithmetic, no per-step gcds; the caller removes the common
    scale s triple-wide so relative component scales stay intact."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return None
    lb = b[-1]
    n = da - db + 1
    q = [0] * n
    r = list(a)
    steps = 0
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        q = [v * lb for v in q]
        q[shift] += lr
        r = [v * lb for v in r]
        for i, bi in enumerate(b):
            r[shift + i] -= lr * bi
        del r[-1:]
        while r and r[-1] == 0:
            r.pop()
        steps += 1
    if r:
        return None
    if steps < n:
        m = lb ** (n - steps)
        q = [v * m for v in q]
    return q, lb ** n


def _il_strip_content(comps: list[list[int]]) -> list[list[int]]:
    from math import gcd as igcd
    g = 0
    for c in comps:
        for v in c:
            g = igcd(g, v)
        if g == 1:
            return comps
    if g > 1:
        return [[v // g for v in c] for c in comps]
    return comps


def _il_divide_triple(comps: list[list[int]], cand: list[int]) -> Optional[list[list[int]]]:
    """Divide every nonzero component by cand exactly, preserving relative
    scales; returns None when some component is not divisible."""
    out: list[tuple[list[int], int]] = []
    for c in comps:
        if not c:
            out.append(([], 1))
            continue
        qd = _il_divexact(c, cand)
        if qd is None:
            return None
        out.append(qd)
    scales = [s for (_, s) in out]
    from math import gcd as igcd
    L = 1
    for s in scales:
        L = L * s // igcd(L, s)
    return [[v * (L // s) for v in q] for (q, s) in out]


class _QQBinTriple:
    """Binary-form triple of one homogeneous degree D, int coefficient lists
    dehomogenized at t = 1 (entry j carries t-exponent D - j)."""

    __slots__ = ("D", "comps")

    def __init__(self, D: int, comps: list[list[int]]):
        self.D = D
        self.comps = [_il_strip(list(c)) for c in comps]

    def normalize(self, candidates: list[tuple[int, list[int]]]) -> "_QQBinTriple":
        """Strip content and common s/t powers, then divide out candidate
        factors; after the strips only t-free, s-free candidates can divide."""
        from math import gcd as igcd
        comps, D = [list(c) for c in self.comps], self.D
        nz = [c for c in comps if c]
        if not nz:
            raise ZeroMap("restriction vanished on the line")
        g = 0
        for c in nz:
            for v in c:
                g = igcd(g, v)
            if g == 1:
                break
        if g > 1:
            comps = [[v // g for v in c] for c in comps]
        smin = min(next(i for i, v in enumerate(c) if v) for c in nz)
        if smin:
            comps = [c[smin:] if c else c for c in comps]
            D -= smin
        dmax = max(len(c) - 1 for c in comps if c)
        if dmax < D:
            D = dmax
        if D > 0:
            changed = True
            while changed:
                changed = False
                for cd, cand in candidates:
                    if not cand or cd > D or len(cand) - 1 != cd or cand[0] == 0:
                        continue
                    while cd <= D:
                        qs = _il_divide_triple(comps, cand)
                        if qs is None:
                            break
                        comps = _il_strip_content(qs)
                        D -= cd
                        changed = True
                    if D == 0:
                        break
                if D == 0:
                    break
        return _QQBinTriple(D, comps)

    def coprime_certified(self) -> bool:
        nz = [c for c in self.comps if c]
        if self.D == 0:
            return True
        if max(len(c) - 1 for c in nz) < self.D:
            return False    # common t factor remains
        if all(c[0] == 0 for c in nz):
            return False    # common s factor remains
        from .polynomial import _CERT_PRIMES, _modp_gcd_is_one
        a = next(c for c in nz if len(c) - 1 == self.D)
        for p in _CERT_PRIMES:
            if a[-1] % p == 0:
                continue
            for b in nz:
                if b is a:
                    continue
                if _modp_gcd_is_one(a, b, p):
                    return True
        return False


def _restriction_lines(spec: FieldSpec) -> list[list[HomoPoly]]:
    """Three fixed projective lines with small coordinates, pairwise generic."""
    s, t = (HomoPoly.variable(spec, 2, 0), HomoPoly.variable(spec, 2, 1))

    def line(c):
        a, b, cc = c
        return [s * a[0] + t * a[1], s * b[0] + t * b[1], s * cc[0] + t * cc[1]]

    return [line(((1, 2), (3, 5), (7, 11))),
            line(((2, -1), (5, 3), (1, 4))),
            line(((1, 1), (-2, 3), (4, -5)))]


def _restrict_state(f: RationalMapP2, cur: RationalMapP2,
                    history: Sequence[HomoPoly], L: list[HomoPoly]) -> dict:
    cands = [h.substitute(L) for h in history]
    cands = [c for c in cands if not c.is_zero() and c.degree > 0]
    triple = _normalize_binary_triple([c.substitute(L) for c in cur.components], cands)
    return {"kind": "generic", "f": f, "triple": triple, "cands": cands,
            "degree": _triple_degree(triple)}


def _restricted_step(f: RationalMapP2, state: dict) -> dict:
    if state["kind"] == "qq":
        return _qq_step(state)
    raw = [c.substitute(state["triple"]) for c in f.components]
    cands = state["cands"] + [c for c in state["triple"] if not c.is_zero() and c.degree > 0]
    triple = _normalize_binary_triple(raw, cands)
    return {"kind": "generic", "f": f, "triple": triple, "cands": cands,
            "degree": _triple_degree(triple)}


def _normalize_binary_triple(tri: list[HomoPoly],
                             candidates: Sequence[HomoPoly] = ()) -> list[HomoPoly]:
    nz = [c for c in tri if not c.is_zero()]
    if not nz:
        raise ZeroMap("restriction vanished; line inside a contracted curve")
    spec = nz[0].spec
    for i in (0, 1):
        e = min(c.min_exponent(i) for c in nz)
        if e:
            tri = [c if c.is_zero() else c.shift_variable(i, -e) for c in tri]
            nz = [c for c in tri if not c.is_zero()]
    changed = True
    while changed and all(c.degree > 0 for c in nz):
        changed = False
        for cand in sorted(candidates, key=lambda c: -c.degree):
            if cand.degree > min(c.degree for c in nz):
                continue
            while all(poly_divides(cand, c) for c in nz):
                tri = [c if c.is_zero() else poly_divexact(c, cand) for c in tri]
                nz = [c for c in tri if not c.is_zero()]
                changed = True
                if any(c.degree == 0 for c in nz):
                    break
            if any(c.degree == 0 for c in nz):
                break
    if not (any(c.degree == 0 for c in nz) or binary_coprime_certificate(nz)):
        g = gcd_many(nz)
        if g.degree:
            tri = [c if c.is_zero() else poly_divexact(c, g) for c in tri]
    return _scale_triple(tri)


def _triple_degree(tri: Sequence[HomoPoly]) -> int:
    return next(c.degree for c in tri if not c.is_zero())


@dataclass
class GrowthClass:
    tag: str                      # Bounded | Linear | Quadratic | Exponential
    evidence: dict = field(default_factory=dict)

    def __str__(self) -> str:
        return self.tag


def classify_growth(seq: Sequence[int]) -> GrowthClass:
    """Classify a degree sequence by exact finite differences / ratio margin."""
    if len(seq) < 4:
        raise ValueError("need at least 4 iterates")
    tail = list(seq[-4:])
    if len(set(seq[len(seq) // 2:])) == 1:
        return GrowthClass("Bounded", {"value": seq[-1]})
    d1 = [b - a for a, b in zip(tail, tail[1:])]
    if len(set(d1)) == 1 and d1[0] != 0:
        return GrowthClass("Linear", {"slope": d1[0]})
    d2 = [b - a for a, b in zip(d1, d1[1:])]
    if len(set(d2)) == 1 and d2[0] != 0:
        return GrowthClass("Quadratic", {"second_difference": d2[0]})
    ratios = [Fraction(b, a) for a, b in zip(seq[-4:], seq[-3:])]
    margin = Fraction(105, 100)
    if all(r >= margin for r in ratios):
        return GrowthClass("Exponential",
                           {"ratios": [str(r) for r in ratios],
                            "last_ratio": float(ratios[-1])})
    raise GrowthInconclusive(f"no growth pattern in prefix {list(seq)}; increase N")


# ---------------------------------------------------------------------------
# named maps
# ---------------------------------------------------------------------------

def _vars(spec: FieldSpec):
    return (HomoPoly.variable(spec, 3, 0), HomoPoly.variable(spec, 3, 1),
            HomoPoly.variable(spec, 3, 2))


def phi_map(n: int, spec: FieldSpec = QQ) -> RationalMapP2:
    """(x z^{n-1} + y^n : y z^{n-1} : z^n), the degree-n single-line blowdown map."""
    if n < 2:
        raise ValueError("need n >= 2")
    x, y, z = _vars(spec)
    return RationalMapP2([x * z ** (n - 1) + y ** n, y * z ** (n - 1), z ** n])


def cubic_quadratic(spec: FieldSpec = QQ) -> RationalMapP2:
    """(y^2 z : x(xz + y^2) : y(xz + y^2)); contracts a conic and a line."""
    x, y, z = _vars(spec)
    c = x * z + y * y
    return RationalMapP2([y * y * z, x * c, y * c])


def cubic_quadratic_inverse(spec: FieldSpec = QQ) -> RationalMapP2:
    """(y(z^2 - xy) : z(z^2 - xy) : x z^2), inverse of cubic_quadratic."""
    x, y, z = _vars(spec)
    c = z * z - x * y
    return RationalMapP2([y * c, z * c, x * z * z])


def henon_map(p_coeffs: Sequence[Union[int, Fraction]], delta,
              spec: FieldSpec = QQ) -> RationalMapP2:
    """Homogenized Henon map (x:y:z) -> (y z^{d-1} : P(y/z) z^d - delta x z^{d-1} : z^d)."""
    cs = [spec.element(c) for c in p_coeffs]
    while cs and not cs[-1]:
        cs.pop()
    d = len(cs) - 1
    if d < 2:
        raise ValueError("Henon maps need deg P >= 2")
    dl = spec.element(delta)
    if not dl:
        raise ValueError("delta must be nonzero")
    x, y, z = _vars(spec)
    poly = HomoPoly.zero(spec, 3)
    for k, c in enumerate(cs):
        if c:
            term = (y ** k * z ** (d - k)) * c
            poly = term if poly.is_zero() else poly + term
    second = poly - x * z ** (d - 1) * dl
    return RationalMapP2([y * z ** (d - 1), second, z ** d])


def example12_linear(spec: FieldSpec = QQ) -> RationalMapP2:
    """(xy : yz : z^2); its degree sequence grows linearly."""
    x, y, z = _vars(spec)
    return RationalMapP2([x * y, y * z, z * z])


def bedford_kim_map(n: int, c, a_coeffs: Sequence = (),
                    spec: FieldSpec = QQ) -> RationalMapP2:
    """(x z^{n-1} : z^n : x^n - y z^{n-1} + c z^n + sum a_l x^{l+1} z^{n-l-1}),
    the l running over even values 2, 4, ..., n-3."""
    if n < 3 or n % 2 == 0:
        raise ValueError("defined for odd n >= 3")
    x, y, z = _vars(spec)
    third = x ** n - y * z ** (n - 1) + z ** n * spec.element(c)
    ls = list(range(2, n - 2, 2))
    if len(a_coeffs) != len(ls):
        raise ValueError(f"need {len(ls)} coefficients a_l for l in {ls}")
    for l, a in zip(ls, a_coeffs):
        ae = spec.element(a)
        if ae:
            third = third + (x ** (l + 1) * z ** (n - l - 1)) * ae
    return RationalMapP2([x * z ** (n - 1), z ** n, third])

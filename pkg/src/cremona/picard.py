"""Integer matrices of induced actions on Picard lattices, exact
characteristic polynomials, Sturm real-root isolation, spectral radii.

The family builders assemble the lattice action of the lifted maps in the
geometric bases (contracted-line class plus the exceptional components of the
blowup clusters, tower by tower).  Characteristic polynomials are computed
fraction-free by evaluating integer Bareiss determinants of kI - M at
dim + 1 integer points and interpolating exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .polynomial import InexactDivision, UniPoly
from .tower import UnsupportedN, phi_n_source_labels, phi_n_target_labels, swap_table


class PicardError(Exception):
    pass


class DominanceUnresolved(PicardError):
    pass


class ZeroConstantTerm(PicardError):
    pass


@dataclass
class PicLatticeMatrix:
    dim: int
    entries: tuple[tuple[int, ...], ...]    # entries[i][j]: coeff of basis_i in image of basis_j
    basis_labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.entries) != self.dim or any(len(r) != self.dim for r in self.entries):
            raise ValueError("entries must be dim x dim")
        if len(self.basis_labels) != self.dim:
            raise ValueError("need one label per basis vector")

    def det(self) -> int:
        return _bareiss_det([list(r) for r in self.entries])

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i in range(self.dim))

    def __repr__(self) -> str:
        return f"PicLatticeMatrix(dim={self.dim})"


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# ---------------------------------------------------------------------------
# family builders
# ---------------------------------------------------------------------------

def _phi_family_blocks(n: int):
    """Index maps and swap permutation for one tower block of the degree-n maps."""
    m = 2 * n - 1
    src = phi_n_source_labels(n)[1:]     # drop Delta: tower labels in order
    tgt = phi_n_target_labels(n)[1:]
    table = swap_table("phi_n", n)
    sigma = {}
    for j, lab in enumerate(src):
        if lab == f"L^{n - 2}":
            continue
        image = table[lab]
        sigma[j] = tgt.index(image)
    # multiplicity column of the line class pulled back through the cluster:
    # E, F carry 1, 2; G^k carries k + 2; the top chain carries n
    col = [1, 2] + [k + 2 for k in range(1, n - 1)] + [n] * (n - 1)
    assert len(col) == m
    return m, sigma, col


def build_matrix(family: str, n: Optional[int] = None) -> PicLatticeMatrix:
    """Committed lattice matrices: families 'thm31' (n >= 3), 'thm33' (n >= 4),
    'thm43'."""
    if family == "thm31":
        if n is None or n < 3:
            raise UnsupportedN("thm31 needs n >= 3")
        return _build_phi_matrix(n, towers=3)
    if family == "thm33":
        if n is None or n < 4:
            raise UnsupportedN("thm33 needs n >= 4")
        return _build_phi_matrix(n, towers=2)
    if family == "thm43":
        if n is not None:
            raise UnsupportedN("thm43 takes no n")
        return _build_cubic_matrix()
    raise UnsupportedN(f"unknown matrix family {family}")


def _build_phi_matrix(n: int, towers: int) -> PicLatticeMatrix:
    m, sigma, col = _phi_family_blocks(n)
    dim = 1 + towers * m
    g = [[0] * dim for _ in range(dim)]
    off = [1 + t * m for t in range(towers)]
    # image of the line class Delta: last label of the second tower
    g[off[1] + m - 1][0] = 1
    # tower-1 components map into tower 2 by the swap table
    for j, i in sigma.items():
        g[off[1] + i][off[0] + j] = 1
    # the last tower-1 component maps to the strict transform of a line:
    # Delta + (multiplicities on tower 1) - (multiplicities on tower 2)
    jlast = off[0] + m - 1
    g[0][jlast] = 1
    for i, c in enumerate(col):
        g[off[0] + i][jlast] = c
        g[off[1] + i][jlast] = -c
    # middle towers shift forward, the final tower returns to tower 1
    for t in range(1, towers):
        dst = off[t + 1] if t + 1 < towers else off[0]
        for j in range(m):
            g[dst + j][off[t] + j] = 1
    labels = (["Delta"]
              + phi_n_source_labels(n)[1:]
              + ["phi." + lab for lab in phi_n_target_labels(n)[1:]])
    if towers == 3:
        labels += ["phif." + lab for lab in phi_n_target_labels(n)[1:]]
    return PicLatticeMatrix(dim, tuple(tuple(r) for r in g), tuple(labels))


_THM43_ROWS = (
    (0, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0),
    (0, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0),
    (0, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0),
    (0, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0),
    (0, 0, 2, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (0, 0, -1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, -1, 0, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, -2, 1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 1, -3, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (1, 0, -4, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0),
)

_THM43_LABELS = ("Delta'", "E", "F", "H", "L", "N",
                 "phi.E", "phi.G", "phi.K", "phi.M", "phi.Omega",
                 "phif.E", "phif.G", "phif.K", "phif.M", "phif.Omega")


def _build_cubic_matrix() -> PicLatticeMatrix:
    return PicLatticeMatrix(16, _THM43_ROWS, _THM43_LABELS)


# ---------------------------------------------------------------------------
# characteristic polynomial
# ---------------------------------------------------------------------------

def char_poly(M: PicLatticeMatrix) -> UniPoly:
    """Exact monic characteristic polynomial det(X I - M) over Z."""
    n = M.dim
    xs = list(range(n + 1))
    vals = []
    for x in xs:
        mat = [[(x if i == j else 0) - M.entries[i][j] for j in range(n)]
               for i in range(n)]
        vals.append(_bareiss_det(mat))
    # exact Lagrange interpolation at 0..n
    coeffs = [Fraction(0)] * (n + 1)
    for i, xi in enumerate(xs):
        # basis polynomial prod_{j != i} (X - xj) / (xi - xj)
        denom = 1
        for j, xj in enumerate(xs):
            if j != i:
                denom *= (xi - xj)
        basis = [Fraction(1)]
        for j, xj in enumerate(xs):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k + 1] += c
                nxt[k] -= c * xj
            basis = nxt
        w = Fraction(vals[i], denom)
        for k, c in enumerate(basis):
            coeffs[k] += c * w
    p = UniPoly(coeffs)
    assert all(c.denominator == 1 for c in p.coeffs), "interpolation not integral"
    assert p.degree == n and p.lc() == 1, "characteristic polynomial not monic"
    return p


def charpoly_oracle_cofactor(M: PicLatticeMatrix) -> UniPoly:
    """Independent cofactor-expansion oracle over Z[X]; exponential, dim <= 6."""
    n = M.dim

    def det(rows: list[int], cols: list[int]) -> UniPoly:
        if len(rows) == 1:
            i, j = rows[0], cols[0]
            diag = UniPoly((0, 1)) if i == j else UniPoly.zero()
            return diag - UniPoly((M.entries[i][j],))
        total = UniPoly.zero()
        i = rows[0]
        for idx, j in enumerate(cols):
            a = (UniPoly((0, 1)) if i == j else UniPoly.zero()) - UniPoly((M.entries[i][j],))
            if a.is_zero():
                continue
            sub = det(rows[1:], cols[:idx] + cols[idx + 1:])
            term = a * sub
            total = total + term if idx % 2 == 0 else total - term
        return total

    return det(list(range(n)), list(range(n)))


def is_reciprocal_up_to_sign(p: UniPoly) -> bool:
    """X^deg * p(1/X) = +- p(X), i.e. the coefficient vector reversed is +- itself."""
    if p.is_zero() or p.coeffs[0] == 0:
        raise ZeroConstantTerm("reciprocality needs p(0) != 0")
    c = list(p.coeffs)
    return c == c[::-1] or c == [-v for v in c[::-1]]


# ---------------------------------------------------------------------------
# cyclotomic helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(k: int) -> UniPoly:
    if k < 1:
        raise ValueError("k >= 1")
    # x^k - 1 divided by all lower cyclotomics
    p = UniPoly([-1] + [0] * (k - 1) + [1])
    for d in range(1, k):
        if k % d == 0:
            p = p.divexact(cyclotomic(d))
    return p


def _euler_phi(k: int) -> int:
    phi, m, d = 1, k, 2
    while d * d <= m:
        if m % d == 0:
            phi *= d - 1
            m //= d
            while m % d == 0:
                phi *= d
                m //= d
        d += 1
    if m > 1:
        phi *= m - 1
    return phi


def strip_cyclotomic_factors(p: UniPoly) -> tuple[dict[int, int], UniPoly]:
    """Divide out cyclotomic factors; returns ({k: multiplicity}, remainder)."""
    out: dict[int, int] = {}
    rem = p
    deg = p.degree
    k = 1
    # phi(k) >= sqrt(k/2), so phi(k) <= deg forces k <= 2 (deg + 1)^2
    bound = 2 * (deg + 1) * (deg + 1)
    while k <= bound and rem.degree > 0:
        if _euler_phi(k) > rem.degree:
            k += 1
            continue
        ck = cyclotomic(k)
        while True:
            q, r = rem.divmod(ck)
            if r.is_zero() and not q.is_zero():
                out[k] = out.get(k, 0) + 1
                rem = q
                if rem.degree == 0:
                    break
            else:
                break
        k += 1
    return out, rem


def is_cyclotomic_product(p: UniPoly) -> bool:
    """True iff p is (up to sign) a product of cyclotomic polynomials."""
    if p.is_zero():
        return False
    q = p.monic()
    _, rem = strip_cyclotomic_factors(q)
    return rem.degree == 0 if not rem.is_zero() else False


# ---------------------------------------------------------------------------
# Sturm isolation
# ---------------------------------------------------------------------------

@dataclass
class IsolatedRoot:
    polynomial: UniPoly
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def __repr__(self) -> str:
        return (f"IsolatedRoot([{self.lo}, {self.hi}] ~ {float(self.midpoint()):.10f}, "
                f"mult {self.multiplicity})")


def _sturm_chain(p: UniPoly) -> list[UniPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        r = chain[-2].divmod(chain[-1])[1]
        chain.append(-r)
    chain.pop()
    return chain


def _sign_variations(chain: Sequence[UniPoly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q.eval(x)
        if v:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(chain, a: Fraction, b: Fraction) -> int:
    return _sign_variations(chain, a) - _sign_variations(chain, b)


def sturm_isolate(p: UniPoly) -> list[IsolatedRoot]:
    """Disjoint rational intervals isolating every distinct real root of p,
    with multiplicities recovered through the derivative-gcd chain."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    q = p.squarefree_part()
    chain = _sturm_chain(q)
    bound = Fraction(1) + max(abs(c) for c in q.coeffs) / abs(q.lc())
    lo, hi = -bound, bound
    # Sturm counts need non-root endpoints; the Cauchy bound guarantees that
    total = _count_roots(chain, lo, hi)
    intervals: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, total)]
    while stack:
        a, b, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            intervals.append((a, b))
            continue
        mid = (a + b) / 2
        while q.eval(mid) == 0:
            mid = (a + 2 * mid) / 3   # nudge off the root
        cl = _count_roots(chain, a, mid)
        stack.append((a, mid, cl))
        stack.append((mid, b, cnt - cl))
    intervals.sort()
    # multiplicities: root of p with multiplicity m is a root of the first
    # m - 1 iterated gcd(p, p') reductions
    gcd_chain = [p]
    cur = p
    while cur.degree > 0:
        g = cur.gcd(cur.derivative())
        if g.is_zero() or g.degree == 0:
            break
        gcd_chain.append(g)
        cur = g
    roots = []
    for (a, b) in intervals:
        mult = 1
        for g in gcd_chain[1:]:
            gs = g.squarefree_part()
            ch = _sturm_chain(gs)
            if gs.eval(a) == 0 or gs.eval(b) == 0:
                a, b = _shrink(q, chain, a, b)
            if _count_roots(ch, a, b) >= 1:
                mult += 1
            else:
                break
        roots.append(IsolatedRoot(p, a, b, mult))
    return roots


def _shrink(q: UniPoly, chain, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    for _ in range(4):
        mid = (a + b) / 2
        if q.eval(mid) == 0:
            mid = (a + 2 * mid) / 3
        if _count_roots(chain, a, mid) == 1:
            b = mid
        else:
            a = mid
    return a, b


def refine_root(root: IsolatedRoot, width: Fraction) -> IsolatedRoot:
    """Bisect the isolating interval of the squarefree part down to ``width``."""
    q = root.polynomial.squarefree_part()
    a, b = root.lo, root.hi
    fa = q.eval(a)
    if fa == 0:
        # endpoint hit the root exactly
        return IsolatedRoot(root.polynomial, a, a, root.multiplicity)
    while b - a > width:
        mid = (a + b) / 2
        fm = q.eval(mid)
        if fm == 0:
            return IsolatedRoot(root.polynomial, mid, mid, root.multiplicity)
        if (fa > 0) != (fm > 0):
            b = mid
        else:
            a, fa = mid, fm
    return IsolatedRoot(root.polynomial, a, b, root.multiplicity)


# ---------------------------------------------------------------------------
# spectral radius
# ---------------------------------------------------------------------------

def spectral_radius(M: PicLatticeMatrix, precision_bits: int = 64) -> IsolatedRoot:
    """Largest root modulus of the characteristic polynomial, certified.

    Strips cyclotomic factors (roots all on the unit circle); when the
    remainder is trivial the radius is exactly 1, and when it is a quadratic
    with real dominant root lambda > 1 whose sibling root is smaller in
    modulus, lambda is isolated and refined to width 2^-precision_bits.
    Anything else raises DominanceUnresolved.
    """
    p = char_poly(M)
    return spectral_radius_of_charpoly(p, precision_bits)


def spectral_radius_of_charpoly(p: UniPoly, precision_bits: int = 64) -> IsolatedRoot:
    cyc, rem = strip_cyclotomic_factors(p.monic())
    width = Fraction(1, 2 ** precision_bits)
    if rem.degree == 0:
        one = UniPoly((-1, 1))
        mult = cyc.get(1, 1)
        return IsolatedRoot(one, Fraction(1), Fraction(1), mult)
    if rem.degree == 1:
        r = -rem.coeffs[0] / rem.coeffs[1]
        if abs(r) <= 1:
            raise DominanceUnresolved("linear remainder does not dominate the circle")
        return IsolatedRoot(rem, r, r, 1)
    if rem.degree == 2:
        c0, c1, c2 = rem.coeffs
        disc = c1 * c1 - 4 * c0 * c2
        if disc <= 0:
            raise DominanceUnresolved("non-cyclotomic complex quadratic factor")
        roots = sturm_isolate(rem)
        # dominant = largest |value|; compare via absolute interval bounds
        def absbound(r):
            return max(abs(r.lo), abs(r.hi))
        roots.sort(key=absbound)
        lamb = roots[-1]
        lamb = refine_root(lamb, width)
        lo_abs = min(abs(lamb.lo), abs(lamb.hi)) if lamb.lo * lamb.hi > 0 else Fraction(0)
        if lo_abs <= 1:
            raise DominanceUnresolved("dominant root does not exceed the unit circle")
        # the other quadratic root has modulus |c0/c2| / lambda < lambda
        other_mod_sq_num = abs(c0 / c2)
        if other_mod_sq_num >= lo_abs * lo_abs:
            raise DominanceUnresolved("sibling root may dominate")
        return IsolatedRoot(rem, lamb.lo, lamb.hi, 1)
    raise DominanceUnresolved(
        f"non-cyclotomic factor of degree {rem.degree}; no certificate applies")


def certified_factor_string(p: UniPoly, candidates: Sequence[tuple[UniPoly, str]]) -> Optional[str]:
    """Factor p exactly into the candidate polynomials; None when they do not
    multiply out to p."""
    rem = p.monic()
    parts = []
    for cand, name in candidates:
        e = 0
        while rem.degree >= cand.degree:
            q, r = rem.divmod(cand)
            if not r.is_zero():
                break
            rem = q
            e += 1
        if e == 1:
            parts.append(f"({name})")
        elif e > 1:
            parts.append(f"({name})^{e}")
        if rem.degree == 0:
            break
    if rem.degree != 0:
        return None
    return "".join(parts)

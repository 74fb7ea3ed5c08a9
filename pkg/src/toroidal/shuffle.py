"""The shuffle algebra realization of the two halves of the quantum
toroidal algebra: zeta-twisted symmetrized products, wheel conditions,
the explicit path generators, exponential ray elements, symmetrized
monomials, the integral bialgebra pairing, and decomposition into the
orthogonal convex-path basis.

Sign convention: a ShuffleElem with sign -1 realizes an element of the
lower half (variable count n for a product of generators with first index
summing to -n); sign +1 realizes the upper half through the *opposite*
algebra, so products of sign +1 elements compose in reversed order.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, gcd

from ._poly import NBASE, monom_poly
from .combinatorics import ConvexPath, z_v
from .config import DEFAULT
from .errors import CapExceededError, PoleError
from .residues import Regime, contour_integral
from .scalars import (ONE, ZERO, FieldElem, Monomial, fe, qden, qpow)
from .zratio import (ZFunction, inv_zeta, symmetrize, symmetrize_cosets,
                     zeta, zf_sum, zring)

MON_Q1 = Monomial(2, 0, 0, 0)
MON_Q2 = Monomial(0, 2, 0, 0)
MON_QINV = Monomial(-2, -2, 0, 0)


def _pole_shape_pair(factor, k):
    """Recognize a factor as (z_i - q z_j) up to unit; returns (i, j) or None."""
    terms = list(factor.terms())
    if len(terms) != 2:
        return None
    plain = qmon = None
    for mon, c in terms:
        base, zs = mon[:NBASE], mon[NBASE:]
        nz = [(t + 1, e) for t, e in enumerate(zs) if e]
        if len(nz) != 1 or nz[0][1] != 1 or abs(c) != 1:
            return None
        if base == (0, 0, 0, 0):
            plain = (nz[0][0], c)
        elif base == (2, 2, 0, 0):
            qmon = (nz[0][0], c)
        else:
            return None
    if plain is None or qmon is None or plain[1] == qmon[1]:
        return None
    return plain[0], qmon[0]


@dataclass(frozen=True)
class ShuffleElem:
    """A symmetric rational function with the pole shape
    r(z) / prod_{i != j} (z_i - z_j q), r a symmetric Laurent polynomial
    satisfying the wheel conditions."""

    sign: int
    k: int
    fn: ZFunction

    @staticmethod
    def make(sign, k, fn, validate=True):
        if validate and fn:
            for fac, m in fn.den:
                pair = _pole_shape_pair(fac, k)
                if pair is None:
                    raise PoleError(f"factor {fac} outside the pole shape")
                if m > 1:
                    raise PoleError(f"repeated pole factor {fac}")
        return ShuffleElem(sign, k, fn)

    @staticmethod
    def unit(sign):
        return ShuffleElem(sign, 0, ZFunction.const(0, ONE))

    def is_zero(self):
        return self.fn.is_zero()

    def __add__(self, other):
        if self.k != other.k or self.sign != other.sign:
            raise ValueError("can only add like shuffle elements")
        return ShuffleElem(self.sign, self.k, self.fn + other.fn)

    def __sub__(self, other):
        return self + other.scale(fe(-1))

    def scale(self, c):
        return ShuffleElem(self.sign, self.k, self.fn * c)

    def __eq__(self, other):
        return (self.sign == other.sign and self.k == other.k
                and self.fn == other.fn)

    def __hash__(self):
        return hash((self.sign, self.k, self.fn))

    def z_degree(self):
        return self.fn.z_degree()

    def wheel_numerator(self):
        """r(z): the numerator over the full pole-shape denominator."""
        out = self.fn
        have = {}
        for fac, m in self.fn.den:
            have[_pole_shape_pair(fac, self.k)] = m
        R = zring(self.k)
        extra = R.one
        for i in range(1, self.k + 1):
            for j in range(1, self.k + 1):
                if i != j and (i, j) not in have:
                    zi = monom_poly(R, (0,) * NBASE + tuple(
                        1 if t == i - 1 else 0 for t in range(self.k)))
                    zj = monom_poly(R, (2, 2, 0, 0) + tuple(
                        1 if t == j - 1 else 0 for t in range(self.k)))
                    extra = extra * (zi - zj)
        num = ZFunction(self.k, out.num * extra, out.shift, ())
        return num


def wheel_check(A):
    """Check the wheel conditions: the numerator r vanishes whenever
    {z1/z2, z2/z3, z3/z1} = {q1, q2, 1/q} in any order (remaining
    variables formal).  Returns None on pass, else a witness."""
    if A.k < 3:
        return None
    r = A.wheel_numerator()
    for alpha, beta, _gamma in itertools.permutations((MON_Q1, MON_Q2, MON_QINV)):
        # z1/z2 = alpha, z2/z3 = beta
        g = r.eval_monomial(2, 1, alpha.inv(), target=1)
        g = g.eval_monomial(3, 1, (alpha * beta).inv(), target=1)
        if not g.is_zero():
            return (alpha, beta, g)
    return None


def star_product(f, g, kf, kg):
    """The zeta-twisted product of two symmetric functions:
    (1/kf!kg!) Sym[f(z_1..z_kf) g(z_{kf+1}..) prod zeta(z_i/z_j)]."""
    k = kf + kg
    h = f.extend(k) * g.extend(k, offset=kf)
    for i in range(1, kf + 1):
        for j in range(kf + 1, k + 1):
            h = h * zeta(k, i, j)
    return symmetrize_cosets(h, kf)


def shuffle_product(A, B, config=DEFAULT):
    """The product A*B in the half-algebra both elements live in.  For
    sign -1 this is the shuffle product as written; for sign +1 the
    opposite-algebra convention applies (factors compose in reverse)."""
    if A.sign != B.sign:
        raise ValueError("mixed signs in shuffle product")
    k = A.k + B.k
    if k > config.max_vars:
        raise CapExceededError(f"{k} variables exceeds cap {config.max_vars}")
    if A.k == 0:
        return ShuffleElem(B.sign, B.k, B.fn * A.fn.as_field_elem())
    if B.k == 0:
        return ShuffleElem(A.sign, A.k, A.fn * B.fn.as_field_elem())
    if A.sign == -1:
        fn = star_product(A.fn, B.fn, A.k, B.k)
    else:
        fn = star_product(B.fn, A.fn, B.k, A.k)
    return ShuffleElem.make(A.sign, k, fn)


def product_chain(elems, config=DEFAULT):
    """Algebra product of several like-sign elements, left to right."""
    out = None
    for e in elems:
        out = e if out is None else shuffle_product(out, e, config)
    return out if out is not None else ShuffleElem.unit(-1)


@lru_cache(maxsize=None)
def build_P(n, m, sign, max_vars=DEFAULT.max_vars):
    """The generator with horizontal degree +-n and vertical degree m, as
    the explicitly symmetrized rational function (times the q-power
    prefactor that normalizes the map from the half-algebra)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > max_vars:
        raise CapExceededError(f"{n} variables exceeds cap {max_vars}")
    if abs(m) > DEFAULT.max_edge_m:
        raise CapExceededError(f"|m| = {abs(m)} exceeds cap {DEFAULT.max_edge_m}")
    d = gcd(n, abs(m))
    a = n // d
    R = zring(n)

    def zvar(i, base=(0, 0, 0, 0)):
        return monom_poly(R, tuple(base) + tuple(
            1 if t == i - 1 else 0 for t in range(n)))

    # monomial prefactor prod z_i^{floor(im/n) - floor((i-1)m/n)}
    zexp = [(i * m) // n - ((i - 1) * m) // n for i in range(1, n + 1)]
    core = ZFunction.monomial(n, tuple(zexp))
    # chain 1 / prod_{i<n} (1 - q z_{i+1}/z_i) = prod z_i / (z_i - q z_{i+1})
    for i in range(1, n):
        core = core * ZFunction.monomial(n, tuple(
            1 if t == i - 1 else 0 for t in range(n)))
        core = core.div_poly(zvar(i) - zvar(i + 1, base=(2, 2, 0, 0)))
    # the q-power ladder sum over s
    terms = []
    for s in range(d):
        t = ZFunction.const(n, qpow(2 * s))
        for tt in range(1, s + 1):
            idx_num = a * (d - tt) + 1
            idx_den = a * (d - tt)
            t = t * ZFunction.monomial(n, tuple(
                (1 if v == idx_num - 1 else 0) - (1 if v == idx_den - 1 else 0)
                for v in range(n)))
        terms.append(core * t)
    body = zf_sum(n, terms)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            body = body * zeta(n, i, j)
    fn = symmetrize(body) * qpow(n - d)
    return ShuffleElem.make(sign, n, fn)


def build_S(dlist, sign=-1, config=DEFAULT):
    """The symmetrized monomial Sym[z_1^{d_1} ... z_n^{d_n}]."""
    n = len(dlist)
    if n > config.max_vars:
        raise CapExceededError(f"{n} variables exceeds cap {config.max_vars}")
    if n == 0:
        return ShuffleElem.unit(sign)
    fn = symmetrize(ZFunction.monomial(n, tuple(dlist)))
    return ShuffleElem.make(sign, n, fn)


def build_Q(n, m, sign, config=DEFAULT):
    """Coefficient of x^g in exp[ sum_k P_{ka,kb} x^k (q^{k/2}-q^{-k/2})/k ]
    where (n, m) = g*(a, b) with (a, b) coprime."""
    if (n, m) == (0, 0):
        return ShuffleElem.unit(sign)
    g = gcd(abs(n), abs(m))
    a, b = n // g, m // g
    if abs(n) > config.max_vars:
        raise CapExceededError(f"{n} variables exceeds cap {config.max_vars}")
    total = None
    from .combinatorics import partitions_of
    for pi in partitions_of(g):
        coeff = ONE
        mults = {}
        for part in pi:
            mults[part] = mults.get(part, 0) + 1
        factors = []
        for part, j in sorted(mults.items()):
            c = qden(part) / fe(part)
            coeff = coeff * c ** j / fe(factorial(j))
            factors.extend([build_P(part * a, part * b, sign)] * j)
        term = product_chain(factors, config).scale(coeff)
        total = term if total is None else total + term
    return total


def path_product(v, sign, config=DEFAULT):
    """P_v (sign +1) or P_{-v} (sign -1) as a shuffle element; for sign -1
    the edge (n, m) contributes the generator with vertical degree -m."""
    if not isinstance(v, ConvexPath):
        v = ConvexPath.make(v)
    elems = [build_P(n, m if sign == 1 else -m, sign) for n, m in v.edges]
    return product_chain(elems, config)


def empty_triangle(edge1, edge2):
    """The triangle (0,0), edge1, edge1+edge2 has no interior lattice
    points and none on the two generator edges (points on the closing edge
    are allowed: they occur exactly when the sum is imprimitive)."""
    (n, m), (np_, mp) = edge1, edge2
    area2 = abs(n * mp - np_ * m)  # twice the area
    g1, g2 = gcd(abs(n), abs(m)), gcd(abs(np_), abs(mp))
    gs = gcd(abs(n + np_), abs(m + mp))
    boundary = g1 + g2 + gs
    interior2 = area2 - boundary + 2  # Pick: 2A = 2I + B - 2
    return interior2 == 0 and g1 == 1 and g2 == 1


def commutator_check_relation2(edge1, edge2, config=DEFAULT):
    """Verify [P_{n,m}, P_{n',m'}] = (q1^{d/2}-q1^{-d/2})(q2^{d/2}-q2^{-d/2})
    / (q^{-1/2}-q^{1/2}) * Q_{n+n',m+m'} for a pair of upper-half edges with
    n m' > n' m spanning an empty triangle.  Returns None on pass, else the
    mismatch."""
    (n, m), (np_, mp) = edge1, edge2
    for e in (edge1, edge2):
        if not (e[0] > 0 or (e[0] == 0 and e[1] > 0)):
            raise ValueError(f"edge {e} outside the upper half lattice")
    if n * mp <= np_ * m:
        raise ValueError("need n m' > n' m")
    if not empty_triangle(edge1, edge2):
        raise ValueError("triangle is not empty")
    A = build_P(n, m, 1) if n else _vertical_unsupported()
    B = build_P(np_, mp, 1) if np_ else _vertical_unsupported()
    lhs = shuffle_product(A, B, config) - shuffle_product(B, A, config)
    d = gcd(abs(n), abs(m)) * gcd(abs(np_), abs(mp))
    from .scalars import qnum
    phi = qnum(d) / (qpow(-1) - qpow(1))
    rhs = build_Q(n + np_, m + mp, 1, config).scale(phi)
    diff = lhs - rhs
    return None if diff.is_zero() else diff


def _vertical_unsupported():
    raise CapExceededError("vertical generators are not shuffle elements")


# -- the bialgebra pairing ---------------------------------------------------


@lru_cache(maxsize=None)
def pairing_normalization(n):
    """Per-variable-count normalization of the integral pairing, calibrated
    so that the n-fold product of the basic horizontal generators pairs to
    its orthogonality constant n! * w^n (w the gcd-1 weight)."""
    if n == 0:
        return ONE
    plus = path_product(ConvexPath.make([(1, 0)] * n), 1)
    minus = path_product(ConvexPath.make([(1, 0)] * n), -1)
    raw = _pairing_integral(plus, minus)
    if raw.is_zero():
        raise ValueError("degenerate pairing calibration")
    return z_v(ConvexPath.make([(1, 0)] * n)) / raw


def _pairing_integral(A, B):
    n = A.k
    f = A.fn * B.fn
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                f = f * inv_zeta(n, i, j)
    return contour_integral(f, Regime.Q_LARGE)


def pairing(A, B):
    """The bialgebra pairing of an upper-half and a lower-half element,
    realized as a normalized contour integral of
    A(z) * B(z) / prod zeta(z_i/z_j) over |z_a| = 1 with |q1|,|q2| > 1.

    With the generator realizations used here (vertical degree m maps to
    z-degree m on the upper half and to z-degree -m on the lower half) the
    two functions share one variable set, and the integrand is homogeneous
    of degree zero exactly on pairs of opposite bidegree.
    """
    if A.sign != 1 or B.sign != -1:
        raise ValueError("pairing takes (sign +1, sign -1)")
    if A.k != B.k:
        return ZERO
    if A.k == 0:
        return A.fn.as_field_elem() * B.fn.as_field_elem()
    da, db = A.z_degree(), B.z_degree()
    if da is not None and db is not None and da + db != 0:
        # the integrand is z-homogeneous of nonzero degree
        return ZERO
    return _pairing_integral(A, B) * pairing_normalization(A.k)


@dataclass(frozen=True)
class HallElem:
    """A finite combination of path-basis symbols."""

    sign: int
    coeffs: tuple  # tuple of (ConvexPath, FieldElem)

    def as_dict(self):
        return dict(self.coeffs)


def candidate_paths(n, m_bound):
    """Slope-sorted vertical-edge-free paths of size exactly n with
    per-edge |m_i| <= m_bound."""
    from .combinatorics import enumerate_convex_paths
    return [v for v in enumerate_convex_paths(n, m_bound, star=True)
            if v.size() == n]


def hall_decompose(A, m_bound=None, config=DEFAULT):
    """Write A in the orthogonal path basis via the pairing; verifies the
    reconstruction and raises BasisError on failure (which would mean the
    candidate window was too small, or worse)."""
    from .errors import BasisError
    if m_bound is None:
        m_bound = DEFAULT.max_edge_m // 2
    n = A.k
    coeffs = []
    recon = None
    for v in candidate_paths(n, m_bound):
        dual = path_product(v, -A.sign, config)
        c = pairing(A, dual) if A.sign == 1 else pairing(dual, A)
        c = c / z_v(v)
        if c.is_zero():
            continue
        coeffs.append((v, c))
        term = path_product(v, A.sign, config).scale(c)
        recon = term if recon is None else recon + term
    if recon is None:
        recon = ShuffleElem(A.sign, n, ZFunction(n, zring(n).zero))
    if not (recon.fn == A.fn):
        raise BasisError("path-basis reconstruction mismatch; "
                         "increase the edge bound")
    return HallElem(A.sign, tuple(coeffs))

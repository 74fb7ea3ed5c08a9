"""Rational functions in auxiliary variables z1..zk over the scalar field.

A ZFunction is kept as

    value = x^shift * num / prod_i f_i^{m_i}

where num is a content-free polynomial in QQ[s1,s2,u,up,z1..zk], shift is an
integer Laurent shift over all 4+k variables, and the denominator is a
multiset of normalized factors.  Factors are either z-free irreducible
polynomials or "z-separated binomials" (two terms, with any z variable
occurring in only one of them) -- every denominator this library ever
produces has that shape, which makes cancellation a matter of exact trial
division instead of multivariate gcd.

The numerator is always reduced against the factor list, so a ZFunction is
in canonical form and equality is decidable syntactically (cross
multiplication is used as the actual test to stay independent of factor
grouping).
"""

import itertools
from functools import lru_cache

import sympy
from sympy.polys.domains import QQ

from . import combinatorics as comb
from ._poly import (NBASE, R4, divide_monomial, exact_div, min_exponents,
                    monom_poly, nvars, project_scalar, remap_zvars, shift_vec,
                    sort_key, zring)
from .errors import PoleError, WheelViolationError
from .scalars import ZERO as FE_ZERO
from .scalars import FieldElem, Monomial

_SYMS4 = sympy.symbols("s1 s2 u up")


def _zero_shift(k):
    return (0,) * (NBASE + k)


def _normalize_factor(f):
    """Strip content and leading coefficient from a factor.

    Returns (f_norm, content_monomial, lc) with f = lc * x^content * f_norm.
    """
    lo = min_exponents(f)
    if any(lo):
        f = divide_monomial(f, lo)
    lc = f.LC
    if lc != QQ(1):
        f = f.quo_ground(lc)
    return f, lo, lc


@lru_cache(maxsize=None)
def _factor_scalar(p4):
    """Irreducible factorization of a z-free polynomial (content-free input).

    Returns a tuple of (factor, multiplicity); factors are content-free with
    leading coefficient +1.  The rational unit is reconstructed by the
    caller via comparison, so it is also returned.
    """
    expr = p4.as_expr(*_SYMS4)
    const, factors = sympy.factor_list(expr)
    out = []
    unit = QQ(const.p, const.q) if const.is_Rational else None
    if unit is None:
        raise ValueError(f"unexpected factorization unit {const}")
    for base, mult in factors:
        poly = sympy.Poly(base, *_SYMS4)
        pe = R4.from_dict({mon: QQ(c.p, c.q) for mon, c in poly.terms()})
        pe, lo, lc = _normalize_factor(pe)
        if any(lo):
            raise ValueError("content survived factoring")
        unit *= lc ** mult
        out.append((pe, mult))
    return unit, tuple(sorted(out, key=lambda fm: sort_key(fm[0])))


def _is_z_separated_binomial(f, k):
    if len(f) != 2:
        return False
    (m1, m2) = f.monoms()
    for i in range(NBASE, NBASE + k):
        if m1[i] and m2[i]:
            return False
    return True


class ZFunction:
    __slots__ = ("k", "num", "shift", "den", "symmetric", "_hash")

    def __init__(self, k, num, shift=None, den=(), symmetric=False,
                 _canonical=False):
        self.k = k
        if _canonical:
            self.num, self.shift, self.den = num, shift, den
        else:
            self.num = num
            self.shift = shift if shift is not None else _zero_shift(k)
            self.den = den
            self._reduce()
        self.symmetric = symmetric
        self._hash = None

    # -- construction ---------------------------------------------------

    @staticmethod
    def const(k, fe):
        """Embed a FieldElem into k z-variables."""
        R = zring(k)
        out = ZFunction(k, fe.num.set_ring(R), fe.shift + (0,) * k)
        return out._div_scalar_poly(fe.den)

    @staticmethod
    def monomial(k, zexps, fe=None):
        R = zring(k)
        mon = (0,) * NBASE + tuple(zexps)
        out = ZFunction(k, R.one, mon)
        return out if fe is None else out * ZFunction.const(k, fe)

    def ring(self):
        return zring(self.k)

    # -- normalization --------------------------------------------------

    def _reduce(self):
        if not self.num:
            self.num = self.ring().zero
            self.shift = _zero_shift(self.k)
            self.den = ()
            return
        new_den = []
        num = self.num
        for f, m in self.den:
            while m > 0:
                q = exact_div(num, f)
                if q is None:
                    break
                num = q
                m -= 1
            if m:
                new_den.append((f, m))
        lo = min_exponents(num)
        if any(lo):
            num = divide_monomial(num, lo)
            self.shift = shift_vec(self.shift, lo)
        self.num = num
        self.den = tuple(sorted(new_den, key=lambda fm: sort_key(fm[0])))

    def _add_factor(self, f, mult=1):
        """Record 1/f^mult; f may be any nonzero polynomial whose shape is
        z-free or a z-separated binomial.  Mutates self (constructor use)."""
        if not f:
            raise PoleError("zero denominator factor")
        f, lo, lc = _normalize_factor(f)
        self.shift = shift_vec(self.shift, tuple(-mult * e for e in lo))
        if lc != QQ(1):
            self.num = self.num.quo_ground(lc ** mult)
        if f == f.ring.one:
            return
        zfree = all(not any(mon[NBASE:]) for mon in f.monoms())
        if zfree:
            unit, factors = _factor_scalar(project_scalar(f))
            if unit != QQ(1):
                self.num = self.num.quo_ground(unit ** mult)
            R = self.ring()
            for g, gm in factors:
                self._merge_factor(g.set_ring(R), gm * mult)
        else:
            if not _is_z_separated_binomial(f, self.k):
                raise PoleError(f"unsupported denominator shape: {f}")
            self._merge_factor(f, mult)

    def _merge_factor(self, f, mult):
        den = dict(self.den)
        den[f] = den.get(f, 0) + mult
        self.den = tuple(den.items())

    def _div_scalar_poly(self, p4):
        out = ZFunction(self.k, self.num, self.shift, self.den, self.symmetric,
                        _canonical=True)
        if p4 != R4.one:
            out._add_factor(p4.set_ring(self.ring()))
        out._reduce()
        return out

    def div_poly(self, f, mult=1):
        """Divide by a polynomial factor (z-free or z-separated binomial)."""
        out = ZFunction(self.k, self.num, self.shift, self.den, False,
                        _canonical=True)
        out._add_factor(f, mult)
        out._reduce()
        return out

    # -- arithmetic -------------------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __neg__(self):
        return ZFunction(self.k, -self.num, self.shift, self.den,
                         self.symmetric, _canonical=True)

    def __add__(self, other):
        if isinstance(other, FieldElem):
            other = ZFunction.const(self.k, other)
        if self.k != other.k:
            raise ValueError("variable count mismatch")
        return zf_sum(self.k, [self, other])

    def __sub__(self, other):
        if isinstance(other, FieldElem):
            other = ZFunction.const(self.k, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElem):
            if not other:
                return ZFunction(self.k, self.ring().zero)
            num = self.num * other.num.set_ring(self.ring())
            out = ZFunction(self.k, num,
                            shift_vec(self.shift, other.shift + (0,) * self.k),
                            self.den, self.symmetric)
            return out._div_scalar_poly(other.den)
        if self.k != other.k:
            raise ValueError("variable count mismatch")
        out = ZFunction(self.k, self.num * other.num,
                        shift_vec(self.shift, other.shift), (), False,
                        _canonical=True)
        for f, m in itertools.chain(self.den, other.den):
            out._merge_factor(f, m)
        out._reduce()
        return out

    def den_poly(self):
        p = self.ring().one
        for f, m in self.den:
            p = p * f ** m
        return p

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            other = ZFunction.const(self.k, other)
        if not isinstance(other, ZFunction) or self.k != other.k:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        lo = tuple(map(min, zip(self.shift, other.shift)))
        a = self.num * monom_poly(self.ring(), shift_vec(self.shift, lo, -1))
        b = other.num * monom_poly(self.ring(), shift_vec(other.shift, lo, -1))
        return a * other.den_poly() == b * self.den_poly()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.k, frozenset(self.num.terms())))
        return self._hash

    def __repr__(self):
        den = " * ".join(f"({f})^{m}" if m > 1 else f"({f})" for f, m in self.den)
        sh = {n: e for n, e in zip(self._names(), self.shift) if e}
        s = f"ZF[{self.k}]({self.num})"
        if sh:
            s += f" * {sh}"
        if den:
            s += f" / {den}"
        return s

    def _names(self):
        return ["s1", "s2", "u", "up"] + [f"z{i}" for i in range(1, self.k + 1)]

    # -- variable plumbing ------------------------------------------------

    def extend(self, new_k, offset=0):
        """View in new_k >= k variables, sending z_i to z_{i+offset}."""
        R = zring(new_k)
        zmap = {i: i + offset for i in range(1, self.k + 1)}
        num = remap_zvars(self.num, R, zmap)
        shift = list(self.shift[:NBASE]) + [0] * new_k
        for i in range(1, self.k + 1):
            shift[NBASE + i + offset - 1] = self.shift[NBASE + i - 1]
        out = ZFunction(new_k, num, tuple(shift), (), False, _canonical=True)
        for f, m in self.den:
            out._merge_factor(remap_zvars(f, R, zmap), m)
        return out

    def permute(self, perm):
        """Apply z_i -> z_{perm[i]}; perm is a dict or list (1-based)."""
        if isinstance(perm, (list, tuple)):
            perm = {i + 1: p for i, p in enumerate(perm)}
        R = self.ring()
        num = remap_zvars(self.num, R, perm)
        shift = list(self.shift)
        for i in range(1, self.k + 1):
            shift[NBASE + perm[i] - 1] = self.shift[NBASE + i - 1]
        out = ZFunction(self.k, num, tuple(shift), (), self.symmetric,
                        _canonical=True)
        for f, m in self.den:
            f, lo, lc = _normalize_factor(remap_zvars(f, R, perm))
            out.shift = shift_vec(out.shift, tuple(-m * e for e in lo))
            if lc != QQ(1):
                out.num = out.num.quo_ground(lc ** m)
            out._merge_factor(f, m)
        return out

    def invert_z(self):
        """Substitute z_i -> 1/z_i for every variable."""
        R = self.ring()
        flip = lambda mon: mon[:NBASE] + tuple(-e for e in mon[NBASE:])
        terms = {}
        lo = [0] * (NBASE + self.k)
        for mon, c in self.num.terms():
            m = flip(mon)
            terms[m] = c
            for i in range(NBASE, NBASE + self.k):
                lo[i] = min(lo[i], m[i])
        num = R.from_dict({shift_vec(m, tuple(lo), -1): c for m, c in terms.items()})
        shift = shift_vec(flip(self.shift), tuple(lo))
        out = ZFunction(self.k, num, shift, (), self.symmetric, _canonical=True)
        for f, m in self.den:
            hi = [0] * (NBASE + self.k)
            for mon in f.monoms():
                for i in range(NBASE, NBASE + self.k):
                    hi[i] = max(hi[i], mon[i])
            g = R.from_dict({shift_vec(flip(mon), tuple(hi)): c for mon, c in f.terms()})
            g, glo, glc = _normalize_factor(g)
            out.shift = shift_vec(out.shift, tuple(m * e for e in hi))
            out.shift = shift_vec(out.shift, tuple(-m * e for e in glo))
            if glc != QQ(1):
                out.num = out.num.quo_ground(glc ** m)
            out._merge_factor(g, m)
        out._reduce()
        return out

    # -- substitution ------------------------------------------------------

    def eval_monomial(self, a, coeff, mon, target=None, zpart=None):
        """Substitute z_a = coeff * x^mon * z^zpart.

        coeff is a rational (QQ-coercible), mon a Monomial over the base
        variables, zpart an exponent vector over the z variables (the
        convenience argument `target` stands for a single z_target^1).
        Raises PoleError if a denominator factor vanishes.
        """
        R = self.ring()
        c = QQ(coeff.numerator, coeff.denominator) if hasattr(coeff, "denominator") else QQ(coeff)
        ia = NBASE + a - 1
        if zpart is None:
            zpart = tuple(1 if target == i else 0 for i in range(1, self.k + 1))
        if zpart[a - 1]:
            raise ValueError("substitution may not involve the variable itself")

        def subst_poly(p):
            out = {}
            for m, co in p.terms():
                e = m[ia]
                new = list(m)
                new[ia] = 0
                for j in range(NBASE):
                    new[j] += mon[j] * e
                for j in range(self.k):
                    new[NBASE + j] += zpart[j] * e
                key = tuple(new)
                val = co * c ** e
                out[key] = out.get(key, QQ(0)) + val
            return R.from_dict({m: v for m, v in out.items() if v})

        e0 = self.shift[ia]
        shift = list(self.shift)
        shift[ia] = 0
        for j in range(NBASE):
            shift[j] += mon[j] * e0
        for j in range(self.k):
            shift[NBASE + j] += zpart[j] * e0
        num = subst_poly(self.num)
        if e0 and c != QQ(1):
            num = num.mul_ground(c ** e0)
        out = ZFunction(self.k, num, tuple(shift), (), False, _canonical=True)
        for f, m in self.den:
            g = subst_poly(f)
            if not g:
                raise PoleError(f"substitution z{a} hits denominator factor {f}")
            g, glo, glc = _normalize_factor(g)
            out.shift = shift_vec(out.shift, tuple(-m * e for e in glo))
            if glc != QQ(1):
                out.num = out.num.quo_ground(glc ** m)
            if g != R.one:
                out._add_factor(g, m)
        out._reduce()
        return out

    def subs_all_monomials(self, values):
        """Simultaneously substitute z_j = coeff_j * x^mon_j * (z_{t_j} or 1)
        for every j; values is a list of (coeff, Monomial, target_or_None)."""
        out = self
        # substitute one at a time; targets always refer to variables that
        # are not themselves substituted, so sequential application is exact
        for j, (c, mon, t) in enumerate(values, start=1):
            out = out.eval_monomial(j, c, mon, t)
        return out

    def substitute_points(self, points):
        """Full evaluation at FieldElem points; errors on any pole."""
        if len(points) != self.k:
            raise ValueError("need one point per variable")

        def eval_poly(p, shift):
            total = FE_ZERO
            for mon, co in p.terms():
                mon = shift_vec(mon, shift)
                fe = FieldElem.from_monomial(Monomial(*mon[:NBASE]),
                                             __import__("fractions").Fraction(
                                                 int(co.numerator), int(co.denominator)))
                for i in range(self.k):
                    e = mon[NBASE + i]
                    if e:
                        fe = fe * points[i] ** e
                total = total + fe
            return total

        for f, m in self.den:
            val = eval_poly(f, _zero_shift(self.k))
            if val.is_zero():
                raise PoleError(f"evaluation hits denominator factor {f}")
        den = FE_ZERO + FieldElem.from_rational(1)
        for f, m in self.den:
            den = den * eval_poly(f, _zero_shift(self.k)) ** m
        num = eval_poly(self.num, self.shift)
        return num / den

    def as_field_elem(self):
        if any(self.shift[NBASE:]):
            raise ValueError("z-dependence left in shift")
        den = FieldElem.from_rational(1)
        for f, m in self.den:
            for mon in f.monoms():
                if any(mon[NBASE:]):
                    raise ValueError("z-dependence left in denominator")
            den = den * FieldElem(project_scalar(f), R4.one) ** m
        num = FieldElem(project_scalar(self.num), R4.one, self.shift[:NBASE])
        return num / den

    # -- structure queries --------------------------------------------------

    def z_degree(self):
        """Total z-degree when homogeneous, else None."""
        if not self.num:
            return 0
        degs = {sum(mon[NBASE:]) for mon in self.num.monoms()}
        base = sum(self.shift[NBASE:])
        for f, m in self.den:
            fd = {sum(mon[NBASE:]) for mon in f.monoms()}
            if len(fd) != 1:
                return None
            base -= m * fd.pop()
        if len(degs) != 1:
            return None
        return base + degs.pop()

    def coeff_of_zmono(self, zexps):
        """Coefficient of z^zexps as a FieldElem; requires den z-free."""
        for f, _ in self.den:
            for mon in f.monoms():
                if any(mon[NBASE:]):
                    raise ValueError("denominator not z-free")
        target = shift_vec(zexps, self.shift[NBASE:], -1)
        picked = {}
        for mon, c in self.num.terms():
            if mon[NBASE:] == tuple(target):
                picked[mon[:NBASE] + (0,) * self.k] = c
        num = self.ring().from_dict(picked)
        base = ZFunction(self.k, num, self.shift[:NBASE] + (0,) * self.k,
                         self.den, False)
        return base.as_field_elem()

    def check_symmetric(self):
        for i in range(1, self.k):
            perm = list(range(1, self.k + 1))
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
            if not (self.permute(perm) == self):
                return False
        return True


def zf_sum(k, terms):
    """Sum of ZFunctions over a common factored denominator."""
    terms = [t for t in terms if not t.is_zero()]
    if not terms:
        return ZFunction(k, zring(k).zero)
    if len(terms) == 1:
        return terms[0]
    R = zring(k)
    union = {}
    for t in terms:
        for f, m in t.den:
            union[f] = max(union.get(f, 0), m)
    lo = tuple(map(min, zip(*(t.shift for t in terms))))
    total = R.zero
    for t in terms:
        part = t.num * monom_poly(R, shift_vec(t.shift, lo, -1))
        have = dict(t.den)
        for f, m in union.items():
            miss = m - have.get(f, 0)
            if miss:
                part = part * f ** miss
        total = total + part
    return ZFunction(k, total, lo, tuple(union.items()))


# -- the zeta kernel ------------------------------------------------------


@lru_cache(maxsize=None)
def _zeta_pieces(k, i, j):
    """num and den factors of zeta(z_i / z_j) cleared to polynomials."""
    R = zring(k)
    zi = monom_poly(R, (0,) * NBASE + tuple(1 if t == i - 1 else 0 for t in range(k)))
    zj = monom_poly(R, (0,) * NBASE + tuple(1 if t == j - 1 else 0 for t in range(k)))
    s1sq = monom_poly(R, (2, 0, 0, 0) + (0,) * k)
    s2sq = monom_poly(R, (0, 2, 0, 0) + (0,) * k)
    qq = monom_poly(R, (2, 2, 0, 0) + (0,) * k)
    num = (zj - s1sq * zi) * (zj - s2sq * zi)
    return num, (zj - zi, zj - qq * zi)


def zeta(k, i, j):
    """zeta(z_i/z_j) = (1 - q1 zi/zj)(1 - q2 zi/zj) / ((1 - zi/zj)(1 - q zi/zj))
    as a ZFunction in k variables."""
    num, dens = _zeta_pieces(k, i, j)
    out = ZFunction(k, num, _zero_shift(k), (), False, _canonical=True)
    for f in dens:
        out._add_factor(f)
    out._reduce()
    return out


def inv_zeta(k, i, j):
    R = zring(k)
    zi = monom_poly(R, (0,) * NBASE + tuple(1 if t == i - 1 else 0 for t in range(k)))
    zj = monom_poly(R, (0,) * NBASE + tuple(1 if t == j - 1 else 0 for t in range(k)))
    s1sq = monom_poly(R, (2, 0, 0, 0) + (0,) * k)
    s2sq = monom_poly(R, (0, 2, 0, 0) + (0,) * k)
    qq = monom_poly(R, (2, 2, 0, 0) + (0,) * k)
    out = ZFunction(k, (zj - zi) * (zj - qq * zi), _zero_shift(k))
    out._add_factor(zj - s1sq * zi)
    out._add_factor(zj - s2sq * zi)
    out._reduce()
    return out


def zeta_var(k, i):
    """zeta(z_i) for a single variable argument."""
    R = zring(k)
    zi = monom_poly(R, (0,) * NBASE + tuple(1 if t == i - 1 else 0 for t in range(k)))
    one = R.one
    s1sq = monom_poly(R, (2, 0, 0, 0) + (0,) * k)
    s2sq = monom_poly(R, (0, 2, 0, 0) + (0,) * k)
    qq = monom_poly(R, (2, 2, 0, 0) + (0,) * k)
    out = ZFunction(k, (one - s1sq * zi) * (one - s2sq * zi), _zero_shift(k))
    out._add_factor(one - zi)
    out._add_factor(one - qq * zi)
    out._reduce()
    return out


def zeta_at(x):
    """zeta evaluated at a FieldElem point."""
    from .scalars import ONE, Q, Q1, Q2
    den = (ONE - x) * (ONE - x * Q)
    if den.is_zero():
        raise PoleError("zeta evaluated at a pole")
    return (ONE - x * Q1) * (ONE - x * Q2) / den


# -- symmetrization --------------------------------------------------------


def symmetrize(f):
    """Sum over all k! permutations of the z variables."""
    k = f.k
    terms = [f.permute(perm) for perm in itertools.permutations(range(1, k + 1))]
    out = zf_sum(k, terms)
    out.symmetric = True
    return out


def symmetrize_cosets(f, k1):
    """Sym(f) / (k1! k2!) for f already symmetric in z_1..z_k1 and in
    z_{k1+1}..z_k separately: sum over the (k choose k1) shuffles."""
    k = f.k
    out_terms = []
    for subset in itertools.combinations(range(1, k + 1), k1):
        rest = [i for i in range(1, k + 1) if i not in subset]
        perm = {}
        for pos, var in enumerate(subset, start=1):
            perm[pos] = var
        for pos, var in enumerate(rest, start=k1 + 1):
            perm[pos] = var
        out_terms.append(f.permute(perm))
    out = zf_sum(k, out_terms)
    out.symmetric = True
    return out


# -- skew specialization ----------------------------------------------------


def skew_specialize(f, lam, mu, u_param=Monomial(0, 0, 1, 0)):
    """Evaluate a shuffle-shaped symmetric function at the box weights of
    the skew diagram lam \\ mu.

    Returns 0 if mu is not contained in lam or the variable count does not
    match the number of skew boxes.  Box weights are u q1^x q2^y; the
    substitution goes row by row through geometric q1-strings first (safe
    because the pole shape excludes z_i = q1 z_j), then sets the row
    variables to u q2^row, verifying at each step that no denominator factor
    vanishes (which would mean the input violates the wheel conditions).
    """
    boxes = comb.skew_boxes(lam, mu)
    if boxes is None or len(boxes) != f.k:
        return FE_ZERO
    if f.k == 0:
        return f.as_field_elem()

    rows = sorted({y for _, y in boxes})
    row_var = {y: i + 1 for i, y in enumerate(rows)}
    r = len(rows)

    # step 1: z_j -> q1^{x_j} * y_{row_j}; one variable at a time, mapping
    # into a fresh set of variables placed after the originals
    g = f.extend(f.k + r)
    for j, (x, y) in enumerate(boxes, start=1):
        g = g.eval_monomial(j, 1, Monomial(2 * x, 0, 0, 0), f.k + row_var[y])
    # drop the exhausted original variables
    zmap = {f.k + i: i for i in range(1, r + 1)}
    h = ZFunction(r, remap_zvars(g.num, zring(r), zmap),
                  g.shift[:NBASE] + g.shift[NBASE + f.k:], (), False,
                  _canonical=True)
    for fac, m in g.den:
        h._merge_factor(remap_zvars(fac, zring(r), zmap), m)
    # step 2: y_i -> u q2^{row}; a vanishing factor here is exactly a
    # failure of the wheel conditions
    for i, y in enumerate(rows, start=1):
        try:
            h = h.eval_monomial(i, 1, u_param * Monomial(0, 2 * y, 0, 0), None)
        except PoleError as exc:
            raise WheelViolationError(f"wheel conditions violated: {exc}") from exc
    return h.as_field_elem()


def substitute_points(f, points):
    return f.substitute_points(points)

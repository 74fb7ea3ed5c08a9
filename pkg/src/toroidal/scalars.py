"""Exact arithmetic in the coefficient field

    K = Frac( QQ[ q1^(1/2), q2^(1/2), u, up ] )

q is never a variable of its own: q = q1*q2 is always expanded.  Half-integer
exponents of q1, q2 are stored losslessly as integer exponents of the square
roots s1, s2 (so e1 = 3 means q1^(3/2)).

A FieldElem is kept in a unique canonical form:

  * value = s^shift * num / den, with num and den polynomials in s1,s2,u,up;
  * gcd(num, den) = 1;
  * num and den have zero monomial content (the Laurent shift is carried by
    ``shift``, den itself has none);
  * den's leading term under lex order on (e1,e2,eu,eup) has coefficient +1.

Equality and hashing are therefore syntactic.
"""

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from sympy.polys.domains import QQ

from ._poly import (R4, divide_monomial, exact_div, min_exponents, monom_poly,
                    qq_to_pair, shift_vec)
from .errors import FieldDivisionError, NonSummableError, PoleError

_ZEROSHIFT = (0, 0, 0, 0)


class Monomial(NamedTuple):
    """s1^e1 s2^e2 u^eu up^eup, i.e. q1^(e1/2) q2^(e2/2) u^eu up^eup."""

    e1: int
    e2: int
    eu: int
    eup: int

    def __mul__(self, other):
        return Monomial(*(a + b for a, b in zip(self, other)))

    def __pow__(self, n):
        return Monomial(*(a * n for a in self))

    def inv(self):
        return Monomial(*(-a for a in self))

    def is_one(self):
        return not any(self)

    def sweight(self):
        """Total q-weight in s-units: the exponent of t in |value| when
        |q1| = |q2| = e^t; u, up are weightless."""
        return self.e1 + self.e2


MON_ONE = Monomial(0, 0, 0, 0)


def mon_q1(half_steps=2):
    return Monomial(half_steps, 0, 0, 0)


def mon_q(half_steps=2):
    return Monomial(half_steps, half_steps, 0, 0)


class FieldElem:
    """Canonical-form element of K.  Immutable."""

    __slots__ = ("num", "den", "shift", "_hash")

    def __init__(self, num, den, shift=_ZEROSHIFT, _canonical=False):
        if _canonical:
            self.num, self.den, self.shift = num, den, shift
        else:
            if not den:
                raise FieldDivisionError("zero denominator")
            if not num:
                self.num, self.den, self.shift = R4.zero, R4.one, _ZEROSHIFT
            else:
                g = num.gcd(den)
                if g != R4.one:
                    num = exact_div(num, g)
                    den = exact_div(den, g)
                nlo = min_exponents(num)
                dlo = min_exponents(den)
                shift = shift_vec(shift_vec(shift, nlo), dlo, -1)
                if any(nlo):
                    num = divide_monomial(num, nlo)
                if any(dlo):
                    den = divide_monomial(den, dlo)
                lc = den.LC
                if lc != QQ(1):
                    num = num.quo_ground(lc)
                    den = den.quo_ground(lc)
                self.num, self.den, self.shift = num, den, shift
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(a, b=1):
        if b == 0:
            raise FieldDivisionError("zero denominator")
        if isinstance(a, Fraction):
            a, b = a.numerator, b * a.denominator
        return FieldElem(R4.from_dict({(0, 0, 0, 0): QQ(a, b)}), R4.one)

    @staticmethod
    def from_monomial(mon, coeff=1):
        if coeff == 0:
            return ZERO
        c = QQ(coeff.numerator, coeff.denominator) if isinstance(coeff, Fraction) else QQ(coeff)
        return FieldElem(R4.from_dict({(0, 0, 0, 0): c}), R4.one, tuple(mon))

    # -- ring structure -----------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        lo = tuple(map(min, zip(self.shift, other.shift)))
        a = self.num * monom_poly(R4, shift_vec(self.shift, lo, -1))
        b = other.num * monom_poly(R4, shift_vec(other.shift, lo, -1))
        return FieldElem(a * other.den + b * self.den, self.den * other.den, lo)

    def __neg__(self):
        return FieldElem(-self.num, self.den, self.shift, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        return FieldElem(self.num * other.num, self.den * other.den,
                         shift_vec(self.shift, other.shift))

    def inv(self):
        if not self.num:
            raise FieldDivisionError("inverse of zero")
        return FieldElem(self.den, self.num, tuple(-s for s in self.shift))

    def __truediv__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self * other.inv()

    def __pow__(self, n):
        if n == 0:
            return ONE
        base = self if n > 0 else self.inv()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            return NotImplemented
        return (self.shift == other.shift and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shift, frozenset(self.num.terms()),
                               frozenset(self.den.terms())))
        return self._hash

    def __repr__(self):
        return f"FieldElem({self.as_str()})"

    def as_str(self):
        names = ("s1", "s2", "u", "up")
        sh = "*".join(f"{n}^{e}" for n, e in zip(names, self.shift) if e)
        core = f"({self.num})" if len(self.num) > 1 else f"{self.num}"
        if self.den != R4.one:
            core += f"/({self.den})"
        return f"{sh}*{core}" if sh else core

    # -- extras ---------------------------------------------------------

    def swap_q1_q2(self):
        """The involution q1 <-> q2."""
        swap = lambda p: R4.from_dict({(m[1], m[0], m[2], m[3]): c for m, c in p.terms()})
        sh = (self.shift[1], self.shift[0], self.shift[2], self.shift[3])
        return FieldElem(swap(self.num), swap(self.den), sh)

    def substitute(self, assignment):
        """Homomorphic evaluation; `assignment` maps a subset of
        {"q1","q2","u","up"} to FieldElems.  q1/q2 values must have the
        square roots the caller intends: the value assigned to "q1"
        replaces s1^2, so odd powers of s1 require a perfect square."""
        vals = dict(assignment)
        unknown = set(vals) - {"q1", "q2", "u", "up"}
        if unknown:
            raise PoleError(f"cannot substitute unknown variables {sorted(unknown)}")
        if not vals:
            return self

        def eval_poly(p, extra_mon):
            total = ZERO
            for mon, c in p.terms():
                mon = shift_vec(mon, extra_mon)
                term = FieldElem.from_rational(int(c.numerator), int(c.denominator))
                for name, e in zip(("q1", "q2", "u", "up"), mon):
                    if e == 0:
                        continue
                    if name in vals:
                        if name in ("q1", "q2"):
                            if e % 2:
                                raise PoleError(
                                    f"substituting {name} into a half-integer power")
                            term = term * vals[name] ** (e // 2)
                        else:
                            term = term * vals[name] ** e
                    else:
                        idx = ("q1", "q2", "u", "up").index(name)
                        m = [0, 0, 0, 0]
                        m[idx] = e
                        term = term * FieldElem.from_monomial(Monomial(*m))
                total = total + term
            return total

        den = eval_poly(self.den, (0, 0, 0, 0))
        if den.is_zero():
            raise PoleError(f"substitution vanishes on denominator {self.den}")
        num = eval_poly(self.num, self.shift)
        return num / den

    def to_json(self):
        def side(p, shift):
            recs = []
            for mon, c in sorted(p.terms(), reverse=True):
                n, d = qq_to_pair(c)
                recs.append([n, d, *shift_vec(mon, shift)])
            return recs

        return {"num": side(self.num, self.shift), "den": side(self.den, _ZEROSHIFT)}

    @staticmethod
    def from_json(data):
        def side(recs):
            lo = (0, 0, 0, 0)
            for r in recs:
                lo = tuple(map(min, zip(lo, r[2:])))
            p = R4.from_dict({shift_vec(tuple(r[2:]), lo, -1): QQ(r[0], r[1])
                              for r in recs})
            return p, lo

        num, nlo = side(data["num"])
        den, dlo = side(data["den"])
        return FieldElem(num, den, shift_vec(nlo, dlo, -1))


ZERO = FieldElem(R4.zero, R4.one, _canonical=True)
ONE = FieldElem(R4.one, R4.one, _canonical=True)


def fe(a, b=1):
    return FieldElem.from_rational(a, b)


@lru_cache(maxsize=None)
def qpow(e1_half, e2_half=None):
    """q1^(e1_half/2) * q2^(e2_half/2); one argument gives a power of q."""
    if e2_half is None:
        e2_half = e1_half
    return FieldElem.from_monomial(Monomial(e1_half, e2_half, 0, 0))


def upow(e):
    return FieldElem.from_monomial(Monomial(0, 0, e, 0))


def uppow(e):
    return FieldElem.from_monomial(Monomial(0, 0, 0, e))


Q1 = qpow(2, 0)
Q2 = qpow(0, 2)
Q = qpow(2)
U = upow(1)
UP = uppow(1)


@lru_cache(maxsize=None)
def qnum(n):
    """(q1^(n/2) - q1^(-n/2)) (q2^(n/2) - q2^(-n/2))."""
    a = qpow(n, 0) - qpow(-n, 0)
    b = qpow(0, n) - qpow(0, -n)
    return a * b


@lru_cache(maxsize=None)
def qden(n):
    """q^(n/2) - q^(-n/2)."""
    return qpow(n) - qpow(-n)


@lru_cache(maxsize=None)
def heis_weight(n):
    """(q1^(n/2)-q1^(-n/2))(q2^(n/2)-q2^(-n/2)) / (q^(n/2)-q^(-n/2)),
    the pairing weight of a gcd-n generator."""
    return qnum(n) / qden(n)


def exp_sum_closed_form(terms):
    """Closed form of exp( sum_{k>=1} sum_j sign_j w_j^k / k ), i.e.
    prod_j (1 - w_j)^(-sign_j).

    Each w_j must be a Monomial that is formally small (the caller asserts
    summability); w_j = 1 is a log pole and raises NonSummableError.
    """
    out = ONE
    for sign, w in terms:
        if not isinstance(w, Monomial):
            raise TypeError("exp_sum_closed_form expects Monomial data")
        if w.is_one():
            raise NonSummableError("non-summable geometric datum (w = 1)")
        factor = ONE - FieldElem.from_monomial(w)
        if sign == 1:
            out = out / factor
        elif sign == -1:
            out = out * factor
        else:
            raise ValueError(f"sign must be +-1, got {sign}")
    return out

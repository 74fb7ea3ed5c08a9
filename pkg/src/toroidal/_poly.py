"""Sparse exact polynomial plumbing shared by the scalar field and the
z-variable rational function layer.

Everything is built on sympy's sparse polynomial rings over QQ (which use
gmpy2 rationals when available).  The base variables are always

    s1 = q1^(1/2),  s2 = q2^(1/2),  u,  up  (up = the second Fock parameter)

optionally followed by z1..zk.  Laurent exponents are handled by keeping a
polynomial together with an integer shift vector: the represented object is
``monomial(shift) * poly``.
"""

from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

NBASE = 4  # s1, s2, u, up


@lru_cache(maxsize=None)
def zring(k):
    """The polynomial ring QQ[s1,s2,u,up,z1..zk]; k = 0 gives the scalar ring."""
    names = ["s1", "s2", "u", "up"] + [f"z{i}" for i in range(1, k + 1)]
    R, *_ = ring(",".join(names), QQ)
    return R


R4 = zring(0)


def nvars(R):
    return len(R.gens)


def one(R):
    return R.one


def from_terms(R, terms):
    """Build a PolyElement from an iterable of (exponent tuple, QQ coeff)."""
    d = {}
    for mon, c in terms:
        if mon in d:
            d[mon] += c
        else:
            d[mon] = c
    return R.from_dict({m: c for m, c in d.items() if c})


def monom_poly(R, mon, coeff=QQ(1)):
    return R.from_dict({tuple(mon): coeff})


def min_exponents(p):
    """Componentwise minimum of the exponent vectors of p (p != 0)."""
    it = iter(p.monoms())
    lo = list(next(it))
    for m in it:
        for i, e in enumerate(m):
            if e < lo[i]:
                lo[i] = e
    return tuple(lo)


def shift_vec(a, b, sign=1):
    return tuple(x + sign * y for x, y in zip(a, b))


def divide_monomial(p, mon):
    """p / x^mon, assuming every term is divisible."""
    R = p.ring
    return R.from_dict({tuple(e - m for e, m in zip(ex, mon)): c for ex, c in p.terms()})


def exact_div(a, b):
    """a / b if b divides a exactly, else None."""
    q, r = divmod(a, b)
    if r:
        return None
    return q


def embed(p, R):
    """Move p into a ring with at least the same named generators."""
    if p.ring is R:
        return p
    return p.set_ring(R)


def project_scalar(p):
    """Move a z-free element down to the 4-variable scalar ring."""
    if p.ring is R4:
        return p
    return p.set_ring(R4)


def remap_zvars(p, R_out, zmap):
    """Send z_i -> z_{zmap[i]} (1-based on both sides); base variables fixed."""
    k_in = nvars(p.ring) - NBASE
    out = {}
    for mon, c in p.terms():
        new = [0] * nvars(R_out)
        new[:NBASE] = mon[:NBASE]
        for i in range(1, k_in + 1):
            e = mon[NBASE + i - 1]
            if e:
                new[NBASE + zmap[i] - 1] += e
        key = tuple(new)
        out[key] = out.get(key, QQ(0)) + c
    return R_out.from_dict({m: c for m, c in out.items() if c})


def z_degrees(p, k):
    """Set of per-term z-exponent vectors appearing in p."""
    return {mon[NBASE:NBASE + k] for mon in p.monoms()}


def sort_key(p):
    """Deterministic key for a PolyElement (sorted term list)."""
    return tuple(sorted(p.terms()))


def qq_to_pair(c):
    return int(c.numerator), int(c.denominator)

"""Partitions with corner data, convex lattice paths, and the orthogonality
normalization constants z_v."""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, gcd

from .scalars import FieldElem, Monomial, heis_weight, fe


def normalize_partition(parts):
    parts = tuple(int(p) for p in parts if p)
    if any(p < 0 for p in parts):
        raise ValueError("negative part")
    if list(parts) != sorted(parts, reverse=True):
        raise ValueError(f"parts not weakly decreasing: {parts}")
    return parts


def partitions_of(n):
    """All partitions of n, lexicographically largest first."""
    if n == 0:
        return [()]
    out = []

    def rec(rest, maxpart, prefix):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for p in range(min(rest, maxpart), 0, -1):
            rec(rest - p, p, prefix + [p])

    rec(n, n, [])
    return out


def partitions_upto(n):
    out = []
    for s in range(n + 1):
        out.extend(partitions_of(s))
    return out


def contains(lam, mu):
    lam, mu = normalize_partition(lam), normalize_partition(mu)
    if len(mu) > len(lam):
        return False
    return all(m <= l for l, m in zip(lam, mu))


def skew_boxes(lam, mu):
    """Row-major (x, y) boxes of lam \\ mu, or None if mu is not contained
    in lam.  x is the column index and y the row index of the bottom-left
    corner of the box, both starting at 0."""
    lam, mu = normalize_partition(lam), normalize_partition(mu)
    if not contains(lam, mu):
        return None
    boxes = []
    for y, l in enumerate(lam):
        m = mu[y] if y < len(mu) else 0
        boxes.extend((x, y) for x in range(m, l))
    return boxes


@dataclass(frozen=True)
class Corner:
    x: int
    y: int
    kind: str  # "inner" | "outer"


def corners(lam):
    """Inner (concave, box-addable) and outer (convex) corners of a Young
    diagram, with rows along the x-axis.  For (4,3,1):
    inner {(4,0),(3,1),(1,2),(0,3)}, outer {(4,1),(3,2),(1,3)}."""
    lam = normalize_partition(lam)
    r = len(lam)
    inner, outer = [], []
    for i in range(r + 1):
        cur = lam[i] if i < r else 0
        prev = lam[i - 1] if i > 0 else None
        if i == 0:
            inner.append(Corner(cur, 0, "inner"))
        elif prev > cur:
            outer.append(Corner(prev, i, "outer"))
            inner.append(Corner(cur, i, "inner"))
    return inner, outer


def inner_corners(lam):
    return corners(lam)[0]


def outer_corners(lam):
    return corners(lam)[1]


def box_weight(x, y, which_u="u"):
    """The weight u q1^x q2^y of a box with bottom-left corner (x, y)."""
    if x < 0 or y < 0:
        raise ValueError("box coordinates must be non-negative")
    if which_u == "u":
        return Monomial(2 * x, 2 * y, 1, 0)
    if which_u == "up":
        return Monomial(2 * x, 2 * y, 0, 1)
    raise ValueError("which_u must be 'u' or 'up'")


def addable_boxes(lam):
    """Positions (x, y) where a box can be added (the inner corners)."""
    inner, _ = corners(lam)
    return [(c.x, c.y) for c in inner]


def removable_boxes(lam):
    """Positions (x, y) of removable boxes."""
    lam = normalize_partition(lam)
    out = []
    for i, l in enumerate(lam):
        nxt = lam[i + 1] if i + 1 < len(lam) else 0
        if l > nxt:
            out.append((l - 1, i))
    return out


def add_box(lam, x, y):
    lam = list(normalize_partition(lam))
    while len(lam) <= y:
        lam.append(0)
    lam[y] += 1
    assert lam[y] == x + 1
    return normalize_partition(lam)


def remove_box(lam, x, y):
    lam = list(normalize_partition(lam))
    lam[y] -= 1
    assert lam[y] == x
    return normalize_partition(lam)


def add_skew_shapes(mu, nboxes):
    """All lam with mu contained in lam and |lam \\ mu| = nboxes."""
    shapes = {normalize_partition(mu)}
    for _ in range(nboxes):
        nxt = set()
        for lam in shapes:
            for (x, y) in addable_boxes(lam):
                nxt.add(add_box(lam, x, y))
        shapes = nxt
    return sorted(shapes)


def sub_skew_shapes(lam, nboxes):
    """All mu contained in lam with |lam \\ mu| = nboxes."""
    shapes = {normalize_partition(lam)}
    for _ in range(nboxes):
        nxt = set()
        for mu in shapes:
            for (x, y) in removable_boxes(mu):
                nxt.add(remove_box(mu, x, y))
        shapes = nxt
    return sorted(shapes)


# -- convex paths -----------------------------------------------------------


def _slope_key(edge):
    n, m = edge
    if n == 0:
        return (1, 0, n, m)  # vertical edges sort last
    from fractions import Fraction
    return (0, Fraction(m, n), n, m)


@dataclass(frozen=True)
class ConvexPath:
    """A slope-sorted multiset of edges (n, m) in the upper half lattice
    Z^2_+ = {n > 0} u {n = 0, m > 0}; equal-slope edges are kept in a
    canonical (n, m) order, which is immaterial for the product P_v."""

    edges: tuple

    @staticmethod
    def make(edges):
        edges = tuple(tuple(e) for e in edges)
        for n, m in edges:
            if not (n > 0 or (n == 0 and m > 0)):
                raise ValueError(f"edge {(n, m)} outside the upper half lattice")
        return ConvexPath(tuple(sorted(edges, key=_slope_key)))

    def size(self):
        return sum(n for n, _ in self.edges)

    def vertical_part(self):
        return tuple(sorted((m for n, m in self.edges if n == 0), reverse=True))

    def star_part(self):
        return ConvexPath(tuple(e for e in self.edges if e[0] > 0))

    def is_star(self):
        return all(n > 0 for n, _ in self.edges)

    def multiplicity_factorial(self):
        out = 1
        for _, group in itertools.groupby(self.edges):
            out *= factorial(len(list(group)))
        return out

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return len(self.edges)


def enumerate_convex_paths(size_bound, vertical_bound, star,
                           max_vertical_edges=None):
    """All convex (star: excluding vertical edges) paths with total
    horizontal extent sum(n_i) <= size_bound and every |m_i| <=
    vertical_bound.  Vertical edges, when allowed, have height and count
    bounded by vertical_bound (count overridable)."""
    if size_bound < 0 or vertical_bound < 0:
        raise ValueError("bounds must be non-negative")
    edge_pool = [(n, m) for n in range(1, size_bound + 1)
                 for m in range(-vertical_bound, vertical_bound + 1)]
    paths = set()

    def rec(remaining, chosen, pool_idx):
        paths.add(ConvexPath.make(chosen))
        for idx in range(pool_idx, len(edge_pool)):
            n, m = edge_pool[idx]
            if n <= remaining:
                chosen.append((n, m))
                rec(remaining - n, chosen, idx)
                chosen.pop()

    rec(size_bound, [], 0)
    if not star:
        vmax = vertical_bound if max_vertical_edges is None else max_vertical_edges
        verticals = []
        for count in range(vmax + 1):
            for combo in itertools.combinations_with_replacement(
                    range(1, vertical_bound + 1), count):
                verticals.append(tuple((0, m) for m in combo))
        paths = {ConvexPath.make(p.edges + v) for p in paths for v in verticals}
    return sorted(paths, key=lambda p: (p.size(), len(p.edges), p.edges))


def epsilon(n, m):
    """-1 on the open second/fourth quadrants together with the horizontal
    axis, 0 otherwise (the vertical axis included in the 0 case)."""
    if n == 0 and m == 0:
        raise ValueError("epsilon undefined at the origin")
    if n == 0:
        return 0
    if m == 0:
        return -1
    return -1 if (n > 0) != (m > 0) else 0


@lru_cache(maxsize=None)
def _edge_weight(n, m):
    d = gcd(abs(n), abs(m))
    return fe(d) * heis_weight(d)


def z_v(v):
    """v! * prod_i d_i (q1^{d_i/2}-q1^{-d_i/2})(q2^{d_i/2}-q2^{-d_i/2}) /
    (q^{d_i/2}-q^{-d_i/2}) with d_i = gcd(n_i, m_i)."""
    if not isinstance(v, ConvexPath):
        v = ConvexPath.make(v)
    out = fe(v.multiplicity_factorial())
    for n, m in v.edges:
        out = out * _edge_weight(n, m)
    return out


def z_partition(nbar):
    """The Heisenberg normalization: z for the vertical path with parts nbar."""
    nbar = normalize_partition(nbar)
    return z_v(ConvexPath.make([(0, m) for m in nbar]))

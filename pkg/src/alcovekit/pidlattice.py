"""Univariate lattice linear algebra: the principal-ideal-domain route.

Over k[y] every submodule of a free module is free, and triangular
elimination with extended-gcd pivots replaces Groebner machinery.  This
is an independent implementation kept deliberately separate from the
Buchberger route so the two can cross-check each other.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .polys import Poly, p_add, p_deg, p_is_zero, p_mul, p_scale, p_sub

Vec = Tuple[Poly, ...]


def u_divmod(a: Poly, b: Poly, K):
    """Division with remainder of univariate polynomials."""
    if p_is_zero(b):
        raise ZeroDivisionError("univariate division by zero")
    q: Poly = {}
    r = dict(a)
    db = p_deg(b)
    lb = b[(db,)]
    while r and p_deg(r) >= db:
        dr = p_deg(r)
        c = K.div(r[(dr,)], lb)
        q[(dr - db,)] = c
        r = p_sub(r, {(dr - db + e[0],): K.mul(c, bc) for e, bc in b.items()}, K)
    return q, r


def u_xgcd(a: Poly, b: Poly, K):
    """(g, u, v) with u*a + v*b = g, g monic (or zero)."""
    nv1 = {(0,): K.one}
    r0, r1 = dict(a), dict(b)
    s0, s1 = dict(nv1), {}
    t0, t1 = {}, dict(nv1)
    while r1:
        q, r = u_divmod(r0, r1, K)
        r0, r1 = r1, r
        s0, s1 = s1, p_sub(s0, p_mul(q, s1, K), K)
        t0, t1 = t1, p_sub(t0, p_mul(q, t1, K), K)
    if r0:
        lead = r0[(p_deg(r0),)]
        li = K.inv(lead)
        r0 = p_scale(r0, li, K)
        s0 = p_scale(s0, li, K)
        t0 = p_scale(t0, li, K)
    return r0, s0, t0


def _first_nonzero(v: Vec):
    for i, p in enumerate(v):
        if not p_is_zero(p):
            return i
    return None


def triangular_basis(gens: Sequence[Vec], n: int, K) -> List[Vec]:
    """Echelon basis: one vector per pivot row, pivots monic, rows of any
    other basis vector vanish above their pivot."""
    rows: List[Vec] = [tuple(dict(p) for p in v) for v in gens
                       if _first_nonzero(v) is not None]
    basis: List[Vec] = []
    for r in range(n):
        active = [v for v in rows if _first_nonzero(v) == r]
        rest = [v for v in rows if _first_nonzero(v) != r]
        if not active:
            rows = rest
            continue
        pivot = active[0]
        for v in active[1:]:
            g, u, w = u_xgcd(pivot[r], v[r], K)
            combo = tuple(p_add(p_mul(u, a, K), p_mul(w, b, K), K)
                          for a, b in zip(pivot, v))
            # leftovers have a zero entry at r; they re-enter at later rows
            for old in (pivot, v):
                q, rem = u_divmod(old[r], g, K)
                assert p_is_zero(rem)
                left = tuple(p_sub(b, p_mul(q, c, K), K) for b, c in zip(old, combo))
                if _first_nonzero(left) is not None:
                    rest.append(left)
            pivot = combo
        lead = pivot[r][(p_deg(pivot[r]),)]
        pivot = tuple(p_scale(p, K.inv(lead), K) for p in pivot)
        basis.append(pivot)
        rows = rest
    return basis


def pid_member(vec: Vec, basis: Sequence[Vec], K) -> bool:
    v = tuple(dict(p) for p in vec)
    for b in basis:
        r = _first_nonzero(b)
        if p_is_zero(v[r]):
            continue
        q, rem = u_divmod(v[r], b[r], K)
        if not p_is_zero(rem):
            return False
        v = tuple(p_sub(a, p_mul(q, c, K), K) for a, c in zip(v, b))
    return _first_nonzero(v) is None


def pid_intersect(gens1: Sequence[Vec], gens2: Sequence[Vec], n: int, K) -> List[Vec]:
    """Intersection via elimination in a doubled module: triangularize
    {(g,g)} + {(h,0)} with the first block's rows as leading rows."""
    zero = tuple({} for _ in range(n))
    ext: List[Vec] = []
    for g in gens1:
        ext.append(tuple(g) + tuple(g))
    for h in gens2:
        ext.append(tuple(h) + zero)
    tri = triangular_basis(ext, 2 * n, K)
    out = []
    for v in tri:
        if _first_nonzero(v) >= n:
            out.append(v[n:])
    return out


def pid_colon(gens: Sequence[Vec], f: Poly, n: int, K) -> List[Vec]:
    f_units = []
    for i in range(n):
        vec: List[Poly] = [{} for _ in range(n)]
        vec[i] = dict(f)
        f_units.append(tuple(vec))
    inter = pid_intersect(gens, f_units, n, K)
    out = []
    for v in inter:
        divided = []
        for p in v:
            if p_is_zero(p):
                divided.append({})
            else:
                q, r = u_divmod(p, f, K)
                assert p_is_zero(r)
                divided.append(q)
        out.append(tuple(divided))
    return out


def pid_saturate(gens: Sequence[Vec], forms: Sequence[Poly], n: int, K) -> List[Vec]:
    cur = [v for v in gens if _first_nonzero(v) is not None]
    for f in forms:
        while True:
            bigger = pid_colon(cur, f, n, K)
            basis = triangular_basis(cur, n, K)
            if all(pid_member(v, basis, K) for v in bigger):
                break
            cur = bigger
    return cur

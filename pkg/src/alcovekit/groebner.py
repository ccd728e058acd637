"""Groebner bases for submodules of free modules over k[y_1..y_r].

Module elements are dicts ``{(position, monomial): coeff}``.  The term
order is position-over-term with degrevlex on monomials, so leading
terms in high positions certify that low positions are eliminated; that
single order drives normal forms, intersections, colon modules and
saturations.  Scale is small (few variables, short vectors), so plain
Buchberger with full reduction is enough.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .polys import (Mono, Poly, drl_key, mono_div, mono_mul, p_exact_div,
                    p_is_zero)

Term = Tuple[int, Mono]
Elem = Dict[Term, object]


def term_key(t: Term):
    return (-t[0], drl_key(t[1]))


def vec_to_elem(vec: Sequence[Poly]) -> Elem:
    out: Elem = {}
    for pos, poly in enumerate(vec):
        for m, c in poly.items():
            out[(pos, m)] = c
    return out


def elem_to_vec(elem: Elem, n: int) -> Tuple[Poly, ...]:
    vecs: List[Poly] = [dict() for _ in range(n)]
    for (pos, m), c in elem.items():
        vecs[pos][m] = c
    return tuple(vecs)


def e_leading(elem: Elem) -> Term:
    return max(elem, key=term_key)


def e_sub_scaled(target: Elem, src: Elem, mono: Mono, coeff, K) -> None:
    """target -= coeff * y^mono * src, in place."""
    for (pos, m), c in src.items():
        t = (pos, mono_mul(m, mono))
        s = K.sub(target.get(t, K.zero), K.mul(coeff, c))
        if K.is_zero(s):
            target.pop(t, None)
        else:
            target[t] = s


def normal_form(elem: Elem, gb: Sequence[Tuple[Elem, Term]], K,
                want_quotients: bool = False):
    """Fully reduce elem against a (monic) Groebner basis.

    Returns (nf, quotients); quotients[i] is the polynomial multiplier of
    gb[i] when requested, else None.
    """
    rem = dict(elem)
    out: Elem = {}
    quots: List[Poly] = [dict() for _ in gb] if want_quotients else None
    while rem:
        t = e_leading(rem)
        c = rem[t]
        for k, (g, lt) in enumerate(gb):
            if lt[0] != t[0]:
                continue
            q = mono_div(t[1], lt[1])
            if q is None:
                continue
            e_sub_scaled(rem, g, q, c, K)
            if want_quotients:
                s = K.add(quots[k].get(q, K.zero), c)
                if K.is_zero(s):
                    quots[k].pop(q, None)
                else:
                    quots[k][q] = s
            break
        else:
            out[t] = c
            del rem[t]
    return out, quots


def _s_pair(f: Tuple[Elem, Term], g: Tuple[Elem, Term], K) -> Elem:
    (fe, flt), (ge, glt) = f, g
    lcm = tuple(max(a, b) for a, b in zip(flt[1], glt[1]))
    out: Elem = {}
    e_sub_scaled(out, fe, mono_div(lcm, flt[1]), K.neg(K.one), K)
    e_sub_scaled(out, ge, mono_div(lcm, glt[1]), K.one, K)
    return out


def buchberger(gens: Sequence[Elem], K) -> List[Tuple[Elem, Term]]:
    gb: List[Tuple[Elem, Term]] = []
    pairs: List[Tuple[int, int]] = []

    def add(elem: Elem) -> None:
        nf, _ = normal_form(elem, gb, K)
        if not nf:
            return
        lt = e_leading(nf)
        cinv = K.inv(nf[lt])
        nf = {t: K.mul(c, cinv) for t, c in nf.items()}
        idx = len(gb)
        for i, (_, hlt) in enumerate(gb):
            if hlt[0] == lt[0]:
                pairs.append((idx, i))
        gb.append((nf, lt))

    for g in gens:
        if g:
            add(g)
    while pairs:
        i, j = pairs.pop()
        add(_s_pair(gb[i], gb[j], K))
    return gb


def module_gb(gens: Sequence[Sequence[Poly]], K) -> List[Tuple[Elem, Term]]:
    return buchberger([vec_to_elem(v) for v in gens], K)


def member(vec: Sequence[Poly], gb, K) -> bool:
    nf, _ = normal_form(vec_to_elem(vec), gb, K)
    return not nf


def intersect_modules(gens1, gens2, n: int, K) -> List[Tuple[Poly, ...]]:
    """Generators of span(gens1) & span(gens2) inside k[y]^n."""
    zero = tuple(dict() for _ in range(n))
    ext = []
    for g in gens1:
        ext.append(vec_to_elem(tuple(g) + tuple(g)))
    for h in gens2:
        ext.append(vec_to_elem(tuple(h) + zero))
    gb = buchberger(ext, K)
    out = []
    for elem, lt in gb:
        if lt[0] >= n:  # POT: no terms left in the eliminated block
            vec = elem_to_vec(elem, 2 * n)[n:]
            if any(not p_is_zero(p) for p in vec):
                out.append(vec)
    return out


def colon_module(gens, f: Poly, n: int, K) -> List[Tuple[Poly, ...]]:
    """Generators of (span(gens) : f) = {v : f*v in span(gens)}."""
    f_unit_vecs = []
    for i in range(n):
        vec = [dict() for _ in range(n)]
        vec[i] = dict(f)
        f_unit_vecs.append(tuple(vec))
    inter = intersect_modules(gens, f_unit_vecs, n, K)
    return [tuple(p_exact_div(p, f, K) if p else {} for p in v) for v in inter]


def modules_equal(gens1, gens2, K) -> bool:
    gb1 = module_gb(gens1, K)
    gb2 = module_gb(gens2, K)
    return (all(member(v, gb2, K) for v in gens1)
            and all(member(v, gb1, K) for v in gens2))


def saturate_module(gens, linear_forms: Sequence[Poly], n: int, K):
    """Saturate span(gens) by each of the given polynomials in turn.

    Sequential single-pass saturation is enough: saturating by a second
    form cannot destroy saturation by the first.
    """
    cur = [tuple(v) for v in gens if any(not p_is_zero(p) for p in v)]
    for f in linear_forms:
        while True:
            bigger = colon_module(cur, f, n, K)
            gb = module_gb(cur, K)
            if all(member(v, gb, K) for v in bigger):
                break
            cur = bigger
    return cur


def syzygies(gens, n: int, K) -> List[Tuple[Poly, ...]]:
    """Generators of the syzygy module of the given vectors."""
    m = len(gens)
    nv = _nvars(gens)
    one = {(0,) * nv: K.one}
    ext = []
    for i, g in enumerate(gens):
        tail = [dict() for _ in range(m)]
        tail[i] = dict(one)
        ext.append(vec_to_elem(tuple(g) + tuple(tail)))
    gb = buchberger(ext, K)
    out = []
    for elem, lt in gb:
        if lt[0] >= n:
            out.append(elem_to_vec(elem, n + m)[n:])
    return out


def _nvars(gens) -> int:
    for v in gens:
        for p in v:
            for mono in p:
                return len(mono)
    return 1

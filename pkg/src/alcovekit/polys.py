"""Exact multivariate polynomials and Laurent polynomials in v.

Polynomials are plain dicts ``{exponent_tuple: coefficient}`` with zero
coefficients never stored; the empty dict is the zero polynomial.  The
grading doubles the polynomial degree: the variables are a basis of the
coweight lattice and sit in degree 2.

Laurent polynomials in the grading variable v are dicts ``{exp: int}``
over Z; characters and graded ranks take values there.
"""

from __future__ import annotations

from typing import Dict, Tuple

Mono = Tuple[int, ...]
Poly = Dict[Mono, object]


# --- monomials ---------------------------------------------------------

def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))

def mono_div(a: Mono, b: Mono):
    """a / b, or None if b does not divide a."""
    q = tuple(x - y for x, y in zip(a, b))
    return None if any(x < 0 for x in q) else q

def mono_deg(a: Mono) -> int:
    return sum(a)

def mono_one(nvars: int) -> Mono:
    return (0,) * nvars

def drl_key(a: Mono):
    """Sort key realizing degrevlex (bigger key = bigger monomial)."""
    return (sum(a), tuple(-a[j] for j in reversed(range(len(a)))))


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples of total degree exactly d."""
    if nvars == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest


# --- polynomial arithmetic ---------------------------------------------

def p_zero() -> Poly:
    return {}

def p_const(c, nvars: int, K) -> Poly:
    return {} if K.is_zero(c) else {mono_one(nvars): c}

def p_linear(coeffs, K) -> Poly:
    """Linear form sum(coeffs[j] * y_j) from an integer vector."""
    n = len(coeffs)
    out: Poly = {}
    for j, c in enumerate(coeffs):
        fc = K.of(c)
        if not K.is_zero(fc):
            e = [0] * n
            e[j] = 1
            out[tuple(e)] = fc
    return out

def p_add(f: Poly, g: Poly, K) -> Poly:
    out = dict(f)
    for e, c in g.items():
        s = K.add(out.get(e, K.zero), c)
        if K.is_zero(s):
            out.pop(e, None)
        else:
            out[e] = s
    return out

def p_neg(f: Poly, K) -> Poly:
    return {e: K.neg(c) for e, c in f.items()}

def p_sub(f: Poly, g: Poly, K) -> Poly:
    return p_add(f, p_neg(g, K), K)

def p_scale(f: Poly, c, K) -> Poly:
    if K.is_zero(c):
        return {}
    return {e: K.mul(v, c) for e, v in f.items()}

def p_mul_term(f: Poly, e: Mono, c, K) -> Poly:
    if K.is_zero(c):
        return {}
    return {mono_mul(e0, e): K.mul(c0, c) for e0, c0 in f.items()}

def p_mul(f: Poly, g: Poly, K) -> Poly:
    out: Poly = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = mono_mul(e1, e2)
            s = K.add(out.get(e, K.zero), K.mul(c1, c2))
            if K.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
    return out

def p_pow(f: Poly, n: int, nvars: int, K) -> Poly:
    out = p_const(K.one, nvars, K)
    for _ in range(n):
        out = p_mul(out, f, K)
    return out

def p_is_zero(f: Poly) -> bool:
    return not f

def p_eq(f: Poly, g: Poly) -> bool:
    return f == g

def p_deg(f: Poly) -> int:
    """Polynomial degree; -1 for the zero polynomial."""
    return max((mono_deg(e) for e in f), default=-1)

def p_is_homogeneous(f: Poly) -> bool:
    degs = {mono_deg(e) for e in f}
    return len(degs) <= 1

def p_homog_part(f: Poly, d: int) -> Poly:
    return {e: c for e, c in f.items() if mono_deg(e) == d}

def p_leading(f: Poly):
    """(monomial, coeff) of the degrevlex-leading term."""
    e = max(f, key=drl_key)
    return e, f[e]

def p_exact_div(f: Poly, g: Poly, K) -> Poly:
    """Exact division f / g; raises ValueError if g does not divide f."""
    if p_is_zero(g):
        raise ZeroDivisionError("division by zero polynomial")
    out: Poly = {}
    rem = dict(f)
    ge, gc = p_leading(g)
    gcinv = K.inv(gc)
    while rem:
        e, c = p_leading(rem)
        q = mono_div(e, ge)
        if q is None:
            raise ValueError("polynomial division is not exact")
        qc = K.mul(c, gcinv)
        out[q] = K.add(out.get(q, K.zero), qc)
        rem = p_sub(rem, p_mul_term(g, q, qc, K), K)
    return {e: c for e, c in out.items() if not K.is_zero(c)}

def p_divides(g: Poly, f: Poly, K) -> bool:
    try:
        p_exact_div(f, g, K)
        return True
    except ValueError:
        return False

def p_str(f: Poly, names=None) -> str:
    if not f:
        return "0"
    terms = []
    for e in sorted(f, key=drl_key, reverse=True):
        c = f[e]
        factors = []
        for j, k in enumerate(e):
            if k:
                nm = names[j] if names else f"y{j}"
                factors.append(nm if k == 1 else f"{nm}^{k}")
        body = "*".join(factors)
        terms.append(f"{c}*{body}" if body else f"{c}")
    return " + ".join(terms)


# --- Laurent polynomials in v ------------------------------------------

LaurentV = Dict[int, int]

def lv_zero() -> LaurentV:
    return {}

def lv_const(c: int) -> LaurentV:
    return {} if c == 0 else {0: c}

def lv_v(exp: int = 1) -> LaurentV:
    return {exp: 1}

def lv_add(a: LaurentV, b: LaurentV) -> LaurentV:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s == 0:
            out.pop(e, None)
        else:
            out[e] = s
    return out

def lv_mul(a: LaurentV, b: LaurentV) -> LaurentV:
    out: LaurentV = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
    return out

def lv_shift(a: LaurentV, k: int) -> LaurentV:
    """Multiply by v^k."""
    return {e + k: c for e, c in a.items()}

def lv_eval1(a: LaurentV) -> int:
    return sum(a.values())

def lv_str(a: LaurentV) -> str:
    if not a:
        return "0"
    parts = []
    for e in sorted(a):
        c = a[e]
        if e == 0:
            parts.append(f"{c}")
        elif e == 1:
            parts.append("v" if c == 1 else f"{c}v")
        else:
            parts.append(f"v^{e}" if c == 1 else f"{c}v^{e}")
    return " + ".join(parts)

"""Direct-sum decomposition through degree-zero idempotents.

Nonzero idempotent endomorphisms live in degree zero, so a capped basis
of degree-zero endomorphisms sees every splitting.  The basis is closed
into an abstract algebra via structure constants; minimal polynomials of
deterministic candidates are split at rational eigenvalues and the
resulting spectral idempotents cut the object into summands.  Images of
idempotents are realized by solving for an explicit column basis, so
both summands come back as honest objects with induced lattices.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import linalg
from .alcove import Alcove, alcove_up
from .homs import KMorphism, hom_space, identity_morphism
from .kcategory import KObject, SplitError
from .lattice import (CapError, Lattice, LocalizedElem, coroot_poly,
                      localized_vector_to_poly, poly_matrix_rank)
from .pidlattice import u_divmod, u_xgcd
from .polys import (Poly, p_const, p_exact_div, p_is_zero, p_mul, p_scale,
                    p_sub)

MAX_TIER = 2


def degree0_endos(m: KObject, tier: int) -> List[KMorphism]:
    return hom_space(m, m, denom_tier=tier, degree0_only=True)


# ---------------------------------------------------------------------------
# abstract algebra of endomorphisms
# ---------------------------------------------------------------------------

class EndoAlgebra:
    """Finite-dimensional algebra spanned by a basis of endomorphisms."""

    def __init__(self, m: KObject, basis: List[KMorphism]):
        self.m = m
        self.K = m.K
        self.basis = basis
        self.dim = len(basis)
        self._ref = self._reference_denominator()
        self._coords = [self._coordinates(f) for f in basis]
        self._vars = sorted({k for c in self._coords for k in c}, key=repr)
        self.id_coords = self._express(identity_morphism(m))
        if self.id_coords is None:
            raise CapError("identity not in the capped endomorphism space")
        self._mult_table: Dict[Tuple[int, int], Optional[list]] = {}

    def _reference_denominator(self):
        n = self.m.rs.nroots
        ref = [0] * n
        for f in self.basis:
            for mat in f.matrices.values():
                for row in mat:
                    for x in row:
                        for i in range(n):
                            ref[i] = max(ref[i], 2 * x.den[i])
        return tuple(ref)

    def _coordinates(self, f: KMorphism):
        rs, K = self.m.rs, self.m.K
        out = {}
        for a, mat in f.matrices.items():
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x.is_zero():
                        continue
                    num = x.num
                    for r in range(rs.nroots):
                        form = coroot_poly(rs, r, K)
                        for _ in range(self._ref[r] - x.den[r]):
                            num = p_mul(num, form, K)
                    for mono, c in num.items():
                        key = (a, i, j, mono)
                        out[key] = K.add(out.get(key, K.zero), c)
        return {k: v for k, v in out.items() if not K.is_zero(v)}

    def _express(self, f: KMorphism):
        """Coordinates of f in the basis, or None if outside its span."""
        target = self._coordinates(f)
        rows = []
        rhs = []
        keys = sorted(set(target) | {k for c in self._coords for k in c}, key=repr)
        for key in keys:
            rows.append({i: self._coords[i].get(key, self.K.zero)
                         for i in range(self.dim)
                         if key in self._coords[i]})
            rhs.append(target.get(key, self.K.zero))
        sol = linalg.solve(rows, rhs, list(range(self.dim)), self.K)
        if sol is None:
            return None
        vec = [sol.get(i, self.K.zero) for i in range(self.dim)]
        return vec

    def product(self, i: int, j: int):
        """Coordinates of basis[i] . basis[j], None if the cap is too small."""
        key = (i, j)
        if key not in self._mult_table:
            comp = self.basis[i].compose(self.basis[j])
            self._mult_table[key] = self._express(comp)
        return self._mult_table[key]

    def closed(self) -> bool:
        return all(self.product(i, j) is not None
                   for i in range(self.dim) for j in range(self.dim))

    def mult(self, x: List, y: List) -> List:
        K = self.K
        out = [K.zero] * self.dim
        for i, xi in enumerate(x):
            if K.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if K.is_zero(yj):
                    continue
                pij = self.product(i, j)
                c = K.mul(xi, yj)
                for k, v in enumerate(pij):
                    out[k] = K.add(out[k], K.mul(c, v))
        return out

    def power_sequence(self, x: List, count: int) -> List[List]:
        out = [list(self.id_coords)]
        cur = list(self.id_coords)
        for _ in range(count):
            cur = self.mult(cur, x)
            out.append(cur)
        return out

    def min_poly(self, x: List) -> List:
        """Coefficients c_0..c_d (monic, c_d = 1) of the minimal polynomial."""
        K = self.K
        powers = self.power_sequence(x, self.dim)
        for d in range(1, self.dim + 1):
            rows = []
            for pos in range(self.dim):
                rows.append({k: powers[k][pos] for k in range(d)
                             if not K.is_zero(powers[k][pos])})
            rhs = [K.neg(powers[d][pos]) for pos in range(self.dim)]
            sol = linalg.solve(rows, rhs, list(range(d)), K)
            if sol is not None:
                return [sol.get(k, K.zero) for k in range(d)] + [K.one]
        raise AssertionError("minimal polynomial search exhausted the dimension")

    def eval_poly(self, coeffs: List, x: List) -> List:
        K = self.K
        out = [K.zero] * self.dim
        powers = self.power_sequence(x, len(coeffs) - 1)
        for c, p in zip(coeffs, powers):
            if K.is_zero(c):
                continue
            for k, v in enumerate(p):
                out[k] = K.add(out[k], K.mul(c, v))
        return out

    def to_morphism(self, coords: List) -> KMorphism:
        out = None
        for c, f in zip(coords, self.basis):
            if self.K.is_zero(c):
                continue
            term = f.scale(c)
            out = term if out is None else out.add(term)
        if out is None:
            return identity_morphism(self.m).scale(self.K.zero)
        return out


def _field_roots(coeffs: List, K) -> List:
    """Roots of a monic univariate polynomial in the coefficient field."""
    if getattr(K, "char", 0) == 0:
        from fractions import Fraction
        den = 1
        for c in coeffs:
            den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
        ints = [int(Fraction(c) * den) for c in coeffs]
        a0 = ints[0]
        an = ints[-1]
        roots = []
        if a0 == 0:
            roots.append(Fraction(0))
            return roots + [r for r in _field_roots(
                [K.of(Fraction(x, den)) for x in ints[1:]], K) if r != 0]
        for p in _divisors(abs(a0)):
            for q in _divisors(abs(an)):
                for sign in (1, -1):
                    r = Fraction(sign * p, q)
                    if _poly_eval(coeffs, K.of(r), K) == 0:
                        if r not in roots:
                            roots.append(r)
        return roots
    return [a for a in range(K.p) if K.is_zero(_poly_eval(coeffs, a, K))]


def _poly_eval(coeffs, x, K):
    acc = K.zero
    for c in reversed(coeffs):
        acc = K.add(K.mul(acc, x), c)
    return acc


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int):
    out = [d for d in range(1, abs(n) + 1) if n % d == 0]
    return out or [1]


def _split_min_poly(coeffs: List, root, K):
    """coeffs = (t - root)^e * g with g(root) != 0; returns ((t-root)^e, g)
    as univariate dict polynomials."""
    lin = {(1,): K.one, (0,): K.neg(K.of(root))}
    rest = {(k,): c for k, c in enumerate(coeffs) if not K.is_zero(c)}
    factor = {(0,): K.one}
    while True:
        q, r = u_divmod(rest, lin, K)
        if r:
            break
        rest = q
        factor = p_mul(factor, lin, K)
    return factor, rest


def find_idempotent(alg: EndoAlgebra) -> Optional[List]:
    """A nontrivial idempotent's coordinates, or None."""
    K = alg.K
    candidates = []
    for i in range(alg.dim):
        candidates.append([K.one if k == i else K.zero for k in range(alg.dim)])
    for i, j in combinations(range(alg.dim), 2):
        candidates.append([K.add(a, b) for a, b in zip(candidates[i], candidates[j])])
    for x in candidates:
        coeffs = alg.min_poly(x)
        if len(coeffs) <= 2:
            continue
        for root in _field_roots(coeffs, K):
            factor, rest = _split_min_poly(coeffs, root, K)
            if not rest or (len(rest) == 1 and (0,) in rest):
                continue  # the whole polynomial is (t-root)^e
            g, u, v = u_xgcd(factor, rest, K)
            if len(g) != 1 or (0,) not in g:
                continue
            ginv = K.inv(g[(0,)])
            # idempotent = (v * rest)(x) / g   (projector onto the root part)
            proj_poly = p_scale(p_mul(v, rest, K), ginv, K)
            coeffs_list = [proj_poly.get((k,), K.zero)
                           for k in range(max((e[0] for e in proj_poly), default=0) + 1)]
            e = alg.eval_poly(coeffs_list, x)
            if all(K.is_zero(c) for c in e):
                continue
            if all(K.eq(a, b) for a, b in zip(e, alg.id_coords)):
                continue
            e2 = alg.mult(e, e)
            if all(K.eq(a, b) for a, b in zip(e2, e)):
                return e
    return None


# ---------------------------------------------------------------------------
# image extraction
# ---------------------------------------------------------------------------

def _le_from_ratio(num: Poly, den: Poly, rs, K) -> LocalizedElem:
    """num/den as a localized scalar; den must be coroot monomial times a
    constant up to exact division into num."""
    exps = [0] * rs.nroots
    den = dict(den)
    for i in range(rs.nroots):
        form = coroot_poly(rs, i, K)
        while True:
            try:
                den = p_exact_div(den, form, K)
                exps[i] += 1
            except ValueError:
                break
    if len(den) == 1 and (0,) * rs.rank in den:
        c = den[(0,) * rs.rank]
        return LocalizedElem(rs, K, p_scale(num, K.inv(c), K), tuple(exps))
    try:
        reduced = p_exact_div(num, den, K)
    except ValueError as exc:
        raise CapError("idempotent image is not defined over the base ring") from exc
    return LocalizedElem(rs, K, reduced, tuple(exps))


def _matrix_common_poly(mat: List[List[LocalizedElem]], rs, K):
    """(P, exps): polynomial matrix with mat = P / prod(coroot^exps)."""
    n = rs.nroots
    exps = [0] * n
    for row in mat:
        for x in row:
            for i in range(n):
                exps[i] = max(exps[i], x.den[i])
    out = []
    for row in mat:
        orow = []
        for x in row:
            num = dict(x.num)
            for i in range(n):
                form = coroot_poly(rs, i, K)
                for _ in range(exps[i] - x.den[i]):
                    num = p_mul(num, form, K)
            orow.append(num)
        out.append(orow)
    return out, tuple(exps)


def _det(mat, K, rank_vars) -> Poly:
    n = len(mat)
    if n == 0:
        return {(0,) * rank_vars: K.one}
    if n == 1:
        return mat[0][0]
    out: Poly = {}
    sign = K.one
    from .polys import p_add
    for j in range(n):
        sub = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = p_mul(mat[0][j], _det(sub, K, rank_vars), K)
        out = p_add(out, p_scale(term, sign, K), K)
        sign = K.neg(sign)
    return out


def _image_basis(e_mat: List[List[LocalizedElem]], rs, K):
    """(U, V) with e = U . V, V . U = identity; U's columns form a basis of
    the image of the idempotent matrix e."""
    r_full = len(e_mat)
    if r_full == 0:
        return [], []
    P, _ = _matrix_common_poly(e_mat, rs, K)
    cols = list(range(len(P[0])))
    chosen: List[int] = []
    current_rank = 0
    for c in cols:
        trial = chosen + [c]
        mat = [[P[i][j] for i in range(r_full)] for j in trial]
        if poly_matrix_rank(mat, K) > current_rank:
            chosen.append(c)
            current_rank += 1
    rank = current_rank
    if rank == 0:
        return [], []
    # row subset with invertible minor
    row_sel = None
    for rows_try in combinations(range(r_full), rank):
        sub = [[P[i][j] for j in chosen] for i in rows_try]
        if not p_is_zero(_det(sub, K, rs.rank)):
            row_sel = rows_try
            break
    if row_sel is None:
        raise AssertionError("rank computation is inconsistent")
    subdet = _det([[P[i][j] for j in chosen] for i in row_sel], K, rs.rank)
    U = [[e_mat[i][j] for j in chosen] for i in range(r_full)]
    V: List[List[LocalizedElem]] = [[None] * len(P[0]) for _ in range(rank)]
    for c in range(len(P[0])):
        rhs = [P[i][c] for i in row_sel]
        for k in range(rank):
            m = [[P[i][chosen[jj]] if jj != k else rhs[ii]
                  for jj in range(rank)]
                 for ii, i in enumerate(row_sel)]
            numer = _det([[m[ii][jj] for jj in range(rank)] for ii in range(rank)],
                         K, rs.rank)
            V[k][c] = _le_from_ratio(numer, subdet, rs, K)
    # verify U . V = e exactly
    for i in range(r_full):
        for c in range(len(P[0])):
            acc = LocalizedElem(rs, K, {})
            for k in range(rank):
                acc = acc + U[i][k] * V[k][c]
            if not acc.eq(e_mat[i][c]):
                raise CapError("idempotent image basis verification failed")
    return U, V


def lattice_from_localized(rs, K, ambient: int, vectors, extra_pow: int,
                           loc_root: int, engine=None) -> Lattice:
    cleared = []
    for vec in vectors:
        pv, apow = localized_vector_to_poly(vec, rs, K, loc_root)
        cleared.append((pv, apow + extra_pow))
    if not cleared:
        return Lattice(rs, K, ambient, [], loc_root=loc_root, engine=engine)
    kmax = max(ap for _, ap in cleared)
    alpha = coroot_poly(rs, loc_root, K)
    gens = []
    for pv, ap in cleared:
        v = list(pv)
        for _ in range(kmax - ap):
            v = [p_mul(p, alpha, K) for p in v]
        gens.append(tuple(v))
    return Lattice(rs, K, ambient, gens, kmax, loc_root=loc_root, engine=engine)


def split_by_idempotent(m: KObject, e: KMorphism) -> Tuple[KObject, KObject]:
    """Summands carried by e and 1 - e, with induced lattices."""
    one = identity_morphism(m)
    comp = one.add(e.scale(m.K.neg(m.K.one)))
    return gauge_normalize(_project(m, e)), gauge_normalize(_project(m, comp))


def gauge_normalize(m: KObject) -> KObject:
    """Rescale each alcove's basis by a coroot-monomial unit stripping the
    common content of all lattice entries in that alcove's blocks.  The
    result is isomorphic to the input and keeps representatives small."""
    rs, K = m.rs, m.K
    nfm = rs.nroots
    content: Dict[Alcove, list] = {a: None for a in m.ranks}

    def form_content(p: Poly, form: Poly) -> int:
        k = 0
        while not p_is_zero(p):
            try:
                p = p_exact_div(p, form, K)
                k += 1
            except ValueError:
                break
        return k

    forms = [coroot_poly(rs, i, K) for i in range(nfm)]
    for (a, i), lat in m.lattices.items():
        up = alcove_up(i, a)
        ra = m.rank_at(a)
        for g in lat.gens:
            for alc, chunk in ((a, g[:ra]), (up, g[ra:])):
                if alc not in content:
                    continue
                for p in chunk:
                    if p_is_zero(p):
                        continue
                    vec = [form_content(p, f) for f in forms]
                    cur = content[alc]
                    content[alc] = vec if cur is None else [
                        min(x, y) for x, y in zip(cur, vec)]
    content = {a: v for a, v in content.items() if v and any(v)}
    if not content:
        return m
    lattices = {}
    for (a, i), lat in m.lattices.items():
        up = alcove_up(i, a)
        ra = m.rank_at(a)
        gens = []
        for g in lat.gens:
            vec = []
            for alc, chunk in ((a, g[:ra]), (up, g[ra:])):
                exps = content.get(alc)
                for p in chunk:
                    if exps and not p_is_zero(p):
                        for f, k in zip(forms, exps):
                            for _ in range(k):
                                p = p_exact_div(p, f, K)
                    vec.append(p)
            gens.append(tuple(vec))
        lattices[(a, i)] = Lattice(rs, K, lat.ambient, gens, lat.alpha_pow,
                                   loc_root=i)
    return KObject(rs, K, dict(m.ranks), lattices)


def _project(m: KObject, e: KMorphism) -> KObject:
    rs, K = m.rs, m.K
    incl: Dict[Alcove, list] = {}
    proj: Dict[Alcove, list] = {}
    ranks = {}
    for a in m.support():
        U, V = _image_basis(e.matrix(a), rs, K)
        r = len(U[0]) if U and U[0] else 0
        if r:
            ranks[a] = r
            incl[a] = U
            proj[a] = V
    lattices = {}
    for (a, i), lat in m.lattices.items():
        up = alcove_up(i, a)
        ra_new, ru_new = ranks.get(a, 0), ranks.get(up, 0)
        if ra_new + ru_new == 0:
            continue
        ra_old = m.rank_at(a)
        vecs = []
        for g in lat.gens:
            img = []
            for mat, chunk in ((proj.get(a, []), g[:ra_old]),
                               (proj.get(up, []), g[ra_old:])):
                for row in mat:
                    acc = LocalizedElem(rs, K, {})
                    for x, p in zip(row, chunk):
                        acc = acc + x * LocalizedElem(rs, K, p)
                    img.append(acc)
            if any(not x.is_zero() for x in img):
                vecs.append(img)
        lattices[(a, i)] = lattice_from_localized(rs, K, ra_new + ru_new, vecs,
                                                  lat.alpha_pow, i)
    return KObject(rs, K, ranks, lattices)


# ---------------------------------------------------------------------------
# full decomposition
# ---------------------------------------------------------------------------

def _coupling_components(m: KObject) -> List[set]:
    """Connected components of the support under lattice coupling."""
    supp = m.support()
    parent = {a: a for a in supp}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for (a, i), lat in m.lattices.items():
        up = alcove_up(i, a)
        ra = m.rank_at(a)
        if ra == 0 or m.rank_at(up) == 0:
            continue
        couples = any(
            any(not p_is_zero(p) for p in g[:ra])
            and any(not p_is_zero(p) for p in g[ra:])
            for g in lat.gens)
        if couples:
            union(a, up)
    groups: Dict[Alcove, set] = {}
    for a in supp:
        groups.setdefault(find(a), set()).add(a)
    return list(groups.values())


def _indicator_morphism(m: KObject, alcoves: set) -> KMorphism:
    from .homs import morphism_from_constants
    vals = {}
    for a in m.support():
        r = m.rank_at(a)
        c = 1 if a in alcoves else 0
        vals[a] = [[c if i == j else 0 for j in range(r)] for i in range(r)]
    return morphism_from_constants(m, m, vals)


def decompose(m: KObject, max_tier: int = MAX_TIER) -> List[KObject]:
    """Indecomposable summands of m (no particular order of copies)."""
    if not m.ranks:
        return []
    comps = _coupling_components(m)
    if len(comps) > 1:
        out = []
        rest = m
        for group in sorted(comps, key=lambda g: min(a.sort_key() for a in g))[:-1]:
            e = _indicator_morphism(rest, group)
            piece, rest = split_by_idempotent(rest, e)
            out.extend(decompose(piece, max_tier))
        out.extend(decompose(rest, max_tier))
        return out
    for tier in range(0, max_tier + 1):
        basis = degree0_endos(m, tier)
        if len(basis) == 1:
            if tier >= 1:
                return [m]
            continue
        alg = EndoAlgebra(m, basis)
        if not alg.closed():
            continue
        e_coords = find_idempotent(alg)
        if e_coords is None:
            if tier >= 1:
                if _is_local_algebra(alg):
                    return [m]
                raise SplitError(
                    "endomorphism algebra is not local but no idempotent was found")
            continue
        e = alg.to_morphism(e_coords)
        n1, n2 = split_by_idempotent(m, e)
        return decompose(n1, max_tier) + decompose(n2, max_tier)
    return [m]


def _is_local_algebra(alg: EndoAlgebra) -> bool:
    """Characteristic-zero radical test: the algebra is local iff the
    trace form has corank dim - 1."""
    K = alg.K
    if K.char != 0:
        return False
    trace = {}
    for i in range(alg.dim):
        for j in range(i, alg.dim):
            prod = alg.mult([K.one if k == i else K.zero for k in range(alg.dim)],
                            [K.one if k == j else K.zero for k in range(alg.dim)])
            tr = K.zero
            # trace of left multiplication by prod
            for b in range(alg.dim):
                col = alg.mult(prod, [K.one if k == b else K.zero
                                      for k in range(alg.dim)])
                tr = K.add(tr, col[b])
            trace[(i, j)] = trace[(j, i)] = tr
    rows = []
    for i in range(alg.dim):
        rows.append({j: trace[(i, j)] for j in range(alg.dim)
                     if not K.is_zero(trace[(i, j)])})
    corank = len(linalg.nullspace(rows, list(range(alg.dim)), K))
    return corank == alg.dim - 1

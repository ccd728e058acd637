"""Morphisms between combinatorial objects and their hom spaces.

A morphism is a per-alcove matrix over the fully localized ring whose
blockwise application carries every source lattice into the target
lattice.  Hom spaces are cut out by linear conditions on an ansatz with
a fixed coroot-monomial denominator; normal forms against the target
lattices are linear in the input, so the whole solve is exact sparse
linear algebra over the coefficient field.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .alcove import Alcove, alcove_up
from .kcategory import KObject
from .lattice import Lattice, LocalizedElem, coroot_poly
from .polys import (Poly, mono_deg, mono_mul, monomials_of_degree, p_is_zero,
                    p_mul, p_mul_term, p_scale)


class KMorphism:
    """Per-alcove matrices of localized scalars between two objects."""

    def __init__(self, src: KObject, dst: KObject,
                 matrices: Dict[Alcove, List[List[LocalizedElem]]]):
        self.src = src
        self.dst = dst
        self.matrices = matrices

    def matrix(self, a: Alcove) -> List[List[LocalizedElem]]:
        mat = self.matrices.get(a)
        if mat is not None:
            return mat
        rs, K = self.src.rs, self.src.K
        zero = LocalizedElem(rs, K, {})
        return [[zero for _ in range(self.src.rank_at(a))]
                for _ in range(self.dst.rank_at(a))]

    def compose(self, other: "KMorphism") -> "KMorphism":
        """self after other (other first)."""
        if other.dst is not self.src and other.dst.ranks != self.src.ranks:
            raise ValueError("composition shape mismatch")
        rs, K = self.src.rs, self.src.K
        out = {}
        for a in set(self.matrices) | set(other.matrices):
            m1 = self.matrix(a)
            m2 = other.matrix(a)
            if not m1 or not m2:
                continue
            rows = len(m1)
            mid = len(m2)
            cols = len(m2[0]) if m2 else 0
            zero = LocalizedElem(rs, K, {})
            mat = []
            for r in range(rows):
                row = []
                for c in range(cols):
                    acc = zero
                    for k in range(mid):
                        acc = acc + m1[r][k] * m2[k][c]
                    row.append(acc)
                mat.append(row)
            out[a] = mat
        return KMorphism(other.src, self.dst, out)

    def add(self, other: "KMorphism") -> "KMorphism":
        out = {}
        for a in set(self.matrices) | set(other.matrices):
            m1, m2 = self.matrix(a), other.matrix(a)
            out[a] = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(m1, m2)]
        return KMorphism(self.src, self.dst, out)

    def scale(self, c) -> KMorphism:
        rs, K = self.src.rs, self.src.K
        factor = LocalizedElem.const(rs, K, c)
        out = {a: [[x * factor for x in row] for row in mat]
               for a, mat in self.matrices.items()}
        return KMorphism(self.src, self.dst, out)

    def is_zero(self) -> bool:
        return all(x.is_zero() for mat in self.matrices.values()
                   for row in mat for x in row)

    def equals(self, other: "KMorphism") -> bool:
        for a in set(self.matrices) | set(other.matrices):
            m1, m2 = self.matrix(a), other.matrix(a)
            for r1, r2 in zip(m1, m2):
                for x, y in zip(r1, r2):
                    if not x.eq(y):
                        return False
        return True

    def apply_blocks(self, a: Alcove, root_idx: int,
                     vec: Sequence[LocalizedElem]) -> List[LocalizedElem]:
        """Apply (f_a + f_up) blockwise to a vector in M(a) + M(up a)."""
        up = alcove_up(root_idx, a)
        ra = self.src.rank_at(a)
        out = []
        for mat, chunk in ((self.matrix(a), vec[:ra]), (self.matrix(up), vec[ra:])):
            for row in mat:
                acc = LocalizedElem(self.src.rs, self.src.K, {})
                for x, v in zip(row, chunk):
                    acc = acc + x * v
                out.append(acc)
        return out

    def is_morphism(self) -> bool:
        rs, K = self.src.rs, self.src.K
        for (a, i), lat in self.src.lattices.items():
            target = self.dst.lattice_at(a, i)
            up = alcove_up(i, a)
            for g in lat.gens:
                vec = [LocalizedElem(rs, K, p) for p in g]
                img = self.apply_blocks(a, i, vec)
                if target.ambient == 0:
                    if any(not x.is_zero() for x in img):
                        return False
                    continue
                shifted = []
                for x in img:
                    den = list(x.den)
                    den[i] += lat.alpha_pow
                    shifted.append(LocalizedElem(rs, K, x.num, tuple(den)))
                if not target.member_localized(shifted):
                    return False
        return True


def identity_morphism(m: KObject) -> KMorphism:
    rs, K = m.rs, m.K
    one = LocalizedElem.const(rs, K, 1)
    zero = LocalizedElem(rs, K, {})
    mats = {}
    for a, r in m.ranks.items():
        mats[a] = [[one if i == j else zero for j in range(r)] for i in range(r)]
    return KMorphism(m, m, mats)


def morphism_from_constants(src: KObject, dst: KObject,
                            values: Dict[Alcove, List[List]]) -> KMorphism:
    rs, K = src.rs, src.K
    mats = {}
    for a, rows in values.items():
        mats[a] = [[LocalizedElem.const(rs, K, x) for x in row] for row in rows]
    return KMorphism(src, dst, mats)


# ---------------------------------------------------------------------------
# hom space solver
# ---------------------------------------------------------------------------

def _denominator(rs, K, tier: int) -> Tuple[Poly, Tuple[int, ...]]:
    """(prod of all coroots)^tier as a polynomial, plus its exponent vector."""
    from .polys import p_const
    d = p_const(K.one, rs.rank, K)
    for i in range(rs.nroots):
        for _ in range(tier):
            d = p_mul(d, coroot_poly(rs, i, K), K)
    return d, tuple(tier for _ in range(rs.nroots))


def hom_space(src: KObject, dst: KObject, *, denom_tier: int = 1,
              degree_cap: int = 2, degree0_only: bool = False) -> List[KMorphism]:
    """Basis of morphisms with entries numerator / (all coroots)^tier.

    With ``degree0_only`` the numerators are homogeneous of the
    denominator's degree, so entries have degree zero; otherwise all
    numerators up to denominator degree + cap/2 are allowed.
    """
    rs, K = src.rs, src.K
    nv = rs.rank
    dpoly, dexp = _denominator(rs, K, denom_tier)
    base_deg = rs.nroots * denom_tier
    if degree0_only:
        monos = list(monomials_of_degree(nv, base_deg))
    else:
        monos = [m for d in range(0, base_deg + max(0, degree_cap // 2) + 1)
                 for m in monomials_of_degree(nv, d)]

    shared = sorted(set(src.ranks) & set(dst.ranks), key=lambda a: a.sort_key())
    variables = []
    for a in shared:
        for i in range(dst.rank_at(a)):
            for j in range(src.rank_at(a)):
                for m in monos:
                    variables.append((a, i, j, m))
    var_set = set(variables)

    rows = []
    gb_cache: Dict[Tuple[int, int], list] = {}
    for (a, i), lat in sorted(src.lattices.items(),
                              key=lambda kv: (kv[0][0].sort_key(), kv[0][1])):
        up = alcove_up(i, a)
        target = dst.lattice_at(a, i)
        r_src_a = src.rank_at(a)
        r_dst_a, r_dst_u = dst.rank_at(a), dst.rank_at(up)
        n_out = r_dst_a + r_dst_u
        if n_out == 0:
            continue  # both target blocks vanish: nothing to constrain
        # membership scale: images come with denominator dpoly * alpha^kM
        alpha_exp = denom_tier + lat.alpha_pow
        reducer = _lattice_reducer(target, alpha_exp, gb_cache)
        for g in lat.gens:
            eqs: Dict = {}
            # contributions of each unknown touching this generator
            for (alc, n_rows, out_off, chunk_off, n_cols) in (
                    (a, r_dst_a, 0, 0, r_src_a),
                    (up, r_dst_u, r_dst_a, r_src_a, src.rank_at(up))):
                for i_out in range(n_rows):
                    for j in range(n_cols):
                        gj = g[chunk_off + j]
                        if p_is_zero(gj):
                            continue
                        for m in monos:
                            key = (alc, i_out, j, m)
                            if key not in var_set:
                                continue
                            vec = [dict() for _ in range(n_out)]
                            vec[out_off + i_out] = p_mul_term(gj, m, K.one, K)
                            nf = reducer(vec)
                            for (pos, mono2), c in nf.items():
                                row = eqs.setdefault((pos, mono2), {})
                                row[key] = K.add(row.get(key, K.zero), c)
            for row in eqs.values():
                row = {k: v for k, v in row.items() if not K.is_zero(v)}
                if row:
                    rows.append(row)

    sols = linalg.nullspace(rows, variables, K)
    out = []
    for sol in sols:
        mats: Dict[Alcove, list] = {}
        for (a, i, j, m), c in sol.items():
            mat = mats.setdefault(
                a, [[dict() for _ in range(src.rank_at(a))]
                    for _ in range(dst.rank_at(a))])
            mat[i][j][m] = K.add(mat[i][j].get(m, K.zero), c)
        le_mats = {}
        for a, mat in mats.items():
            le_mats[a] = [[LocalizedElem(rs, K, entry, dexp) for entry in row]
                          for row in mat]
        out.append(KMorphism(src, dst, le_mats))
    return out


def _lattice_reducer(target: Lattice, alpha_exp: int, cache: Dict):
    """Linear map sending polynomial vectors to their normal form against
    the target lattice scaled to the given coroot power."""
    from . import groebner as gbmod
    from . import pidlattice as pid
    rs, K = target.rs, target.K
    d = target.alpha_pow - alpha_exp
    key = (id(target), d)
    basis = cache.get(key)
    if basis is None:
        gens = list(target.saturated_gens())
        if d < 0:
            a = coroot_poly(rs, target.loc_root, K)
            for _ in range(-d):
                gens = [tuple(p_mul(p, a, K) for p in v) for v in gens]
        if target.engine == "pid":
            basis = ("pid", pid.triangular_basis(gens, target.ambient, K))
        else:
            basis = ("gb", gbmod.module_gb(gens, K))
        cache[key] = basis
    scale_up = max(d, 0)

    def reduce(vec):
        v = list(vec)
        if scale_up:
            a = coroot_poly(rs, target.loc_root, K)
            for _ in range(scale_up):
                v = [p_mul(p, a, K) for p in v]
        kind, b = basis
        if kind == "pid":
            nf_vec = _pid_nf(v, b, K)
            return {(pos, m): c for pos, p in enumerate(nf_vec)
                    for m, c in p.items()}
        from .groebner import normal_form, vec_to_elem
        nf, _ = normal_form(vec_to_elem(v), b, K)
        return nf

    return reduce


def _pid_nf(vec, basis, K):
    from .pidlattice import _first_nonzero, u_divmod
    from .polys import p_mul, p_sub
    v = [dict(p) for p in vec]
    for b in basis:
        r = _first_nonzero(b)
        if p_is_zero(v[r]):
            continue
        q, rem = u_divmod(v[r], b[r], K)
        v = [p_sub(x, p_mul(q, y, K), K) for x, y in zip(v, b)]
    return v

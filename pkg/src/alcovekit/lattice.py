"""Finitely generated lattices over localized polynomial rings.

A lattice is a submodule of a free module over the ring S with all
coroots inverted except possibly one (``loc_root``); inverting everything
gives the fully localized base ring of the per-alcove modules.  Denominators
in the distinguished coroot direction cannot be cleared by units, so a
lattice stores polynomial generators together with one global power
``alpha_pow``: the lattice is span(gens) / coroot^alpha_pow.

Rank-one root systems run on the univariate PID route; higher ranks run
on the module Groebner route.  Both expose the same operations so they
can be cross-checked on embedded instances.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from . import groebner as gbmod
from . import pidlattice as pid
from .polys import (Poly, mono_deg, p_deg, p_exact_div, p_is_zero, p_add,
                    p_is_homogeneous, p_linear, p_mul, p_scale, p_str, p_sub)
from .rootsystem import RootSystem


class CapError(Exception):
    """A solver hit its degree or search cap; raise rather than guess."""


@lru_cache(maxsize=None)
def coroot_form(rs: RootSystem, root_idx: int, K) -> "tuple":
    poly = p_linear(rs.coroot_coweight_coords(root_idx), K)
    return tuple(sorted(poly.items()))


def coroot_poly(rs: RootSystem, root_idx: int, K) -> Poly:
    return dict(coroot_form(rs, root_idx, K))


def vec_is_zero(v) -> bool:
    return all(p_is_zero(p) for p in v)


def vec_add(a, b, K):
    return tuple(p_add(x, y, K) for x, y in zip(a, b))


def vec_scale(v, poly: Poly, K):
    return tuple(p_mul(p, poly, K) for p in v)


def vec_degree(v) -> Optional[int]:
    """Common polynomial degree of the nonzero entries, or None if mixed."""
    degs = {p_deg(p) for p in v if not p_is_zero(p)}
    if not degs:
        return 0
    if len(degs) > 1 or any(not p_is_homogeneous(p) for p in v):
        return None
    return degs.pop()


def poly_matrix_rank(rows: Sequence[Sequence[Poly]], K) -> int:
    """Rank over the rational function field, by fraction-free elimination."""
    mat = [list(dict(p) for p in row) for row in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, len(mat)) if not p_is_zero(mat[r][col])), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        for r in range(row + 1, len(mat)):
            if p_is_zero(mat[r][col]):
                continue
            a, b = mat[row][col], mat[r][col]
            mat[r] = [p_sub(p_mul(a, x, K), p_mul(b, y, K), K)
                      for x, y in zip(mat[r], mat[row])]
        row += 1
        rank += 1
        if row == len(mat):
            break
    return rank


class Lattice:
    """span(gens) / coroot^alpha_pow over S with all coroots but one inverted."""

    def __init__(self, rs: RootSystem, K, ambient: int, gens, alpha_pow: int = 0,
                 loc_root: Optional[int] = None, engine: Optional[str] = None):
        self.rs = rs
        self.K = K
        self.ambient = ambient
        self.loc_root = loc_root
        self.engine = engine or ("pid" if rs.rank == 1 else "gb")
        self._gb = None
        self._tri = None
        self._sat = None
        norm = []
        for v in gens:
            v = tuple(dict(p) for p in v)
            if len(v) != ambient:
                raise ValueError("generator has wrong ambient rank")
            if vec_is_zero(v):
                continue
            if vec_degree(v) is None:
                raise ValueError("lattice generators must be homogeneous vectors")
            norm.append(self._strip_units(v))
        # pull out common distinguished-coroot content to shrink alpha_pow
        if loc_root is None:
            alpha_pow = 0  # every coroot is a unit here
        elif alpha_pow > 0 and norm:
            a = coroot_poly(rs, loc_root, K)
            while alpha_pow > 0 and all(self._divisible(v, a) for v in norm):
                norm = [tuple(p_exact_div(p, a, K) if p else {} for p in v)
                        for v in norm]
                alpha_pow -= 1
        self.alpha_pow = alpha_pow if norm else 0
        self.gens: Tuple[tuple, ...] = tuple(sorted(norm, key=self._vec_key))

    # -- normalization helpers --

    def allowed_forms(self) -> List[Poly]:
        return [coroot_poly(self.rs, i, self.K)
                for i in range(self.rs.nroots) if i != self.loc_root]

    def _divisible(self, v, form: Poly) -> bool:
        return all(p_is_zero(p) or self._try_div(p, form) is not None for p in v)

    def _try_div(self, p: Poly, form: Poly):
        try:
            return p_exact_div(p, form, self.K)
        except ValueError:
            return None

    def _strip_units(self, v):
        changed = True
        while changed:
            changed = False
            for form in self.allowed_forms():
                if all(p_is_zero(p) for p in v):
                    return v
                if self._divisible(v, form):
                    v = tuple(p_exact_div(p, form, self.K) if p else {} for p in v)
                    changed = True
        return v

    @staticmethod
    def _vec_key(v):
        return tuple(tuple(sorted((m, repr(c)) for m, c in p.items())) for p in v)

    # -- semantic core --

    def is_zero(self) -> bool:
        return not self.gens

    def saturated_gens(self):
        if self._sat is None:
            if not self.gens:
                self._sat = []
            elif self.engine == "pid":
                self._sat = pid.pid_saturate(list(self.gens), self.allowed_forms(),
                                             self.ambient, self.K)
            else:
                self._sat = gbmod.saturate_module(list(self.gens), self.allowed_forms(),
                                                  self.ambient, self.K)
        return self._sat

    def _basis(self):
        sat = self.saturated_gens()
        if self.engine == "pid":
            if self._tri is None:
                self._tri = pid.triangular_basis(sat, self.ambient, self.K)
            return self._tri
        if self._gb is None:
            self._gb = gbmod.module_gb(sat, self.K)
        return self._gb

    def member_poly(self, vec, alpha_exp: int = 0) -> bool:
        """Is vec / coroot^alpha_exp in the lattice?"""
        if vec_is_zero(vec):
            return True
        if not self.gens:
            return False
        d = self.alpha_pow - alpha_exp
        K = self.K
        if self.loc_root is None and d != 0:
            d = 0  # the distinguished coroot is a unit here
        if d > 0:
            a = coroot_poly(self.rs, self.loc_root, K)
            for _ in range(d):
                vec = vec_scale(vec, a, K)
            d = 0
        if d < 0:
            a = coroot_poly(self.rs, self.loc_root, K)
            target = list(self.saturated_gens())
            for _ in range(-d):
                target = [vec_scale(v, a, K) for v in target]
            if self.engine == "pid":
                return pid.pid_member(vec, pid.triangular_basis(target, self.ambient, K), K)
            return gbmod.member(vec, gbmod.module_gb(target, K), K)
        basis = self._basis()
        if self.engine == "pid":
            return pid.pid_member(vec, basis, self.K)
        return gbmod.member(vec, basis, self.K)

    def member_localized(self, vec: Sequence["LocalizedElem"]) -> bool:
        poly_vec, apow = localized_vector_to_poly(vec, self.rs, self.K, self.loc_root)
        return self.member_poly(poly_vec, apow)

    def contains(self, other: "Lattice") -> bool:
        return all(self.member_poly(v, other.alpha_pow) for v in other.gens)

    def same_module(self, other: "Lattice") -> bool:
        return self.contains(other) and other.contains(self)

    def sum_with(self, other: "Lattice") -> "Lattice":
        self._check_compatible(other)
        Kp = max(self.alpha_pow, other.alpha_pow)
        gens = self._scaled_gens(Kp) + other._scaled_gens(Kp)
        return Lattice(self.rs, self.K, self.ambient, gens, Kp, self.loc_root, self.engine)

    def intersect(self, other: "Lattice") -> "Lattice":
        self._check_compatible(other)
        if self.is_zero() or other.is_zero():
            return Lattice(self.rs, self.K, self.ambient, [], 0, self.loc_root, self.engine)
        Kp = max(self.alpha_pow, other.alpha_pow)
        g1 = gbmod.saturate_module(self._scaled_gens(Kp), self.allowed_forms(),
                                   self.ambient, self.K) \
            if self.engine == "gb" else \
            pid.pid_saturate(self._scaled_gens(Kp), self.allowed_forms(),
                             self.ambient, self.K)
        g2 = gbmod.saturate_module(other._scaled_gens(Kp), self.allowed_forms(),
                                   self.ambient, self.K) \
            if self.engine == "gb" else \
            pid.pid_saturate(other._scaled_gens(Kp), self.allowed_forms(),
                             self.ambient, self.K)
        if self.engine == "pid":
            inter = pid.pid_intersect(g1, g2, self.ambient, self.K)
        else:
            inter = gbmod.intersect_modules(g1, g2, self.ambient, self.K)
        return Lattice(self.rs, self.K, self.ambient, inter, Kp, self.loc_root, self.engine)

    def _scaled_gens(self, new_pow: int):
        d = new_pow - self.alpha_pow
        if d == 0 or self.loc_root is None:
            return list(self.gens)
        a = coroot_poly(self.rs, self.loc_root, self.K)
        out = list(self.gens)
        for _ in range(d):
            out = [vec_scale(v, a, self.K) for v in out]
        return out

    def _check_compatible(self, other: "Lattice"):
        if (self.rs, self.ambient, self.loc_root) != (other.rs, other.ambient, other.loc_root):
            raise ValueError("lattices live in different ambients")

    def rank(self) -> int:
        return poly_matrix_rank(self.saturated_gens(), self.K)

    def freeness_rank(self):
        """(is_free, rank, graded degrees of a basis when free)."""
        if self.is_zero():
            return True, 0, []
        if self.engine == "pid":
            basis = self._basis()
            degs = sorted(2 * vec_degree(v) - 2 * self.alpha_pow for v in basis)
            return True, len(basis), degs
        sat = [tuple(v) for v in self.saturated_gens()]
        r = poly_matrix_rank(sat, self.K)
        mingens = self._minimize_gens(sat)
        if len(mingens) == r:
            degs = sorted(2 * vec_degree(self._strip_units(v)) - 2 * self.alpha_pow
                          for v in mingens)
            return True, r, degs
        # Fitting test on a presentation by the minimized generators
        syz = gbmod.syzygies(mingens, self.ambient, self.K)
        if self._fitting_says_projective(mingens, syz, r):
            raise CapError("lattice is projective but no basis was found")
        return False, r, None

    def _minimize_gens(self, gens):
        cur = list(gens)
        changed = True
        while changed:
            changed = False
            for i in range(len(cur)):
                rest = cur[:i] + cur[i + 1:]
                if not rest:
                    continue
                sat_rest = gbmod.saturate_module(rest, self.allowed_forms(),
                                                 self.ambient, self.K)
                gb = gbmod.module_gb(sat_rest, self.K)
                if gbmod.member(cur[i], gb, self.K):
                    cur = rest
                    changed = True
                    break
        return cur

    def _fitting_says_projective(self, gens, syz, r) -> bool:
        m = len(gens)
        pres = [[dict(syz_vec[i]) for syz_vec in syz] for i in range(m)]  # m x s
        s = len(syz)
        # Fitt_{r-1}: (m-r+1)-minors must vanish; Fitt_r: (m-r)-minors
        # must generate the unit ideal after inverting the allowed coroots.
        from itertools import combinations
        def minors(size):
            if size == 0:
                return [ {(0,) * self.rs.rank: self.K.one} ]
            out = []
            for rows in combinations(range(m), size):
                for cols in combinations(range(s), size):
                    out.append(self._det([[pres[i][j] for j in cols] for i in rows]))
            return out
        if any(not p_is_zero(d) for d in minors(m - r + 1)):
            return False
        ideal_gens = [(d,) for d in minors(m - r) if not p_is_zero(d)]
        if not ideal_gens:
            return False
        satideal = gbmod.saturate_module(ideal_gens, self.allowed_forms(), 1, self.K)
        one = ({(0,) * self.rs.rank: self.K.one},)
        return gbmod.member(one, gbmod.module_gb(satideal, self.K), self.K)

    def _det(self, mat) -> Poly:
        n = len(mat)
        if n == 0:
            return {(0,) * self.rs.rank: self.K.one}
        if n == 1:
            return mat[0][0]
        out: Poly = {}
        sign = self.K.one
        for j in range(n):
            sub = [row[:j] + row[j + 1:] for row in mat[1:]]
            term = p_mul(mat[0][j], self._det(sub), self.K)
            out = p_add(out, p_scale(term, sign, self.K), self.K)
            sign = self.K.neg(sign)
        return out

    def serialize_key(self):
        return (self.rs.tag, self.K.tag(), self.ambient, self.loc_root,
                self.alpha_pow, self._vec_key_all())

    def _vec_key_all(self):
        return tuple(self._vec_key(v) for v in self.gens)

    def __repr__(self):
        tag = "S^0" if self.loc_root is None else f"S^a{self.loc_root}"
        gens = "; ".join("(" + ", ".join(p_str(p) for p in v) + ")" for v in self.gens)
        pre = f"a^-{self.alpha_pow} " if self.alpha_pow else ""
        return f"Lattice[{tag}, n={self.ambient}]({pre}{gens})"


class LocalizedElem:
    """num / prod(coroot_i^den_i); scalars of the localized rings."""

    __slots__ = ("num", "den", "rs", "K")

    def __init__(self, rs: RootSystem, K, num: Poly, den: Tuple[int, ...] = None):
        self.rs = rs
        self.K = K
        self.num = dict(num)
        self.den = tuple(den) if den is not None else (0,) * rs.nroots
        self._reduce()

    def _reduce(self):
        if not self.num:
            self.den = (0,) * self.rs.nroots
            return
        den = list(self.den)
        for i in range(self.rs.nroots):
            form = coroot_poly(self.rs, i, self.K)
            while den[i] > 0:
                try:
                    self.num = p_exact_div(self.num, form, self.K)
                    den[i] -= 1
                except ValueError:
                    break
        self.den = tuple(den)

    @staticmethod
    def const(rs, K, c) -> "LocalizedElem":
        from .polys import p_const
        return LocalizedElem(rs, K, p_const(K.of(c), rs.rank, K))

    def is_zero(self) -> bool:
        return not self.num

    def degree(self) -> Optional[int]:
        """Degree in the grading with linear forms in degree 2."""
        if not self.num:
            return None
        if not p_is_homogeneous(self.num):
            return None
        return 2 * p_deg(self.num) - 2 * sum(self.den)

    def __add__(self, other: "LocalizedElem") -> "LocalizedElem":
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        num1, num2 = self.num, other.num
        for i in range(self.rs.nroots):
            form = coroot_poly(self.rs, i, self.K)
            for _ in range(den[i] - self.den[i]):
                num1 = p_mul(num1, form, self.K)
            for _ in range(den[i] - other.den[i]):
                num2 = p_mul(num2, form, self.K)
        return LocalizedElem(self.rs, self.K, p_add(num1, num2, self.K), den)

    def __neg__(self) -> "LocalizedElem":
        return LocalizedElem(self.rs, self.K, p_scale(self.num, self.K.neg(self.K.one), self.K), self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LocalizedElem") -> "LocalizedElem":
        return LocalizedElem(self.rs, self.K, p_mul(self.num, other.num, self.K),
                             tuple(a + b for a, b in zip(self.den, other.den)))

    def eq(self, other: "LocalizedElem") -> bool:
        return (self - other).is_zero()

    def monomial_unit_inverse(self) -> Optional["LocalizedElem"]:
        """Inverse when this is c * coroot monomial; None otherwise."""
        if len(self.num) != 1:
            return None
        num = dict(self.num)
        exps = [0] * self.rs.nroots
        for i in range(self.rs.nroots):
            form = coroot_poly(self.rs, i, self.K)
            while True:
                try:
                    num = p_exact_div(num, form, self.K)
                    exps[i] += 1
                except ValueError:
                    break
        (mono, c), = num.items()
        if mono_deg(mono) != 0:
            return None
        inv_num = {(0,) * self.rs.rank: self.K.inv(c)}
        den = [0] * self.rs.nroots
        new_den = tuple(e - d for e, d in zip(exps, self.den))
        for i, e in enumerate(new_den):
            if e > 0:
                den[i] = e
            elif e < 0:
                form = coroot_poly(self.rs, i, self.K)
                for _ in range(-e):
                    inv_num = p_mul(inv_num, form, self.K)
        return LocalizedElem(self.rs, self.K, inv_num, tuple(den))

    def __repr__(self):
        s = p_str(self.num)
        if any(self.den):
            s += " / " + "*".join(f"cr{i}^{e}" for i, e in enumerate(self.den) if e)
        return s


def localized_vector_to_poly(vec: Sequence[LocalizedElem], rs, K, loc_root):
    """Clear denominators of a vector: allowed coroots by unit scaling, the
    distinguished one into an explicit power.  Returns (poly_vector, power)."""
    den = [0] * rs.nroots
    for le in vec:
        for i in range(rs.nroots):
            den[i] = max(den[i], le.den[i])
    out = []
    for le in vec:
        num = le.num
        for i in range(rs.nroots):
            form = coroot_poly(rs, i, K)
            for _ in range(den[i] - le.den[i]):
                num = p_mul(num, form, K)
        out.append(num)
    apow = 0
    if loc_root is not None:
        apow = den[loc_root]
    # all the other coroot powers are units: dividing the vector by them is
    # harmless, so simply forget them
    return tuple(out), apow

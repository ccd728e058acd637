"""Structure algebra of the orbit moment graph and its graded rank.

Orbits of the root-lattice action on alcoves are labeled by finite Weyl
elements; tuples of polynomials indexed by orbits must agree modulo the
coroot whenever two orbits are swapped by the corresponding reflection.
Congruences are imposed per connected component only: edges exist for
the non-invertible root directions of the mode.

The graded rank of the sections over a downward-closed orbit set has a
closed form: one free generator of degree 2n per orbit, where n counts
the non-invertible roots whose reflection moves the orbit down.  The
brute-force solver checks that prediction degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from . import linalg
from .alcove import Alcove, alcoves_at_weight
from .ordering import (AlcoveWindow, BaseRingMode, orbit_of,
                       orbit_left_reflect)
from .polys import LaurentV, Mono, lv_add, lv_zero, monomials_of_degree
from .rootsystem import Matrix, RootSystem


@dataclass(frozen=True)
class MomentSpec:
    """Finite orbit set with its reflection edges in the mode's directions."""

    mode: BaseRingMode
    orbits: Tuple[Matrix, ...]

    @property
    def rs(self) -> RootSystem:
        return self.mode.rs

    def edges(self) -> List[Tuple[Matrix, Matrix, int]]:
        """(x, s_alpha x, root index) with both ends in the orbit set and
        alpha a non-invertible direction; each unordered pair appears once."""
        out = []
        oset = set(self.orbits)
        for x in self.orbits:
            for i in sorted(self.mode.noninvertible):
                y = orbit_left_reflect(self.rs, x, i)
                if y in oset and x < y:
                    out.append((x, y, i))
        return out


def z_sections_bruteforce(spec: MomentSpec, max_degree: int, K) -> Dict[int, List]:
    """Per even degree d <= max_degree, a basis of the tuples of degree-d/2
    homogeneous polynomials satisfying every edge congruence.

    Basis vectors are dicts orbit -> polynomial.
    """
    rs = spec.rs
    edges = spec.edges()
    out: Dict[int, List] = {}
    for d in range(0, max_degree + 1, 2):
        monos = list(monomials_of_degree(rs.rank, d // 2))
        variables = [(x, m) for x in spec.orbits for m in monos]
        rows = []
        for x, y, i in edges:
            form = rs.coroot_coweight_coords(i)
            piv = next(j for j, c in enumerate(form) if not K.is_zero(K.of(c)))
            pivc = K.of(form[piv])
            # substitute y_piv = -(sum of the others)/pivc into z_x - z_y
            # and require the result to vanish identically
            sub = [K.div(K.neg(K.of(c)), pivc) for c in form]
            eqs: Dict[Mono, Dict] = {}
            for m in monos:
                red = _reduce_mono(m, piv, sub, K, rs.rank)
                for rm, c in red.items():
                    eqs.setdefault(rm, {})
                    row = eqs[rm]
                    row[(x, m)] = K.add(row.get((x, m), K.zero), c)
                    row[(y, m)] = K.sub(row.get((y, m), K.zero), c)
            for row in eqs.values():
                row = {k: v for k, v in row.items() if not K.is_zero(v)}
                if row:
                    rows.append(row)
        basis = linalg.nullspace(rows, variables, K)
        vecs = []
        for b in basis:
            tup = {}
            for (x, m), c in b.items():
                tup.setdefault(x, {})[m] = c
            vecs.append(tup)
        out[d] = vecs
    return out


def _reduce_mono(m: Mono, piv: int, sub, K, rank: int):
    """Expand a monomial after substituting the pivot variable by the
    linear form `sub` (with the pivot's own slot ignored)."""
    out = {tuple(0 if j == piv else e for j, e in enumerate(m)): K.one}
    for _ in range(m[piv]):
        nxt = {}
        for mono, c in out.items():
            for j, s in enumerate(sub):
                if j == piv or K.is_zero(s):
                    continue
                m2 = tuple(e + int(j == k) for k, e in enumerate(mono))
                v = K.add(nxt.get(m2, K.zero), K.mul(c, s))
                if K.is_zero(v):
                    nxt.pop(m2, None)
                else:
                    nxt[m2] = v
        out = nxt
    return out


def _mu_order_lifts(spec: MomentSpec, mu, window: AlcoveWindow):
    """Map each orbit to its unique alcove in the star of mu, plus the
    window order used to compare the lifts."""
    rs = spec.rs
    star = alcoves_at_weight(rs, mu)
    lift = {orbit_of(a): a for a in star}
    if len(lift) != len(star):
        raise AssertionError("orbit map is not injective on the weight star")
    return lift


def _leq_lift(spec: MomentSpec, lift, a: Alcove, b: Alcove) -> bool:
    from .ordering import leq_boxed
    return leq_boxed(a, b, spec.mode)


def is_mu_open(spec: MomentSpec, orbit_set, mu) -> bool:
    """Downward closure of the lifted orbit set inside the weight star,
    checked per connected component."""
    from .ordering import component_id
    lift = _mu_order_lifts(spec, mu, None)
    inside = set(orbit_set)
    for x in inside:
        if x not in lift:
            raise ValueError("orbit outside the weight star")
    for x in inside:
        cx = component_id(spec.mode, x)
        for y in lift:
            if y in inside or component_id(spec.mode, y) != cx:
                continue
            if _leq_lift(spec, lift, lift[y], lift[x]):
                return False
    return True


def graded_rank_formula(orbit_set: Sequence[Matrix], spec: MomentSpec, mu) -> LaurentV:
    """Sum of v^(2n) over the orbit set, n counting the mode's roots whose
    reflection moves the orbit strictly down in the weight-star order."""
    if not is_mu_open(spec, orbit_set, mu):
        raise ValueError("orbit set is not open in the weight-star topology")
    rs = spec.rs
    lift = _mu_order_lifts(spec, mu, None)
    total = lv_zero()
    for x in orbit_set:
        n = 0
        for i in sorted(spec.mode.noninvertible):
            y = orbit_left_reflect(rs, x, i)
            if _leq_lift(spec, lift, lift[y], lift[x]):
                n += 1
        total = lv_add(total, {2 * n: 1})
    return total


def hilbert_dim(rank: int, d: int) -> int:
    """k-dimension of the degree-d part of the polynomial ring (degree-2
    generators), i.e. monomials of total degree d/2 in `rank` variables."""
    if d < 0 or d % 2:
        return 0
    e = d // 2
    num = 1
    den = 1
    for i in range(rank - 1):
        num *= e + 1 + i
        den *= i + 1
    return num // den


def verify_rank(spec: MomentSpec, orbit_set, mu, max_degree: int, K) -> bool:
    """Brute-force graded dimensions against the closed-form prediction."""
    sub = MomentSpec(spec.mode, tuple(sorted(orbit_set)))
    predicted = graded_rank_formula(orbit_set, spec, mu)
    sections = z_sections_bruteforce(sub, max_degree, K)
    rank = spec.rs.rank
    for d in range(0, max_degree + 1, 2):
        want = sum(c * hilbert_dim(rank, d - e) for e, c in predicted.items())
        if len(sections[d]) != want:
            return False
    return True

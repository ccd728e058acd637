"""Alcoves for the affine Weyl group: actions, walls, galleries.

An alcove is w(A_e) for a unique affine Weyl element w, stored together
with its exact barycenter.  The integer "address" of an alcove collects,
for every positive root, the lower integer bound of the slab the alcove
lives in; addresses are a faithful coordinate system and drive wall
walks, galleries and weight->alcove lookups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from .rootsystem import AffineWeylElement, RootSystem, mat_identity


class WindowError(Exception):
    """A computation needs alcoves outside the declared window."""


@dataclass(frozen=True)
class Alcove:
    rs: RootSystem
    elem: AffineWeylElement
    barycenter: Tuple[Fraction, ...] = field(init=False, compare=False)
    address: Tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        bary = self.elem.act(self.rs._base_barycenter)
        addr = []
        for i in range(self.rs.nroots):
            v = self.rs.pairing(bary, i)
            fl = v.numerator // v.denominator
            if fl == v:
                raise AssertionError("alcove barycenter on a wall")
            addr.append(fl)
        object.__setattr__(self, "barycenter", bary)
        object.__setattr__(self, "address", tuple(addr))

    def sort_key(self):
        return self.address

    def __repr__(self) -> str:
        return f"Alcove{self.address}"


def fundamental_alcove(rs: RootSystem) -> Alcove:
    return Alcove(rs, AffineWeylElement.identity(rs))


@lru_cache(maxsize=None)
def simple_affine_reflections(rs: RootSystem) -> Tuple[AffineWeylElement, ...]:
    """The reflections in the walls of A_e.

    Letters 0..rank-1 are the finite simple reflections s_{alpha_i,0};
    the last letter is the affine one through the level-1 wall of the
    highest coroot.
    """
    gens = [AffineWeylElement.reflection(rs, i, 0) for i in range(rs.rank)]
    gens.append(AffineWeylElement.reflection(rs, rs.highest_coroot_index, 1))
    return tuple(gens)


def right_act(a: Alcove, s_idx: int) -> Alcove:
    gens = simple_affine_reflections(a.rs)
    if not 0 <= s_idx < len(gens):
        raise ValueError(f"letter {s_idx} is not a simple affine reflection index")
    return Alcove(a.rs, a.elem * gens[s_idx])


def left_act(g: AffineWeylElement, a: Alcove) -> Alcove:
    return Alcove(a.rs, g * a.elem)


def alcove_up(root_idx: int, a: Alcove) -> Alcove:
    """Reflect a across the first wall of the given root direction above it."""
    n = a.address[root_idx] + 1
    return left_act(AffineWeylElement.reflection(a.rs, root_idx, n), a)


def alcove_down(root_idx: int, a: Alcove) -> Alcove:
    n = a.address[root_idx]
    return left_act(AffineWeylElement.reflection(a.rs, root_idx, n), a)


def _walk_to_address(rs: RootSystem, start: Alcove, target: Tuple[int, ...]):
    """Greedy wall walk from start to the alcove with the target address.

    Returns (alcove, letters); each letter is an index into the simple
    affine reflections, applied on the right.  Raises ValueError if no
    alcove has the target address.
    """
    ngen = rs.rank + 1
    cur = start
    letters: List[int] = []
    guard = 0
    while cur.address != target:
        guard += 1
        if guard > 100000:
            raise RuntimeError("address walk failed to terminate")
        for k in range(ngen):
            nxt = right_act(cur, k)
            better = False
            for i in range(rs.nroots):
                if nxt.address[i] != cur.address[i]:
                    better = abs(target[i] - nxt.address[i]) < abs(target[i] - cur.address[i])
                    break
            if better:
                cur = nxt
                letters.append(k)
                break
        else:
            raise ValueError(f"no alcove has address {target}")
    return cur, letters


def alcove_from_address(rs: RootSystem, address) -> Alcove:
    alc, _ = _walk_to_address(rs, fundamental_alcove(rs), tuple(address))
    return alc


def alcove_of_weight(rs: RootSystem, point) -> Alcove:
    """The unique alcove containing a regular point in its interior."""
    target = []
    for i in range(rs.nroots):
        v = rs.pairing(point, i)
        if v.denominator == 1:
            raise ValueError(
                f"point {tuple(point)} lies on a wall (pairing {v} with root {i})"
            )
        target.append(v.numerator // v.denominator)
    return alcove_from_address(rs, tuple(target))


def separating_wall_count(a: Alcove, b: Alcove) -> int:
    return sum(abs(x - y) for x, y in zip(a.address, b.address))


_PERTURB_PRIMES = (5, 7, 11, 13, 17, 19)


def _generic_direction(rs: RootSystem, seed: int):
    p = _PERTURB_PRIMES[seed % len(_PERTURB_PRIMES)]
    return tuple(Fraction(1, p ** (j + 1)) for j in range(rs.rank))


def gallery_word(a_from: Alcove, a_to: Alcove) -> List[int]:
    """Letters s_1..s_n with a_from . s_1...s_n = a_to.

    The word records the walls met by a straight segment between interior
    points of the two alcoves; endpoints are perturbed by a deterministic
    rational amount, halved until the segment avoids codimension-2 loci.
    The length always equals the number of separating walls.
    """
    rs = a_from.rs
    if a_from == a_to:
        return []
    eps = Fraction(1, 16)
    for attempt in range(48):
        d0 = _generic_direction(rs, 0)
        d1 = _generic_direction(rs, 1)
        p0 = tuple(x + eps * d for x, d in zip(a_from.barycenter, d0))
        p1 = tuple(x + eps * d for x, d in zip(a_to.barycenter, d1))
        crossings = _segment_crossings(rs, a_from, a_to, p0, p1)
        if crossings is not None:
            break
        eps /= 2
    else:
        raise RuntimeError("could not find a generic gallery segment")

    letters: List[int] = []
    x = a_from.elem
    gens = simple_affine_reflections(rs)
    finv_cache = {}
    cur = a_from
    for _, root_idx, level in crossings:
        refl = AffineWeylElement.reflection(rs, root_idx, level)
        xinv = finv_cache.get(x)
        if xinv is None:
            xinv = x.inverse()
            finv_cache[x] = xinv
        letter_elem = xinv * refl * x
        for k, g in enumerate(gens):
            if g == letter_elem:
                letters.append(k)
                break
        else:
            raise AssertionError("segment crossing is not a wall crossing")
        cur = right_act(cur, letters[-1])
        x = cur.elem
    if cur != a_to:
        raise AssertionError("gallery did not reach the target alcove")
    return letters


def _segment_crossings(rs, a_from, a_to, p0, p1):
    """Wall crossings of the segment p0 -> p1 sorted by time, or None if
    degenerate (endpoint moved out of its alcove, or simultaneous hits)."""
    for pt, alc in ((p0, a_from), (p1, a_to)):
        for i in range(rs.nroots):
            v = rs.pairing(pt, i)
            if v.denominator == 1:
                return None
            if v.numerator // v.denominator != alc.address[i]:
                return None
    crossings = []
    seen_times = set()
    for i in range(rs.nroots):
        c0 = rs.pairing(p0, i)
        c1 = rs.pairing(p1, i)
        if c0 == c1:
            continue
        lo, hi = (c0, c1) if c0 < c1 else (c1, c0)
        m = lo.numerator // lo.denominator + 1
        while m < hi:
            t = (Fraction(m) - c0) / (c1 - c0)
            if t in seen_times:
                return None
            seen_times.add(t)
            crossings.append((t, i, m))
            m += 1
    crossings.sort()
    return crossings


def min_alcove_at_weight(rs: RootSystem, mu) -> Alcove:
    """The lowest alcove whose closure contains the weight mu.

    Its slab in every positive root direction is (c-1, c) where c is the
    pairing of mu with the coroot.
    """
    mu = tuple(Fraction(x) for x in mu)
    target = []
    for i in range(rs.nroots):
        v = rs.pairing(mu, i)
        if v.denominator != 1:
            raise ValueError(f"{mu} is not in the weight lattice")
        target.append(int(v) - 1)
    return alcove_from_address(rs, tuple(target))


def alcoves_at_weight(rs: RootSystem, mu) -> Tuple[Alcove, ...]:
    """All alcoves containing mu in their closure (the star of mu)."""
    base = min_alcove_at_weight(rs, mu)
    mu = tuple(Fraction(x) for x in mu)
    gens = [
        AffineWeylElement.reflection(rs, i, int(rs.pairing(mu, i)))
        for i in range(rs.nroots)
    ]
    seen = {base}
    frontier = [base]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = left_act(g, a)
                if b not in seen:
                    seen.add(b)
                    new.append(b)
        frontier = new
    if len(seen) != len(rs.weyl_elements):
        raise AssertionError("weight star has unexpected size")
    return tuple(sorted(seen, key=lambda a: a.sort_key()))


def weight_in_closure(a: Alcove, mu) -> bool:
    rs = a.rs
    for i in range(rs.nroots):
        v = rs.pairing(mu, i)
        if v.denominator != 1:
            return False
        if not a.address[i] <= int(v) <= a.address[i] + 1:
            return False
    return True


def dot_p_alcove(rs: RootSystem, w: AffineWeylElement, p: int) -> Alcove:
    """Alcove attached to w in the characteristic-p dictionary.

    This is the alcove containing w(rho/p), i.e. the image of the p-scaled
    orbit point; for p above the Coxeter number it is regular and the
    result is simply w(A_e).
    """
    if p < 2:
        raise ValueError("p must be a prime >= 2")
    lam = w.act(tuple(x / p for x in rs.rho))
    return alcove_of_weight(rs, lam)

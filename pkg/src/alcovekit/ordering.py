"""The partial order on alcoves attached to a base-ring mode, plus the
finite-window machinery built on it: open ideals, locally closed sets,
sections at a weight, connected components and the sharp/flat hulls.

A mode records which positive roots have non-invertible coroots; its
order is generated by dominant translations together with reflections
across walls lying above an alcove, but only in the recorded root
directions.  Every chain moves barycenters up the positive cone, so all
searches can be confined to barycenter boxes and stay exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .alcove import Alcove, WindowError, left_act, simple_affine_reflections
from .rootsystem import AffineWeylElement, Matrix, RootSystem, mat_mul


@dataclass(frozen=True)
class BaseRingMode:
    """Choice of non-invertible positive coroots: none, one, or a
    reflection-closed subset (all of them in the main case)."""

    rs: RootSystem
    noninvertible: FrozenSet[int]

    def __post_init__(self):
        sub = weyl_subgroup(self.rs, self.noninvertible)
        closed = {
            i for i in range(self.rs.nroots)
            if self.rs.reflection_matrix(i) in sub
        }
        if closed != set(self.noninvertible):
            raise ValueError(
                "root subset is not closed under reflection-subgroup generation"
            )

    @property
    def kind(self) -> str:
        n = len(self.noninvertible)
        if n == 0:
            return "generic"
        if n == 1:
            return "subgeneric"
        if n == self.rs.nroots:
            return "full"
        return "intermediate"

    def __repr__(self) -> str:
        return f"Mode({self.kind}:{sorted(self.noninvertible)})"


def generic_mode(rs: RootSystem) -> BaseRingMode:
    return BaseRingMode(rs, frozenset())

def subgeneric_mode(rs: RootSystem, root_idx: int) -> BaseRingMode:
    return BaseRingMode(rs, frozenset({root_idx}))

def full_mode(rs: RootSystem) -> BaseRingMode:
    return BaseRingMode(rs, frozenset(range(rs.nroots)))


@lru_cache(maxsize=None)
def _weyl_subgroup_cached(rs: RootSystem, idxs: FrozenSet[int]):
    gens = [rs.reflection_matrix(i) for i in idxs]
    from .rootsystem import mat_identity
    group = {mat_identity(rs.rank)}
    frontier = list(group)
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                wg = mat_mul(w, g)
                if wg not in group:
                    group.add(wg)
                    new.append(wg)
        frontier = new
    return frozenset(group)

def weyl_subgroup(rs: RootSystem, idxs) -> FrozenSet[Matrix]:
    return _weyl_subgroup_cached(rs, frozenset(idxs))


# --- windows -------------------------------------------------------------

@dataclass(frozen=True)
class AlcoveWindow:
    """All alcoves whose barycenter lies in a coordinate box (simple-root
    coordinates).  Box shape is what makes order searches exhaustive."""

    rs: RootSystem
    lo: Tuple[Fraction, ...]
    hi: Tuple[Fraction, ...]
    alcoves: Tuple[Alcove, ...] = None  # filled in __post_init__

    def __post_init__(self):
        rs = self.rs
        found = []
        for w in rs.weyl_elements:
            wb = AffineWeylElement(w, (0,) * rs.rank).act(rs._base_barycenter)
            ranges = []
            for j in range(rs.rank):
                lo_j = self.lo[j] - wb[j]
                hi_j = self.hi[j] - wb[j]
                a = lo_j.numerator // lo_j.denominator + (0 if lo_j.denominator == 1 else 1)
                b = hi_j.numerator // hi_j.denominator
                ranges.append(range(a, b + 1))
            def rec(j, acc):
                if j == rs.rank:
                    yield tuple(acc)
                    return
                for t in ranges[j]:
                    acc.append(t)
                    yield from rec(j + 1, acc)
                    acc.pop()
            for t in rec(0, []):
                found.append(Alcove(rs, AffineWeylElement(w, t)))
        found.sort(key=lambda a: a.sort_key())
        object.__setattr__(self, "alcoves", tuple(found))

    def __contains__(self, a: Alcove) -> bool:
        return all(self.lo[j] <= a.barycenter[j] <= self.hi[j] for j in range(self.rs.rank))

    def contains_box(self, lo, hi) -> bool:
        return all(self.lo[j] <= lo[j] and hi[j] <= self.hi[j] for j in range(self.rs.rank))

    def __len__(self) -> int:
        return len(self.alcoves)

    def __hash__(self) -> int:
        return hash((self.rs, self.lo, self.hi))

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlcoveWindow)
                and (self.rs, self.lo, self.hi) == (other.rs, other.lo, other.hi))


def window_box(rs: RootSystem, radius, lo=None, hi=None) -> AlcoveWindow:
    if lo is None:
        lo = tuple(Fraction(-radius) for _ in range(rs.rank))
        hi = tuple(Fraction(radius) for _ in range(rs.rank))
    return AlcoveWindow(rs, tuple(Fraction(x) for x in lo), tuple(Fraction(x) for x in hi))


# --- the order -----------------------------------------------------------

def _upward_neighbors(a: Alcove, mode: BaseRingMode, lo, hi):
    """Single-generator moves from a staying inside the barycenter box."""
    rs = a.rs
    out = []
    # unit dominant translations generate all dominant ones
    for j in range(rs.rank):
        if a.barycenter[j] + 1 <= hi[j]:
            gamma = tuple(int(k == j) for k in range(rs.rank))
            out.append(left_act(AffineWeylElement.translation(rs, gamma), a))
    # reflections across higher walls in the non-invertible directions
    for i in mode.noninvertible:
        root = rs.positive_roots[i].coords
        c = rs.pairing(a.barycenter, i)
        m = a.address[i] + 1
        while True:
            shift = Fraction(m) - c  # barycenter moves by shift * root
            img = tuple(b + shift * r for b, r in zip(a.barycenter, root))
            if any(img[j] > hi[j] for j in range(rs.rank)):
                break
            out.append(left_act(AffineWeylElement.reflection(rs, i, m), a))
            m += 1
    return [b for b in out if all(lo[j] <= b.barycenter[j] for j in range(rs.rank))]


def leq_boxed(a: Alcove, b: Alcove, mode: BaseRingMode) -> bool:
    """Decide a <= b by exhaustive generator search in the box spanned by
    the two barycenters.  Needs no window: chains cannot leave the box."""
    if a == b:
        return True
    lo = tuple(min(x, y) for x, y in zip(a.barycenter, b.barycenter))
    hi = tuple(max(x, y) for x, y in zip(a.barycenter, b.barycenter))
    if any(b.barycenter[j] < a.barycenter[j] for j in range(a.rs.rank)):
        return False
    seen = {a}
    frontier = [a]
    while frontier:
        new = []
        for cur in frontier:
            for nxt in _upward_neighbors(cur, mode, lo, hi):
                if nxt == b:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    new.append(nxt)
        frontier = new
    return False


class WindowOrder:
    """Reachability closure of the order generators inside one window."""

    def __init__(self, window: AlcoveWindow, mode: BaseRingMode):
        self.window = window
        self.mode = mode
        alcs = window.alcoves
        self.index = {a: i for i, a in enumerate(alcs)}
        n = len(alcs)
        succs: List[List[int]] = [[] for _ in range(n)]
        for a in alcs:
            for b in _upward_neighbors(a, mode, window.lo, window.hi):
                j = self.index.get(b)
                if j is not None:
                    succs[self.index[a]].append(j)
        # topological order: barycenter coordinate sum strictly increases
        order = sorted(range(n), key=lambda i: sum(alcs[i].barycenter), reverse=True)
        reach = [0] * n
        for i in order:
            mask = 1 << i
            for j in succs[i]:
                mask |= reach[j]
            reach[i] = mask
        self.reach = reach

    def leq(self, a: Alcove, b: Alcove) -> bool:
        ia, ib = self.index.get(a), self.index.get(b)
        if ia is None or ib is None:
            raise WindowError(f"alcove outside window: {a if ia is None else b}")
        return bool(self.reach[ia] >> ib & 1)

    def down_set(self, a: Alcove) -> List[Alcove]:
        ia = self.index[a]
        return [b for b in self.window.alcoves if self.reach[self.index[b]] >> ia & 1]


@lru_cache(maxsize=None)
def window_order(window: AlcoveWindow, mode: BaseRingMode) -> WindowOrder:
    return WindowOrder(window, mode)


def leq(a: Alcove, b: Alcove, mode: BaseRingMode,
        window: Optional[AlcoveWindow] = None) -> bool:
    """a <= b in the mode's order.

    With a window the pair's barycenter box must fit inside it (loud
    failure otherwise); without one the self-contained box search runs.
    """
    if window is not None:
        lo = tuple(min(x, y) for x, y in zip(a.barycenter, b.barycenter))
        hi = tuple(max(x, y) for x, y in zip(a.barycenter, b.barycenter))
        if not window.contains_box(lo, hi):
            raise WindowError(
                f"window box does not contain the span of {a} and {b}"
            )
        return window_order(window, mode).leq(a, b)
    return leq_boxed(a, b, mode)


def open_ideal(seed, mode: BaseRingMode, window: AlcoveWindow) -> FrozenSet[Alcove]:
    """Smallest window-relative open set containing the seed alcoves."""
    wo = window_order(window, mode)
    out = set()
    for a in seed:
        if a not in wo.index:
            raise WindowError(f"seed alcove {a} outside window")
        out.update(wo.down_set(a))
    return frozenset(out)


def is_open(j, mode: BaseRingMode, window: AlcoveWindow) -> bool:
    return open_ideal(j, mode, window) == frozenset(j)


def is_locally_closed(k, mode: BaseRingMode, window: AlcoveWindow) -> bool:
    """Order convexity: no alcove of the window sits strictly between two
    members of k without belonging to k."""
    kset = set(k)
    wo = window_order(window, mode)
    for a in kset:
        if a not in wo.index:
            raise WindowError(f"alcove {a} outside window")
    for c in kset:
        below_c = set(wo.down_set(c))
        for b in below_c:
            if b in kset:
                continue
            if any(wo.leq(a, b) for a in kset):
                return False
    return True


# --- orbits and components ----------------------------------------------

def orbit_of(a: Alcove) -> Matrix:
    """Label of the root-lattice orbit: the finite part of the alcove."""
    return a.elem.w


def orbit_right_act(rs: RootSystem, x: Matrix, s_idx: int) -> Matrix:
    u = simple_affine_reflections(rs)[s_idx].w
    return mat_mul(x, u)


def orbit_left_reflect(rs: RootSystem, x: Matrix, root_idx: int) -> Matrix:
    return mat_mul(rs.reflection_matrix(root_idx), x)


def component_id(mode: BaseRingMode, x: Matrix) -> Matrix:
    """Canonical representative of the finite-part coset cutting out the
    connected component of the orbit x."""
    sub = weyl_subgroup(mode.rs, mode.noninvertible)
    return min(mat_mul(u, x) for u in sub)


def components(mode: BaseRingMode, window: AlcoveWindow) -> List[FrozenSet[Alcove]]:
    """Partition of the window into connected components of the order."""
    parts: Dict[Matrix, List[Alcove]] = {}
    for a in window.alcoves:
        parts.setdefault(component_id(mode, orbit_of(a)), []).append(a)
    return [frozenset(v) for _, v in sorted(parts.items())]


def section_lambda_mu(mu, component, mode: BaseRingMode,
                      window: AlcoveWindow) -> FrozenSet[Alcove]:
    """Alcoves of the given component whose closure contains mu.

    ``component`` is a set of orbit labels (finite parts); the full star
    of mu must fit in the window.
    """
    from .alcove import alcoves_at_weight
    rs = mode.rs
    star = alcoves_at_weight(rs, mu)
    comp = set(component)
    out = [a for a in star if orbit_of(a) in comp]
    for a in out:
        if a not in window:
            raise WindowError(f"section alcove {a} outside window")
    return frozenset(out)


def section_minimum(section, mode: BaseRingMode, window: AlcoveWindow) -> Alcove:
    """The unique order-minimal alcove of a section."""
    sec = sorted(section, key=lambda a: a.sort_key())
    wo = window_order(window, mode)
    minima = [a for a in sec if all(wo.leq(a, b) for b in sec)]
    if len(minima) != 1:
        raise AssertionError("section does not have a unique minimum")
    return minima[0]


def sharp_flat(j, s_idx: int, mode: BaseRingMode, window: AlcoveWindow):
    """(j-sharp, j-flat): closure and interior of j under the right action
    of one simple affine reflection."""
    from .alcove import right_act
    jset = frozenset(j)
    js = frozenset(right_act(a, s_idx) for a in jset)
    for a in js:
        if a not in window:
            raise WindowError(
                f"right action by letter {s_idx} leaves the window at {a}"
            )
    return jset | js, jset & js

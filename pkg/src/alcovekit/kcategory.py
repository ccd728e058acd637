"""The combinatorial category of per-alcove modules with coroot lattices.

An object assigns to each alcove a free module over the fully localized
ring and to each (alcove, positive root) pair a lattice inside the sum
of the modules at the alcove and its upward reflection.  Wall-crossing
doubles ranks and rebuilds lattices by a three-case rule; the special
objects at a weight are the seeds, and repeated idempotent splitting of
wall-crossed seeds produces the indecomposables whose ranks encode baby
Verma multiplicities of projectives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .alcove import (Alcove, WindowError, alcove_down, alcove_up,
                     alcoves_at_weight, gallery_word, min_alcove_at_weight,
                     right_act, weight_in_closure)
from .lattice import (CapError, Lattice, LocalizedElem, coroot_poly,
                      localized_vector_to_poly, poly_matrix_rank, vec_is_zero)
from .ordering import AlcoveWindow, full_mode, leq_boxed
from .pidlattice import u_divmod, u_xgcd
from .polys import (Poly, lv_eval1, mono_deg, monomials_of_degree, p_add,
                    p_const, p_exact_div, p_is_zero, p_mul, p_mul_term,
                    p_scale, p_str, p_sub)
from .rootsystem import RootSystem


class SplitError(Exception):
    """No splitting idempotent found within the search caps."""


# ---------------------------------------------------------------------------
# objects
# ---------------------------------------------------------------------------

class KObject:
    """Ranks per alcove plus one lattice per (alcove, positive root)."""

    def __init__(self, rs: RootSystem, K, ranks: Dict[Alcove, int],
                 lattices: Dict[Tuple[Alcove, int], Lattice]):
        self.rs = rs
        self.K = K
        self.ranks = {a: r for a, r in ranks.items() if r > 0}
        self.lattices = {key: lat for key, lat in lattices.items()
                         if not lat.is_zero()}

    def rank_at(self, a: Alcove) -> int:
        return self.ranks.get(a, 0)

    def support(self) -> List[Alcove]:
        return sorted(self.ranks, key=lambda a: a.sort_key())

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def blocks(self, a: Alcove, root_idx: int) -> Tuple[int, int]:
        return self.rank_at(a), self.rank_at(alcove_up(root_idx, a))

    def lattice_at(self, a: Alcove, root_idx: int) -> Lattice:
        lat = self.lattices.get((a, root_idx))
        if lat is not None:
            return lat
        r1, r2 = self.blocks(a, root_idx)
        return Lattice(self.rs, self.K, r1 + r2, [], loc_root=root_idx)

    def lattice_sites(self) -> List[Tuple[Alcove, int]]:
        return sorted(self.lattices, key=lambda k: (k[0].sort_key(), k[1]))

    def validate(self) -> None:
        """Structural invariants: ambient shapes and full rank after
        inverting the distinguished coroot (for nonzero lattices)."""
        for (a, i), lat in self.lattices.items():
            r1, r2 = self.blocks(a, i)
            if lat.ambient != r1 + r2:
                raise AssertionError(f"ambient mismatch at ({a}, root {i})")

    def serialize(self) -> str:
        def poly_json(p: Poly):
            return sorted([list(m), str(c)] for m, c in p.items())
        data = {
            "type": self.rs.tag,
            "field": self.K.tag(),
            "ranks": [[list(a.address), r]
                      for a, r in sorted(self.ranks.items(),
                                         key=lambda kv: kv[0].sort_key())],
            "lattices": [
                {
                    "alcove": list(a.address),
                    "root": i,
                    "alpha_pow": lat.alpha_pow,
                    "ambient": lat.ambient,
                    "gens": [[poly_json(p) for p in v] for v in lat.gens],
                }
                for (a, i), lat in sorted(self.lattices.items(),
                                          key=lambda kv: (kv[0][0].sort_key(), kv[0][1]))
            ],
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def deserialize(text: str, rs: RootSystem, K) -> "KObject":
        from fractions import Fraction
        from .alcove import alcove_from_address
        data = json.loads(text)
        if data["type"] != rs.tag or data["field"] != K.tag():
            raise ValueError("serialized object does not match ring data")
        def poly_back(items) -> Poly:
            out = {}
            for m, c in items:
                val = K.of(Fraction(c)) if K.char == 0 else K.of(int(c))
                out[tuple(m)] = val
            return out
        ranks = {alcove_from_address(rs, tuple(addr)): r for addr, r in data["ranks"]}
        lattices = {}
        for entry in data["lattices"]:
            a = alcove_from_address(rs, tuple(entry["alcove"]))
            i = entry["root"]
            gens = [tuple(poly_back(p) for p in v) for v in entry["gens"]]
            lattices[(a, i)] = Lattice(rs, K, entry["ambient"], gens,
                                       entry["alpha_pow"], loc_root=i)
        return KObject(rs, K, ranks, lattices)

    def __repr__(self):
        ranks = {tuple(a.address): r for a, r in sorted(self.ranks.items(),
                 key=lambda kv: kv[0].sort_key())}
        return f"KObject({self.rs.tag}, ranks={ranks})"


def ranks(m: KObject) -> Dict[Alcove, int]:
    return dict(m.ranks)


def zero_object(rs: RootSystem, K) -> KObject:
    return KObject(rs, K, {}, {})


def direct_sum(m: KObject, n: KObject) -> KObject:
    """Block direct sum, m's coordinates first in every block."""
    rs, K = m.rs, m.K
    ranks_out = dict(m.ranks)
    for a, r in n.ranks.items():
        ranks_out[a] = ranks_out.get(a, 0) + r
    lattices = {}
    for (a, i) in set(m.lattices) | set(n.lattices):
        up = alcove_up(i, a)
        w_ma, w_na = m.rank_at(a), n.rank_at(a)
        w_mu, w_nu = m.rank_at(up), n.rank_at(up)
        latm, latn = m.lattice_at(a, i), n.lattice_at(a, i)
        kp = max(latm.alpha_pow, latn.alpha_pow)
        gens = []
        for v in latm._scaled_gens(kp):
            top, bot = v[:w_ma], v[w_ma:]
            gens.append(tuple(list(top) + [{}] * w_na + list(bot) + [{}] * w_nu))
        for v in latn._scaled_gens(kp):
            top, bot = v[:w_na], v[w_na:]
            gens.append(tuple([{}] * w_ma + list(top) + [{}] * w_mu + list(bot)))
        lattices[(a, i)] = Lattice(rs, K, w_ma + w_na + w_mu + w_nu, gens, kp,
                                   loc_root=i)
    return KObject(rs, K, ranks_out, lattices)


# ---------------------------------------------------------------------------
# the special objects
# ---------------------------------------------------------------------------

def make_Q_mu(rs: RootSystem, K, mu, window: AlcoveWindow) -> KObject:
    """Seed object at a weight: rank one on the star of mu, congruence
    lattices inside the star, principal lattices on its boundary."""
    star = set(alcoves_at_weight(rs, mu))
    for a in star:
        if a not in window:
            raise WindowError(f"weight star leaves the window at {a}")
    one = p_const(K.one, rs.rank, K)
    ranks_out = {a: 1 for a in star}
    lattices: Dict[Tuple[Alcove, int], Lattice] = {}
    shell = set(star)
    for i in range(rs.nroots):
        shell.update(alcove_down(i, a) for a in star)
    for a in shell:
        for i in range(rs.nroots):
            up = alcove_up(i, a)
            a_in, up_in = a in star, up in star
            if not a_in and not up_in:
                continue
            alpha = coroot_poly(rs, i, K)
            if a_in and up_in:
                gens = [(one, dict(one)), (alpha, {})]
                ambient = 2
            elif a_in:
                gens = [(dict(one),)]
                ambient = 1
            else:
                gens = [(dict(alpha),)]
                ambient = 1
            lattices[(a, i)] = Lattice(rs, K, ambient, gens, loc_root=i)
    return KObject(rs, K, ranks_out, lattices)


# ---------------------------------------------------------------------------
# wall crossing
# ---------------------------------------------------------------------------

def theta_c(s_idx: int, m: KObject, window: AlcoveWindow) -> KObject:
    """Wall crossing: ranks r(A) + r(As); lattices by the three-case rule
    (neighbor above, neighbor below, unrelated), with the distinguished
    coroot scaling the contribution from the upward side in the middle case."""
    rs, K = m.rs, m.K
    supp = set(m.ranks)
    new_supp = set(supp)
    for a in supp:
        b = right_act(a, s_idx)
        if b not in window:
            raise WindowError(f"wall crossing leaves the window at {b}")
        new_supp.add(b)
    ranks_out = {a: m.rank_at(a) + m.rank_at(right_act(a, s_idx))
                 for a in new_supp}
    ranks_out = {a: r for a, r in ranks_out.items() if r > 0}

    lattices: Dict[Tuple[Alcove, int], Lattice] = {}
    sites = set()
    for i in range(rs.nroots):
        for a in ranks_out:
            sites.add((a, i))
            sites.add((alcove_down(i, a), i))
    for (a, i) in sorted(sites, key=lambda k: (k[0].sort_key(), k[1])):
        lat = _theta_lattice(m, s_idx, a, i, ranks_out, window)
        if lat is not None and not lat.is_zero():
            lattices[(a, i)] = lat
    return KObject(rs, K, ranks_out, lattices)


def _theta_lattice(m: KObject, s_idx: int, a: Alcove, i: int,
                   new_ranks: Dict[Alcove, int], window: AlcoveWindow):
    rs, K = m.rs, m.K
    up = alcove_up(i, a)
    a_s = right_act(a, s_idx)
    up_s = right_act(up, s_idx)
    widths = (m.rank_at(a), m.rank_at(a_s), m.rank_at(up), m.rank_at(up_s))
    ambient = sum(widths)
    if new_ranks.get(a, 0) + new_ranks.get(up, 0) == 0:
        return None
    alpha = coroot_poly(rs, i, K)

    def placed(vec, slots):
        out: List[Poly] = [dict() for _ in range(ambient)]
        offs = [0, widths[0], widths[0] + widths[1], widths[0] + widths[1] + widths[2]]
        pos = 0
        for slot in slots:
            w = widths[slot]
            for k in range(w):
                out[offs[slot] + k] = dict(vec[pos + k])
            pos += w
        return tuple(out)

    gens = []
    if a_s == up:
        # neighbor above: {(alpha x + y, y)} built from the source lattice
        src = m.lattice_at(a, i)
        kpow = src.alpha_pow
        for g in src.gens:
            ga, gu = g[:widths[0]], g[widths[0]:]
            gens.append(placed([p_mul(p, alpha, K) for p in ga]
                               + [p_mul(p, alpha, K) for p in gu]
                               + [dict() for _ in range(widths[2] + widths[3])],
                               [0, 1, 2, 3]))
            gens.append(placed(list(ga) + list(gu) + list(gu) + list(ga), [0, 1, 2, 3]))
        return Lattice(rs, K, ambient, gens, kpow, loc_root=i)
    if a_s == alcove_down(i, a):
        # neighbor below: swapped copy of the lattice one step down plus
        # the coroot times the lattice one step up
        down = a_s
        src1 = m.lattice_at(down, i)       # inside M(down) + M(a)
        src2 = m.lattice_at(up, i)         # inside M(up) + M(up up)
        k1 = src1.alpha_pow
        k2e = src2.alpha_pow - 1           # effective power after the alpha factor
        kpow = max(k1, k2e, 0)
        d1, d2 = kpow - k1, kpow - k2e
        r_down = m.rank_at(down)
        for g in src1.gens:
            gd, ga = g[:r_down], g[r_down:]
            vec = list(ga) + list(gd) + [dict() for _ in range(widths[2] + widths[3])]
            vec = [_alpha_power(p, alpha, d1, K) for p in vec]
            gens.append(placed(vec, [0, 1, 2, 3]))
        for g in src2.gens:
            vec = [dict() for _ in range(widths[0] + widths[1])] + [dict(p) for p in g]
            vec = [_alpha_power(p, alpha, d2, K) for p in vec]
            gens.append(placed(vec, [0, 1, 2, 3]))
        return Lattice(rs, K, ambient, gens, kpow, loc_root=i)
    # unrelated neighbor: blockwise sum with the reindexed partner lattice
    if up_s != alcove_up(i, a_s):
        raise AssertionError("wall partner does not commute with the up map")
    src1 = m.lattice_at(a, i)             # inside M(a) + M(up)
    src2 = m.lattice_at(a_s, i)           # inside M(as) + M(up s)
    kpow = max(src1.alpha_pow, src2.alpha_pow)
    gens = []
    for g in src1._scaled_gens(kpow):
        ga, gu = g[:widths[0]], g[widths[0]:]
        gens.append(placed(list(ga) + [dict() for _ in range(widths[1])]
                           + list(gu) + [dict() for _ in range(widths[3])],
                           [0, 1, 2, 3]))
    for g in src2._scaled_gens(kpow):
        gs, gus = g[:widths[1]], g[widths[1]:]
        gens.append(placed([dict() for _ in range(widths[0])] + list(gs)
                           + [dict() for _ in range(widths[2])] + list(gus),
                           [0, 1, 2, 3]))
    return Lattice(rs, K, ambient, gens, kpow, loc_root=i)


def _alpha_power(p: Poly, alpha: Poly, d: int, K) -> Poly:
    for _ in range(d):
        p = p_mul(p, alpha, K)
    return p


def theta_word(word: Sequence[int], m: KObject, window: AlcoveWindow) -> KObject:
    for s_idx in word:
        m = theta_c(s_idx, m, window)
    return m

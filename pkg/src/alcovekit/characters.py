"""Graded multiplicity characters of filtered objects.

A character is a finitely supported map from alcoves to Laurent
polynomials in v.  Standard objects contribute delta functions, special
projectives contribute v^(2n) per alcove of the weight star, and wall
crossing acts by the two-case recursion that doubles the total mass at
v = 1.
"""

from __future__ import annotations

from typing import Dict, List

from .alcove import Alcove, WindowError, right_act
from .ordering import AlcoveWindow, BaseRingMode, full_mode, section_lambda_mu
from .polys import LaurentV, lv_add, lv_mul, lv_shift, lv_zero

Character = Dict[Alcove, LaurentV]


def ch_zero() -> Character:
    return {}


def ch_standard(a: Alcove, shift: int = 0) -> Character:
    """Character of a degree-shifted standard object: v^-shift at a."""
    return {a: {-shift: 1}}


def ch_add(c1: Character, c2: Character) -> Character:
    out = dict(c1)
    for a, lv in c2.items():
        s = lv_add(out.get(a, lv_zero()), lv)
        if s:
            out[a] = s
        else:
            out.pop(a, None)
    return out


def ch_scale(c: Character, lv: LaurentV) -> Character:
    out = {}
    for a, val in c.items():
        prod = lv_mul(val, lv)
        if prod:
            out[a] = prod
    return out


def ch_eq(c1: Character, c2: Character) -> bool:
    return {a: v for a, v in c1.items() if v} == {a: v for a, v in c2.items() if v}


def ch_special(mu, component, mode: BaseRingMode, window: AlcoveWindow) -> Character:
    """Character of the special projective at mu: v^(2 n_A) on the section,
    n_A counting positive roots whose down-reflection stays in the section."""
    from .alcove import alcove_down
    sec = section_lambda_mu(mu, component, mode, window)
    out: Character = {}
    for a in sec:
        n = sum(1 for i in range(mode.rs.nroots) if alcove_down(i, a) in sec)
        out[a] = {2 * n: 1}
    return out


def _goes_down(a: Alcove, b: Alcove) -> bool:
    """b strictly below a when they are wall neighbors (b = a.s)."""
    diff = [y - x for x, y in zip(a.barycenter, b.barycenter)]
    return all(d <= 0 for d in diff) and any(d < 0 for d in diff)


def ch_theta(s_idx: int, ch: Character, window: AlcoveWindow) -> Character:
    """Wall crossing on characters.

    New value at a: (old(a) + old(a.s)) times v^2 exactly when a.s lies
    below a; wall neighbors are always comparable in the full order.
    """
    support = set(ch)
    targets = set(support)
    for a in support:
        b = right_act(a, s_idx)
        if b not in window:
            raise WindowError(f"wall crossing leaves the window at {b}")
        targets.add(b)
    out: Character = {}
    for a in targets:
        b = right_act(a, s_idx)
        total = lv_add(ch.get(a, lv_zero()), ch.get(b, lv_zero()))
        if not total:
            continue
        if _goes_down(a, b):
            total = lv_shift(total, 2)
        out[a] = total
    return out


def ch_word(word: List[int], mu, component, mode: BaseRingMode,
            window: AlcoveWindow) -> Character:
    """Fold wall crossings over a word, starting from the special character."""
    ch = ch_special(mu, component, mode, window)
    for s_idx in word:
        ch = ch_theta(s_idx, ch, window)
    return ch


def ch_eval1(ch: Character) -> Dict[Alcove, int]:
    return {a: sum(v.values()) for a, v in ch.items() if v}

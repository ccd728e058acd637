"""Sparse exact linear algebra over a coefficient field.

Rows are dicts ``{column_id: coeff}``; column ids are arbitrary hashable
labels.  Everything here is plain Gaussian elimination, which is all the
desk-scale solvers in this package need.
"""

from __future__ import annotations

from typing import Dict, Hashable, List, Sequence

Row = Dict[Hashable, object]


def _row_sub(r: Row, factor, piv: Row, K) -> None:
    for c, v in piv.items():
        s = K.sub(r.get(c, K.zero), K.mul(factor, v))
        if K.is_zero(s):
            r.pop(c, None)
        else:
            r[c] = s


def _reduce_against(r: Row, pivots: Dict, key, K):
    """Reduce r against pivot rows until its leading column is pivot-free."""
    while r:
        col = min(r.keys(), key=key)
        piv = pivots.get(col)
        if piv is None:
            return col
        _row_sub(r, r[col], piv, K)
    return None


def rank(rows: Sequence[Row], K, variables: Sequence[Hashable] = None) -> int:
    if variables is None:
        seen = set()
        variables = []
        for row in rows:
            for c in row:
                if c not in seen:
                    seen.add(c)
                    variables.append(c)
    var_index = {v: i for i, v in enumerate(variables)}
    key = var_index.__getitem__
    pivots: Dict[Hashable, Row] = {}
    for row in rows:
        r = dict(row)
        col = _reduce_against(r, pivots, key, K)
        if col is not None:
            cinv = K.inv(r[col])
            pivots[col] = {c: K.mul(v, cinv) for c, v in r.items()}
    return len(pivots)


def nullspace(rows: Sequence[Row], variables: Sequence[Hashable], K) -> List[Dict]:
    """Basis of the solution space of ``rows . x = 0``.

    Returns one dict per basis vector, mapping variable -> coefficient
    (zeros omitted).  ``variables`` fixes the free-variable order, which
    keeps results deterministic.  Pivot rows are kept fully reduced so
    the free-variable back-substitution reads off correct coefficients.
    """
    var_index = {v: i for i, v in enumerate(variables)}
    key = var_index.__getitem__
    pivots: Dict[Hashable, Row] = {}
    for row in rows:
        r = dict(row)
        # full reduction: pivot rows contain no other pivot columns, so one
        # pass over the pivot columns present in r eliminates them all
        for c in [c for c in r if c in pivots]:
            if c in r:
                _row_sub(r, r[c], pivots[c], K)
        if not r:
            continue
        col = min(r.keys(), key=key)
        cinv = K.inv(r[col])
        r = {c: K.mul(v, cinv) for c, v in r.items()}
        for prow in pivots.values():
            if col in prow:
                _row_sub(prow, prow[col], r, K)
        pivots[col] = r
    basis = []
    for free in variables:
        if free in pivots:
            continue
        vec = {free: K.one}
        for pcol, prow in pivots.items():
            c = prow.get(free)
            if c is not None and not K.is_zero(c):
                vec[pcol] = K.neg(c)
        basis.append(vec)
    return basis


def solve(rows: Sequence[Row], rhs: Sequence, variables: Sequence[Hashable], K):
    """One solution of ``rows . x = rhs``, or None if inconsistent."""
    RHS = ("#rhs#",)
    aug = []
    for row, b in zip(rows, rhs):
        r = dict(row)
        if not K.is_zero(b):
            r[RHS] = K.neg(b)
        aug.append(r)
    for s in nullspace(aug, list(variables) + [RHS], K):
        c = s.get(RHS)
        if c is not None and not K.is_zero(c):
            cinv = K.inv(c)
            return {v: K.mul(x, cinv) for v, x in s.items() if v != RHS}
    if all(K.is_zero(b) for b in rhs):
        return {}
    return None

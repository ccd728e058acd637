"""Finite irreducible root systems and the affine Weyl group.

Coordinates: points of V are tuples of Fractions in the basis of simple
roots; roots are integer vectors in the same basis; coroots are integer
vectors in the basis of simple coroots.  All pairings reduce to integer
dot products against precomputed Cartan data.

The affine Weyl group W ⋉ ZR acts by lambda -> w(lambda) + t with w an
integer matrix on simple-root coordinates and t an integer root-lattice
vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

Matrix = Tuple[Tuple[int, ...], ...]
Vec = Tuple[Fraction, ...]

CARTAN_MATRICES = {
    # C[i][j] = <alpha_j, alpha_i_coroot>
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "G2": ((2, -3), (-1, 2)),
}

COXETER_NUMBERS = {"A1": 2, "A2": 3, "B2": 4, "G2": 6}


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )

def mat_vec(a: Matrix, v) -> tuple:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))

def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))

def mat_inv_int(a: Matrix) -> Matrix:
    """Inverse of an integer matrix that is invertible over Z (det +-1 here)."""
    n = len(a)
    rows = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
            for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    inv = tuple(tuple(rows[i][n + j] for j in range(n)) for i in range(n))
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not invertible over Z")
    return tuple(tuple(int(x) for x in row) for row in inv)


@dataclass(frozen=True)
class Root:
    coords: Tuple[int, ...]        # simple-root basis
    coroot: Tuple[int, ...]        # simple-coroot basis
    pairing_row: Tuple[int, ...]   # <alpha_j, coroot> for each simple alpha_j

    @property
    def height(self) -> int:
        return sum(self.coords)


class RootSystem:
    """Exact Cartan data plus the finite Weyl group as matrices."""

    def __init__(self, cartan, tag: str = "custom"):
        self.tag = tag
        self.cartan: Matrix = tuple(tuple(int(x) for x in row) for row in cartan)
        self.rank = len(self.cartan)
        for i in range(self.rank):
            if self.cartan[i][i] != 2:
                raise ValueError("Cartan diagonal must be 2")
        self.positive_roots = self._generate_positive_roots()
        self.nroots = len(self.positive_roots)
        self._root_index = {r.coords: i for i, r in enumerate(self.positive_roots)}
        self.weyl_elements = self._generate_weyl()
        self.coxeter_number = (2 * self.nroots) // self.rank
        if tag in COXETER_NUMBERS and COXETER_NUMBERS[tag] != self.coxeter_number:
            raise AssertionError("Coxeter number mismatch for " + tag)
        self._fundamental_weights = self._compute_fundamental_weights()
        self.rho: Vec = tuple(
            sum(w[j] for w in self._fundamental_weights) * Fraction(1)
            for j in range(self.rank)
        )
        self.highest_coroot_index = self._find_highest_coroot()
        self._base_barycenter = self._compute_base_barycenter()

    # -- construction helpers --

    def _generate_positive_roots(self):
        rank = self.rank
        simple = []
        for i in range(rank):
            coords = tuple(int(i == j) for j in range(rank))
            coroot = coords
            simple.append((coords, coroot))
        seen = dict(simple)
        frontier = list(simple)
        while frontier:
            new = []
            for coords, coroot in frontier:
                for i in range(rank):
                    pair_i = sum(coords[j] * self.cartan[i][j] for j in range(rank))
                    c2 = list(coords)
                    c2[i] -= pair_i
                    pair_co = sum(coroot[k] * self.cartan[k][i] for k in range(rank))
                    v2 = list(coroot)
                    v2[i] -= pair_co
                    c2t, v2t = tuple(c2), tuple(v2)
                    if c2t not in seen and tuple(-x for x in c2t) not in seen:
                        seen[c2t] = v2t
                        new.append((c2t, v2t))
            frontier = new
        pos = []
        for coords, coroot in seen.items():
            if all(x >= 0 for x in coords):
                row = tuple(
                    sum(coroot[i] * self.cartan[i][j] for i in range(self.rank))
                    for j in range(self.rank)
                )
                pos.append(Root(coords, coroot, row))
        pos.sort(key=lambda r: (r.height, r.coords))
        for r in pos:
            if sum(r.coords[j] * r.pairing_row[j] for j in range(self.rank)) != 2:
                raise AssertionError("<alpha, alpha_coroot> != 2")
        return tuple(pos)

    def _generate_weyl(self):
        rank = self.rank
        gens = []
        for i in range(rank):
            m = [[int(k == j) for j in range(rank)] for k in range(rank)]
            for j in range(rank):
                m[i][j] -= self.cartan[i][j]
            gens.append(tuple(tuple(row) for row in m))
        ident = mat_identity(rank)
        group = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for w in frontier:
                for g in gens:
                    wg = mat_mul(w, g)
                    if wg not in group:
                        group.add(wg)
                        new.append(wg)
            frontier = new
        return tuple(sorted(group))

    def _compute_fundamental_weights(self):
        inv = self._cartan_inverse()
        return tuple(tuple(inv[j][i] for j in range(self.rank)) for i in range(self.rank))

    def _cartan_inverse(self):
        n = self.rank
        rows = [[Fraction(self.cartan[i][j]) for j in range(n)]
                + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if rows[r][col] != 0)
            rows[col], rows[piv] = rows[piv], rows[col]
            pv = rows[col][col]
            rows[col] = [x / pv for x in rows[col]]
            for r in range(n):
                if r != col and rows[r][col] != 0:
                    f = rows[r][col]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
        return [[rows[i][n + j] for j in range(n)] for i in range(n)]

    def _find_highest_coroot(self) -> int:
        best = max(range(self.nroots), key=lambda i: sum(self.positive_roots[i].coroot))
        hc = self.positive_roots[best].coroot
        for r in self.positive_roots:
            if any(hc[k] < r.coroot[k] for k in range(self.rank)):
                raise AssertionError("highest coroot is not dominant")
        return best

    def _compute_base_barycenter(self) -> Vec:
        c = self.positive_roots[self.highest_coroot_index].coroot
        pt = [Fraction(0)] * self.rank
        for i in range(self.rank):
            w = self._fundamental_weights[i]
            for j in range(self.rank):
                pt[j] += Fraction(w[j], c[i])
        bary = tuple(x / (self.rank + 1) for x in pt)
        for idx in range(self.nroots):
            v = self.pairing(bary, idx)
            if not (0 < v < 1):
                raise AssertionError("base alcove barycenter not interior")
        return bary

    # -- public API --

    def pairing(self, point, root_idx: int) -> Fraction:
        """<point, coroot of positive root #root_idx>."""
        row = self.positive_roots[root_idx].pairing_row
        return sum((point[j] * row[j] for j in range(self.rank)), Fraction(0))

    def fundamental_weight(self, i: int) -> Vec:
        return tuple(Fraction(x) for x in self._fundamental_weights[i])

    def reflection_matrix(self, root_idx: int) -> Matrix:
        r = self.positive_roots[root_idx]
        n = self.rank
        return tuple(
            tuple(int(k == j) - r.coords[k] * r.pairing_row[j] for j in range(n))
            for k in range(n)
        )

    def in_weight_lattice(self, point) -> bool:
        return all(self.pairing(point, i).denominator == 1 for i in range(self.nroots))

    def coroot_coweight_coords(self, root_idx: int) -> Tuple[int, ...]:
        """Coroot written in the fundamental-coweight basis of the coweight lattice."""
        return self.positive_roots[root_idx].pairing_row

    def root_index(self, coords) -> int:
        return self._root_index[tuple(coords)]

    def __repr__(self) -> str:
        return f"RootSystem({self.tag}, rank={self.rank}, |R+|={self.nroots})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystem) and other.cartan == self.cartan

    def __hash__(self) -> int:
        return hash(self.cartan)


@lru_cache(maxsize=None)
def build_root_system(tag: str) -> RootSystem:
    """Root system from a supported type tag (A1, A2, B2, G2)."""
    if tag not in CARTAN_MATRICES:
        raise ValueError(f"unsupported root system type: {tag!r}")
    return RootSystem(CARTAN_MATRICES[tag], tag)


def gkm_check(rs: RootSystem, p: int) -> bool:
    """GKM condition for characteristic p (p = 0 means characteristic zero).

    Requires p != 2 and that no two distinct positive coroots become
    proportional in the coweight lattice tensored with F_p.
    """
    if p == 2:
        return False
    if p == 0:
        return True  # distinct positive coroots are never Q-proportional
    vs = [rs.coroot_coweight_coords(i) for i in range(rs.nroots)]
    n = rs.rank
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            va = [x % p for x in vs[a]]
            vb = [x % p for x in vs[b]]
            minors_zero = all(
                (va[i] * vb[j] - va[j] * vb[i]) % p == 0
                for i in range(n) for j in range(i + 1, n)
            )
            if n == 1:
                minors_zero = True  # any two vectors in F_p^1 are proportional
            if minors_zero:
                return False
    return True


@dataclass(frozen=True)
class AffineWeylElement:
    """Affine map lambda -> w(lambda) + t with w in W and t in ZR."""

    w: Matrix
    t: Tuple[int, ...]

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        return AffineWeylElement(
            mat_mul(self.w, other.w),
            tuple(a + b for a, b in zip(self.t, mat_vec(self.w, other.t))),
        )

    def inverse(self) -> "AffineWeylElement":
        winv = mat_inv_int(self.w)
        return AffineWeylElement(winv, tuple(-x for x in mat_vec(winv, self.t)))

    def act(self, point) -> Vec:
        moved = mat_vec(self.w, point)
        return tuple(Fraction(a) + b for a, b in zip(moved, self.t))

    @staticmethod
    def identity(rs: RootSystem) -> "AffineWeylElement":
        return AffineWeylElement(mat_identity(rs.rank), (0,) * rs.rank)

    @staticmethod
    def translation(rs: RootSystem, gamma) -> "AffineWeylElement":
        return AffineWeylElement(mat_identity(rs.rank), tuple(int(x) for x in gamma))

    @staticmethod
    def reflection(rs: RootSystem, root_idx: int, n: int) -> "AffineWeylElement":
        r = rs.positive_roots[root_idx]
        return AffineWeylElement(
            rs.reflection_matrix(root_idx), tuple(n * c for c in r.coords)
        )


def affine_act(g: AffineWeylElement, point) -> Vec:
    return g.act(point)

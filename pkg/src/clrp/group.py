"""The projective semilinear group PΓL(r,q) acting on subspaces of F_q^r."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import gcd
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import perm
from .ff import FiniteField, Matrix, field_of_order, mat_inverse, mat_mul, rref_rows
from .subspace import GrassmannianIndex, Subspace, canonicalize, enumerate_grassmannian


@dataclass(frozen=True)
class GroupElement:
    """(A·Z, α): an invertible matrix up to scalars, then a Frobenius power.

    Acts on row vectors by v ↦ α(v)·Aᵗ.
    """

    matrix: Tuple[Tuple[int, ...], ...]
    frob: int
    q: int
    field: FiniteField = dc_field(compare=False, hash=False, repr=False)

    @property
    def r(self) -> int:
        return len(self.matrix)


def _normalize(rows: Sequence[Sequence[int]], f: FiniteField) -> Tuple[Tuple[int, ...], ...]:
    for row in rows:
        for x in row:
            if x:
                s = f.inv_table[x]
                ms = f.mul_table[s]
                return tuple(tuple(ms[y] for y in r) for r in rows)
    raise ValueError("zero matrix is not invertible")


def make_element(rows: Sequence[Sequence[int]], frob: int, f: FiniteField) -> GroupElement:
    m = Matrix.of(rows, f)
    mat_inverse(m)  # raises on singular input
    return GroupElement(_normalize(m.entries, f), frob % f.t, f.q, f)


def identity_element(r: int, f: FiniteField) -> GroupElement:
    return GroupElement(Matrix.identity(r, f).entries, 0, f.q, f)


def _frob_matrix(rows, k: int, f: FiniteField):
    if k == 0:
        return rows
    tab = f.frob_table[k]
    return tuple(tuple(tab[x] for x in row) for row in rows)


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """g1∘g2 (apply g2 first)."""
    f = g1.field
    a2 = Matrix(_frob_matrix(g2.matrix, g1.frob, f), f, g2.r)
    prod = mat_mul(Matrix(g1.matrix, f, g1.r), a2)
    return GroupElement(_normalize(prod.entries, f), (g1.frob + g2.frob) % f.t, f.q, f)


def inverse(g: GroupElement) -> GroupElement:
    f = g.field
    back = (-g.frob) % f.t
    a = Matrix(_frob_matrix(g.matrix, back, f), f, g.r)
    return GroupElement(_normalize(mat_inverse(a).entries, f), back, f.q, f)


def act_rows(g: GroupElement, rows: Sequence[Sequence[int]]) -> List[List[int]]:
    f = g.field
    mul, add = f.mul_table, f.add_table
    rows = _frob_matrix(tuple(tuple(r) for r in rows), g.frob, f)
    out = []
    for v in rows:
        w = []
        for arow in g.matrix:
            s = 0
            for x, y in zip(v, arow):
                if x and y:
                    s = add[s][mul[x][y]]
            w.append(s)
        out.append(w)
    return out


def act(g: GroupElement, V: Subspace) -> Subspace:
    if V.r != g.r or V.q != g.q:
        raise ValueError("element and subspace live over different spaces")
    if not V.dim:
        return V
    return canonicalize(act_rows(g, V.basis), g.field, V.r)


def gl_order(r: int, q: int) -> int:
    o = 1
    for i in range(r):
        o *= q**r - q**i
    return o


def group_order(r: int, q: int) -> int:
    f = field_of_order(q)
    return gl_order(r, q) // (q - 1) * f.t


def group_generators(r: int, q: int) -> List[GroupElement]:
    """Generators of PΓL(r,q).

    diag(ω,1,…,1), the transvections I + λE_{12} for λ running through the
    polynomial basis of F_q over F_p, the cyclic coordinate shift, and the
    Frobenius map when q is not prime.
    """
    f = field_of_order(q)
    gens = []
    if r >= 2:
        d = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
        d[0][0] = f.primitive
        if f.primitive != 1:
            gens.append(make_element(d, 0, f))
        for k in range(f.t):
            lam = f.p**k
            tv = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
            tv[0][1] = lam
            gens.append(make_element(tv, 0, f))
        shift = [[1 if j == (i + 1) % r else 0 for j in range(r)] for i in range(r)]
        gens.append(make_element(shift, 0, f))
    if f.t > 1:
        gens.append(GroupElement(Matrix.identity(r, f).entries, 1, q, f))
    return gens


@dataclass
class OrbitData:
    base: Subspace
    orbit: List[Subspace]
    transporter: List[GroupElement]
    stabilizer_gens: List[GroupElement]

    def transporter_to(self, x: Subspace) -> GroupElement:
        return self.transporter[self.orbit.index(x)]


def orbit_with_transporter(gens: Sequence[GroupElement], base: Subspace) -> OrbitData:
    """Breadth-first orbit; Schreier generators give the stabilizer."""
    f = base.field
    ident = identity_element(base.r, f)
    orbit = [base]
    trans = [ident]
    where: Dict[Tuple, int] = {base.basis: 0}
    i = 0
    while i < len(orbit):
        for g in gens:
            y = act(g, orbit[i])
            if y.basis not in where:
                where[y.basis] = len(orbit)
                orbit.append(y)
                trans.append(compose(g, trans[i]))
        i += 1
    stab = []
    seen = {ident}
    for i, x in enumerate(orbit):
        for g in gens:
            j = where[act(g, x).basis]
            s = compose(inverse(trans[j]), compose(g, trans[i]))
            if s not in seen:
                seen.add(s)
                stab.append(s)
    return OrbitData(base, orbit, trans, stab)


def permutation_of(g: GroupElement, index: GrassmannianIndex) -> np.ndarray:
    """The permutation g induces on the points of a Grassmannian index."""
    f = index.field
    images = np.empty(len(index), dtype=perm.DTYPE)
    for i, s in enumerate(index.points):
        if not s.dim:
            images[i] = i
            continue
        rows, _ = rref_rows(act_rows(g, s.basis), f, index.r)
        images[i] = index.handle[tuple(rows)]
    return images


def _point_index(r: int, q: int) -> GrassmannianIndex:
    return enumerate_grassmannian(r, (1,), q)


def subgroup_order(gens: Sequence[GroupElement], r: int = None, q: int = None) -> int:
    """Order of the subgroup of PΓL(r,q) generated by gens."""
    if not gens:
        return 1
    r = gens[0].r if r is None else r
    q = gens[0].q if q is None else q
    f = field_of_order(q)
    if r == 1:
        step = 0
        for g in gens:
            step = gcd(step, g.frob)
        return f.t // gcd(f.t, step) if step else 1
    index = _point_index(r, q)
    perms = [permutation_of(g, index) for g in gens]
    return perm.chain_from_generators(len(index), perms).order()


def induced_group_order(r: int, index: GrassmannianIndex) -> int:
    """Order of the permutation group PΓL(r,q) induces on the index points."""
    faithful = r >= 2 and any(0 < k < r for k in index.K)
    return group_order(r, index.q) if faithful else 1


def element_from_permutation(p: np.ndarray, index: GrassmannianIndex) -> GroupElement:
    """Recover a group element from the permutation it induces on the index.

    Needs a full layer Gr(r,k) with 0 < k < r in the index; images of points
    are obtained by intersecting the images of all k-spaces through them.
    """
    r, f = index.r, index.field
    layer = next((k for k in index.K if 0 < k < r), None)
    if layer is None:
        raise ValueError("index carries no faithful layer")
    ids = [i for i, s in enumerate(index.points) if s.dim == layer]
    frame = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
    frame.append(tuple([1] * r))
    images = []
    for v in frame:
        through = [i for i in ids if index.points[i].contains(v)]
        img = _intersect_all([index.points[int(p[i])] for i in through])
        if img.dim != 1:
            raise ValueError("permutation is not induced by a collineation")
        images.append(img.basis[0])
    w = images[:r]
    # coefficients c with Σ c_i w_i = w_0
    aug = [list(col) for col in zip(*(list(x) for x in w))]
    for row, b in zip(aug, images[r]):
        row.append(b)
    red, piv = rref_rows(aug, f, r + 1)
    if piv != list(range(r)):
        raise ValueError("frame images are dependent")
    c = [red[i][r] for i in range(r)]
    mt = [[f.mul(ci, x) for x in wi] for ci, wi in zip(c, w)]
    a = [list(col) for col in zip(*mt)]
    for k in range(f.t):
        cand = make_element(a, k, f)
        if np.array_equal(permutation_of(cand, index), p):
            return cand
    raise ValueError("permutation is not induced by PΓL")


def _intersect_all(spaces: Sequence[Subspace]) -> Subspace:
    from .subspace import intersection
    cur = spaces[0]
    for s in spaces[1:]:
        cur = intersection(cur, s)
    return cur


__all__ = [
    "GroupElement", "OrbitData", "make_element", "identity_element", "compose", "inverse",
    "act", "act_rows", "group_order", "gl_order", "group_generators", "orbit_with_transporter",
    "subgroup_order", "permutation_of", "induced_group_order", "element_from_permutation",
]

"""Conjugacy-class association schemes and their rational fusions.

The diagonal action of T x T on T has orbitals indexed by conjugacy classes:
(u, v) lies in the relation of the class containing u*v^-1.  When every class
is inverse-closed these orbitals form a symmetric association scheme (the
group scheme of T).  Merging classes along power-map (rational) orbits gives
a fusion whose eigenvalues are rational, which is the scheme the rest of the
pipeline works in.

Eigenmatrices are computed exactly: the intersection matrices of the scheme
generate a commutative semisimple algebra; splitting their common eigenspaces
over Q via integer characteristic-polynomial roots yields the rows of P, then
multiplicities and the dual eigenmatrix Q follow from the orthogonality
relations.  No floating point is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .psl2 import PSL2


class NonSymmetricScheme(Exception):
    """Some class is not inverse-closed, so the orbitals are not symmetric."""


class FusionNotAScheme(Exception):
    """The requested merge of relations violates the scheme axioms."""


class IrrationalEigenvalue(Exception):
    """A characteristic polynomial has an irreducible factor of degree > 1."""


@dataclass
class Relation:
    id: int
    label: str
    class_ids: tuple[int, ...]
    size: int
    members: int  # bitmask over group elements (identity relation: the identity)


@dataclass
class EigenData:
    P: list[list[Fraction]]           # rows: eigenspaces, columns: relations
    Q: list[list[Fraction]]           # rows: relations, columns: eigenspaces
    multiplicities: list[int]


@dataclass
class AssociationScheme:
    group: PSL2
    relations: list[Relation]
    p: list[list[list[int]]]          # p[i][j][k]
    eigen: EigenData | None = None
    eigen_diagnostic: str = ""
    _rel_of: np.ndarray = field(default=None, repr=False)

    @property
    def omega(self) -> int:
        return self.group.order

    @property
    def d(self) -> int:
        return len(self.relations) - 1

    def sizes(self) -> list[int]:
        return [r.size for r in self.relations]

    def relation_of_element(self, g: int) -> int:
        return int(self._rel_of[g])

    def relation_by_label(self, label: str) -> Relation:
        for r in self.relations:
            if r.label == label:
                return r
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [r.label for r in self.relations]

    def nontrivial_labels(self) -> list[str]:
        return [r.label for r in self.relations[1:]]


def _relations_from_partition(group: PSL2, parts: list[tuple[int, ...]]) -> list[Relation]:
    classes = group.conjugacy_classes()
    # deterministic order: identity first, then by (element order, label)
    keyed = []
    for part in parts:
        labels = sorted(classes[c].label for c in part)
        order = classes[part[0]].element_order
        keyed.append((order != 1, order, labels, tuple(sorted(part))))
    keyed.sort()
    rels = []
    for rid, (_, order, labels, part) in enumerate(keyed):
        mask = 0
        size = 0
        for c in part:
            mask |= classes[c].members
            size += classes[c].size
        if len(labels) == 1:
            label = labels[0]
        else:
            # a merged relation is labelled by the order when it swallows all
            # classes of that order, else by concatenating class labels
            all_of_order = [c.id for c in classes if c.element_order == order]
            label = str(order) if set(part) == set(all_of_order) else "+".join(labels)
        rels.append(Relation(rid, label, part, size, mask))
    return rels


def _rel_of_array(group: PSL2, rels: list[Relation]) -> np.ndarray:
    class_to_rel = {}
    for r in rels:
        for c in r.class_ids:
            class_to_rel[c] = r.id
    cls = group.class_of_array()
    lookup = np.array([class_to_rel[c] for c in range(len(group.conjugacy_classes()))],
                      dtype=np.int16)
    return lookup[cls]


def _intersection_numbers(group: PSL2, rels: list[Relation], rel_of: np.ndarray,
                          check_fusion: bool) -> list[list[list[int]]]:
    n = len(rels)
    table = group.mult_table()
    inv = np.array([group.inv(i) for i in range(group.order)], dtype=np.int32)
    j_vec = rel_of
    p = [[[0] * n for _ in range(n)] for _ in range(n)]
    classes = group.conjugacy_classes()
    for rel in rels:
        reference = None
        reps = [classes[c].rep for c in rel.class_ids] if check_fusion else [classes[rel.class_ids[0]].rep]
        for rep in reps:
            i_vec = rel_of[np.asarray(table[rep])[inv]]
            counts = np.zeros((n, n), dtype=np.int64)
            np.add.at(counts, (i_vec, j_vec), 1)
            if reference is None:
                reference = counts
            elif not np.array_equal(reference, counts):
                raise FusionNotAScheme(
                    f"intersection numbers differ inside merged relation {rel.label}")
        for i in range(n):
            for j in range(n):
                p[i][j][rel.id] = int(reference[i, j])
    return p


def _verify_axioms(scheme: AssociationScheme) -> None:
    n = len(scheme.relations)
    sizes = scheme.sizes()
    p = scheme.p
    for j in range(n):
        for k in range(n):
            if p[0][j][k] != (1 if j == k else 0):
                raise FusionNotAScheme("identity relation fails p0jk = delta")
    for i in range(n):
        for j in range(n):
            if sum(p[i][j][k] * sizes[k] for k in range(n)) != sizes[i] * sizes[j]:
                raise FusionNotAScheme("row-sum identity fails")
            for k in range(n):
                if p[i][j][k] * sizes[k] != p[k][j][i] * sizes[i]:
                    raise FusionNotAScheme("size-weighted symmetry fails")


def _build_scheme(group: PSL2, parts: list[tuple[int, ...]],
                  require_eigen: bool, check_fusion: bool) -> AssociationScheme:
    classes = group.conjugacy_classes()
    for part in parts:
        inv_images = {classes[c].inverse_class for c in part}
        if inv_images != set(part):
            raise NonSymmetricScheme(
                "a relation is not inverse-closed: " +
                ",".join(classes[c].label for c in part))
    rels = _relations_from_partition(group, parts)
    if rels[0].class_ids != (group.class_of(group.identity),):
        raise FusionNotAScheme("identity class must form its own relation")
    rel_of = _rel_of_array(group, rels)
    p = _intersection_numbers(group, rels, rel_of, check_fusion)
    scheme = AssociationScheme(group, rels, p, _rel_of=rel_of)
    _verify_axioms(scheme)
    try:
        scheme.eigen = _eigen_data(scheme)
    except IrrationalEigenvalue as exc:
        if require_eigen:
            raise
        scheme.eigen_diagnostic = str(exc)
    return scheme


def group_scheme(group: PSL2) -> AssociationScheme:
    """Scheme of all conjugacy classes; refuses when a class is not real."""
    parts = [(c.id,) for c in group.conjugacy_classes()]
    return _build_scheme(group, parts, require_eigen=False, check_fusion=False)


def rational_fusion_scheme(group: PSL2) -> AssociationScheme:
    """Fusion along power-map orbits; always symmetric with rational eigenvalues."""
    parts = [tuple(o.class_ids) for o in group.fusion_orbits()]
    return _build_scheme(group, parts, require_eigen=True, check_fusion=True)


def fuse_scheme(scheme: AssociationScheme, orbit_partition: list[tuple[int, ...]],
                require_eigen: bool = True) -> AssociationScheme:
    """Merge relations of an existing scheme (identity alone in its part)."""
    seen = sorted(r for part in orbit_partition for r in part)
    if seen != list(range(len(scheme.relations))):
        raise ValueError("orbit partition must cover every relation exactly once")
    parts = []
    for part in orbit_partition:
        ids: list[int] = []
        for r in part:
            ids.extend(scheme.relations[r].class_ids)
        parts.append(tuple(ids))
    return _build_scheme(scheme.group, parts, require_eigen=require_eigen,
                         check_fusion=True)


# -- exact eigen decomposition --------------------------------------------------


def _eigen_data(scheme: AssociationScheme) -> EigenData:
    n = len(scheme.relations)
    sizes = scheme.sizes()
    mats = []
    for i in range(n):
        mats.append([[Fraction(scheme.p[i][j][k]) for k in range(n)] for j in range(n)])
    spaces: list[list[list[Fraction]]] = [[
        [Fraction(int(r == c)) for r in range(n)] for c in range(n)]]
    # columns of the identity as the initial basis of the full space
    for i in range(1, n):
        new_spaces = []
        for basis in spaces:
            if len(basis) == 1:
                new_spaces.append(basis)
                continue
            targets = [linalg.mat_vec(mats[i], v) for v in basis]
            x = linalg.solve_in_span(basis, targets)
            poly = linalg.charpoly(x)
            roots, remaining = linalg.integer_roots(poly)
            if remaining:
                raise IrrationalEigenvalue(
                    f"relation {scheme.relations[i].label}: characteristic polynomial "
                    f"has an irrational factor of degree {remaining}")
            total = 0
            for root in sorted(set(roots)):
                shifted = [[x[r][c] - (root if r == c else 0) for c in range(len(x))]
                           for r in range(len(x))]
                kernel = linalg.nullspace(shifted)
                sub = [_combine(basis, kvec) for kvec in kernel]
                if sub:
                    new_spaces.append(sub)
                    total += len(sub)
            if total != len(basis):
                raise IrrationalEigenvalue("eigenspace splitting lost dimensions")
        spaces = new_spaces
    if any(len(b) != 1 for b in spaces):
        raise IrrationalEigenvalue("common eigenspaces did not split to dimension one")
    rows = []
    for basis in spaces:
        v = basis[0]
        if v[0] == 0:
            raise IrrationalEigenvalue("eigenvector with vanishing identity coordinate")
        rows.append([x / v[0] for x in v])
    # verify the eigen equations exactly: M_i u = u_i * u
    for u in rows:
        for i in range(n):
            if linalg.mat_vec(mats[i], u) != [u[i] * x for x in u]:
                raise IrrationalEigenvalue("eigenvector verification failed")
    principal = [Fraction(s) for s in sizes]
    rows.sort(key=lambda u: (u != principal, u))
    omega = scheme.omega
    mults = []
    for u in rows:
        denom = sum(u[j] * u[j] / sizes[j] for j in range(n))
        m = Fraction(omega) / denom
        if m.denominator != 1 or m <= 0:
            raise IrrationalEigenvalue(f"non-integral multiplicity {m}")
        mults.append(int(m))
    if sum(mults) != omega:
        raise IrrationalEigenvalue("multiplicities do not sum to the vertex count")
    q = [[mults[i] * rows[i][j] / sizes[j] for i in range(n)] for j in range(n)]
    # P * Q = omega * I
    for a in range(n):
        for b in range(n):
            val = sum(rows[a][j] * q[j][b] for j in range(n))
            if val != (omega if a == b else 0):
                raise IrrationalEigenvalue("P*Q != omega*I")
    return EigenData(P=rows, Q=q, multiplicities=mults)


def _combine(basis: list[list[Fraction]], coeffs: list[Fraction]) -> list[Fraction]:
    n = len(basis[0])
    out = [Fraction(0)] * n
    for c, vec in zip(coeffs, basis):
        if c:
            for r in range(n):
                out[r] += c * vec[r]
    return out


# -- distributions and transforms ------------------------------------------------


def inner_distribution(vertices, scheme: AssociationScheme) -> tuple[Fraction, ...]:
    verts = list(vertices)
    if not verts:
        raise ValueError("inner distribution of an empty set")
    group = scheme.group
    counts = [0] * len(scheme.relations)
    for u in verts:
        for v in verts:
            counts[scheme.relation_of_element(group.mul(u, group.inv(v)))] += 1
    size = len(verts)
    return tuple(Fraction(c, size) for c in counts)


def macwilliams_transform(dist, scheme: AssociationScheme) -> tuple[Fraction, ...]:
    if scheme.eigen is None:
        raise ValueError("scheme has no exact dual eigenmatrix: " + scheme.eigen_diagnostic)
    q = scheme.eigen.Q
    n = len(scheme.relations)
    return tuple(sum((Fraction(dist[j]) * q[j][i] for j in range(n)), Fraction(0))
                 for i in range(n))


def dual_degree_set(vertices, scheme: AssociationScheme) -> frozenset[int]:
    transform = macwilliams_transform(inner_distribution(vertices, scheme), scheme)
    return frozenset(i for i in range(1, len(transform)) if transform[i] != 0)


def design_orthogonal(c1, c2, scheme: AssociationScheme) -> bool:
    return not (dual_degree_set(c1, scheme) & dual_degree_set(c2, scheme))


# -- dense checks (tests and property suites) ------------------------------------


def adjacency_matrices(scheme: AssociationScheme) -> list[np.ndarray]:
    group = scheme.group
    table = group.mult_table()
    inv = np.array([group.inv(i) for i in range(group.order)], dtype=np.int32)
    rel = scheme._rel_of[np.asarray(table)[:, inv]]
    return [(rel == r.id).astype(np.int64) for r in scheme.relations]


def projection_matrices_scaled(scheme: AssociationScheme) -> tuple[list[np.ndarray], int]:
    """Integer matrices s*E_i with one common scale s (for exact idempotency checks)."""
    if scheme.eigen is None:
        raise ValueError("scheme has no exact dual eigenmatrix")
    qmat = scheme.eigen.Q
    n = len(scheme.relations)
    denom = 1
    for j in range(n):
        for i in range(n):
            denom = denom * qmat[j][i].denominator // _gcd(denom, qmat[j][i].denominator)
    scale = scheme.omega * denom
    adj = adjacency_matrices(scheme)
    mats = []
    for i in range(n):
        acc = np.zeros_like(adj[0])
        for j in range(n):
            coeff = qmat[j][i] * denom
            acc += int(coeff) * adj[j]
        mats.append(acc)
    return mats, scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a

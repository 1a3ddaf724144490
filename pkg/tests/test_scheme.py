import random
from fractions import Fraction

import numpy as np
import pytest

from diagsync.psl2 import build_group, mask_elements, sylow_subgroup
from diagsync.scheme import (
    FusionNotAScheme,
    IrrationalEigenvalue,
    NonSymmetricScheme,
    adjacency_matrices,
    design_orthogonal,
    dual_degree_set,
    fuse_scheme,
    group_scheme,
    inner_distribution,
    macwilliams_transform,
    projection_matrices_scaled,
    rational_fusion_scheme,
)


def frac(values):
    return tuple(Fraction(v) for v in values)


def test_group_scheme_q13_shape():
    s = group_scheme(build_group(13))
    assert len(s.relations) == 9
    assert sum(s.sizes()) == 1092
    assert s.eigen is None and "irrational" in s.eigen_diagnostic
    # p_{0j}^k = delta_jk comes out of the axioms check at build time
    assert s.p[0][3][3] == 1 and s.p[0][3][2] == 0


def test_group_scheme_rejects_non_real_classes():
    with pytest.raises(NonSymmetricScheme):
        group_scheme(build_group(7))


def test_rational_fusion_always_symmetric_q7():
    s = rational_fusion_scheme(build_group(7))
    assert s.eigen is not None
    assert [r.label for r in s.relations] == ["1", "2", "3", "4", "7"]


def test_fused_q13_eigen_rows():
    s = rational_fusion_scheme(build_group(13))
    assert s.labels() == ["1", "2", "3", "6", "7", "13"]
    q = s.eigen.Q
    by_label = {r.label: q[r.id] for r in s.relations}
    # the dual eigenvalue rows for the order-6 and order-7 relations,
    # as multisets of integers (column order is our canonical one)
    assert sorted(by_label["6"]) == sorted(frac([1, -14, 0, 13, -14, 14]))
    assert sorted(by_label["7"]) == sorted(frac([1, 0, 12, -13, 0, 0]))
    assert s.eigen.multiplicities[0] == 1
    assert sorted(s.eigen.multiplicities) == [1, 98, 169, 196, 196, 432]


def test_scheme_axioms_exhaustive_q9():
    s = rational_fusion_scheme(build_group(9))
    adj = adjacency_matrices(s)
    n = len(s.relations)
    total = np.zeros_like(adj[0])
    for a in adj:
        total += a
    assert (total == 1).all()
    assert (adj[0] == np.eye(s.omega, dtype=np.int64)).all()
    for i in range(n):
        for j in range(n):
            prod = adj[i] @ adj[j]
            expected = np.zeros_like(prod)
            for k in range(n):
                expected += s.p[i][j][k] * adj[k]
            assert (prod == expected).all()


@pytest.mark.parametrize("q", [5, 8, 9, 13])
def test_projection_idempotents(q):
    s = rational_fusion_scheme(build_group(q))
    if s.omega <= 600:
        mats, scale = projection_matrices_scaled(s)
        for i, a in enumerate(mats):
            for j, b in enumerate(mats):
                prod = a @ b
                assert (prod == (scale * a if i == j else 0)).all()
    else:
        # random-vector check: F_i F_j v == delta_ij F_i v
        mats, scale = projection_matrices_scaled(s)
        rng = np.random.default_rng(5)
        v = rng.integers(-3, 4, size=s.omega)
        images = [a @ v for a in mats]
        for i, a in enumerate(mats):
            for j in range(len(mats)):
                assert ((a @ images[j]) == (scale * images[i] if i == j else 0)).all()


def test_inner_distribution_examples_q13():
    g = build_group(13)
    s = rational_fusion_scheme(g)
    syl = mask_elements(sylow_subgroup(g, 13))
    # canonical relation order (1, 2, 3, 6, 7, 13)
    assert inner_distribution(syl, s) == frac([1, 0, 0, 0, 0, 12])
    assert inner_distribution([g.identity], s) == frac([1, 0, 0, 0, 0, 0])
    assert inner_distribution(range(g.order), s) == frac([1, 91, 182, 182, 468, 168])


def test_macwilliams_examples_q13():
    g = build_group(13)
    s = rational_fusion_scheme(g)
    t = macwilliams_transform(frac([1, 0, 0, 0, 0, 12]), s)
    assert t[0] == 13 and sorted(t) == list(frac([0, 13, 169, 182, 364, 364]))
    t0 = macwilliams_transform(frac([1, 0, 0, 0, 0, 0]), s)
    assert t0 == tuple(Fraction(m) for m in [1] + s.eigen.multiplicities[1:])
    # distribution of a hypothetical 84-element coclique partner, canonical order
    t84 = macwilliams_transform(frac([1, 7, 14, 14, 48, 0]), s)
    assert t84[0] == 84 and sorted(t84) == list(frac([0, 0, 0, 0, 84, 1008]))


def test_dual_degree_and_design_orthogonality():
    g = build_group(13)
    s = rational_fusion_scheme(g)
    everything = list(range(g.order))
    assert dual_degree_set(everything, s) == frozenset()
    assert design_orthogonal([g.identity], everything, s)
    assert not design_orthogonal([g.identity], [5], s)
    syl = mask_elements(sylow_subgroup(g, 13))
    assert dual_degree_set(syl, s) != frozenset()


def test_fuse_scheme_full_merge_and_errors():
    g = build_group(13)
    s = rational_fusion_scheme(g)
    merged = fuse_scheme(s, [(0,), (1, 2, 3, 4, 5)])
    assert len(merged.relations) == 2
    assert merged.eigen.Q == [[Fraction(1), Fraction(1091)], [Fraction(1), Fraction(-1)]]
    with pytest.raises(ValueError):
        fuse_scheme(s, [(0, 1), (1, 2, 3, 4, 5)])


def test_partial_fusion_rejected_q13():
    # merging only two of the three order-7 classes breaks the axioms
    g = build_group(13)
    u = group_scheme(g)
    ids = {r.label: r.id for r in u.relations}
    part = [(ids["1"],), (ids["2"],), (ids["3"],), (ids["6"],),
            (ids["7A"], ids["7B"]), (ids["7C"],), (ids["13A"], ids["13B"])]
    with pytest.raises((FusionNotAScheme, IrrationalEigenvalue)):
        fuse_scheme(u, part)


def test_delsarte_bound_random_pairs_q9():
    g = build_group(9)
    s = rational_fusion_scheme(g)
    rng = random.Random(7)
    conn = s.relations[2].members | s.relations[4].members
    elems = list(range(g.order))

    def adjacent(u, v):
        return (conn >> g.mul(u, g.inv(v))) & 1

    for _ in range(50):
        # greedy random clique and coclique
        clique, coclique = [], []
        for v in rng.sample(elems, 120):
            if all(adjacent(v, u) for u in clique):
                clique.append(v)
            if all(not adjacent(v, u) for u in coclique) and v not in clique:
                coclique.append(v)
        assert len(clique) * len(coclique) <= g.order

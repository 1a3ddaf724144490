import pytest

from diagsync.certify import (
    AT_MOST_ONE,
    EXACTLY_ONE,
    PROVEN_INFEASIBLE,
    PROVEN_OPTIMUM,
    export_lp,
    generate_translate_rows,
    solve_cover_ilp,
)
from diagsync.graphs import build_graph
from diagsync.psl2 import build_group, mask_elements, sylow_subgroup
from diagsync.search import Budget, verify_coclique


@pytest.fixture(scope="module")
def sys13():
    g = build_group(13)
    graph = build_graph(g, ["13"])
    base = mask_elements(sylow_subgroup(g, 13))
    return generate_translate_rows(graph, base)


def test_row_generation_structure(sys13):
    # 14 conjugate subgroups, 84 cosets each, all verified cliques
    assert len(sys13.rows) == 1176
    assert len(sys13.partitions) == 14
    assert sys13.edges_covered
    assert all(mask.bit_count() == 13 for mask in sys13.rows)
    base_mask = 0
    for v in sys13.base_clique:
        base_mask |= 1 << v
    assert base_mask in sys13.rows
    # rows pairwise distinct
    assert len(set(sys13.rows)) == len(sys13.rows)


def test_row_generation_rejects_non_clique():
    g = build_group(13)
    graph = build_graph(g, ["13"])
    involution = next(i for i in range(g.order) if g.element_order(i) == 2)
    with pytest.raises(ValueError):
        generate_translate_rows(graph, [g.identity, involution])


def test_partitions_partition(sys13):
    n = sys13.graph.vertex_count
    for part in sys13.partitions:
        total = 0
        union = 0
        for ri in part:
            union |= sys13.rows[ri]
            total += sys13.rows[ri].bit_count()
        assert union == (1 << n) - 1 and total == n


def test_trivial_system_single_row():
    g = build_group(13)
    graph = build_graph(g, ["13"])
    base = mask_elements(sylow_subgroup(g, 13))
    sys_small = generate_translate_rows(graph, base)
    # packing one vertex per row, verified as a coclique where applicable
    res = solve_cover_ilp(sys_small, AT_MOST_ONE,
                          budget=Budget(max_nodes=30000, max_seconds=30))
    assert res.lower >= 1
    assert res.upper is None or res.lower <= res.upper <= 84


def test_exactly_one_84_proven_infeasible(sys13):
    pair_budget = {"2": 294, "3": 588, "6": 588, "7": 2016, "13": 0}
    res = solve_cover_ilp(sys13, EXACTLY_ONE, target_size=84,
                          budget=Budget(max_nodes=10 ** 8, max_seconds=600),
                          pair_budget=pair_budget)
    assert res.status == PROVEN_INFEASIBLE
    assert res.target == 84


def test_exactly_one_feasible_small_case():
    # PSL(2,5) = A4 * C5 exactly, so a 12-element coclique of the order-5
    # graph meets every coset of every Sylow-5 subgroup exactly once
    g = build_group(5)
    graph = build_graph(g, ["5"])
    base = mask_elements(sylow_subgroup(g, 5))
    system = generate_translate_rows(graph, base)
    assert system.partitions
    res = solve_cover_ilp(system, EXACTLY_ONE, target_size=12,
                          budget=Budget(max_nodes=10 ** 7, max_seconds=120))
    assert res.status == "FEASIBLE"
    assert len(res.witness) == 12
    assert verify_coclique(graph, res.witness)


def test_single_row_system_pure_packing():
    # with one row and no edge coverage, the packing optimum is everything
    # outside the row plus one vertex inside it
    from diagsync.certify import TranslateRowSystem
    g = build_group(5)
    graph = build_graph(g, ["5"])
    base = tuple(mask_elements(sylow_subgroup(g, 5)))
    mask = 0
    for v in base:
        mask |= 1 << v
    system = TranslateRowSystem(graph, base, [mask], "single row", [],
                                edges_covered=False, translation_closed=False)
    res = solve_cover_ilp(system, AT_MOST_ONE, budget=Budget(max_seconds=60),
                          pin_first=False)
    assert res.status == PROVEN_OPTIMUM
    assert res.lower == g.order - len(base) + 1


def test_export_lp_roundtrip(sys13):
    data = export_lp(sys13, AT_MOST_ONE).decode()
    lines = data.splitlines()
    assert lines[4] == "Maximize"
    assert sum(1 for ln in lines if ln.startswith(" r")) == 1176
    assert "Binary" in lines and lines[-1] == "End"
    # determinism
    assert data == export_lp(sys13, AT_MOST_ONE).decode()
    # one binary declaration per group element
    binary_at = lines.index("Binary")
    decls = lines[binary_at + 1:-1]
    assert decls == [f" v{i}" for i in range(1092)]


def test_export_lp_toy_parse():
    g = build_group(9)
    graph = build_graph(g, ["5"])
    from diagsync.search import algebraic_clique_seeds
    base = algebraic_clique_seeds(graph)[0]
    system = generate_translate_rows(graph, base)
    text = export_lp(system, EXACTLY_ONE, target_size=4).decode()
    # parse back constraints and check counts line up
    cons = [ln for ln in text.splitlines() if ln.startswith(" r")]
    assert len(cons) == len(system.rows)
    first = cons[0]
    assert first.endswith("= 1")
    terms = first.split(":")[1].split("=")[0].split("+")
    assert len(terms) == system.row_size
    assert " size: " in text

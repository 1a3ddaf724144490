"""Exact maximum clique / coclique search on class-union Cayley graphs.

The solver is a bitset branch-and-bound with greedy-coloring bounds.  Vertex
transitivity is exploited twice: every search is pinned to cliques through
the identity (any clique translates to one), and the second vertex ranges
over one representative per conjugacy class of the connection set (the
stabilizer of the identity vertex induces conjugation, and inversion is also
an automorphism fixing the identity).  Algebraic seeds (subgroup cliques and
unions of subgroup cosets) provide strong incumbents before any branching.

Certificates record the witness and whether the search was exhaustive; an
independent pairwise verifier re-checks every witness against the adjacency
oracle, so a defective search can never produce an accepted certificate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .graphs import ClassUnionGraph, complement_graph
from .psl2 import (
    PSL2,
    alternating_type_subgroup,
    borel_subgroup,
    cyclic_subgroup,
    dihedral_subgroup,
    mask_elements,
    stabilizer_torus_element,
    sylow_subgroup,
    unipotent_subgroup,
)


@dataclass
class Budget:
    max_nodes: int = 10 ** 9
    max_seconds: float = 1800.0

    def start(self) -> "_Meter":
        return _Meter(self.max_nodes, time.monotonic() + self.max_seconds)


@dataclass
class _Meter:
    max_nodes: int
    deadline: float
    nodes: int = 0
    exhausted: bool = False

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.max_nodes or \
                (self.nodes % 2048 == 0 and time.monotonic() > self.deadline):
            self.exhausted = True
        return self.exhausted


@dataclass
class SearchCertificate:
    kind: str                      # "clique" or "coclique"
    graph: dict
    vertices: tuple[int, ...]
    size: int
    exhaustive: bool
    nodes: int
    elapsed: float
    seed: int
    method: str
    target: int | None = None      # decision searches only
    verified: bool = field(default=False)

    def payload(self) -> dict:
        return {
            "kind": self.kind, "graph": self.graph,
            "vertices": list(self.vertices), "size": self.size,
            "exhaustive": self.exhaustive, "nodes": self.nodes,
            "elapsed": round(self.elapsed, 3), "seed": self.seed,
            "method": self.method, "target": self.target,
        }


FOUND = "FOUND"
NONE = "NONE"
EXHAUSTED = "BUDGET_EXHAUSTED"


def verify_clique(graph: ClassUnionGraph, vertices) -> bool:
    verts = list(vertices)
    if len(set(verts)) != len(verts):
        return False
    return all(graph.adjacent(u, v)
               for i, u in enumerate(verts) for v in verts[i + 1:])


def verify_coclique(graph: ClassUnionGraph, vertices) -> bool:
    verts = list(vertices)
    if len(set(verts)) != len(verts):
        return False
    return all(not graph.adjacent(u, v)
               for i, u in enumerate(verts) for v in verts[i + 1:])


# -- algebraic seeds --------------------------------------------------------------


def _candidate_subgroups(group: PSL2) -> list[int]:
    """A library of subgroups whose cliques tend to be extremal."""
    cached = getattr(group, "_seed_subgroups", None)
    if cached is not None:
        return cached
    subs: set[int] = set()
    seen_cyclic: set[int] = set()
    for g in range(group.order):
        if g == group.identity:
            continue
        mask = cyclic_subgroup(group, g)
        if mask not in seen_cyclic:
            seen_cyclic.add(mask)
            subs.add(mask)
    for m in sorted({group.element_order(g) for g in range(group.order)} - {1, 2}):
        d = dihedral_subgroup(group, m)
        if d:
            subs.add(d)
    n = group.order
    r = 2
    while r <= n:
        if n % r == 0:
            s = sylow_subgroup(group, r)
            if s:
                subs.add(s)
            while n % r == 0:
                n //= r
        r += 1
    borel = borel_subgroup(group)
    subs.add(borel)
    torus = stabilizer_torus_element(group)
    m1 = group.element_order(torus)
    uni = mask_elements(unipotent_subgroup(group))
    for k in range(1, m1 + 1):
        if m1 % k == 0:
            step = _pow_elt(group, torus, m1 // k)
            sub = set(uni)
            frontier = list(uni)
            gens = uni + [step]
            while frontier:
                new = []
                for x in frontier:
                    for gg in gens:
                        y = group.mul(x, gg)
                        if y not in sub:
                            sub.add(y)
                            new.append(y)
                frontier = new
            m = 0
            for x in sub:
                m |= 1 << x
            subs.add(m)
    for kind in ("A4", "S4", "A5"):
        a = alternating_type_subgroup(group, kind)
        if a:
            subs.add(a)
    out = sorted(subs)
    group._seed_subgroups = out
    return out


def _pow_elt(group: PSL2, g: int, n: int) -> int:
    out = group.identity
    x = g
    while n:
        if n & 1:
            out = group.mul(out, x)
        x = group.mul(x, x)
        n >>= 1
    return out


def algebraic_clique_seeds(graph: ClassUnionGraph) -> list[tuple[int, ...]]:
    """Verified cliques from subgroups and unions of subgroup cosets."""
    group = graph.group
    conn = graph.connection
    idbit = 1 << group.identity
    seeds: list[tuple[int, ...]] = []
    subgroup_cliques: list[int] = []
    for mask in _candidate_subgroups(group):
        if mask & ~(conn | idbit):
            continue
        subgroup_cliques.append(mask)
        seeds.append(tuple(mask_elements(mask)))
    # coset-union extension on the larger subgroup cliques
    for mask in subgroup_cliques:
        h = mask_elements(mask)
        if len(h) < 7 or group.order // len(h) > 120:
            continue
        union = _best_coset_union(graph, h, mask)
        if union and len(union) > len(h):
            seeds.append(union)
    seeds.sort(key=len, reverse=True)
    return seeds


def _best_coset_union(graph: ClassUnionGraph, h: list[int], hmask: int):
    """Largest union of right cosets of H that forms a clique (exact, small)."""
    group = graph.group
    conn = graph.connection
    idbit = 1 << group.identity
    reps = []
    seen = 0
    for x in range(group.order):
        if not (seen >> x) & 1:
            coset = [group.mul(hh, x) for hh in h]
            for y in coset:
                seen |= 1 << y
            reps.append(x)
    ok_dcoset: dict[int, bool] = {}

    def compatible(x: int, y: int) -> bool:
        z = group.mul(x, group.inv(y))
        hit = ok_dcoset.get(z)
        if hit is None:
            good = True
            for h1 in h:
                t = group.mul(h1, z)
                for h2 in h:
                    q = group.mul(t, h2)
                    if not (conn >> q) & 1:
                        good = False
                        break
                if not good:
                    break
            ok_dcoset[z] = good
            hit = good
        return hit

    m = len(reps)
    adj = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if compatible(reps[i], reps[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    meter = _Meter(200000, time.monotonic() + 5.0)
    best_size, best_mask, _ = _bb_max_clique(adj, 1, meter)
    if best_size <= 1:
        return None
    out = []
    bm = best_mask
    while bm:
        low = bm & -bm
        x = reps[low.bit_length() - 1]
        out.extend(group.mul(hh, x) for hh in h)
        bm ^= low
    out = tuple(sorted(out))
    return out if verify_clique(graph, out) else None


# -- core branch and bound ---------------------------------------------------------


class _Hit(Exception):
    def __init__(self, mask: int):
        self.mask = mask


def _bb_max_clique(adj: list[int], lower: int, meter: _Meter,
                   target: int | None = None):
    """Max clique on a small graph given as local adjacency masks.

    Returns (best_size, best_mask, complete).  With target set, stops as soon
    as a clique of that size is found (best never rises above target).
    """
    n = len(adj)
    order = _degeneracy_order(adj)
    pos = {v: i for i, v in enumerate(order)}
    radj = [0] * n
    for v in range(n):
        m = adj[v]
        nm = 0
        while m:
            low = m & -m
            nm |= 1 << pos[low.bit_length() - 1]
            m ^= low
        radj[pos[v]] = nm
    state = {"best": lower if target is None else min(lower, target - 1),
             "mask": 0, "complete": True}
    full = (1 << n) - 1

    def expand(rsize: int, rmask: int, cand: int):
        if meter.tick():
            state["complete"] = False
            return
        best = state["best"]
        if rsize + cand.bit_count() <= best:
            return
        if not cand:
            if rsize > best:
                state["best"] = rsize
                state["mask"] = rmask
                if target is not None and rsize >= target:
                    raise _Hit(rmask)
            return
        adj_l = radj
        order_v = []
        bounds = []
        append_v = order_v.append
        append_b = bounds.append
        m = cand
        color = 0
        while m:
            color += 1
            avail = m
            while avail:
                b = avail & -avail
                v = b.bit_length() - 1
                avail &= ~(adj_l[v] | b)
                m ^= b
                append_v(v)
                append_b(color)
        p = cand
        for i in range(len(order_v) - 1, -1, -1):
            if rsize + bounds[i] <= state["best"]:
                return
            v = order_v[i]
            bit = 1 << v
            sub = p & adj_l[v]
            if sub:
                expand(rsize + 1, rmask | bit, sub)
                if meter.exhausted:
                    state["complete"] = False
                    return
            elif rsize + 1 > state["best"]:
                state["best"] = rsize + 1
                state["mask"] = rmask | bit
                if target is not None and rsize + 1 >= target:
                    raise _Hit(rmask | bit)
            p &= ~bit
    try:
        expand(0, 0, full)
    except _Hit as hit:
        local_mask = hit.mask
        out = 0
        m = local_mask
        while m:
            low = m & -m
            out |= 1 << order[low.bit_length() - 1]
            m ^= low
        return target, out, False
    out = 0
    m = state["mask"]
    while m:
        low = m & -m
        out |= 1 << order[low.bit_length() - 1]
        m ^= low
    return state["best"], out, state["complete"]


def _degeneracy_order(adj: list[int]) -> list[int]:
    n = len(adj)
    alive = (1 << n) - 1
    deg = [adj[v].bit_count() for v in range(n)]
    order = []
    for _ in range(n):
        best_v, best_d = -1, None
        m = alive
        while m:
            low = m & -m
            v = low.bit_length() - 1
            d = (adj[v] & alive).bit_count()
            if best_d is None or d < best_d:
                best_v, best_d = v, d
            m ^= low
        order.append(best_v)
        alive &= ~(1 << best_v)
    return order


# -- pinned searches over the whole Cayley graph -------------------------------------


def _class_reps_in_connection(graph: ClassUnionGraph) -> list[int]:
    group = graph.group
    classes = group.conjugacy_classes()
    reps = []
    seen = set()
    for cid in graph.class_ids:
        key = min(cid, classes[cid].inverse_class)
        if key not in seen:
            seen.add(key)
            reps.append(classes[key].rep)
    return reps


def _centralizer_orbits(group: PSL2, rep: int, cand_mask: int) -> list[tuple[int, int]]:
    """Orbits of the centralizer of rep (acting by conjugation) on a vertex set.

    Conjugation by a centralizer element fixes both the identity vertex and
    rep, so within the pinned search the candidates can be explored one orbit
    representative at a time.  Returns (min_vertex, orbit_mask) pairs.
    """
    cent = [c for c in range(group.order)
            if group.mul(c, rep) == group.mul(rep, c)]
    orbits: list[tuple[int, int]] = []
    remaining = cand_mask
    while remaining:
        low = remaining & -remaining
        v = low.bit_length() - 1
        omask = 0
        for c in cent:
            omask |= 1 << group.mul(group.mul(group.inv(c), v), c)
        omask &= cand_mask
        orbits.append((v, omask))
        remaining &= ~omask
    return orbits


def _localize(graph: ClassUnionGraph, cand_mask: int):
    verts = mask_elements(cand_mask)
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for i, v in enumerate(verts):
        m = graph.neighbors(v) & cand_mask
        loc = 0
        while m:
            low = m & -m
            loc |= 1 << index[low.bit_length() - 1]
            m ^= low
        adj[i] = loc
    return verts, adj


def _pinned_tasks(graph: ClassUnionGraph, floor_size: int):
    """Deterministic list of (rep, v, cand_mask) subproblems covering the search.

    Branching at level two runs over class representatives in order; branch i
    commits to a clique meeting class i, so later branches exclude the whole
    class (any clique through the identity conjugates to one whose
    least-ranked class vertex is the representative).  Level three applies
    the same idea to centralizer orbits.
    """
    group = graph.group
    classes = group.conjugacy_classes()
    tasks = []
    excluded = 0
    for rep in _class_reps_in_connection(graph):
        cid = group.class_of(rep)
        pair_mask = graph.neighbors(group.identity) & graph.neighbors(rep)
        pair_mask &= ~((1 << group.identity) | (1 << rep) | excluded)
        excluded |= classes[cid].members | classes[classes[cid].inverse_class].members
        if pair_mask.bit_count() + 2 <= floor_size:
            continue
        processed = 0
        for v, omask in _centralizer_orbits(group, rep, pair_mask):
            cand_mask = pair_mask & ~processed & graph.neighbors(v)
            processed |= omask
            tasks.append((rep, v, cand_mask))
    return tasks


_POOL_GRAPH: ClassUnionGraph | None = None


def _pool_solve(args):
    rep, v, cand_mask, lower, target, max_nodes, seconds = args
    meter = _Meter(max_nodes, time.monotonic() + seconds)
    verts, adj = _localize(_POOL_GRAPH, cand_mask)
    size, mask, ok = _bb_max_clique(adj, lower, meter, target=target)
    found = []
    m = mask
    while m:
        low = m & -m
        found.append(verts[low.bit_length() - 1])
        m ^= low
    return size, found, ok, meter.nodes


def max_clique(graph: ClassUnionGraph, budget: Budget | None = None,
               seed: int = 0, threads: int = 1) -> SearchCertificate:
    """Exact maximum clique; exhaustive unless the budget runs out.

    With threads > 1 the pinned subproblems run in worker processes; the
    proven optimum does not depend on the worker count.
    """
    budget = budget or Budget()
    t0 = time.monotonic()
    meter = budget.start()
    group = graph.group
    best = max(algebraic_clique_seeds(graph), key=len, default=(group.identity,))
    best_size = len(best)
    complete = True
    tasks = _pinned_tasks(graph, best_size)
    pending = []
    for rep, v, cand_mask in tasks:
        if cand_mask.bit_count() + 3 <= best_size:
            continue
        pending.append((rep, v, cand_mask))
    if threads <= 1 or len(pending) < 4:
        for rep, v, cand_mask in pending:
            if cand_mask.bit_count() + 3 <= best_size:
                continue
            verts, adj = _localize(graph, cand_mask)
            size, mask, ok = _bb_max_clique(adj, best_size - 3, meter)
            complete = complete and ok
            if size + 3 > best_size:
                found = [group.identity, rep, v]
                m = mask
                while m:
                    low = m & -m
                    found.append(verts[low.bit_length() - 1])
                    m ^= low
                best = tuple(sorted(found))
                best_size = len(best)
            if meter.exhausted:
                complete = False
                break
    else:
        # warm the incumbent on the first subproblem, then fan out
        import multiprocessing as mp
        rep0, v0, cand0 = pending[0]
        verts, adj = _localize(graph, cand0)
        size, mask, ok = _bb_max_clique(adj, best_size - 3, meter)
        complete = ok
        if size + 3 > best_size:
            found = [group.identity, rep0, v0]
            m = mask
            while m:
                low = m & -m
                found.append(verts[low.bit_length() - 1])
                m ^= low
            best = tuple(sorted(found))
            best_size = len(best)
        remaining = max(5.0, budget.max_seconds - (time.monotonic() - t0))
        global _POOL_GRAPH
        _POOL_GRAPH = graph
        graph.neighbors(group.identity)  # ensure caches exist before fork
        ctx = mp.get_context("fork")
        args = [(rep, v, cand, best_size - 3, None, budget.max_nodes, remaining)
                for rep, v, cand in pending[1:]]
        with ctx.Pool(processes=threads) as pool:
            for (size, found, ok, nodes), (rep, v, _) in zip(
                    pool.imap(_pool_solve, args), pending[1:]):
                meter.nodes += nodes
                complete = complete and ok
                if size + 3 > best_size:
                    cand_best = tuple(sorted([group.identity, rep, v] + found))
                    if verify_clique(graph, cand_best):
                        best = cand_best
                        best_size = len(best)
        _POOL_GRAPH = None
    cert = SearchCertificate(
        kind="clique", graph=graph.descriptor(), vertices=tuple(sorted(best)),
        size=best_size, exhaustive=complete, nodes=meter.nodes,
        elapsed=time.monotonic() - t0, seed=seed,
        method="pinned-bb" + (f"-x{threads}" if threads > 1 else ""))
    cert.verified = verify_clique(graph, cert.vertices)
    if not cert.verified:
        raise AssertionError("search produced an invalid clique witness")
    return cert


def max_coclique(graph: ClassUnionGraph, budget: Budget | None = None,
                 seed: int = 0, threads: int = 1) -> SearchCertificate:
    """Exact maximum coclique via the complement graph's cliques."""
    cert = max_clique(complement_graph(graph), budget, seed, threads)
    out = SearchCertificate(
        kind="coclique", graph=graph.descriptor(), vertices=cert.vertices,
        size=cert.size, exhaustive=cert.exhaustive, nodes=cert.nodes,
        elapsed=cert.elapsed, seed=seed, method=cert.method)
    out.verified = verify_coclique(graph, out.vertices)
    if not out.verified:
        raise AssertionError("search produced an invalid coclique witness")
    return out


def find_clique_of_size(graph: ClassUnionGraph, k: int,
                        distribution: dict[str, int] | None = None,
                        budget: Budget | None = None, seed: int = 0):
    """Decision search: a clique of size exactly k, a proven NONE, or EXHAUSTED.

    distribution, when given, maps class labels to the exact number of
    unordered within-clique pairs whose quotient lies in that class; found
    witnesses are filtered against it.
    """
    budget = budget or Budget()
    t0 = time.monotonic()
    meter = budget.start()
    group = graph.group
    if k <= 0 or k > graph.vertex_count:
        raise ValueError("clique size out of range")
    if k == 1:
        cert = _decision_cert(graph, (group.identity,), True, meter, t0, seed, k)
        return FOUND, cert
    for seed_clique in algebraic_clique_seeds(graph):
        if len(seed_clique) >= k:
            for sub in (seed_clique[:k],):
                if verify_clique(graph, sub) and _matches(graph, sub, distribution):
                    return FOUND, _decision_cert(graph, sub, False, meter, t0, seed, k)
    if k == 2:
        reps = _class_reps_in_connection(graph)
        if reps:
            return FOUND, _decision_cert(graph, (group.identity, reps[0]), False,
                                         meter, t0, seed, k)
        return NONE, _decision_cert(graph, (), True, meter, t0, seed, k)
    complete = True
    for rep, v, cand_mask in _pinned_tasks(graph, k - 1 if k > 3 else 2):
        if k == 3:
            witness = tuple(sorted((group.identity, rep, v)))
            if _matches(graph, witness, distribution):
                return FOUND, _decision_cert(graph, witness, False, meter, t0, seed, k)
            complete = False
            continue
        if cand_mask.bit_count() + 3 < k:
            continue
        verts, adj = _localize(graph, cand_mask)
        size, mask, ok = _bb_max_clique(adj, k - 4, meter, target=k - 3)
        if size == k - 3 and mask:
            found = [group.identity, rep, v]
            m = mask
            while m:
                low = m & -m
                found.append(verts[low.bit_length() - 1])
                m ^= low
            witness = tuple(sorted(found))
            if _matches(graph, witness, distribution):
                return FOUND, _decision_cert(graph, witness, False, meter, t0, seed, k)
            complete = False  # witness rejected by distribution: not exhaustive
        complete = complete and ok
        if meter.exhausted:
            complete = False
            break
    if complete:
        return NONE, _decision_cert(graph, (), True, meter, t0, seed, k)
    return EXHAUSTED, _decision_cert(graph, (), False, meter, t0, seed, k)


def _matches(graph: ClassUnionGraph, vertices, distribution) -> bool:
    if distribution is None:
        return True
    group = graph.group
    fused = group.fusion_orbits()
    counts: dict[str, int] = {}
    verts = list(vertices)
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            lab = fused[group.conjugacy_classes()[
                group.class_of(group.mul(u, group.inv(v)))].fusion_orbit].label
            counts[lab] = counts.get(lab, 0) + 1
    return counts == {k: v for k, v in distribution.items() if v}


def _decision_cert(graph, vertices, exhaustive, meter, t0, seed, k):
    cert = SearchCertificate(
        kind="clique", graph=graph.descriptor(), vertices=tuple(vertices),
        size=len(vertices), exhaustive=exhaustive, nodes=meter.nodes,
        elapsed=time.monotonic() - t0, seed=seed, method="pinned-bb-decision",
        target=k)
    if vertices:
        cert.verified = verify_clique(graph, cert.vertices)
        if not cert.verified:
            raise AssertionError("decision search produced an invalid witness")
    else:
        cert.verified = True
    return cert

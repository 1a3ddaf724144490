"""Covering programs built from clique translates, and their exact solution.

Given a verified clique C of a class-union graph, the automorphisms generated
by two-sided translations (plus inversion and the diagonal/field outer maps)
move C around the vertex set; each image is again a clique.  Collecting the
distinct images as rows yields the packing system

    maximize sum(v)   subject to   sum(v_t for t in row) <= 1,  v binary,

whose optimum bounds the coclique number from above whenever every edge of
the graph lies inside some row (verified explicitly and recorded).  The
EXACTLY_ONE sense instead asks for an independent set of a given size meeting
every row precisely once, which is the regime of the equality case of the
clique-coclique bound; its proven infeasibility refutes that size.

The internal solver is a propagation-based exact branch-and-bound over binary
choices (no floating point); the LP export provides the same model in a
solver-neutral text format for external reproduction.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .graphs import ClassUnionGraph
from .psl2 import PSL2, mask_elements
from .search import Budget, verify_clique

AT_MOST_ONE = "AT_MOST_ONE"
EXACTLY_ONE = "EXACTLY_ONE"

PROVEN_OPTIMUM = "PROVEN_OPTIMUM"
PROVEN_INFEASIBLE = "PROVEN_INFEASIBLE"
FEASIBLE = "FEASIBLE"
BRACKET = "BUDGET_BRACKET"


@dataclass
class TranslateRowSystem:
    graph: ClassUnionGraph
    base_clique: tuple[int, ...]
    rows: list[int]                      # bitmask per row
    generator_note: str
    partitions: list[list[int]]          # row-index families partitioning the vertices
    edges_covered: bool
    translation_closed: bool

    @property
    def row_size(self) -> int:
        return len(self.base_clique)

    def descriptor(self) -> dict:
        return {
            "graph": self.graph.descriptor(),
            "base_clique": list(self.base_clique),
            "rows": len(self.rows),
            "row_size": self.row_size,
            "partitions": len(self.partitions),
            "edges_covered": self.edges_covered,
            "generators": self.generator_note,
        }


@dataclass
class CoverBound:
    sense: str
    status: str
    lower: int                  # size of the best verified packing found
    upper: int | None           # proven upper bound for the optimum (AT_MOST_ONE)
    target: int | None
    witness: tuple[int, ...]
    nodes: int
    elapsed: float
    system: dict
    notes: list[str] = field(default_factory=list)

    def payload(self) -> dict:
        return {
            "sense": self.sense, "status": self.status, "lower": self.lower,
            "upper": self.upper, "target": self.target,
            "witness": list(self.witness), "nodes": self.nodes,
            "elapsed": round(self.elapsed, 3), "system": self.system,
            "notes": self.notes,
        }


# -- row generation ----------------------------------------------------------------


def _frobenius_perm(group: PSL2) -> list[int] | None:
    f = group.field
    if f.e == 1:
        return None
    p = f.p
    out = []
    for a, b, c, d in group.elements:
        m = group.canonical((f.pow(a, p), f.pow(b, p), f.pow(c, p), f.pow(d, p)))
        out.append(group.index[m])
    return out


def _diagonal_outer_perm(group: PSL2) -> list[int]:
    """Conjugation by diag(nu, 1) for a fixed non-square nu (PGL outer map)."""
    f = group.field
    squares = f.squares()
    nu = next(z for z in range(1, f.q) if z not in squares)
    nu_inv = f.inv(nu)
    out = []
    for a, b, c, d in group.elements:
        m = group.canonical((a, f.mul(b, nu_inv), f.mul(c, nu), d))
        out.append(group.index[m])
    return out


def generate_translate_rows(graph: ClassUnionGraph, clique) -> TranslateRowSystem:
    """Distinct images of a verified clique under translations and outer maps."""
    group = graph.group
    base = tuple(sorted(clique))
    if not verify_clique(graph, base):
        raise ValueError("base set is not a clique of the graph")
    gens = group.generators()
    perms: list[list[int]] = []
    frob = _frobenius_perm(group)
    if frob:
        perms.append(frob)
    if group.q % 2:
        perms.append(_diagonal_outer_perm(group))

    def as_mask(verts) -> int:
        m = 0
        for v in verts:
            m |= 1 << v
        return m

    # conjugates of the base set (orbit under conjugation and outer maps)
    seen_shapes = {frozenset(base)}
    shapes = [tuple(base)]
    frontier = [tuple(base)]
    while frontier:
        new = []
        for shape in frontier:
            images = []
            for g in gens:
                gi = group.inv(g)
                images.append(tuple(group.mul(group.mul(gi, x), g) for x in shape))
            for perm in perms:
                images.append(tuple(perm[x] for x in shape))
            images.append(tuple(group.inv(x) for x in shape))
            for img in images:
                key = frozenset(img)
                if key not in seen_shapes:
                    seen_shapes.add(key)
                    shapes.append(img)
                    new.append(img)
        frontier = new
    # right translates of every conjugate shape
    rows: list[int] = []
    row_index: dict[int, int] = {}
    partitions: list[list[int]] = []
    n = group.order
    for shape in shapes:
        group_rows_set = set()
        for t in range(n):
            img = [group.mul(x, t) for x in shape]
            mask = as_mask(img)
            ridx = row_index.get(mask)
            if ridx is None:
                if not verify_clique(graph, img):
                    raise AssertionError("translate image failed clique re-verification")
                ridx = len(rows)
                row_index[mask] = ridx
                rows.append(mask)
            group_rows_set.add(ridx)
        group_rows = sorted(group_rows_set)
        union = 0
        disjoint = True
        for ridx in group_rows:
            if rows[ridx] & union:
                disjoint = False
            union |= rows[ridx]
        if disjoint and union == (1 << n) - 1:
            partitions.append(group_rows)
    # edge coverage: within-row adjacency unioned per vertex
    cov = [0] * n
    for mask in rows:
        for v in mask_elements(mask):
            cov[v] |= mask
    edges_covered = all(
        graph.neighbors(v) & ~cov[v] == 0 for v in range(n))
    note = "two-sided translations, inversion" + \
        (", field automorphisms" if frob else "") + \
        (", diagonal outer" if group.q % 2 else "")
    return TranslateRowSystem(graph, base, rows, note, partitions,
                              edges_covered, translation_closed=True)


# -- exact solving ------------------------------------------------------------------


def solve_cover_ilp(system: TranslateRowSystem, sense: str,
                    target_size: int | None = None,
                    budget: Budget | None = None,
                    pair_budget: dict[str, int] | None = None,
                    pin_first: bool = True) -> CoverBound:
    """Exact optimum / feasibility for the covering program.

    AT_MOST_ONE maximizes the packing size; EXACTLY_ONE decides whether an
    independent set of size target_size can meet every row exactly once.
    Budget exhaustion yields a BRACKET status, never a silent answer.
    """
    if sense not in (AT_MOST_ONE, EXACTLY_ONE):
        raise ValueError(sense)
    if sense == EXACTLY_ONE and target_size is None:
        raise ValueError("EXACTLY_ONE requires a target size")
    budget = budget or Budget()
    t0 = time.monotonic()
    meter = budget.start()
    solver = _CoverSolver(system, meter, pair_budget)
    if sense == EXACTLY_ONE:
        status, witness = solver.exactly_one(target_size,
                                             pin_first and system.translation_closed)
        if status == FEASIBLE:
            # independent re-verification of the returned transversal
            wset = set(witness)
            for mask in system.rows:
                if sum(1 for v in witness if (mask >> v) & 1) != 1:
                    raise AssertionError("solver returned a non-transversal witness")
            for i, u in enumerate(witness):
                for v in witness[i + 1:]:
                    if system.graph.adjacent(u, v):
                        raise AssertionError("solver returned a dependent witness")
            assert len(wset) == target_size
        lower = len(witness)
        upper = None
        notes = []
        if status == PROVEN_INFEASIBLE and system.partitions:
            notes.append(f"partition bound caps packings at {len(system.partitions[0])}; "
                         f"size {target_size} proven infeasible")
        if not system.edges_covered:
            notes.append("rows do not cover all edges; independence enforced directly")
        return CoverBound(sense, status, lower, upper, target_size, witness,
                          meter.nodes, time.monotonic() - t0,
                          system.descriptor(), notes)
    best_size, best_set, complete, upper = solver.maximize(
        pin_first and system.translation_closed)
    status = PROVEN_OPTIMUM if complete else BRACKET
    notes = []
    if system.edges_covered:
        notes.append("rows cover every edge: packing optimum equals the coclique number")
    return CoverBound(AT_MOST_ONE, status, best_size,
                      best_size if complete else upper, None, best_set,
                      meter.nodes, time.monotonic() - t0,
                      system.descriptor(), notes)


class _CoverSolver:
    def __init__(self, system: TranslateRowSystem, meter, pair_budget):
        self.system = system
        self.graph = system.graph
        self.group = system.graph.group
        self.meter = meter
        self.n = self.group.order
        self.rows = system.rows
        self.full = (1 << self.n) - 1
        self.use_adjacency = True  # sound: EXACTLY_ONE enforces it by contract;
        # for AT_MOST_ONE it is an inference only when rows cover all edges
        self.pair_limits = None
        if pair_budget:
            fused = self.group.fusion_orbits()
            classes = self.group.conjugacy_classes()
            label_of = [fused[classes[self.group.class_of(g)].fusion_orbit].label
                        for g in range(self.n)]
            self.label_of = label_of
            self.pair_limits = dict(pair_budget)

    # ---- exactly-one feasibility ----------------------------------------------

    def exactly_one(self, target: int, pin: bool):
        rows = self.rows
        n_rows = len(rows)
        group = self.group
        alive = self.full
        row_alive = [r.bit_count() for r in rows]
        row_done = [False] * n_rows
        vrows: list[list[int]] = [[] for _ in range(self.n)]
        for ri, mask in enumerate(rows):
            for v in mask_elements(mask):
                vrows[v].append(ri)
        chosen: list[int] = []
        counts: dict[str, int] = {}
        trail: list[tuple] = []

        def eliminate(vmask: int):
            nonlocal alive
            vmask &= alive
            alive &= ~vmask
            removed = []
            m = vmask
            while m:
                low = m & -m
                v = low.bit_length() - 1
                for ri in vrows[v]:
                    row_alive[ri] -= 1
                removed.append(v)
                m ^= low
            trail.append(("elim", removed))
            return removed

        def choose(v: int) -> bool:
            nonlocal alive
            if self.pair_limits is not None:
                inc: dict[str, int] = {}
                for u in chosen:
                    lab = self.label_of[group.mul(u, group.inv(v))]
                    inc[lab] = inc.get(lab, 0) + 1
                for lab, k in inc.items():
                    limit = self.pair_limits.get(lab)
                    if limit is not None and counts.get(lab, 0) + k > limit:
                        trail.append(("noop",))
                        return False
                for lab, k in inc.items():
                    counts[lab] = counts.get(lab, 0) + k
                trail.append(("counts", inc))
            else:
                trail.append(("noop",))
            chosen.append(v)
            trail.append(("chosen",))
            done_now = []
            kill = self.graph.neighbors(v)
            for ri in vrows[v]:
                if row_done[ri]:
                    # two chosen in one row is impossible: v was alive
                    raise AssertionError("row chosen twice")
                row_done[ri] = True
                done_now.append(ri)
                kill |= rows[ri]
            trail.append(("done", done_now))
            eliminate(kill & ~(1 << v) & self.full)
            eliminate(1 << v)
            return True

        def undo(mark: int):
            nonlocal alive
            while len(trail) > mark:
                entry = trail.pop()
                if entry[0] == "elim":
                    for v in entry[1]:
                        alive |= 1 << v
                        for ri in vrows[v]:
                            row_alive[ri] += 1
                elif entry[0] == "done":
                    for ri in entry[1]:
                        row_done[ri] = False
                elif entry[0] == "chosen":
                    chosen.pop()
                elif entry[0] == "counts":
                    for lab, k in entry[1].items():
                        counts[lab] -= k

        def propagate() -> bool:
            while True:
                forced = None
                for ri in range(n_rows):
                    if row_done[ri]:
                        continue
                    c = row_alive[ri]
                    if c == 0:
                        return False
                    if c == 1:
                        forced = ri
                        break
                if forced is None:
                    return True
                v = (rows[forced] & alive)
                v = (v & -v).bit_length() - 1
                if not choose(v):
                    return False

        def search() -> str:
            if self.meter.tick():
                return EXHAUSTED_LOCAL
            if len(chosen) == target:
                if all(row_done):
                    return FOUND_LOCAL
                return DEAD_LOCAL
            best_ri, best_c = -1, None
            for ri in range(n_rows):
                if not row_done[ri]:
                    c = row_alive[ri]
                    if c == 0:
                        return DEAD_LOCAL
                    if best_c is None or c < best_c:
                        best_ri, best_c = ri, c
                        if c == 1:
                            break
            if best_ri < 0:
                return DEAD_LOCAL  # all rows done but size short: nothing addable
            m = rows[best_ri] & alive
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                mark = len(trail)
                if choose(v) and propagate():
                    out = search()
                    if out in (FOUND_LOCAL, EXHAUSTED_LOCAL):
                        return out
                undo(mark)
            return DEAD_LOCAL

        if pin:
            if not choose(self.group.identity) or not propagate():
                return PROVEN_INFEASIBLE, ()
        out = search()
        if out == FOUND_LOCAL:
            return FEASIBLE, tuple(sorted(chosen))
        if out == EXHAUSTED_LOCAL:
            return BRACKET, ()
        return PROVEN_INFEASIBLE, ()

    # ---- at-most-one maximization -----------------------------------------------

    def maximize(self, pin: bool):
        rows = self.rows
        system = self.system
        partition = system.partitions[0] if system.partitions else None
        greedy = self._greedy_packing()
        best = {"size": len(greedy), "set": tuple(greedy)}
        n_rows = len(rows)
        vrows: list[list[int]] = [[] for _ in range(self.n)]
        for ri, mask in enumerate(rows):
            for v in mask_elements(mask):
                vrows[v].append(ri)
        use_adj = system.edges_covered

        def bound(alive: int, used_rows: list[bool], size: int) -> int:
            if partition is None:
                return size + alive.bit_count()
            open_blocks = 0
            for ri in partition:
                if not used_rows[ri] and rows[ri] & alive:
                    open_blocks += 1
            return size + open_blocks

        used = [False] * n_rows
        chosen: list[int] = []

        def record():
            if len(chosen) > best["size"]:
                best["size"] = len(chosen)
                best["set"] = tuple(sorted(chosen))

        def branch(v: int, alive: int, restrict: int):
            marks = [ri for ri in vrows[v] if not used[ri]]
            for ri in marks:
                used[ri] = True
            kill = 0
            for ri in vrows[v]:
                kill |= rows[ri]
            if use_adj:
                kill |= self.graph.neighbors(v)
            chosen.append(v)
            search((alive & ~kill) & restrict)
            chosen.pop()
            for ri in marks:
                used[ri] = False

        def search(alive: int):
            if self.meter.tick():
                return
            record()
            if bound(alive, used, len(chosen)) <= best["size"]:
                return
            if partition is not None:
                # open block with fewest candidates
                pick, best_c = None, None
                for ri in partition:
                    if not used[ri]:
                        m = rows[ri] & alive
                        if m:
                            c = m.bit_count()
                            if best_c is None or c < best_c:
                                best_c, pick = c, m
                if pick is None:
                    return
                m = pick
                while m:
                    low = m & -m
                    branch(low.bit_length() - 1, alive, self.full)
                    m ^= low
                    if self.meter.exhausted:
                        return
                search(alive & ~pick)  # the block stays empty
                return
            # no partition: ordered branching over the remaining vertices
            m = alive
            while m:
                low = m & -m
                branch(low.bit_length() - 1, alive, ~((low << 1) - 1))
                m ^= low
                if self.meter.exhausted:
                    return

        search(self.full)
        complete = not self.meter.exhausted
        upper = None
        if partition is not None:
            upper = len(partition)
        return best["size"], best["set"], complete, upper

    def _greedy_packing(self) -> list[int]:
        rows = self.rows
        taken: list[int] = []
        blocked = 0
        for v in range(self.n):
            if (blocked >> v) & 1:
                continue
            taken.append(v)
            for ri, mask in enumerate(rows):
                if (mask >> v) & 1:
                    blocked |= mask
            if self.system.edges_covered:
                blocked |= self.graph.neighbors(v)
        return taken


FOUND_LOCAL = "found"
DEAD_LOCAL = "dead"
EXHAUSTED_LOCAL = "exhausted"


# -- LP export ----------------------------------------------------------------------


def export_lp(system: TranslateRowSystem, sense: str = AT_MOST_ONE,
              target_size: int | None = None) -> bytes:
    """Deterministic LP-format text of the covering program."""
    lines = [
        "\\ covering program from clique translates",
        f"\\ graph: {system.graph.label()} on {system.graph.vertex_count} vertices",
        f"\\ rows: {len(system.rows)} of size {system.row_size} "
        f"({system.generator_note})",
        "\\ independence cuts are enforced by the internal solver and omitted here",
        "Maximize",
    ]
    n = system.graph.vertex_count
    obj_terms = " + ".join(f"v{i}" for i in range(n))
    lines.append(" obj: " + obj_terms)
    lines.append("Subject To")
    op = "<=" if sense == AT_MOST_ONE else "="
    for ri, mask in enumerate(system.rows):
        terms = " + ".join(f"v{v}" for v in mask_elements(mask))
        lines.append(f" r{ri}: {terms} {op} 1")
    if target_size is not None:
        lines.append(f" size: {obj_terms} = {target_size}")
    lines.append("Binary")
    for i in range(n):
        lines.append(f" v{i}")
    lines.append("End")
    return ("\n".join(lines) + "\n").encode("ascii")

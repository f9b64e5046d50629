"""Baseline solvers: the nearest-capable-access greedy and an exact oracle.

NCA repeatedly assigns the globally closest (AP, uncovered TD) pair among
APs with spare capacity; an AP's final disk is the largest-keyed disk of
its assigned TDs.  The exact solver enumerates one disk choice (or none)
per AP with branch-and-bound pruning on partial power sums and decides
coverage feasibility of a choice vector with a unit-capacity flow
network, so it is only practical at small scale.  Both produce solutions
that pass ``check_feasible``.
"""

from dataclasses import dataclass
from time import perf_counter

from .model import (
    Disk,
    Instance,
    InfeasibleInstanceError,
    Solution,
    build_disk_family,
    contains,
    disk_index,
)

__all__ = [
    "solve_nca",
    "FlowNetwork",
    "assignment_feasible",
    "ExactBudget",
    "ExactResult",
    "STATUS_OPTIMAL",
    "STATUS_BUDGET_EXCEEDED",
    "solve_exact",
]

STATUS_OPTIMAL = "optimal"
STATUS_BUDGET_EXCEEDED = "budget_exceeded"


def solve_nca(inst: Instance) -> Solution:
    """Nearest-capable-access greedy.

    Pairs are ranked by the candidate disk's key (so equal distances
    reuse the deterministic disk order) with the AP id as the final tie
    break.  Scanning the pairs once in that order is equivalent to
    repeatedly taking the closest available pair, because a pair skipped
    for a covered TD or a full AP never becomes available again.
    """
    disks = build_disk_family(inst)
    order = sorted(range(len(disks)), key=lambda i: (disks[i].key, disks[i].ap_id))
    spare = [inst.k] * (inst.m + 1)
    covered = [False] * (inst.n + 1)
    assigned: dict[int, list[int]] = {}
    remaining = inst.n
    for i in order:
        if remaining == 0:
            break
        d = disks[i]
        if covered[d.td_id] or spare[d.ap_id] == 0:
            continue
        covered[d.td_id] = True
        spare[d.ap_id] -= 1
        assigned.setdefault(d.ap_id, []).append(d.td_id)
        remaining -= 1
    if remaining:
        raise InfeasibleInstanceError(
            "NCA exhausted all capacity with TDs uncovered; "
            "the instance violates m*k >= n"
        )

    selected = {}
    coverage = {}
    total = 0.0
    for ap_id in sorted(assigned):
        tds = assigned[ap_id]
        largest = max(tds, key=lambda u: disks[disk_index(inst, ap_id, u)].key)
        d = disks[disk_index(inst, ap_id, largest)]
        selected[ap_id] = d
        coverage[ap_id] = frozenset(tds)
        total += d.power
    return Solution(selected=selected, coverage=coverage, total_power=total)


class FlowNetwork:
    """Small integer max-flow network (Dinic's algorithm).

    Used to decide whether fixed disk choices admit a full TD assignment:
    source -> AP arcs carry the capacity k, AP -> TD arcs exist where the
    chosen disk contains the TD, TD -> sink arcs have capacity 1.  All
    operations are deterministic given the arc insertion order.
    """

    def __init__(self, num_nodes: int):
        self.num_nodes = num_nodes
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int) -> int:
        arc = len(self.to)
        self.adj[u].append(arc)
        self.to.append(v)
        self.cap.append(capacity)
        self.adj[v].append(arc + 1)
        self.to.append(u)
        self.cap.append(0)
        return arc

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.num_nodes
            level[s] = 0
            queue = [s]
            for u in queue:
                for arc in self.adj[u]:
                    v = self.to[arc]
                    if self.cap[arc] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.num_nodes

            def augment(u: int, limit: int) -> int:
                if u == t:
                    return limit
                while it[u] < len(self.adj[u]):
                    arc = self.adj[u][it[u]]
                    v = self.to[arc]
                    if self.cap[arc] > 0 and level[v] == level[u] + 1:
                        pushed = augment(v, min(limit, self.cap[arc]))
                        if pushed:
                            self.cap[arc] -= pushed
                            self.cap[arc ^ 1] += pushed
                            return pushed
                    it[u] += 1
                return 0

            while True:
                pushed = augment(s, self.num_nodes + 1)
                if not pushed:
                    break
                flow += pushed


def _flow_assign(
    chosen_aps: list[int], contained: list[list[int]], k: int, n: int
) -> dict[int, set[int]] | None:
    """Full assignment of all n TDs to the chosen APs, or None.

    ``contained[j]`` lists the TD ids the j-th chosen AP's disk contains.
    """
    num_ap = len(chosen_aps)
    s = 0
    t = 1 + num_ap + n
    net = FlowNetwork(t + 1)
    ap_td_arcs: list[tuple[int, int, int]] = []
    for j, ap_id in enumerate(chosen_aps):
        net.add_edge(s, 1 + j, k)
        for u in contained[j]:
            arc = net.add_edge(1 + j, num_ap + u, 1)
            ap_td_arcs.append((arc, ap_id, u))
    for u in range(1, n + 1):
        net.add_edge(num_ap + u, t, 1)
    if net.max_flow(s, t) != n:
        return None
    assignment: dict[int, set[int]] = {ap_id: set() for ap_id in chosen_aps}
    for arc, ap_id, u in ap_td_arcs:
        if net.cap[arc] == 0:
            assignment[ap_id].add(u)
    return assignment


def assignment_feasible(
    chosen: dict[int, Disk | None], inst: Instance
) -> dict[int, set[int]] | None:
    """Decide whether fixed per-AP disk choices can cover every TD.

    Returns a full assignment (AP id to TD id set, respecting capacity
    and containment) when the choices are feasible, otherwise None.
    """
    chosen_aps = sorted(a for a, d in chosen.items() if d is not None)
    contained = [
        [u for u in range(1, inst.n + 1) if contains(chosen[a], u, inst)]
        for a in chosen_aps
    ]
    return _flow_assign(chosen_aps, contained, inst.k, inst.n)


@dataclass(frozen=True)
class ExactBudget:
    """Search limits for the exact solver."""

    max_nodes: int = 2_000_000
    max_seconds: float = 600.0


@dataclass
class ExactResult:
    """Outcome of an exact solve.

    ``status`` is ``optimal`` or ``budget_exceeded``; an exceeded budget
    is never reported as a plain solution.  ``solution`` holds the best
    incumbent found, which is only proven optimal when the status says
    so.
    """

    status: str
    solution: Solution | None
    nodes_explored: int
    elapsed_seconds: float


class _BudgetHit(Exception):
    pass


def solve_exact(inst: Instance, budget: ExactBudget | None = None) -> ExactResult:
    """Minimum-total-power solution by exhaustive disk-choice search.

    Each AP independently picks one of its n disks or none; choice lists
    are explored in ascending power order (no disk first) and branches
    are pruned once the partial power reaches the incumbent.  Coverage
    feasibility of complete choice vectors is decided by max flow.  The
    optimum is over exactly-once coverings, matching ``check_feasible``.
    """
    if budget is None:
        budget = ExactBudget()
    t0 = perf_counter()
    disks = build_disk_family(inst)
    m, n = inst.m, inst.n

    contained_tds = [
        [u for u in range(1, n + 1) if contains(d, u, inst)] for d in disks
    ]
    choice_lists: list[list[int | None]] = []
    for a in range(1, m + 1):
        base = disk_index(inst, a, 1)
        ordered = sorted(range(base, base + n), key=lambda i: (disks[i].power, disks[i].key))
        choice_lists.append([None, *ordered])

    best_total = [float("inf")]
    best_choice: list[tuple[int | None, ...] | None] = [None]
    nodes = [0]

    def tick():
        nodes[0] += 1
        if nodes[0] > budget.max_nodes:
            raise _BudgetHit
        if nodes[0] % 256 == 0 and perf_counter() - t0 > budget.max_seconds:
            raise _BudgetHit

    chosen: list[int | None] = [None] * m

    def descend(a0: int, partial: float):
        tick()
        if a0 == m:
            chosen_aps = [a + 1 for a in range(m) if chosen[a] is not None]
            contained = [contained_tds[chosen[a - 1]] for a in chosen_aps]
            if _flow_assign(chosen_aps, contained, inst.k, n) is not None:
                best_total[0] = partial
                best_choice[0] = tuple(chosen)
            return
        for i in choice_lists[a0]:
            s = partial if i is None else partial + disks[i].power
            if s >= best_total[0]:
                if i is not None:
                    break  # ascending power: later choices prune too
                continue
            chosen[a0] = i
            descend(a0 + 1, s)
            chosen[a0] = None

    status = STATUS_OPTIMAL
    try:
        descend(0, 0.0)
    except _BudgetHit:
        status = STATUS_BUDGET_EXCEEDED

    solution = None
    if best_choice[0] is not None:
        picks = {
            a0 + 1: disks[i] for a0, i in enumerate(best_choice[0]) if i is not None
        }
        assignment = assignment_feasible(picks, inst)
        if assignment is None:
            raise RuntimeError("incumbent lost feasibility; solver bug")
        coverage = {
            a: frozenset(tds) for a, tds in sorted(assignment.items()) if tds
        }
        total = 0.0
        for a in sorted(picks):
            total += picks[a].power
        solution = Solution(selected=picks, coverage=coverage, total_power=total)
    elif status == STATUS_OPTIMAL:
        raise InfeasibleInstanceError(
            "exhaustive search found no feasible covering; "
            "the instance violates m*k >= n"
        )
    return ExactResult(
        status=status,
        solution=solution,
        nodes_explored=nodes[0],
        elapsed_seconds=perf_counter() - t0,
    )

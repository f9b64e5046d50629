"""Core model: plane geometry, the candidate disk family, and feasibility.

An instance places m access points (APs) and n terminal devices (TDs) in
the plane.  Every AP has the same integer service capacity k, and serving
out to radius r costs ``power_c * r ** power_alpha``.  Each (AP, TD) pair
induces one candidate disk centered at the AP with that TD on its
boundary, so an instance has exactly m*n candidate disks.  A solution
selects at most one disk per AP and assigns every TD to exactly one AP
whose selected disk contains it, minimising the total selected power.

Disks sharing a center are strictly totally ordered by their key: radius
first, then the cosine of the angle between the boundary vector and the
x-axis (larger cosine means larger disk), then the sign of the boundary
vector's y component (non-negative ranks below negative), then the
boundary TD id.  Containment is defined through this order: disk D
contains TD v exactly when v's own disk at the same center does not rank
above D.  Equal-radius boundary ties therefore resolve deterministically,
and of two same-radius disks at one AP the greater-keyed one contains
both boundary TDs while the lesser contains only its own.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Point",
    "Instance",
    "DiskKey",
    "Disk",
    "Solution",
    "InfeasibleInstanceError",
    "distance_sq",
    "power_of",
    "disk_key",
    "make_disk",
    "build_disk_family",
    "disk_index",
    "contains",
    "disk_order_tables",
    "validate_instance",
    "check_feasible",
]


class InfeasibleInstanceError(RuntimeError):
    """Raised by solvers when the TDs cannot all be covered.

    Only reachable when ``validate_instance`` was skipped: an instance
    with m*k >= n always admits a full cover.
    """


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class Instance:
    """A capacitated coverage instance.

    APs and TDs carry 1-based ids matching their position in ``aps`` /
    ``tds``.  All APs share the capacity ``k``; coverage power follows
    ``power_c * r ** power_alpha`` for service radius r.  Instances are
    immutable and safe to share across threads.
    """

    aps: tuple[Point, ...]
    tds: tuple[Point, ...]
    k: int
    power_c: float = 1.0
    power_alpha: float = 2.0

    @property
    def m(self) -> int:
        return len(self.aps)

    @property
    def n(self) -> int:
        return len(self.tds)

    def ap(self, ap_id: int) -> Point:
        return self.aps[ap_id - 1]

    def td(self, td_id: int) -> Point:
        return self.tds[td_id - 1]

    @classmethod
    def from_coords(cls, aps, tds, k, power_c=1.0, power_alpha=2.0) -> "Instance":
        return cls(
            aps=tuple(Point(float(x), float(y)) for x, y in aps),
            tds=tuple(Point(float(x), float(y)) for x, y in tds),
            k=int(k),
            power_c=float(power_c),
            power_alpha=float(power_alpha),
        )


@dataclass(frozen=True, order=True)
class DiskKey:
    """Lexicographic sort key giving a strict total order over the disks
    of one AP.

    ``radius_sq`` and ``cos_angle`` carry the geometric order;
    ``y_sign_rank`` (0 for boundary vectors with y >= 0, 1 otherwise) and
    ``td_id`` break the remaining ties so that mirrored and coincident
    boundary TDs still compare strictly.
    """

    radius_sq: float
    cos_angle: float
    y_sign_rank: int
    td_id: int


@dataclass(frozen=True)
class Disk:
    """Candidate power assignment: AP ``ap_id`` serving out to TD ``td_id``."""

    ap_id: int
    td_id: int
    key: DiskKey
    power: float

    @property
    def radius_sq(self) -> float:
        return self.key.radius_sq


@dataclass
class Solution:
    """One selected disk per active AP plus the TD sets each AP covers.

    ``selected`` maps AP id to its disk; APs without a disk are absent.
    ``coverage`` holds the covered TD ids per AP.  ``total_power`` is the
    sum of selected disk powers.
    """

    selected: dict[int, Disk]
    coverage: dict[int, frozenset[int]]
    total_power: float


def distance_sq(p: Point, q: Point) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def power_of(radius_sq: float, c: float, alpha: float) -> float:
    """Power needed for a disk of squared radius ``radius_sq``.

    Computed as ``c * radius_sq ** (alpha / 2)`` so non-integer alpha
    avoids a square root followed by a second rounding step.
    """
    return c * radius_sq ** (alpha / 2.0)


def disk_key(inst: Instance, ap_id: int, td_id: int) -> DiskKey:
    a = inst.ap(ap_id)
    u = inst.td(td_id)
    rsq = distance_sq(a, u)
    if rsq == 0.0:
        # Degenerate boundary vector; direction fields take a fixed value
        # and coincident TDs are ordered by id alone.
        return DiskKey(0.0, 1.0, 0, td_id)
    dx = u.x - a.x
    dy = u.y - a.y
    cos = dx / math.sqrt(rsq)
    # sqrt rounding can push the quotient a hair past 1 in magnitude.
    cos = max(-1.0, min(1.0, cos))
    return DiskKey(rsq, cos, 0 if dy >= 0.0 else 1, td_id)


def make_disk(inst: Instance, ap_id: int, td_id: int) -> Disk:
    key = disk_key(inst, ap_id, td_id)
    return Disk(ap_id, td_id, key, power_of(key.radius_sq, inst.power_c, inst.power_alpha))


def build_disk_family(inst: Instance) -> list[Disk]:
    """All m*n candidate disks, AP id major and TD id minor.

    The position of disk (a, u) in the returned list is
    ``disk_index(inst, a, u)``; solvers rely on this layout.
    """
    return [
        make_disk(inst, a, u)
        for a in range(1, inst.m + 1)
        for u in range(1, inst.n + 1)
    ]


def disk_index(inst: Instance, ap_id: int, td_id: int) -> int:
    return (ap_id - 1) * inst.n + (td_id - 1)


def contains(d: Disk, td_id: int, inst: Instance) -> bool:
    """Order-based containment: D contains v iff key(D_{a,v}) <= key(D)."""
    return disk_key(inst, d.ap_id, td_id) <= d.key


def disk_order_tables(inst: Instance, disks: list[Disk] | None = None):
    """Rank and containment tables over the disk family.

    Returns ``(ranks, containment)`` where ``ranks[i]`` is the position of
    family disk i in its AP's key order and ``containment[i, u0]`` says
    whether disk i contains the TD with 0-based index u0.  Containment is
    ``rank(v's disk) <= rank(i)`` within one AP, matching ``contains``.
    """
    if disks is None:
        disks = build_disk_family(inst)
    m, n = inst.m, inst.n
    ranks = np.empty(m * n, dtype=np.int64)
    containment = np.empty((m * n, n), dtype=bool)
    for a0 in range(m):
        base = a0 * n
        order = sorted(range(n), key=lambda u0: disks[base + u0].key)
        block = ranks[base : base + n]
        for pos, u0 in enumerate(order):
            block[u0] = pos
        containment[base : base + n] = block[None, :] <= block[:, None]
    return ranks, containment


def validate_instance(inst: Instance) -> list[str]:
    """Report every violated instance invariant; empty list means valid."""
    v = []
    if inst.m < 1:
        v.append("instance has no APs")
    if inst.n < 1:
        v.append("instance has no TDs")
    if inst.k < 1:
        v.append(f"capacity k={inst.k} is below 1")
    elif inst.m >= 1 and inst.m * inst.k < inst.n:
        v.append(
            f"total capacity m*k = {inst.m * inst.k} cannot cover n = {inst.n} TDs"
        )
    for label, pts in (("AP", inst.aps), ("TD", inst.tds)):
        for i, p in enumerate(pts, start=1):
            if not (math.isfinite(p.x) and math.isfinite(p.y)):
                v.append(f"{label} {i} has non-finite coordinates")
    if not (inst.power_c > 0 and math.isfinite(inst.power_c)):
        v.append(f"power constant c={inst.power_c} must be positive and finite")
    if not (1.0 <= inst.power_alpha <= 5.0):
        v.append(f"attenuation factor alpha={inst.power_alpha} outside [1, 5]")
    return v


def check_feasible(sol: Solution, inst: Instance) -> list[str]:
    """Verify a Solution against its instance; returns violations.

    Checks exactly-once coverage of every TD, per-AP capacity, presence
    of a selected disk wherever coverage is claimed, order-based
    containment of each covered TD in its AP's disk, and consistency of
    the stated total power with the selected disks.  Empty list means
    feasible.
    """
    v = []
    m, n, k = inst.m, inst.n, inst.k

    for ap_id in sorted(sol.selected):
        d = sol.selected[ap_id]
        if not 1 <= ap_id <= m:
            v.append(f"selected disk references unknown AP {ap_id}")
            continue
        if d.ap_id != ap_id:
            v.append(f"disk stored for AP {ap_id} is centered at AP {d.ap_id}")
        if not 1 <= d.td_id <= n:
            v.append(f"disk of AP {ap_id} has unknown boundary TD {d.td_id}")

    owner: dict[int, int] = {}
    for ap_id in sorted(sol.coverage):
        tds = sol.coverage[ap_id]
        if not 1 <= ap_id <= m:
            v.append(f"coverage references unknown AP {ap_id}")
            continue
        if tds and ap_id not in sol.selected:
            v.append(f"AP {ap_id} covers TDs but selected no disk")
        if len(tds) > k:
            v.append(f"AP {ap_id} covers {len(tds)} TDs, capacity is {k}")
        disk = sol.selected.get(ap_id)
        for u in sorted(tds):
            if not 1 <= u <= n:
                v.append(f"coverage of AP {ap_id} references unknown TD {u}")
                continue
            if u in owner:
                v.append(f"TD {u} covered by both AP {owner[u]} and AP {ap_id}")
            else:
                owner[u] = ap_id
            if disk is not None and disk.ap_id == ap_id and 1 <= disk.td_id <= n:
                if not contains(disk, u, inst):
                    v.append(f"TD {u} lies outside the selected disk of AP {ap_id}")
    for u in range(1, n + 1):
        if u not in owner:
            v.append(f"TD {u} is not covered")

    derived = 0.0
    for ap_id in sorted(sol.selected):
        d = sol.selected[ap_id]
        if 1 <= ap_id <= m and d.ap_id == ap_id and 1 <= d.td_id <= n:
            derived += power_of(
                distance_sq(inst.ap(ap_id), inst.td(d.td_id)),
                inst.power_c,
                inst.power_alpha,
            )
    if not math.isclose(sol.total_power, derived, rel_tol=1e-9, abs_tol=1e-12):
        v.append(
            f"stated total_power {sol.total_power!r} disagrees with "
            f"selected disks ({derived!r})"
        )
    return v

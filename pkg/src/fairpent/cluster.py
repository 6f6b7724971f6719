"""Seven-hexagon clusters: layout, lattice, and area-preserving perturbation.

A cluster is the flower of a central unit hexagon and six petals.  Its 24
distinct vertices split into 6 interior ones (the central hexagon's
vertices, ids 0-5) and 18 on the cluster outline (ids 6-23).  Perturbing a
cluster moves the designated interior vertices A, B, C (ids 0, 2, 4) and
re-solves the other three so every hexagon keeps area ``3*sqrt(3)/2``.

Each hexagon is labelled so that its marked sides are local sides 1, 3, 5
(which the splitter treats as the marked sides) and the triple includes the
side facing the centre.  Marking a petal's outermost side instead would fix
a side figure that is identical in every cluster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import PerturbationFailureError, SolverError
from .geometry import ConvexPolygon, SideFigure, area_of_points, is_convex, side_figure
from .hexsplit import HEXAGON_AREA
from .nlsolve import SolverConfig, gauss_newton_min_norm

SQRT3 = math.sqrt(3.0)
T1 = (3.0, 2.0 * SQRT3)
T2 = (-1.5, 2.5 * SQRT3)
DESIGNATED = (0, 2, 4)
FREE = (1, 3, 5)
MARKED_SIDES = (1, 3, 5)
N_INTERIOR = 6
MAX_MAGNITUDE = 0.01

# axial steps on the cluster lattice, counterclockwise
_DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


@dataclass(frozen=True, eq=False)
class HexCluster:
    """Seven hexagons sharing vertices by id.

    ``slots[h, k]`` is the vertex id of local vertex ``k`` of hexagon ``h``;
    hexagon 0 is central, 1-6 are petals counterclockwise.
    """

    points: np.ndarray
    slots: np.ndarray
    boundary: np.ndarray
    marks: Tuple[Tuple[int, int], ...]
    designated: Tuple[int, int, int] = DESIGNATED

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        for name in ("slots", "boundary"):
            arr = np.array(getattr(self, name), dtype=np.int64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def interior_vertices(self) -> np.ndarray:
        return self.points[:N_INTERIOR]

    def hexagon(self, h: int) -> ConvexPolygon:
        return ConvexPolygon(self.points[self.slots[h]])

    @property
    def hexagons(self) -> List[ConvexPolygon]:
        return [self.hexagon(h) for h in range(7)]

    def boundary_polygon(self) -> ConvexPolygon:
        # the 18-gon outline is not convex; ConvexPolygon only carries the vertex list here
        return ConvexPolygon(self.points[self.boundary])

    def with_points(self, points) -> "HexCluster":
        return HexCluster(points, self.slots, self.boundary, self.marks, self.designated)

    def translated(self, t) -> "HexCluster":
        return self.with_points(self.points + np.asarray(t, dtype=np.float64))

    def areas(self) -> List[float]:
        return [area_of_points(self.points[self.slots[h]].tolist()) for h in range(7)]


@dataclass(frozen=True)
class PerturbationPlan:
    magnitude: float
    directions: np.ndarray  # (3, 2) unit vectors for A, B, C
    designated: Tuple[int, int, int] = DESIGNATED

    @classmethod
    def random(cls, magnitude: float, rng: np.random.Generator) -> "PerturbationPlan":
        theta = rng.uniform(0.0, 2.0 * math.pi, size=3)
        return cls(magnitude, np.column_stack([np.cos(theta), np.sin(theta)]))


def _hex_vertex(center, k):
    return (center[0] + math.cos(k * math.pi / 3), center[1] + math.sin(k * math.pi / 3))


def build_canonical_cluster() -> HexCluster:
    centers = [(0.0, 0.0)]
    for j in range(6):
        t = math.radians(30 + 60 * j)
        centers.append((SQRT3 * math.cos(t), SQRT3 * math.sin(t)))
    # petal j faces the centre with lattice side (3 + j) % 6; start odd petals one
    # vertex later so that side is local side 3 (odd) and hence marked
    starts = [0] + [j % 2 for j in range(6)]

    points: List[Tuple[float, float]] = []
    index = {}

    def vid(p):
        key = (round(p[0] * 1e6), round(p[1] * 1e6))
        if key not in index:
            index[key] = len(points)
            points.append(p)
        return index[key]

    for k in range(6):
        vid(_hex_vertex(centers[0], k))
    slots = []
    for h, c in enumerate(centers):
        slots.append([vid(_hex_vertex(c, (k + starts[h]) % 6)) for k in range(6)])
    # ids 0-5 are the central hexagon's vertices; everything else must lie on the outline
    incidence = np.zeros(len(points), dtype=int)
    for row in slots:
        incidence[row] += 1
    assert len(points) == 24 and all(incidence[:6] == 3)

    outer = [i for i in range(len(points)) if i >= N_INTERIOR]
    outer.sort(key=lambda i: math.atan2(points[i][1], points[i][0]) % (2 * math.pi))
    # renumber outline vertices 6..23 in counterclockwise order
    remap = {old: new for new, old in enumerate(list(range(N_INTERIOR)) + outer)}
    pts = np.empty((len(points), 2))
    for old, new in remap.items():
        pts[new] = points[old]
    slots = [[remap[i] for i in row] for row in slots]
    marks = tuple((h, s) for h in range(7) for s in MARKED_SIDES)
    return HexCluster(pts, slots, list(range(N_INTERIOR, len(points))), marks)


def cluster_lattice(rings: int) -> List[Tuple[float, float]]:
    """Cluster translations, centre first, then ring by ring counterclockwise."""
    if rings < 0:
        raise ValueError("rings must be non-negative")
    coords = [(0, 0)]
    for r in range(1, rings + 1):
        m, n = r * _DIRECTIONS[4][0], r * _DIRECTIONS[4][1]
        for dm, dn in _DIRECTIONS:
            for _ in range(r):
                coords.append((m, n))
                m, n = m + dm, n + dn
    return [(m * T1[0] + n * T2[0], m * T1[1] + n * T2[1]) for m, n in coords]


def cluster_count(rings: int) -> int:
    return 1 + 3 * rings * (rings + 1)


def perturb_cluster(cluster: HexCluster, plan: PerturbationPlan, cfg: SolverConfig = SolverConfig()) -> HexCluster:
    """Move A, B, C by ``plan`` and restore all seven hexagon areas.

    The outline vertices are left bit-identical.  The three free interior
    vertices are found by minimum-norm Gauss-Newton on the six petal areas
    (the central area then follows from the fixed outline).
    """
    if plan.magnitude < 0 or plan.magnitude > MAX_MAGNITUDE:
        raise ValueError(f"perturbation magnitude {plan.magnitude} outside [0, {MAX_MAGNITUDE}]")
    if plan.magnitude == 0:
        return cluster
    pts = np.array(cluster.points)
    for vid, d in zip(plan.designated, np.asarray(plan.directions, dtype=np.float64)):
        pts[vid] = pts[vid] + plan.magnitude * d
    free = [v for v in range(N_INTERIOR) if v not in plan.designated]
    slots = cluster.slots

    def assemble(x):
        p = pts.copy()
        p[free] = np.asarray(x).reshape(-1, 2)
        return p

    def residual(x):
        p = assemble(x)
        return np.array([area_of_points(p[slots[h]].tolist()) - HEXAGON_AREA for h in range(1, 7)])

    def jacobian(x):
        p = assemble(x)
        J = np.zeros((6, 2 * len(free)))
        for row, h in enumerate(range(1, 7)):
            ids = list(slots[h])
            for c, v in enumerate(free):
                if v in ids:
                    k = ids.index(v)
                    nxt, prv = p[ids[(k + 1) % 6]], p[ids[(k - 1) % 6]]
                    J[row, 2 * c] = 0.5 * (nxt[1] - prv[1])
                    J[row, 2 * c + 1] = 0.5 * (prv[0] - nxt[0])
        return J

    try:
        report = gauss_newton_min_norm(residual, pts[free].ravel(), cfg, jacobian=jacobian)
    except SolverError as exc:
        raise PerturbationFailureError(f"area restoration failed: {exc}") from exc
    out = cluster.with_points(assemble(report.solution))
    for h in range(7):
        if not is_convex(out.hexagon(h)):
            raise PerturbationFailureError(f"hexagon {h} lost convexity")
    return out


def marked_side_figures(cluster: HexCluster) -> List[Tuple[Tuple[int, int], SideFigure]]:
    return [((h, s), side_figure(cluster.hexagon(h), s)) for h, s in cluster.marks]


def non_adjacent(sides: Sequence[int], n: int = 6) -> bool:
    sides = sorted(sides)
    return all((b - a) % n not in (1, n - 1) for i, a in enumerate(sides) for b in sides[i + 1 :])

"""Split a nearly regular hexagon into three fair convex pentagons.

Parameters follow the 20-vector layout ``(x1..x6, y1..y6, a0..a3, b0..b3)``:
hexagon vertices ``(x_i, y_i)``, the interior hub ``(a0, b0)`` and three
points ``(a_i, b_i)`` on the sides ``x1x2``, ``x3x4`` and ``x5x6``.  The
pentagons are

    P1 = (q0, q1, X2, X3, q2)
    P2 = (q0, q2, X4, X5, q3)
    P3 = (q0, q3, X6, X1, q1)

with ``q_i = (a_i, b_i)``.  The hexagon sides ``X2X3``, ``X4X5`` and ``X6X1``
are the marked sides; each is side 2 of its pentagon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateGeometryError, NeighborhoodExceededError, SolverError, SplitFailureError
from .geometry import ConvexPolygon, area_of_points, eps_closeness, interior_angles, is_convex, perimeter_of_points
from .nlsolve import SolveReport, SolverConfig, finite_diff_jacobian, newton_solve

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

PERIMETER_U = 2.0 + 3.0 * SQRT2 - SQRT6
PENTAGON_AREA = SQRT3 / 2.0
HEXAGON_AREA = 3.0 * SQRT3 / 2.0
SPOKE_RADIUS = (3.0 * SQRT2 - SQRT6) / 2.0
JACOBIAN_DET_CLOSED_FORM = (-162.0 + 486.0 * SQRT2 + 81.0 * SQRT3 - 270.0 * SQRT6) / 8.0
TARGET_ANGLES = (2 * math.pi / 3, 2 * math.pi / 3, 7 * math.pi / 12, 2 * math.pi / 3, 5 * math.pi / 12)

EPS_MAX = 0.05
MARKED_SIDE = 2
# pentagon vertex slots: ("x", i) is hexagon vertex i (0-based), ("q", i) is (a_i, b_i)
PENTAGON_SLOTS = (
    (("q", 0), ("q", 1), ("x", 1), ("x", 2), ("q", 2)),
    (("q", 0), ("q", 2), ("x", 3), ("x", 4), ("q", 3)),
    (("q", 0), ("q", 3), ("x", 5), ("x", 0), ("q", 1)),
)
# (interior point index, hexagon side start) for the collinearity equations
SIDE_POINTS = ((1, 0), (2, 2), (3, 4))


@dataclass(frozen=True)
class SplitParams:
    x: np.ndarray
    y: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for name, size in (("x", 6), ("y", 6), ("a", 4), ("b", 4)):
            arr = np.array(getattr(self, name), dtype=np.float64).reshape(size)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_vector(cls, v) -> "SplitParams":
        v = np.asarray(v, dtype=np.float64)
        return cls(v[0:6], v[6:12], v[12:16], v[16:20])

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.y, self.a, self.b])

    @property
    def ab(self) -> np.ndarray:
        return np.concatenate([self.a, self.b])

    def with_ab(self, ab) -> "SplitParams":
        ab = np.asarray(ab, dtype=np.float64)
        return SplitParams(self.x, self.y, ab[:4], ab[4:])

    def hexagon(self) -> ConvexPolygon:
        return ConvexPolygon(np.column_stack([self.x, self.y]))

    def pentagon_points(self):
        X = list(zip(self.x.tolist(), self.y.tolist()))
        Q = list(zip(self.a.tolist(), self.b.tolist()))
        return [[X[i] if kind == "x" else Q[i] for kind, i in slots] for slots in PENTAGON_SLOTS]

    def pentagons(self):
        return tuple(ConvexPolygon(p) for p in self.pentagon_points())


@dataclass(frozen=True)
class FairSplit:
    params: SplitParams
    pentagons: tuple
    marked_side: tuple
    report: SolveReport
    angle_deviation: float

    def areas(self):
        return [p.area() for p in self.pentagons]

    def perimeters(self):
        return [p.perimeter() for p in self.pentagons]


def canonical_params() -> SplitParams:
    """The unperturbed configuration: regular unit hexagon, three congruent pentagons."""
    k = np.arange(6)
    x = np.array([math.cos(i * math.pi / 3) for i in k])
    y = np.array([math.sin(i * math.pi / 3) for i in k])
    a = np.array([0.0, SQRT3 / 2, (-3.0 + SQRT3) / 2, (3.0 - 2 * SQRT3) / 2])
    b = np.array([0.0, (-3.0 + 2 * SQRT3) / 2, (3.0 - SQRT3) / 2, -SQRT3 / 2])
    return SplitParams(x, y, a, b)


def residuals(v: SplitParams) -> np.ndarray:
    """The eight split equations: 3 collinearities, 2 area equalities, 3 perimeters."""
    x, y, a, b = v.x.tolist(), v.y.tolist(), v.a.tolist(), v.b.tolist()
    f = []
    for qi, s in SIDE_POINTS:
        x1, y1, x2, y2 = x[s], y[s], x[s + 1], y[s + 1]
        f.append((a[qi] - x1) * (y2 - y1) - (x2 - x1) * (b[qi] - y1))
    P1, P2, P3 = v.pentagon_points()
    area1 = area_of_points(P1)
    f.append(area_of_points(P2) - area1)
    f.append(area_of_points(P3) - area1)
    for P in (P1, P2, P3):
        f.append(perimeter_of_points(P) - PERIMETER_U)
    return np.array(f)


def _area_grad(pts, k):
    n = len(pts)
    nxt, prv = pts[(k + 1) % n], pts[(k - 1) % n]
    return 0.5 * (nxt[1] - prv[1]), 0.5 * (prv[0] - nxt[0])


def _perim_grad(pts, k):
    n = len(pts)
    p, prv, nxt = pts[k], pts[(k - 1) % n], pts[(k + 1) % n]
    d1x, d1y = p[0] - prv[0], p[1] - prv[1]
    d2x, d2y = p[0] - nxt[0], p[1] - nxt[1]
    n1, n2 = math.hypot(d1x, d1y), math.hypot(d2x, d2y)
    if n1 == 0.0 or n2 == 0.0:
        raise DegenerateGeometryError("zero-length pentagon edge; perimeter gradient undefined")
    return d1x / n1 + d2x / n2, d1y / n1 + d2y / n2


def jacobian_ab(v: SplitParams) -> np.ndarray:
    """Analytic d(f1..f8)/d(a0..a3, b0..b3), a-columns before b-columns."""
    x, y = v.x.tolist(), v.y.tolist()
    J = np.zeros((8, 8))
    for row, (qi, s) in enumerate(SIDE_POINTS):
        J[row, qi] = y[s + 1] - y[s]
        J[row, 4 + qi] = -(x[s + 1] - x[s])
    pents = v.pentagon_points()
    area_rows = np.zeros((3, 8))
    for p, (slots, pts) in enumerate(zip(PENTAGON_SLOTS, pents)):
        for k, (kind, i) in enumerate(slots):
            if kind != "q":
                continue
            gx, gy = _area_grad(pts, k)
            area_rows[p, i] += gx
            area_rows[p, 4 + i] += gy
            px, py = _perim_grad(pts, k)
            J[5 + p, i] += px
            J[5 + p, 4 + i] += py
    J[3] = area_rows[1] - area_rows[0]
    J[4] = area_rows[2] - area_rows[0]
    return J


def _ab_system(v: SplitParams):
    def f(ab):
        return residuals(v.with_ab(ab))

    def jac(ab):
        return jacobian_ab(v.with_ab(ab))

    return f, jac


def finite_diff_jacobian_ab(v: SplitParams, h: float = 1e-6) -> np.ndarray:
    f, _ = _ab_system(v)
    return finite_diff_jacobian(f, v.ab, h)


def best_fit_motion(hexagon: ConvexPolygon):
    """Least-squares rotation + translation taking the canonical hexagon onto ``hexagon``.

    Returns ``(theta, translation)`` with the input's vertex labels matched in order.
    """
    src = np.column_stack([canonical_params().x, canonical_params().y])
    dst = np.asarray(hexagon.vertices)
    sc, dc = src.mean(axis=0), dst.mean(axis=0)
    s, d = src - sc, dst - dc
    cross = float(np.sum(s[:, 0] * d[:, 1] - s[:, 1] * d[:, 0]))
    dot = float(np.sum(s[:, 0] * d[:, 0] + s[:, 1] * d[:, 1]))
    theta = math.atan2(cross, dot)
    c, sn = math.cos(theta), math.sin(theta)
    t = dc - np.array([c * sc[0] - sn * sc[1], sn * sc[0] + c * sc[1]])
    return theta, t


def _apply(theta, t, pts):
    c, s = math.cos(theta), math.sin(theta)
    pts = np.asarray(pts, dtype=np.float64)
    return np.column_stack([c * pts[:, 0] - s * pts[:, 1] + t[0], s * pts[:, 0] + c * pts[:, 1] + t[1]])


def closeness_to_regular(hexagon: ConvexPolygon) -> float:
    theta, t = best_fit_motion(hexagon)
    v0 = canonical_params()
    return eps_closeness(hexagon, _apply(theta, t, np.column_stack([v0.x, v0.y])))


def init_guess(hexagon) -> SplitParams:
    """Seed the interior points by carrying the canonical ones along the best-fit rigid motion."""
    hexagon = hexagon if isinstance(hexagon, ConvexPolygon) else ConvexPolygon(hexagon)
    if hexagon.n != 6:
        raise ValueError(f"expected a hexagon, got {hexagon.n} vertices")
    if hexagon.area() < 0.1:
        raise NeighborhoodExceededError(f"hexagon area {hexagon.area():.4g} is too small (or clockwise)")
    theta, t = best_fit_motion(hexagon)
    v0 = canonical_params()
    q = _apply(theta, t, np.column_stack([v0.a, v0.b]))
    return SplitParams(hexagon.vertices[:, 0], hexagon.vertices[:, 1], q[:, 0], q[:, 1])


def angle_deviation(pentagon: ConvexPolygon, marked_side: int = MARKED_SIDE) -> float:
    """Largest deviation of the angle sequence, read from the marked side's first vertex."""
    ang = interior_angles(pentagon)
    seq = np.roll(ang, -marked_side)
    return float(np.max(np.abs(seq - np.array(TARGET_ANGLES))))


def solve_ab(seed: SplitParams, cfg: SolverConfig = SolverConfig()) -> SolveReport:
    """Newton on the (a, b) block with the hexagon held fixed."""
    f, jac = _ab_system(seed)
    return newton_solve(f, seed.ab, cfg, jacobian=jac)


def split_hexagon(
    hexagon,
    cfg: SolverConfig = SolverConfig(),
    eps_max: float = EPS_MAX,
    seed: Optional[SplitParams] = None,
) -> FairSplit:
    """Split a hexagon close to the regular unit hexagon into three fair pentagons.

    The marked sides are hexagon sides 1, 3, 5 (``X2X3``, ``X4X5``, ``X6X1``).
    Raises NeighborhoodExceededError if the input is farther than ``eps_max``
    from a regular unit hexagon or a pentagon comes out non-convex, and
    SplitFailureError if Newton fails.
    """
    hexagon = hexagon if isinstance(hexagon, ConvexPolygon) else ConvexPolygon(hexagon)
    if hexagon.n != 6:
        raise ValueError(f"expected a hexagon, got {hexagon.n} vertices")
    eps = closeness_to_regular(hexagon)
    if eps > eps_max:
        raise NeighborhoodExceededError(f"hexagon is {eps:.4g} from regular (admission radius {eps_max})")
    if seed is None:
        seed = init_guess(hexagon)
    try:
        report = solve_ab(seed, cfg)
    except SolverError as exc:
        raise SplitFailureError(f"split solve failed: {exc}", exc.report) from exc
    params = seed.with_ab(report.solution)
    pentagons = params.pentagons()
    for k, p in enumerate(pentagons):
        if not is_convex(p):
            raise NeighborhoodExceededError(f"pentagon P{k + 1} is not convex", report)
    dev = max(angle_deviation(p) for p in pentagons)
    return FairSplit(params, pentagons, (MARKED_SIDE,) * 3, report, dev)

"""Planar geometry kernel for convex polygons.

Polygons are stored counterclockwise as read-only ``(n, 2)`` float arrays.
Areas and perimeters are summed strictly in vertex order so that results
are bit-reproducible; the pentagon area is the fan of three determinants
anchored at the first vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .errors import DegenerateGeometryError

TOL_ANGLE = 1e-9
TOL_COINCIDE = 1e-12


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Ordered counterclockwise vertex list.

    Construction only checks shape and finiteness; use :func:`is_convex` or
    :meth:`require_convex` for the full convexity invariant so that
    verifiers can load and then reject bad polygons.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2:
            raise DegenerateGeometryError(f"expected (n, 2) vertices, got shape {v.shape}")
        if v.shape[0] < 3:
            raise DegenerateGeometryError(f"polygon needs at least 3 vertices, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            raise DegenerateGeometryError("non-finite vertex coordinate")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return self.vertices.shape[0]

    def __repr__(self):
        pts = ", ".join(f"({x:.6g}, {y:.6g})" for x, y in self.vertices)
        return f"ConvexPolygon([{pts}])"

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    def area(self) -> float:
        return signed_area(self)

    def perimeter(self) -> float:
        return perimeter(self)

    def angles(self) -> np.ndarray:
        return interior_angles(self)

    def side_figure(self, side_index: int) -> "SideFigure":
        return side_figure(self, side_index)

    def require_convex(self, tol_angle=TOL_ANGLE, tol_coincide=TOL_COINCIDE) -> "ConvexPolygon":
        if not is_convex(self, tol_angle, tol_coincide):
            raise DegenerateGeometryError(f"polygon is not strictly convex and counterclockwise: {self!r}")
        return self

    def transformed(self, theta: float = 0.0, translation=(0.0, 0.0), reflect: bool = False) -> "ConvexPolygon":
        """Apply ``x -> R(theta) @ S @ x + t`` where ``S`` mirrors in the x-axis if ``reflect``.

        A reflection reverses the vertex order so the result stays counterclockwise.
        """
        v = self.vertices
        if reflect:
            v = v[::-1] * np.array([1.0, -1.0])
        return ConvexPolygon(rigid_transform(v, theta, translation))

    def translated(self, dx: float, dy: float) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.array([dx, dy]))


@dataclass(frozen=True)
class SideFigure:
    """A side length together with the interior angles at both ends."""

    length: float
    angle_left: float
    angle_right: float

    def as_tuple(self):
        return (self.length, self.angle_left, self.angle_right)


PolygonLike = Union[ConvexPolygon, np.ndarray, Sequence[Sequence[float]]]


def as_polygon(p: PolygonLike) -> ConvexPolygon:
    return p if isinstance(p, ConvexPolygon) else ConvexPolygon(p)


def rigid_transform(points, theta: float, translation=(0.0, 0.0)) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return np.asarray(points, dtype=np.float64) @ rot.T + np.asarray(translation, dtype=np.float64)


def det2(u, v) -> float:
    return u[0] * v[1] - u[1] * v[0]


def area_of_points(pts) -> float:
    """Fan-triangulation area from the first vertex, summed in order.

    For five points this is literally
    ``0.5 * (det(p2-p1, p3-p1) + det(p3-p1, p4-p1) + det(p4-p1, p5-p1))``.
    """
    x0, y0 = pts[0]
    total = 0.0
    for k in range(1, len(pts) - 1):
        ux, uy = pts[k][0] - x0, pts[k][1] - y0
        vx, vy = pts[k + 1][0] - x0, pts[k + 1][1] - y0
        d = ux * vy - uy * vx
        total = d if k == 1 else total + d
    return 0.5 * total


def perimeter_of_points(pts) -> float:
    n = len(pts)
    total = 0.0
    for k in range(n):
        p, q = pts[k], pts[(k + 1) % n]
        total += math.hypot(q[0] - p[0], q[1] - p[1])
    return total


def signed_area(poly: PolygonLike) -> float:
    return area_of_points(as_polygon(poly).vertices.tolist())


def perimeter(poly: PolygonLike) -> float:
    return perimeter_of_points(as_polygon(poly).vertices.tolist())


def side_lengths(poly: PolygonLike) -> np.ndarray:
    v = as_polygon(poly).vertices
    e = np.roll(v, -1, axis=0) - v
    return np.hypot(e[:, 0], e[:, 1])


def interior_angles(poly: PolygonLike) -> np.ndarray:
    """Interior angle at every vertex, via atan2 of the edge turn.

    Reflex vertices of a non-convex counterclockwise polygon come out > pi.
    """
    p = as_polygon(poly)
    lengths, angles = kernels.polygon_features(p.vertices[None])
    if np.any(lengths[0] <= TOL_COINCIDE):
        raise DegenerateGeometryError("coincident consecutive vertices")
    return angles[0]


def is_convex(poly: PolygonLike, tol_angle: float = TOL_ANGLE, tol_coincide: float = TOL_COINCIDE) -> bool:
    p = as_polygon(poly)
    v = p.vertices
    diff = v[:, None, :] - v[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(dist, np.inf)
    if dist.min() <= tol_coincide:
        return False
    if signed_area(p) <= 0.0:
        return False
    ang = interior_angles(p)
    return bool(np.all(ang > 0.0) and np.all(ang < math.pi - tol_angle))


def side_figure(poly: PolygonLike, side_index: int) -> SideFigure:
    p = as_polygon(poly)
    n = p.n
    if not 0 <= side_index < n:
        raise IndexError(f"side index {side_index} out of range for {n}-gon")
    ang = interior_angles(p)
    a, b = p.vertices[side_index], p.vertices[(side_index + 1) % n]
    return SideFigure(math.hypot(b[0] - a[0], b[1] - a[1]), float(ang[side_index]), float(ang[(side_index + 1) % n]))


def side_figure_distance(f: SideFigure, g: SideFigure) -> float:
    """L-infinity distance between side figures, minimized over reflection."""
    dl = abs(f.length - g.length)
    same = max(dl, abs(f.angle_left - g.angle_left), abs(f.angle_right - g.angle_right))
    swapped = max(dl, abs(f.angle_left - g.angle_right), abs(f.angle_right - g.angle_left))
    return min(same, swapped)


def congruence_distance(p: PolygonLike, q: PolygonLike) -> float:
    """Dihedral-aligned L-infinity distance between (side length, angle) sequences.

    Zero exactly when ``p`` and ``q`` are congruent, reflections included.
    Polygons with different vertex counts are at distance ``inf``.
    """
    p, q = as_polygon(p), as_polygon(q)
    if p.n != q.n:
        return math.inf
    lengths, angles = kernels.polygon_features(np.stack([p.vertices, q.vertices]))
    return float(kernels.dihedral_distance(lengths[0], angles[0], lengths[1], angles[1]))


def eps_closeness(p: PolygonLike, q: PolygonLike) -> float:
    """Smallest max vertex displacement over cyclic and reversed vertex bijections."""
    p, q = as_polygon(p), as_polygon(q)
    if p.n != q.n:
        raise ValueError(f"vertex counts differ: {p.n} vs {q.n}")
    a, b = p.vertices, q.vertices
    best = math.inf
    for cand in (b, b[::-1]):
        for k in range(p.n):
            d = np.roll(cand, -k, axis=0) - a
            best = min(best, float(np.hypot(d[:, 0], d[:, 1]).max()))
    return best


def regular_polygon(n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> ConvexPolygon:
    k = np.arange(n)
    t = phase + 2.0 * math.pi * k / n
    return ConvexPolygon(np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)]))

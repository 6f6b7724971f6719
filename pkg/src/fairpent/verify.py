"""Independent certification of a pentagon tiling.

Only the geometry kernel and the tiling's own records are consulted, so a
tiling loaded from any producer can be checked.  Each ``verify_*`` returns a
partial :class:`VerifyReport`; :func:`verify` merges them.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .geometry import eps_closeness, is_convex
from .tiling import Tiling

HEXAGON_AREA = 3.0 * math.sqrt(3.0) / 2.0
TARGET_ANGLES = np.array([2 * math.pi / 3, 2 * math.pi / 3, 7 * math.pi / 12, 2 * math.pi / 3, 5 * math.pi / 12])
TOUCH_TOL = 1e-12


@dataclass(frozen=True)
class VerifyConfig:
    tol_area: float = 1e-9
    tol_perimeter: float = 1e-9
    delta_sep: float = 1e-9
    mu_max: float = 0.05
    eps_max: float = 0.05
    tol_total_area: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")


@dataclass
class VerifyReport:
    passed: bool = True
    pentagon_count: Optional[int] = None
    max_area_dev: Optional[float] = None
    max_perimeter_dev: Optional[float] = None
    min_congruence_distance: Optional[float] = None
    min_congruence_pair: Optional[Tuple[int, int]] = None
    min_side_figure_distance: Optional[float] = None
    min_side_figure_pair: Optional[Tuple[int, int]] = None
    max_angle_dev: Optional[float] = None
    all_convex: Optional[bool] = None
    overlap_found: Optional[bool] = None
    overlap_pair: Optional[Tuple[int, int]] = None
    total_area_relative_error: Optional[float] = None
    max_closeness: Optional[float] = None
    closeness_level: Optional[str] = None

    def merge(self, other: "VerifyReport") -> "VerifyReport":
        out = VerifyReport(passed=self.passed and other.passed)
        for f in fields(self):
            if f.name == "passed":
                continue
            mine, theirs = getattr(self, f.name), getattr(other, f.name)
            setattr(out, f.name, theirs if theirs is not None else mine)
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        for k, v in d.items():
            if isinstance(v, float) and not math.isfinite(v):
                d[k] = None if math.isnan(v) else ("inf" if v > 0 else "-inf")
            elif isinstance(v, tuple):
                d[k] = list(v)
        return d


def _ids(t: Tiling):
    return [r.id for r in t.pentagons]


def verify_fairness(t: Tiling, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    area_dev = max((abs(r.polygon.area() - t.area_target) for r in t.pentagons), default=0.0)
    perim_dev = max((abs(r.polygon.perimeter() - t.perimeter_target) for r in t.pentagons), default=0.0)
    ok = area_dev <= cfg.tol_area and perim_dev <= cfg.tol_perimeter
    return VerifyReport(passed=ok, pentagon_count=len(t), max_area_dev=area_dev, max_perimeter_dev=perim_dev)


def verify_incongruence(t: Tiling, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    """Closest pair of pentagons, and of marked side figures, up to congruence."""
    ids = _ids(t)
    if len(ids) < 2:
        return VerifyReport(passed=True, min_congruence_distance=math.inf, min_side_figure_distance=math.inf)
    L, A = kernels.polygon_features(t.vertices)
    d, i, j = kernels.min_pairwise_dihedral(L, A)
    rows = np.arange(len(ids))
    m = np.array([r.marked_side for r in t.pentagons]) % L.shape[1]
    F = np.column_stack([L[rows, m], A[rows, m], A[rows, (m + 1) % L.shape[1]]])
    ds, si, sj = kernels.min_pairwise_sidefig(F)
    ok = d >= cfg.delta_sep and ds >= cfg.delta_sep
    return VerifyReport(
        passed=bool(ok),
        min_congruence_distance=d,
        min_congruence_pair=(ids[i], ids[j]),
        min_side_figure_distance=ds,
        min_side_figure_pair=(ids[si], ids[sj]),
    )


def find_overlap(polygons, tol: float = TOUCH_TOL):
    """First overlapping pair among same-size convex polygons, or ``None``.

    Pairs whose separating-axis gap is within ``tol`` of zero count as touching.
    """
    V = np.stack([np.asarray(getattr(p, "vertices", p), dtype=np.float64) for p in polygons]) if len(polygons) else None
    if V is None:
        return None
    i, j, _ = kernels.first_overlap(V, tol)
    return None if i < 0 else (i, j)


def verify_geometry(t: Tiling, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    ids = _ids(t)
    convex = all(is_convex(r.polygon) for r in t.pentagons)
    hit = find_overlap([r.polygon for r in t.pentagons]) if ids else None
    clusters = len({r.cluster for r in t.pentagons})
    expected = clusters * 7 * HEXAGON_AREA
    got = math.fsum(r.polygon.area() for r in t.pentagons)
    rel = abs(got - expected) / expected if expected else 0.0
    dev = 0.0
    if ids:
        L, Ang = kernels.polygon_features(t.vertices)
        for row, r in enumerate(t.pentagons):
            seq = np.roll(Ang[row], -r.marked_side)
            dev = max(dev, float(np.max(np.abs(seq - TARGET_ANGLES))))
    ok = convex and hit is None and rel <= cfg.tol_total_area and dev <= cfg.mu_max
    return VerifyReport(
        passed=bool(ok),
        all_convex=convex,
        overlap_found=hit is not None,
        overlap_pair=None if hit is None else (ids[hit[0]], ids[hit[1]]),
        total_area_relative_error=rel,
        max_angle_dev=dev,
    )


def verify_closeness(t: Tiling, reference: Tiling, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    """Largest vertex-bijection distance between pentagons with equal ids."""
    r1, r2 = t.generation.get("rings"), reference.generation.get("rings")
    if r1 is not None and r2 is not None and r1 != r2:
        raise ValueError(f"layouts differ: rings {r1} vs {r2}")
    mine, theirs = t.by_id(), reference.by_id()
    if mine.keys() != theirs.keys():
        raise ValueError("tilings have different pentagon ids")
    worst = max((eps_closeness(mine[k].polygon, theirs[k].polygon) for k in mine), default=0.0)
    # pentagon-level closeness is stronger than the hexagon-level property it stands in for
    return VerifyReport(passed=worst <= cfg.eps_max, max_closeness=worst, closeness_level="pentagon")


def verify(t: Tiling, cfg: VerifyConfig = VerifyConfig(), reference: Optional[Tiling] = None) -> VerifyReport:
    report = verify_fairness(t, cfg).merge(verify_incongruence(t, cfg)).merge(verify_geometry(t, cfg))
    if reference is not None:
        report = report.merge(verify_closeness(t, reference, cfg))
    return report

"""Pentagon tiling records shared by the generator, verifier and serializer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from .geometry import ConvexPolygon

PENTAGON_AREA = math.sqrt(3.0) / 2.0
PERIMETER_U = 2.0 + 3.0 * math.sqrt(2.0) - math.sqrt(6.0)
MARKED_SIDE = 2


@dataclass(frozen=True)
class PentagonRecord:
    id: int
    cluster: int
    hexagon: int
    index: int
    polygon: ConvexPolygon
    marked_side: int = MARKED_SIDE


@dataclass
class Tiling:
    pentagons: List[PentagonRecord]
    area_target: float = PENTAGON_AREA
    perimeter_target: float = PERIMETER_U
    generation: Dict = field(default_factory=dict)

    def __len__(self):
        return len(self.pentagons)

    @property
    def vertices(self) -> np.ndarray:
        if not self.pentagons:
            return np.zeros((0, 5, 2))
        return np.stack([r.polygon.vertices for r in self.pentagons])

    @property
    def cluster_ids(self) -> List[int]:
        return sorted({r.cluster for r in self.pentagons})

    def by_id(self) -> Dict[int, PentagonRecord]:
        return {r.id: r for r in self.pentagons}

    def hexagon(self, cluster: int, hexagon: int) -> ConvexPolygon:
        """Rebuild a hexagon from the corners its three pentagons keep."""
        recs = {r.index: r.polygon.vertices for r in self.pentagons if r.cluster == cluster and r.hexagon == hexagon}
        p1, p2, p3 = recs[0], recs[1], recs[2]
        return ConvexPolygon([p3[3], p1[2], p1[3], p2[2], p2[3], p3[2]])

"""Finite patches of the fair pentagon tiling.

Clusters are laid out on the lattice, perturbed one after another with a
shrinking magnitude ``eps0 * rho**k``, and every hexagon is split into three
pentagons.  A cluster is accepted only when its 21 pentagons and 21 marked
side figures stay at least ``delta_sep`` away (up to congruence) from each
other and from everything accepted before; otherwise it is re-perturbed
with fresh random directions.
"""

from __future__ import annotations

import logging
import math
from typing import List

import numpy as np

from . import kernels
from .cluster import (
    PerturbationPlan,
    build_canonical_cluster,
    cluster_count,
    cluster_lattice,
    perturb_cluster,
)
from .errors import GenerationFailureError, PerturbationFailureError, SplitFailureError
from .hexsplit import split_hexagon
from .nlsolve import SolverConfig
from .tiling import PentagonRecord, Tiling

log = logging.getLogger(__name__)

DELTA_SEP = 1e-9
RETRY_BUDGET = 20
PENTAGONS_PER_CLUSTER = 21


def pentagon_id(cluster: int, hexagon: int, index: int) -> int:
    return cluster * PENTAGONS_PER_CLUSTER + hexagon * 3 + index


def max_rings(eps0: float, rho: float, delta_sep: float = DELTA_SEP) -> int:
    """Largest ring count whose last cluster still perturbs by at least 1e3 * delta_sep."""
    rings = 0
    while eps0 * rho ** (cluster_count(rings + 1) - 1) >= 1e3 * delta_sep:
        rings += 1
    return rings


def _split_cluster(cl, k, cfg):
    recs = []
    for h in range(7):
        try:
            split = split_hexagon(cl.hexagon(h), cfg)
        except SplitFailureError as exc:
            raise SplitFailureError(f"cluster {k}, hexagon {h}: {exc}", exc.report) from exc
        for i, poly in enumerate(split.pentagons):
            recs.append(PentagonRecord(pentagon_id(k, h, i), k, h, i, poly, split.marked_side[i]))
    return recs


def _features(recs):
    V = np.stack([r.polygon.vertices for r in recs])
    L, A = kernels.polygon_features(V)
    rows = np.arange(len(recs))
    m = np.array([r.marked_side for r in recs])
    F = np.column_stack([L[rows, m], A[rows, m], A[rows, (m + 1) % 5]])
    return L, A, F


def generate_patch(
    rings: int = 1,
    eps0: float = 5e-3,
    rho: float = 0.7,
    seed: int = 0,
    cfg: SolverConfig = SolverConfig(),
    delta_sep: float = DELTA_SEP,
    retry_budget: int = RETRY_BUDGET,
) -> Tiling:
    if rings < 0:
        raise ValueError("rings must be non-negative")
    if not 0 < eps0 <= 0.01:
        raise ValueError("eps0 must lie in (0, 0.01]")
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    cap = max_rings(eps0, rho, delta_sep)
    if rings > cap:
        raise ValueError(f"rings={rings} would shrink perturbations below 1e3*delta_sep; at most {cap} rings")

    rng = np.random.default_rng(seed)
    base = build_canonical_cluster()
    records: List[PentagonRecord] = []
    acc_L = np.zeros((0, 5))
    acc_A = np.zeros((0, 5))
    acc_F = np.zeros((0, 3))
    for k, t in enumerate(cluster_lattice(rings)):
        start = base.translated(t)
        magnitude = eps0 * rho**k
        for attempt in range(retry_budget):
            plan = PerturbationPlan.random(magnitude, rng)
            try:
                cl = perturb_cluster(start, plan, cfg)
            except PerturbationFailureError as exc:
                log.debug("cluster %d attempt %d: %s", k, attempt, exc)
                continue
            recs = _split_cluster(cl, k, cfg)
            L, A, F = _features(recs)
            seps = (
                kernels.min_pairwise_dihedral(L, A)[0],
                kernels.min_pairwise_sidefig(F)[0],
                kernels.min_cross_dihedral(L, A, acc_L, acc_A)[0],
                kernels.min_cross_sidefig(F, acc_F)[0],
            )
            if min(seps) >= delta_sep:
                break
            log.debug("cluster %d attempt %d rejected, separation %.3e", k, attempt, min(seps))
        else:
            raise GenerationFailureError(f"cluster {k} exhausted its retry budget of {retry_budget}", cluster=k)
        records.extend(recs)
        acc_L = np.concatenate([acc_L, L])
        acc_A = np.concatenate([acc_A, A])
        acc_F = np.concatenate([acc_F, F])

    generation = {
        "rings": rings,
        "epsilon": eps0,
        "rho": rho,
        "seed": seed,
        "tolerances": {
            "tol_residual": cfg.tol_residual,
            "max_iter": cfg.max_iter,
            "fd_step": cfg.fd_step,
            "damping": cfg.damping,
            "delta_sep": delta_sep,
        },
    }
    return Tiling(records, generation=generation)


def reference_patch(rings: int = 1, cfg: SolverConfig = SolverConfig()) -> Tiling:
    """Same layout with no perturbation: every pentagon congruent to every other."""
    if rings < 0:
        raise ValueError("rings must be non-negative")
    base = build_canonical_cluster()
    records: List[PentagonRecord] = []
    for k, t in enumerate(cluster_lattice(rings)):
        records.extend(_split_cluster(base.translated(t), k, cfg))
    generation = {
        "rings": rings,
        "epsilon": 0.0,
        "rho": 0.0,
        "seed": None,
        "tolerances": {"tol_residual": cfg.tol_residual},
    }
    return Tiling(records, generation=generation)


def expected_pentagon_count(rings: int) -> int:
    return PENTAGONS_PER_CLUSTER * cluster_count(rings)


def total_area(t: Tiling) -> float:
    return math.fsum(r.polygon.area() for r in t.pentagons)

"""Hot loops over many polygons: all-pairs congruence and overlap searches.

Each kernel has a numba ``@njit`` implementation and a vectorized numpy
implementation with identical semantics (including tie-breaking, so both
report the same pair).  The numba path is used when numba imports and the
environment variable ``FAIRPENT_DISABLE_NUMBA`` is unset or ``0``.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _env_disabled() -> bool:
    return os.environ.get("FAIRPENT_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _env_disabled()
BACKEND = "numba" if USE_NUMBA else "numpy"


def _njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# -- features -----------------------------------------------------------------


def polygon_features(verts: np.ndarray):
    """Side lengths and interior angles for a batch of polygons.

    ``verts`` has shape ``(N, n, 2)``; side ``i`` runs from vertex ``i`` to
    ``i + 1``.  Shared by both backends so downstream comparisons agree bitwise.
    """
    v = np.asarray(verts, dtype=np.float64)
    e_out = np.roll(v, -1, axis=1) - v
    e_in = v - np.roll(v, 1, axis=1)
    lengths = np.hypot(e_out[..., 0], e_out[..., 1])
    cross = e_in[..., 0] * e_out[..., 1] - e_in[..., 1] * e_out[..., 0]
    dot = e_in[..., 0] * e_out[..., 0] + e_in[..., 1] * e_out[..., 1]
    angles = math.pi - np.arctan2(cross, dot)
    return lengths, angles


def reversed_features(lengths: np.ndarray, angles: np.ndarray):
    """Features of the mirror image, re-indexed so vertex order stays counterclockwise."""
    n = lengths.shape[-1]
    i = np.arange(n)
    return lengths[..., (n - 2 - i) % n], angles[..., (n - 1 - i) % n]


# -- dihedral distance ---------------------------------------------------------


@_njit
def _dihedral_distance_jit(l1, a1, l2, a2):
    n = l1.shape[0]
    best = np.inf
    for rev in range(2):
        for k in range(n):
            worst = 0.0
            for i in range(n):
                if rev == 0:
                    jl = (i + k) % n
                    ja = jl
                else:
                    jl = (n - 2 - i - k) % n
                    ja = (n - 1 - i - k) % n
                d = abs(l1[i] - l2[jl])
                if d > worst:
                    worst = d
                d = abs(a1[i] - a2[ja])
                if d > worst:
                    worst = d
                if worst >= best:
                    break
            if worst < best:
                best = worst
    return best


def _dihedral_table_np(l1, a1, l2, a2):
    """All 2n alignment distances between one polygon and a stack ``(m, n)``."""
    n = l1.shape[-1]
    i = np.arange(n)
    k = np.arange(n)[:, None]
    fwd = (i + k) % n
    rev_l = (n - 2 - i - k) % n
    rev_a = (n - 1 - i - k) % n
    dl_f = np.abs(l1 - l2[..., fwd])
    da_f = np.abs(a1 - a2[..., fwd])
    dl_r = np.abs(l1 - l2[..., rev_l])
    da_r = np.abs(a1 - a2[..., rev_a])
    fwd_d = np.maximum(dl_f.max(axis=-1), da_f.max(axis=-1))
    rev_d = np.maximum(dl_r.max(axis=-1), da_r.max(axis=-1))
    return np.minimum(fwd_d.min(axis=-1), rev_d.min(axis=-1))


def _dihedral_distance_np(l1, a1, l2, a2):
    return float(_dihedral_table_np(l1, a1, l2, a2))


# Sort key for exact sweep pruning: for any vertex bijection the L-inf
# feature distance is at least |max side p - max side q|.


@_njit
def _min_pairwise_dihedral_jit(L, A, order, key):
    N = L.shape[0]
    best = np.inf
    bi = -1
    bj = -1
    for s in range(N):
        i = order[s]
        for t in range(s + 1, N):
            j = order[t]
            if key[j] - key[i] > best:
                break
            d = _dihedral_distance_jit(L[i], A[i], L[j], A[j])
            if d < best:
                best = d
                bi = i
                bj = j
    return best, bi, bj


def _min_pairwise_dihedral_np(L, A, order, key):
    N = L.shape[0]
    best, bi, bj = np.inf, -1, -1
    sk = key[order]
    for s in range(N - 1):
        i = order[s]
        # keys are sorted, so the differences are monotone and the cut is exact
        stop = s + 1 + int(np.searchsorted(sk[s + 1 :] - sk[s], best, side="right"))
        cand = order[s + 1 : stop]
        if cand.size == 0:
            continue
        cand = cand[key[cand] - key[i] <= best]
        if cand.size == 0:
            continue
        d = _dihedral_table_np(L[i], A[i], L[cand], A[cand])
        m = int(np.argmin(d))
        if d[m] < best:
            # first occurrence in sweep order matches the jit loop's strict '<'
            best, bi, bj = float(d[m]), int(i), int(cand[m])
    return best, bi, bj


@_njit
def _min_cross_dihedral_jit(L1, A1, L2, A2):
    best = np.inf
    bi = -1
    bj = -1
    for i in range(L1.shape[0]):
        for j in range(L2.shape[0]):
            d = _dihedral_distance_jit(L1[i], A1[i], L2[j], A2[j])
            if d < best:
                best = d
                bi = i
                bj = j
    return best, bi, bj


def _min_cross_dihedral_np(L1, A1, L2, A2):
    best, bi, bj = np.inf, -1, -1
    if L2.shape[0] == 0:
        return best, bi, bj
    for i in range(L1.shape[0]):
        d = _dihedral_table_np(L1[i], A1[i], L2, A2)
        m = int(np.argmin(d))
        if d[m] < best:
            best, bi, bj = float(d[m]), i, m
    return best, bi, bj


# -- side figures -------------------------------------------------------------


@_njit
def _min_pairwise_sidefig_jit(F, order, key):
    N = F.shape[0]
    best = np.inf
    bi = -1
    bj = -1
    for s in range(N):
        i = order[s]
        for t in range(s + 1, N):
            j = order[t]
            if key[j] - key[i] > best:
                break
            dl = abs(F[i, 0] - F[j, 0])
            same = max(dl, max(abs(F[i, 1] - F[j, 1]), abs(F[i, 2] - F[j, 2])))
            swap = max(dl, max(abs(F[i, 1] - F[j, 2]), abs(F[i, 2] - F[j, 1])))
            d = min(same, swap)
            if d < best:
                best = d
                bi = i
                bj = j
    return best, bi, bj


def _sidefig_table_np(f, G):
    dl = np.abs(f[0] - G[:, 0])
    same = np.maximum(dl, np.maximum(np.abs(f[1] - G[:, 1]), np.abs(f[2] - G[:, 2])))
    swap = np.maximum(dl, np.maximum(np.abs(f[1] - G[:, 2]), np.abs(f[2] - G[:, 1])))
    return np.minimum(same, swap)


def _min_pairwise_sidefig_np(F, order, key):
    N = F.shape[0]
    best, bi, bj = np.inf, -1, -1
    for s in range(N - 1):
        i = order[s]
        cand = order[s + 1 :]
        cand = cand[key[cand] - key[i] <= best]
        if cand.size == 0:
            continue
        d = _sidefig_table_np(F[i], F[cand])
        m = int(np.argmin(d))
        if d[m] < best:
            best, bi, bj = float(d[m]), int(i), int(cand[m])
    return best, bi, bj


@_njit
def _min_cross_sidefig_jit(F1, F2):
    best = np.inf
    bi = -1
    bj = -1
    for i in range(F1.shape[0]):
        for j in range(F2.shape[0]):
            dl = abs(F1[i, 0] - F2[j, 0])
            same = max(dl, max(abs(F1[i, 1] - F2[j, 1]), abs(F1[i, 2] - F2[j, 2])))
            swap = max(dl, max(abs(F1[i, 1] - F2[j, 2]), abs(F1[i, 2] - F2[j, 1])))
            d = min(same, swap)
            if d < best:
                best = d
                bi = i
                bj = j
    return best, bi, bj


def _min_cross_sidefig_np(F1, F2):
    best, bi, bj = np.inf, -1, -1
    if F2.shape[0] == 0:
        return best, bi, bj
    for i in range(F1.shape[0]):
        d = _sidefig_table_np(F1[i], F2)
        m = int(np.argmin(d))
        if d[m] < best:
            best, bi, bj = float(d[m]), i, m
    return best, bi, bj


# -- overlap ------------------------------------------------------------------


@_njit
def _sat_margin_jit(P, Q):
    """Largest separating gap over the edge normals of both polygons.

    Negative means the interiors overlap by at least that depth.
    """
    best = -np.inf
    for pass_ in range(2):
        if pass_ == 0:
            X = P
            Y = Q
        else:
            X = Q
            Y = P
        n = X.shape[0]
        for k in range(n):
            ex = X[(k + 1) % n, 0] - X[k, 0]
            ey = X[(k + 1) % n, 1] - X[k, 1]
            norm = math.hypot(ex, ey)
            nx = ey / norm
            ny = -ex / norm
            c = -np.inf
            for i in range(n):
                v = X[i, 0] * nx + X[i, 1] * ny
                if v > c:
                    c = v
            lo = np.inf
            for j in range(Y.shape[0]):
                v = Y[j, 0] * nx + Y[j, 1] * ny
                if v < lo:
                    lo = v
            gap = lo - c
            if gap > best:
                best = gap
    return best


@_njit
def _first_overlap_jit(V, order, xmin, xmax, ymin, ymax, tol):
    N = V.shape[0]
    for s in range(N):
        i = order[s]
        for t in range(s + 1, N):
            j = order[t]
            if xmin[j] > xmax[i] - tol:
                break
            if ymin[j] > ymax[i] - tol or ymin[i] > ymax[j] - tol:
                continue
            m = _sat_margin_jit(V[i], V[j])
            if m < -tol:
                return min(i, j), max(i, j), m
    return -1, -1, 0.0


def _sat_margin_np(P, Qs):
    """Vectorized SAT gap of one polygon ``P`` against a stack ``Qs`` of shape (m, n, 2)."""

    def normals(X):
        e = np.roll(X, -1, axis=-2) - X
        nrm = np.hypot(e[..., 0], e[..., 1])
        return np.stack([e[..., 1] / nrm, -e[..., 0] / nrm], axis=-1)

    nP = normals(P)  # (n, 2)
    cP = (P[:, 0][None, :] * nP[:, 0][:, None] + P[:, 1][None, :] * nP[:, 1][:, None]).max(axis=1)
    projQ = Qs[:, None, :, 0] * nP[None, :, None, 0] + Qs[:, None, :, 1] * nP[None, :, None, 1]
    gapP = projQ.min(axis=2) - cP[None, :]  # (m, n)
    nQ = normals(Qs)  # (m, n, 2)
    projQself = Qs[:, None, :, 0] * nQ[:, :, None, 0] + Qs[:, None, :, 1] * nQ[:, :, None, 1]
    cQ = projQself.max(axis=2)
    projP = P[None, None, :, 0] * nQ[:, :, None, 0] + P[None, None, :, 1] * nQ[:, :, None, 1]
    gapQ = projP.min(axis=2) - cQ
    return np.maximum(gapP.max(axis=1), gapQ.max(axis=1))


def _first_overlap_np(V, order, xmin, xmax, ymin, ymax, tol):
    N = V.shape[0]
    sx = xmin[order]
    for s in range(N - 1):
        i = order[s]
        stop = int(np.searchsorted(sx, xmax[i] - tol, side="right"))
        cand = order[s + 1 : max(stop, s + 1)]
        # exact form of the jit break test
        cand = cand[~(xmin[cand] > xmax[i] - tol)]
        cand = cand[~((ymin[cand] > ymax[i] - tol) | (ymin[i] > ymax[cand] - tol))]
        if cand.size == 0:
            continue
        m = _sat_margin_np(V[i], V[cand])
        hit = np.nonzero(m < -tol)[0]
        if hit.size:
            j = int(cand[hit[0]])
            return min(i, j), max(i, j), float(m[hit[0]])
    return -1, -1, 0.0


# -- public dispatch ----------------------------------------------------------


def dihedral_distance(l1, a1, l2, a2, use_numba=None) -> float:
    fn = _dihedral_distance_jit if _pick(use_numba) else _dihedral_distance_np
    return float(fn(np.ascontiguousarray(l1), np.ascontiguousarray(a1), np.ascontiguousarray(l2), np.ascontiguousarray(a2)))


def min_pairwise_dihedral(L, A, use_numba=None):
    """Closest pair (distance, i, j) among N feature sequences; (inf, -1, -1) when N < 2."""
    L = np.ascontiguousarray(L, dtype=np.float64)
    A = np.ascontiguousarray(A, dtype=np.float64)
    if L.shape[0] < 2:
        return math.inf, -1, -1
    key = L.max(axis=1)
    order = np.argsort(key, kind="stable")
    fn = _min_pairwise_dihedral_jit if _pick(use_numba) else _min_pairwise_dihedral_np
    d, i, j = fn(L, A, order, key)
    return float(d), *_ordered(int(i), int(j))


def min_cross_dihedral(L1, A1, L2, A2, use_numba=None):
    args = [np.ascontiguousarray(x, dtype=np.float64) for x in (L1, A1, L2, A2)]
    if args[0].shape[0] == 0 or args[2].shape[0] == 0:
        return math.inf, -1, -1
    fn = _min_cross_dihedral_jit if _pick(use_numba) else _min_cross_dihedral_np
    d, i, j = fn(*args)
    return float(d), int(i), int(j)


def min_pairwise_sidefig(F, use_numba=None):
    F = np.ascontiguousarray(F, dtype=np.float64).reshape(-1, 3)
    if F.shape[0] < 2:
        return math.inf, -1, -1
    key = F[:, 0].copy()
    order = np.argsort(key, kind="stable")
    fn = _min_pairwise_sidefig_jit if _pick(use_numba) else _min_pairwise_sidefig_np
    d, i, j = fn(F, order, key)
    return float(d), *_ordered(int(i), int(j))


def min_cross_sidefig(F1, F2, use_numba=None):
    F1 = np.ascontiguousarray(F1, dtype=np.float64).reshape(-1, 3)
    F2 = np.ascontiguousarray(F2, dtype=np.float64).reshape(-1, 3)
    if F1.shape[0] == 0 or F2.shape[0] == 0:
        return math.inf, -1, -1
    fn = _min_cross_sidefig_jit if _pick(use_numba) else _min_cross_sidefig_np
    d, i, j = fn(F1, F2)
    return float(d), int(i), int(j)


def first_overlap(V, tol=1e-12, use_numba=None):
    """First pair of convex polygons whose interiors overlap deeper than ``tol``.

    ``V`` is ``(N, n, 2)`` counterclockwise.  Returns ``(i, j, margin)`` with
    ``i < j``, or ``(-1, -1, 0.0)`` if every pair is disjoint or merely touching.
    """
    V = np.ascontiguousarray(V, dtype=np.float64)
    if V.shape[0] < 2:
        return -1, -1, 0.0
    xmin, xmax = V[..., 0].min(axis=1), V[..., 0].max(axis=1)
    ymin, ymax = V[..., 1].min(axis=1), V[..., 1].max(axis=1)
    order = np.argsort(xmin, kind="stable")
    fn = _first_overlap_jit if _pick(use_numba) else _first_overlap_np
    i, j, m = fn(V, order, xmin, xmax, ymin, ymax, float(tol))
    return int(i), int(j), float(m)


def _pick(use_numba):
    if use_numba is None:
        return USE_NUMBA
    if use_numba and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    return bool(use_numba)


def _ordered(i, j):
    return (i, j) if i <= j else (j, i)

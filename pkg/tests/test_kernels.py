import itertools
import math

import numpy as np
import pytest

from fairpent import kernels
from fairpent.geometry import SideFigure, congruence_distance, regular_polygon, side_figure_distance

BACKENDS = [False] + ([True] if kernels.HAVE_NUMBA else [])


def jittered_pentagons(rng, n, scale=1e-3):
    base = regular_polygon(5).vertices
    return np.stack([base + rng.normal(scale=scale, size=(5, 2)) for _ in range(n)])


def clip_area(P, Q):
    """Area of the intersection of two ccw convex polygons by polygon clipping."""
    out = [tuple(p) for p in P]
    m = len(Q)
    for k in range(m):
        a, b = Q[k], Q[(k + 1) % m]
        side = lambda p: (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])  # noqa: E731
        src, out = out, []
        for i in range(len(src)):
            cur, nxt = src[i], src[(i + 1) % len(src)]
            sc, sn = side(cur), side(nxt)
            if sc >= 0:
                out.append(cur)
            if (sc >= 0) != (sn >= 0):
                t = sc / (sc - sn)
                out.append((cur[0] + t * (nxt[0] - cur[0]), cur[1] + t * (nxt[1] - cur[1])))
        if not out:
            return 0.0
    return 0.5 * sum(out[i][0] * out[(i + 1) % len(out)][1] - out[(i + 1) % len(out)][0] * out[i][1] for i in range(len(out)))


def brute_pairwise(V):
    best = (math.inf, -1, -1)
    for i, j in itertools.combinations(range(len(V)), 2):
        d = congruence_distance(V[i], V[j])
        if d < best[0]:
            best = (d, i, j)
    return best


def sidefig_dist(f, g):
    return side_figure_distance(SideFigure(*f), SideFigure(*g))


@pytest.mark.parametrize("use_numba", BACKENDS)
class TestDihedral:
    def test_pairwise_matches_brute_force(self, use_numba, rng):
        V = jittered_pentagons(rng, 40)
        L, A = kernels.polygon_features(V)
        d, i, j = kernels.min_pairwise_dihedral(L, A, use_numba=use_numba)
        bd, bi, bj = brute_pairwise(V)
        assert d == pytest.approx(bd, abs=1e-15)
        assert (i, j) == (bi, bj)

    def test_pairwise_wide_spread_of_keys(self, use_numba, rng):
        # scaled copies spread the max-side key so the sweep actually prunes
        V = jittered_pentagons(rng, 60) * rng.uniform(0.5, 2.0, size=(60, 1, 1))
        L, A = kernels.polygon_features(V)
        d, i, j = kernels.min_pairwise_dihedral(L, A, use_numba=use_numba)
        assert d == pytest.approx(brute_pairwise(V)[0], abs=1e-15)

    def test_cross_matches_brute_force(self, use_numba, rng):
        V1, V2 = jittered_pentagons(rng, 15), jittered_pentagons(rng, 12)
        L1, A1 = kernels.polygon_features(V1)
        L2, A2 = kernels.polygon_features(V2)
        d, i, j = kernels.min_cross_dihedral(L1, A1, L2, A2, use_numba=use_numba)
        brute = min((congruence_distance(p, q), a, b) for a, p in enumerate(V1) for b, q in enumerate(V2))
        assert d == pytest.approx(brute[0], abs=1e-15)
        assert congruence_distance(V1[i], V2[j]) == pytest.approx(d, abs=1e-15)

    def test_mirror_copy_found(self, use_numba, rng):
        V = jittered_pentagons(rng, 10)
        V[7] = V[3][::-1] * np.array([-1.0, 1.0])  # reflect in y axis, keep ccw
        L, A = kernels.polygon_features(V)
        d, i, j = kernels.min_pairwise_dihedral(L, A, use_numba=use_numba)
        assert d <= 1e-14
        assert (i, j) == (3, 7)

    def test_fewer_than_two(self, use_numba):
        L = np.ones((1, 5))
        assert kernels.min_pairwise_dihedral(L, L, use_numba=use_numba) == (math.inf, -1, -1)
        assert kernels.min_cross_dihedral(L, L, L[:0], L[:0], use_numba=use_numba)[0] == math.inf


@pytest.mark.parametrize("use_numba", BACKENDS)
class TestSideFigures:
    def test_pairwise_matches_brute_force(self, use_numba, rng):
        F = np.column_stack([rng.uniform(0.9, 1.1, 80), rng.uniform(2.0, 2.2, 80), rng.uniform(2.0, 2.2, 80)])
        F[50] = F[11][[0, 2, 1]]  # swapped copy is the same figure
        d, i, j = kernels.min_pairwise_sidefig(F, use_numba=use_numba)
        assert d == 0.0
        assert (i, j) == (11, 50)
        F[50] += 1e-3
        d, _, _ = kernels.min_pairwise_sidefig(F, use_numba=use_numba)
        brute = min(sidefig_dist(F[a], F[b]) for a, b in itertools.combinations(range(80), 2))
        assert d == pytest.approx(brute, abs=1e-15)

    def test_cross(self, use_numba, rng):
        F1 = rng.uniform(1, 2, size=(20, 3))
        F2 = rng.uniform(1, 2, size=(25, 3))
        d, i, j = kernels.min_cross_sidefig(F1, F2, use_numba=use_numba)
        brute = min(sidefig_dist(f, g) for f in F1 for g in F2)
        assert d == pytest.approx(brute, abs=1e-15)
        assert sidefig_dist(F1[i], F2[j]) == pytest.approx(d, abs=1e-15)


@pytest.mark.parametrize("use_numba", BACKENDS)
class TestOverlap:
    def test_matches_clipping_oracle(self, use_numba, rng):
        base = regular_polygon(5, radius=0.5).vertices
        V = np.stack([base + rng.uniform(0, 4, size=2) for _ in range(25)])
        areas = {
            (i, j): clip_area(V[i], V[j]) for i, j in itertools.combinations(range(25), 2)
        }
        i, j, margin = kernels.first_overlap(V, use_numba=use_numba)
        assert (i >= 0) == (max(areas.values()) > 1e-12)
        if i < 0:
            assert max(areas.values()) <= 1e-12
        else:
            assert areas[(i, j)] > 0
            assert margin < 0

    def test_tiles_only_touch(self, use_numba):
        squares = np.array([[(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)] for x in range(4) for y in range(4)], dtype=float)
        assert kernels.first_overlap(squares, use_numba=use_numba) == (-1, -1, 0.0)

    def test_shifted_square_overlaps(self, use_numba):
        sq = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)
        V = np.stack([sq, sq + (5, 5), sq + (0.5, 0.5)])
        i, j, margin = kernels.first_overlap(V, use_numba=use_numba)
        assert (i, j) == (0, 2)
        assert margin == pytest.approx(-0.5)  # overlap depth is reported negative

    def test_touch_tolerance(self, use_numba):
        sq = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)
        V = np.stack([sq, sq + (1 - 1e-13, 0)])
        assert kernels.first_overlap(V, tol=1e-12, use_numba=use_numba)[0] == -1
        assert kernels.first_overlap(V, tol=1e-14, use_numba=use_numba)[0] == 0


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not importable")
def test_backends_agree(rng):
    V = jittered_pentagons(rng, 200, scale=5e-3)
    L, A = kernels.polygon_features(V)
    assert kernels.min_pairwise_dihedral(L, A, use_numba=True) == kernels.min_pairwise_dihedral(L, A, use_numba=False)
    F = np.column_stack([L[:, 2], A[:, 2], A[:, 3]])
    assert kernels.min_pairwise_sidefig(F, use_numba=True) == kernels.min_pairwise_sidefig(F, use_numba=False)
    tiles = V + 3 * np.arange(200)[:, None, None] * np.array([1.0, 0.0])
    assert kernels.first_overlap(tiles, use_numba=True) == kernels.first_overlap(tiles, use_numba=False)


def test_features_of_square():
    L, A = kernels.polygon_features(np.array([[(0, 0), (2, 0), (2, 1), (0, 1)]], dtype=float))
    np.testing.assert_allclose(L[0], [2, 1, 2, 1])
    np.testing.assert_allclose(A[0], [math.pi / 2] * 4)


def test_reversed_features_is_mirror(rng):
    V = jittered_pentagons(rng, 1, scale=0.05)
    mirror = (V[0] * np.array([1.0, -1.0]))[::-1]
    L, A = kernels.polygon_features(V)
    Lm, Am = kernels.polygon_features(mirror[None])
    Lr, Ar = kernels.reversed_features(L, A)
    shifts = [k for k in range(5) if np.allclose(np.roll(Lr[0], k), Lm[0]) and np.allclose(np.roll(Ar[0], k), Am[0])]
    assert shifts


def test_unknown_backend_request(monkeypatch):
    monkeypatch.setattr(kernels, "HAVE_NUMBA", False)
    with pytest.raises(RuntimeError):
        kernels.min_pairwise_sidefig(np.ones((3, 3)), use_numba=True)


@pytest.mark.parametrize("value, expected", [("1", "numpy"), ("0", "numba" if kernels.HAVE_NUMBA else "numpy")])
def test_env_flag_selects_backend(value, expected):
    import os
    import subprocess
    import sys

    env = {**os.environ, "FAIRPENT_DISABLE_NUMBA": value}
    res = subprocess.run([sys.executable, "-c", "from fairpent import kernels; print(kernels.BACKEND)"], env=env, capture_output=True, text=True, timeout=120)
    assert res.stdout.strip() == expected

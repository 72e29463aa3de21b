import math

import numpy as np
import pytest

from entropyseq.approx import adapt_coordinate
from entropyseq.differentials import WeierstrassData, entropy_sequence, hopf, hopf_series
from entropyseq.errors import QuadratureError
from entropyseq.expr import evaluate
from entropyseq.registry import get_surface
from entropyseq.surface import (DiskGrid, ImmersionSample, MoebiusMap, RectGrid, export_mesh,
                                gauss_normal, goursat_transform, integrate_immersion,
                                integrate_path, integrate_segments, metric_and_curvature,
                                null_curve_integrand, scale_and_bonnet)
from oracles import d2_dz2, d_dz


def data(g, h):
    return WeierstrassData.from_text(g, h)


def series_gap(a, b):
    """Worst coefficient gap, each against its rounding magnitude (floored at 1)."""
    hi = min(a.prec, b.prec)
    ref = np.maximum(1.0, a.padded_mags(0, hi) + b.padded_mags(0, hi))
    return float(np.max(np.abs(a.padded(0, hi) - b.padded(0, hi)) / ref))


# -- immersion ---------------------------------------------------------------------------

def test_enneper_closed_form():
    W = data("z", "z")
    Z = RectGrid(-0.8, -0.6, 0.7, 0.9, 5, 4).points()
    S = integrate_immersion(W, 0j, Z)
    z = Z
    want = np.stack([(z / 2 - z ** 3 / 6).real, (0.5j * z + 1j * z ** 3 / 6).real,
                     (z ** 2 / 2).real], axis=-1)
    assert np.max(np.abs(S.points - want)) < 1e-12


def test_limit_family_base_value():
    entry = get_surface("limit")
    W = entry.data()
    S = integrate_immersion(W, 0j, np.array([0j, 0.3 - 0.2j]), entry.theta, entry.base_value())
    np.testing.assert_allclose(S.points[0], [-0.5, 0.0, -2.0], atol=1e-15)
    x, y = 0.3, -0.2
    want = [x - 0.5 * math.exp(2 * x) * math.cos(2 * y), y + 0.5 * math.exp(2 * x) * math.sin(2 * y),
            -2 * math.exp(x) * math.cos(y)]
    np.testing.assert_allclose(S.points[1], want, atol=1e-10)


def test_full_period_phase():
    W = get_surface("scherk").data()
    grid = RectGrid(-0.3, -0.3, 0.3, 0.3, 4, 4)
    a = integrate_immersion(W, 0j, grid, 0.0)
    b = integrate_immersion(W, 0j, grid, 2 * math.pi)
    assert np.max(np.abs(a.points - b.points)) < 1e-12


def test_path_independence():
    W = get_surface("helicoid").data()
    phi = null_curve_integrand(W)
    target = 0.7 + 1.9j
    a = integrate_path(phi, [0j, target])
    b = integrate_path(phi, [0j, 0.7, target])
    c = integrate_path(phi, [0j, 1.9j, -0.4 + 1j, target])
    assert np.max(np.abs(a - b)) < 1e-8
    assert np.max(np.abs(a - c)) < 1e-8


def test_quadrature_rejects_pole():
    W = get_surface("scherk").data()
    with pytest.raises(QuadratureError):
        integrate_segments(null_curve_integrand(W), np.array([0j]), np.array([1.5 + 0j]))


def test_normals_are_inverse_stereographic():
    W = get_surface("schwarz").data()
    S = integrate_immersion(W, 0j, DiskGrid(0.25, 4, 12))
    G = evaluate(W.G, S.params)
    a = np.abs(G) ** 2
    want = np.stack([2 * G.real, 2 * G.imag, a - 1], axis=-1) / (a + 1)[..., None]
    assert np.max(np.abs(S.normals - want)) < 1e-9
    assert np.max(np.abs(np.linalg.norm(S.normals, axis=-1) - 1)) < 1e-9
    # G = (N1 + i N2) / (1 - N3)
    N = gauss_normal(np.array([0.3 - 2j]))[0]
    assert abs((N[0] + 1j * N[1]) / (1 - N[2]) - (0.3 - 2j)) < 1e-14


def test_sample_shape_checked():
    with pytest.raises(ValueError):
        ImmersionSample(np.zeros((2, 2)), np.zeros((2, 2, 3)), np.zeros((2, 3, 3)))


# -- metric ---------------------------------------------------------------------------------

def test_metric_examples():
    lam, K = metric_and_curvature(get_surface("limit").data(), 0j)
    assert K == pytest.approx(-0.25, rel=1e-12)
    assert metric_and_curvature(data("exp(z)", "i"), 0j)[1] == pytest.approx(-1.0, rel=1e-12)
    lam, K = metric_and_curvature(data("z", "z"), 0j)
    assert K == pytest.approx(-16.0, rel=1e-12)
    assert lam == pytest.approx(0.5, rel=1e-12)


def test_limit_family_curvature_display():
    for t in (0.5, 2.0):
        W = get_surface("limit").data({"t": t})
        for z in (0.3 + 0.4j, -1.2 - 2j):
            K = metric_and_curvature(W, z)[1]
            e = math.exp(2 * z.real)
            assert K == pytest.approx(-4 * t ** 2 * e / (1 + t ** 2 * e) ** 4, rel=1e-12)


def test_intrinsic_p2():
    # in the adapted chart w, P2 = -2 (u_ww + u_w^2) dw^2 with g = e^(2u) |dw|^2
    for name, p in [("scherk", 0.2 + 0.1j), ("knoid", 0.25 + 0.05j), ("schwarz", 0.1 - 0.15j)]:
        W = get_surface(name).data()
        G, h = W.expand(p, 24)
        _, inverse = adapt_coordinate(hopf_series(G, h))
        dinv = inverse.derivative()

        def u(w):
            z = p + inverse.evaluate(w)
            lam = metric_and_curvature(W, z)[0]
            return np.log(lam * np.abs(dinv.evaluate(w)))

        w0 = np.array(0j)
        got = -2 * (d2_dz2(u, w0, 1e-2) + d_dz(u, w0, 1e-2) ** 2)
        P2 = entropy_sequence(W, p, 2)[0].s.coeff(0) * dinv.coeff(0) ** 2
        assert abs(got - P2) < 1e-3 * max(1.0, abs(P2))


# -- transforms --------------------------------------------------------------------------------

def test_moebius_normalization():
    m = MoebiusMap.normalized(2, 1, 1, 3)
    assert abs(m.a * m.d - m.b * m.c - 1) < 1e-12
    assert m(0.5) == pytest.approx((2 * 0.5 + 1) / (0.5 + 3))
    with pytest.raises(ValueError):
        MoebiusMap(2, 0, 0, 1)
    with pytest.raises(ValueError):
        MoebiusMap.normalized(1, 2, 2, 4)


def test_goursat_identity_and_inversion():
    W = data("z", "z")
    p = 0.3 + 0.2j
    same = goursat_transform(W, MoebiusMap(1, 0, 0, 1))
    for z in (0.3 + 0.2j, -0.5j):
        assert evaluate(same.G, z) == pytest.approx(z)
        assert evaluate(same.h, z) == pytest.approx(z)
    inv = goursat_transform(W, MoebiusMap(0, 1j, 1j, 0))
    for z in (0.3 + 0.2j, -0.5j):
        assert evaluate(inv.G, z) == pytest.approx(1 / z)
        assert evaluate(inv.h, z) == pytest.approx(-z)
    q1, q2 = hopf(W, p).s, hopf(inv, p).s
    assert series_gap(q1, q2) < 1e-10
    assert abs(q1.coeff(0) + 1) < 1e-14


def test_goursat_random_keeps_hopf():
    rng = np.random.default_rng(31)
    W = get_surface("scherk").data()
    p = 0.2 - 0.1j
    q = hopf(W, p, 10).s
    for _ in range(10):
        q2 = hopf(goursat_transform(W, MoebiusMap.random(rng)), p, 10).s
        assert series_gap(q, q2) < 1e-10


def test_scale_and_bonnet():
    W = get_surface("helicoid").data()
    p = 0.2 + 0.3j
    with pytest.raises(ValueError):
        scale_and_bonnet(W, 0.0, 0.0)
    ident = scale_and_bonnet(W, 1.0, 0.0)
    assert evaluate(ident.h, p) == pytest.approx(evaluate(W.h, p))
    cat = scale_and_bonnet(W, 1.0, math.pi / 2)
    assert evaluate(cat.h, p) == pytest.approx(-1.0)
    base = entropy_sequence(W, p, 5)
    for W2 in (cat, scale_and_bonnet(W, 7.0, 0.0)):
        for A, B in zip(base, entropy_sequence(W2, p, 5)):
            hi = min(A.s.prec, B.s.prec)
            assert np.max(np.abs(A.s.padded(0, hi) - B.s.padded(0, hi)), initial=0.0) < 1e-10


# -- mesh export ------------------------------------------------------------------------------

@pytest.mark.parametrize("n,faces", [(2, 1), (3, 4)])
def test_export_mesh_counts(tmp_path, n, faces):
    S = integrate_immersion(data("z", "z"), 0j, RectGrid(-0.5, -0.5, 0.5, 0.5, n, n))
    path = tmp_path / "m.obj"
    export_mesh(S, path)
    lines = path.read_text().splitlines()
    v = [ln for ln in lines if ln.startswith("v ")]
    vn = [ln for ln in lines if ln.startswith("vn ")]
    f = [ln for ln in lines if ln.startswith("f ")]
    assert len(v) == n * n and len(vn) == n * n and len(f) == faces
    assert v[0] == "v %.17g %.17g %.17g" % tuple(S.points[0, 0])
    assert f[0] == f"f 1 2 {n + 2} {n + 1}"


def test_export_mesh_without_normals(tmp_path):
    S = integrate_immersion(data("z", "z"), 0j, RectGrid(-0.5, -0.5, 0.5, 0.5, 2, 2))
    path = tmp_path / "m.obj"
    export_mesh(S, path, normals=False)
    assert not [ln for ln in path.read_text().splitlines() if ln.startswith("vn")]


def test_export_mesh_rejects_thin_grid(tmp_path):
    S = integrate_immersion(data("z", "z"), 0j, RectGrid(-0.5, 0, 0.5, 0, 3, 1))
    with pytest.raises(ValueError):
        export_mesh(S, tmp_path / "m.obj")

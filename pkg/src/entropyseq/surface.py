"""Sampled minimal immersions from Weierstrass data.

The immersion is the real part of the null curve

    X~(z) = X~(base) + int_base^z (1/2 (1/G - G), i/2 (1/G + G), 1) eta,

integrated along straight segments by adaptive composite Gauss-Legendre
quadrature.  Charts are simply connected and pole-free, so path
independence is something the tests check rather than something we rely on.
"""

import cmath
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .differentials import WeierstrassData
from .errors import PoleError, QuadratureError, SeriesError
from .expr import add, const, differentiate, div, evaluate, mul

GL_NODES = 15
QUAD_TOL = 1e-10
MAX_PANELS = 4096

_X, _WTS = leggauss(GL_NODES)


# -- sampling grids ------------------------------------------------------------

@dataclass(frozen=True)
class RectGrid:
    """``nx`` by ``ny`` points spanning [x0, x1] x [y0, y1]; rows run along x."""

    x0: float
    y0: float
    x1: float
    y1: float
    nx: int
    ny: int

    def points(self):
        x = np.linspace(self.x0, self.x1, self.nx)
        y = np.linspace(self.y0, self.y1, self.ny)
        return x[None, :] + 1j * y[:, None]


@dataclass(frozen=True)
class DiskGrid:
    """Polar grid about ``center``; rows are rings of constant radius."""

    radius: float
    n_radial: int = 12
    n_angular: int = 24
    center: complex = 0j

    def points(self):
        r = np.linspace(0.0, self.radius, self.n_radial)
        phi = np.linspace(0.0, 2 * np.pi, self.n_angular, endpoint=False)
        return self.center + r[:, None] * np.exp(1j * phi)[None, :]


def grid_points(grid):
    if isinstance(grid, (RectGrid, DiskGrid)):
        return grid.points()
    return np.asarray(grid, dtype=complex)


@dataclass(frozen=True)
class ImmersionSample:
    params: np.ndarray
    points: np.ndarray
    normals: np.ndarray

    def __post_init__(self):
        if self.points.shape != self.params.shape + (3,) or self.normals.shape != self.points.shape:
            raise ValueError("inconsistent grid dimensions")


# -- quadrature ----------------------------------------------------------------

def _segment_integral(phi, a, b, panels):
    """Composite Gauss-Legendre approximation of int_a^b phi along straight segments."""
    k = np.arange(panels)
    t = ((k[:, None] + (_X[None, :] + 1) / 2) / panels).ravel()
    w = np.tile(_WTS / (2 * panels), panels)
    d = b - a
    z = a[:, None] + t[None, :] * d[:, None]
    with np.errstate(all="ignore"):
        f = phi(z)
    if not np.all(np.isfinite(f)):
        raise QuadratureError("integrand pole on the integration path")
    return (f @ w) * d


def integrate_segments(phi, a, b, tol=QUAD_TOL, max_panels=MAX_PANELS, ncomp=3):
    """Integrals of ``phi`` from each ``a`` to the matching ``b`` along straight lines.

    ``phi`` maps an array of points of shape (m, k) to values of shape
    (ncomp, m, k); the result has shape (ncomp, m).  Panels double until
    successive estimates agree to ``tol`` (relative, floored at 1).
    """
    a = np.broadcast_to(np.asarray(a, dtype=complex), np.shape(b)).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    live = np.flatnonzero(a != b)
    if live.size == 0:
        return np.zeros((ncomp, b.size), dtype=complex)
    panels = 1
    prev = _segment_integral(phi, a[live], b[live], panels)
    out = np.zeros(prev.shape[:-1] + (b.size,), dtype=complex)
    active = np.arange(live.size)
    while True:
        panels *= 2
        cur = _segment_integral(phi, a[live[active]], b[live[active]], panels)
        err = np.max(np.abs(cur - prev), axis=0)
        ref = np.maximum(np.max(np.abs(cur), axis=0), 1.0)
        done = err <= tol * ref
        out[..., live[active[done]]] = cur[..., done]
        active = active[~done]
        prev = cur[..., ~done]
        if active.size == 0:
            return out
        if panels >= max_panels:
            raise QuadratureError(
                f"quadrature did not converge with {panels} panels (error {err.max():.3g})")


def integrate_path(phi, waypoints, targets=None, tol=QUAD_TOL):
    """Integral of ``phi`` along the polygon through ``waypoints`` (then to each target)."""
    pts = [complex(p) for p in waypoints]
    total = 0j
    for a, b in zip(pts[:-1], pts[1:]):
        total = total + integrate_segments(phi, np.array([a]), np.array([b]), tol)[..., 0]
    if targets is None:
        return total
    targets = np.asarray(targets, dtype=complex).ravel()
    return total[..., None] + integrate_segments(phi, np.full(targets.shape, pts[-1]), targets, tol)


# -- Weierstrass integrand -------------------------------------------------------

def null_curve_integrand(W, theta=0.0):
    """Vectorized integrand e^(i theta) (1/2 (1/G - G), i/2 (1/G + G), 1) h."""
    phase = cmath.exp(1j * theta)

    def phi(z):
        G = evaluate(W.G, z)
        h = evaluate(W.h, z) * phase
        hg = h / G
        return np.stack([0.5 * (hg - G * h), 0.5j * (hg + G * h), h])

    return phi


def gauss_normal(G):
    """Inverse stereographic projection of the Gauss map value(s) ``G``."""
    G = np.asarray(G, dtype=complex)
    a = np.abs(G) ** 2
    return np.stack([2 * G.real, 2 * G.imag, a - 1], axis=-1) / (a + 1)[..., None]


def integrate_immersion(W, base, grid, theta=0.0, x_base=(0.0, 0.0, 0.0)):
    """Sample X = Re X~ on ``grid`` with X(base) = ``x_base``."""
    Z = grid_points(grid)
    base = complex(base)
    vals = integrate_segments(null_curve_integrand(W, theta), np.full(Z.size, base), Z.ravel())
    pts = vals.real.T.reshape(Z.shape + (3,)) + np.asarray(x_base, dtype=float)
    G = evaluate(W.G, Z)
    return ImmersionSample(Z, pts, gauss_normal(G))


# -- metric and curvature -------------------------------------------------------

def _series_limits(W, z0):
    G, h = W.expand(z0, 6)
    r1 = (h / G).coeff(0)
    r2 = (G.derivative() * G / h).coeff(0)
    return r1, r2


def metric_and_curvature(W, z0):
    """Conformal factor lambda (g = lambda^2 |dz|^2) and Gauss curvature K at ``z0``.

    ``z0`` may be an array.  At common zeros of G and h the ratios are taken
    as limits of the Laurent expansions.
    """
    z = np.asarray(z0, dtype=complex)
    G = evaluate(W.G, z)
    dG = evaluate(differentiate(W.G), z)
    h = evaluate(W.h, z)
    aG, ah = np.abs(G), np.abs(h)
    with np.errstate(all="ignore"):
        hg = ah / aG
        ratio = np.abs(dG) * aG / ah
    bad = ~(np.isfinite(hg) & np.isfinite(ratio))
    if np.any(bad):
        hg = np.array(hg, dtype=float, ndmin=1)
        ratio = np.array(ratio, dtype=float, ndmin=1)
        flat = np.array(z, ndmin=1)
        for idx in zip(*np.nonzero(np.array(bad, ndmin=1))):
            try:
                r1, r2 = _series_limits(W, complex(flat[idx]))
            except SeriesError as exc:
                raise PoleError(f"metric undefined at {complex(flat[idx])}: {exc}") from exc
            hg[idx], ratio[idx] = abs(r1), abs(r2)
        hg, ratio = hg.reshape(z.shape), ratio.reshape(z.shape)
    lam = 0.5 * (aG * ah + hg)
    K = -(4 * ratio / (1 + aG ** 2) ** 2) ** 2
    if z.ndim == 0:
        return float(lam), float(K)
    return lam, K


# -- transformations --------------------------------------------------------------

@dataclass(frozen=True)
class MoebiusMap:
    """w -> (a w + b) / (c w + d) with a d - b c = 1."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if abs(self.a * self.d - self.b * self.c - 1) > 1e-12:
            raise ValueError("Moebius map must be normalized to determinant 1")

    @classmethod
    def normalized(cls, a, b, c, d):
        det = complex(a) * complex(d) - complex(b) * complex(c)
        if abs(det) < 1e-14:
            raise ValueError("degenerate Moebius map (determinant 0)")
        s = 1 / cmath.sqrt(det)
        return cls(complex(a) * s, complex(b) * s, complex(c) * s, complex(d) * s)

    @classmethod
    def random(cls, rng):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        return cls.normalized(*v)

    def __call__(self, w):
        return (self.a * w + self.b) / (self.c * w + self.d)


def goursat_transform(W, m):
    """Moebius action on the Gauss map with eta adjusted so the Hopf differential is unchanged."""
    num = add(mul(const(m.a), W.G), const(m.b))
    den = add(mul(const(m.c), W.G), const(m.d))
    G2 = div(num, den)
    h2 = div(mul(W.h, mul(num, den)), W.G)
    label = f"{W.label} (Goursat)" if W.label else "Goursat"
    return WeierstrassData(G2, h2, label)


def scale_and_bonnet(W, c, theta):
    """Rescale by ``c > 0`` and rotate into the associated family by ``theta``."""
    if not c > 0:
        raise ValueError("scale factor must be positive")
    f = c * cmath.exp(1j * theta)
    return WeierstrassData(W.G, mul(const(f), W.h), W.label)


# -- mesh export --------------------------------------------------------------------

def export_mesh(S, path, normals=True):
    """Write ``S`` as a Wavefront OBJ with quad faces (1-based, row-major vertices)."""
    ny, nx = S.params.shape
    if nx < 2 or ny < 2:
        raise ValueError("mesh export needs at least a 2x2 grid")
    lines = ["v %.17g %.17g %.17g" % tuple(p) for p in S.points.reshape(-1, 3)]
    if normals:
        lines += ["vn %.17g %.17g %.17g" % tuple(v) for v in S.normals.reshape(-1, 3)]
    for j in range(ny - 1):
        for i in range(nx - 1):
            k = j * nx + i + 1
            lines.append(f"f {k} {k + 1} {k + nx + 1} {k + nx}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")

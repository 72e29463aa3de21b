"""Finite-degree approximants through Hill's equation.

In a chart where the Hopf differential is dw^2, the Gauss map is a ratio
G = w1/w2 of solutions of w'' + (rho/4) w = 0 with rho = 2 {G, w}.
Truncating rho to its Taylor polynomial rho_n of degree n-3 and solving with
the same initial data gives a Gauss map G_n whose surface has degree n.
"""

from dataclasses import dataclass

import numpy as np

from .differentials import entropy_from_series, hopf_series, schwarzian
from .errors import SeriesError, TrustRadiusError, UmbilicError
from .series import LaurentSeries, estimate_radius
from .surface import grid_points, integrate_segments, null_curve_integrand

WRONSKIAN_TOL = 1e-10


@dataclass(frozen=True)
class HillProblem:
    rho: LaurentSeries
    w0: complex
    w0prime: complex

    def __post_init__(self):
        if self.rho.valuation < 0:
            raise ValueError("Hill potential must be holomorphic")
        if self.w0 == 0 and self.w0prime == 0:
            raise ValueError("initial data must not both vanish")


@dataclass(frozen=True)
class ApproximantReport:
    n: int
    sup_error: float
    p_n_norm: float


def adapt_coordinate(q):
    """Series (forward, inverse) of the coordinate w with q dz^2 = dw^2 and w(base) = 0.

    ``forward`` gives w as a series in z - p; ``inverse`` gives z - p as a
    series in w about 0.
    """
    t = q.tight()
    if t.order == 0 or t.valuation != 0:
        raise UmbilicError("Hopf differential vanishes at the base point")
    forward = t.sqrt().antiderivative()
    return forward, forward.revert()


def hill_solve(P, order):
    """Taylor series of the solution of w'' + (rho/4) w = 0 with the given initial data."""
    if order < 2:
        raise ValueError("order must be >= 2")
    rho = P.rho.padded(0, order)
    rho_m = P.rho.padded_mags(0, order)
    c = np.zeros(order, dtype=complex)
    m = np.zeros(order)
    c[0], c[1] = P.w0, P.w0prime
    m[0], m[1] = abs(P.w0), abs(P.w0prime)
    for k in range(order - 2):
        s = np.dot(rho[: k + 1], c[k::-1])
        c[k + 2] = -0.25 * s / ((k + 2) * (k + 1))
        m[k + 2] = 0.25 * np.dot(rho_m[: k + 1], m[k::-1]) / ((k + 2) * (k + 1))
    return LaurentSeries(c, 0, P.rho.base_point, m)


def wronskian(w1, w2):
    return w1 * w2.derivative() - w2 * w1.derivative()


def gauss_from_solutions(w1, w2):
    """G = w1/w2 for a pair of Hill solutions with constant nonzero Wronskian."""
    W = wronskian(w1, w2)
    W0 = W.coeff(0) if W.prec > 0 else 0j
    if abs(W0) <= WRONSKIAN_TOL:
        raise SeriesError("solutions are linearly dependent (Wronskian vanishes)")
    if not (W - W0).is_zero(WRONSKIAN_TOL):
        raise SeriesError("Wronskian is not constant; inputs do not solve a common Hill equation")
    if w2.tight().valuation != 0:
        raise SeriesError("w2 vanishes at the base point")
    return w1 / w2


def hill_data(G):
    """Potential rho = 2{G, w} and the solution pair w2 = (G')^(-1/2), w1 = G w2."""
    rho = 2 * schwarzian(G)
    w2 = G.derivative().sqrt().inverse()
    w1 = G * w2
    return rho, w1, w2


def truncated_potential(rho, n, order):
    if n < 3:
        raise ValueError("approximant degree must be >= 3")
    keep = rho.padded(0, n - 2)
    mags = rho.padded_mags(0, n - 2)
    c = np.zeros(order, dtype=complex)
    m = np.zeros(order)
    c[: n - 2] = keep[:order]
    m[: n - 2] = mags[:order]
    return LaurentSeries(c, 0, rho.base_point, m)


def approximant_solutions(G, n, order):
    """Hill solutions (w1_n, w2_n) for the degree-n truncation of rho."""
    rho, w1, w2 = hill_data(G)
    rho_n = truncated_potential(rho, n, order)
    if abs(w2.coeff(0)) == 0:
        raise SeriesError("w2 vanishes at the base point")
    s1 = hill_solve(HillProblem(rho_n, w1.coeff(0), w1.coeff(1)), order)
    s2 = hill_solve(HillProblem(rho_n, w2.coeff(0), w2.coeff(1)), order)
    return s1, s2, rho_n


def approximate(G, n, order):
    """Degree-n approximant G_n of a Gauss map given in a Q-adapted chart."""
    s1, s2, _ = approximant_solutions(G, n, order)
    return gauss_from_solutions(s1, s2)


def approximant_data(G_n):
    """(G_n, eta_n) with eta_n = -G_n / G_n' so that the Hopf differential is dw^2."""
    return G_n, -(G_n / G_n.derivative())


def certificate(G_n, n):
    """Largest |coefficient| / rounding bound of P_n for the approximant (0 when exact)."""
    g, eta = approximant_data(G_n)
    P = entropy_from_series(g, eta, n)[-1].s
    if P.order == 0:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(P.mags > 0, np.abs(P.coeffs) / P.mags, 0.0)
    return float(np.max(r))


def trust_radius(G, h, q):
    """Half the distance to the nearest singularity detected in G, h or q.

    Coefficients lost in rounding noise do not count as a detected singularity.
    """
    r = min(estimate_radius(s, cap=np.inf, skip_noise=True) for s in (G, h, q))
    return 0.5 * r


def _series_integrand(s1, s2):
    """Null-curve integrand of (w1/w2, -G/G' dw) written through w1, w2 only."""
    d = (s1.derivative() * s2 - s1 * s2.derivative()).coeff(0)
    a, b = s1 * s1, s2 * s2
    comps = [(b - a) * (-0.5 / d), (b + a) * (-0.5j / d), (s1 * s2) * (-1.0 / d)]

    def phi(w):
        return np.stack([c.evaluate(w) for c in comps])

    return phi


def convergence_report(W, p, n_list, grid, order=32):
    """Compare the degree-n approximants with the surface itself on ``grid``.

    ``grid`` lives in the adapted coordinate w centred at ``p``.  Both
    immersions are normalized to vanish at ``p``.
    """
    p = complex(p)
    G, h = W.expand(p, order)
    q = hopf_series(G, h)
    forward, inverse = adapt_coordinate(q)
    Gw = G.compose(inverse)
    radius = trust_radius(G, h, q)
    Wg = grid_points(grid)
    dz = inverse.evaluate(Wg.ravel())
    if np.max(np.abs(dz)) > radius:
        raise TrustRadiusError(
            f"grid reaches |z - p| = {np.max(np.abs(dz)):.3g}, beyond the trust radius {radius:.3g}")
    exact = integrate_segments(null_curve_integrand(W), np.full(dz.size, p), p + dz).real
    reports = []
    for n in n_list:
        s1, s2, _ = approximant_solutions(Gw, n, order)
        G_n = gauss_from_solutions(s1, s2)
        approx = integrate_segments(_series_integrand(s1, s2), np.zeros(dz.size), Wg.ravel()).real
        err = float(np.max(np.linalg.norm(approx - exact, axis=0)))
        reports.append(ApproximantReport(int(n), err, certificate(G_n, n)))
    return reports

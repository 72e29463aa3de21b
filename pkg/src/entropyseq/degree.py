"""Degree detection: smallest n with P_n a weighted-homogeneous polynomial in P_2..P_(n-1).

Relations are always normalized to be monic in P_n:

    P_n + sum_alpha c_alpha * prod_j P_j^alpha_j = 0,

and the coefficients c_alpha are found by least squares on the stacked
Laurent coefficients of every term at several base points.
"""

from dataclasses import dataclass, field

import numpy as np

from .differentials import entropy_sequence, hopf
from .errors import IllConditionedError, NoRelationFound
from .series import LaurentSeries, estimate_radius

DEFAULT_TOL = 1e-8
MAX_CONDITION = 1e12


def weighted_monomials(n):
    """Multi-indices over (P_2, ..., P_(n-1)) of weighted degree n.

    Each multi-index is a tuple of exponents of length n-2.  Ordering: fewer
    factors first, then lexicographic on the ascending list of parts, so
    n=7 gives P2*P5, P3*P4, P2^2*P3.
    """
    if n < 2:
        raise ValueError("weighted degree must be >= 2")
    parts = []

    def rec(remaining, smallest, acc):
        if remaining == 0:
            parts.append(tuple(acc))
            return
        for j in range(smallest, min(remaining, n - 1) + 1):
            rec(remaining - j, j, acc + [j])

    rec(n, 2, [])
    parts.sort(key=lambda p: (len(p), p))
    out = []
    for p in parts:
        alpha = [0] * (n - 2)
        for j in p:
            alpha[j - 2] += 1
        out.append(tuple(alpha))
    return out


def monomial_text(alpha):
    factors = []
    for j, a in enumerate(alpha, start=2):
        if a == 1:
            factors.append(f"P{j}")
        elif a > 1:
            factors.append(f"P{j}^{a}")
    return "*".join(factors)


@dataclass(frozen=True)
class AlgebraicType:
    """Monic relation P_n + sum c_alpha P^alpha = 0 (empty ``terms`` means P_n = 0)."""

    n: int
    terms: tuple
    residual: float
    base_points: tuple = field(default=())
    condition: float = 1.0

    def coefficient(self, alpha):
        for a, c in self.terms:
            if tuple(a) == tuple(alpha):
                return c
        return 0j

    def to_text(self):
        out = f"P{self.n}"
        for alpha, c in self.terms:
            c = complex(c)
            num = f"{c.real:.12g}" if abs(c.imag) <= 1e-12 * max(abs(c), 1) else f"({c.real:.12g}{c.imag:+.12g}i)"
            out += f" + {num}*{monomial_text(alpha)}"
        return out + " = 0"


def _monomial_series(seq, alpha):
    """Product of the entropy series per multi-index; ``seq[j-2]`` is P_j."""
    out = None
    for j, a in enumerate(alpha, start=2):
        for _ in range(a):
            s = seq[j - 2].s
            out = s if out is None else out * s
    return out


def _weight(P):
    """Row weight base: half the smaller of the radius of the coefficients and
    the radius implied by the growth of their rounding bound."""
    s = P.s
    r = estimate_radius(s)
    r_noise = estimate_radius(LaurentSeries(s.mags, s.valuation, s.base_point))
    return min(1.0, 0.5 * r, 0.5 * r_noise)


def _stack(seqs, n, monomials):
    """Coefficient rows of the n-th relation over all base points.

    Returns the columns ``A``, target ``b``, their rounding magnitudes and
    the row weights used for the least-squares solve.
    """
    rows = []
    for seq in seqs:
        target = seq[n - 2]
        cols = [_monomial_series(seq, alpha) for alpha in monomials]
        lo = -n
        hi = min([target.s.prec] + [c.prec for c in cols])
        if hi <= lo:
            continue
        A = (np.column_stack([c.padded(lo, hi) for c in cols])
             if cols else np.zeros((hi - lo, 0), dtype=complex))
        MA = (np.column_stack([c.padded_mags(lo, hi) for c in cols])
              if cols else np.zeros((hi - lo, 0)))
        w = _weight(target) ** (np.arange(lo, hi) + n)
        rows.append((A, target.s.padded(lo, hi), MA, target.s.padded_mags(lo, hi), w))
    return tuple(np.concatenate([r[i] for r in rows]) for i in range(5))


def _residual(A, b, w, c):
    """Weighted residual relative to the largest weighted target coefficient."""
    bw = b * w
    scale = float(np.max(np.abs(bw), initial=0.0))
    if scale == 0:
        return 0.0
    r = (A @ c + b) * w if c.size else bw
    return float(np.max(np.abs(r))) / scale


def _solve(A, b, w):
    """Weighted, column-normalized least squares for the monic relation."""
    Aw = A * w[:, None]
    norms = np.linalg.norm(Aw, axis=0)
    norms[norms == 0] = 1.0
    sol, _, rank, sv = np.linalg.lstsq(Aw / norms, -b * w, rcond=None)
    cond = float(sv[0] / sv[-1]) if sv.size and sv[-1] > 0 else float("inf")
    return sol / norms, cond


def _sequences(W, base_points, n_max, order):
    return [entropy_sequence(W, p, n_max, order) for p in base_points]


def detect_degree(W, base_points, n_max=8, order=24, tol=DEFAULT_TOL):
    """Smallest degree n <= n_max together with its certified algebraic type."""
    base_points = [complex(p) for p in base_points]
    if len(base_points) < 2:
        raise ValueError("degree detection needs at least two base points")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    seqs = _sequences(W, base_points, n_max, order)
    for n in range(2, n_max + 1):
        if all(seq[n - 2].is_zero() for seq in seqs):
            return AlgebraicType(n, (), 0.0, tuple(base_points))
        monomials = weighted_monomials(n)
        if not monomials:
            continue
        A, b, _, _, w = _stack(seqs, n, monomials)
        c, cond = _solve(A, b, w)
        resid = _residual(A, b, w, c)
        if resid < tol:
            if cond > MAX_CONDITION:
                raise IllConditionedError(
                    f"degree-{n} relation is not unique (condition number {cond:.3g})", cond)
            terms = tuple((alpha, complex(ci)) for alpha, ci in zip(monomials, c))
            return AlgebraicType(n, terms, resid, tuple(base_points), cond)
    raise NoRelationFound(f"no weighted-homogeneous relation of degree <= {n_max}")


def verify_relation(T, W, probe_points, order=24):
    """Largest relative residual of the relation ``T`` at the probe points."""
    worst = 0.0
    monomials = [alpha for alpha, _ in T.terms]
    c = np.array([c for _, c in T.terms], dtype=complex)
    for p in probe_points:
        seq = entropy_sequence(W, complex(p), T.n, order)
        if not monomials and seq[T.n - 2].is_zero():
            continue
        A, b, _, _, w = _stack([seq], T.n, monomials)
        worst = max(worst, _residual(A, b, w, c))
    return worst


def select_base_points(W, rect, count=3, order=12):
    """Pick ``count`` base points from a 5x5 grid over ``rect = (x0, y0, x1, y1)``.

    Points where the data cannot be expanded or where |q| < 1e-6 max|q| are
    discarded; the rest are ranked by the estimated convergence radius of P2,
    which keeps them away from umbilics as well as from singular points of the
    data. Near an umbilic every P_l is dominated by its pole and spurious
    low-degree relations fit to within the tolerance.
    """
    x0, y0, x1, y1 = rect
    cands = []
    for y in np.linspace(y0, y1, 5):
        for x in np.linspace(x0, x1, 5):
            p = complex(x, y)
            try:
                q = hopf(W, p, order).s
                P2 = entropy_sequence(W, p, 2, order)[0].s
            except ArithmeticError:
                continue
            cands.append((p, abs(q.coeff(0)), estimate_radius(P2, cap=1e6)))
    if not cands:
        raise NoRelationFound("no usable base point in the chart")
    qmax = max(c[1] for c in cands)
    good = [c for c in cands if c[1] >= 1e-6 * qmax]
    good.sort(key=lambda c: -c[2])
    return [c[0] for c in good[:count]]


def umbilic_coefficient(n, target):
    """Coefficient lambda_n of the relation forced at an umbilic of Hopf order n."""
    if n < 1:
        raise ValueError("umbilic order must be >= 1")
    if target == "degree4":
        return 12 * (n + 2) ** 2 / (3 * n * n + 4 * n)
    if target == "degree5":
        return 24 * (n + 2) ** 2 / ((3 * n + 4) * n)
    raise ValueError(f"unknown target {target!r}")

"""Hopf differential, flat connection and the entropy differentials P_l.

All computations are chart-local: Weierstrass data are expanded as Laurent
series at a base point and every differential is returned as the local
coefficient series ``s`` of ``s dz^l``.
"""

from dataclasses import dataclass
from math import factorial

from .errors import CriticalPointError, PoleError, SeriesError, ZeroHopfError
from .expr import Expr, expand, parse, to_text
from .series import DEFAULT_ORDER, LaurentSeries


@dataclass(frozen=True)
class WeierstrassData:
    """Gauss map ``G`` and height differential ``eta = h dz`` on a simply connected chart."""

    G: Expr
    h: Expr
    label: str = ""

    @classmethod
    def from_text(cls, gauss, eta, label=""):
        return cls(parse(gauss), parse(eta), label)

    @property
    def gauss_text(self):
        return to_text(self.G)

    @property
    def eta_text(self):
        return to_text(self.h)

    def expand(self, p, order):
        return expand(self.G, p, order), expand(self.h, p, order)


def compatibility_defects(W, points, order=8):
    """Points where zeros of eta fail to match zeros/poles of G in order.

    An empty list means the data pass the spot check.
    """
    bad = []
    for p in points:
        G, h = W.expand(p, order)
        want = abs(G.valuation)
        if h.valuation != want:
            bad.append(complex(p))
    return bad


@dataclass(frozen=True)
class Differential:
    """The degree-``ell`` differential ``s dz^ell``."""

    ell: int
    s: LaurentSeries

    def __post_init__(self):
        if self.ell < 1:
            raise ValueError("differential degree must be >= 1")

    @property
    def valuation(self):
        return self.s.valuation

    def is_zero(self):
        return self.s.is_zero()

    def truncate(self, order):
        return Differential(self.ell, self.s.truncate(order))

    def __mul__(self, other):
        if isinstance(other, Differential):
            return Differential(self.ell + other.ell, self.s * other.s)
        return Differential(self.ell, self.s * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if other.ell != self.ell:
            raise ValueError("cannot add differentials of different degree")
        return Differential(self.ell, self.s + other.s)

    def __sub__(self, other):
        if other.ell != self.ell:
            raise ValueError("cannot subtract differentials of different degree")
        return Differential(self.ell, self.s - other.s)

    def pullback(self, chart):
        """Re-express in a coordinate w, given ``z - p = chart(w)`` as a series in w."""
        dz = chart.derivative()
        return Differential(self.ell, self.s.compose(chart) * dz ** self.ell)

    def residue(self):
        return residue(self)


@dataclass(frozen=True)
class ConnectionChart:
    """Coefficient ``gamma`` with nabla_{d/dz} d/dz = gamma d/dz."""

    gamma: LaurentSeries


def hopf_series(G, h):
    """q with Q = q dz^2 = -(1/G) dG * eta."""
    return -(G.derivative() / G) * h


def _check_eta(h, p):
    if h.tight().valuation < 0:
        raise PoleError(f"eta has a pole at {complex(p)}; the height differential must be holomorphic")


def hopf(W, p, order=DEFAULT_ORDER):
    extra = 4
    while True:
        G, h = W.expand(p, order + extra)
        _check_eta(h, p)
        q = hopf_series(G, h)
        if q.order >= order or q.is_zero() or extra > 256:
            return Differential(2, q.truncate(order))
        extra *= 2


def connection(q):
    if q.is_zero():
        raise ZeroHopfError("Hopf differential vanishes identically (flat immersion)")
    return ConnectionChart(q.derivative() / (2 * q))


def _check_injective(d1):
    if d1.is_zero():
        raise CriticalPointError("derivative vanishes identically")
    if d1.valuation > 0 or d1.valuation < -2:
        raise CriticalPointError(
            f"map is not locally injective at the base point (f' has valuation {d1.valuation})")


def schwarzian(f, allow_critical=False):
    """Classical Schwarzian {f, z} = f'''/f' - (3/2)(f''/f')^2."""
    d1 = f.derivative()
    if allow_critical:
        if d1.is_zero():
            raise CriticalPointError("derivative vanishes identically")
    else:
        _check_injective(d1)
    d2 = d1.derivative()
    ratio = d2 / d1
    return d2.derivative() / d1 - 1.5 * ratio * ratio


def entropy_p2(G, q):
    """P_2 = ({G,z} + (5/8)(q'/q)^2 - (1/2) q''/q) dz^2."""
    if q.is_zero():
        raise ZeroHopfError("Hopf differential vanishes identically (flat immersion)")
    dq = q.derivative()
    lq = dq / q
    s = schwarzian(G, allow_critical=True) + 0.625 * lq * lq - 0.5 * (dq.derivative() / q)
    return Differential(2, s)


def entropy_next(P, c):
    """Apply the (1,0)-part of the connection: (s' - l gamma s) dz^(l+1)."""
    if P.ell < 2:
        raise ValueError("entropy_next expects a differential of degree >= 2")
    return Differential(P.ell + 1, P.s.derivative() - P.ell * (c.gamma * P.s))


def entropy_from_series(G, h, ell_max):
    """[P_2, ..., P_ell_max] from series of the Weierstrass data at a common base point."""
    if ell_max < 2:
        raise ValueError("ell_max must be >= 2")
    q = hopf_series(G, h)
    c = connection(q)
    out = [entropy_p2(G, q)]
    while out[-1].ell < ell_max:
        out.append(entropy_next(out[-1], c))
    return out


def entropy_sequence(W, p, ell_max, order=DEFAULT_ORDER):
    """Entropy differentials P_2..P_ell_max of ``W`` expanded at ``p``.

    Works at regular points and directly at umbilics, where P_l has a pole of
    order l.  Each returned series carries ``order`` coefficients unless it is
    declared zero.
    """
    extra = ell_max + 4
    while True:
        G, h = W.expand(p, order + extra)
        _check_eta(h, p)
        seq = entropy_from_series(G, h, ell_max)
        if all(P.s.order >= order or P.is_zero() for P in seq):
            return [P.truncate(order) for P in seq]
        if extra > 512:
            raise SeriesError(f"could not resolve {order} coefficients of the entropy sequence")
        extra *= 2


def residue(P):
    """Coefficient of (z-p)^(-ell) of ``P = s dz^ell``."""
    s = P.s
    if s.is_zero() and s.prec > -P.ell:
        return 0j
    if s.valuation < -P.ell:
        raise SeriesError(
            f"pole of order {-s.valuation} exceeds the degree {P.ell} of the differential")
    return s.coeff(-P.ell)


def residue_formula(ell, n):
    """Residue of P_ell at an umbilic where the Hopf differential vanishes to order n."""
    return (-0.5) ** (ell + 1) * factorial(ell - 1) * (n + 2) ** (ell - 2) * (3 * n * n + 4 * n)


def umbilic_order(q):
    """Vanishing order of the Hopf coefficient at the base point (0 if not an umbilic)."""
    if q.is_zero():
        raise ZeroHopfError("Hopf differential vanishes identically")
    return max(q.tight().valuation, 0)


def schwarzian_seq(f, ell_max, gamma=None):
    """S_2, ..., S_ell_max of ``f`` for the Weyl connection with coefficient ``gamma``.

    ``gamma=None`` means the flat chart gamma = 0.  These operators are
    invariant under post-composition of ``f`` with a Moebius map.
    """
    s = schwarzian(f)
    if gamma is not None:
        s = s + 0.5 * gamma * gamma - gamma.derivative()
    out = [s]
    for ell in range(2, ell_max):
        nxt = out[-1].derivative()
        if gamma is not None:
            nxt = nxt - ell * (gamma * out[-1])
        out.append(nxt)
    return out


def moebius_schwarzian_seq(f, ell_max):
    """S^H_2, ..., S^H_ell_max of ``f`` in a chart adapted to a flat Moebius structure.

    S^H_(l+1) = s_l' - l s_l f''/f'.  From l = 3 on these are *not* invariant
    under post-composition with Moebius maps.
    """
    d1 = f.derivative()
    _check_injective(d1)
    ratio = d1.derivative() / d1
    out = [schwarzian(f)]
    for ell in range(2, ell_max):
        s = out[-1]
        out.append(s.derivative() - ell * (s * ratio))
    return out

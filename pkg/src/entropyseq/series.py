"""Truncated Laurent series with complex coefficients.

A :class:`LaurentSeries` stores the coefficients of

    c_0 (z-p)^v + c_1 (z-p)^(v+1) + ... + c_(N-1) (z-p)^(v+N-1) + O((z-p)^(v+N))

where ``p`` is the base point, ``v`` the valuation and ``N`` the order (number
of stored coefficients).  The exponent ``v + N`` is the *precision*: every
operation propagates it honestly, so products and quotients of series with
poles report how many coefficients are actually known.

Values are immutable.  Arithmetic with plain Python/numpy numbers treats the
number as exact.
"""

import cmath
import math
from numbers import Number

import numpy as np

from .errors import SeriesError

DEFAULT_ORDER = 24
ZERO_TOL = 1e-10
RESIDUE_TOL = 1e-12


def principal_sqrt(c):
    """Square root with non-negative real part; +i side on the negative real axis."""
    c = complex(c)
    return cmath.sqrt(complex(c.real, c.imag + 0.0))


def _sq_conv(x, y, n):
    """First n terms of the convolution of |x|^2 and |y|^2.

    Error magnitudes are combined in quadrature: rounding errors of the
    individual terms are treated as independent.
    """
    return np.convolve(np.abs(x) ** 2, np.abs(y) ** 2)[:n]


class LaurentSeries:
    """Truncated Laurent series.

    Besides the coefficients, each series carries ``mags``: for every stored
    coefficient, the magnitude scale of the inputs it was computed from,
    propagated to first order with independent contributions added in
    quadrature.  Rounding noise in a coefficient is a small multiple of
    machine epsilon times its ``mags`` entry, which is what the declared-zero
    test compares against.  Exact input data have ``mags == abs(coeffs)``.
    """

    __slots__ = ("base_point", "valuation", "coeffs", "mags")

    def __init__(self, coeffs, valuation=0, base_point=0j, mags=None):
        c = np.array(coeffs, dtype=complex).ravel()
        m = np.abs(c) if mags is None else np.maximum(np.asarray(mags, dtype=float).ravel(), np.abs(c))
        nz = np.flatnonzero(c)
        if nz.size == 0:
            valuation = int(valuation) + c.size
            c, m = c[:0], m[:0]
        elif nz[0] > 0:
            valuation = int(valuation) + int(nz[0])
            c, m = c[nz[0]:], m[nz[0]:]
        c.setflags(write=False)
        m.setflags(write=False)
        self.coeffs = c
        self.mags = m
        self.valuation = int(valuation)
        self.base_point = complex(base_point)

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, prec, base_point=0j):
        return cls([], prec, base_point)

    @classmethod
    def constant(cls, c, order=DEFAULT_ORDER, base_point=0j):
        coeffs = np.zeros(order, dtype=complex)
        if order:
            coeffs[0] = c
        return cls(coeffs, 0, base_point)

    @classmethod
    def variable(cls, base_point=0j, order=DEFAULT_ORDER):
        """The coordinate function z itself, i.e. ``p + (z - p)``."""
        coeffs = np.zeros(order, dtype=complex)
        coeffs[0] = base_point
        if order > 1:
            coeffs[1] = 1.0
        return cls(coeffs, 0, base_point)

    @classmethod
    def from_polynomial(cls, coeffs, order, base_point=0j):
        """Exact polynomial in (z - p), padded with zeros to ``order`` terms."""
        padded = np.zeros(max(order, len(coeffs)), dtype=complex)
        padded[: len(coeffs)] = coeffs
        return cls(padded[:order], 0, base_point)

    # -- basic properties ---------------------------------------------------

    @property
    def order(self):
        return self.coeffs.size

    @property
    def prec(self):
        return self.valuation + self.coeffs.size

    @property
    def scale(self):
        """Largest magnitude encountered in computing any stored coefficient."""
        return float(self.mags.max()) if self.mags.size else 0.0

    def coeff(self, k):
        """Coefficient of (z - p)^k."""
        if k >= self.prec:
            raise SeriesError(f"coefficient {k} lies beyond precision {self.prec}")
        if k < self.valuation:
            return 0j
        return complex(self.coeffs[k - self.valuation])

    def _padded(self, arr, lo, hi, dtype):
        out = np.zeros(max(hi - lo, 0), dtype=dtype)
        start = max(lo, self.valuation)
        stop = min(hi, self.prec)
        if stop > start:
            out[start - lo: stop - lo] = arr[start - self.valuation: stop - self.valuation]
        return out

    def padded(self, lo, hi):
        """Coefficients of exponents lo..hi-1, zero-filled below the valuation and
        beyond the precision."""
        return self._padded(self.coeffs, lo, hi, complex)

    def padded_mags(self, lo, hi):
        return self._padded(self.mags, lo, hi, float)

    def noise_mask(self, tol=ZERO_TOL):
        """True where a coefficient is indistinguishable from rounding noise."""
        return np.abs(self.coeffs) <= tol * self.mags

    def is_zero(self, tol=ZERO_TOL):
        """Declared-zero test: every coefficient is noise relative to its magnitude."""
        return bool(np.all(self.noise_mask(tol)))

    def tight(self, tol=ZERO_TOL):
        """Drop leading coefficients that are rounding noise (precision is kept)."""
        mask = self.noise_mask(tol)
        if not mask.size or not mask[0]:
            return self
        k = int(np.argmin(mask)) if not mask.all() else mask.size
        return LaurentSeries(self.coeffs[k:], self.valuation + k, self.base_point, self.mags[k:])

    def max_abs(self):
        return float(np.max(np.abs(self.coeffs))) if self.order else 0.0

    def truncate(self, order):
        return LaurentSeries(self.coeffs[:order], self.valuation, self.base_point, self.mags[:order])

    def with_base_point(self, base_point):
        return LaurentSeries(self.coeffs, self.valuation, base_point, self.mags)

    def evaluate(self, dz):
        """Evaluate the stored terms at displacement ``dz = z - p`` (scalar or array)."""
        dz = np.asarray(dz, dtype=complex)
        if self.order == 0:
            out = np.zeros_like(dz)
        else:
            out = np.polyval(self.coeffs[::-1], dz)
            if self.valuation:
                out = out * dz ** self.valuation
        return complex(out) if out.ndim == 0 else out

    def allclose(self, other, rtol=1e-10):
        lo = min(self.valuation, other.valuation)
        hi = min(self.prec, other.prec)
        a = self.padded(lo, hi)
        b = other.padded(lo, hi)
        ref = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0), 1e-300)
        return bool(np.max(np.abs(a - b), initial=0.0) <= rtol * ref)

    # -- ring operations ----------------------------------------------------

    def _check_base(self, other):
        if self.base_point != other.base_point:
            raise SeriesError(
                f"base point mismatch: {self.base_point} vs {other.base_point}")

    def _exact_constant(self, c):
        return LaurentSeries.constant(c, max(self.prec, 0), self.base_point)

    def _add(self, other, sign):
        if isinstance(other, Number):
            if self.prec <= 0 or other == 0:
                return self
            other = self._exact_constant(other)
        self._check_base(other)
        lo = min(self.valuation, other.valuation)
        hi = min(self.prec, other.prec)
        if hi <= lo:
            return LaurentSeries([], hi, self.base_point)
        c = self.padded(lo, hi) + sign * other.padded(lo, hi)
        m = np.hypot(self.padded_mags(lo, hi), other.padded_mags(lo, hi))
        return LaurentSeries(c, lo, self.base_point, m)

    def __add__(self, other):
        return self._add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._add(other, -1)

    def __rsub__(self, other):
        return (-self)._add(other, 1)

    def __neg__(self):
        return LaurentSeries(-self.coeffs, self.valuation, self.base_point, self.mags)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Number):
            if other == 0:
                return LaurentSeries([], self.prec, self.base_point)
            return LaurentSeries(self.coeffs * other, self.valuation, self.base_point,
                                 self.mags * abs(other))
        self._check_base(other)
        n = min(self.order, other.order)
        v = self.valuation + other.valuation
        if n == 0:
            return LaurentSeries([], v, self.base_point)
        a, b = self.coeffs[:n], other.coeffs[:n]
        c = np.convolve(a, b)[:n]
        # linearized, independent errors: delta(ab) = a delta(b) + b delta(a)
        m = np.sqrt(_sq_conv(self.mags[:n], b, n) + _sq_conv(a, other.mags[:n], n))
        return LaurentSeries(c, v, self.base_point, m)

    __rmul__ = __mul__

    def inverse(self):
        t = self.tight()
        if t.order == 0:
            raise SeriesError("division by declared-zero series")
        b, mb = t.coeffs, t.mags
        n = b.size
        d = np.empty(n, dtype=complex)
        md = np.empty(n)
        d[0] = 1.0 / b[0]
        for k in range(1, n):
            d[k] = -np.dot(b[1:k + 1], d[k - 1::-1]) / b[0]
        # linearized: delta(1/b) = -delta(b) / b^2
        md = np.sqrt(_sq_conv(np.convolve(d, d)[:n], mb, n))
        return LaurentSeries(d, -t.valuation, self.base_point, md)

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise SeriesError("division by zero scalar")
            return self * (1.0 / other)
        self._check_base(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers of series are supported")
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.constant(1.0, self.order, self.base_point)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus -----------------------------------------------------------

    def derivative(self):
        k = np.arange(self.valuation, self.prec)
        return LaurentSeries(self.coeffs * k, self.valuation - 1, self.base_point,
                             self.mags * np.abs(k))

    def antiderivative(self, tol=RESIDUE_TOL):
        """Term-wise antiderivative vanishing at the base point (for valuation >= 0)."""
        if self.prec <= -1:
            raise SeriesError("coefficient of (z-p)^-1 lies beyond precision")
        k = np.arange(self.valuation, self.prec)
        c = np.array(self.coeffs)
        m = np.array(self.mags)
        if self.valuation <= -1:
            r = c[-1 - self.valuation]
            if abs(r) > tol * max(self.scale, 1.0):
                raise SeriesError(f"nonzero residue {r} blocks antiderivative")
            c[-1 - self.valuation] = 0.0
            m[-1 - self.valuation] = 0.0
            k = np.where(k == -1, 1, k)
        return LaurentSeries(c / (k + 1), self.valuation + 1, self.base_point,
                             m / np.abs(k + 1))

    def log_derivative(self):
        return self.derivative() / self

    def sqrt(self):
        """Square root, anchored at the principal root of the leading coefficient."""
        t = self.tight()
        if t.order == 0:
            raise SeriesError("sqrt of declared-zero series")
        if t.valuation % 2:
            raise SeriesError("sqrt of a series with odd valuation")
        b, mb = t.coeffs, t.mags
        n = b.size
        s = np.empty(n, dtype=complex)
        r = np.empty(n, dtype=complex)
        s[0] = principal_sqrt(b[0])
        r[0] = 1.0 / s[0]
        for k in range(1, n):
            acc = np.dot(s[1:k], s[k - 1:0:-1]) if k > 1 else 0.0
            s[k] = (b[k] - acc) / (2.0 * s[0])
            r[k] = -np.dot(s[1:k + 1], r[k - 1::-1]) / s[0]
        # linearized: delta(sqrt b) = delta(b) / (2 sqrt b)
        ms = 0.5 * np.sqrt(_sq_conv(r, mb, n))
        return LaurentSeries(s, t.valuation // 2, self.base_point, ms)

    def exp(self):
        if self.valuation < 0:
            raise SeriesError("exp of a series with a pole (essential singularity)")
        n = self.prec
        if n <= 0:
            raise SeriesError("exp of a series with no known coefficients")
        a = self.padded(0, n)
        ja = np.arange(n) * a
        e = np.empty(n, dtype=complex)
        e[0] = cmath.exp(a[0])
        for k in range(1, n):
            e[k] = np.dot(ja[1:k + 1], e[k - 1::-1]) / k
        # linearized: delta(exp a) = exp(a) delta(a)
        me = np.sqrt(_sq_conv(e, self.padded_mags(0, n), n))
        return LaurentSeries(e, 0, self.base_point, me)

    # -- composition --------------------------------------------------------

    def compose(self, inner):
        """``self(inner)``; ``inner`` holds the displacement from this series' base point.

        The result is expanded at ``inner.base_point``.
        """
        m = inner.valuation
        if inner.order == 0 or m < 1:
            raise SeriesError("compose needs an inner series of valuation >= 1")
        if self.valuation < 0:
            raise SeriesError("compose needs an outer series of valuation >= 0")
        d = self.derivative()
        vd = max(d.valuation, 0)
        prec = min(m * self.prec, inner.prec + m * vd)
        if prec <= 0:
            return LaurentSeries([], prec, inner.base_point)
        kmax = min(self.prec - 1, (prec - 1) // m)
        o = self.padded(0, kmax + 1)
        om = self.padded_mags(0, kmax + 1)
        t = inner.padded(0, prec)
        tm = inner.padded_mags(0, prec)
        res = np.zeros(prec, dtype=complex)
        rm = np.zeros(prec)
        res[0] = o[kmax]
        rm[0] = om[kmax]
        for k in range(kmax - 1, -1, -1):
            res = np.convolve(res, t)[:prec]
            rm = np.convolve(rm, tm)[:prec]
            res[0] += o[k]
            rm[0] += om[k]
        return LaurentSeries(res, 0, inner.base_point, rm)

    def __call__(self, inner):
        return self.compose(inner)

    def revert(self):
        """Compositional inverse; the result is a series in w about 0."""
        if self.valuation != 1 or self.order == 0:
            raise SeriesError("revert needs valuation exactly 1")
        n = self.order
        a = self.with_base_point(0j)
        ident = LaurentSeries(np.eye(1, n)[0], 1)
        b = ident * (1.0 / a.coeffs[0])
        da = a.derivative()
        for _ in range(math.ceil(math.log2(n + 1)) + 2):
            b = b - (a.compose(b) - ident) / da.compose(b)
        return LaurentSeries(b.coeffs[:n], 1, 0j, b.mags[:n])

    # -- display ------------------------------------------------------------

    def __repr__(self):
        return (f"LaurentSeries(valuation={self.valuation}, order={self.order}, "
                f"base_point={self.base_point!r})")

    def __str__(self):
        p = self.base_point
        var = "z" if p == 0 else f"(z-({p:g}))"
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            k = self.valuation + j
            terms.append(f"({c.real:.6g}{c.imag:+.6g}i)·{var}^{k}")
        terms.append(f"O({var}^{self.prec})")
        return " + ".join(terms)


def estimate_radius(s, cap=math.inf, skip_noise=False):
    """Cauchy-Hadamard estimate of the radius of convergence from the tail of ``s``.

    Fits log|c_k| against k over the nonzero upper half of the coefficients.
    With ``skip_noise`` coefficients within 1e3 rounding units of their
    magnitude scale are left out, so growth caused by cancellation is not
    mistaken for a singularity.  Returns ``cap`` when no geometric growth or
    decay can be fitted.
    """
    c = np.abs(s.coeffs)
    n = c.size
    if n < 6:
        return cap
    k = np.arange(n) + s.valuation
    big = c.max()
    keep = c > 1e-14 * big
    end = n
    if skip_noise:
        # fit the upper half of the leading stretch that stands above rounding noise
        noisy = np.flatnonzero(c < 1e3 * np.finfo(float).eps * s.mags)
        if noisy.size:
            end = int(noisy[0])
    mask = keep.copy()
    mask[:end // 2] = False
    mask[end:] = False
    if mask.sum() < 3:
        return cap
    slope = np.polyfit(k[mask], np.log(c[mask]), 1)[0]
    if slope < -5.0:
        return cap
    return min(math.exp(-slope), cap)

"""Closed-form meromorphic expressions in one complex variable ``z``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' signed-int)?
    atom   := number | 'i' | 'z' | '(' expr ')' | ('exp' | 'sqrt') '(' expr ')'

Numbers are decimal literals, optionally suffixed with ``i`` (``0.5i``).
Unary minus binds looser than ``^``, so ``-z^2`` means ``-(z^2)``.

``sqrt`` is anchored at the evaluation or expansion point: the root with
non-negative real part is taken there and series arithmetic continues that
branch analytically.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import BranchPointError, ExpansionError, ParseError, PoleError, SeriesError
from .series import LaurentSeries


class Expr:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sum(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Difference(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Product(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Quotient(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


Z = Var()
ONE = Const(1 + 0j)
ZERO = Const(0j)


# -- smart constructors (light constant folding) -----------------------------

def const(c):
    return Const(complex(c))


def _is_const(e, value=None):
    return isinstance(e, Const) and (value is None or e.value == value)


def add(a, b):
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    return Sum(a, b)


def sub(a, b):
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    return Difference(a, b)


def neg(a):
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def mul(a, b):
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    return Product(a, b)


def div(a, b):
    if _is_const(b, 1):
        return a
    if _is_const(a, 0):
        return ZERO
    return Quotient(a, b)


def power(base, n):
    n = int(n)
    if n == 0:
        return ONE
    if n == 1:
        return base
    return Power(base, n)


# -- parsing ------------------------------------------------------------------

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_FUNCS = {"exp": Exp, "sqrt": Sqrt}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        tokens = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit() or (ch == "." and i + 1 < len(text) and text[i + 1].isdigit()):
                m = _NUMBER.match(text, i)
                end = m.end()
                value = complex(float(m.group(0)))
                if end < len(text) and (text[end].isalpha() or text[end] == "_"):
                    tail = _IDENT.match(text, end).group(0)
                    if tail != "i":
                        raise ParseError(f"malformed complex literal {text[i:end + len(tail)]!r}",
                                         i, text)
                    value = complex(0.0, value.real)
                    end += 1
                if end < len(text) and (text[end] == "." or text[end].isdigit()):
                    raise ParseError("malformed complex literal", i, text)
                tokens.append(("num", value, i))
                i = end
                continue
            if ch.isalpha() or ch == "_":
                name = _IDENT.match(text, i).group(0)
                if name == "z":
                    tokens.append(("z", None, i))
                elif name == "i":
                    tokens.append(("num", 1j, i))
                elif name in _FUNCS:
                    tokens.append(("func", name, i))
                else:
                    raise ParseError(f"unknown identifier {name!r}", i, text)
                i += len(name)
                continue
            if ch in "+-*/^()":
                tokens.append((ch, None, i))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", i, text)
        tokens.append(("end", None, len(text)))
        return tokens

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.pos += 1
        return tok

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[0]!r}", tok[2], self.text)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            e = Sum(e, rhs) if op == "+" else Difference(e, rhs)
        return e

    def term(self):
        e = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            rhs = self.factor()
            e = Product(e, rhs) if op == "*" else Quotient(e, rhs)
        return e

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return Neg(self.factor())
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] in ("-", "+"):
                sign = -1 if self.take()[0] == "-" else 1
            tok = self.peek()
            if tok[0] != "num":
                what = "end of input" if tok[0] == "end" else repr(tok[0])
                raise ParseError(f"expected an integer exponent, found {what}", tok[2], self.text)
            self.take()
            n = tok[1]
            if n.imag != 0 or n.real != int(n.real):
                raise ParseError("exponent must be an integer", tok[2], self.text)
            n = sign * int(n.real)
            return ONE if n == 0 else Power(base, n)
        return base

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "num":
            return Const(tok[1])
        if kind == "z":
            return Z
        if kind == "(":
            e = self.expr()
            self.take(")")
            return e
        if kind == "func":
            self.take("(")
            e = self.expr()
            self.take(")")
            return _FUNCS[tok[1]](e)
        what = "end of input" if kind == "end" else repr(kind)
        raise ParseError(f"unexpected {what}", tok[2], self.text)


def parse(text):
    """Parse expression text into an :class:`Expr` tree."""
    return _Parser(text).parse()


# -- printing -----------------------------------------------------------------

_PREC = {Sum: 1, Difference: 1, Product: 2, Quotient: 2, Neg: 3, Power: 4}


def _fmt_real(x):
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _fmt_const(c):
    c = complex(c)
    re_, im = c.real, c.imag
    if im == 0 and re_ >= 0 and not np.signbit(re_):
        return _fmt_real(re_)
    if re_ == 0 and im > 0:
        return "i" if im == 1 else _fmt_real(im) + "i"
    if im == 0:
        return f"(-{_fmt_real(-re_)})"
    if re_ == 0:
        return f"(-{_fmt_real(-im)}i)"
    sign = "+" if im >= 0 else "-"
    return f"({_fmt_real(re_)}{sign}{_fmt_real(abs(im))}i)"


def to_text(e):
    """Render an expression so that ``parse(to_text(e)) == e`` for parsed trees."""
    if isinstance(e, Const):
        return _fmt_const(e.value)
    if isinstance(e, Var):
        return "z"
    if isinstance(e, (Exp, Sqrt)):
        name = "exp" if isinstance(e, Exp) else "sqrt"
        return f"{name}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.arg)
        if _PREC.get(type(e.arg), 5) < 3:
            inner = f"({inner})"
        return "-" + inner
    if isinstance(e, Power):
        inner = to_text(e.base)
        if not isinstance(e.base, (Const, Var, Exp, Sqrt)):
            inner = f"({inner})"
        return f"{inner}^{e.exponent}"
    p = _PREC[type(e)]
    op = {Sum: "+", Difference: "-", Product: "*", Quotient: "/"}[type(e)]
    left = to_text(e.left)
    if _PREC.get(type(e.left), 5) < p:
        left = f"({left})"
    right = to_text(e.right)
    if _PREC.get(type(e.right), 5) <= p or (isinstance(e.right, Neg) and p == 1):
        right = f"({right})"
    sep = " " if p == 1 else ""
    return f"{left}{sep}{op}{sep}{right}"


# -- differentiation ----------------------------------------------------------

def differentiate(e):
    """d/dz by structural rules."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return neg(differentiate(e.arg))
    if isinstance(e, Sum):
        return add(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Difference):
        return sub(differentiate(e.left), differentiate(e.right))
    if isinstance(e, Product):
        return add(mul(differentiate(e.left), e.right), mul(e.left, differentiate(e.right)))
    if isinstance(e, Quotient):
        num = sub(mul(differentiate(e.left), e.right), mul(e.left, differentiate(e.right)))
        return div(num, power(e.right, 2))
    if isinstance(e, Power):
        n = e.exponent
        return mul(mul(const(n), power(e.base, n - 1)), differentiate(e.base))
    if isinstance(e, Exp):
        return mul(e, differentiate(e.arg))
    if isinstance(e, Sqrt):
        return div(differentiate(e.arg), mul(const(2), e))
    raise TypeError(f"not an expression: {e!r}")


# -- evaluation ---------------------------------------------------------------

def evaluate(e, z0):
    """Evaluate at a point or a numpy array of points.

    Raises :class:`PoleError` on division by an exact zero and
    :class:`BranchPointError` where a sqrt argument vanishes.
    """
    z = np.asarray(z0, dtype=complex)
    with np.errstate(all="ignore"):
        v = _eval(e, z)
    if z.ndim == 0:
        return complex(v)
    return np.broadcast_to(v, z.shape).astype(complex)


def _eval(e, z):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return z
    if isinstance(e, Neg):
        return -_eval(e.arg, z)
    if isinstance(e, Sum):
        return _eval(e.left, z) + _eval(e.right, z)
    if isinstance(e, Difference):
        return _eval(e.left, z) - _eval(e.right, z)
    if isinstance(e, Product):
        return _eval(e.left, z) * _eval(e.right, z)
    if isinstance(e, Quotient):
        den = _eval(e.right, z)
        if np.any(np.asarray(den) == 0):
            raise PoleError(f"pole of {to_text(e)}")
        return _eval(e.left, z) / den
    if isinstance(e, Power):
        b = _eval(e.base, z)
        if e.exponent < 0:
            if np.any(np.asarray(b) == 0):
                raise PoleError(f"pole of {to_text(e)}")
            return 1.0 / np.power(b, -e.exponent)
        return np.power(b, e.exponent)
    if isinstance(e, Exp):
        return np.exp(_eval(e.arg, z))
    if isinstance(e, Sqrt):
        a = _eval(e.arg, z)
        if np.any(np.asarray(a) == 0):
            raise BranchPointError(f"branch point of {to_text(e)}")
        a = np.asarray(a, dtype=complex)
        return np.sqrt(a.real + 1j * (a.imag + 0.0))
    raise TypeError(f"not an expression: {e!r}")


# -- series expansion ---------------------------------------------------------

def expand(e, p, order):
    """Laurent expansion of ``e`` at ``p`` with ``order`` known coefficients."""
    if order < 1:
        raise ValueError("order must be >= 1")
    p = complex(p)
    margin = 4
    while margin <= 512:
        s = _expand(e, p, order + margin)
        if s.order >= order or s.is_zero():
            return s.truncate(order)
        margin *= 2
    raise ExpansionError(f"could not reach {order} coefficients for {to_text(e)} at {p}")


def _expand(e, p, n):
    if isinstance(e, Const):
        return LaurentSeries.constant(e.value, n, p)
    if isinstance(e, Var):
        return LaurentSeries.variable(p, n)
    if isinstance(e, Neg):
        return -_expand(e.arg, p, n)
    if isinstance(e, Sum):
        return _expand(e.left, p, n) + _expand(e.right, p, n)
    if isinstance(e, Difference):
        return _expand(e.left, p, n) - _expand(e.right, p, n)
    if isinstance(e, Product):
        return _expand(e.left, p, n) * _expand(e.right, p, n)
    try:
        if isinstance(e, Quotient):
            return _expand(e.left, p, n) / _expand(e.right, p, n)
        if isinstance(e, Power):
            return _expand(e.base, p, n) ** e.exponent
    except SeriesError as exc:
        raise PoleError(f"{to_text(e)} has no Laurent expansion at {p}: {exc}") from exc
    if isinstance(e, Exp):
        a = _expand(e.arg, p, n)
        if a.valuation < 0:
            raise ExpansionError(f"essential singularity of {to_text(e)} at {p}")
        return a.exp()
    if isinstance(e, Sqrt):
        a = _expand(e.arg, p, n)
        if a.valuation != 0:
            raise BranchPointError(f"sqrt argument of {to_text(e)} vanishes or has a pole at {p}")
        root = a.sqrt()
        return LaurentSeries(root.coeffs, root.valuation, p, root.mags)
    raise TypeError(f"not an expression: {e!r}")


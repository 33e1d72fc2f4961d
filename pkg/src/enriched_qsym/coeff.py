"""Exact arithmetic in Z[q] and in the rational function field Q(q).

``IntPoly`` is a dense univariate polynomial with Python-int coefficients
(index = power of q).  ``RatFunc`` is a quotient of two ``IntPoly`` values
kept in a canonical form, so that field equality is structural equality:

* numerator and denominator have no common factor of positive degree,
* the integer contents of numerator and denominator are coprime,
* the leading coefficient of the denominator is positive,
* zero is ``0/1``.

Exact rationals (evaluation points) are plain :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Union

__all__ = [
    "IntPoly",
    "RatFunc",
    "Q",
    "ONE",
    "ZERO",
    "as_ratfunc",
    "eval_at",
    "subst_qinv",
    "q_number",
    "q_factorial",
    "parse_ratfunc",
    "parse_rational",
    "ParseError",
]

Scalar = Union[int, Fraction, "IntPoly", "RatFunc"]


class ParseError(ValueError):
    """Raised on malformed text input; ``pos`` is the offending offset."""

    def __init__(self, message: str, pos: int = 0):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def _trim(coeffs: Iterable[int]) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Polynomial in q with integer coefficients, immutable."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[int] = ()):
        self.c = _trim(int(x) for x in coeffs)

    @classmethod
    def _raw(cls, c: tuple) -> "IntPoly":
        p = object.__new__(cls)
        p.c = c
        return p

    @classmethod
    def const(cls, a: int) -> "IntPoly":
        return cls._raw((a,) if a else ())

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.c == other.c
        if isinstance(other, int):
            return self.c == IntPoly.const(other).c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("IntPoly", self.c))

    def __repr__(self) -> str:
        return f"IntPoly({list(self.c)})"

    def __str__(self) -> str:
        return _render_poly(self.c)

    # -- ring operations -----------------------------------------------
    @staticmethod
    def _coerce(other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return IntPoly._raw(_trim(out))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly._raw(tuple(-x for x in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return IntPoly._raw(())
            return IntPoly._raw(tuple(x * other for x in self.c))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return IntPoly._raw(_poly_mul(self.c, other.c))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent for IntPoly")
        result = IntPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale_div(self, d: int) -> "IntPoly":
        """Divide every coefficient by the integer ``d`` (must be exact)."""
        out = []
        for x in self.c:
            qt, r = divmod(x, d)
            if r:
                raise ArithmeticError("inexact integer division of polynomial")
            out.append(qt)
        return IntPoly._raw(tuple(out))

    def divmod_exact(self, other: "IntPoly") -> "IntPoly":
        """Quotient of an exact division in Z[q]; raises if not exact."""
        if other.is_zero():
            raise ZeroDivisionError("zero denominator")
        if self.is_zero():
            return self
        if len(other.c) == 1:
            return self.scale_div(other.c[0])
        rem = list(self.c)
        db = other.degree
        lcb = other.c[-1]
        bc = other.c
        quot = [0] * (len(rem) - db) if len(rem) > db else []
        for k in range(len(rem) - 1 - db, -1, -1):
            top = rem[k + db]
            if top == 0:
                continue
            qk, r = divmod(top, lcb)
            if r:
                raise ArithmeticError("inexact polynomial division")
            quot[k] = qk
            for i, b in enumerate(bc):
                rem[k + i] -= qk * b
        if any(rem):
            raise ArithmeticError("inexact polynomial division")
        return IntPoly(quot)

    def divides(self, other: "IntPoly") -> bool:
        """True if ``self`` divides ``other`` exactly in Z[q]."""
        try:
            other.divmod_exact(self)
        except ArithmeticError:
            return False
        return True

    def pseudo_rem(self, other: "IntPoly") -> "IntPoly":
        """Pseudo-remainder ``lc(other)^(deg self - deg other + 1) * self mod other``."""
        rem = list(self.c)
        db = other.degree
        lcb = other.c[-1]
        bc = other.c
        while len(rem) - 1 >= db and rem:
            shift = len(rem) - 1 - db
            top = rem[-1]
            rem = [x * lcb for x in rem]
            for i, b in enumerate(bc):
                rem[shift + i] -= top * b
            rem = list(_trim(rem))
        return IntPoly._raw(tuple(rem))

    def content(self) -> int:
        g = 0
        for x in self.c:
            g = gcd(g, x)
            if g == 1:
                break
        return g

    def primitive(self) -> "IntPoly":
        """Primitive part, normalized to a positive leading coefficient."""
        if self.is_zero():
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return self if g == 1 else self.scale_div(g)

    def gcd(self, other: "IntPoly") -> "IntPoly":
        """Greatest common divisor in Z[q], with positive leading coefficient."""
        if self.is_zero():
            return other.primitive() * abs(other.content()) if other else other
        if other.is_zero():
            return self.primitive() * abs(self.content())
        cg = gcd(self.content(), other.content())
        a, b = self.primitive(), other.primitive()
        if a.degree < b.degree:
            a, b = b, a
        while b.degree > 0:
            r = a.pseudo_rem(b)
            a, b = b, r.primitive()
            if b.is_zero():
                break
        if b.is_zero():
            g = a
        else:
            g = IntPoly.const(1)
        return g.primitive() * cg

    # -- substitutions / evaluation -------------------------------------
    def __call__(self, x):
        """Horner evaluation at an int / Fraction (or any ring element)."""
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def neg_var(self) -> "IntPoly":
        """The polynomial p(-q)."""
        return IntPoly._raw(tuple(-x if i & 1 else x for i, x in enumerate(self.c)))

    def reversed(self, degree: int | None = None) -> "IntPoly":
        """``q^degree * p(1/q)``; ``degree`` defaults to ``self.degree``."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("degree smaller than polynomial degree")
        return IntPoly(tuple(reversed(self.c + (0,) * (d - self.degree))))

    def trailing_zeros(self) -> int:
        """Multiplicity of q as a factor."""
        k = 0
        while k < len(self.c) and self.c[k] == 0:
            k += 1
        return k


_KRONECKER_MIN = 24


def _poly_mul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1:
        x = a[0]
        return tuple(x * y for y in b)
    if len(b) == 1:
        y = b[0]
        return tuple(x * y for x in a)
    if min(len(a), len(b)) >= _KRONECKER_MIN:
        return _kronecker_mul(a, b)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pack(c: tuple, bits: int) -> int:
    acc = 0
    for x in reversed(c):
        acc = (acc << bits) + x
    return acc


def _kronecker_mul(a: tuple, b: tuple) -> tuple:
    # Pack both operands into big integers, multiply once, unpack with
    # signed digits.  Slot width leaves room for the largest convolution sum.
    bound = max(abs(x) for x in a) * max(abs(y) for y in b) * min(len(a), len(b))
    bits = bound.bit_length() + 2
    prod = _pack(a, bits) * _pack(b, bits)
    n = len(a) + len(b) - 1
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    out = []
    for _ in range(n):
        digit = prod & mask
        if digit >= half:
            digit -= 1 << bits
        out.append(digit)
        prod = (prod - digit) >> bits
    return _trim(out)


def _render_poly(c: tuple, var: str = "q") -> str:
    if not c:
        return "0"
    parts = []
    for k, a in enumerate(c):
        if a == 0:
            continue
        mag = abs(a)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        if not parts:
            parts.append(body if a > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if a > 0 else f"- {body}")
    return " ".join(parts)


class RatFunc:
    """Element of Q(q) in canonical form ``num/den``."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: IntPoly | int = 0, den: IntPoly | int = 1, *, normalize: bool = True):
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            q = as_ratfunc(num) / as_ratfunc(den)
            num, den, normalize = q.num, q.den, False
        if isinstance(num, int):
            num = IntPoly.const(num)
        if isinstance(den, int):
            den = IntPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> "RatFunc":
        x = Fraction(x)
        return cls(IntPoly.const(x.numerator), IntPoly.const(x.denominator), normalize=False)

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant rational function")
        return Fraction(self.num.lc, self.den.lc)

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, IntPoly)):
            return self == as_ratfunc(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num.c, self.den.c))
        return self._hash

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    # -- field operations ----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num + other.num, self.den, normalize=False)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, self.den, normalize=False)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("zero denominator")
        num, den = self.den, self.num
        if den.lc < 0:
            num, den = -num, -den
        return RatFunc(num, den, normalize=False)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, normalize=False)

    # -- evaluation / substitution --------------------------------------------
    def eval_at(self, x) -> Fraction:
        return eval_at(self, x)

    def subst_qinv(self) -> "RatFunc":
        return subst_qinv(self)

    def substitute(self, value: "RatFunc") -> "RatFunc":
        """Compose with another rational function: ``self(value)``."""
        return _horner(self.num, value) / _horner(self.den, value)


def _horner(p: IntPoly, x: RatFunc) -> RatFunc:
    acc = ZERO
    for a in reversed(p.c):
        acc = acc * x + a
    return acc


def _normalize(num: IntPoly, den: IntPoly) -> tuple:
    if num.is_zero():
        return IntPoly._raw(()), IntPoly.const(1)
    if den.degree > 0 and num.degree > 0:
        g = num.gcd(den)
        if g.degree > 0:
            num = num.divmod_exact(g)
            den = den.divmod_exact(g)
    c = gcd(num.content(), den.content())
    if den.lc < 0:
        c = -c
    if c != 1:
        num = num.scale_div(c)
        den = den.scale_div(c)
    return num, den


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, int):
        return RatFunc(IntPoly.const(x), _ONE_POLY, normalize=False)
    if isinstance(x, Fraction):
        return RatFunc.from_fraction(x)
    if isinstance(x, IntPoly):
        return RatFunc(x, _ONE_POLY, normalize=False)
    return NotImplemented


def as_ratfunc(x: Scalar) -> RatFunc:
    """Coerce an int, Fraction, IntPoly or RatFunc into a RatFunc."""
    r = _coerce(x)
    if r is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as an element of Q(q)")
    return r


_ONE_POLY = IntPoly.const(1)
ZERO = RatFunc(0)
ONE = RatFunc(1)
Q = RatFunc(IntPoly((0, 1)), normalize=False)


def eval_at(f: RatFunc | IntPoly, x) -> Fraction:
    """Exact value of ``f`` at the rational point ``x``."""
    x = Fraction(x)
    if isinstance(f, IntPoly):
        return Fraction(f(x))
    d = f.den(x)
    if d == 0:
        raise ZeroDivisionError(f"evaluation at pole q={x}")
    return Fraction(f.num(x)) / d


def subst_qinv(f: RatFunc) -> RatFunc:
    """The rational function ``f(1/q)``, renormalized."""
    f = as_ratfunc(f)
    if f.is_zero():
        return f
    dn, dd = f.num.degree, f.den.degree
    # f(1/q) = q^(dd-dn) * rev(num) / rev(den)
    num, den = f.num.reversed(), f.den.reversed()
    shift = dd - dn
    if shift > 0:
        num = num * IntPoly((0,) * shift + (1,))
    elif shift < 0:
        den = den * IntPoly((0,) * (-shift) + (1,))
    return RatFunc(num, den)


@lru_cache(maxsize=None)
def q_number(p: int, negate: bool = False) -> IntPoly:
    """``[p]_q = 1 + q + ... + q^(p-1)``, or ``[p]_{-q}`` when ``negate``."""
    if p < 1:
        raise ValueError("q-number needs p >= 1")
    poly = IntPoly((1,) * p)
    return poly.neg_var() if negate else poly


@lru_cache(maxsize=None)
def q_factorial(p: int, negate: bool = False) -> IntPoly:
    """``[1]_q [2]_q ... [p]_q`` (with q -> -q when ``negate``)."""
    if p < 1:
        raise ValueError("q-factorial needs p >= 1")
    out = IntPoly.const(1)
    for k in range(1, p + 1):
        out = out * q_number(k, negate)
    return out


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()\[\]{}@=,;]))")


def tokenize(text: str) -> list:
    """Split ``text`` into ``(kind, value, pos)`` tokens; kinds: num, name, op, end."""
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


class ScalarParser:
    """Recursive-descent parser for arithmetic over Q(q).

    Grammar::

        expr   := ['+'|'-'] term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*
        factor := atom ['^' ['-'] integer]
        atom   := integer | 'q' | '(' expr ')' | <hook>

    ``atom_hook(parser)`` may consume a non-scalar atom and return a value;
    it returns ``None`` to decline.
    """

    def __init__(self, text: str, atom_hook: Callable | None = None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.atom_hook = atom_hook

    def peek(self, offset: int = 0):
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, val, _ = self.peek()
        if kind == "op" and val == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        kind, val, pos = self.peek()
        if not (kind == "op" and val == op):
            raise ParseError(f"expected {op!r}", pos)
        self.i += 1

    def error(self, msg: str):
        raise ParseError(msg, self.peek()[2])

    def parse(self):
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError("trailing input", pos)
        return value

    def expr(self):
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        value = self.term()
        if sign < 0:
            value = -value
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            if self.accept("*"):
                value = value * self.factor()
            elif self.accept("/"):
                pos = self.peek()[2]
                try:
                    value = value / self.factor()
                except TypeError as exc:
                    raise ParseError(str(exc), pos) from exc
            else:
                return value

    def factor(self):
        value = self.atom()
        if self.accept("^"):
            neg = self.accept("-")
            kind, k, pos = self.next()
            if kind != "num":
                raise ParseError("expected integer exponent", pos)
            try:
                value = value ** (-k if neg else k)
            except ValueError as exc:
                raise ParseError(str(exc), pos) from exc
        return value

    def atom(self):
        if self.atom_hook is not None:
            value = self.atom_hook(self)
            if value is not None:
                return value
        kind, val, pos = self.peek()
        if kind == "num":
            self.i += 1
            return RatFunc(val)
        if kind == "name" and val == "q":
            self.i += 1
            return Q
        if kind == "op" and val == "(":
            self.i += 1
            value = self.expr()
            self.expect(")")
            return value
        if kind == "op" and val == "-":
            self.i += 1
            return -self.atom()
        raise ParseError("expected a number, 'q' or '('", pos)


def parse_ratfunc(text: str) -> RatFunc:
    """Parse an element of Q(q), e.g. ``"(1 + q)/(-1 + q^2)"``."""
    value = ScalarParser(text).parse()
    return as_ratfunc(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``p/r`` or ``p`` into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}", 0) from exc

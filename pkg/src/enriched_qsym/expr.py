"""Text grammar for QSym expressions.

A basis atom is one of::

    M[2,1,2]          composition index
    eta_q{1,3}@s=5    set index with degree
    L_q{}@s=2         empty set
    U_q[pi=132;alpha=2,1,2]

with kinds ``M E eta eta_q L K L_q``.  Atoms combine with scalars from
Q(q) through ``+ - * / ^`` and parentheses; ``*`` between two QSym values
is the QSym product.  Parsing expands everything in the monomial basis.
"""

from __future__ import annotations

from .coeff import ParseError, RatFunc, ScalarParser, as_ratfunc
from .combinat import SubsetIndex, check_permutation
from .qsym import BASIS_KINDS, BasisLabel, QSymElem, basis_to_M, render_combination

__all__ = ["parse_label", "parse_labels", "parse_qsym", "render_labels"]

_KINDS = frozenset(BASIS_KINDS) | {"U_q"}


def _int_list(p: ScalarParser, stop: str) -> list:
    out = []
    kind, val, pos = p.peek()
    if kind == "op" and val == stop:
        return out
    while True:
        kind, val, pos = p.next()
        if kind != "num":
            raise ParseError("expected an integer", pos)
        out.append(val)
        if not p.accept(","):
            return out


def _perm_digits(p: ScalarParser) -> tuple:
    # one-line notation: "132", "1,3,2" or "1 3 2"
    digits = []
    while True:
        kind, val, pos = p.peek()
        if kind != "num":
            break
        p.next()
        digits.append(val)
        p.accept(",")
    if len(digits) == 1 and digits[0] >= 10:
        digits = [int(ch) for ch in str(digits[0])]
    if not digits:
        raise ParseError("expected a permutation", p.peek()[2])
    try:
        return check_permutation(digits)
    except ValueError as exc:
        raise ParseError(str(exc), p.peek()[2]) from exc


def _read_label(p: ScalarParser) -> BasisLabel | None:
    kind, name, pos = p.peek()
    if kind != "name" or name not in _KINDS:
        return None
    nk, nv, _ = p.peek(1)
    if not (nk == "op" and nv in ("[", "{")):
        return None
    p.next()
    try:
        if name == "U_q":
            p.expect("[")
            key = p.next()
            if key[:2] != ("name", "pi"):
                raise ParseError("expected 'pi='", key[2])
            p.expect("=")
            pi = _perm_digits(p)
            p.expect(";")
            key = p.next()
            if key[:2] != ("name", "alpha"):
                raise ParseError("expected 'alpha='", key[2])
            p.expect("=")
            alpha = tuple(_int_list(p, "]"))
            p.expect("]")
            return BasisLabel("U_q", alpha, pi)
        if p.accept("["):
            parts = tuple(_int_list(p, "]"))
            p.expect("]")
            if any(a < 1 for a in parts):
                raise ParseError("composition parts must be positive", pos)
            return BasisLabel(name, parts)
        p.expect("{")
        members = _int_list(p, "}")
        p.expect("}")
        p.expect("@")
        key = p.next()
        if key[:2] != ("name", "s"):
            raise ParseError("expected 's=' after '@'", key[2])
        p.expect("=")
        kind_, s, spos = p.next()
        if kind_ != "num":
            raise ParseError("expected degree", spos)
        return BasisLabel(name, SubsetIndex(s, frozenset(members)))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), pos) from exc


def parse_label(text: str) -> BasisLabel:
    """Parse a single basis atom."""
    p = ScalarParser(text)
    label = _read_label(p)
    if label is None:
        raise ParseError("expected a basis element such as eta_q{1}@s=3", 0)
    if p.peek()[0] != "end":
        raise ParseError("trailing input", p.peek()[2])
    return label


def parse_qsym(text: str, q=None) -> QSymElem:
    """Parse an expression and expand it in the monomial basis."""

    def hook(p):
        label = _read_label(p)
        if label is None:
            return None
        return basis_to_M(label, q)

    value = ScalarParser(text, hook).parse()
    if isinstance(value, QSymElem):
        return value
    return QSymElem({(): as_ratfunc(value)})


def parse_labels(text: str) -> dict:
    """Parse a linear combination of basis atoms without expanding it.

    Returns ``{BasisLabel: RatFunc}``; products of atoms are rejected.
    """

    class Lin(dict):
        def __add__(self, other):
            other = _lin(other)
            out = Lin(self)
            for k, v in other.items():
                out[k] = out.get(k, RatFunc(0)) + v
            return Lin({k: v for k, v in out.items() if v})

        __radd__ = __add__

        def __neg__(self):
            return Lin({k: -v for k, v in self.items()})

        def __sub__(self, other):
            return self + (-_lin(other))

        def __rsub__(self, other):
            return _lin(other) + (-self)

        def __mul__(self, other):
            if isinstance(other, Lin):
                raise ParseError("products of basis elements are not linear", 0)
            c = as_ratfunc(other)
            return Lin({k: v * c for k, v in self.items() if v * c})

        __rmul__ = __mul__

        def __truediv__(self, other):
            return self * (1 / as_ratfunc(other))

    def _lin(x):
        if isinstance(x, Lin):
            return x
        raise ParseError("scalars cannot be added to basis elements here", 0)

    def hook(p):
        label = _read_label(p)
        return None if label is None else Lin({label: RatFunc(1)})

    value = ScalarParser(text, hook).parse()
    if not isinstance(value, Lin):
        raise ParseError("expected a combination of basis elements", 0)
    return dict(value)


def render_labels(coeffs: dict) -> str:
    """Render ``{BasisLabel: coeff}`` sorted by degree then revlex rank."""
    items = sorted(coeffs.items(), key=lambda kv: (kv[0].degree, kv[0].subset().rank, str(kv[0])))
    return render_combination((str(k), c) for k, c in items)

"""Truncated polynomials in x_1..x_N over Q(q): the brute-force oracle.

Everything here works directly with monomials, independently of the
basis-change formulas in :mod:`enriched_qsym.qsym`.  The defining sums of
the named bases (weakly increasing index words with a weight per word)
are enumerated literally.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations, combinations_with_replacement
from typing import Callable, Iterable, Mapping

from .coeff import ONE, Q, RatFunc, ZERO, as_ratfunc
from .combinat import des, peak

__all__ = [
    "TruncPoly",
    "truncate",
    "is_quasisymmetric",
    "monomial_reconstruct",
    "weakly_increasing_sum",
    "eta_q_defining_sum",
    "L_defining_sum",
    "K_defining_sum",
    "u_q_defining_sum",
]


class TruncPoly:
    """Polynomial in ``x_1..x_N`` with RatFunc coefficients.

    ``terms`` maps exponent tuples of length ``N`` to nonzero coefficients.
    """

    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms: Mapping | None = None):
        self.N = N
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != N:
                raise ValueError(f"exponent vector {exp} has length != {N}")
            c = as_ratfunc(c)
            if c:
                clean[exp] = c
        self.terms = clean

    @classmethod
    def variable(cls, N: int, i: int) -> "TruncPoly":
        exp = [0] * N
        exp[i - 1] = 1
        return cls(N, {tuple(exp): ONE})

    @classmethod
    def constant(cls, N: int, c) -> "TruncPoly":
        return cls(N, {(0,) * N: c})

    def _check(self, other: "TruncPoly"):
        if not isinstance(other, TruncPoly):
            raise TypeError("expected TruncPoly")
        if other.N != self.N:
            raise ValueError(f"variable count mismatch: {self.N} vs {other.N}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, ZERO) + c
        return TruncPoly(self.N, out)

    def __neg__(self):
        return TruncPoly(self.N, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncPoly):
            c = as_ratfunc(other)
            return TruncPoly(self.N, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        out = defaultdict(lambda: ZERO)
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                out[exp] = out[exp] + ca * cb
        return TruncPoly(self.N, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        out = TruncPoly.constant(self.N, ONE)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncPoly):
            return NotImplemented
        return self.N == other.N and self.terms == other.terms

    def map_coeffs(self, fn: Callable) -> "TruncPoly":
        return TruncPoly(self.N, {e: fn(c) for e, c in self.terms.items()})

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self) -> list:
        # graded lex: total degree, then exponent vector descending
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in self.sorted_terms():
            mono = " ".join(
                f"x{i + 1}" if a == 1 else f"x{i + 1}^{a}" for i, a in enumerate(exp) if a
            )
            coeff = str(c)
            if not mono:
                parts.append(coeff if c.is_poly() and c.num.degree <= 0 else f"({coeff})")
            elif c == ONE:
                parts.append(mono)
            else:
                parts.append(f"({coeff}) * {mono}")
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "terms": [{"exponents": list(e), "coeff": str(c)} for e, c in self.sorted_terms()],
        }


def _packed(exp: tuple) -> tuple:
    return tuple(a for a in exp if a)


def truncate(elem, N: int) -> TruncPoly:
    """Expand a QSym element (M-basis map) into ``x_1..x_N``."""
    terms = elem.terms if hasattr(elem, "terms") else elem
    out = defaultdict(lambda: ZERO)
    for alpha, c in terms.items():
        k = len(alpha)
        for pos in combinations(range(N), k):
            exp = [0] * N
            for p, a in zip(pos, alpha):
                exp[p] = a
            key = tuple(exp)
            out[key] = out[key] + c
    return TruncPoly(N, out)


def is_quasisymmetric(p: TruncPoly, d: int | None = None) -> bool:
    """True if each coefficient equals that of its packed monomial.

    Only exponent patterns with at most ``N`` parts exist, so the check is
    faithful for degree ``d <= N``.
    """
    N = p.N
    by_pattern = defaultdict(dict)
    for exp, c in p.terms.items():
        by_pattern[_packed(exp)][exp] = c
    for alpha, found in by_pattern.items():
        k = len(alpha)
        expected = None
        count = 0
        for pos in combinations(range(N), k):
            exp = [0] * N
            for q_, a in zip(pos, alpha):
                exp[q_] = a
            c = found.get(tuple(exp))
            if c is None:
                return False
            if expected is None:
                expected = c
            elif c != expected:
                return False
            count += 1
        if count != len(found):
            return False
    return True


def monomial_reconstruct(p: TruncPoly, d: int | None = None):
    """The unique QSym element (M-basis) whose truncation is ``p``."""
    from .qsym import QSymElem

    if not is_quasisymmetric(p, d):
        raise ValueError("polynomial is not quasisymmetric")
    out = {}
    for exp, c in p.terms.items():
        alpha = _packed(exp)
        k = len(alpha)
        if exp[:k] == alpha and all(a == 0 for a in exp[k:]):
            out[alpha] = c
    return QSymElem(out)


def weakly_increasing_sum(alpha, N: int, weight: Callable[[tuple], RatFunc]) -> TruncPoly:
    """``sum over i_1 <= ... <= i_n <= N of weight(i) * x_{i_1}^{a_1} ... x_{i_n}^{a_n}``."""
    n = len(alpha)
    out = defaultdict(lambda: ZERO)
    for idx in combinations_with_replacement(range(1, N + 1), n):
        w = weight(idx)
        if not w:
            continue
        exp = [0] * N
        for i, a in zip(idx, alpha):
            exp[i - 1] += a
        key = tuple(exp)
        out[key] = out[key] + w
    return TruncPoly(N, out)


def eta_q_defining_sum(alpha, N: int, q=Q) -> TruncPoly:
    """Enriched q-monomial: weight ``(q+1)^(number of distinct indices)``."""
    base = as_ratfunc(q) + 1
    return weakly_increasing_sum(alpha, N, lambda idx: base ** len(set(idx)))


def L_defining_sum(s: int, I: Iterable[int], N: int) -> TruncPoly:
    """Fundamental function: strict increase forced at every position of ``I``."""
    I = frozenset(I)

    def weight(idx):
        return ONE if all(idx[j - 1] < idx[j] for j in I) else ZERO

    return weakly_increasing_sum((1,) * s, N, weight)


def K_defining_sum(s: int, J: Iterable[int], N: int) -> TruncPoly:
    """Peak function: ``i_{j-1} < i_{j+1}`` at each ``j`` in ``J``, weight 2^distinct."""
    J = frozenset(J)

    def weight(idx):
        if all(idx[j - 2] < idx[j] for j in J):
            return RatFunc(2 ** len(set(idx)))
        return ZERO

    return weakly_increasing_sum((1,) * s, N, weight)


def u_q_defining_sum(pi, alpha, N: int, q=Q) -> TruncPoly:
    """Closed form for the q-generating function of a weighted chain.

    Words ``i_1 <= ... <= i_n`` avoiding ``i_{j-1} = i_{j+1}`` at peaks of
    ``pi``, weighted ``q^(#descents j with i_j = i_{j+1}) (q+1)^(#distinct)``.
    """
    q = as_ratfunc(q)
    D, P = des(pi), peak(pi)

    def weight(idx):
        if any(idx[j - 2] == idx[j] for j in P):
            return ZERO
        flat = sum(1 for j in D if idx[j - 1] == idx[j])
        return q ** flat * (q + 1) ** len(set(idx))

    return weakly_increasing_sum(alpha, N, weight)

"""Labelled weighted posets and exhaustive (enriched) P-partition enumeration.

Signed values ``-1 < 1 < -2 < 2 < ...`` are encoded by their rank in that
total order: ``-m`` has rank ``2m - 1`` and ``+m`` has rank ``2m``.  An
assignment is a tuple indexed by label ``1..n`` (position ``label - 1``).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .coeff import IntPoly, RatFunc, as_ratfunc
from .combinat import check_composition, check_permutation
from .truncoracle import TruncPoly

__all__ = [
    "SignedValue",
    "WeightedPoset",
    "make_poset",
    "chain_poset",
    "load_poset",
    "poset_to_json",
    "enumerate_classical",
    "enumerate_enriched",
    "gamma_q_trunc",
    "gamma_classical_trunc",
    "gamma_enriched_trunc",
    "linear_extensions",
    "linear_extension_sum",
    "SAMPLE_POSET",
]


@dataclass(frozen=True, order=True)
class SignedValue:
    """Element of P±; the dataclass ordering yields -1 < 1 < -2 < 2 < ..."""

    magnitude: int
    positive: bool

    @property
    def negative(self) -> bool:
        return not self.positive

    @property
    def rank(self) -> int:
        return 2 * self.magnitude - (0 if self.positive else 1)

    @classmethod
    def from_rank(cls, r: int) -> "SignedValue":
        return cls((r + 1) // 2, r % 2 == 0)

    @classmethod
    def from_int(cls, v: int) -> "SignedValue":
        if v == 0:
            raise ValueError("0 is not a signed value")
        return cls(abs(v), v > 0)

    def __int__(self) -> int:
        return self.magnitude if self.positive else -self.magnitude

    def __str__(self) -> str:
        return str(int(self))


@dataclass(frozen=True)
class WeightedPoset:
    n: int
    less_than: frozenset
    eps: tuple = field(default=())

    def __post_init__(self):
        if len(self.eps) != self.n or any(e < 1 for e in self.eps):
            raise ValueError("weights must be positive and given for every label")
        for i, j in self.less_than:
            if i == j or (j, i) in self.less_than:
                raise ValueError("not a partial order")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"label out of range in relation {(i, j)}")
        for i, j in self.less_than:
            for k, l in self.less_than:
                if j == k and (i, l) not in self.less_than:
                    raise ValueError("relation is not transitively closed")

    def weight(self, label: int) -> int:
        return self.eps[label - 1]

    def covers(self) -> list:
        lt = self.less_than
        return sorted(
            (i, j) for i, j in lt if not any((i, k) in lt and (k, j) in lt for k in range(1, self.n + 1))
        )

    def topological_order(self) -> list:
        order = []
        placed = set()
        while len(order) < self.n:
            for v in range(1, self.n + 1):
                if v not in placed and all(i in placed for i, j in self.less_than if j == v):
                    order.append(v)
                    placed.add(v)
                    break
        return order

    def total_weight(self) -> int:
        return sum(self.eps)


def _closure(n: int, pairs: Iterable[tuple]) -> set:
    rel = {(int(a), int(b)) for a, b in pairs}
    for a, b in rel:
        if not (1 <= a <= n and 1 <= b <= n):
            raise ValueError(f"label out of range in relation {(a, b)}")
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    if any(a == b for a, b in rel):
        raise ValueError("not a partial order")
    return rel


def make_poset(n: int, covers: Iterable[tuple] = (), eps: Mapping | Iterable | None = None) -> WeightedPoset:
    """Poset on labels ``1..n`` generated by ``covers`` (pairs ``(i, j)`` meaning i < j)."""
    if eps is None:
        weights = (1,) * n
    elif isinstance(eps, Mapping):
        weights = tuple(int(eps[k]) if k in eps else int(eps[str(k)]) for k in range(1, n + 1))
    else:
        weights = tuple(int(e) for e in eps)
    return WeightedPoset(n, frozenset(_closure(n, covers)), weights)


def chain_poset(pi, alpha) -> WeightedPoset:
    """The chain ``pi_1 < pi_2 < ... < pi_n`` with weight ``alpha_i`` on label ``pi_i``."""
    pi = check_permutation(pi)
    alpha = check_composition(alpha)
    if len(pi) != len(alpha):
        raise ValueError("permutation and composition lengths differ")
    n = len(pi)
    rel = frozenset((pi[i], pi[j]) for i in range(n) for j in range(i + 1, n))
    eps = [0] * n
    for label, a in zip(pi, alpha):
        eps[label - 1] = a
    return WeightedPoset(n, rel, tuple(eps))


def load_poset(path) -> WeightedPoset:
    data = json.loads(Path(path).read_text())
    return poset_from_json(data)


def poset_from_json(data: Mapping) -> WeightedPoset:
    try:
        n = int(data["n"])
        covers = [tuple(c) for c in data.get("covers", [])]
        weights = data.get("weights")
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed poset description: {exc}") from exc
    return make_poset(n, covers, weights)


def poset_to_json(P: WeightedPoset) -> dict:
    return {
        "n": P.n,
        "covers": [list(c) for c in P.covers()],
        "weights": {str(k): P.weight(k) for k in range(1, P.n + 1)},
    }


SAMPLE_POSET = {
    "n": 5,
    "covers": [[3, 2], [1, 2], [1, 4], [5, 3], [5, 1]],
    "weights": {"1": 1, "2": 5, "3": 2, "4": 2, "5": 2},
}


def _enumerate(P: WeightedPoset, values: list, ok) -> Iterator[tuple]:
    order = P.topological_order()
    preds = {v: [u for u, w in P.less_than if w == v] for v in order}
    assign = [None] * P.n

    def rec(k):
        if k == len(order):
            yield tuple(assign)
            return
        v = order[k]
        for val in values:
            if all(ok(u, v, assign[u - 1], val) for u in preds[v]):
                assign[v - 1] = val
                yield from rec(k + 1)
        assign[v - 1] = None

    yield from rec(0)


def enumerate_classical(P: WeightedPoset, N: int) -> list:
    """All P-partitions with values in ``1..N``, as tuples indexed by label."""

    def ok(i, j, fi, fj):
        # i <_P j
        return fi < fj if i > j else fi <= fj

    return list(_enumerate(P, list(range(1, N + 1)), ok))


def enumerate_enriched(P: WeightedPoset, N: int) -> list:
    """All enriched P-partitions with magnitudes ``<= N`` (tuples of SignedValue)."""
    values = [SignedValue.from_rank(r) for r in range(1, 2 * N + 1)]

    def ok(i, j, fi, fj):
        if fi < fj:
            return True
        if fi == fj:
            return fi.positive if i < j else fi.negative
        return False

    return list(_enumerate(P, values, ok))


def _gamma(P: WeightedPoset, N: int, maps, sign_of) -> dict:
    # exponent vector -> {power of q: count}
    acc = defaultdict(lambda: defaultdict(int))
    for f in maps:
        exp = [0] * N
        qpow = 0
        for label, v in enumerate(f, start=1):
            mag, neg = sign_of(v)
            exp[mag - 1] += P.weight(label)
            qpow += neg
        acc[tuple(exp)][qpow] += 1
    return acc


def gamma_q_trunc(P: WeightedPoset, N: int, q=None) -> TruncPoly:
    """q-generating function of enriched P-partitions, truncated to ``x_1..x_N``.

    With ``q=None`` the coefficients are polynomials in the symbolic q;
    otherwise q is specialized to the given value.
    """
    acc = _gamma(P, N, enumerate_enriched(P, N), lambda v: (v.magnitude, int(v.negative)))
    terms = {}
    for exp, counts in acc.items():
        top = max(counts)
        poly = IntPoly([counts.get(k, 0) for k in range(top + 1)])
        c = RatFunc(poly, normalize=False)
        terms[exp] = c if q is None else c.substitute(as_ratfunc(q))
    return TruncPoly(N, terms)


def gamma_classical_trunc(P: WeightedPoset, N: int) -> TruncPoly:
    acc = _gamma(P, N, enumerate_classical(P, N), lambda v: (v, 0))
    return TruncPoly(N, {e: RatFunc(c[0]) for e, c in acc.items()})


def gamma_enriched_trunc(P: WeightedPoset, N: int) -> TruncPoly:
    acc = _gamma(P, N, enumerate_enriched(P, N), lambda v: (v.magnitude, 0))
    return TruncPoly(N, {e: RatFunc(c[0]) for e, c in acc.items()})


def linear_extensions(P: WeightedPoset) -> list:
    """Linear extensions as permutations ``pi`` with ``pi_i <_P pi_j => i < j``."""
    out = []

    def rec(prefix, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        for v in sorted(remaining):
            if all(u not in remaining for u, w in P.less_than if w == v):
                rec(prefix + [v], remaining - {v})

    rec([], frozenset(range(1, P.n + 1)))
    return out


def linear_extension_sum(P: WeightedPoset, N: int, q=None) -> TruncPoly:
    """Sum of chain q-generating functions over the linear extensions of ``P``."""
    total = TruncPoly(N)
    for pi in linear_extensions(P):
        alpha = tuple(P.weight(label) for label in pi)
        total = total + gamma_q_trunc(chain_poset(pi, alpha), N, q)
    return total

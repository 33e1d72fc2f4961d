"""Compositions, subset indices, permutation statistics, merges and shuffles.

Compositions and permutations are plain tuples of ints; subsets are
frozensets.  ``SubsetIndex`` pairs a degree ``s`` with a subset of
``{1, ..., s-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

Composition = tuple
Permutation = tuple

__all__ = [
    "SubsetIndex",
    "des",
    "peak",
    "is_peak_lacunar",
    "peak_of_set",
    "comp_to_subset",
    "subset_to_comp",
    "comp_subset_bijection",
    "merge_at",
    "merge_set",
    "merge_set_peak",
    "coshuffle",
    "comp_shuffles_with_positions",
    "t_beta",
    "revlex_rank",
    "subset_from_rank",
    "subsets_revlex",
    "compositions",
    "compositions_upto",
    "permutations",
    "check_composition",
    "check_permutation",
    "format_subset",
    "format_composition",
    "parse_composition",
    "parse_subset",
    "parse_permutation",
]


@dataclass(frozen=True, order=False)
class SubsetIndex:
    """A subset ``members`` of ``[s-1]`` together with the degree ``s``."""

    s: int
    members: frozenset = frozenset()

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        object.__setattr__(self, "members", members)
        if self.s < 0:
            raise ValueError("degree must be nonnegative")
        if any(i < 1 or i > self.s - 1 for i in members):
            raise ValueError(f"subset {sorted(members)} is not contained in [{self.s - 1}]")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __str__(self) -> str:
        return format_subset(self.members, self.s)

    @property
    def rank(self) -> int:
        return revlex_rank(self.members)

    def complement(self) -> "SubsetIndex":
        return SubsetIndex(self.s, frozenset(range(1, self.s)) - self.members)

    def reflect(self) -> "SubsetIndex":
        """``s - I = {s - i : i in I}``."""
        return SubsetIndex(self.s, frozenset(self.s - i for i in self.members))


def check_composition(alpha: Iterable[int]) -> Composition:
    alpha = tuple(int(a) for a in alpha)
    if any(a < 1 for a in alpha):
        raise ValueError(f"composition parts must be positive: {alpha}")
    return alpha


def check_permutation(pi: Iterable[int]) -> Permutation:
    pi = tuple(int(a) for a in pi)
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise ValueError(f"not a permutation of 1..{len(pi)}: {pi}")
    return pi


def des(pi: Permutation) -> frozenset:
    """Descent set ``{i : pi(i) > pi(i+1)}`` (1-based positions)."""
    return frozenset(i + 1 for i in range(len(pi) - 1) if pi[i] > pi[i + 1])


def peak(pi: Permutation) -> frozenset:
    """Peak set ``{i : pi(i-1) < pi(i) > pi(i+1)}``, 2 <= i <= n-1."""
    return frozenset(
        i + 1 for i in range(1, len(pi) - 1) if pi[i - 1] < pi[i] > pi[i + 1]
    )


def is_peak_lacunar(I: Iterable[int], n: int | None = None) -> bool:
    I = frozenset(I)
    if 1 in I:
        return False
    if n is not None and any(i > n - 1 for i in I):
        return False
    return not any(i + 1 in I for i in I)


def peak_of_set(I) -> frozenset | SubsetIndex:
    """``Peak(I) = I minus (I+1) minus {1}``; keeps the input's type."""
    members = I.members if isinstance(I, SubsetIndex) else frozenset(I)
    out = members - frozenset(i + 1 for i in members) - {1}
    return SubsetIndex(I.s, out) if isinstance(I, SubsetIndex) else out


def comp_to_subset(alpha: Composition) -> SubsetIndex:
    """Composition -> set of partial sums ``{a1, a1+a2, ..., a1+...+a_{n-1}}``."""
    alpha = check_composition(alpha)
    total, sums = 0, []
    for a in alpha[:-1]:
        total += a
        sums.append(total)
    return SubsetIndex(sum(alpha), frozenset(sums))


def subset_to_comp(I: SubsetIndex) -> Composition:
    """Inverse of :func:`comp_to_subset`."""
    if I.s == 0:
        return ()
    cuts = [0] + sorted(I.members) + [I.s]
    return tuple(b - a for a, b in zip(cuts, cuts[1:]))


def comp_subset_bijection(x):
    if isinstance(x, SubsetIndex):
        return subset_to_comp(x)
    return comp_to_subset(x)


def merge_at(alpha: Composition, i: int) -> Composition:
    """Replace parts ``i`` and ``i+1`` (1-based) by their sum."""
    if not 1 <= i <= len(alpha) - 1:
        raise ValueError(f"merge position {i} out of range for {alpha}")
    return alpha[: i - 1] + (alpha[i - 1] + alpha[i],) + alpha[i + 1 :]


def merge_set(alpha: Composition, I: Iterable[int]) -> Composition:
    """Merge parts ``i`` and ``i+1`` for every ``i`` in ``I``.

    Each maximal run of positions linked by ``I`` collapses into a single
    part; this coincides with applying :func:`merge_at` for the elements
    of ``I`` from largest to smallest.
    """
    I = frozenset(I)
    if not I:
        return tuple(alpha)
    if any(i < 1 or i > len(alpha) - 1 for i in I):
        raise ValueError(f"merge set {sorted(I)} out of range for {alpha}")
    out = []
    acc = 0
    for pos, a in enumerate(alpha, start=1):
        acc += a
        if pos not in I:
            out.append(acc)
            acc = 0
    return tuple(out)


def merge_set_peak(alpha: Composition, I: Iterable[int], J: Iterable[int]) -> Composition:
    """``alpha`` merged along ``I | J | (J - 1)``."""
    J = frozenset(J)
    return merge_set(alpha, frozenset(I) | J | frozenset(j - 1 for j in J))


def _interleavings(n: int, m: int) -> Iterator[tuple]:
    # Positions (0-based) taken by the first word, lexicographic.
    return combinations(range(n + m), n)


def coshuffle(pi: Permutation, alpha: Composition, sigma: Permutation, beta: Composition) -> list:
    """All pairs ``(tau, gamma)`` of the coshuffle of ``(pi, alpha)`` and ``(sigma, beta)``.

    Ordered lexicographically by the positions chosen for the letters of ``pi``.
    """
    n, m = len(pi), len(sigma)
    if len(alpha) != n or len(beta) != m:
        raise ValueError("composition length must match permutation length")
    shifted = tuple(n + s for s in sigma)
    out = []
    for pos in _interleavings(n, m):
        chosen = set(pos)
        tau, gamma = [], []
        i = j = 0
        for k in range(n + m):
            if k in chosen:
                tau.append(pi[i])
                gamma.append(alpha[i])
                i += 1
            else:
                tau.append(shifted[j])
                gamma.append(beta[j])
                j += 1
        out.append((tuple(tau), tuple(gamma)))
    return out


def comp_shuffles_with_positions(alpha: Composition, beta: Composition) -> list:
    """Shuffles ``gamma`` of ``alpha`` and ``beta`` with the 1-based positions of beta's entries.

    Multiset semantics: one entry per interleaving, ordered lexicographically
    by the positions of ``alpha``'s entries (so ``(1) x (1)`` lists
    ``S = {2}`` before ``S = {1}``).
    """
    n, m = len(alpha), len(beta)
    out = []
    for pos in _interleavings(n, m):
        chosen = set(pos)
        gamma = []
        s_beta = []
        i = j = 0
        for k in range(n + m):
            if k in chosen:
                gamma.append(alpha[i])
                i += 1
            else:
                gamma.append(beta[j])
                s_beta.append(k + 1)
                j += 1
        out.append((tuple(gamma), frozenset(s_beta)))
    return out


def t_beta(S: Iterable[int], n_plus_m: int | None = None) -> frozenset:
    """``S \\ (S - 1)``: the positions of S whose successor is not in S."""
    S = frozenset(S)
    return S - frozenset(i - 1 for i in S)


def revlex_rank(I) -> int:
    """Rank of ``I`` in reverse lexicographic order: ``sum(2^(i-1))``."""
    members = I.members if isinstance(I, SubsetIndex) else I
    return sum(1 << (i - 1) for i in members)


def subset_from_rank(rank: int, s: int | None = None):
    members = frozenset(i + 1 for i in range(rank.bit_length()) if rank >> i & 1)
    return SubsetIndex(s, members) if s is not None else members


def subsets_revlex(s: int) -> list:
    """All subsets of ``[s-1]`` as ``SubsetIndex`` in reverse lexicographic order."""
    size = 1 << max(s - 1, 0)
    return [subset_from_rank(r, s) for r in range(size)]


def compositions(s: int) -> Iterator[Composition]:
    """Compositions of ``s``, in order of their partial-sum subset rank."""
    for I in subsets_revlex(s):
        yield subset_to_comp(I)


def compositions_upto(d: int) -> Iterator[Composition]:
    for s in range(d + 1):
        yield from compositions(s)


def permutations(n: int) -> Iterator[Permutation]:
    from itertools import permutations as _perms

    return _perms(range(1, n + 1))


# -- text forms --------------------------------------------------------------

def format_subset(members: Iterable[int], s: int | None = None) -> str:
    body = "{" + ",".join(str(i) for i in sorted(members)) + "}"
    return body if s is None else f"{body}@s={s}"


def format_composition(alpha: Composition) -> str:
    return ",".join(str(a) for a in alpha)


def parse_composition(text: str) -> Composition:
    text = text.strip().strip("[]()")
    if not text:
        return ()
    return check_composition(int(t) for t in text.split(","))


def parse_subset(text: str) -> SubsetIndex:
    """Parse ``{1,3}@s=5``."""
    body, _, deg = text.strip().partition("@")
    deg = deg.strip()
    if not deg.startswith("s="):
        raise ValueError(f"missing degree in subset {text!r}; expected e.g. {{1,3}}@s=5")
    inner = body.strip().strip("{}").strip()
    members = frozenset(int(t) for t in inner.split(",")) if inner else frozenset()
    return SubsetIndex(int(deg[2:]), members)


def parse_permutation(text: str) -> Permutation:
    text = text.strip()
    if "," in text:
        parts = text.split(",")
    elif " " in text:
        parts = text.split()
    else:
        parts = list(text)
    return check_permutation(int(p) for p in parts if p.strip())

"""Quasisymmetric functions over Q(q), stored in the monomial basis.

Set-index conventions (degree ``s``, subset of ``[s-1]``):

* ``M``, ``E``, ``eta``, ``eta_q``: the set lists the positions ``j`` with
  ``i_j = i_{j+1}`` in the index word, i.e. the parts merged in ``[1^s]``.
  ``M{}@s=2`` is ``M[1,1]`` and ``M{1}@s=2`` is ``M[2]``.
* ``L``, ``K``, ``L_q``: the set is a descent set; the composition is read
  off its partial sums.  ``L{1}@s=2`` is ``L[1,1]``.

Every builder takes the deformation parameter ``q`` as a keyword; the
default is the symbolic generator of Q(q).  Passing a number gives the
native specialization.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .coeff import ONE, Q, RatFunc, ZERO, as_ratfunc, subst_qinv
from .combinat import (
    SubsetIndex,
    check_composition,
    check_permutation,
    comp_shuffles_with_positions,
    comp_to_subset,
    coshuffle,
    des,
    format_composition,
    is_peak_lacunar,
    merge_set,
    peak,
    peak_of_set,
    subset_to_comp,
    subsets_revlex,
    t_beta,
)

__all__ = [
    "QSymElem",
    "BasisLabel",
    "BASIS_KINDS",
    "M",
    "M_set",
    "merge_comp",
    "merge_index",
    "basis_to_M",
    "eta_q_set",
    "eta_q_comp",
    "E_set",
    "eta_set",
    "L_set",
    "K_set",
    "L_q_set",
    "u_q_to_M",
    "u_q_via_eta",
    "l_q_via_eta",
    "eta_combination_to_M",
    "M_to_eta_q",
    "M_to_L",
    "eta_to_L",
    "L_to_eta",
    "product",
    "product_u_q",
    "product_eta",
    "antipode",
    "antipode_eta_identity",
    "antipode_lq_identity",
    "antipode_lq_complement_identity",
    "duality_f",
    "lkee_specializations",
    "convert",
    "render_combination",
    "subsets_of",
]

BASIS_KINDS = ("M", "E", "eta", "eta_q", "L", "K", "L_q")
_MERGE_KINDS = frozenset({"M", "E", "eta", "eta_q"})


def _q(q) -> RatFunc:
    return Q if q is None else as_ratfunc(q)


def subsets_of(S: Iterable[int]) -> list:
    S = sorted(S)
    return [frozenset(c) for k in range(len(S) + 1) for c in combinations(S, k)]


def merge_comp(I: SubsetIndex) -> tuple:
    """Composition ``[1^s]`` merged along ``I`` (index convention of M, E, eta)."""
    return merge_set((1,) * I.s, I.members)


def merge_index(alpha) -> SubsetIndex:
    """Inverse of :func:`merge_comp`: the complement of the partial-sum set."""
    return comp_to_subset(alpha).complement() if alpha else SubsetIndex(0)


class QSymElem:
    """Finitely supported map from compositions to Q(q), read in the M basis."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        for alpha, c in (terms or {}).items():
            c = as_ratfunc(c)
            if c:
                clean[tuple(alpha)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "QSymElem":
        e = object.__new__(cls)
        e.terms = terms
        return e

    @classmethod
    def one(cls) -> "QSymElem":
        return cls._raw({(): ONE})

    @classmethod
    def zero(cls) -> "QSymElem":
        return cls._raw({})

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QSymElem):
            try:
                other = QSymElem({(): as_ratfunc(other)})
            except TypeError:
                return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return QSymElem._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return QSymElem._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSymElem":
        c = as_ratfunc(c)
        if not c:
            return QSymElem.zero()
        return QSymElem._raw({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, QSymElem):
            return product(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, QSymElem):
            raise TypeError("cannot divide by a QSym element")
        return self.scale(ONE / as_ratfunc(other))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of a QSym element are undefined")
        out = QSymElem.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, QSymElem):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, alpha) -> RatFunc:
        return self.terms.get(tuple(alpha), ZERO)

    # -- grading -----------------------------------------------------------
    def degrees(self) -> set:
        return {sum(a) for a in self.terms}

    def is_homogeneous(self, s: int | None = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        return len(degs) == 1 and (s is None or degs == {s})

    def component(self, s: int) -> "QSymElem":
        return QSymElem._raw({a: c for a, c in self.terms.items() if sum(a) == s})

    def map_coeffs(self, fn) -> "QSymElem":
        return QSymElem({a: fn(c) for a, c in self.terms.items()})

    def specialize(self, x) -> "QSymElem":
        """Evaluate every coefficient at ``q = x`` (exact rational)."""
        return self.map_coeffs(lambda c: RatFunc.from_fraction(c.eval_at(x)))

    def subst_qinv(self) -> "QSymElem":
        return self.map_coeffs(subst_qinv)

    # -- views -------------------------------------------------------------
    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), merge_index(t[0]).rank, t[0]))

    def __str__(self) -> str:
        return render_combination(
            (f"M[{format_composition(a)}]", c) for a, c in self.sorted_terms()
        )

    def __repr__(self) -> str:
        return f"QSymElem({self})"

    def to_json(self) -> list:
        return [{"basis": "M", "index": list(a), "coeff": str(c)} for a, c in self.sorted_terms()]


def _coeff_text(c: RatFunc) -> tuple:
    """(sign, body) for rendering ``c * label``; body is '' when |c| = 1."""
    if c.is_poly() and c.num.degree <= 0:
        v = c.num.lc
        sign = "-" if v < 0 else "+"
        return sign, "" if abs(v) == 1 else str(abs(v))
    return "+", f"({c})"


def render_combination(pairs: Iterable) -> str:
    """Render ``(label, coeff)`` pairs as ``c1 * label1 + c2 * label2 ...``."""
    out = []
    for label, c in pairs:
        sign, body = _coeff_text(c)
        piece = f"{body} * {label}" if body else label
        if not out:
            out.append(piece if sign == "+" else f"-{piece}")
        else:
            out.append(f"{sign} {piece}")
    return " ".join(out) if out else "0"


@dataclass(frozen=True)
class BasisLabel:
    """A named basis element: ``kind`` plus a composition or ``SubsetIndex``.

    ``kind == "U_q"`` labels ``U^q_{pi, alpha}`` with ``index = alpha``.
    """

    kind: str
    index: object
    pi: tuple | None = None

    def __post_init__(self):
        if self.kind not in BASIS_KINDS and self.kind != "U_q":
            raise ValueError(f"unknown basis {self.kind!r}")
        if self.kind == "U_q":
            if self.pi is None or len(self.pi) != len(self.index):
                raise ValueError("U_q needs a permutation and a composition of equal length")
        if self.kind == "K" and not is_peak_lacunar(self.subset().members):
            raise ValueError(f"K index {self.subset()} is not peak-lacunar")

    @property
    def degree(self) -> int:
        if isinstance(self.index, SubsetIndex):
            return self.index.s
        return sum(self.index)

    def subset(self) -> SubsetIndex:
        if isinstance(self.index, SubsetIndex):
            return self.index
        alpha = check_composition(self.index)
        return merge_index(alpha) if self.kind in _MERGE_KINDS else comp_to_subset(alpha)

    def composition(self) -> tuple:
        if not isinstance(self.index, SubsetIndex):
            return tuple(self.index)
        return merge_comp(self.index) if self.kind in _MERGE_KINDS else subset_to_comp(self.index)

    def __str__(self) -> str:
        if self.kind == "U_q":
            return f"U_q[pi={''.join(map(str, self.pi)) if len(self.pi) < 10 else ','.join(map(str, self.pi))};alpha={format_composition(self.index)}]"
        if isinstance(self.index, SubsetIndex):
            return f"{self.kind}{self.index}"
        return f"{self.kind}[{format_composition(self.index)}]"


# -- monomial-basis constructors ----------------------------------------------

def M(alpha) -> QSymElem:
    return QSymElem._raw({check_composition(alpha): ONE})


def M_set(I: SubsetIndex) -> QSymElem:
    return M(merge_comp(I))


def _supersets(I: SubsetIndex) -> list:
    rest = frozenset(range(1, I.s)) - I.members
    return [I.members | extra for extra in subsets_of(rest)]


@lru_cache(maxsize=None)
def eta_q_set(I: SubsetIndex, q=None) -> QSymElem:
    """Enriched q-monomial: ``sum over J containing I of (q+1)^(s-|J|) M_J``."""
    q = _q(q)
    base = q + 1
    out = {}
    for J in _supersets(I):
        c = base ** (I.s - len(J))
        if c:
            out[merge_set((1,) * I.s, J)] = c
    return QSymElem._raw(out)


def eta_q_comp(alpha, q=None) -> QSymElem:
    return eta_q_set(merge_index(check_composition(alpha)), q)


def E_set(I: SubsetIndex) -> QSymElem:
    return eta_q_set(I, ZERO)


def eta_set(I: SubsetIndex) -> QSymElem:
    return eta_q_set(I, ONE)


@lru_cache(maxsize=None)
def L_set(I: SubsetIndex) -> QSymElem:
    """Fundamental function: ``sum of M_J over J disjoint from I``."""
    free = frozenset(range(1, I.s)) - I.members
    return QSymElem._raw({merge_set((1,) * I.s, J): ONE for J in subsets_of(free)})


@lru_cache(maxsize=None)
def K_set(J: SubsetIndex) -> QSymElem:
    """Peak function: ``sum of 2^(s-|J'|) M_J'`` over J' with no ``{j-1, j}`` inside for j in J."""
    if not is_peak_lacunar(J.members, J.s):
        raise ValueError(f"K index {J} is not peak-lacunar")
    out = {}
    for Jp in subsets_of(range(1, J.s)):
        if any(j - 1 in Jp and j in Jp for j in J.members):
            continue
        out[merge_set((1,) * J.s, Jp)] = RatFunc(2 ** (J.s - len(Jp)))
    return QSymElem._raw(out)


@lru_cache(maxsize=None)
def u_q_to_M(pi, alpha, q=None) -> QSymElem:
    """``U^q_{pi,alpha}`` in the M basis, grouped by the equality pattern J.

    ``sum over J in [n-1] with no peak j having {j-1, j} in J of
    q^|J & Des| (q+1)^(n-|J|) M_{alpha merged along J}``.
    """
    pi = check_permutation(pi)
    alpha = check_composition(alpha)
    if len(pi) != len(alpha):
        raise ValueError("permutation and composition lengths differ")
    q = _q(q)
    n = len(pi)
    D, P = des(pi), peak(pi)
    out = defaultdict(lambda: ZERO)
    for J in subsets_of(range(1, n)):
        if any(j - 1 in J and j in J for j in P):
            continue
        c = q ** len(J & D) * (q + 1) ** (n - len(J))
        key = merge_set(alpha, J)
        out[key] = out[key] + c
    return QSymElem(out)


def eta_combination_to_M(coeffs: Mapping, q=None) -> QSymElem:
    """Expand ``{eta index: coeff}`` (compositions or SubsetIndex keys) in M."""
    out = QSymElem.zero()
    for key, c in coeffs.items():
        part = eta_q_set(key, q) if isinstance(key, SubsetIndex) else eta_q_comp(key, q)
        out = out + part.scale(c)
    return out


@lru_cache(maxsize=None)
def _u_q_via_eta(pi, alpha, q) -> tuple:
    D, P = des(pi), peak(pi)
    out = defaultdict(lambda: ZERO)
    for J in subsets_of(P):
        for I in subsets_of(D - J):
            K = I | J | frozenset(j - 1 for j in J)
            key = merge_set(alpha, K)
            out[key] = out[key] + (-q) ** len(J) * (q - 1) ** len(I)
    return tuple((k, c) for k, c in out.items() if c)


def u_q_via_eta(pi, alpha, q=None) -> dict:
    """``U^q_{pi,alpha}`` as ``{composition: coeff}`` over enriched q-monomials."""
    pi = check_permutation(pi)
    alpha = check_composition(alpha)
    if len(pi) != len(alpha):
        raise ValueError("permutation and composition lengths differ")
    return dict(_u_q_via_eta(pi, alpha, _q(q)))


@lru_cache(maxsize=None)
def _l_q_via_eta(I: SubsetIndex, q) -> tuple:
    P = peak_of_set(I.members)
    out = defaultdict(lambda: ZERO)
    for K in subsets_of(P):
        for J in subsets_of(I.members - K):
            idx = SubsetIndex(I.s, J | K | frozenset(k - 1 for k in K))
            out[idx] = out[idx] + (-q) ** len(K) * (q - 1) ** len(J)
    return tuple((k, c) for k, c in out.items() if c)


def l_q_via_eta(I: SubsetIndex, q=None) -> dict:
    """``L^(q)_I`` as ``{SubsetIndex: coeff}`` over enriched q-monomials."""
    return dict(_l_q_via_eta(I, _q(q)))


@lru_cache(maxsize=None)
def L_q_set(I: SubsetIndex, q=None) -> QSymElem:
    return eta_combination_to_M(l_q_via_eta(I, q), q)


def basis_to_M(b: BasisLabel, q=None) -> QSymElem:
    """M-expansion of a basis element."""
    if b.kind == "U_q":
        return u_q_to_M(b.pi, b.index, q)
    I = b.subset()
    if b.kind == "M":
        return M_set(I)
    if b.kind == "E":
        return E_set(I)
    if b.kind == "eta":
        return eta_set(I)
    if b.kind == "eta_q":
        return eta_q_set(I, q)
    if b.kind == "L":
        return L_set(I)
    if b.kind == "K":
        return K_set(I)
    if b.kind == "L_q":
        return L_q_set(I, q)
    raise ValueError(f"unknown basis {b.kind!r}")


# -- inverse conversions --------------------------------------------------------

def M_to_eta_q(elem: QSymElem, q=None) -> dict:
    """Coefficients ``{SubsetIndex: c}`` with ``sum c_I eta^(q)_I = elem``.

    ``M_J = (q+1)^-(s-|J|) sum over I containing J of (-1)^|I - J| eta_I``.
    """
    q = _q(q)
    base = q + 1
    if not base:
        raise ZeroDivisionError("M -> eta_q needs q+1 invertible (q = -1 given)")
    out = defaultdict(lambda: ZERO)
    for alpha, c in elem.terms.items():
        J = merge_index(alpha)
        scale = c / base ** (J.s - len(J))
        for I in _supersets(J):
            key = SubsetIndex(J.s, I)
            sign = -1 if len(I - J.members) % 2 else 1
            out[key] = out[key] + scale * sign
    return {k: v for k, v in out.items() if v}


def M_to_L(elem: QSymElem) -> dict:
    """Fundamental-basis coefficients, by Moebius inversion of ``L_I = sum_{J & I = 0} M_J``."""
    out = defaultdict(lambda: ZERO)
    for alpha, c in elem.terms.items():
        D = merge_index(alpha)
        full = frozenset(range(1, D.s))
        for J in subsets_of(D.members):
            key = SubsetIndex(D.s, full - J)
            out[key] = out[key] + (c if len(D.members - J) % 2 == 0 else -c)
    return {k: v for k, v in out.items() if v}


def eta_to_L(I: SubsetIndex, q=None) -> dict:
    """``eta^(q)_I = (q+1) sum_J (-1)^|J| (-q)^|J - I| L_J``."""
    q = _q(q)
    out = {}
    for J in subsets_revlex(I.s):
        c = (q + 1) * (-1) ** len(J) * (-q) ** len(J.members - I.members)
        if c:
            out[J] = c
    return out


def L_to_eta(J: SubsetIndex, q=None) -> dict:
    """``L_J = (q+1)^-s sum_I (-1)^|I| (-q)^|I - J| eta^(q)_I``."""
    q = _q(q)
    scale = ONE / (q + 1) ** J.s
    out = {}
    for I in subsets_revlex(J.s):
        c = scale * (-1) ** len(I) * (-q) ** len(I.members - J.members)
        if c:
            out[I] = c
    return out


# -- products ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _quasi_shuffle(a: tuple, b: tuple) -> tuple:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    out = defaultdict(int)
    for g, c in _quasi_shuffle(a[1:], b):
        out[(a[0],) + g] += c
    for g, c in _quasi_shuffle(a, b[1:]):
        out[(b[0],) + g] += c
    for g, c in _quasi_shuffle(a[1:], b[1:]):
        out[(a[0] + b[0],) + g] += c
    return tuple(out.items())


def product(a: QSymElem, b: QSymElem) -> QSymElem:
    """Product in QSym via the quasi-shuffle of monomial indices."""
    out = defaultdict(lambda: ZERO)
    for alpha, ca in a.terms.items():
        for beta, cb in b.terms.items():
            c = ca * cb
            for gamma, k in _quasi_shuffle(alpha, beta):
                out[gamma] = out[gamma] + c * k
    return QSymElem(out)


def product_u_q(pi, alpha, sigma, beta, q=None) -> QSymElem:
    """``U^q_{pi,alpha} U^q_{sigma,beta}`` as the sum over the coshuffle."""
    out = QSymElem.zero()
    for tau, gamma in coshuffle(tuple(pi), tuple(alpha), tuple(sigma), tuple(beta)):
        out = out + (u_q_to_M(tau, gamma, q) if tau else QSymElem.one())
    return out


def product_eta(alpha, beta, q=None) -> dict:
    """``eta^(q)_alpha eta^(q)_beta`` as ``{composition: coeff}`` over enriched q-monomials."""
    q = _q(q)
    alpha, beta = tuple(alpha), tuple(beta)
    total = len(alpha) + len(beta)
    out = defaultdict(lambda: ZERO)
    for gamma, S in comp_shuffles_with_positions(alpha, beta):
        T = t_beta(S, total)
        for I in subsets_of(T - {total}):
            for J in subsets_of(T - {1, total} - I):
                K = I | J | frozenset(j - 1 for j in J)
                key = merge_set(gamma, K)
                out[key] = out[key] + (q - 1) ** len(I) * (-q) ** len(J)
    return {k: v for k, v in out.items() if v}


# -- antipode and duality -----------------------------------------------------------

@lru_cache(maxsize=None)
def _antipode_M(alpha: tuple) -> QSymElem:
    I = merge_index(alpha)
    R = I.reflect().members
    sign = -1 if (I.s - len(I)) % 2 else 1
    out = {}
    for J in _supersets(SubsetIndex(I.s, R)):
        out[merge_set((1,) * I.s, J)] = RatFunc(sign)
    return QSymElem._raw(out)


def antipode(elem: QSymElem) -> QSymElem:
    """``S(M_I) = (-1)^(s-|I|) sum over J containing s-I of M_J``, extended linearly."""
    out = QSymElem.zero()
    for alpha, c in elem.terms.items():
        out = out + _antipode_M(alpha).scale(c)
    return out


def antipode_eta_identity(I: SubsetIndex, q=None) -> tuple:
    """Both sides of ``S(eta^(q)_I) = (-q)^(s-|I|) eta^(1/q)_{s-I}`` in M."""
    qq = _q(q)
    lhs = antipode(eta_q_set(I, qq))
    if q is None:
        reflected = eta_q_set(I.reflect(), Q).subst_qinv()
    else:
        reflected = eta_q_set(I.reflect(), ONE / qq)
    rhs = reflected.scale((-qq) ** (I.s - len(I)))
    return lhs, rhs


def antipode_lq_identity(I: SubsetIndex, q=None) -> tuple:
    """Both sides of ``S(L^(q)_I) = (-q)^n L^(1/q)_{n-I}`` in M.

    The two sides agree for ``I`` empty or ``I = [n-1]`` but not in general
    (already ``n = 3, I = {1}`` differs in the ``M[3]`` coefficient).
    """
    qq = _q(q)
    lhs = antipode(L_q_set(I, qq))
    if q is None:
        reflected = L_q_set(I.reflect(), Q).subst_qinv()
    else:
        reflected = L_q_set(I.reflect(), ONE / qq)
    rhs = reflected.scale((-qq) ** I.s)
    return lhs, rhs


def antipode_lq_complement_identity(I: SubsetIndex, q=None) -> tuple:
    """Both sides of ``S(L^(q)_I) = (-1)^n L^(q)_{[n-1] - (n-I)}`` in M.

    This is the form that holds for every ``I``; see :func:`antipode_lq_identity`.
    """
    qq = _q(q)
    lhs = antipode(L_q_set(I, qq))
    rhs = L_q_set(I.reflect().complement(), qq).scale((-1) ** I.s)
    return lhs, rhs


def duality_f(elem: QSymElem, s: int | None = None, q=None) -> QSymElem:
    """The linear map ``L_I -> eta^(q)_I`` on degree ``s``.

    Computed on M: ``f(M_I) = (q+1)^(|I|+1) M_{[s-1] - I}``.
    """
    q = _q(q)
    degs = elem.degrees()
    if s is None:
        if len(degs) > 1:
            raise ValueError("duality map needs a homogeneous element")
        s = degs.pop() if degs else 0
    if degs and degs != {s}:
        raise ValueError(f"element is not homogeneous of degree {s}")
    out = {}
    for alpha, c in elem.terms.items():
        I = merge_index(alpha) if alpha else SubsetIndex(s)
        target = merge_comp(I.complement())
        out[target] = c * (q + 1) ** (len(I) + 1)
    return QSymElem(out)


def lkee_specializations(J: SubsetIndex) -> dict:
    """Check the L/E and K/eta identities and the q = 0, 1 specializations at ``J``.

    Returns ``{check name: bool}``; the K-identity and the L^(1) check are
    included only when they apply (``J`` peak-lacunar, resp. always via
    ``Peak(J)``).
    """
    s = J.s
    checks = {}
    lhs = L_set(J)
    rhs = QSymElem.zero()
    for U in subsets_of(J.members):
        rhs = rhs + E_set(SubsetIndex(s, U)).scale((-1) ** len(U))
    checks["L = sum (-1)^|U| E_U"] = lhs == rhs
    if is_peak_lacunar(J.members, s):
        rhs = QSymElem.zero()
        for V in subsets_of(J.members):
            idx = SubsetIndex(s, V | frozenset(v - 1 for v in V))
            rhs = rhs + eta_set(idx).scale((-1) ** len(V))
        checks["K = sum (-1)^|V| eta_(V-1)uV"] = K_set(J) == rhs
    checks["eta^(0) = E"] = eta_q_set(J, ZERO) == E_set(J) and eta_q_set(J, Q).specialize(0) == E_set(J)
    checks["eta^(1) = eta"] = eta_q_set(J, Q).specialize(1) == eta_set(J)
    checks["L^(0) = L"] = L_q_set(J, ZERO) == L_set(J) and L_q_set(J, Q).specialize(0) == L_set(J)
    checks["L^(1) = K_Peak"] = L_q_set(J, Q).specialize(1) == K_set(peak_of_set(J))
    return checks


# -- generic conversion -------------------------------------------------------------

def convert(elem: QSymElem, target: str, q=None) -> dict:
    """Coefficients of ``elem`` in ``target`` basis as ``{BasisLabel: coeff}``.

    Supported targets: M, E, eta, eta_q, L, L_q.  Numeric ``q`` values at
    which the target family is not a basis raise ``ZeroDivisionError``.
    """
    qq = _q(q)
    if target == "M":
        return {BasisLabel("M", a): c for a, c in elem.terms.items()}
    if target in ("E", "eta", "eta_q"):
        qv = {"E": ZERO, "eta": ONE}.get(target, qq)
        if not (qv + 1):
            raise ZeroDivisionError(
                "eta_q is a basis only when q+1 is invertible; q = -1 is excluded"
            )
        return {BasisLabel(target, I): c for I, c in M_to_eta_q(elem, qv).items()}
    if target == "L":
        return {BasisLabel("L", I): c for I, c in M_to_L(elem).items()}
    if target == "L_q":
        if qq.is_constant() and qq.constant_value() in (1, -1):
            raise ZeroDivisionError(
                f"L_q is a basis only for q not in {{-1, 1}}; q = {qq.constant_value()} is excluded"
            )
        from .matrices import invert_Bn

        eta = M_to_eta_q(elem, qq)
        by_degree = defaultdict(dict)
        for I, c in eta.items():
            by_degree[I.s][I] = c
        out = defaultdict(lambda: ZERO)
        for s, coeffs in by_degree.items():
            if s == 0:
                out[SubsetIndex(0)] += coeffs[SubsetIndex(0)]
                continue
            inv = invert_Bn(s, q)
            labels = subsets_revlex(s)
            for J, c in coeffs.items():
                row = inv.entries[J.rank]
                for col, v in enumerate(row):
                    if v:
                        out[labels[col]] = out[labels[col]] + c * v
        return {BasisLabel("L_q", I): c for I, c in out.items() if c}
    if target == "K":
        raise ValueError("no conversion into K is offered: the peak functions span a proper subalgebra")
    raise ValueError(f"unknown target basis {target!r}")


def combination_sort_key(label: BasisLabel) -> tuple:
    return (label.degree, label.subset().rank)

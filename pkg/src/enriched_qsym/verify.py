"""Named verification checks, grouped by scope.

Each check returns a :class:`CheckResult`; failures carry a small
counterexample payload.  ``run_checks`` orders results by check name so
that reports are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations as _perms

from .coeff import ONE, Q, RatFunc, parse_ratfunc
from .combinat import SubsetIndex, compositions, des, peak_of_set, subsets_revlex
from .matrices import (
    basis_evidence,
    build_Bn,
    det_bareiss,
    det_Bn,
    build_An,
    det_formula_check,
    det_interpolation,
    invert_Bn,
    verify_block_recurrences,
)
from .posets import (
    SAMPLE_POSET,
    chain_poset,
    gamma_classical_trunc,
    gamma_enriched_trunc,
    gamma_q_trunc,
    linear_extension_sum,
    poset_from_json,
)
from .qsym import (
    QSymElem,
    K_set,
    L_q_set,
    L_set,
    L_to_eta,
    M_to_eta_q,
    M_set,
    antipode,
    antipode_eta_identity,
    antipode_lq_complement_identity,
    antipode_lq_identity,
    duality_f,
    eta_combination_to_M,
    eta_q_comp,
    eta_q_set,
    eta_to_L,
    lkee_specializations,
    merge_comp,
    product,
    product_eta,
    product_u_q,
    u_q_to_M,
    u_q_via_eta,
)
from .truncoracle import (
    K_defining_sum,
    L_defining_sum,
    eta_q_defining_sum,
    is_quasisymmetric,
    truncate,
    u_q_defining_sum,
)

__all__ = ["CheckResult", "SCOPES", "run_checks", "REFERENCE_B4", "REFERENCE_INVERSE_3"]

SPECIALIZATION_POINTS = (0, 1, 2, -2, Fraction(3, 2))


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    # a statement reproduced as written although it is known not to hold
    known_defect: bool = False

    @property
    def status(self) -> str:
        if self.ok:
            return "PASS"
        return "XFAIL" if self.known_defect else "FAIL"

    @property
    def counts_as_failure(self) -> bool:
        return not self.ok and not self.known_defect

    def line(self) -> str:
        return f"{self.status:<5}  {self.name}"

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


# Rows of B_4 in revlex order: {}, {1}, {2}, {2,1}, {3}, {3,1}, {3,2}, {3,2,1}.
REFERENCE_B4 = [
    ["1", "0", "0", "0", "0", "0", "0", "0"],
    ["1", "q-1", "0", "0", "0", "0", "0", "0"],
    ["1", "0", "q-1", "-q", "0", "0", "0", "0"],
    ["1", "q-1", "q-1", "(q-1)^2", "0", "0", "0", "0"],
    ["1", "0", "0", "0", "q-1", "0", "-q", "0"],
    ["1", "q-1", "0", "0", "q-1", "(q-1)^2", "-q", "-q*(q-1)"],
    ["1", "0", "q-1", "-q", "q-1", "0", "(q-1)^2", "-q*(q-1)"],
    ["1", "q-1", "q-1", "(q-1)^2", "q-1", "(q-1)^2", "(q-1)^2", "(q-1)^3"],
]

# eta^(q)_J over L^(q)_I in degree 3, columns {}, {1}, {2}, {1,2}.
_D = "((q-1)^2+q)"
REFERENCE_INVERSE_3 = [
    ["1", "0", "0", "0"],
    ["-1/(q-1)", "1/(q-1)", "0", "0"],
    [f"-(q-1)/{_D}", f"-q/((q-1)*{_D})", f"(q-1)/{_D}", f"q/((q-1)*{_D})"],
    [f"1/{_D}", f"-1/{_D}", f"-1/{_D}", f"1/{_D}"],
]


def _grid(rows):
    return [[parse_ratfunc(x) for x in r] for r in rows]


def _u_q_data(max_weight: int):
    for w in range(1, max_weight + 1):
        for alpha in compositions(w):
            for pi in _perms(range(1, len(alpha) + 1)):
                yield tuple(pi), alpha


# -- oracle ------------------------------------------------------------------------

def check_oracle(max_weight: int) -> list:
    out = []
    bad = []
    for s in range(1, max_weight + 1):
        for I in subsets_revlex(s):
            if truncate(eta_q_set(I), s) != eta_q_defining_sum(merge_comp(I), s):
                bad.append(("eta_q", str(I)))
            if truncate(L_set(I), s) != L_defining_sum(s, I.members, s):
                bad.append(("L", str(I)))
            if peak_of_set(I.members) == I.members:
                if truncate(K_set(I), s) != K_defining_sum(s, I.members, s):
                    bad.append(("K", str(I)))
    out.append(CheckResult("oracle: eta_q, L, K match defining sums", not bad, {"failures": bad[:5]}))

    bad = []
    for pi, alpha in _u_q_data(max_weight):
        N = sum(alpha)
        t = truncate(u_q_to_M(pi, alpha), N)
        if t != gamma_q_trunc(chain_poset(pi, alpha), N) or t != u_q_defining_sum(pi, alpha, N):
            bad.append((pi, alpha))
    out.append(CheckResult("oracle: U_q matches chain enumeration", not bad, {"failures": bad[:5]}))

    P = poset_from_json(SAMPLE_POSET)
    fig = {}
    for N in (2, 3):
        g = gamma_q_trunc(P, N)
        fig[N] = (
            is_quasisymmetric(g),
            g.map_coeffs(lambda c: RatFunc.from_fraction(c.eval_at(0))) == gamma_classical_trunc(P, N),
            g.map_coeffs(lambda c: RatFunc.from_fraction(c.eval_at(1))) == gamma_enriched_trunc(P, N),
            g == linear_extension_sum(P, N),
        )
    out.append(CheckResult(
        "oracle: five-vertex sample poset (quasisymmetric, q=0/1, linear extensions)",
        all(all(v) for v in fig.values()),
        {"N=2,3 [qsym, q=0, q=1, linext]": {str(k): v for k, v in fig.items()}},
    ))
    return out


# -- bases --------------------------------------------------------------------------

def check_bases(max_weight: int) -> list:
    out = []
    bad = []
    for s in range(1, max_weight + 1):
        for I in subsets_revlex(s):
            back = eta_combination_to_M(M_to_eta_q(eta_q_set(I)))
            if back != eta_q_set(I) or M_to_eta_q(eta_q_set(I)) != {I: ONE}:
                bad.append(("EM/ME eta", str(I)))
            if eta_combination_to_M(M_to_eta_q(M_set(I))) != M_set(I):
                bad.append(("ME/EM M", str(I)))
            lhs = eta_q_set(I)
            rhs = QSymElem.zero()
            for J, c in eta_to_L(I).items():
                rhs = rhs + L_set(J).scale(c)
            if lhs != rhs:
                bad.append(("EL", str(I)))
            if eta_combination_to_M(L_to_eta(I)) != L_set(I):
                bad.append(("LE", str(I)))
    out.append(CheckResult("bases: EM/ME and EL/LE round trips", not bad, {"failures": bad[:5]}))

    bad = []
    for s in range(1, max_weight + 1):
        for I in subsets_revlex(s):
            if duality_f(L_set(I), s) != eta_q_set(I):
                bad.append(("f(L)=eta", str(I)))
            m = M_set(I)
            if duality_f(duality_f(m, s), s) != m.scale((Q + 1) ** (s + 1)):
                bad.append(("f^2", str(I)))
    out.append(CheckResult("bases: duality f(L_I)=eta_I and f^2 scaling", not bad, {"failures": bad[:5]}))

    bad = []
    for s in range(1, max_weight + 1):
        for I in subsets_revlex(s):
            res = lkee_specializations(I)
            bad += [(name, str(I)) for name, ok in res.items() if not ok]
    out.append(CheckResult("bases: L/K via E/eta and q=0,1 specializations", not bad, {"failures": bad[:5]}))

    bad = []
    for pi, alpha in _u_q_data(max_weight):
        if eta_combination_to_M(u_q_via_eta(pi, alpha)) != u_q_to_M(pi, alpha):
            bad.append((pi, alpha))
    for s in range(1, max_weight + 1):
        for pi in _perms(range(1, s + 1)):
            I = SubsetIndex(s, des(pi))
            if L_q_set(I) != u_q_to_M(tuple(pi), (1,) * s):
                bad.append(("L_q vs U_q", pi))
    out.append(CheckResult("bases: U_q via eta_q equals grouped M expansion", not bad, {"failures": bad[:5]}))

    bad = []
    for s in range(1, min(max_weight, 4) + 1):
        for I in subsets_revlex(s):
            sym_eta, sym_L = eta_q_set(I), L_q_set(I)
            for x in SPECIALIZATION_POINTS:
                xq = RatFunc.from_fraction(x)
                if sym_eta.specialize(x) != eta_q_set(I, xq) or sym_L.specialize(x) != L_q_set(I, xq):
                    bad.append((str(I), str(x)))
    out.append(CheckResult("bases: symbolic identities specialize to native rational q", not bad,
                           {"failures": bad[:5]}))
    return out


# -- products --------------------------------------------------------------------------

def check_products(max_weight: int) -> list:
    out = []
    worked = product_eta((1,), (1,)) == {(1, 1): RatFunc(2), (2,): Q - 1}
    out.append(CheckResult("products: eta_(1)^2 = 2 eta_(1,1) + (q-1) eta_(2)", worked))

    bad = []
    for wa in range(0, max_weight + 1):
        for wb in range(0, max_weight + 1 - wa):
            for alpha in compositions(wa):
                for beta in compositions(wb):
                    a, b = eta_q_comp(alpha), eta_q_comp(beta)
                    p = product(a, b)
                    if eta_combination_to_M(product_eta(alpha, beta)) != p:
                        bad.append(("eee", alpha, beta))
                    N = wa + wb
                    if N and truncate(p, N) != truncate(a, N) * truncate(b, N):
                        bad.append(("trunc", alpha, beta))
    out.append(CheckResult("products: quasi-shuffle vs eta product formula vs truncation", not bad,
                           {"failures": bad[:5]}))

    bad = []
    data = list(_u_q_data(max_weight - 1))
    for pi, alpha in data:
        for sigma, beta in data:
            if sum(alpha) + sum(beta) > max_weight:
                continue
            a, b = u_q_to_M(pi, alpha), u_q_to_M(sigma, beta)
            p = product(a, b)
            if product_u_q(pi, alpha, sigma, beta) != p:
                bad.append(("coshuffle", pi, alpha, sigma, beta))
            N = sum(alpha) + sum(beta)
            if truncate(p, N) != truncate(a, N) * truncate(b, N):
                bad.append(("trunc", pi, alpha, sigma, beta))
    out.append(CheckResult("products: coshuffle formula for U_q products", not bad, {"failures": bad[:5]}))
    return out


# -- antipode ----------------------------------------------------------------------------

def check_antipode(max_weight: int) -> list:
    out = []
    bad_eta, bad_stated, bad_comp = [], [], []
    for s in range(1, max_weight + 1):
        for I in subsets_revlex(s):
            lhs, rhs = antipode_eta_identity(I)
            if lhs != rhs:
                bad_eta.append(str(I))
            lhs, rhs = antipode_lq_identity(I)
            if lhs != rhs:
                bad_stated.append(str(I))
            lhs, rhs = antipode_lq_complement_identity(I)
            if lhs != rhs:
                bad_comp.append(str(I))
    out.append(CheckResult("antipode: S(eta_q_I) = (-q)^(s-|I|) eta_(1/q)_(s-I)", not bad_eta,
                           {"failures": bad_eta[:5]}))
    out.append(CheckResult("antipode: S(L_q_I) = (-q)^n L_(1/q)_(n-I)", not bad_stated,
                           {"failures": bad_stated[:5], "count": len(bad_stated),
                            "note": "holds only for I empty or full; see the complement form"},
                           known_defect=True))
    out.append(CheckResult("antipode: S(L_q_I) = (-1)^n L_q_([n-1]-(n-I))", not bad_comp,
                           {"failures": bad_comp[:5]}))

    bad = []
    for wa in range(1, max_weight):
        for wb in range(1, max_weight + 1 - wa):
            for alpha in compositions(wa):
                for beta in compositions(wb):
                    a, b = QSymElem({alpha: ONE}), QSymElem({beta: ONE})
                    if antipode(product(a, b)) != product(antipode(a), antipode(b)):
                        bad.append((alpha, beta))
    out.append(CheckResult("antipode: multiplicative on monomials", not bad, {"failures": bad[:5]}))

    bad = []
    for s in range(1, max_weight + 1):
        for I in subsets_revlex(s):
            m = M_set(I)
            if antipode(antipode(m)) != m:
                bad.append(str(I))
    out.append(CheckResult("antipode: involution on monomials", not bad, {"failures": bad[:5]}))
    return out


# -- matrices ----------------------------------------------------------------------------

def check_matrices(max_n: int) -> list:
    out = []
    ref = _grid(REFERENCE_B4)
    B4 = build_Bn(4)
    diffs = [(i, j) for i in range(8) for j in range(8) if B4.entries[i][j] != ref[i][j]]
    out.append(CheckResult("matrices: B_4 matches reference display", not diffs, {"diffs": diffs}))

    inv = invert_Bn(3)
    ref = _grid(REFERENCE_INVERSE_3)
    diffs = [(i, j) for i in range(4) for j in range(4) if inv.entries[i][j] != ref[i][j]]
    out.append(CheckResult("matrices: degree-3 inversion rows", not diffs, {"diffs": diffs}))

    bad = [n for n in range(2, max_n + 1) if not verify_block_recurrences(n)["ok"]]
    out.append(CheckResult("matrices: block recurrences", not bad, {"failing n": bad}))

    bad = []
    for n in range(1, max_n + 1):
        B = build_Bn(n)
        if (invert_Bn(n) @ B) != type(B).identity(B.dim):
            bad.append(("inverse", n))
        if det_bareiss(B) != det_Bn(n):
            bad.append(("block product", n))
        if n <= 6 and det_interpolation(build_An(n)) != det_bareiss(build_An(n)):
            bad.append(("interpolation", n))
    out.append(CheckResult("matrices: inverse, block determinant product, two det methods", not bad,
                           {"failures": bad}))

    reports = [det_formula_check(n, interpolation=n <= 6) for n in range(2, max_n + 1)]
    exact = [r["n"] for r in reports if not (r["exact_recurrence_ok"] and r["closed_form_ok"])]
    out.append(CheckResult("matrices: det A_n via exact block recurrence", not exact, {"failing n": exact}))
    stated = [r["n"] for r in reports if not r["formula_ok"]]
    out.append(CheckResult(
        "matrices: det A_n = (-1)^(n(n-1)/2) [n]_(-q)! prod det B_i",
        not stated,
        {"failing n": stated,
         "note": "this closed form drops the power t^(2^(n-3)) of the block recurrence; it holds for n <= 3"},
        known_defect=True,
    ))

    bad = []
    for n in range(1, min(max_n, 6) + 1):
        rep = basis_evidence(n)
        if not rep["ok"]:
            bad.append(rep)
    out.append(CheckResult("matrices: basis evidence (factors, zeros at q=+-1)", not bad,
                           {"failures": bad[:2]}))
    return out


SCOPES = {
    "oracle": check_oracle,
    "bases": check_bases,
    "products": check_products,
    "antipode": check_antipode,
    "matrices": check_matrices,
}


def run_checks(scope: str = "all", max_weight: int = 4, max_n: int = 6) -> list:
    scopes = list(SCOPES) if scope == "all" else [scope]
    results = []
    for name in scopes:
        if name not in SCOPES:
            raise ValueError(f"unknown scope {name!r}")
        arg = max_n if name == "matrices" else max_weight
        results += SCOPES[name](arg)
    return sorted(results, key=lambda r: r.name)

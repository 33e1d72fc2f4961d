"""Acceptance gate: eleven criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
Each criterion is checked literally as stated, including the two that the
mathematics does not support (3 and the L^(q) half of 8); those fail.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from itertools import permutations, product as cartesian

import pytest

from enriched_qsym.coeff import ONE, Q, RatFunc, eval_at, parse_ratfunc, q_factorial
from enriched_qsym.combinat import compositions, peak_of_set, subsets_revlex
from enriched_qsym.matrices import (
    basis_evidence,
    build_An,
    build_Bn,
    det_bareiss,
    det_Bn,
    det_interpolation,
    invert_Bn,
    verify_block_recurrences,
)
from enriched_qsym.posets import (
    SAMPLE_POSET,
    chain_poset,
    gamma_classical_trunc,
    gamma_enriched_trunc,
    gamma_q_trunc,
    linear_extension_sum,
    poset_from_json,
)
from enriched_qsym.qsym import (
    E_set,
    K_set,
    L_q_set,
    L_set,
    L_to_eta,
    M_set,
    M_to_eta_q,
    QSymElem,
    antipode_eta_identity,
    antipode_lq_identity,
    duality_f,
    eta_combination_to_M,
    eta_q_comp,
    eta_q_set,
    eta_set,
    eta_to_L,
    product,
    product_eta,
    product_u_q,
    u_q_to_M,
    u_q_via_eta,
)
from enriched_qsym.truncoracle import K_defining_sum, L_defining_sum, is_quasisymmetric, truncate
from enriched_qsym.verify import REFERENCE_B4, REFERENCE_INVERSE_3

SAMPLES = (2, -2, Fraction(3, 2), Fraction(-1, 2))


def _grid(rows):
    return [[parse_ratfunc(x) for x in r] for r in rows]


# -- criteria ------------------------------------------------------------------------
# Each returns (ok, detail, runtime limit in seconds).

def c1_b4():
    ref = _grid(REFERENCE_B4)
    B = build_Bn(4).entries
    diffs = [(i, j) for i in range(8) for j in range(8) if B[i][j] != ref[i][j]]
    return not diffs, f"{64 - len(diffs)}/64 entries match", 1


def c2_inverse():
    ref = _grid(REFERENCE_INVERSE_3)
    inv = invert_Bn(3).entries
    diffs = [(i, j) for i in range(4) for j in range(4) if inv[i][j] != ref[i][j]]
    return not diffs, f"{16 - len(diffs)}/16 entries match", 1


def c3_det_formula():
    holds, fails, methods = [], [], []
    for n in range(2, 8):
        A = build_An(n)
        direct = det_bareiss(A)
        prod_B = ONE
        for i in range(1, n - 1):
            prod_B = prod_B * det_Bn(i)
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        stated = RatFunc(q_factorial(n, negate=True)) * prod_B * sign
        (holds if direct == stated else fails).append(n)
        if n <= 6 and det_interpolation(A) != direct:
            methods.append(n)
    detail = f"formula holds for n={holds}, differs for n={fails}; methods disagree for n={methods}"
    return not fails and not methods, detail, 120


def c4_recurrences():
    bad = [n for n in range(2, 7) if not verify_block_recurrences(n)["ok"]]
    return not bad, f"failing n={bad}", 30


def c5_u_q_oracle():
    bad, count = [], 0
    for n in range(1, 5):
        for alpha in cartesian((1, 2), repeat=n):
            N = sum(alpha)
            for pi in permutations(range(1, n + 1)):
                count += 1
                via_M = u_q_to_M(pi, alpha)
                via_eta = eta_combination_to_M(u_q_via_eta(pi, alpha))
                enum = gamma_q_trunc(chain_poset(pi, alpha), N)
                if via_M != via_eta or truncate(via_M, N) != enum:
                    bad.append((pi, alpha))
    return not bad, f"{count - len(bad)}/{count} (pi, alpha) pairs agree", 120


def c6_products():
    bad, count = [], 0
    worked = product_eta((1,), (1,)) == {(1, 1): RatFunc(2), (2,): Q - 1}
    for wa in range(6):
        for wb in range(6 - wa):
            for alpha in compositions(wa):
                for beta in compositions(wb):
                    count += 1
                    a, b = eta_q_comp(alpha), eta_q_comp(beta)
                    p = product(a, b)
                    N = wa + wb
                    if eta_combination_to_M(product_eta(alpha, beta)) != p:
                        bad.append(("eta", alpha, beta))
                    elif N and truncate(p, N) != truncate(a, N) * truncate(b, N):
                        bad.append(("trunc", alpha, beta))
    data = [
        (pi, alpha)
        for w in range(1, 5)
        for alpha in compositions(w)
        for pi in permutations(range(1, len(alpha) + 1))
    ]
    for (pi, alpha), (sigma, beta) in cartesian(data, repeat=2):
        N = sum(alpha) + sum(beta)
        if N > 5:
            continue
        count += 1
        a, b = u_q_to_M(pi, alpha), u_q_to_M(sigma, beta)
        p = product(a, b)
        if product_u_q(pi, alpha, sigma, beta) != p or truncate(p, N) != truncate(a, N) * truncate(b, N):
            bad.append(("U_q", pi, alpha, sigma, beta))
    ok = worked and not bad
    return ok, f"worked identity {'holds' if worked else 'FAILS'}; {count - len(bad)}/{count} products agree", 180


def c7_conversions():
    bad = []
    for s in range(1, 6):
        for I in subsets_revlex(s):
            if eta_combination_to_M(M_to_eta_q(eta_q_set(I))) != eta_q_set(I):
                bad.append(("EM/ME", str(I)))
            if eta_combination_to_M(M_to_eta_q(M_set(I))) != M_set(I):
                bad.append(("ME/EM", str(I)))
            el = QSymElem.zero()
            for J, c in eta_to_L(I).items():
                el = el + L_set(J).scale(c)
            if el != eta_q_set(I):
                bad.append(("EL", str(I)))
            if eta_combination_to_M(L_to_eta(I)) != L_set(I):
                bad.append(("LE", str(I)))
            if duality_f(L_set(I), s) != eta_q_set(I):
                bad.append(("f(L)", str(I)))
            m = M_set(I)
            if duality_f(duality_f(m, s), s) != m.scale((Q + 1) ** (s + 1)):
                bad.append(("f^2", str(I)))
    return not bad, f"failures={bad[:4]}", 60


def c8_antipode():
    bad_eta, bad_lq, total = [], [], 0
    for s in range(1, 6):
        for I in subsets_revlex(s):
            total += 1
            lhs, rhs = antipode_eta_identity(I)
            if lhs != rhs:
                bad_eta.append(str(I))
            lhs, rhs = antipode_lq_identity(I)
            if lhs != rhs:
                bad_lq.append(str(I))
    detail = (
        f"eta_q identity: {total - len(bad_eta)}/{total}; "
        f"L_q identity: {total - len(bad_lq)}/{total} (first failures {bad_lq[:3]})"
    )
    return not bad_eta and not bad_lq, detail, 60


def c9_specializations():
    bad = []
    for s in range(1, 6):
        for J in subsets_revlex(s):
            if eta_q_set(J).specialize(0) != E_set(J) or eta_q_set(J).specialize(1) != eta_set(J):
                bad.append(("eta", str(J)))
            if L_q_set(J).specialize(0) != L_set(J) or L_q_set(J).specialize(1) != K_set(peak_of_set(J)):
                bad.append(("L_q", str(J)))
            rhs = QSymElem.zero()
            for U in subsets_revlex(s):
                if U.members <= J.members:
                    rhs = rhs + E_set(U).scale((-1) ** len(U))
            if rhs != L_set(J):
                bad.append(("L=sum E", str(J)))
            if peak_of_set(J) == J:
                rhs = QSymElem.zero()
                for V in subsets_revlex(s):
                    if V.members <= J.members:
                        W = type(J)(s, V.members | frozenset(v - 1 for v in V.members))
                        rhs = rhs + eta_set(W).scale((-1) ** len(V))
                if rhs != K_set(J):
                    bad.append(("K=sum eta", str(J)))
                if truncate(K_set(J), s) != K_defining_sum(s, J.members, s):
                    bad.append(("K oracle", str(J)))
            if truncate(L_set(J), s) != L_defining_sum(s, J.members, s):
                bad.append(("L oracle", str(J)))
    return not bad, f"failures={bad[:4]}", 60


def c10_basis_evidence():
    bad = []
    for n in range(1, 7):
        rep = basis_evidence(n, SAMPLES)
        ok = (
            rep["product_of_blocks_ok"]
            and rep["factors"]["unit_residual"]
            and rep["zero_at_q=-1"]
            and (rep["zero_at_q=1"] or n < 2)
            and rep["nonzero_at_samples"]
        )
        if not ok:
            bad.append(n)
    return not bad, f"failing n={bad}", 60


def c11_sample_poset():
    P = poset_from_json(SAMPLE_POSET)
    bad = []
    for N in (2, 3):
        g = gamma_q_trunc(P, N)
        checks = {
            "quasisymmetric": is_quasisymmetric(g),
            "q=0": g.map_coeffs(lambda c: RatFunc.from_fraction(eval_at(c, 0))) == gamma_classical_trunc(P, N),
            "q=1": g.map_coeffs(lambda c: RatFunc.from_fraction(eval_at(c, 1))) == gamma_enriched_trunc(P, N),
            "linear extensions": g == linear_extension_sum(P, N),
        }
        bad += [f"N={N} {k}" for k, v in checks.items() if not v]
    return not bad, f"failures={bad}", 60


CRITERIA = [
    ("1 B_4 reproduction", c1_b4),
    ("2 degree-3 inversion", c2_inverse),
    ("3 determinant formula n=2..7", c3_det_formula),
    ("4 block recurrences n=2..6", c4_recurrences),
    ("5 U^q oracle equivalence", c5_u_q_oracle),
    ("6 product coherence", c6_products),
    ("7 basis conversions and duality", c7_conversions),
    ("8 antipode identities", c8_antipode),
    ("9 specializations", c9_specializations),
    ("10 basis theorem evidence", c10_basis_evidence),
    ("11 five-vertex sample poset", c11_sample_poset),
]


def evaluate(fn):
    start = time.perf_counter()
    ok, detail, limit = fn()
    elapsed = time.perf_counter() - start
    in_time = elapsed < limit
    return ok and in_time, f"{detail}; {elapsed:.2f}s (limit {limit}s)"


@pytest.mark.parametrize("name, fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, fn, capsys):
    ok, detail = evaluate(fn)
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, fn in CRITERIA:
        ok, detail = evaluate(fn)
        failed += not ok
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}")
    sys.exit(1 if failed else 0)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enriched_qsym.coeff import ONE, Q, RatFunc, ZERO, parse_ratfunc, q_factorial
from enriched_qsym.matrices import (
    QMatrix,
    SingularMatrixError,
    aux_sequence,
    basis_evidence,
    build_An,
    build_Bn,
    det,
    det_An_closed_form,
    det_An_recurrence,
    det_bareiss,
    det_Bn,
    det_formula_check,
    det_interpolation,
    factor_report,
    invert,
    invert_Bn,
    recdet_check,
    verify_block_recurrences,
)
from enriched_qsym.verify import REFERENCE_B4, REFERENCE_INVERSE_3


def grid(rows):
    return [[parse_ratfunc(x) for x in r] for r in rows]


class TestBuild:
    def test_B4(self):
        assert build_Bn(4).entries == grid(REFERENCE_B4)

    def test_B4_row(self):
        assert build_Bn(4).entries[6] == [ONE, ZERO, Q - 1, -Q, Q - 1, ZERO, (Q - 1) ** 2, -Q * (Q - 1)]

    def test_small(self):
        assert build_Bn(0).entries == [[ONE]]
        assert build_Bn(1).entries == [[ONE]]
        assert build_Bn(2).entries == [[ONE, ZERO], [ONE, Q - 1]]
        assert build_An(1).entries == [[ONE]]
        assert build_An(2).entries == [[Q - 1]]
        assert build_An(3).entries == [[Q - 1, -Q], [Q - 1, (Q - 1) ** 2]]

    def test_lower_block_triangular(self):
        B = build_Bn(5)
        half = 8
        assert all(B[i, j] == ZERO for i in range(half) for j in range(half, 16))

    def test_numeric_q(self):
        assert build_Bn(3, RatFunc(2)) == build_Bn(3).specialize(2)

    def test_text_dump(self):
        text = build_Bn(2).to_text().splitlines()
        assert text == ["cols: {}, {1}", "{}: 1, 0", "{1}: 1, -1 + q"]
        assert build_Bn(2).to_json()["rows"] == [["1", "0"], ["1", "-1 + q"]]


@pytest.mark.parametrize("n", range(2, 7))
def test_block_recurrences(n):
    report = verify_block_recurrences(n)
    assert report["ok"], report


class TestDeterminants:
    def test_examples(self):
        assert det(build_Bn(2)) == Q - 1
        assert det(build_An(3)) == (Q - 1) * ((Q - 1) ** 2 + Q)
        assert det(QMatrix.identity(4)) == ONE
        assert det(build_An(3)) == -RatFunc(q_factorial(3, negate=True)) * (-1) ** 3 * -1

    def test_formula_small_n(self):
        for n in (2, 3):
            assert det_formula_check(n)["formula_ok"]

    @pytest.mark.parametrize("n", range(2, 7))
    def test_methods_agree(self, n):
        A = build_An(n)
        assert det_interpolation(A) == det_bareiss(A)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_Bn_is_product_of_blocks(self, n):
        assert det_bareiss(build_Bn(n)) == det_Bn(n)

    @pytest.mark.parametrize("n", range(2, 8))
    def test_exact_recurrence_and_closed_form(self, n):
        d = det_bareiss(build_An(n))
        assert det_An_recurrence(n) == d
        assert det_An_closed_form(n) == d

    def test_recurrence_without_power_fails_at_four(self):
        assert det_An_recurrence(4, exact_power=False) != det_bareiss(build_An(4))
        ratio = det_bareiss(build_An(4)) / det_formula_check_value(4)
        assert ratio == Q - 1

    @pytest.mark.parametrize("n", range(3, 6))
    @pytest.mark.parametrize("a, b", [(1, 0), (0, 1), (2, -3), (Fraction(1, 2), 5)])
    def test_recdet(self, n, a, b):
        assert recdet_check(n, RatFunc.from_fraction(Fraction(a)), RatFunc.from_fraction(Fraction(b)))

    def test_aux_sequence(self):
        seq = aux_sequence(4)
        assert seq[0] == (ONE, ZERO)
        assert seq[1] == (Q - 1, Q)
        for i, (a, b) in enumerate(seq):
            assert (Q - 1) * a + b == (Q ** (i + 2) - (-1) ** (i + 2)) / (Q + 1)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            det(build_An(2), "laplace")


def det_formula_check_value(n):
    return parse_ratfunc(det_formula_check(n, interpolation=False)["formula"])


class TestInverse:
    def test_degree_three(self):
        assert invert_Bn(3).entries == grid(REFERENCE_INVERSE_3)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_inverse(self, n):
        B = build_Bn(n)
        assert invert_Bn(n) @ B == QMatrix.identity(B.dim)

    def test_singular_at_one(self):
        with pytest.raises(SingularMatrixError, match="q = 1"):
            invert_Bn(3, RatFunc(1))

    def test_generic_singular(self):
        with pytest.raises(SingularMatrixError):
            invert(QMatrix([[1, 2], [2, 4]]))


class TestEvidence:
    def test_factor_report(self):
        rep = factor_report(RatFunc((Q + 1) ** 3 * (Q**2 - Q + 1)), 3)
        assert rep["exponents"] == {"[3]_(-q)": 1, "q+1": 3}
        assert rep["unit_residual"]
        rep = factor_report(RatFunc(Q**2 + 1), 3)
        assert not rep["unit_residual"] and rep["residual"] == "1 + q^2"

    def test_n2(self):
        rep = basis_evidence(2)
        assert rep["values"]["2"] != "0"
        assert rep["zero_at_q=1"]

    @pytest.mark.parametrize("n", range(1, 7))
    def test_full(self, n):
        rep = basis_evidence(n)
        assert rep["ok"], rep
        assert rep["zero_at_q=-1"]


@settings(max_examples=20)
@given(st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(lambda x: x not in (1, -1)))
def test_specialized_inverse(x):
    B = build_Bn(3, RatFunc.from_fraction(x))
    assert invert_Bn(3, RatFunc.from_fraction(x)) @ B == QMatrix.identity(4)

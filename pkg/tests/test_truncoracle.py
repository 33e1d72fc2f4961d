import pytest
from hypothesis import given

from enriched_qsym.coeff import Q, RatFunc
from enriched_qsym.combinat import compositions
from enriched_qsym.qsym import M, eta_q_comp, product
from enriched_qsym.truncoracle import (
    K_defining_sum,
    L_defining_sum,
    TruncPoly,
    eta_q_defining_sum,
    is_quasisymmetric,
    monomial_reconstruct,
    truncate,
)

from strategies import compositions as comp_st


def x(N, i):
    return TruncPoly.variable(N, i)


class TestArithmetic:
    def test_products(self):
        assert x(2, 1) * x(2, 2) == TruncPoly(2, {(1, 1): 1})
        assert (x(2, 1) + x(2, 2)) ** 2 == TruncPoly(2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})

    def test_scalar(self):
        assert (Q + 1) * x(1, 1) == TruncPoly(1, {(1,): Q + 1})

    def test_mismatched_variables(self):
        with pytest.raises(ValueError):
            x(2, 1) + x(3, 1)

    def test_render(self):
        assert str((Q + 1) * x(2, 1) * x(2, 2)) == "(1 + q) * x1 x2"


class TestQuasisymmetry:
    def test_elementary(self):
        e2 = x(3, 1) * x(3, 2) + x(3, 1) * x(3, 3) + x(3, 2) * x(3, 3)
        assert is_quasisymmetric(e2)
        assert not is_quasisymmetric(x(3, 1) * x(3, 2) + x(3, 1) * x(3, 3))

    def test_eta_q(self):
        assert is_quasisymmetric(eta_q_defining_sum((1, 1), 3))

    def test_reconstruct(self):
        p2 = x(3, 1) ** 2 + x(3, 2) ** 2 + x(3, 3) ** 2
        assert monomial_reconstruct(p2) == M((2,))
        e2 = x(3, 1) * x(3, 2) + x(3, 1) * x(3, 3) + x(3, 2) * x(3, 3)
        assert monomial_reconstruct(e2) == M((1, 1))
        assert monomial_reconstruct((Q + 1) * p2) == M((2,)).scale(Q + 1)

    def test_reconstruct_rejects(self):
        with pytest.raises(ValueError):
            monomial_reconstruct(x(2, 1))


@given(comp_st(max_weight=5, min_weight=1))
def test_truncate_round_trip(alpha):
    elem = eta_q_comp(alpha)
    N = sum(alpha)
    assert monomial_reconstruct(truncate(elem, N)) == elem


@pytest.mark.parametrize("s", range(1, 5))
def test_eta_q_definition_matches_expansion(s):
    for alpha in compositions(s):
        assert truncate(eta_q_comp(alpha), s) == eta_q_defining_sum(alpha, s)


def test_truncation_is_a_ring_map():
    a, b = M((2,)), M((1, 1))
    assert truncate(product(a, b), 4) == truncate(a, 4) * truncate(b, 4)


def test_L_and_K_small():
    # L_{empty}@2 is the complete homogeneous h_2; K_{empty}@1 = 2 x
    assert L_defining_sum(2, (), 2) == truncate(M((1, 1)) + M((2,)), 2)
    assert K_defining_sum(1, (), 2) == truncate(M((1,)).scale(RatFunc(2)), 2)

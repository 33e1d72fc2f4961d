import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enriched_qsym.coeff import Q, RatFunc
from enriched_qsym.posets import (
    SAMPLE_POSET,
    SignedValue,
    chain_poset,
    enumerate_classical,
    enumerate_enriched,
    gamma_classical_trunc,
    gamma_enriched_trunc,
    gamma_q_trunc,
    linear_extension_sum,
    linear_extensions,
    load_poset,
    make_poset,
    poset_from_json,
    poset_to_json,
)
from enriched_qsym.qsym import u_q_to_M
from enriched_qsym.truncoracle import TruncPoly, is_quasisymmetric, truncate, u_q_defining_sum

from strategies import permutations as perm_st


def signed(f):
    return tuple(int(v) for v in f)


def at(g, x):
    return g.map_coeffs(lambda c: RatFunc.from_fraction(c.eval_at(x)))


class TestSignedValues:
    def test_order(self):
        vals = [SignedValue.from_int(v) for v in (2, -1, -2, 1)]
        assert [int(v) for v in sorted(vals)] == [-1, 1, -2, 2]

    def test_rank_round_trip(self):
        for r in range(1, 9):
            assert SignedValue.from_rank(r).rank == r


class TestConstruction:
    def test_sample_poset(self, sample_poset_file):
        P = load_poset(sample_poset_file)
        assert P == poset_from_json(SAMPLE_POSET)
        assert P.n == 5
        assert P.eps == (1, 5, 2, 2, 2)
        assert (5, 2) in P.less_than  # 5 < 3 < 2
        assert P.covers() == sorted([(3, 2), (1, 2), (1, 4), (5, 3), (5, 1)])

    def test_antichain(self):
        P = make_poset(1)
        assert P.less_than == frozenset() and P.eps == (1,)

    def test_cycle_rejected(self):
        with pytest.raises(ValueError, match="not a partial order"):
            make_poset(2, [(1, 2), (2, 1)])

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"covers": []}))
        with pytest.raises(ValueError, match="malformed"):
            load_poset(path)

    def test_json_round_trip(self):
        P = poset_from_json(SAMPLE_POSET)
        assert poset_from_json(poset_to_json(P)) == P

    def test_chains(self):
        assert chain_poset((1, 2), (2, 2)).less_than == {(1, 2)}
        P = chain_poset((2, 1), (1, 1))
        assert P.less_than == {(2, 1)} and P.eps == (1, 1)
        P = chain_poset((1, 3, 2), (2, 1, 2))
        assert P.less_than == {(1, 3), (3, 2), (1, 2)}
        assert P.eps == (2, 2, 1)


class TestEnumeration:
    def test_classical(self):
        assert enumerate_classical(make_poset(1), 2) == [(1,), (2,)]
        assert enumerate_classical(chain_poset((2, 1), (1, 1)), 2) == [(2, 1)]
        assert sorted(enumerate_classical(chain_poset((1, 2), (1, 1)), 2)) == [(1, 1), (1, 2), (2, 2)]

    def test_enriched_single_vertex(self):
        assert sorted(signed(f) for f in enumerate_enriched(make_poset(1), 1)) == [(-1,), (1,)]

    def test_enriched_chains(self):
        # equal values along i <_P j must be positive if i < j, negative if i > j
        up = sorted(signed(f) for f in enumerate_enriched(chain_poset((1, 2), (1, 1)), 1))
        assert up == [(-1, 1), (1, 1)]
        down = sorted(signed(f) for f in enumerate_enriched(chain_poset((2, 1), (1, 1)), 1))
        assert down == [(-1, -1), (1, -1)]

    def test_gamma_examples(self):
        assert gamma_q_trunc(make_poset(1), 1) == TruncPoly(1, {(1,): Q + 1})
        assert gamma_q_trunc(make_poset(1, eps=[3]), 2) == TruncPoly(2, {(3, 0): Q + 1, (0, 3): Q + 1})
        assert gamma_q_trunc(chain_poset((1, 2), (1, 1)), 1) == TruncPoly(1, {(2,): Q + 1})
        assert gamma_q_trunc(chain_poset((2, 1), (1, 1)), 1) == TruncPoly(1, {(2,): Q * (Q + 1)})

    def test_numeric_q(self):
        P = chain_poset((2, 1), (1, 1))
        assert gamma_q_trunc(P, 2, 3) == at(gamma_q_trunc(P, 2), 3)

    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_specializations_sample_poset(self, N):
        P = poset_from_json(SAMPLE_POSET)
        g = gamma_q_trunc(P, N)
        assert at(g, 0) == gamma_classical_trunc(P, N)
        assert at(g, 1) == gamma_enriched_trunc(P, N)
        assert is_quasisymmetric(g)


def test_linear_extensions_sample_poset():
    P = poset_from_json(SAMPLE_POSET)
    exts = linear_extensions(P)
    assert exts == sorted(exts)
    for pi in exts:
        pos = {v: i for i, v in enumerate(pi)}
        assert all(pos[a] < pos[b] for a, b in P.less_than)
    assert len(exts) == 5


@settings(max_examples=25)
@given(perm_st(max_n=3))
def test_chain_gamma_matches_closed_form(pi):
    alpha = tuple(1 + (i % 2) for i in range(len(pi)))
    N = sum(alpha)
    g = gamma_q_trunc(chain_poset(pi, alpha), N)
    assert g == u_q_defining_sum(pi, alpha, N)
    assert g == truncate(u_q_to_M(pi, alpha), N)


@pytest.mark.parametrize("N", [2, 3])
def test_linear_extension_decomposition(N):
    P = poset_from_json(SAMPLE_POSET)
    assert gamma_q_trunc(P, N) == linear_extension_sum(P, N)
    # a poset with several incomparable pairs
    Q4 = make_poset(4, [(1, 3), (2, 3), (2, 4)], [1, 2, 1, 1])
    assert gamma_q_trunc(Q4, N) == linear_extension_sum(Q4, N)


@st.composite
def small_posets(draw):
    n = draw(st.integers(1, 4))
    labels = draw(st.permutations(range(1, n + 1)))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = draw(st.lists(st.integers(1, 2), min_size=n, max_size=n))
    return make_poset(n, [(labels[i], labels[j]) for i, j in chosen], weights)


@settings(max_examples=60)
@given(small_posets(), st.integers(1, 3))
def test_linear_extension_sum_on_small_posets(P, N):
    assert gamma_q_trunc(P, N) == linear_extension_sum(P, N)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rangecluster import VotingMatrices, merge_mapping, vote_and_merge


def votes_from(vp, vm):
    return VotingMatrices(np.asarray(vp, np.int64), np.asarray(vm, np.int64))


def test_all_zero_votes_no_merge():
    votes = votes_from(np.zeros((2, 2)), np.zeros((2, 2)))
    result = merge_mapping(votes)
    assert result.n_instances == 2
    assert result.merged_label_list.tolist() == [1, 2]


def test_single_pair_merges_on_majority():
    votes = votes_from([[0, 3], [3, 0]], [[0, 1], [1, 0]])
    result = merge_mapping(votes)
    assert result.n_instances == 1
    assert result.merged_label_list.tolist() == [1, 1]


def test_transitive_chain_through_row_folding():
    # 0-1 and 1-2 attract, 0-2 repels; after 0 and 1 fuse, 2 is absorbed
    # when visited from the cluster's accumulated rows.
    vp = [[0, 3, 0], [3, 0, 10], [0, 10, 0]]
    vm = [[0, 1, 5], [1, 0, 0], [5, 0, 0]]
    result = merge_mapping(votes_from(vp, vm))
    assert result.n_instances == 1
    assert result.merged_label_list.tolist() == [1, 1, 1]


def test_empty_matrices():
    result = merge_mapping(VotingMatrices.zeros(0))
    assert result.n_instances == 0
    assert result.merged_label_list.size == 0


def test_single_label():
    result = merge_mapping(VotingMatrices.zeros(1))
    assert result.n_instances == 1
    assert result.merged_label_list.tolist() == [1]


def test_disjoint_pairs_stay_disjoint():
    vp = np.zeros((4, 4), np.int64)
    vp[0, 1] = vp[1, 0] = 2
    vp[2, 3] = vp[3, 2] = 2
    result = merge_mapping(votes_from(vp, np.zeros((4, 4))))
    assert result.n_instances == 2
    assert result.merged_label_list.tolist() == [1, 1, 2, 2]


def test_tie_does_not_merge():
    votes = votes_from([[0, 4], [4, 0]], [[0, 4], [4, 0]])
    assert merge_mapping(votes).n_instances == 2


def test_caller_matrices_untouched():
    vp = np.array([[0, 3], [3, 0]], np.int64)
    vm = np.zeros((2, 2), np.int64)
    votes = votes_from(vp.copy(), vm.copy())
    merge_mapping(votes)
    assert np.array_equal(votes.v_plus, vp)
    assert np.array_equal(votes.v_minus, vm)


def test_vote_and_merge_rewrites_image():
    votes = votes_from([[0, 3], [3, 0]], [[0, 1], [1, 0]])
    img = np.array([[0, 1, 2], [2, 0, 1]], np.int32)
    out, result = vote_and_merge(votes, img)
    assert result.n_instances == 1
    assert out.tolist() == [[0, 1, 1], [1, 0, 1]]
    # original untouched, zero pixels preserved
    assert img[0, 0] == 0 and img[0, 1] == 1


def test_vote_and_merge_label_bound_checked():
    votes = VotingMatrices.zeros(2)
    with pytest.raises(ValueError):
        vote_and_merge(votes, np.array([[3]]))


def square_votes(seed, m):
    rng = np.random.default_rng(seed)
    vp = rng.integers(0, 5, (m, m)).astype(np.int64)
    vm = rng.integers(0, 5, (m, m)).astype(np.int64)
    vp = vp + vp.T
    vm = vm + vm.T
    np.fill_diagonal(vp, 0)
    np.fill_diagonal(vm, 0)
    return votes_from(vp, vm)


@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
@settings(max_examples=100, deadline=None)
def test_partition_properties(seed, m):
    votes = square_votes(seed, m)
    result = merge_mapping(votes)
    mapped = result.merged_label_list
    assert 1 <= result.n_instances <= m
    # surjective onto 1..n_instances
    assert set(mapped.tolist()) == set(range(1, result.n_instances + 1))
    # cost bounds
    assert result.vote_evals <= m * m
    assert result.row_folds <= m


@given(st.integers(0, 2**32 - 1), st.integers(1, 10))
@settings(max_examples=50, deadline=None)
def test_all_zero_plus_keeps_every_label(seed, m):
    rng = np.random.default_rng(seed)
    vm = rng.integers(0, 5, (m, m)).astype(np.int64)
    vm = vm + vm.T
    np.fill_diagonal(vm, 0)
    result = merge_mapping(votes_from(np.zeros((m, m), np.int64), vm))
    assert result.n_instances == m


@given(st.integers(0, 2**32 - 1), st.integers(2, 10))
@settings(max_examples=50, deadline=None)
def test_connected_positive_graph_collapses_to_one(seed, m):
    # spanning chain of positive votes, zero negatives -> single instance
    rng = np.random.default_rng(seed)
    vp = np.zeros((m, m), np.int64)
    order = rng.permutation(m)
    for a, b in zip(order[:-1], order[1:]):
        w = int(rng.integers(1, 4))
        vp[a, b] += w
        vp[b, a] += w
    result = merge_mapping(votes_from(vp, np.zeros((m, m), np.int64)))
    assert result.n_instances == 1


@given(st.integers(0, 2**32 - 1), st.integers(1, 10))
@settings(max_examples=50, deadline=None)
def test_pixel_preservation(seed, m):
    rng = np.random.default_rng(seed)
    votes = square_votes(seed, m)
    img = rng.integers(0, m + 1, (6, 9)).astype(np.int32)
    out, _ = vote_and_merge(votes, img)
    assert np.array_equal(out > 0, img > 0)

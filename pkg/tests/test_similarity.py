import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp
from oracles import msim_oracle

from comove.similarity import (
    SimilarityPair,
    combine,
    cosine_matrix,
    distance_matrix,
    dissimilarity,
    similarity_pair,
    write_msim_csv,
)

finite = st.floats(-100, 100, allow_nan=False, width=64)


@st.composite
def feature_sets(draw, max_agents=8):
    n = draw(st.integers(1, max_agents))
    d = draw(st.integers(2, 8).map(lambda k: 2 * k))
    return draw(hnp.arrays(np.float64, (n, d), elements=finite))


@st.composite
def similarity_pairs(draw):
    n = draw(st.integers(1, 10))
    cos = draw(hnp.arrays(np.float64, (n, n), elements=st.floats(-1, 1)))
    dist = draw(hnp.arrays(np.float64, (n, n), elements=st.floats(0, 1)))
    cos = (cos + cos.T) / 2
    dist = (dist + dist.T) / 2
    np.fill_diagonal(cos, 1.0)
    np.fill_diagonal(dist, 0.0)
    return SimilarityPair(cos, dist)


@pytest.mark.parametrize("a, b, expected", [
    ([1, 2, 3, 4], [1, 2, 3, 4], 1.0),
    ([1, 0, 0, 0], [0, 1, 0, 0], 0.0),
    ([1, 1], [-1, -1], -1.0),
])
def test_cosine_examples(a, b, expected):
    assert cosine_matrix(np.array([a, b], float))[0, 1] == pytest.approx(expected, abs=1e-15)


def test_zero_vector_has_zero_cosine():
    cos = cosine_matrix(np.array([[0.0, 0.0], [1.0, 2.0]]))
    assert cos.tolist() == [[0.0, 0.0], [0.0, 1.0]]


def test_identical_agents_give_zero_distance():
    assert distance_matrix(np.array([[1.0, 2.0], [1.0, 2.0]])).tolist() == [[0, 0], [0, 0]]


def test_collinear_distances_normalize():
    d = distance_matrix(np.array([[0.0, 0.0], [3.0, 4.0], [6.0, 8.0]]))
    assert sorted({round(v, 12) for v in d.ravel()}) == [0.0, 0.5, 1.0]


def test_distance_matches_pairwise_oracle(rng):
    f = rng.normal(size=(10, 30))
    d = distance_matrix(f)
    brute = np.array([[np.sqrt(((f[i] - f[j]) ** 2).sum()) for j in range(10)] for i in range(10)])
    assert np.allclose(d, brute / brute.max(), rtol=0, atol=1e-12)


@pytest.mark.parametrize("cos, dist, expected", [(1.0, 0.5, 0.0), (0.0, 0.5, 0.5), (-1.0, 0.3, 0.0)])
def test_combine_examples(cos, dist, expected):
    p = SimilarityPair(np.array([[1.0, cos], [cos, 1.0]]), np.array([[0.0, dist], [dist, 0.0]]))
    assert combine(p)[0, 1] == pytest.approx(expected, abs=1e-15)


def test_combine_shape_mismatch():
    with pytest.raises(ValueError):
        combine(SimilarityPair(np.eye(2), np.zeros((3, 3))))


def test_msim_matches_loop_oracle(rng):
    for _ in range(20):
        f = rng.normal(size=(rng.integers(2, 12), 2 * rng.integers(2, 10)))
        assert np.allclose(dissimilarity(f), msim_oracle(f.tolist()), rtol=0, atol=1e-12)


def test_msim_csv_dump(tmp_path):
    path = tmp_path / "m.csv"
    write_msim_csv(np.array([[0.0, 0.25], [0.25, 0.0]]), path)
    assert path.read_text() == "0.0,0.25\n0.25,0.0\n"


@given(similarity_pairs())
def test_combine_range_and_zero_cases(p):
    m = combine(p)
    assert np.all((m >= 0) & (m <= 1))
    assert np.all(np.diag(m) == 0)
    assert np.all(m[np.abs(p.cosine) == 1] == 0)
    assert np.all(m[p.distance == 0] == 0)


@given(similarity_pairs(), st.floats(0, 1))
def test_combine_monotone_in_distance(p, bump):
    bigger = np.minimum(p.distance + bump, 1.0)
    np.fill_diagonal(bigger, 0.0)
    assert np.all(combine(SimilarityPair(p.cosine, bigger)) >= combine(p))


@given(feature_sets())
def test_pair_invariants(f):
    p = similarity_pair(f)
    assert np.allclose(p.cosine, p.cosine.T) and np.allclose(p.distance, p.distance.T)
    assert np.all(np.abs(p.cosine) <= 1) and np.all(np.diag(p.distance) == 0)
    nonzero = np.linalg.norm(f, axis=1) > 0
    assert np.all(np.diag(p.cosine)[nonzero] == 1)
    assert p.distance.max() in (0.0, 1.0)


@given(feature_sets(), st.randoms(use_true_random=False))
def test_permutation_equivariance(f, rnd):
    perm = list(range(f.shape[0]))
    rnd.shuffle(perm)
    m = dissimilarity(f)
    assert np.allclose(dissimilarity(f[perm]), m[np.ix_(perm, perm)], rtol=0, atol=1e-12)


@given(feature_sets())
def test_duplicated_agents_are_doubly_zero(f):
    doubled = np.vstack([f, f[:1]])
    m = dissimilarity(doubled)
    assert m[0, -1] == 0.0

import itertools

from hypothesis import given, strategies as st

from quadrifold.gfpoly import gf, linalg

F5 = gf(5)
F9 = gf(3, 2)


def matrices(F, max_rows=4, max_cols=5):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.lists(st.integers(0, F.q - 1), min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]))


@given(st.sampled_from([F5, F9]).flatmap(lambda F: st.tuples(st.just(F), matrices(F))))
def test_kernel_dimension_and_vectors(arg):
    F, M = arg
    n = len(M[0])
    ker = linalg.kernel(F, M, n)
    assert len(ker) + linalg.rank(F, M) == n
    for v in ker:
        assert all(linalg.dot(F, row, v) == 0 for row in M)
    assert linalg.rank(F, ker) == len(ker) if ker else True


@given(matrices(F5, 3, 3))
def test_rank_against_brute_force(M):
    F = F5
    n = len(M[0])
    # size of the row space, counted by brute force
    span = set()
    for coefs in itertools.product(range(F.q), repeat=len(M)):
        v = tuple(sum(c * row[j] for c, row in zip(coefs, M)) % F.p for j in range(n))
        span.add(v)
    assert len(span) == F.q ** linalg.rank(F, M)


@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_and_inverse(M):
    F = F5
    d = linalg.det(F, M)
    assert (d != 0) == (linalg.rank(F, M) == 3)
    if d:
        inv = linalg.inverse(F, M)
        prod = [[sum(M[i][k] * inv[k][j] for k in range(3)) % 5 for j in range(3)] for i in range(3)]
        assert prod == [[int(i == j) for j in range(3)] for i in range(3)]


def test_rref_is_reduced():
    F = F5
    red, piv = linalg.rref(F, [[2, 4, 1], [1, 2, 4]])
    assert piv == [0, 2]
    assert red == [[1, 2, 0], [0, 0, 1]]

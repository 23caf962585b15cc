import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lang.errors import DimensionMismatch, IndexOutOfRange, NoMeet
from usage_ops.linalg import UsageAlgebra, UsageMatrix, all_vectors
from usage_ops.semiring import LIN01W, MOD01BOX, NAT, TRIVIAL

FINITE = [TRIVIAL, LIN01W, MOD01BOX]


def usages(sr):
    return st.sampled_from(sr.elements())


def matrices(sr, rows, cols):
    return st.lists(st.lists(usages(sr), min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(
        lambda rs: UsageMatrix.from_rows(rs, cols))


def test_basis_vectors():
    assert UsageAlgebra(LIN01W).basis(3, 1) == ("0", "1", "0")
    assert UsageAlgebra(LIN01W).basis(1, 0) == ("1",)
    assert UsageAlgebra(MOD01BOX).basis(4, 3) == ("0", "0", "0", "1")
    with pytest.raises(IndexOutOfRange):
        UsageAlgebra(LIN01W).basis(2, 2)


def test_identity():
    la = UsageAlgebra(LIN01W)
    assert la.identity(2).to_lists() == [["1", "0"], ["0", "1"]]
    assert la.identity(0).rows == 0
    assert la.identity(3).row(1) == la.basis(3, 1)


def test_products_by_hand():
    la = UsageAlgebra(LIN01W)
    m = UsageMatrix.from_rows([["1", "w"]], 2)
    n = UsageMatrix.from_rows([["1"], ["0"]], 1)
    assert la.mat_mul(m, n).to_lists() == [["1"]]
    diag = UsageMatrix.from_rows([["1", "0"], ["0", "w"]], 2)
    assert la.vec_mat_mul(("1", "w"), diag) == ("1", "w")

    nat = UsageAlgebra(NAT)
    assert nat.mat_mul(UsageMatrix.from_rows([[2, 3]], 2), UsageMatrix.from_rows([[1], [1]], 1)).to_lists() == [[5]]


def test_dimension_errors():
    la = UsageAlgebra(LIN01W)
    with pytest.raises(DimensionMismatch):
        la.add(("0",), ("0", "1"))
    with pytest.raises(DimensionMismatch):
        la.mat_mul(la.identity(2), la.identity(3))
    with pytest.raises(DimensionMismatch):
        UsageMatrix.from_rows([["0", "1"], ["0"]], 2)
    with pytest.raises(DimensionMismatch):
        la.vstack(la.identity(2), la.identity(3))
    with pytest.raises(IndexOutOfRange):
        la.reindex(la.identity(2), [2], [0])


def test_pointwise():
    la = UsageAlgebra(LIN01W)
    assert la.leq(("w", "w"), ("0", "1"))
    assert la.first_failure(("1", "1"), ("1", "0")) == 1
    assert la.add(("1", "0"), la.zeros(2)) == ("1", "0")
    assert la.meet(("0", "1"), ("1", "1")) == ("w", "1")
    assert UsageAlgebra(MOD01BOX).scale("#", ("1", "0")) == ("#", "0")
    with pytest.raises(NoMeet):
        UsageAlgebra(NAT).meet((1,), (2,))
    assert la.show(("w", "1")) == "(w, 1)"


def test_reindex():
    la = UsageAlgebra(LIN01W)
    assert la.reindex(la.identity(2), [0, 1], [0, 1]) == la.identity(2)
    constant = la.reindex(la.identity(3), [0, 0, 0], [0, 1, 2])
    assert all(constant.row(i) == la.basis(3, 0) for i in range(3))
    inl = la.reindex(la.identity(3), [0, 1], [0, 1, 2])
    assert inl.to_lists() == [["1", "0", "0"], ["0", "1", "0"]]


def test_block_layout():
    la = UsageAlgebra(MOD01BOX)
    assert la.block_diag(la.identity(1), la.identity(1)) == la.identity(2)
    single = la.vstack(la.identity(2), la.row_matrix(("1", "0")))
    assert single.to_lists() == [["1", "0"], ["0", "1"], ["1", "0"]]
    assert la.hstack(la.identity(1), la.zero_matrix(1, 2)).to_lists() == [["1", "0", "0"]]
    assert la.show_matrix(la.identity(2)) == "[[1, 0], [0, 1]]"


def test_matrices_are_read_only():
    m = UsageAlgebra(LIN01W).identity(2)
    with pytest.raises(ValueError):
        m.entries[0, 0] = "w"


@pytest.mark.parametrize("sr", FINITE, ids=lambda s: s.name)
def test_identity_and_basis_laws_exhaustively(sr):
    la = UsageAlgebra(sr)
    for n in range(1, 3):
        for rows in itertools.product(list(all_vectors(sr, n)), repeat=n):
            m = UsageMatrix.from_rows(rows, n)
            assert la.mat_mul(m, la.identity(n)) == m
            assert la.mat_mul(la.identity(n), m) == m
            for j in range(n):
                assert la.vec_mat_mul(la.basis(n, j), m) == m.row(j)


@pytest.mark.parametrize("sr", FINITE, ids=lambda s: s.name)
def test_bind_condition_block_product(sr):
    la = UsageAlgebra(sr)
    for q in all_vectors(sr, 2):
        for r in all_vectors(sr, 1):
            for psi_rows in itertools.product(list(all_vectors(sr, 2)), repeat=2):
                psi = UsageMatrix.from_rows(psi_rows, 2)
                block = la.block_diag(psi, la.identity(1))
                assert la.vec_mat_mul(tuple(q) + tuple(r), block) == la.vec_mat_mul(q, psi) + tuple(r)


@pytest.mark.parametrize("sr", FINITE, ids=lambda s: s.name)
def test_bind_preserves_env_validity(sr):
    la = UsageAlgebra(sr)
    for psi_rows in itertools.product(list(all_vectors(sr, 2)), repeat=2):
        psi = UsageMatrix.from_rows(psi_rows, 2)
        wide = la.block_diag(psi, la.identity(1))
        for q in all_vectors(sr, 2):
            image = la.vec_mat_mul(q, psi)
            for p in all_vectors(sr, 2):
                if not la.leq(p, image):
                    continue
                for r in all_vectors(sr, 1):
                    assert la.leq(tuple(p) + tuple(r), la.vec_mat_mul(tuple(q) + tuple(r), wide))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(FINITE).flatmap(lambda sr: st.tuples(
    st.just(sr), st.lists(usages(sr), min_size=2, max_size=2), st.lists(usages(sr), min_size=2, max_size=2),
    usages(sr), matrices(sr, 2, 3))))
def test_traversal_directions(case):
    sr, v, w, r, psi = case
    la = UsageAlgebra(sr)
    # (v + w)Ψ and vΨ + wΨ agree, as do (r·v)Ψ and r·(vΨ), for the shipped instances
    assert la.vec_mat_mul(la.add(v, w), psi) == la.add(la.vec_mat_mul(v, psi), la.vec_mat_mul(w, psi))
    assert la.vec_mat_mul(la.scale(r, v), psi) == la.scale(r, la.vec_mat_mul(v, psi))


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(FINITE).flatmap(lambda sr: st.tuples(
    st.just(sr), st.lists(usages(sr), min_size=3, max_size=3), st.lists(usages(sr), min_size=3, max_size=3),
    matrices(sr, 3, 2))))
def test_vector_product_is_monotone(case):
    sr, v, w, psi = case
    la = UsageAlgebra(sr)
    if la.leq(v, w):
        assert la.leq(la.vec_mat_mul(v, psi), la.vec_mat_mul(w, psi))


def test_all_vectors_needs_a_finite_carrier():
    assert len(list(all_vectors(LIN01W, 2))) == 9
    with pytest.raises(ValueError):
        all_vectors(NAT, 1)

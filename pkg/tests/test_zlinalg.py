from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import elementary_divisors
from bogomolov.zlinalg import (
    AbelianInvariants,
    SparseMatModN,
    extend_basis,
    howell_form,
    howell_from_rows,
    left_kernel,
    membership,
    quotient_invariants,
    recombine,
    smith_diagonal,
    smith_invariants,
    xgcd,
)


def _span(n, rows, ncols):
    out = set()
    for coeffs in product(range(n), repeat=len(rows)):
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % n for j in range(ncols))
        out.add(v)
    return out


small_mats = st.integers(2, 12).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.integers(1, 3).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, n - 1), min_size=c, max_size=c), min_size=0, max_size=3)
        ),
    )
)


@settings(max_examples=150, deadline=None)
@given(small_mats)
def test_howell_span_matches_enumeration(nm):
    n, rows = nm
    ncols = len(rows[0]) if rows else 2
    hb = howell_form(SparseMatModN.from_rows(n, ncols, rows))
    want = _span(n, rows, ncols) if rows else {(0,) * ncols}
    assert hb.span_size() == len(want)
    assert _span(n, hb.dense(), ncols) == want if hb.rows else want == {(0,) * ncols}
    for v in product(range(n), repeat=ncols):
        m = membership(list(v), hb)
        assert m.member == (v in want)
        if m.member:
            assert tuple(recombine(m.witness, hb)) == v


@settings(max_examples=100, deadline=None)
@given(small_mats, st.randoms(use_true_random=False))
def test_howell_form_is_canonical(nm, rnd):
    """Shuffling rows or adding combinations does not change the basis."""
    n, rows = nm
    if not rows:
        return
    ncols = len(rows[0])
    a = howell_form(SparseMatModN.from_rows(n, ncols, rows))
    extra = list(rows)
    rnd.shuffle(extra)
    k = [rnd.randrange(n) for _ in rows]
    extra.append([sum(c * r[j] for c, r in zip(k, rows)) % n for j in range(ncols)])
    b = howell_form(SparseMatModN.from_rows(n, ncols, extra))
    assert (a.rows, a.pivots) == (b.rows, b.pivots)
    for r, c in zip(a.rows, a.pivots):
        p = dict(r)[c]
        assert n % p == 0


def test_howell_needs_more_rows_than_echelon():
    # over Z/4 the span of (2, 1) contains (0, 2), which must be a basis row of its own
    hb = howell_from_rows(4, 2, [{0: 2, 1: 1}])
    assert hb.pivots == (0, 1)
    assert membership([0, 2], hb).member


def test_extend_basis_agrees_with_recomputation():
    rows = [{0: 3, 1: 1}, {1: 2, 2: 5}]
    more = [{0: 1, 2: 1}]
    a = extend_basis(howell_from_rows(6, 3, rows), more)
    b = howell_from_rows(6, 3, rows + more)
    assert (a.rows, a.pivots) == (b.rows, b.pivots)


@settings(max_examples=100, deadline=None)
@given(small_mats)
def test_left_kernel_vectors_annihilate(nm):
    n, rows = nm
    if not rows:
        return
    ncols = len(rows[0])
    ker = left_kernel([dict(enumerate(r)) for r in rows], ncols, n)
    for x in ker:
        assert all(sum(c * r[j] for c, r in zip(x, rows)) % n == 0 for j in range(ncols))
    # and they generate the whole kernel
    full = {x for x in product(range(n), repeat=len(rows))
            if all(sum(c * r[j] for c, r in zip(x, rows)) % n == 0 for j in range(ncols))}
    assert _span(n, ker, len(rows)) == full if ker else full == {(0,) * len(rows)}


def test_column_out_of_range():
    with pytest.raises(ValueError, match="out of range"):
        SparseMatModN.from_rows(5, 2, [{3: 1}])


def test_membership_dimension_mismatch():
    hb = howell_from_rows(3, 2, [{0: 1}])
    with pytest.raises(ValueError, match="dimension"):
        membership([1, 2, 3], hb)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert g >= 0 and s * a + t * b == g
    assert (a == 0 and b == 0) or (a % g == 0 and b % g == 0)


int_mats = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=200, deadline=None)
@given(int_mats)
def test_smith_diagonal_matches_oracle(mat):
    d = smith_diagonal(mat)
    got = sorted(x for x in d if x > 1)
    assert got == elementary_divisors(mat)
    nz = [x for x in d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda k: st.lists(st.lists(st.integers(-6, 6), min_size=k, max_size=k), min_size=k, max_size=k)))
def test_smith_product_is_determinant(mat):
    import numpy as np

    det = round(abs(np.linalg.det(np.array(mat, dtype=float))))
    if det == 0:
        with pytest.raises(ValueError, match="infinite"):
            smith_invariants(mat)
    else:
        assert smith_invariants(mat).order == det


def test_smith_modulus_reduction():
    # Z/12 modulo 8Z/12: cokernel Z/4
    assert smith_diagonal([[8]], 1, modulus=12) == [4]


def test_quotient_invariants_of_z4_by_2():
    upper = howell_from_rows(4, 1, [{0: 1}])
    assert quotient_invariants(upper, [{0: 2}]).as_list() == [2]
    assert quotient_invariants(upper, []).as_list() == [4]


def test_quotient_requires_containment():
    upper = howell_from_rows(4, 2, [{0: 1}])
    with pytest.raises(ValueError, match="not contained"):
        quotient_invariants(upper, [{1: 1}])


def test_abelian_invariants_validation():
    assert AbelianInvariants((2, 4)).order == 8
    with pytest.raises(ValueError):
        AbelianInvariants((4, 2))
    with pytest.raises(ValueError):
        AbelianInvariants((1,))

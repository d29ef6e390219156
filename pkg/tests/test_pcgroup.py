from itertools import product as iproduct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _groups import SMALL, small
from bogomolov.pcgroup import (
    Collector,
    InconsistentPresentation,
    PresentationError,
    bicyclic_subgroups,
    build_table,
    closure,
    cyclic_group,
    direct_product,
    is_normal,
    load_pcg,
    parse_presentation,
    quotient,
    structure,
    subgroup,
)
from bogomolov.verifier import data_dir

BUNDLED = [227, 1345, 242, 36, 1924, 417, 446, 950, 144, 138, 1544]


def bundled(i):
    return load_pcg(data_dir() / f"g128_{i}.pcg")


# ---------------------------------------------------------------- parsing


def test_case1_presentation_parses():
    p = parse_presentation((data_dir() / "g128_227.pcg").read_text())
    assert p.n == 7
    assert p.relative_orders == (2,) * 7
    assert p.power_relations[0] == ((4, 1),)  # g1^2 = g5


def test_empty_relations_give_elementary_abelian():
    t = build_table(parse_presentation("pcgroup 3\norders 2 2 2\n"))
    assert t.order == 8
    assert all(t.element_order(x) == 2 for x in range(1, 8))


@pytest.mark.parametrize(
    "src, fragment",
    [
        ("pcgroup 1\norders 2\ng1^2 = g1\n", "filtration"),
        ("pcgroup 2\norders 2 2\ng1^2 = g3\n", "out of range"),
        ("pcgroup 2\norders 2 2\ng1^2 = g2^5\n", "outside"),
        ("pcgroup 2\norders 2\n", "relative orders"),
        ("pcgroup 2\norders 2 2\nfoo\n", "line 3"),
    ],
)
def test_malformed_presentations_are_rejected(src, fragment):
    with pytest.raises(PresentationError, match=fragment):
        parse_presentation(src)


def test_inconsistent_presentation_names_a_triple():
    with pytest.raises(InconsistentPresentation, match=r"associativity fails for \("):
        build_table(parse_presentation("pcgroup 2\norders 2 2\ng1^2 = g2\n[g2,g1] = g2\n"))


def test_comments_and_blank_lines_are_ignored():
    src = "# header\npcgroup 3\n\norders 2 2 2   # three\n[g2,g1] = g3\n"
    assert build_table(parse_presentation(src)).order == 8


# ---------------------------------------------------------------- tables


def test_case1_table_order_and_square():
    t = bundled(227)
    assert t.order == 128
    g1 = t.pc_gens[0]
    assert t.mul(g1, g1) == t.pc_gens[4]


@pytest.mark.parametrize("name", list(SMALL))
def test_small_tables_are_groups(name):
    t = small(name)
    p = t.product
    n = t.order
    assert all(sorted(p[a].tolist()) == list(range(n)) for a in range(n))
    for a, b, c in iproduct(range(n), repeat=3):
        assert p[p[a, b], c] == p[a, p[b, c]]
    assert all(p[a, t.inverse[a]] == 0 for a in range(n))


def test_d4_center_has_two_elements():
    center, derived, exp = structure(small("D4"))
    assert center.order == 2 and derived.order == 2 and exp == 4


def test_case1_structure():
    t = bundled(227)
    center, derived, exp = structure(t)
    g = t.pc_gens
    assert set(center.members) == set(closure(t, [g[4], g[5], g[6]]))
    assert center.order == 8
    assert exp == 8
    assert derived.order == 8


@pytest.mark.parametrize("i", BUNDLED)
def test_bundled_relations_and_defaults(i):
    """Displayed relations hold; every unstated commutator and power is trivial."""
    t = bundled(i)
    pcp = t.pcp
    g = t.pc_gens
    for k in range(pcp.n):
        want = t.index_of_word(pcp.power_relations.get(k, ()))
        assert t.power(g[k], pcp.relative_orders[k]) == want
    for j in range(pcp.n):
        for k in range(j):
            want = t.index_of_word(pcp.commutator_relations.get((j, k), ()))
            assert t.comm(g[j], g[k]) == want


@pytest.mark.parametrize("i", BUNDLED)
def test_center_times_quotient(i):
    t = bundled(i)
    center, derived, exp = structure(t)
    qt, _ = quotient(t, center)
    assert center.order * qt.order == t.order
    assert is_normal(t, derived)
    assert t.order % exp == 0


# ---------------------------------------------------------------- subgroups


def _brute_bicyclic(t):
    found = set()
    for a in range(t.order):
        for b in range(t.order):
            if t.mul(a, b) == t.mul(b, a):
                found.add(closure(t, [a, b]))
    return found


@pytest.mark.parametrize("name", ["C2xC2", "Q8", "D4", "C4xC2", "S3", "C2^3"])
def test_bicyclic_matches_pair_enumeration(name):
    t = small(name)
    got = bicyclic_subgroups(t)
    assert {s.members for s in got} == _brute_bicyclic(t)
    keys = [(s.order, s.members) for s in got]
    assert keys == sorted(keys)


def test_klein_four_has_five_bicyclic_subgroups():
    assert len(bicyclic_subgroups(small("C2xC2"))) == 5


def test_q8_bicyclic_are_cyclic():
    t = small("Q8")
    subs = bicyclic_subgroups(t)
    # 1, centre, three C4, and Q8 itself is not generated by a commuting pair
    assert [s.order for s in subs] == [1, 2, 4, 4, 4]


def test_case1_bicyclic_are_abelian_rank_two():
    t = bundled(227)
    for s in bicyclic_subgroups(t):
        gens = s.generators
        assert len(gens) <= 2
        if len(gens) == 2:
            a, b = gens
            assert t.mul(a, b) == t.mul(b, a)
        assert closure(t, gens) == s.members
        p = t.product[np.ix_(s.members, s.members)]
        assert np.array_equal(p, p.T)


def test_every_cyclic_subgroup_is_listed():
    t = bundled(1544)
    listed = {s.members for s in bicyclic_subgroups(t)}
    for x in range(t.order):
        assert closure(t, [x]) in listed


# ---------------------------------------------------------------- quotients and products


def test_quotient_by_whole_group_is_trivial():
    t = small("D4")
    qt, proj = quotient(t, subgroup(t, range(t.order)))
    assert qt.order == 1 and set(proj) == {0}


def test_case1_central_quotient_has_order_16():
    t = bundled(227)
    center, _, _ = structure(t)
    qt, proj = quotient(t, center)
    assert qt.order == 16
    # projection is a homomorphism with kernel the centre
    for a in range(0, t.order, 7):
        for b in range(0, t.order, 5):
            assert proj[t.mul(a, b)] == qt.mul(proj[a], proj[b])
    assert {x for x in range(t.order) if proj[x] == 0} == set(center.members)


def test_d4_mod_center_is_klein():
    t = small("D4")
    center, _, _ = structure(t)
    qt, _ = quotient(t, center)
    assert qt.order == 4
    assert all(qt.element_order(x) == 2 for x in range(1, 4))


def test_non_normal_quotient_is_refused():
    t = small("S3")
    with pytest.raises(ValueError, match="not normal"):
        quotient(t, subgroup(t, [t.pc_gens[0]]))


def test_direct_product_with_trivial_group():
    t = small("Q8")
    d = direct_product(t, small("C1"))
    assert d.order == 8
    c1, d1, e1 = structure(t)
    c2, d2, e2 = structure(d)
    assert (c1.order, d1.order, e1) == (c2.order, d2.order, e2)


def test_c2_times_c2_is_klein():
    d = direct_product(small("C2"), small("C2"))
    assert d.order == 4 and all(d.element_order(x) == 2 for x in range(1, 4))


def test_direct_product_bound():
    with pytest.raises(ValueError, match="exceeds"):
        direct_product(bundled(227), small("C8"), bound=512)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=40))
def test_cyclic_groups(m):
    t = cyclic_group(m)
    assert t.order == m
    assert max(t.element_orders) == m
    center, derived, exp = structure(t)
    assert center.order == m and derived.order == 1 and exp == m


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(BUNDLED), st.integers(0, 127), st.integers(0, 127), st.integers(0, 127))
def test_collection_is_confluent(i, a, b, c):
    """A fresh collector reaches the same normal form for (ab)c, a(bc) and the table."""
    t = bundled(i)
    col = Collector(t.pcp)
    ab, _ = col.mul_word(a, col.letters_of(b))
    left, _ = col.mul_word(ab, col.letters_of(c))
    bc, _ = col.mul_word(b, col.letters_of(c))
    right, _ = col.mul_word(a, col.letters_of(bc))
    assert left == right == t.mul(t.mul(a, b), c)

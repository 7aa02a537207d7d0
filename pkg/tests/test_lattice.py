import itertools
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylwalk.errors import GroupCapExceeded, NotInRootSpan, UnsupportedType
from weylwalk.lattice import (Weight, build_root_system, decompose_in_simple_roots, dot, enumerate_weyl,
                              format_weight, is_dominant, parse_weight, positive_root_count, simple_reflection,
                              weyl_group_order, weyl_orbit)

from oracle import dominant2, to2

SUPPORTED = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("B", 4), ("C", 2), ("C", 3),
             ("D", 3), ("D", 4), ("D", 5), ("E", 6), ("E", 7)]
SMALL = [t for t in SUPPORTED if t[0] != "E"]


def W(*c):
    return Weight(Q(x) for x in c)


def h(*c):
    return Weight(Q(x, 2) for x in c)


def brute_roots(fam, d):
    """Every root of a classical system, listed from its coordinate description."""
    D = d + 1 if fam == "A" else d
    out = set()
    for i, j in itertools.permutations(range(D), 2):
        if fam == "A":
            v = [0] * D
            v[i], v[j] = 1, -1
            out.add(tuple(v))
        else:
            for a, b in itertools.product((1, -1), repeat=2):
                v = [0] * D
                v[i], v[j] = a, b
                out.add(tuple(v))
    for i in range(D):
        for a in (1, -1):
            v = [0] * D
            if fam == "B":
                v[i] = a
                out.add(tuple(v))
            elif fam == "C":
                v[i] = 2 * a
                out.add(tuple(v))
    return out


def test_b3_example_data():
    rs = build_root_system("B", 3)
    assert rs.simple_roots == (W(1, -1, 0), W(0, 1, -1), W(0, 0, 1))
    assert rs.fundamental_weights == (W(1, 0, 0), W(1, 1, 0), h(1, 1, 1))
    assert len(rs.positive_roots) == 9
    assert set(rs.positive_roots) == {W(1, 0, 0), W(0, 1, 0), W(0, 0, 1), W(1, 1, 0), W(1, -1, 0), W(1, 0, 1),
                                      W(1, 0, -1), W(0, 1, 1), W(0, 1, -1)}


def test_a1_smallest():
    rs = build_root_system("A", 1)
    assert rs.simple_roots == (W(1, -1),)
    assert rs.fundamental_weights == (W(1, 0),)
    assert rs.positive_roots == (W(1, -1),)


@pytest.mark.parametrize("label", ["B3", ("B", 3)])
def test_family_spellings(label):
    rs = build_root_system(*label) if isinstance(label, tuple) else build_root_system(label)
    assert rs == build_root_system("B", 3)


@pytest.mark.parametrize("fam,d", SUPPORTED)
def test_pairing_identity(fam, d):
    rs = build_root_system(fam, d)
    for i, w in enumerate(rs.fundamental_weights):
        for j, a in enumerate(rs.simple_roots):
            assert 2 * dot(w, a) / dot(a, a) == (1 if i == j else 0)


@pytest.mark.parametrize("fam,d", SUPPORTED)
def test_positive_root_counts(fam, d):
    rs = build_root_system(fam, d)
    assert len(rs.positive_roots) == positive_root_count(rs.family, d)
    assert len(set(rs.positive_roots)) == len(rs.positive_roots)
    for a in rs.positive_roots:
        c = decompose_in_simple_roots(rs, a)
        assert all(x >= 0 and x.denominator == 1 for x in c)


@pytest.mark.parametrize("fam,d", SMALL)
def test_roots_match_coordinate_description(fam, d):
    rs = build_root_system(fam, d)
    roots = {tuple(int(c) for c in a) for a in rs.positive_roots} | {tuple(-int(c) for c in a) for a in rs.positive_roots}
    assert roots == brute_roots(fam, d)


def test_c2_counts():
    rs = build_root_system("C", 2)
    assert len(rs.positive_roots) == 4


@pytest.mark.parametrize("fam,d", [("E", 8), ("F", 4), ("G", 2), ("B", 1), ("D", 2), ("Z", 3)])
def test_rejected_types(fam, d):
    with pytest.raises(UnsupportedType):
        build_root_system(fam, d)


def test_dominance_examples():
    b3 = build_root_system("B", 3)
    assert is_dominant(b3, W(1, 1, 0))
    assert not is_dominant(b3, W(1, 0, 1))
    assert is_dominant(build_root_system("A", 2), W(0, -1, -1))


@pytest.mark.parametrize("fam,d", SMALL)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_dominance_matches_chamber_inequalities(fam, d, data):
    rs = build_root_system(fam, d)
    D = rs.ambient_dim
    half = fam in ("B", "D") and data.draw(st.booleans())
    ints = data.draw(st.lists(st.integers(-4, 4), min_size=D, max_size=D))
    v = Weight(Q(2 * x + (1 if half else 0), 2) for x in ints)
    assert is_dominant(rs, v) == bool(dominant2(fam, d, [to2(v)])[0])


def test_simple_reflection_examples():
    rs = build_root_system("B", 3)
    assert simple_reflection(rs, 3, h(1, 1, 1)) == h(1, 1, -1)
    assert simple_reflection(rs, 2, h(1, 1, -1)) == h(1, -1, 1)
    assert simple_reflection(rs, 1, W(1, 1, 0)) == W(1, 1, 0)
    with pytest.raises(IndexError):
        simple_reflection(rs, 4, W(0, 0, 0))


@pytest.mark.parametrize("fam,d", SMALL)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_reflection_is_involutive_isometry(fam, d, data):
    rs = build_root_system(fam, d)
    i = data.draw(st.integers(1, d))
    v = Weight(Q(x) for x in data.draw(st.lists(st.integers(-5, 5), min_size=rs.ambient_dim, max_size=rs.ambient_dim)))
    r = simple_reflection(rs, i, v)
    assert simple_reflection(rs, i, r) == v
    assert dot(r, r) == dot(v, v)


def test_orbit_examples():
    b3 = build_root_system("B", 3)
    assert weyl_orbit(b3, h(1, 1, 1)) == {h(*s) for s in itertools.product((1, -1), repeat=3)}
    assert weyl_orbit(b3, W(0, 0, 0)) == {W(0, 0, 0)}
    assert weyl_orbit(build_root_system("A", 2), W(1, 0, 0)) == {W(1, 0, 0), W(0, 1, 0), W(0, 0, 1)}


@pytest.mark.parametrize("fam,d", SMALL)
def test_orbit_has_one_dominant_member(fam, d):
    rs = build_root_system(fam, d)
    v = Weight(Q(k - 1) for k in range(rs.ambient_dim))
    orb = weyl_orbit(rs, v)
    assert sum(is_dominant(rs, u) for u in orb) == 1
    assert rs.weyl_order % len(orb) == 0


@pytest.mark.parametrize("fam,d", [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 3), ("D", 4)])
def test_weyl_group_enumeration(fam, d):
    rs = build_root_system(fam, d)
    elems = list(enumerate_weyl(rs))
    assert len(elems) == weyl_group_order(rs.family, d) == rs.weyl_order
    assert len({m for m, _ in elems}) == len(elems)
    assert sum(s for _, s in elems) == 0
    # the sign is the determinant of the matrix
    for m, s in elems[:50]:
        assert round(np.linalg.det(np.array(m, dtype=float))) == s


def test_weyl_group_small_cases():
    a1 = list(enumerate_weyl(build_root_system("A", 1)))
    assert len(a1) == 2 and {s for _, s in a1} == {1, -1}
    assert len(list(enumerate_weyl(build_root_system("C", 2)))) == 8
    with pytest.raises(GroupCapExceeded):
        list(enumerate_weyl(build_root_system("E", 7), cap=1000))


def test_decompose_examples():
    rs = build_root_system("B", 3)
    d = h(1, 1, 1)
    assert decompose_in_simple_roots(rs, d - h(1, 1, -1)) == (0, 0, 1)
    assert decompose_in_simple_roots(rs, d - h(-1, -1, -1)) == (1, 2, 3)
    assert decompose_in_simple_roots(rs, W(0, 0, 0)) == (0, 0, 0)
    with pytest.raises(NotInRootSpan):
        decompose_in_simple_roots(build_root_system("A", 2), W(1, 0, 0))


def test_exceptional_group_orders():
    for d in (6, 7):
        rs = build_root_system("E", d)
        assert rs.weyl_order == {6: 51840, 7: 2903040}[d]
        assert len(rs.positive_roots) == {6: 36, 7: 63}[d]


@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(1, 4)), min_size=1, max_size=5))
def test_weight_text_round_trip(pairs):
    w = Weight(Q(a, b) for a, b in pairs)
    assert parse_weight(format_weight(w)) == w


def test_labels_and_back():
    for fam, d in SMALL:
        rs = build_root_system(fam, d)
        for w in rs.fundamental_weights:
            lab = rs.labels(w)
            assert rs.from_labels(lab, rs.central_part(w)) == w


@pytest.mark.parametrize("fam,d", SMALL)
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_orbit_is_weyl_stable(fam, d, data):
    rs = build_root_system(fam, d)
    labels = data.draw(st.lists(st.integers(-2, 2), min_size=d, max_size=d))
    orb = weyl_orbit(rs, rs.from_labels(labels))
    for i in range(1, d + 1):
        assert {simple_reflection(rs, i, v) for v in orb} == orb


@pytest.mark.parametrize("fam,d", SUPPORTED)
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_decompose_recomposes_exactly(fam, d, data):
    rs = build_root_system(fam, d)
    coeffs = data.draw(st.lists(st.integers(-4, 4), min_size=d, max_size=d))
    v = sum((a * c for a, c in zip(rs.simple_roots, coeffs)), Weight.zero(rs.ambient_dim))
    assert decompose_in_simple_roots(rs, v) == tuple(Q(c) for c in coeffs)

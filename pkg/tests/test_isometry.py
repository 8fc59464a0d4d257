import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudofree import groups as gr
from pseudofree import isometry as iso
from pseudofree.groups import CapacityError
from pseudofree.isometry import Rotation, WElement

import oracles

ORACLE_KIND = {
    "pairxpair": iso.FIX_FINITE,
    "spherexpair": iso.FIX_SPHERE_PAIR,
    "pairxsphere": iso.FIX_SPHERE_PAIR,
    "circlexcircle": iso.FIX_TORUS,
    "spherexsphere": iso.FIX_ALL,
    "finite": iso.FIX_FINITE,
    "sphere": iso.FIX_SPHERE,
}


def _oracle_kind(M6):
    kind, chi = oracles.fixed_set_kind(M6)
    if "empty" in kind:
        return iso.FIX_EMPTY, 0
    return ORACLE_KIND[kind], chi


def _rot(rng, n):
    """Rotation of finite order dividing n about a random axis."""
    axis = rng.normal(size=3)
    k = int(rng.integers(0, n))
    return Rotation.about(axis, 2 * math.pi * k / n)


def _random_element(rng):
    n = int(rng.integers(1, 9))
    return WElement(_rot(rng, n), _rot(rng, n), int(rng.integers(0, 2)), int(rng.integers(0, 2)))


elements = st.integers(0, 2 ** 32 - 1).map(lambda s: _random_element(np.random.default_rng(s)))


def test_sigma_involution():
    s = iso.sigma()
    assert iso.w_mul(s, s).is_identity()


def test_sigma_conjugation_switches():
    r1, r2 = Rotation.z(0.7), Rotation.about([1, 2, 3], 1.1)
    s = iso.sigma()
    g = iso.w_mul(iso.w_mul(s, iso.pair(r1, r2)), s)
    assert g.close(iso.pair(r2, r1))


def test_square_of_switching_element():
    rng = np.random.default_rng(3)
    for _ in range(3):
        s1, s2 = Rotation.about(rng.normal(size=3), rng.uniform(0, 6)), Rotation.about(rng.normal(size=3), rng.uniform(0, 6))
        # rotate first, then switch: the square is (s2 s1, s1 s2)
        q = iso.w_mul(iso.sigma(), iso.pair(s1, s2))
        assert iso.w_mul(q, q).close(iso.pair(s2 * s1, s1 * s2))
        # the normal-form order (switch first, then rotate) gives (s1 s2, s2 s1)
        q = WElement(s1, s2, 0, 1)
        assert iso.w_mul(q, q).close(iso.pair(s1 * s2, s2 * s1))
        # both agree with composing the 6x6 action twice
        assert np.allclose(q.matrix6() @ q.matrix6(), iso.w_mul(q, q).matrix6())


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_w_mul_associative_and_matches_matrices(a, b, c):
    left = iso.w_mul(iso.w_mul(a, b), c)
    right = iso.w_mul(a, iso.w_mul(b, c))
    assert left.close(right, 1e-8)
    assert np.allclose(iso.w_mul(a, b).matrix6(), a.matrix6() @ b.matrix6())
    assert iso.w_mul(a, iso.w_inv(a)).is_identity(1e-8)
    assert iso.w_mul(iso.w_identity(), a).close(a)


@settings(max_examples=60, deadline=None)
@given(elements, elements)
def test_phi_homomorphism(a, b):
    assert iso.phi(iso.w_mul(a, b)) == iso.phi(a) * iso.phi(b)
    m = np.array(iso.phi(a).matrix)
    assert any((m == s * P).all() for s in (1, -1) for P in (np.eye(2), np.array([[0, 1], [1, 0]])))


def test_phi_examples():
    assert iso.phi(iso.pair(Rotation.z(1.0), Rotation.z(2.0))).matrix == ((1, 0), (0, 1))
    assert iso.phi(iso.alpha()).matrix == ((-1, 0), (0, -1))
    assert iso.phi(iso.sigma()).matrix == ((0, 1), (1, 0))


def test_lefschetz_values():
    assert iso.lefschetz(iso.HomologyRep(0, 0)) == 4
    assert iso.lefschetz(iso.HomologyRep(1, 0)) == 0
    assert iso.lefschetz(iso.HomologyRep(0, 1)) == 2
    assert iso.lefschetz(iso.HomologyRep(1, 1)) == 2


def test_w_order():
    g = iso.pair(Rotation.z(2 * math.pi / 5), Rotation.z(4 * math.pi / 5))
    assert iso.w_order(g) == 5
    assert iso.w_order(iso.w_mul(iso.alpha(), g)) == 10
    with pytest.raises(CapacityError):
        iso.w_order(iso.pair(Rotation.z(1.0), Rotation.identity()), cap=200)


def test_fixed_set_examples():
    g = iso.pair(Rotation.z(2 * math.pi / 5), Rotation.z(4 * math.pi / 5))
    f = iso.fixed_set(g)
    assert f.kind == iso.FIX_FINITE and len(f.points) == 4
    half = Rotation.about([1, 0, 0], math.pi)
    assert iso.fixed_set(WElement(half, Rotation.z(math.pi), 1, 0)).kind == iso.FIX_TORUS
    h = WElement(Rotation.z(0.9), Rotation.about([0, 1, 0], 0.4), 0, 1)
    f = iso.fixed_set(h)
    assert f.kind == iso.FIX_FINITE and len(f.points) == 2
    assert iso.fixed_set(iso.sigma()).kind == iso.FIX_SPHERE
    assert iso.fixed_set(iso.alpha()).kind == iso.FIX_EMPTY
    assert iso.fixed_set(iso.pair(Rotation.identity(), Rotation.z(1.0))).kind == iso.FIX_SPHERE_PAIR


@settings(max_examples=200, deadline=None)
@given(elements)
def test_fixed_set_against_oracle(g):
    f = iso.fixed_set(g)
    kind, chi = _oracle_kind(g.matrix6())
    assert f.kind == kind
    assert iso.euler_characteristic(f) == chi
    # the master identity
    assert iso.euler_characteristic(f) == iso.lefschetz(iso.phi(g))
    if f.kind == iso.FIX_FINITE:
        assert len(f.points) == (2 if g.swap else 4)
        for p in f.points:
            assert abs(np.linalg.norm(p[:3]) - 1) < 1e-9 and abs(np.linalg.norm(p[3:]) - 1) < 1e-9
            assert np.allclose(g.apply_point(p), p, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(elements, elements)
def test_fixed_set_equivariance(g, h):
    f = iso.fixed_set(g)
    c = iso.w_mul(iso.w_mul(h, g), iso.w_inv(h))
    fc = iso.fixed_set(c)
    assert fc.kind == f.kind
    if f.kind == iso.FIX_FINITE:
        moved = np.array([h.apply_point(p) for p in f.points])
        for p in moved:
            assert np.min(np.linalg.norm(fc.points - p, axis=1)) < 1e-8


def test_standard_polyhedral():
    c4 = iso.standard_polyhedral("cyclic", 4)
    angles = sorted(round(r.angle / (math.pi / 2)) for r in c4)
    assert len(c4) == 4 and angles == [0, 1, 1, 2]
    assert all(abs(abs(r.axis[2]) - 1) < 1e-9 for r in c4 if not r.is_identity())
    ico = iso.standard_polyhedral("icos")
    assert len(ico) == 60
    A, _ = iso.standard_embedding("icos")
    assert gr.isomorphic(A, gr.icosahedral())
    d3 = iso.standard_polyhedral("dihedral", 3)
    assert len(d3) == 6 and not gr.FiniteGroup(iso.rotation_table(d3), 0, [], None).is_abelian()
    for fam, n, G in [("tet", None, gr.tetrahedral()), ("oct", None, gr.octahedral()),
                      ("D", 5, gr.dihedral(5)), ("Z", 7, gr.cyclic(7))]:
        A, rots = iso.standard_embedding(fam, n)
        assert gr.isomorphic(A, G)
        T = iso.rotation_table(list(rots))
        assert oracles.is_hom_table(T, A.table, np.arange(A.order))


def test_local_rotation_numbers_lens_examples():
    g = iso.pair(Rotation.z(2 * math.pi / 5), Rotation.z(2 * math.pi / 5))
    p = iso.fixed_set(g).points[0]
    nums = iso.local_rotation_numbers(g, p)
    assert nums == (Fraction(1, 5), Fraction(1, 5))
    assert iso.lens_type(nums) == (5, 1)
    g = iso.pair(Rotation.z(2 * math.pi / 5), Rotation.z(4 * math.pi / 5))
    p = iso.fixed_set(g).points[0]
    nums = iso.local_rotation_numbers(g, p)
    assert nums == (Fraction(1, 5), Fraction(2, 5))
    assert iso.lens_type(nums) == (5, 2)
    g = iso.pair(Rotation.z(math.pi), Rotation.z(math.pi))
    assert iso.local_rotation_numbers(g, iso.fixed_set(g).points[0])[0] == Fraction(1, 2)


def test_local_rotation_numbers_against_oracle():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(2, 9))
        g = WElement(_rot(rng, n), _rot(rng, n), 0, 0)
        f = iso.fixed_set(g)
        if f.kind != iso.FIX_FINITE:
            continue
        order = iso.w_order(g)
        for p in f.points:
            a, b = iso.local_rotation_numbers(g, p, order)
            fold = lambda x: min(x, 1 - x)
            # the oracle lists each angle once per conjugate eigenvalue
            assert sorted([fold(a), fold(b)] * 2) == oracles.tangent_angles(g.matrix6(), p, order)


def test_local_rotation_numbers_need_isolated_point():
    g = iso.pair(Rotation.identity(), Rotation.z(1.0))
    with pytest.raises(gr.GroupError):
        iso.local_rotation_numbers(g, np.array([1.0, 0, 0, 0, 0, 1]))


def test_w_closure_cross_validates():
    A, rots = iso.standard_embedding("oct")
    gens = [iso.pair(r, r) for r in rots[:3]] + [iso.sigma()]
    W = iso.w_closure(gens)
    assert W.order == 48
    for i in range(0, W.order, 5):
        for j in range(0, W.order, 7):
            k = W.group.mul(i, j)
            assert iso.w_mul(W.elements[i], W.elements[j]).close(W.elements[k], 1e-8)


def test_welement_json_roundtrip():
    g = WElement(Rotation.z(0.3), Rotation.about([1, 1, 0], 2.0), 1, 1)
    d = g.to_json()
    assert list(d) == ["r1", "r2", "antipodal", "swap"]
    assert WElement.from_json(d).close(g)

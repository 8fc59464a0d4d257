import json
from fractions import Fraction

import numpy as np
import pytest

from pseudofree import actions as ac
from pseudofree import extensions as ex
from pseudofree import groups as gr
from pseudofree import isometry as iso
from pseudofree.groups import GroupError

import oracles


def _all_fixed_points(W):
    pts = []
    for g in W.elements[1:]:
        f = iso.fixed_set(g)
        if f.kind == iso.FIX_FINITE:
            pts.extend(f.points)
    pts = np.array(pts)
    _, idx = np.unique(np.round(pts, 6) + 0.0, axis=0, return_index=True)
    return pts[np.sort(idx)]


def _check_against_oracles(spec, report):
    W = iso.w_closure(list(spec.generators))
    assert report.order == W.order == spec.abstract_group.order
    assert gr.isomorphic(W.group, spec.abstract_group)
    for g in W.elements[1:]:
        kind, chi = oracles.fixed_set_kind(g.matrix6())
        assert chi == iso.lefschetz(iso.phi(g))
        assert "empty" in kind or kind in ("pairxpair", "finite")
    pts = _all_fixed_points(W)
    mats = np.array([g.matrix6() for g in W.elements])
    sizes = oracles.orbit_partition(mats, pts)
    assert sizes == sorted(len(o.points) for o in report.singular_orbits)
    for o in report.singular_orbits:
        assert len(o.points) * o.order == W.order


# ---------------------------------------------------------------- semi-diagonal

def test_semidiagonal_z5_squaring():
    spec = ac.build_semidiagonal("cyclic", 5, 2)
    rep = ac.verify(spec)
    assert rep.passed and rep.pseudofree
    assert rep.fixed_kinds == {iso.FIX_FINITE: 4}
    assert all(o.lens == (5, 2) for o in rep.singular_orbits)
    assert len(rep.singular_orbits) == 4
    _check_against_oracles(spec, rep)


def test_diagonal_z5_is_l51():
    rep = ac.verify(ac.build_semidiagonal("cyclic", 5))
    assert rep.passed
    assert all(o.lens == (5, 1) for o in rep.singular_orbits)
    assert all(o.rotation_numbers == (Fraction(1, 5), Fraction(1, 5)) or o.lens == (5, 1)
               for o in rep.singular_orbits)
    assert rep.s2_family == "(N,N)" and rep.halved_data == (5, 5)


def test_diagonal_icos():
    spec = ac.build_semidiagonal("icos")
    rep = ac.verify(spec)
    assert rep.passed and rep.repeated_in_pairs
    assert rep.s2_family == "(2,3,5)"
    assert sorted(rep.rh_data) == [2, 2, 3, 3, 5, 5]
    _check_against_oracles(spec, rep)


def test_semidiagonal_icos_outer():
    spec = ac.build_semidiagonal("icos", psi="outer")
    rep = ac.verify(spec)
    assert rep.passed and rep.pseudofree
    assert spec.notes and "not decided" in spec.notes[0]


def test_semidiagonal_oct_has_no_outer():
    with pytest.raises(GroupError):
        ac.build_semidiagonal("oct", psi="outer")


def test_semidiagonal_rejects_non_automorphism():
    A, _ = iso.standard_embedding("cyclic", 6)
    with pytest.raises(GroupError):
        ac.build_semidiagonal("cyclic", 6, 2)
    bad = gr.GroupHom(A, A, np.zeros(6, dtype=np.int64))
    with pytest.raises(GroupError):
        ac.build_semidiagonal("cyclic", 6, bad)


# ---------------------------------------------------------------- minus identity

def test_minus_id_znxz2():
    spec = ac.build_minus_id(6, "ZnxZ2")
    rep = ac.verify(spec)
    assert rep.order == 12 and rep.passed
    assert iso.phi(spec.generators[1]).matrix == ((-1, 0), (0, -1))
    _check_against_oracles(spec, rep)


def test_minus_id_z2n():
    spec = ac.build_minus_id(4, "Z2n")
    rep = ac.verify(spec)
    assert rep.passed and gr.isomorphic(spec.abstract_group, gr.cyclic(8))


def test_minus_id_odd_z2n_rejected():
    with pytest.raises(ac.BuildRejected) as e:
        ac.build_minus_id(3, "Z2n")
    assert e.value.witness.fixed.kind == iso.FIX_TORUS


# ---------------------------------------------------------------- swap cyclic

def test_swap_cyclic_quaternion():
    aut = ex.CyclicAutData(4, 0, -1)
    spec = ac.build_swap_cyclic(4, aut, 2)
    rep = ac.verify(spec)
    assert rep.passed
    assert gr.isomorphic(spec.abstract_group, gr.binary_dihedral(2))
    q = spec.generators[1]
    assert iso.phi(q).matrix == ((0, 1), (1, 0))
    _check_against_oracles(spec, rep)


def test_swap_cyclic_n2():
    spec = ac.build_swap_cyclic(2, ex.CyclicAutData(2), 1)
    rep = ac.verify(spec)
    assert rep.order == 4 and rep.passed
    assert gr.isomorphic(spec.abstract_group, gr.cyclic(4))


def test_swap_cyclic_split_rejected():
    with pytest.raises(ac.BuildRejected) as e:
        ac.build_swap_cyclic(4, ex.CyclicAutData(4, 0, -1), 0)
    w = e.value.witness
    assert w.fixed.kind == iso.FIX_SPHERE and w.element.swap == 1
    assert iso.w_order(w.element) == 2


def test_split_swap_not_pseudofree_when_forced():
    spec = ac.build_swap_cyclic(4, ex.CyclicAutData(4, 0, -1), 0, allow_split=True)
    rep = ac.verify(spec)
    assert not rep.pseudofree and not rep.passed
    assert rep.offending_elements[0]["fixed_set"]["kind"] == iso.FIX_SPHERE


# ---------------------------------------------------------------- swap dihedral

def test_swap_dihedral_n3_all_classes_split():
    # Out(D3) and Z(D3) are trivial, so every extension of D3 by Z2 splits
    for a in range(3):
        for b in (1, 2):
            with pytest.raises(ac.BuildRejected) as e:
                ac.build_swap_dihedral(3, ex.DihedralAut(3, a, b))
            assert e.value.witness.fixed.dimension >= 1


def test_swap_dihedral_n4_inner_class_always_splits():
    # s^2 is a square in D4, so q s is an involution for either choice of q^2
    for w in (0, 1):
        with pytest.raises(ac.BuildRejected):
            ac.build_swap_dihedral(4, ex.DihedralAut(4, 0, 1), w)


@pytest.mark.parametrize("n,a,b,w", [(4, 1, 1, 0), (4, 1, 3, 1), (6, 0, 1, 1), (8, 1, 7, 1)])
def test_swap_dihedral_nonsplit(n, a, b, w):
    aut = ex.DihedralAut(n, a, b)
    spec = ac.build_swap_dihedral(n, aut, w)
    rep = ac.verify(spec)
    assert rep.passed and rep.order == 4 * n
    G = spec.abstract_group
    q = spec.labeling[-1]
    K = gr.closure(G, spec.labeling[:-1])
    assert len(K) == 2 * n and G.mul(q, q) in K
    _check_against_oracles(spec, rep)


def test_swap_dihedral_d2_swap_is_split():
    with pytest.raises(ac.BuildRejected):
        ac.build_swap_dihedral(2, "swap", 0)


# ---------------------------------------------------------------- full image

def test_full_case1_quaternion():
    spec = ac.build_full(1, 1)
    rep = ac.verify(spec)
    assert rep.passed and rep.order == 8
    assert sorted(rep.phi_image) == ["1", "a", "ab", "b"]
    assert gr.isomorphic(spec.abstract_group, gr.binary_dihedral(2))
    k, qb, qa = spec.generators
    lhs = iso.w_mul(iso.w_mul(iso.w_inv(qb), qa), qb)
    assert lhs.close(iso.w_inv(qa))


@pytest.mark.parametrize("n2,mm,mp", [(1, 3, 1), (2, 1, 1), (1, 1, 3), (2, 3, 1)])
def test_full_case1_relation(n2, mm, mp):
    spec = ac.build_full(1, n2, mm, mp)
    k, qb, qa = spec.generators
    assert iso.w_mul(iso.w_mul(iso.w_inv(qb), qa), qb).close(iso.w_inv(qa))
    assert ac.verify(spec).passed


def test_full_case2_order16():
    spec = ac.build_full(2, 2)
    rep = ac.verify(spec)
    assert rep.order == 16 and rep.passed
    assert len(rep.phi_image) == 4
    _check_against_oracles(spec, rep)


def test_full_parameter_errors():
    with pytest.raises(GroupError):
        ac.build_full(2, 1)
    with pytest.raises(GroupError):
        ac.build_full(1, 1, 2)
    with pytest.raises(GroupError):
        ac.build_full(3, 2)


# ---------------------------------------------------------------- negatives

@pytest.mark.parametrize("spec", [ac.build_kernel_with_alpha("dihedral", 3), ac.build_commuting_pair(1),
                                  ac.build_z2_cubed()], ids=["kernel-alpha", "commuting", "z2-cubed"])
def test_negative_candidates(spec):
    rep = ac.verify(spec)
    assert not rep.pseudofree and not rep.passed
    assert rep.offending_elements
    assert rep.lefschetz_ok


def test_kernel_alpha_odd_cyclic_is_pseudofree():
    assert ac.verify(ac.build_kernel_with_alpha("cyclic", 3)).pseudofree


# ---------------------------------------------------------------- invariants

SWEEP = [
    ("diagonal", dict(family="cyclic", n=7)),
    ("diagonal", dict(family="dihedral", n=5)),
    ("diagonal", dict(family="tet")),
    ("semidiagonal", dict(family="tet", psi="outer")),
    ("diagonal", dict(family="oct")),
    ("semidiagonal", dict(family="dihedral", n=6, psi="outer")),
    ("minus-id-ZnxZ2", dict(n=5)),
    ("minus-id-Z2n", dict(n=6)),
    ("swap-cyclic", dict(n=6, u=-1)),
    ("swap-cyclic", dict(n=8, u=1)),
    ("swap-cyclic", dict(n=12, u=5)),
    ("swap-dihedral", dict(n=6, a=2, b=1, which_class=0)),
    ("full", dict(case=2, n2=2, m_minus=3)),
]


@pytest.mark.parametrize("tag,params", SWEEP, ids=[f"{t}-{i}" for i, (t, _) in enumerate(SWEEP)])
def test_builder_invariants(tag, params):
    spec = ac.build(tag, **params)
    rep = ac.verify(spec)
    assert rep.isomorphic_to_abstract and rep.lefschetz_ok and rep.passed
    if rep.homologically_trivial:
        assert rep.four_fixed_points and rep.isotropy_cyclic and rep.repeated_in_pairs
        assert rep.s2_family in {"(N,N)", "(2,2,k)", "(2,3,3)", "(2,3,4)", "(2,3,5)"}
    assert rep.orbit_divisibility_ok in (True, None) or not rep.homologically_trivial
    _check_against_oracles(spec, rep)


def test_pseudofree_iff_finite_fixed_sets():
    for spec in [ac.build_semidiagonal("dihedral", 4), ac.build_z2_cubed(),
                 ac.build_commuting_pair(2), ac.build_minus_id(3)]:
        W = iso.w_closure(list(spec.generators))
        finite = all(iso.fixed_set(g).dimension <= 0 for g in W.elements[1:])
        assert ac.verify(spec).pseudofree == finite


def test_s2_family():
    assert ac.s2_family((7, 7), 7) == "(N,N)"
    assert ac.s2_family((2, 2, 5), 10) == "(2,2,k)"
    assert ac.s2_family((2, 3, 4), 24) == "(2,3,4)"
    assert ac.s2_family((2, 3, 4), 12) is None


def test_action_spec_json_roundtrip():
    spec = ac.build_swap_cyclic(4, ex.CyclicAutData(4, 0, -1), 2)
    data = json.loads(json.dumps(spec.to_json()))
    back = ac.ActionSpec.from_json(data)
    assert ac.verify(back).to_json() == ac.verify(spec).to_json()


def test_report_text_and_json():
    rep = ac.verify(ac.build_semidiagonal("cyclic", 3))
    text = rep.to_text()
    assert "pseudofree" in text and "L(3, 1)" in text
    data = rep.to_json()
    assert data["passed"] is True
    json.dumps(data)


def test_closure_overflow():
    with pytest.raises(gr.CapacityError):
        ac.verify(ac.build_semidiagonal("icos"), max_order=30)


def test_unknown_builder():
    with pytest.raises(GroupError):
        ac.build("nope")
    with pytest.raises(GroupError):
        ac.build("full", nonsense=1)

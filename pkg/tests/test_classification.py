import itertools
import math

import numpy as np
import pytest

from pseudofree import actions as ac
from pseudofree import classification as cl
from pseudofree import cohomology as co
from pseudofree import groups as gr

import oracles

KLEIN = np.array([[a ^ b for b in range(4)] for a in range(4)])


# ---------------------------------------------------------------- decide

def test_icos_trivial_admits():
    G = gr.icosahedral()
    v = cl.decide(cl.ClassificationTuple(G, np.zeros(60, dtype=np.int64)))
    assert v.admits and v.tag == cl.ADMITS


def test_d3_x_z2_minus_id_rejected():
    D3 = gr.dihedral(3)
    G = gr.direct_product(D3, gr.cyclic(2))
    phi = np.array([x % 2 for x in range(G.order)])     # index 2 i + j, j the Z2 coordinate
    t = cl.ClassificationTuple(G, phi)
    assert len(t.K) == 6 and t.image == ("1", "a")
    v = cl.decide(t)
    assert not v.admits and v.reason == cl.GA_CONDITION


def test_z4_x_z2_commuting_rejected():
    G = gr.direct_product(gr.cyclic(4), gr.cyclic(2))
    # generator of Z4 over b, generator of Z2 over a
    phi = np.array([(2 if (x // 2) % 2 else 0) ^ (1 if x % 2 else 0) for x in range(8)])
    t = cl.ClassificationTuple(G, phi)
    assert t.image == ("1", "a", "b", "ab")
    v = cl.decide(t)
    assert not v.admits and v.reason == cl.COMMUTING


def test_ab_image_relabeled():
    G = gr.cyclic(4)
    t = cl.ClassificationTuple(G, np.array([0, 3, 0, 3]))
    assert t.relabeled and t.image == ("1", "b")
    assert cl.decide(t).admits


def test_malformed_phi():
    G = gr.cyclic(3)
    with pytest.raises(gr.GroupError):
        cl.ClassificationTuple(G, np.array([0, 1, 1]))
    with pytest.raises(gr.GroupError):
        cl.ClassificationTuple(G, np.array([0, 4, 0]))


@pytest.mark.parametrize("G", [gr.cyclic(4), gr.dihedral(2), gr.dihedral(4), gr.binary_dihedral(2),
                               gr.direct_product(gr.cyclic(2), gr.dihedral(2)), gr.tetrahedral()],
                         ids=lambda G: G.name)
def test_klein_homs_against_brute_force(G):
    gens = G.generator_indices()
    count = 0
    for imgs in itertools.product(range(4), repeat=len(gens)):
        f = oracles._words_map(G.table, G.identity, gens, list(imgs), KLEIN, 0)
        if oracles.is_hom_table(G.table, KLEIN, f):
            count += 1
    assert len(cl.klein_homs(G)) == count


# ---------------------------------------------------------------- big list

@pytest.fixture(scope="module")
def big64():
    return cl.enumerate_big_list(64)


def _has(entries, family, group, image):
    return any(e.family == family and tuple(e.image) == image and e.order == group.order
               and gr.isomorphic(e.expected, group) for e in entries)


def test_big_list_order8():
    entries = cl.enumerate_big_list(8)
    assert _has(entries, "2", gr.cyclic(8), ("1", "a"))
    assert _has(entries, "4a", gr.binary_dihedral(2), ("1", "a", "b", "ab"))


def test_big_list_order4():
    entries = cl.enumerate_big_list(4)
    hits = [e for e in entries if e.family == "3b" and e.order == 4]
    assert hits
    assert hits[0].params["n2"] == 1 and hits[0].params["m_minus"] == 1 and hits[0].params["m_plus"] == 1
    assert gr.isomorphic(hits[0].expected, gr.cyclic(4))


def test_family_4b_has_n2_above_one(big64):
    fourb = [e for e in big64 if e.family == "4b"]
    assert fourb and all(e.params["n2"] > 1 for e in fourb)


def test_big_list_deterministic():
    a = [e.to_json() for e in cl.enumerate_big_list(24)]
    b = [e.to_json() for e in cl.enumerate_big_list(24)]
    assert a == b


def test_big_list_entries_distinct(big64):
    cache = {}
    tuples = []
    for e in big64:
        W = ac.w_closure(list(e.spec().generators))
        tuples.append(cl.ClassificationTuple.from_wgroup(W))
    for i, j in itertools.combinations(range(len(tuples)), 2):
        s, t = tuples[i], tuples[j]
        if s.G.order == t.G.order and s.image == t.image and cl._tuple_key(s) == cl._tuple_key(t):
            assert not cl.tuple_isomorphic(s, t), (big64[i].to_json(), big64[j].to_json())


def test_cross_check_small():
    rep = cl.cross_check(48)
    assert rep.ok, rep.failures
    reasons = {v["reason"] for _, v, _, _ in rep.negatives}
    assert reasons == set(cl.REASONS)


def test_negative_corpus_examples():
    cases = {c.name: c for c in cl.negative_corpus(64)}
    assert cl.decide(cases["Z2^3 trivial"].tuple).reason == cl.K_NOT_POLYHEDRAL
    assert cl.decide(cases["Z5:Z4 trivial"].tuple).reason == cl.K_NOT_POLYHEDRAL
    assert cl.decide(cases["S4 x <alpha>"].tuple).reason == cl.GA_CONDITION
    rep = ac.verify(cases["S4 x <alpha>"].candidate)
    assert not rep.pseudofree
    assert rep.offending_elements[0]["fixed_set"]["dimension"] >= 1


def _soundness_corpus(max_order):
    out = []
    for n in range(2, max_order + 1):
        out.append(gr.cyclic(n))
    for n in range(2, max_order // 2 + 1):
        out.append(gr.dihedral(n))
    for m in range(2, max_order // 4 + 1):
        out.append(gr.binary_dihedral(m))
    for a in range(2, max_order + 1):
        for b in range(2, max_order // a + 1):
            if a <= b:
                out.append(gr.direct_product(gr.cyclic(a), gr.cyclic(b)))
    for n in range(2, max_order // 4 + 1):
        out.append(gr.direct_product(gr.dihedral(n), gr.cyclic(2)))
    for m in range(3, max_order // 4 + 1, 2):
        for k in (4, 8):
            if m * k <= max_order:
                for u in range(2, m):
                    if math.gcd(u, m) == 1 and pow(u, k, m) == 1:
                        out.append(gr.cyclic_semidirect(m, k, u))
    out += [gr.tetrahedral(), gr.octahedral(), gr.direct_product(gr.tetrahedral(), gr.cyclic(2)),
            co.lens_group(5)]
    return [G for G in out if G.order <= max_order]


def test_soundness_probe():
    """Every admitted tuple on a corpus of small groups is realized by a big-list entry."""
    max_order = 32
    entries = cl.enumerate_big_list(max_order)
    cache = {}
    admitted = 0
    for G in _soundness_corpus(max_order):
        for phi in cl.klein_homs(G):
            t = cl.ClassificationTuple(G, phi)
            if not cl.decide(t).admits:
                continue
            admitted += 1
            assert cl.find_in_big_list(t, entries, cache) is not None, (G.name, t.image)
    assert admitted > 100


# ---------------------------------------------------------------- Riemann-Hurwitz

def test_rh_chi2_five_families():
    r = cl.enumerate_rh(2, 500)
    assert {f.label for f in r.families} == {"(N,N)", "(2,2,N/2)"}
    assert sorted((d.tuple, d.N) for d in r.exceptional) == [
        ((2, 3, 3), 12), ((2, 3, 4), 24), ((2, 3, 5), 60)]


@pytest.mark.parametrize("chi", [2, 4])
def test_rh_solutions_against_oracle(chi):
    r = cl.enumerate_rh(chi, 36)
    got = {}
    for d in r.solutions:
        got.setdefault(d.N, set()).add(d.tuple)
    for N in range(2, 37):
        want = set(oracles.rh_solutions(chi, N, 8))
        assert got.get(N, set()) == want, N


def test_rh_chi4_bounds():
    r = cl.enumerate_rh(4, 200)
    assert all(len(d.tuple) <= 7 for d in r.solutions)
    assert all(d.identity_holds() for d in r.solutions)
    assert any(d.tuple == (2,) * 7 and d.N == 8 for d in r.solutions)


def test_rh_families_are_identities():
    for chi in (2, 4):
        for f in cl.rh_families(chi):
            for N in range(f.modulus, 20 * f.modulus, f.modulus):
                tup = f.instance(N)
                if tup is not None:
                    assert cl.RHData(chi, tup, N, f.label).identity_holds()


def test_rh_input_limits():
    with pytest.raises(gr.GroupError):
        cl.enumerate_rh(3, 10)
    with pytest.raises(gr.GroupError):
        cl.enumerate_rh(2, 10 ** 6 + 1)


def test_pair_reduce_examples():
    assert cl.pair_reduce(cl.RHData(4, (5, 5, 5, 5), 5)) == ((5, 5), "(N,N)")
    assert cl.pair_reduce(cl.RHData(4, (4, 4, 4, 4, 5), 20)) == cl.NOT_PAIRED
    rep = ac.verify(ac.build_semidiagonal("tet"))
    d = cl.RHData(4, tuple(sorted(rep.rh_data)), rep.order)
    assert d.identity_holds()
    assert cl.pair_reduce(d) == ((2, 3, 3), "(2,3,3)")


@pytest.mark.parametrize("family,n", [("cyclic", 6), ("dihedral", 4), ("dihedral", 7), ("oct", None),
                                      ("icos", None)])
def test_homologically_trivial_data_is_paired(family, n):
    rep = ac.verify(ac.build_semidiagonal(family, n))
    d = cl.RHData(4, tuple(sorted(rep.rh_data)), rep.order)
    red = cl.pair_reduce(d)
    assert red != cl.NOT_PAIRED and red[1] is not None

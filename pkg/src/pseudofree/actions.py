"""Linear actions of finite groups on S^2 x S^2 and their verification.

Builders produce generators in W together with the abstract group they should
generate.  ``verify`` closes the generators, checks the abstract structure,
classifies every fixed set and, for pseudofree actions, extracts the singular
orbits, isotropy, local rotation data and Riemann-Hurwitz data.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from . import groups as gr
from . import extensions as ext
from .groups import FiniteGroup, GroupError, GroupHom
from .isometry import (Rotation, WElement, FixedSet, HomologyRep, AmbiguityError,
                       fixed_set, euler_characteristic, lefschetz, phi, w_closure, w_pow,
                       local_rotation_numbers, lens_type, standard_embedding, alpha,
                       FIX_FINITE, FIX_EMPTY, FIX_SPHERE, FIX_TORUS)

MATCH_TOL = 1e-6
DEFAULT_MAX_ORDER = 512
S2_FAMILIES = ("(N,N)", "(2,2,k)", "(2,3,3)", "(2,3,4)", "(2,3,5)")


class BuildRejected(GroupError):
    """The requested action cannot be pseudofree; ``witness`` shows why."""

    def __init__(self, message: str, witness: "Witness | None" = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class Witness:
    element: WElement
    fixed: FixedSet

    def to_json(self) -> dict:
        return {"element": self.element.to_json(), "fixed_set": self.fixed.to_json()}


@dataclass(frozen=True, eq=False)
class ActionSpec:
    generators: tuple                 # WElement
    abstract_group: FiniteGroup
    labeling: tuple | None = None     # abstract element for each generator
    labels: tuple = ()
    family: str = ""
    params: dict = field(default_factory=dict)
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "generators": [g.to_json() for g in self.generators],
            "abstract_group": self.abstract_group.to_json(),
            "labeling": None if self.labeling is None else [int(x) for x in self.labeling],
            "labels": list(self.labels),
            "family": self.family,
            "params": {k: v for k, v in self.params.items()},
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ActionSpec":
        lab = data.get("labeling")
        return cls(tuple(WElement.from_json(g) for g in data["generators"]),
                   FiniteGroup.from_json(data["abstract_group"]),
                   None if lab is None else tuple(int(x) for x in lab),
                   tuple(data.get("labels", ())), data.get("family", ""),
                   dict(data.get("params", {})), tuple(data.get("notes", ())))


# ---------------------------------------------------------------- builders

def _resolve_automorphism(A: FiniteGroup, psi) -> GroupHom:
    if psi is None or (isinstance(psi, str) and psi == "identity"):
        return gr.identity_hom(A)
    if isinstance(psi, GroupHom):
        f = psi
    elif isinstance(psi, str) and psi == "outer":
        io = gr.inner_and_outer(A)
        if len(io.outer_reps) < 2:
            raise GroupError(f"{A.name} has no outer automorphism")
        f = io.aut.automorphisms[io.outer_reps[1]]
    elif isinstance(psi, (int, np.integer)):
        # multiplication by a unit on a cyclic group
        n = A.order
        if math.gcd(int(psi), n) != 1:
            raise GroupError(f"{psi} is not a unit mod {n}")
        f = GroupHom(A, A, (int(psi) * np.arange(n)) % n)
    else:
        f = GroupHom(A, A, np.asarray(psi))
    if not (f.is_homomorphism() and f.is_injective()):
        raise GroupError("psi is not an automorphism")
    return f


def build_semidiagonal(family: str, n: int | None = None, psi=None) -> ActionSpec:
    """k -> (k, psi(k)) on a standard polyhedral group; psi = None is the diagonal action."""
    A, R = standard_embedding(family, n)
    f = _resolve_automorphism(A, psi)
    gens, labeling, labels = [], [], []
    for label, g in A.generators:
        gens.append(WElement(R[g], R[f(g)]))
        labeling.append(g)
        labels.append(label)
    diag = bool((f.image == np.arange(A.order)).all())
    notes = () if diag else ("semi-diagonal: linear equivalence to the diagonal action is not decided",)
    return ActionSpec(tuple(gens), A, tuple(labeling), tuple(labels), "1-" + family,
                      {"n": n, "psi": f.image.tolist() if not diag else "identity"}, notes)


def build_minus_id(n: int, variant: str = "ZnxZ2") -> ActionSpec:
    """Z_n about the z-axis (diagonally) extended by q with phi(q) = -I."""
    if n < 1:
        raise GroupError("n must be positive")
    rho = Rotation.z(2 * math.pi / n)
    k = WElement(rho, rho)
    if variant == "ZnxZ2":
        q = WElement(Rotation.identity(), Rotation.z(math.pi), 1, 0)
        A = gr.direct_product(gr.cyclic(n), gr.cyclic(2), f"Z{n}xZ2")
        # (i, j) has index 2 i + j
        return ActionSpec((k, q), A, (2 % A.order, 1), ("k", "q"), "2-ZnxZ2", {"n": n})
    if variant == "Z2n":
        h = Rotation.z(math.pi / n)
        q = WElement(h, h, 1, 0)
        if n % 2:
            w = w_pow(q, n)
            raise BuildRejected(f"n = {n} is odd: q^n fixes a torus", Witness(w, fixed_set(w)))
        A = gr.cyclic(2 * n)
        return ActionSpec((k, q), A, (2, 1), ("k", "q"), "2-Z2n", {"n": n})
    raise GroupError(f"unknown variant {variant!r}")


def _split_witness(gens: list[WElement], max_order: int = DEFAULT_MAX_ORDER) -> Witness | None:
    """An element outside the kernel of phi with a positive-dimensional fixed set."""
    W = w_closure(gens, max_order)
    for x in W.elements:
        if x.swap or x.antipodal:
            f = fixed_set(x)
            if f.dimension >= 1:
                return Witness(x, f)
    return None


def build_swap_cyclic(n: int, aut: ext.CyclicAutData, g_q2: int, allow_split: bool = False) -> ActionSpec:
    """Z_n embedded by k -> (k, gamma(k)) with q = sigma (h, h), h^2 the rotation of g_q2."""
    if aut.n != n:
        raise GroupError("automorphism data is for a different n")
    K = gr.cyclic(n)
    seq = ext.extension_from_data(ext.ExtensionData(K, aut.as_hom(K), g_q2 % n))
    u = aut.multiplier
    k = WElement(Rotation.z(2 * math.pi / n), Rotation.z(2 * math.pi * u / n))
    h = Rotation.z(math.pi * (g_q2 % n) / n)
    # sigma o (h, h) in normal form: swap first, then the switched pair (h, h)
    q = WElement(h, h, 0, 1)
    split = seq.splits()
    if split and not allow_split:
        raise BuildRejected("the extension splits, so some involution swaps the factors",
                            _split_witness([k, q]))
    G = seq.total
    kimg = int(seq.inclusion.image[1 % n])
    notes = ("split extension: not pseudofree",) if split else ()
    return ActionSpec((k, q), G, (kimg, n), ("k", "q"), "3-swap-cyclic",
                      {"n": n, "u": u, "g_q2": int(g_q2 % n)}, notes)


def build_swap_dihedral(n: int, gamma, which_class: int = 0, allow_split: bool = False) -> ActionSpec:
    """D_n embedded by g -> (g, psi(g)), psi = mu_{r2} o gamma^-1, with q = sigma (1, r2), r2 = g_q2."""
    seq = ext.build_dihedral_extension(n, gamma, which_class)
    G = seq.total
    A, R = standard_embedding("dihedral", n)
    inc = seq.inclusion.image
    lifts = ext.lift_outside(seq)
    q0 = lifts[0]
    gam = ext.conjugation_on_kernel(seq, q0)         # x -> q0^-1 x q0 on kernel indices
    back = {int(v): i for i, v in enumerate(inc)}
    g0 = back[G.mul(q0, q0)]
    gam_inv = np.empty_like(gam)
    gam_inv[gam] = np.arange(len(gam))
    # psi(x) = g0^-1 gamma^-1(x) g0
    psi = np.array([A.conj(g0, int(gam_inv[x])) for x in range(A.order)])
    r2 = R[g0]
    gens, labeling, labels = [], [], []
    for label, g in A.generators:
        gens.append(WElement(R[g], R[int(psi[g])]))
        labeling.append(int(inc[g]))
        labels.append(label)
    q = WElement(r2, Rotation.identity(), 0, 1)
    gens.append(q)
    labeling.append(q0)
    labels.append("q")
    split = seq.splits()
    if split and not allow_split:
        raise BuildRejected("the extension splits, so some involution swaps the factors",
                            _split_witness(gens))
    notes = ("split extension: not pseudofree",) if split else ()
    if isinstance(gamma, ext.DihedralAut):
        g_desc = {"a": gamma.a, "b": gamma.b}
    elif isinstance(gamma, GroupHom):
        g_desc = gamma.image.tolist()
    else:
        g_desc = gamma if isinstance(gamma, str) else np.asarray(gamma).tolist()
    return ActionSpec(tuple(gens), G, tuple(labeling), tuple(labels), "3-swap-dihedral",
                      {"n": n, "gamma": g_desc, "which_class": which_class}, notes)


def _aut_data(n: int, eps2: int, m_minus: int) -> ext.CyclicAutData:
    eps = tuple((p, -1 if m_minus % p == 0 else 1) for p in gr.prime_factors(n) if p != 2)
    return ext.CyclicAutData(n, 0, eps2, eps)


def _nonsplit_class(aut: ext.CyclicAutData) -> int:
    for c in ext.classify_cyclic_z2_extensions(aut.n, aut):
        if not c.split:
            return c.g_q2
    raise GroupError("no nonsplit extension for this automorphism")


def _check_odd_parts(n2: int, m_minus: int, m_plus: int) -> None:
    if m_minus < 1 or m_plus < 1 or m_minus % 2 == 0 or m_plus % 2 == 0:
        raise GroupError("m_minus and m_plus must be odd and positive")
    if math.gcd(m_minus, m_plus) != 1:
        raise GroupError("m_minus and m_plus must be coprime")
    if n2 < 1:
        raise GroupError("n2 must be at least 1")


def build_full(case: int, n2: int, m_minus: int = 1, m_plus: int = 1) -> ActionSpec:
    """Actions with phi(G) = Z2 x Z2, all rotations about the z-axis."""
    _check_odd_parts(n2, m_minus, m_plus)
    if case == 2 and n2 <= 1:
        raise GroupError("case 2 needs n2 > 1")
    if case not in (1, 2):
        raise GroupError("case must be 1 or 2")
    n = 2 ** n2 * m_minus * m_plus
    odd = m_minus * m_plus
    aut = _aut_data(n, -1 if case == 1 else 1, m_minus)
    g = _nonsplit_class(aut)
    b = build_swap_cyclic(n, aut, g)
    k, qb = b.generators
    if case == 1:
        r = Rotation.z(math.pi * odd / n)       # r^2 generates the Sylow 2-subgroup of K
        qa = WElement(r, r.inverse(), 1, 0)
    else:
        qa = WElement(Rotation.z(math.pi), Rotation.identity(), 1, 0)
    A = ext.z2z2_candidate(case, n2, m_minus, m_plus)
    return ActionSpec((k, qb, qa), A, None, ("k", "q_b", "q_a"), f"4-case-{case}",
                      {"n2": n2, "m_minus": m_minus, "m_plus": m_plus, "u": aut.multiplier, "g_q2": g})


# -------- candidates that cannot be pseudofree (used by the negative corpus)

def build_kernel_with_alpha(family: str, n: int | None = None) -> ActionSpec:
    """Diagonal polyhedral group times <alpha>: phi(G) = <-I>.

    Pseudofree only when K has no involution (odd cyclic K); otherwise
    alpha times an involution fixes a torus.
    """
    base = build_semidiagonal(family, n)
    A = gr.direct_product(base.abstract_group, gr.cyclic(2))
    lab = tuple(int(x) * 2 for x in base.labeling) + (1,)
    return ActionSpec(base.generators + (alpha(),), A, lab, base.labels + ("alpha",),
                      "candidate-kernel-x-alpha", {"family": family, "n": n})


def build_commuting_pair(k: int) -> ActionSpec:
    """Z_4k x Z2 with q_a = alpha (pi, pi) central and q_b = sigma (h, h): q_a fixes a torus."""
    n = 2 * k
    h = Rotation.z(math.pi / n)
    qb = WElement(h, h, 0, 1)
    qa = WElement(Rotation.z(math.pi), Rotation.z(math.pi), 1, 0)
    A = gr.direct_product(gr.cyclic(4 * k), gr.cyclic(2), f"Z{4 * k}xZ2")
    return ActionSpec((qb, qa), A, (2, 1), ("q_b", "q_a"), "candidate-commuting", {"k": k})


def build_z2_cubed() -> ActionSpec:
    """(Z2)^3 inside SO(3) x SO(3): some element is trivial in one factor."""
    rz, rx = Rotation.z(math.pi), Rotation.about((1, 0, 0), math.pi)
    gens = (WElement(rz, Rotation.identity()), WElement(Rotation.identity(), rz), WElement(rx, rx))
    A = gr.direct_product(gr.cyclic(2), gr.direct_product(gr.cyclic(2), gr.cyclic(2)), "Z2^3")
    return ActionSpec(gens, A, (4, 2, 1), ("e1", "e2", "e3"), "candidate-z2-cubed", {})


# ---------------------------------------------------------------- verification

@dataclass(frozen=True, eq=False)
class SingularOrbit:
    points: np.ndarray               # (k, 6)
    isotropy: tuple                  # element indices of the stabilizer of points[0]
    order: int
    generator: int
    rotation_numbers: tuple
    lens: tuple
    cyclic: bool
    type_id: int                     # conjugacy class of the isotropy subgroup

    def to_json(self) -> dict:
        return {
            "size": int(len(self.points)),
            "representative": [round(float(v), 12) for v in self.points[0]],
            "isotropy_order": self.order,
            "isotropy": list(self.isotropy),
            "isotropy_cyclic": self.cyclic,
            "generator": self.generator,
            "rotation_numbers": [str(x) for x in self.rotation_numbers],
            "lens": list(self.lens),
            "type": self.type_id,
        }


@dataclass(frozen=True, eq=False)
class ActionReport:
    order: int
    isomorphic_to_abstract: bool
    phi_image: tuple
    pseudofree: bool
    offending_elements: list
    singular_orbits: list
    rh_data: tuple
    lefschetz_ok: bool
    pairing: dict
    chi_quotient: Fraction | None = None
    rh_identity_ok: bool | None = None
    homologically_trivial: bool = False
    four_fixed_points: bool | None = None
    repeated_in_pairs: bool | None = None
    halved_data: tuple | None = None
    s2_family: str | None = None
    orbit_divisibility_ok: bool | None = None
    isotropy_cyclic: bool | None = None
    fixed_kinds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """Everything a pseudofree action must satisfy."""
        ok = (self.isomorphic_to_abstract and self.pseudofree and self.lefschetz_ok
              and bool(self.rh_identity_ok))
        if self.homologically_trivial:
            # cyclic isotropy, orbit divisibility and pairing are only forced here
            ok = ok and bool(self.four_fixed_points) and bool(self.repeated_in_pairs) \
                and self.s2_family is not None and bool(self.isotropy_cyclic) \
                and bool(self.orbit_divisibility_ok)
        return ok

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "isomorphic_to_abstract": self.isomorphic_to_abstract,
            "phi_image": list(self.phi_image),
            "pseudofree": self.pseudofree,
            "offending_elements": self.offending_elements,
            "singular_orbits": [o.to_json() for o in self.singular_orbits],
            "rh_data": list(self.rh_data),
            "lefschetz_ok": self.lefschetz_ok,
            "pairing": [[list(k), v] for k, v in sorted(self.pairing.items())],
            "chi_quotient": None if self.chi_quotient is None else str(self.chi_quotient),
            "rh_identity_ok": self.rh_identity_ok,
            "homologically_trivial": self.homologically_trivial,
            "four_fixed_points": self.four_fixed_points,
            "repeated_in_pairs": self.repeated_in_pairs,
            "halved_data": None if self.halved_data is None else list(self.halved_data),
            "s2_family": self.s2_family,
            "orbit_divisibility_ok": self.orbit_divisibility_ok,
            "isotropy_cyclic": self.isotropy_cyclic,
            "fixed_kinds": dict(sorted(self.fixed_kinds.items())),
            "passed": self.passed,
        }

    def to_text(self) -> str:
        lines = [
            f"order               {self.order}",
            f"closure matches     {self.isomorphic_to_abstract}",
            f"phi image           {', '.join(self.phi_image)}",
            f"pseudofree          {self.pseudofree}",
            f"Lefschetz identity  {self.lefschetz_ok}",
            f"fixed set kinds     " + ", ".join(f"{k}:{v}" for k, v in sorted(self.fixed_kinds.items())),
        ]
        if not self.pseudofree:
            off = self.offending_elements[0]
            lines.append(f"witness             element {off['index']} fixes a {off['fixed_set']['kind']}")
            return "\n".join(lines)
        lines += [
            f"RH data             {self.rh_data}",
            f"chi(X/G)            {self.chi_quotient}",
            f"RH identity         {self.rh_identity_ok}",
            f"repeated in pairs   {self.repeated_in_pairs}",
            f"halved data         {self.halved_data}  family {self.s2_family}",
            "",
            "orbit  size  isotropy  rotation numbers  lens",
        ]
        for i, o in enumerate(self.singular_orbits):
            rn = "(" + ", ".join(str(x) for x in o.rotation_numbers) + ")"
            lines.append(f"{i:5d}  {len(o.points):4d}  {o.order:8d}  {rn:16s}  L{o.lens}")
        return "\n".join(lines)


def s2_family(halved: tuple, N: int) -> str | None:
    """Which spherical Riemann-Hurwitz family the data belongs to, if any."""
    h = tuple(sorted(halved))
    if len(h) == 2 and h == (N, N) and N >= 2:
        return "(N,N)"
    if len(h) == 3 and h[:2] == (2, 2) and N == 2 * h[2]:
        return "(2,2,k)"
    for fam, n in (((2, 3, 3), 12), ((2, 3, 4), 24), ((2, 3, 5), 60)):
        if h == fam and N == n:
            return "(%d,%d,%d)" % fam
    return None


def _dedupe_points(pts: np.ndarray, tol: float) -> np.ndarray:
    if len(pts) == 0:
        return pts
    tree = cKDTree(pts)
    keep = []
    taken = np.zeros(len(pts), dtype=bool)
    for i in range(len(pts)):
        if taken[i]:
            continue
        near = tree.query_ball_point(pts[i], tol)
        taken[near] = True
        keep.append(i)
    out = pts[keep]
    if len(out) > 1:
        d, _ = cKDTree(out).query(out, k=2)
        if d[:, 1].min() <= 10 * tol:
            raise AmbiguityError("distinct fixed points are too close to match reliably")
    return out


def _subgroup_class_ids(G: FiniteGroup, subgroups: list[frozenset]) -> list[int]:
    ids, reps = [], []
    for S in subgroups:
        found = None
        for j, T in enumerate(reps):
            if len(T) == len(S) and any(gr.conjugates_of_set(G, S, g) == T for g in range(G.order)):
                found = j
                break
        if found is None:
            reps.append(S)
            found = len(reps) - 1
        ids.append(found)
    return ids


def verify(spec: ActionSpec, max_order: int = DEFAULT_MAX_ORDER, tolerance: float = MATCH_TOL) -> ActionReport:
    W = w_closure(list(spec.generators), max_order)
    G = W.group
    N = G.order
    A = spec.abstract_group
    iso_ok = False
    if A.order == N:
        f = None
        if spec.labeling is not None and len(spec.labeling) == len(spec.generators):
            f = gr.extend_partial(A, G, list(spec.labeling), list(W.generator_indices), True)
            if f is not None and (f < 0).any():
                f = None
        iso_ok = f is not None or gr.isomorphism(A, G) is not None
    phis = W.phi_indices()
    image = tuple(["1", "a", "b", "ab"][i] for i in sorted(set(phis.tolist())))
    homtriv = image == ("1",)

    fixed = [None] * N
    kinds = Counter()
    offending = []
    lefschetz_ok = True
    for i in range(1, N):
        x = W.elements[i]
        fs = fixed_set(x)
        fixed[i] = fs
        kinds[fs.kind] += 1
        if euler_characteristic(fs) != lefschetz(phi(x)):
            lefschetz_ok = False
        if fs.dimension >= 1:
            offending.append({"index": i, "element": x.to_json(), "fixed_set": fs.to_json()})
    pseudofree = not offending
    base = dict(order=N, isomorphic_to_abstract=iso_ok, phi_image=image, pseudofree=pseudofree,
                offending_elements=offending, lefschetz_ok=lefschetz_ok,
                homologically_trivial=homtriv, fixed_kinds=dict(kinds))
    if not pseudofree:
        return ActionReport(singular_orbits=[], rh_data=(), pairing={}, **base)

    four = all(fs.kind == FIX_FINITE and len(fs.points) == 4 for fs in fixed[1:]) if homtriv else None
    chi_q = Fraction(sum(lefschetz(phi(x)) for x in W.elements), N)
    pts_list = [fs.points for fs in fixed[1:] if fs.kind == FIX_FINITE]
    if not pts_list:
        rh_ok = (4 == N * chi_q)
        return ActionReport(singular_orbits=[], rh_data=(), pairing={}, chi_quotient=chi_q,
                            rh_identity_ok=rh_ok, four_fixed_points=four,
                            repeated_in_pairs=True if homtriv else None, halved_data=(),
                            s2_family=None, orbit_divisibility_ok=True, isotropy_cyclic=True, **base)
    pts = _dedupe_points(np.concatenate(pts_list), tolerance)
    P = len(pts)
    tree = cKDTree(pts)
    mats = np.stack([x.matrix6() for x in W.elements])          # (N, 6, 6)
    images = np.einsum("gij,pj->gpi", mats, pts)                 # (N, P, 6)
    dist, idx = tree.query(images.reshape(-1, 6), distance_upper_bound=tolerance)
    if np.isinf(dist).any():
        raise AmbiguityError("image of a singular point is not a singular point within tolerance")
    perm = idx.reshape(N, P)                                     # perm[g, p] = index of g(p)

    orbit_of = np.full(P, -1)
    orbits = []
    for p in range(P):
        if orbit_of[p] >= 0:
            continue
        members = sorted(set(perm[:, p].tolist()))
        orbit_of[members] = len(orbits)
        orbits.append(members)
    orders = G.orders
    stabs, infos = [], []
    for members in orbits:
        p0 = members[0]
        stab = tuple(int(g) for g in np.nonzero(perm[:, p0] == p0)[0])
        n_i = len(stab)
        if n_i * len(members) != N:
            raise AmbiguityError("orbit-stabilizer count failed")
        gens_max = [g for g in stab if orders[g] == n_i]
        cyc = bool(gens_max)
        gen = gens_max[0] if cyc else max(stab, key=lambda g: orders[g])
        stabs.append(frozenset(stab))
        infos.append((members, stab, n_i, gen, cyc))
    type_ids = _subgroup_class_ids(G, stabs)

    singular = []
    for (members, stab, n_i, gen, cyc), tid in zip(infos, type_ids):
        x = W.elements[gen]
        rn = local_rotation_numbers(x, pts[members[0]], int(orders[gen]))
        try:
            lens = lens_type(rn)
        except GroupError:
            lens = ()
        singular.append(SingularOrbit(pts[members], stab, n_i, gen, rn, lens, cyc, tid))
    rh = tuple(sorted(o.order for o in singular))
    rh_ok = (4 == N * chi_q - sum(N - Fraction(N, n) for n in rh))
    if homtriv:
        rh_ok = rh_ok and chi_q == 4

    # orbits meeting Fix(G_x) divide the number of points of Fix(G_x)
    div_ok = True
    for o in (singular if homtriv else ()):
        fs = fixed[o.generator]
        _, near = tree.query(fs.points)
        met = {int(orbit_of[j]) for j in near}
        if len(fs.points) % len(met):
            div_ok = False

    pairing = Counter((o.type_id, o.order) for o in singular)
    pairs = all(v % 2 == 0 for v in pairing.values())
    halved, fam = None, None
    if pairs:
        halved = tuple(sorted(n for (t, n), v in pairing.items() for _ in range(v // 2)))
        fam = s2_family(halved, N)
    return ActionReport(singular_orbits=singular, rh_data=rh, pairing=dict(pairing),
                        chi_quotient=chi_q, rh_identity_ok=bool(rh_ok), four_fixed_points=four,
                        repeated_in_pairs=pairs, halved_data=halved, s2_family=fam,
                        orbit_divisibility_ok=div_ok,
                        isotropy_cyclic=all(o.cyclic for o in singular), **base)


# ---------------------------------------------------------------- builder registry

def _int_or_none(v):
    return None if v in (None, "", "none") else int(v)


def _swap_cyclic_from(n, u=-1, g=None, allow_split=False):
    n = int(n)
    aut = ext.CyclicAutData.from_multiplier(n, int(u) % n if n > 1 else 0)
    if g is None:
        g = _nonsplit_class(aut)
    return build_swap_cyclic(n, aut, int(g), bool(allow_split))


def _swap_dihedral_from(n, a=0, b=1, which_class=0, gamma=None, allow_split=False):
    n = int(n)
    if n == 2:
        g = gamma if gamma is not None else "identity"
    else:
        g = ext.DihedralAut(n, int(a), int(b))
    return build_swap_dihedral(n, g, int(which_class), bool(allow_split))


BUILDERS = {
    "diagonal": lambda family, n=None: build_semidiagonal(family, _int_or_none(n)),
    "semidiagonal": lambda family, n=None, psi="identity": build_semidiagonal(
        family, _int_or_none(n), int(psi) if str(psi).lstrip("-").isdigit() else psi),
    "minus-id-ZnxZ2": lambda n: build_minus_id(int(n), "ZnxZ2"),
    "minus-id-Z2n": lambda n: build_minus_id(int(n), "Z2n"),
    "swap-cyclic": _swap_cyclic_from,
    "swap-dihedral": _swap_dihedral_from,
    "full": lambda case, n2, m_minus=1, m_plus=1: build_full(int(case), int(n2), int(m_minus), int(m_plus)),
    "kernel-alpha": lambda family, n=None: build_kernel_with_alpha(family, _int_or_none(n)),
    "commuting-pair": lambda k: build_commuting_pair(int(k)),
    "z2-cubed": lambda: build_z2_cubed(),
}


def build(tag: str, **params) -> ActionSpec:
    """Run a builder by tag with keyword parameters (strings are accepted)."""
    if tag not in BUILDERS:
        raise GroupError(f"unknown builder {tag!r}; known: {', '.join(sorted(BUILDERS))}")
    try:
        return BUILDERS[tag](**params)
    except TypeError as e:
        raise GroupError(f"bad parameters for {tag}: {e}") from None

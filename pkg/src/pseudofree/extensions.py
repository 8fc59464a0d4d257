"""Extensions of small groups by Z2 and by Z2 x Z2.

An extension 1 -> K -> G -> Z2 -> 1 is determined by an automorphism gamma of
K (conjugation by a lift q, q^-1 k q = gamma(k)) and the element g = q^2 of K.
The pair is realizable exactly when gamma fixes g and gamma^2 = mu_g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import groups as gr
from .groups import FiniteGroup, GroupError, GroupHom, ShortExactSequence

TAG_SPLIT = "split-semidirect"
TAG_CYCLIC_SEMI = "Z_m-:Z_2^(n2+1) x Z_m+"
TAG_BINARY_DIHEDRAL = "D*_2^(n2-1)m- x Z_m+"
Z2Z2_TAGS = ("L2.4-case-1", "L2.4-case-2", "L2.4-case-3", "L2.4-case-4")
NOT_APPLICABLE = "not-applicable"


class ObstructionError(GroupError):
    """No extension realizes the requested automorphism."""


# ---------------------------------------------------------------- generic construction

@dataclass(frozen=True, eq=False)
class ExtensionData:
    kernel: FiniteGroup
    gamma: GroupHom
    g_q2: int

    def check(self) -> None:
        K, f = self.kernel, self.gamma
        if not (f.is_homomorphism() and f.is_injective()):
            raise GroupError("gamma is not an automorphism of the kernel")
        if f(self.g_q2) != self.g_q2:
            raise GroupError("gamma does not fix g_q2")
        mu = gr.conjugation_hom(K, self.g_q2)
        if not (f.image[f.image] == mu.image).all():
            raise GroupError("gamma^2 is not conjugation by g_q2")

    def is_valid(self) -> bool:
        try:
            self.check()
        except GroupError:
            return False
        return True


def extension_from_data(data: ExtensionData, name: str = "") -> ShortExactSequence:
    """The group <K, q | q^2 = g, q^-1 k q = gamma(k)> with its exact sequence.

    Element k + |K|*e stands for k q^e.
    """
    data.check()
    K, g = data.kernel, data.g_q2
    nk = K.order
    ginv = data.gamma.inverse().image
    idx = np.arange(2 * nk)
    k, e = idx % nk, idx // nk
    # (k1 q^e1)(k2 q^e2) = k1 * gamma^-e1(k2) * q^(e1+e2), with q^2 = g
    k2_moved = np.where(e[:, None] == 1, ginv[k[None, :]], k[None, :])
    prod_k = K.table[k[:, None], k2_moved]
    e_sum = e[:, None] + e[None, :]
    prod_k = np.where(e_sum == 2, K.table[prod_k, g], prod_k)
    table = prod_k + nk * (e_sum % 2)
    gens = list(K.generators) + [("q", nk + K.identity)]
    names = None
    if K.element_names:
        names = tuple(K.element_names) + tuple(f"{x}q" for x in K.element_names)
    G = FiniteGroup(table, K.identity, gens, names, name or f"{K.name}.Z2")
    Q = gr.cyclic(2)
    seq = ShortExactSequence(K, G, Q, GroupHom(K, G, np.arange(nk)),
                             GroupHom(G, Q, e.copy()))
    return seq


def lift_outside(seq: ShortExactSequence) -> list[int]:
    inK = set(seq.kernel_indices())
    return [x for x in range(seq.total.order) if x not in inK]


def conjugation_on_kernel(seq: ShortExactSequence, x: int) -> np.ndarray:
    """Automorphism k -> x^-1 k x of the kernel, as an image array in kernel indices."""
    G = seq.total
    inc = seq.inclusion.image
    back = {int(v): i for i, v in enumerate(inc)}
    return np.array([back[G.conj(x, int(v))] for v in inc], dtype=np.int64)


def realizing_elements(K: FiniteGroup, gamma: GroupHom) -> list[int]:
    """All g in K with gamma(g) = g and gamma^2 = mu_g."""
    sq = gamma.image[gamma.image]
    out = []
    t, inv = K.table, K.inverses
    for g in range(K.order):
        if gamma(g) != g:
            continue
        if (t[t[inv[g]], g] == sq).all():
            out.append(g)
    return out


def inner_roots(K: FiniteGroup, gamma: GroupHom) -> list[int]:
    """All g with gamma^2 = mu_g (a coset of the center, or empty)."""
    sq = gamma.image[gamma.image]
    t, inv = K.table, K.inverses
    return [g for g in range(K.order) if (t[t[inv[g]], g] == sq).all()]


def equivalence_classes(K: FiniteGroup, gamma: GroupHom, candidates: list[int]) -> list[list[int]]:
    """Group realizing elements into extension-equivalence classes.

    With gamma fixed, replacing q by zq for central z turns g into z gamma^-1(z) g.
    """
    Z = gr.center(K)
    ginv = gamma.inverse().image
    shifts = {K.mul(z, int(ginv[z])) for z in Z}
    remaining = sorted(candidates)
    classes = []
    while remaining:
        g = remaining[0]
        orbit = sorted({K.mul(s, g) for s in shifts})
        classes.append(orbit)
        remaining = [x for x in remaining if x not in orbit]
    return classes


# ---------------------------------------------------------------- cyclic kernels

def two_adic(n: int) -> tuple[int, int]:
    """(n2, odd part)."""
    n2 = 0
    while n % 2 == 0 and n > 0:
        n //= 2
        n2 += 1
    return n2, n


def _crt(residues: list[tuple[int, int]]) -> int:
    x, m = 0, 1
    for r, mod in residues:
        # solve x' = x mod m, x' = r mod mod
        for k in range(mod):
            cand = x + k * m
            if cand % mod == r % mod:
                x = cand
                break
        m *= mod
    return x % m if m > 1 else 0


@dataclass(frozen=True)
class CyclicAutData:
    """An automorphism of Z_n of order dividing 2, in signed prime-power form."""
    n: int
    delta2: int = 0
    eps2: int = 1
    eps_p: tuple = ()     # sorted pairs (odd prime, +1 or -1)

    def __post_init__(self):
        if self.n < 1:
            raise GroupError("n must be positive")
        if self.delta2 not in (0, 1) or self.eps2 not in (1, -1):
            raise GroupError("delta2 must be 0/1 and eps2 must be +1/-1")
        eps = dict(self.eps_p) if not isinstance(self.eps_p, dict) else self.eps_p
        primes = sorted(p for p in gr.prime_factors(self.n) if p != 2)
        for p in primes:
            eps.setdefault(p, 1)
        if sorted(eps) != primes or any(v not in (1, -1) for v in eps.values()):
            raise GroupError("eps_p must be a +-1 sign for each odd prime dividing n")
        object.__setattr__(self, "eps_p", tuple(sorted(eps.items())))
        if self.delta2 and 2 ** self.n2 < 8:
            raise GroupError("delta2 = 1 needs 8 | n")

    @property
    def n2(self) -> int:
        return two_adic(self.n)[0]

    @property
    def m_minus(self) -> int:
        f = gr.prime_factors(self.n)
        return math.prod(p ** f[p] for p, e in self.eps_p if e == -1)

    @property
    def m_plus(self) -> int:
        f = gr.prime_factors(self.n)
        return math.prod(p ** f[p] for p, e in self.eps_p if e == 1)

    @property
    def multiplier(self) -> int:
        """u with the automorphism x -> u x."""
        f = gr.prime_factors(self.n)
        parts = []
        if self.n2:
            m2 = 2 ** self.n2
            parts.append(((self.eps2 + self.delta2 * 2 ** (self.n2 - 1)) % m2, m2))
        for p, e in self.eps_p:
            parts.append((e % p ** f[p], p ** f[p]))
        return _crt(parts) if self.n > 1 else 0

    def as_hom(self, K: FiniteGroup | None = None) -> GroupHom:
        K = K or gr.cyclic(self.n)
        u = self.multiplier
        return GroupHom(K, K, (u * np.arange(self.n)) % self.n)

    @classmethod
    def from_multiplier(cls, n: int, u: int) -> "CyclicAutData":
        if (u * u - 1) % n:
            raise GroupError(f"x -> {u}x is not an involution of Z{n}")
        n2, _ = two_adic(n)
        f = gr.prime_factors(n)
        eps = tuple((p, 1 if (u - 1) % p ** f[p] == 0 else -1) for p in sorted(f) if p != 2)
        delta2, eps2 = 0, 1
        if n2:
            m2 = 2 ** n2
            r = u % m2
            for d in (0, 1):
                for e in (1, -1):
                    if n2 < 3 and d:
                        continue
                    if (e + d * 2 ** (n2 - 1)) % m2 == r:
                        delta2, eps2 = d, e
                        break
                else:
                    continue
                break
        data = cls(n, delta2, eps2, eps)
        if data.multiplier != u % n:
            raise GroupError("multiplier not representable")
        return data

    @classmethod
    def enumerate(cls, n: int) -> list["CyclicAutData"]:
        """All encodings for Z_n (distinct automorphisms only)."""
        out = {}
        for u in range(n):
            if math.gcd(u, n) == 1 and (u * u - 1) % n == 0:
                d = cls.from_multiplier(n, u)
                out[u] = d
        if n == 1:
            out[0] = cls(1)
        return [out[u] for u in sorted(out)]

    def to_json(self) -> dict:
        return {"n": self.n, "delta2": self.delta2, "eps2": self.eps2,
                "eps_p": {str(p): e for p, e in self.eps_p}}


@dataclass(frozen=True, eq=False)
class ClassifiedExtension:
    sequence: ShortExactSequence
    g_q2: int
    tag: str
    split: bool
    expected: FiniteGroup | None = None


def cyclic_semidirect_inversion(m: int, k: int) -> FiniteGroup:
    """Z_m x| Z_k with generator acting by inversion (k even or m <= 2)."""
    return gr.cyclic_semidirect(m, k, (-1) % m if m > 1 else 0, f"Z{m}:Z{k}")


def expected_cyclic_extension(aut: CyclicAutData, split: bool) -> FiniteGroup:
    n, u = aut.n, aut.multiplier
    if split:
        if n == 1:
            return gr.cyclic(2)
        return gr.cyclic_semidirect(n, 2, u, f"Z{n}:Z2")
    n2, mm, mp = aut.n2, aut.m_minus, aut.m_plus
    if aut.eps2 == 1:
        core = cyclic_semidirect_inversion(mm, 2 ** (n2 + 1))
    else:
        core = gr.binary_dihedral(2 ** (n2 - 1) * mm)
    return gr.direct_product(core, gr.cyclic(mp)) if mp > 1 else core


def classify_cyclic_z2_extensions(n: int, aut: CyclicAutData) -> list[ClassifiedExtension]:
    """All extension classes 0 -> Z_n -> G -> Z2 -> 1 with conjugation given by ``aut``."""
    if aut.n != n:
        raise GroupError("automorphism data is for a different n")
    K = gr.cyclic(n)
    gamma = aut.as_hom(K)
    cands = realizing_elements(K, gamma)
    out = []
    for cls in equivalence_classes(K, gamma, cands):
        g = cls[0]
        seq = extension_from_data(ExtensionData(K, gamma, g))
        split = seq.splits()
        if split:
            tag = TAG_SPLIT
        elif aut.eps2 == 1:
            tag = TAG_CYCLIC_SEMI
        else:
            tag = TAG_BINARY_DIHEDRAL
        seq = ShortExactSequence(seq.kernel, seq.total, seq.quotient, seq.inclusion,
                                 seq.projection, tag)
        out.append(ClassifiedExtension(seq, g, tag, split, expected_cyclic_extension(aut, split)))
    return out


# ---------------------------------------------------------------- dihedral kernels

@dataclass(frozen=True)
class DihedralAut:
    """f_{a,b}: t -> s^a t, s -> s^b on D_n (n > 2)."""
    n: int
    a: int
    b: int

    def __post_init__(self):
        if self.n <= 2:
            raise GroupError("DihedralAut needs n > 2; D2 is handled separately")
        if math.gcd(self.b, self.n) != 1:
            raise GroupError("b must be a unit mod n")
        object.__setattr__(self, "a", self.a % self.n)
        object.__setattr__(self, "b", self.b % self.n)

    def compose(self, other: "DihedralAut") -> "DihedralAut":
        """self o other = f_{bc+a, bd}."""
        return DihedralAut(self.n, self.b * other.a + self.a, self.b * other.b)

    def image_array(self) -> np.ndarray:
        n = self.n
        idx = np.arange(2 * n)
        k, f = idx % n, idx // n
        return (self.b * k + self.a * f) % n + n * f

    def as_hom(self, D: FiniteGroup | None = None) -> GroupHom:
        D = D or gr.dihedral(self.n)
        return GroupHom(D, D, self.image_array())

    @classmethod
    def from_hom(cls, f: GroupHom) -> "DihedralAut":
        n = f.domain.order // 2
        sb, sat = f(1), f(n)
        return cls(n, sat % n, sb % n)


def conjugation_aut(n: int, elem: int) -> DihedralAut:
    """mu_elem: x -> elem^-1 x elem for elem = s^k t^f in D_n."""
    k, f = elem % n, elem // n
    # in this convention mu_{s^a} = f_{-2a,1}, mu_t = f_{0,-1}, mu_{s^k t} = mu_t o mu_{s^k}
    base = DihedralAut(n, -2 * k, 1)
    if f:
        return DihedralAut(n, 0, -1).compose(base)
    return base


def admissible(aut: DihedralAut) -> bool:
    """Whether some extension of D_n by Z2 realizes f_{a,b} by conjugation."""
    n, a, b = aut.n, aut.a, aut.b
    if (b * b - 1) % n == 0:
        sign = -1
    elif (b * b + 1) % n == 0:
        sign = 1
    else:
        return False
    if n % 2:
        return True
    # b is taken in [0, n); the parity of (b^2 -+ 1)/n does not depend on the representative
    q = (b * b + sign) // n
    return not (a % 2 == 1 and q % 2 == 1)


def build_dihedral_extension(n: int, aut, which_class: int = 0) -> ShortExactSequence:
    """The extension <D_n, q | q^2 = g, q^-1 x q = gamma(x)>.

    For n > 2, ``aut`` is a DihedralAut and ``which_class`` picks one of the
    (one or two) realizing elements g, sorted by index.  For n = 2, ``aut`` is
    an automorphism of dihedral(2) (GroupHom or image array); a nontrivial
    gamma gives D4 with the kernel mapped onto <s^2, t>, the trivial gamma
    gives Z2^3 (which_class 0) or Z4 x Z2 (which_class 1..3).
    """
    if n == 2:
        return _build_d2_extension(aut, which_class)
    if not isinstance(aut, DihedralAut) or aut.n != n:
        raise GroupError("need a DihedralAut for this n")
    if not admissible(aut):
        raise ObstructionError(f"f_({aut.a},{aut.b}) on D{n} is not admissible")
    D = gr.dihedral(n)
    gamma = aut.as_hom(D)
    cands = realizing_elements(D, gamma)
    if not cands:
        raise ObstructionError("no realizing element found")
    if n % 2 and which_class != 0:
        raise GroupError("odd n has a single extension class")
    if which_class not in range(len(cands)):
        raise GroupError(f"which_class must be in range({len(cands)})")
    seq = extension_from_data(ExtensionData(D, gamma, cands[which_class]),
                              name=f"D{n}.Z2[{aut.a},{aut.b},{which_class}]")
    return seq


def _build_d2_extension(aut, which_class: int) -> ShortExactSequence:
    D = gr.dihedral(2)
    if isinstance(aut, GroupHom):
        img = aut.image
    elif aut is None or aut == "identity":
        img = np.arange(4)
    elif aut == "swap":
        img = np.array([0, 2, 1, 3])   # exchange the two non-central involutions s and t
    else:
        img = np.asarray(aut)
    gamma = GroupHom(D, D, img)
    if not (gamma.is_homomorphism() and gamma.is_injective()):
        raise GroupError("not an automorphism of D2")
    cands = realizing_elements(D, gamma)
    classes = equivalence_classes(D, gamma, cands)
    if which_class not in range(len(classes)):
        raise GroupError(f"which_class must be in range({len(classes)})")
    g = classes[which_class][0]
    seq = extension_from_data(ExtensionData(D, gamma, g))
    trivial = (img == np.arange(4)).all()
    if trivial:
        target = gr.direct_product(gr.cyclic(2), gr.direct_product(gr.cyclic(2), gr.cyclic(2))) \
            if g == D.identity else gr.direct_product(gr.cyclic(4), gr.cyclic(2))
        return _relabel(seq, target, None)
    # nontrivial gamma: D4 with the kernel onto <s^2, t>
    D4 = gr.dihedral(4)
    sub = gr.closure(D4, [2, 4])
    return _relabel(seq, D4, sub)


def _relabel(seq: ShortExactSequence, target: FiniteGroup, kernel_image) -> ShortExactSequence:
    pres = []
    if kernel_image is not None:
        pres = [(seq.kernel_indices(), kernel_image)]
    iso = gr.isomorphism(seq.total, target, preserve=pres)
    if iso is None:
        raise GroupError("extension does not match the expected model")
    inv = iso.inverse()
    inc = GroupHom(seq.kernel, target, iso.image[seq.inclusion.image])
    proj = GroupHom(target, seq.quotient, seq.projection.image[inv.image])
    return ShortExactSequence(seq.kernel, target, seq.quotient, inc, proj, seq.tag)


# ---------------------------------------------------------------- polyhedral kernels

def platonic_extensions(K) -> list[ShortExactSequence]:
    """One extension of tet/oct/icos by Z2 for each outer automorphism class."""
    if isinstance(K, str):
        builders = {"tet": gr.tetrahedral, "oct": gr.octahedral, "icos": gr.icosahedral}
        if K not in builders:
            raise GroupError(f"unknown platonic group {K!r}")
        K = builders[K]()
    io = gr.inner_and_outer(K)
    out = []
    for rep in io.outer_reps:
        gamma = io.aut.automorphisms[rep]
        cands = realizing_elements(K, gamma)
        if not cands:
            raise ObstructionError("outer class is not realizable")
        seq = extension_from_data(ExtensionData(K, gamma, cands[0]), name=f"{K.name}.Z2")
        out.append(ShortExactSequence(seq.kernel, seq.total, seq.quotient, seq.inclusion,
                                      seq.projection, TAG_SPLIT if seq.splits() else "nonsplit"))
    return out


# ---------------------------------------------------------------- Z2 x Z2 quotients

@dataclass(frozen=True, eq=False)
class Z2Z2Case:
    tag: str
    reason: str = ""
    eps2: int | None = None
    n2: int | None = None
    m_minus: int | None = None
    m_plus: int | None = None
    witness: GroupHom | None = None
    expected: FiniteGroup | None = None
    lifts: list = field(default_factory=list)
    commute: bool | None = None


def z2z2_candidate(case: int, n2: int, m_minus: int, m_plus: int) -> FiniteGroup | None:
    """Abstract group of each structure case, or None for invalid parameters."""
    zp = gr.cyclic(m_plus)

    def with_plus(H):
        return gr.direct_product(H, zp) if m_plus > 1 else H

    if case == 1:
        return with_plus(gr.binary_dihedral(2 ** n2 * m_minus))
    if case == 3:
        if n2 < 1:
            return None
        return gr.direct_product(with_plus(gr.binary_dihedral(2 ** (n2 - 1) * m_minus)), gr.cyclic(2))
    if case == 4:
        return gr.direct_product(with_plus(cyclic_semidirect_inversion(m_minus, 2 ** (n2 + 1))),
                                 gr.cyclic(2))
    if case == 2:
        if n2 <= 1:
            return None
        return case2_group(n2, m_minus, m_plus)
    raise GroupError("case must be 1..4")


def case2_group(n2: int, m_minus: int, m_plus: int) -> FiniteGroup:
    """((Z_m- x| Z_2^(n2+1)) x Z_m+) x| Z2, the involution acting by y -> y^(1 + 2^n2)
    on the order-2^(n2+1) generator y and trivially on the odd parts."""
    H = with_plus_product(cyclic_semidirect_inversion(m_minus, 2 ** (n2 + 1)), m_plus)
    # element x^i y^j of Z_m- x| Z_2^(n2+1) has index i + m_minus * j
    mult = 1 + 2 ** n2
    k = 2 ** (n2 + 1)

    def act_base(i):
        x, j = i % m_minus, i // m_minus
        # y^j -> y^(mult j); x fixed
        return x + m_minus * ((mult * j) % k)

    if m_plus > 1:
        act = np.array([act_base(i // m_plus) * m_plus + i % m_plus for i in range(H.order)])
    else:
        act = np.array([act_base(i) for i in range(H.order)])
    return gr.semidirect_product(H, gr.cyclic(2), [np.arange(H.order), act],
                                 f"case2({n2},{m_minus},{m_plus})")


def with_plus_product(H: FiniteGroup, m_plus: int) -> FiniteGroup:
    return gr.direct_product(H, gr.cyclic(m_plus)) if m_plus > 1 else H


def _split_over(G: FiniteGroup, sub: set) -> bool:
    """Index-2 subgroup ``sub`` has a complement (an involution outside it)."""
    sq = G.table[np.arange(G.order), np.arange(G.order)]
    return any(x not in sub and sq[x] == G.identity for x in range(G.order))


def normalized_lifts(G: FiniteGroup, K: list[int], Ga: list[int], Gb: list[int], eps2: int) -> list[tuple[int, int]]:
    """All pairs (q_a, q_b) of lifts whose squares satisfy the normalization rules:
    squares lie in the Sylow 2-subgroup of K; q_a^2 is trivial or generates it;
    q_b^2 is trivial or generates it when eps2 = 1, trivial or of order two when eps2 = -1."""
    Kset = set(K)
    orders = G.orders
    syl = [x for x in K if orders[x] & (orders[x] - 1) == 0]
    syl_order = len(syl)
    e = G.identity

    def ok_a(x):
        s = G.mul(x, x)
        return s in syl and (s == e or orders[s] == syl_order)

    def ok_b(x):
        s = G.mul(x, x)
        if s not in syl:
            return False
        if s == e:
            return True
        return orders[s] == syl_order if eps2 == 1 else orders[s] == 2

    qa = [x for x in Ga if x not in Kset and ok_a(x)]
    qb = [x for x in Gb if x not in Kset and ok_b(x)]
    return [(a, b) for a in qa for b in qb]


def classify_z2z2_case(n: int, G: FiniteGroup, Ga, Gb) -> Z2Z2Case:
    """Which of the four structure cases G falls into, with a witness isomorphism."""
    Ga, Gb = sorted(set(Ga)), sorted(set(Gb))
    K = sorted(set(Ga) & set(Gb))
    N = G.order
    if len(K) != n or 4 * n != N or len(Ga) != 2 * n or len(Gb) != 2 * n:
        return Z2Z2Case(NOT_APPLICABLE, "orders do not match a Z_n kernel with Z2 x Z2 quotient")
    for S in (K, Ga, Gb):
        if not gr.is_subgroup(G, S) or not gr.is_normal(G, S):
            return Z2Z2Case(NOT_APPLICABLE, "subsets are not normal subgroups")
    Kg, _ = gr.induced_subgroup(G, K)
    if not gr.is_cyclic(Kg):
        return Z2Z2Case(NOT_APPLICABLE, "kernel is not cyclic")
    Gag, _ = gr.induced_subgroup(G, Ga)
    if not Gag.is_abelian():
        return Z2Z2Case(NOT_APPLICABLE, "G_a is not abelian")
    if _split_over(G, set(Ga)):
        return Z2Z2Case(NOT_APPLICABLE, "the b-side sequence splits")
    # gamma restricted to K: conjugation by any q_b, as multiplication by u
    k = next(x for x in K if G.orders[x] == n) if n > 1 else G.identity
    qb = next(x for x in Gb if x not in set(K))
    u = 0
    if n > 1:
        img = G.conj(qb, k)
        u = next(j for j in range(n) if G.power(k, j) == img)
    aut = CyclicAutData.from_multiplier(n, u)
    n2, mm, mp = aut.n2, aut.m_minus, aut.m_plus
    ga_cyclic = gr.is_cyclic(Gag)
    lifts = normalized_lifts(G, K, Ga, Gb, aut.eps2)
    commute = any(G.mul(a, b) == G.mul(b, a) for a, b in lifts)
    if ga_cyclic and n % 2 == 0:
        order = [1, 3, 4, 2]
    elif aut.eps2 == -1:
        order = [3, 1, 4, 2]
    elif commute:
        order = [4, 2, 1, 3]
    else:
        order = [2, 4, 1, 3]
    for case in order:
        cand = z2z2_candidate(case, n2, mm, mp)
        if cand is None or cand.order != N:
            continue
        iso = gr.isomorphism(G, cand)
        if iso is not None:
            return Z2Z2Case(Z2Z2_TAGS[case - 1], "", aut.eps2, n2, mm, mp, iso, cand, lifts,
                            commute)
    return Z2Z2Case(NOT_APPLICABLE, "no structure case matches", aut.eps2, n2, mm, mp,
                    lifts=lifts, commute=commute)

"""Decision procedure for (G, phi) tuples, the list of realizable groups,
Riemann-Hurwitz data enumeration and the builder/decider cross-check.

Homology images are encoded in the Klein group {1, a, b, ab} as 0..3, with
a = -I and b = swap, so that products are XOR.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import actions as ac
from . import cohomology as co
from . import extensions as ext
from . import groups as gr
from .groups import FiniteGroup, GroupError

KLEIN_NAMES = ("1", "a", "b", "ab")

ADMITS = "admits-linear-pseudofree"
REJECTED = "rejected"
K_NOT_POLYHEDRAL = "K-not-polyhedral"
GA_CONDITION = "Ga-not-abelian-or-K-not-cyclic"
B_SPLITS = "b-sequence-splits"
COMMUTING = "commuting-involution"
REASONS = (K_NOT_POLYHEDRAL, GA_CONDITION, B_SPLITS, COMMUTING)


# ---------------------------------------------------------------- tuples and verdicts

@dataclass(frozen=True, eq=False)
class ClassificationTuple:
    G: FiniteGroup
    phi: np.ndarray          # Klein index of each element
    relabeled: bool = False  # an <ab> image was moved to <b>

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=np.int64)
        if phi.shape != (self.G.order,) or phi.min() < 0 or phi.max() > 3:
            raise GroupError("phi must give a Klein index 0..3 for every element")
        t = self.G.table
        if not (phi[t] == (phi[:, None] ^ phi[None, :])).all():
            raise GroupError("phi is not a homomorphism to Z2 x Z2")
        if set(phi.tolist()) == {0, 3}:
            # sigma -> alpha sigma is an automorphism of W exchanging b and ab
            phi = np.where(phi == 3, 2, phi)
            object.__setattr__(self, "relabeled", True)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_wgroup(cls, W) -> "ClassificationTuple":
        return cls(W.group, W.phi_indices())

    @property
    def image(self) -> tuple:
        return tuple(KLEIN_NAMES[i] for i in sorted(set(self.phi.tolist())))

    @property
    def K(self) -> list[int]:
        return np.nonzero(self.phi == 0)[0].tolist()

    @property
    def Ga(self) -> list[int]:
        return np.nonzero((self.phi == 0) | (self.phi == 1))[0].tolist()

    @property
    def Gb(self) -> list[int]:
        return np.nonzero((self.phi == 0) | (self.phi == 2))[0].tolist()

    def to_json(self) -> dict:
        return {"group": self.G.to_json(), "phi": self.phi.tolist(), "image": list(self.image),
                "relabeled": self.relabeled}


@dataclass(frozen=True)
class Verdict:
    admits: bool
    reason: str | None = None
    detail: str = ""

    @property
    def tag(self) -> str:
        return ADMITS if self.admits else f"{REJECTED}({self.reason})"

    def to_json(self) -> dict:
        return {"verdict": ADMITS if self.admits else REJECTED, "reason": self.reason,
                "detail": self.detail}


def decide(t: ClassificationTuple) -> Verdict:
    """The four linear-realizability conditions, checked in order."""
    G, phi = t.G, t.phi
    K, Ga, Gb = t.K, t.Ga, t.Gb
    Kg, _ = gr.induced_subgroup(G, K)
    ptype = gr.polyhedral_type(Kg)
    if ptype is None:
        return Verdict(False, K_NOT_POLYHEDRAL, f"kernel of order {len(K)} is not polyhedral")
    if len(Ga) != len(K):
        Gag, _ = gr.induced_subgroup(G, Ga)
        if not (Gag.is_abelian() and ptype == "cyclic"):
            return Verdict(False, GA_CONDITION,
                           f"G_a abelian: {Gag.is_abelian()}, K {ptype}")
    sq = G.table[np.arange(G.order), np.arange(G.order)]
    if len(Gb) != len(K):
        gaset = set(Ga)
        inv = [x for x in range(G.order) if x not in gaset and sq[x] == G.identity]
        if inv:
            return Verdict(False, B_SPLITS, f"involution {inv[0]} lies outside G_a")
    qa = [x for x in range(G.order) if phi[x] == 1 and sq[x] == G.identity]
    qb = [x for x in range(G.order) if phi[x] == 2]
    for a in qa:
        for b in qb:
            if G.table[a, b] == G.table[b, a]:
                return Verdict(False, COMMUTING, f"q_a = {a} commutes with q_b = {b}")
    return Verdict(True, None, f"K {ptype}")


def klein_homs(G: FiniteGroup) -> list[np.ndarray]:
    """Every homomorphism G -> Z2 x Z2, as Klein-index arrays."""
    gens = gr.small_generating_set(G)
    out = []
    seen = set()
    for assign in np.ndindex(*([4] * len(gens))):
        phi = np.full(G.order, -1, dtype=np.int64)
        phi[G.identity] = 0
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, v in zip(gens, assign):
                    y = G.table[x, g]
                    if phi[y] < 0:
                        phi[y] = phi[x] ^ v
                        nxt.append(y)
            frontier = nxt
        if (phi[G.table] == (phi[:, None] ^ phi[None, :])).all():
            key = phi.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(phi)
    return out


def tuple_isomorphic(s: ClassificationTuple, t: ClassificationTuple) -> bool:
    """An isomorphism of groups carrying K, G_a, G_b onto each other."""
    if s.G.order != t.G.order or s.image != t.image:
        return False
    pres = [(s.K, t.K), (s.Ga, t.Ga), (s.Gb, t.Gb)]
    return gr.isomorphism(s.G, t.G, preserve=pres) is not None


def _tuple_key(t: ClassificationTuple) -> tuple:
    Kg, _ = gr.induced_subgroup(t.G, t.K)
    return (t.G.order, t.image, gr.invariant_profile(t.G), gr.invariant_profile(Kg))


# ---------------------------------------------------------------- the big list

@dataclass(frozen=True, eq=False)
class BigListEntry:
    family: str            # "1", "2", "3a", "3b", "3c", "4a", "4b"
    params: dict
    builder: str           # actions.BUILDERS tag
    builder_params: dict
    expected: FiniteGroup  # the abstract group named by the family
    image: tuple           # Klein names of phi(G)
    flags: tuple = ()

    @property
    def order(self) -> int:
        return self.expected.order

    def spec(self) -> ac.ActionSpec:
        return ac.build(self.builder, **self.builder_params)

    def to_json(self) -> dict:
        return {"family": self.family, "params": self.params, "order": self.order,
                "group": self.expected.name, "image": list(self.image),
                "builder": self.builder, "builder_params": self.builder_params,
                "flags": list(self.flags)}


def _candidates(max_order: int):
    """(family, params, builder, builder params, expected group, image, flags) before dedupe."""
    # (1) homologically trivial
    for n in range(2, max_order + 1):
        yield "1", {"group": f"Z{n}"}, "diagonal", {"family": "cyclic", "n": n}, gr.cyclic(n), ("1",), ()
    for n in range(2, max_order // 2 + 1):
        yield "1", {"group": f"D{n}"}, "diagonal", {"family": "dihedral", "n": n}, gr.dihedral(n), ("1",), ()
    for fam, order, build in (("tet", 12, gr.tetrahedral), ("oct", 24, gr.octahedral),
                              ("icos", 60, gr.icosahedral)):
        if order <= max_order:
            yield "1", {"group": fam}, "diagonal", {"family": fam}, build(), ("1",), ()
    # (2) phi(G) = <-I>
    for n in range(1, max_order // 2 + 1):
        yield ("2", {"group": f"Z{n}xZ2", "n": n}, "minus-id-ZnxZ2", {"n": n},
               gr.direct_product(gr.cyclic(n), gr.cyclic(2), f"Z{n}xZ2"), ("1", "a"), ())
        if n % 2 == 0:
            yield ("2", {"group": f"Z{2 * n}", "n": n}, "minus-id-Z2n", {"n": n},
                   gr.cyclic(2 * n), ("1", "a"), ())
    # (3a), (3b) phi(G) = <swap>, cyclic kernel
    for n in range(2, max_order // 2 + 1, 2):
        for aut in ext.CyclicAutData.enumerate(n):
            for c in ext.classify_cyclic_z2_extensions(n, aut):
                if c.split:
                    continue
                p = {"n": n, "n2": aut.n2, "m_minus": aut.m_minus, "m_plus": aut.m_plus,
                     "u": aut.multiplier}
                flags = ("degenerate",) if aut.m_minus == 1 else ()
                if aut.n2 == 1:
                    # -1 = 1 mod 2, and Z_m x| Z_4 with inversion is D*_m: both forms agree
                    fam, flags = "3b", flags + ("also-3a",)
                else:
                    fam = "3a" if aut.eps2 == 1 else "3b"
                yield (fam, p, "swap-cyclic", {"n": n, "u": aut.multiplier, "g": c.g_q2},
                       c.expected, ("1", "b"), flags)
    # (3c) phi(G) = <swap>, dihedral kernel
    for n in range(2, max_order // 4 + 1):
        for gamma, a, b, wc in _dihedral_reps(n):
            try:
                seq = ext.build_dihedral_extension(n, gamma, wc)
            except ext.ObstructionError:
                continue
            if seq.splits():
                continue
            bp = {"n": n, "which_class": wc}
            if n == 2:
                bp["gamma"] = gamma
            else:
                bp.update(a=a, b=b)
            yield "3c", {"n": n, "a": a, "b": b, "which_class": wc}, "swap-dihedral", bp, seq.total, ("1", "b"), ()
    # (4) phi(G) = Z2 x Z2
    for n2 in range(1, 8):
        for mm in range(1, max_order, 2):
            for mp in range(1, max_order, 2):
                n = 2 ** n2 * mm * mp
                if 4 * n > max_order or math.gcd(mm, mp) != 1:
                    continue
                for case, fam in ((1, "4a"), (2, "4b")):
                    if case == 2 and n2 <= 1:
                        continue
                    yield (fam, {"n2": n2, "m_minus": mm, "m_plus": mp}, "full",
                           {"case": case, "n2": n2, "m_minus": mm, "m_plus": mp},
                           ext.z2z2_candidate(case, n2, mm, mp), ("1", "a", "b", "ab"), ())


def _dihedral_reps(n: int):
    """Automorphisms of D_n up to inner ones, with the extension classes to try."""
    if n == 2:
        for wc in range(4):
            yield "identity", None, None, wc
        yield "swap", None, None, 0
        return
    inner = {(c.a, c.b) for c in (ext.conjugation_aut(n, e) for e in range(2 * n))}
    seen = set()
    for b in range(n):
        if math.gcd(b, n) != 1:
            continue
        for a in range(n):
            aut = ext.DihedralAut(n, a, b)
            # coset of aut modulo inner automorphisms
            coset = frozenset((aut.compose(ext.DihedralAut(n, ia, ib)).a,
                               aut.compose(ext.DihedralAut(n, ia, ib)).b) for ia, ib in inner)
            if coset in seen:
                continue
            seen.add(coset)
            if not ext.admissible(aut):
                continue
            for wc in range(2 if n % 2 == 0 else 1):
                yield aut, a, b, wc


def enumerate_big_list(max_order: int = 240, dedupe: bool = True) -> list[BigListEntry]:
    """Every instance of the realizable families with |G| <= max_order.

    Duplicates are detected by building the action and comparing the tuples
    (G, K, G_a, G_b) up to isomorphism; the first instance is kept.
    """
    entries: list[BigListEntry] = []
    buckets: dict = {}
    for fam, p, builder, bp, expected, image, flags in _candidates(max_order):
        if expected.order > max_order:
            continue
        e = BigListEntry(fam, p, builder, bp, expected, image, flags)
        if dedupe:
            W = ac.w_closure(list(e.spec().generators), max(512, max_order))
            t = ClassificationTuple.from_wgroup(W)
            key = _tuple_key(t)
            bucket = buckets.setdefault(key, [])
            if any(tuple_isomorphic(t, s) for s in bucket):
                continue
            bucket.append(t)
        entries.append(e)
    return entries


def find_in_big_list(t: ClassificationTuple, entries: list[BigListEntry], cache: dict | None = None):
    """The entry whose built action has a tuple isomorphic to t, or None."""
    cache = {} if cache is None else cache
    for i, e in enumerate(entries):
        if e.order != t.G.order or tuple(e.image) != t.image:
            continue
        if i not in cache:
            W = ac.w_closure(list(e.spec().generators), max(512, e.order))
            cache[i] = ClassificationTuple.from_wgroup(W)
        if tuple_isomorphic(t, cache[i]):
            return e
    return None


# ---------------------------------------------------------------- Riemann-Hurwitz data

@dataclass(frozen=True)
class RHData:
    chi: int
    tuple: tuple
    N: int
    family: str | None = None

    def identity_holds(self) -> bool:
        N = self.N
        return all(N % n == 0 and n >= 2 for n in self.tuple) and \
            self.chi == N * self.chi - sum(N - Fraction(N, n) for n in self.tuple)

    def to_json(self) -> dict:
        return {"chi": self.chi, "N": self.N, "tuple": list(self.tuple), "family": self.family}


@dataclass(frozen=True)
class RHFamily:
    """Tuples (constants + N/c for each c in divisors) valid for every N divisible enough."""
    constants: tuple
    divisors: tuple

    @property
    def modulus(self) -> int:
        return math.lcm(*self.constants, *self.divisors) if (self.constants or self.divisors) else 1

    def instance(self, N: int) -> tuple | None:
        if N % self.modulus or any(N // c < 2 for c in self.divisors):
            return None
        return tuple(sorted(self.constants + tuple(N // c for c in self.divisors)))

    @property
    def label(self) -> str:
        parts = [str(c) for c in self.constants] + ["N" if c == 1 else f"N/{c}" for c in self.divisors]
        return "(" + ",".join(parts) + ")"

    def to_json(self) -> dict:
        return {"pattern": self.label, "constants": list(self.constants),
                "divisors": list(self.divisors), "modulus": self.modulus}


def _partitions(total: int, parts: int, least: int = 1):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for c in range(least, total // parts + 1):
        for rest in _partitions(total - c, parts - 1, c):
            yield (c,) + rest


def _constant_sets(target: Fraction, max_terms: int, least: int = 2):
    """Sorted multisets of integers n >= least with sum(1 - 1/n) = target."""
    if target == 0:
        yield ()
        return
    if max_terms == 0:
        return
    if max_terms == 1:
        if target < 1 and (1 / (1 - target)).denominator == 1 and 1 / (1 - target) >= least:
            yield (int(1 / (1 - target)),)
        return
    # every term is < 1, so more than floor(target) terms are used, and the
    # smallest one is at most target / (floor(target) + 1)
    bound = target / (math.floor(target) + 1)
    n = least
    while 1 - Fraction(1, n) <= bound:
        for rest in _constant_sets(target - (1 - Fraction(1, n)), max_terms - 1, n):
            yield (n,) + rest
        n += 1


def rh_families(chi: int) -> list[RHFamily]:
    """All patterns whose instances satisfy the identity for every admissible N.

    Writing each entry as a constant n or as N/c, the identity is linear in N;
    matching coefficients gives sum(c) = chi and #variables + sum over
    constants of (1 - 1/n) = chi.
    """
    fams = []
    max_terms = 2 * chi - 1
    for v in range(1, chi + 1):
        rest = Fraction(chi - v)
        for cs in _partitions(chi, v):
            for consts in _constant_sets(rest, max_terms - v):
                fams.append(RHFamily(consts, cs))
    return sorted(fams, key=lambda f: (len(f.divisors), f.constants, f.divisors), reverse=True)


def _solutions_for_N(chi: int, N: int) -> list[tuple]:
    """Sorted tuples of divisors n >= 2 of N with sum(N - N/n) = (N - 1) chi."""
    divs = [d for d in range(2, N + 1) if N % d == 0]
    terms = [N - N // d for d in divs]
    target = (N - 1) * chi
    lo, hi = N // 2, N - 1
    m_max = 2 * chi - 1
    by_term = {t: d for t, d in zip(terms, divs)}
    out = []

    def rec(start, rem, chosen):
        if rem == 0:
            out.append(tuple(chosen))
            return
        if len(chosen) >= m_max:
            return
        left = m_max - len(chosen)
        if rem > left * hi:
            return
        # close with a single term when possible
        if rem in by_term and by_term[rem] >= (chosen[-1] if chosen else 2):
            out.append(tuple(chosen) + (by_term[rem],))
        for i in range(start, len(divs)):
            t = terms[i]
            if 2 * t > rem:
                break
            if rem - t > (left - 1) * hi:
                continue
            chosen.append(divs[i])
            rec(i, rem - t, chosen)
            chosen.pop()

    if N >= 2 and lo >= 0:
        rec(0, target, [])
    return sorted(set(out))


@dataclass(frozen=True, eq=False)
class RHEnumeration:
    chi: int
    max_N: int
    solutions: list           # RHData
    families: list            # RHFamily
    exceptional: list         # RHData matching no family
    family_hits: dict         # family label -> number of N realized

    def to_json(self) -> dict:
        return {"chi": self.chi, "max_N": self.max_N,
                "family_count": len(self.families),
                "families": [f.to_json() | {"instances": self.family_hits.get(f.label, 0)}
                             for f in self.families],
                "exceptional": [d.to_json() for d in self.exceptional],
                "solution_count": len(self.solutions)}

    def family_labels(self) -> set:
        out = {f.label for f in self.families if self.family_hits.get(f.label)}
        return out | {f"({','.join(map(str, d.tuple))})" for d in self.exceptional}


def enumerate_rh(chi: int, max_N: int) -> RHEnumeration:
    """All Riemann-Hurwitz tuples with quotient characteristic chi and N <= max_N."""
    if chi not in (2, 4):
        raise GroupError("chi must be 2 or 4")
    if max_N > 10 ** 6:
        raise GroupError("max_N is limited to 10^6")
    fams = rh_families(chi)
    sols, exc = [], []
    hits = Counter()
    for N in range(2, max_N + 1):
        inst = {}
        for f in fams:
            tup = f.instance(N)
            if tup is not None:
                inst.setdefault(tup, f.label)
        for tup in _solutions_for_N(chi, N):
            lab = inst.get(tup)
            d = RHData(chi, tup, N, lab)
            sols.append(d)
            if lab is None:
                exc.append(d)
            else:
                hits[lab] += 1
    return RHEnumeration(chi, max_N, sols, fams, exc, dict(hits))


NOT_PAIRED = "not-paired"


def pair_reduce(d: RHData):
    """Halve a tuple whose entries occur an even number of times, and name its
    spherical family; returns NOT_PAIRED otherwise."""
    c = Counter(d.tuple)
    if any(v % 2 for v in c.values()):
        return NOT_PAIRED
    halved = tuple(sorted(n for n, v in c.items() for _ in range(v // 2)))
    return halved, ac.s2_family(halved, d.N)


# ---------------------------------------------------------------- negative corpus and cross-check

@dataclass(frozen=True, eq=False)
class NegativeCase:
    name: str
    tuple: ClassificationTuple
    reason: str
    candidate: ac.ActionSpec | None = None


def _trivial(G: FiniteGroup) -> ClassificationTuple:
    return ClassificationTuple(G, np.zeros(G.order, dtype=np.int64))


def negative_corpus(max_order: int = 64) -> list[NegativeCase]:
    out = []
    z = ac.build_z2_cubed()
    out.append(NegativeCase("Z2^3 trivial", _trivial(z.abstract_group), K_NOT_POLYHEDRAL, z))
    for p in (5, 13):
        if 4 * p <= max_order:
            out.append(NegativeCase(f"Z{p}:Z4 trivial", _trivial(co.lens_group(p)), K_NOT_POLYHEDRAL))
    for n in range(2, 13):
        if 4 * n > max_order:
            break
        spec = ac.build_kernel_with_alpha("dihedral", n)
        t = ClassificationTuple.from_wgroup(ac.w_closure(list(spec.generators)))
        # D_2 is abelian but not cyclic; D_n for n > 2 is not abelian
        out.append(NegativeCase(f"D{n} x <alpha>", t, GA_CONDITION, spec))
    if 48 <= max_order:
        spec = ac.build_kernel_with_alpha("oct")
        t = ClassificationTuple.from_wgroup(ac.w_closure(list(spec.generators)))
        out.append(NegativeCase("S4 x <alpha>", t, GA_CONDITION, spec))
    for n in range(2, 33, 2):
        if 2 * n > max_order:
            break
        for aut in ext.CyclicAutData.enumerate(n):
            spec = ac.build_swap_cyclic(n, aut, 0, allow_split=True)
            t = ClassificationTuple.from_wgroup(ac.w_closure(list(spec.generators)))
            out.append(NegativeCase(f"split Z{n}.Z2 u={aut.multiplier}", t, B_SPLITS, spec))
    for n in (3, 4, 5, 6):
        if 4 * n > max_order:
            break
        aut = ext.DihedralAut(n, 0, 1)
        spec = ac.build_swap_dihedral(n, aut, 0, allow_split=True)
        W = ac.w_closure(list(spec.generators))
        t = ClassificationTuple.from_wgroup(W)
        if ext.build_dihedral_extension(n, aut, 0).splits():
            out.append(NegativeCase(f"split D{n}.Z2", t, B_SPLITS, spec))
    for k in range(1, 5):
        if 8 * k > max_order:
            break
        spec = ac.build_commuting_pair(k)
        t = ClassificationTuple.from_wgroup(ac.w_closure(list(spec.generators)))
        out.append(NegativeCase(f"Z{4 * k}xZ2 commuting", t, COMMUTING, spec))
    return out


@dataclass(frozen=True, eq=False)
class CrossCheckReport:
    max_order: int
    positives: list           # (entry json, verdict json, passed, mismatch)
    negatives: list           # (name, verdict json, expected reason, witness kind)
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"max_order": self.max_order, "ok": self.ok,
                "positives": len(self.positives), "negatives": self.negatives,
                "failures": self.failures}

    def to_text(self) -> str:
        lines = [f"cross-check up to order {self.max_order}: "
                 f"{len(self.positives)} realizable entries, {len(self.negatives)} negative cases"]
        for name, v, want, wit in self.negatives:
            lines.append(f"  {name:28s} {v['reason']!s:34s} witness: {wit}")
        lines.append("OK" if self.ok else f"{len(self.failures)} FAILURES")
        for f in self.failures:
            lines.append(f"  {f}")
        return "\n".join(lines)


def cross_check(max_order: int = 64) -> CrossCheckReport:
    positives, negatives, failures = [], [], []
    for e in enumerate_big_list(max_order):
        spec = e.spec()
        rep = ac.verify(spec, max(512, max_order))
        W = ac.w_closure(list(spec.generators), max(512, max_order))
        t = ClassificationTuple.from_wgroup(W)
        v = decide(t)
        iso = gr.isomorphic(W.group, e.expected)
        ok = rep.passed and v.admits and iso and tuple(rep.phi_image) == tuple(e.image)
        positives.append((e.to_json(), v.to_json(), rep.passed, iso))
        if not ok:
            failures.append({"entry": e.to_json(), "verdict": v.to_json(), "verify_passed": rep.passed,
                             "expected_isomorphic": iso, "image": list(rep.phi_image)})
    for case in negative_corpus(max_order):
        v = decide(case.tuple)
        wit = None
        if case.candidate is not None:
            rep = ac.verify(case.candidate, max(512, max_order))
            if rep.offending_elements:
                wit = rep.offending_elements[0]["fixed_set"]["kind"]
            if rep.pseudofree:
                failures.append({"negative": case.name, "problem": "candidate is pseudofree"})
        negatives.append((case.name, v.to_json(), case.reason, wit))
        if v.admits or v.reason != case.reason:
            failures.append({"negative": case.name, "verdict": v.to_json(), "expected": case.reason})
    return CrossCheckReport(max_order, positives, negatives, failures)

"""Finite groups stored as dense Cayley tables.

Every group is a table of element indices with a fixed identity and a list of
labelled generators.  Element indices are assigned in construction order, so
all derived data (automorphism lists, isomorphism witnesses, JSON) is
reproducible.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

DEFAULT_AUT_BOUND = 120
DEFAULT_ISO_BOUND = 240


class GroupError(ValueError):
    """Invalid parameters or malformed group data."""


class CapacityError(RuntimeError):
    """The requested computation exceeds a configured size bound."""


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    identity: int = 0
    generators: tuple = ()
    element_names: tuple | None = None
    name: str = ""
    _inv: np.ndarray = field(init=False, repr=False)
    _orders: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("table must be a non-empty square array")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "generators", tuple((str(l), int(i)) for l, i in self.generators))
        n = table.shape[0]
        e = self.identity
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(table == e)
        inv[rows] = cols
        if (inv < 0).any():
            raise GroupError("some element has no inverse")
        inv.setflags(write=False)
        object.__setattr__(self, "_inv", inv)
        object.__setattr__(self, "_orders", None)

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    @property
    def inverses(self) -> np.ndarray:
        return self._inv

    def product(self, *elems: int) -> int:
        x = self.identity
        for y in elems:
            x = int(self.table[x, y])
        return x

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result, base = self.identity, a
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def conj(self, g: int, h: int) -> int:
        """mu_g(h) = g^-1 h g."""
        return int(self.table[self.table[self._inv[g], h], g])

    @property
    def orders(self) -> np.ndarray:
        if self._orders is None:
            n = self.order
            orders = np.zeros(n, dtype=np.int64)
            cur = np.arange(n)
            done = np.zeros(n, dtype=bool)
            for k in range(1, n + 1):
                hit = (cur == self.identity) & ~done
                orders[hit] = k
                done |= hit
                if done.all():
                    break
                cur = self.table[cur, np.arange(n)]
            orders.setflags(write=False)
            object.__setattr__(self, "_orders", orders)
        return self._orders

    def element_order(self, a: int) -> int:
        return int(self.orders[a])

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def generator_indices(self) -> list[int]:
        return [i for _, i in self.generators]

    def generator(self, label: str) -> int:
        for l, i in self.generators:
            if l == label:
                return i
        raise KeyError(label)

    def name_of(self, a: int) -> str:
        if self.element_names is not None:
            return self.element_names[a]
        return str(a)

    def check_axioms(self, sample: int | None = None, seed: int = 0) -> None:
        """Raise GroupError unless the table defines a group generated by `generators`.

        Associativity is checked on all triples when ``sample`` is None.
        """
        t = self.table
        n = self.order
        e = self.identity
        if t.min() < 0 or t.max() >= n:
            raise GroupError("table entries out of range")
        if not ((t[e] == np.arange(n)).all() and (t[:, e] == np.arange(n)).all()):
            raise GroupError("identity is not two-sided")
        if not (t[np.arange(n), self._inv] == e).all() or not (t[self._inv, np.arange(n)] == e).all():
            raise GroupError("inverse is not two-sided")
        if sample is None:
            # (ab)c == a(bc) for all triples, one value of a at a time
            for a in range(n):
                if not (t[t[a]][:, :] == t[a][t]).all():
                    raise GroupError("table is not associative")
        else:
            rng = np.random.default_rng(seed)
            a, b, c = rng.integers(0, n, size=(3, sample))
            if not (t[t[a, b], c] == t[a, t[b, c]]).all():
                raise GroupError("table is not associative")
        if len(closure(self, self.generator_indices())) != n:
            raise GroupError("generators do not generate the group")

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "identity": self.identity,
            "table": self.table.tolist(),
            "generators": [{"label": l, "index": i} for l, i in self.generators],
        }

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "FiniteGroup":
        try:
            table = data["table"]
            g = cls(table=table, identity=int(data.get("identity", 0)),
                    generators=[(d["label"], d["index"]) for d in data.get("generators", [])],
                    name=name)
        except (KeyError, TypeError) as exc:
            raise GroupError(f"malformed group JSON: {exc}") from exc
        if "order" in data and int(data["order"]) != g.order:
            raise GroupError("order does not match table size")
        g.check_axioms(sample=None if g.order <= 60 else 20000)
        return g


@dataclass(frozen=True, eq=False)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    image: np.ndarray

    def __post_init__(self):
        img = np.asarray(self.image, dtype=np.int64)
        if img.shape != (self.domain.order,):
            raise GroupError("image array has the wrong length")
        img.setflags(write=False)
        object.__setattr__(self, "image", img)

    def __call__(self, a: int) -> int:
        return int(self.image[a])

    def is_homomorphism(self) -> bool:
        d, c, f = self.domain.table, self.codomain.table, self.image
        return bool((f[d] == c[f[:, None], f[None, :]]).all())

    def kernel(self) -> list[int]:
        return [int(i) for i in np.nonzero(self.image == self.codomain.identity)[0]]

    def image_set(self) -> list[int]:
        return sorted(set(int(x) for x in self.image))

    def is_injective(self) -> bool:
        return len(set(self.image.tolist())) == self.domain.order

    def is_surjective(self) -> bool:
        return len(set(self.image.tolist())) == self.codomain.order

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self o other."""
        return GroupHom(other.domain, self.codomain, self.image[other.image])

    def inverse(self) -> "GroupHom":
        inv = np.empty(self.codomain.order, dtype=np.int64)
        inv[self.image] = np.arange(self.domain.order)
        return GroupHom(self.codomain, self.domain, inv)


def identity_hom(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order))


def conjugation_hom(G: FiniteGroup, g: int) -> GroupHom:
    gi = G.inv(g)
    return GroupHom(G, G, G.table[G.table[gi], g])


@dataclass(frozen=True, eq=False)
class ShortExactSequence:
    kernel: FiniteGroup
    total: FiniteGroup
    quotient: FiniteGroup
    inclusion: GroupHom
    projection: GroupHom
    tag: str = ""

    def check_exact(self) -> None:
        if not (self.inclusion.is_homomorphism() and self.projection.is_homomorphism()):
            raise GroupError("maps are not homomorphisms")
        if not self.inclusion.is_injective():
            raise GroupError("inclusion is not injective")
        if not self.projection.is_surjective():
            raise GroupError("projection is not surjective")
        if sorted(self.inclusion.image.tolist()) != self.projection.kernel():
            raise GroupError("image of inclusion differs from kernel of projection")

    def kernel_indices(self) -> list[int]:
        return sorted(int(i) for i in self.inclusion.image)

    def splits(self) -> bool:
        """Whether a section exists; only implemented for quotient Z2."""
        if self.quotient.order != 2:
            raise GroupError("split test only implemented for quotient Z2")
        G = self.total
        inK = np.zeros(G.order, dtype=bool)
        inK[self.inclusion.image] = True
        sq = G.table[np.arange(G.order), np.arange(G.order)]
        return bool(((~inK) & (sq == G.identity)).any())

    def to_json(self) -> dict:
        return {
            "kernel": self.kernel.to_json(),
            "total": self.total.to_json(),
            "quotient": self.quotient.to_json(),
            "inclusion": self.inclusion.image.tolist(),
            "projection": self.projection.image.tolist(),
            "tag": self.tag,
        }


# ---------------------------------------------------------------- constructors

def from_elements(gens: Sequence[tuple[str, Hashable]], mul: Callable, identity: Hashable,
                  name: str = "", names: Callable | None = None) -> tuple[FiniteGroup, list]:
    """Close labelled generators under ``mul`` and tabulate.

    Returns the group and the list of concrete elements in index order
    (identity first, then breadth-first by generator order).
    """
    elems = [identity]
    index = {identity: 0}
    queue = deque([identity])
    gen_elems = [g for _, g in gens]
    while queue:
        x = queue.popleft()
        for g in gen_elems:
            y = mul(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            table[i, j] = index[mul(x, y)]
    labelled = [(label, index[g]) for label, g in gens if index[g] != 0]
    element_names = tuple(names(x) for x in elems) if names else None
    return FiniteGroup(table, 0, labelled, element_names, name), elems


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group needs n >= 1")
    r = np.arange(n)
    gens = [("g", 1)] if n > 1 else []
    return FiniteGroup((r[:, None] + r[None, :]) % n, 0, gens,
                       tuple(f"g^{i}" for i in range(n)), f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """D_n of order 2n; element k + n*f is s^k t^f."""
    if n < 1:
        raise GroupError("dihedral group needs n >= 1")
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for i in range(2 * n):
        k1, f1 = i % n, i // n
        for j in range(2 * n):
            k2, f2 = j % n, j // n
            k = (k1 + (-1) ** f1 * k2) % n
            table[i, j] = k + n * ((f1 + f2) % 2)
    gens = ([("s", 1)] if n > 1 else []) + [("t", n)]
    names = tuple(("s^%d" % (i % n)) + ("t" if i >= n else "") for i in range(2 * n))
    return FiniteGroup(table, 0, gens, names, f"D{n}")


def binary_dihedral(m: int) -> FiniteGroup:
    """D*_m of order 4m; element a + 2m*e is k^a q^e with q^2 = k^m, q^-1 k q = k^-1."""
    if m < 1:
        raise GroupError("binary dihedral group needs m >= 1")
    n = 2 * m
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for i in range(2 * n):
        a1, e1 = i % n, i // n
        for j in range(2 * n):
            a2, e2 = j % n, j // n
            if e1 == 0:
                a, e = a1 + a2, e2
            elif e2 == 0:
                a, e = a1 - a2, 1
            else:
                a, e = a1 - a2 + m, 0
            table[i, j] = a % n + n * e
    names = tuple(f"k^{i % n}" + ("q" if i >= n else "") for i in range(2 * n))
    return FiniteGroup(table, 0, [("k", 1 % n), ("q", n)], names, f"Dstar{m}")


def _perm_mul(p, q):
    # (p*q)(i) = p(q(i)): apply q first
    return tuple(p[i] for i in q)


def _perm_from_cycles(n, *cycles):
    p = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a] = b
    return tuple(p)


def permutation_group(n: int, gens: Sequence[tuple[str, tuple]], name: str) -> FiniteGroup:
    G, _ = from_elements(gens, _perm_mul, tuple(range(n)), name=name,
                         names=lambda p: "".join(map(str, p)))
    return G


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("symmetric group needs n >= 1")
    gens = []
    if n > 1:
        gens = [("c", _perm_from_cycles(n, list(range(n)))), ("t", _perm_from_cycles(n, [0, 1]))]
    return permutation_group(n, gens, f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("alternating group needs n >= 1")
    gens = []
    if n == 4:
        gens = [("x", _perm_from_cycles(4, [0, 1, 2])), ("y", _perm_from_cycles(4, [0, 1], [2, 3]))]
    elif n >= 3:
        odd = n if n % 2 else n - 1
        gens = [("x", _perm_from_cycles(n, list(range(odd)))), ("y", _perm_from_cycles(n, [0, 1, 2]))]
    return permutation_group(n, gens, f"A{n}")


def tetrahedral() -> FiniteGroup:
    return alternating(4)


def octahedral() -> FiniteGroup:
    return symmetric(4)


def icosahedral() -> FiniteGroup:
    return alternating(5)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    """Element (g, h) has index g*|H| + h."""
    m = H.order
    table = (G.table[:, None, :, None] * m + H.table[None, :, None, :]).reshape(G.order * m, G.order * m)
    glabels = {l for l, _ in G.generators}
    gens = [(l, i * m + H.identity) for l, i in G.generators]
    for l, j in H.generators:
        label = l if l not in glabels else l + "'"
        gens.append((label, G.identity * m + j))
    names = None
    if G.element_names and H.element_names:
        names = tuple(f"({a},{b})" for a in G.element_names for b in H.element_names)
    return FiniteGroup(table, G.identity * m + H.identity, gens, names,
                       name or f"{G.name}x{H.name}")


def semidirect_product(K: FiniteGroup, Q: FiniteGroup, action, name: str = "") -> FiniteGroup:
    """K x| Q where ``action[q]`` is the automorphism of K induced by q.

    ``action`` is a sequence (indexed by Q) of image arrays or GroupHoms, and
    must be a homomorphism Q -> Aut(K).  Element (k, q) has index k + |K|*q;
    the product is (k1, q1)(k2, q2) = (k1 * action[q1](k2), q1 q2).
    """
    acts = np.array([a.image if isinstance(a, GroupHom) else a for a in action], dtype=np.int64)
    if acts.shape != (Q.order, K.order):
        raise GroupError("action must give one automorphism of K per element of Q")
    for q in range(Q.order):
        if not GroupHom(K, K, acts[q]).is_homomorphism() or len(set(acts[q].tolist())) != K.order:
            raise GroupError("action contains a non-automorphism")
    for q1 in range(Q.order):
        for q2 in range(Q.order):
            if not (acts[Q.mul(q1, q2)] == acts[q1][acts[q2]]).all():
                raise GroupError("action is not a homomorphism Q -> Aut(K)")
    nk = K.order
    n = nk * Q.order
    idx = np.arange(n)
    k, q = idx % nk, idx // nk
    kk = K.table[k[:, None], acts[q[:, None], k[None, :]]]
    qq = Q.table[q[:, None], q[None, :]]
    table = kk + nk * qq
    klabels = {l for l, _ in K.generators}
    gens = [(l, i + nk * Q.identity) for l, i in K.generators]
    gens += [(l if l not in klabels else l + "'", K.identity + nk * j) for l, j in Q.generators]
    return FiniteGroup(table, K.identity + nk * Q.identity, gens, None,
                       name or f"{K.name}:{Q.name}")


def cyclic_semidirect(m: int, k: int, unit: int, name: str = "") -> FiniteGroup:
    """Z_m x| Z_k with the generator of Z_k acting by multiplication by ``unit``."""
    if math.gcd(unit, m) != 1 or pow(unit, k, m) != 1 % m:
        raise GroupError(f"{unit} does not define an action of Z{k} on Z{m}")
    K, Q = cyclic(m), cyclic(k)
    acts = [np.array([(pow(unit, j, m) * a) % m for a in range(m)]) for j in range(k)]
    return semidirect_product(K, Q, acts, name or f"Z{m}:Z{k}")


def make_group(family: str, *params) -> FiniteGroup:
    """Build a named family: cyclic n, dihedral n, binary_dihedral m, tet, oct, icos,
    direct_product(G, H), semidirect_product(K, Q, action)."""
    f = family.lower()
    if f in ("cyclic", "z"):
        return cyclic(int(params[0]))
    if f in ("dihedral", "d"):
        return dihedral(int(params[0]))
    if f in ("binary_dihedral", "dstar"):
        return binary_dihedral(int(params[0]))
    if f in ("tet", "tetrahedral", "a4"):
        return tetrahedral()
    if f in ("oct", "octahedral", "s4"):
        return octahedral()
    if f in ("icos", "icosahedral", "a5"):
        return icosahedral()
    if f == "direct_product":
        return direct_product(*params)
    if f == "semidirect_product":
        return semidirect_product(*params)
    raise GroupError(f"unknown group family {family!r}")


# ---------------------------------------------------------------- subgroups

def closure(G: FiniteGroup, elems: Iterable[int]) -> list[int]:
    """Sorted indices of the subgroup generated by ``elems``."""
    gens = sorted(set(int(x) for x in elems) - {G.identity})
    seen = {G.identity}
    queue = deque([G.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = int(G.table[x, g])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def is_subgroup(G: FiniteGroup, subset: Iterable[int]) -> bool:
    s = sorted(set(subset))
    if G.identity not in s:
        return False
    arr = np.array(s)
    return set(G.table[np.ix_(arr, arr)].ravel().tolist()) <= set(s)


def induced_subgroup(G: FiniteGroup, subset: Iterable[int], name: str = "",
                     gens: Sequence[int] | None = None) -> tuple[FiniteGroup, GroupHom]:
    """The subgroup on ``subset`` as a standalone group plus its inclusion into G.

    The identity gets index 0; the remaining elements keep their relative order.
    """
    s = sorted(set(int(x) for x in subset))
    if not is_subgroup(G, s):
        raise GroupError("subset is not a subgroup")
    s.remove(G.identity)
    s = [G.identity] + s
    pos = {x: i for i, x in enumerate(s)}
    arr = np.array(s)
    table = np.vectorize(pos.__getitem__, otypes=[np.int64])(G.table[np.ix_(arr, arr)])
    if gens is None:
        gens = small_generating_set(G, s)
    labelled = [(f"h{i}", pos[g]) for i, g in enumerate(gens) if g != G.identity]
    names = tuple(G.element_names[x] for x in s) if G.element_names else None
    H = FiniteGroup(table, 0, labelled, names, name)
    return H, GroupHom(H, G, arr)


def subgroup_generated(G: FiniteGroup, elems: Iterable[int], name: str = "") -> tuple[FiniteGroup, GroupHom]:
    elems = [int(x) for x in elems]
    return induced_subgroup(G, closure(G, elems), name, gens=[x for x in elems if x != G.identity])


def small_generating_set(G: FiniteGroup, subset: Sequence[int] | None = None) -> list[int]:
    """Greedy generating set: elements of largest order first, skipping redundant ones."""
    subset = list(range(G.order)) if subset is None else list(subset)
    orders = G.orders
    cand = sorted(subset, key=lambda x: (-orders[x], x))
    gens: list[int] = []
    have = {G.identity}
    target = len(subset)
    for x in cand:
        if len(have) == target:
            break
        if x not in have:
            gens.append(x)
            have = set(closure(G, gens))
    return gens


def centralizer(G: FiniteGroup, elems: Iterable[int]) -> list[int]:
    elems = list(elems)
    t = G.table
    mask = np.ones(G.order, dtype=bool)
    for g in elems:
        mask &= t[g, :] == t[:, g]
    return [int(i) for i in np.nonzero(mask)[0]]


def center(G: FiniteGroup) -> list[int]:
    return centralizer(G, range(G.order))


def conjugates_of_set(G: FiniteGroup, subset: Iterable[int], g: int) -> frozenset:
    return frozenset(G.conj(g, h) for h in subset)


def normalizer(G: FiniteGroup, subset: Iterable[int]) -> list[int]:
    s = frozenset(subset)
    return [g for g in range(G.order) if conjugates_of_set(G, s, g) == s]


def is_normal(G: FiniteGroup, subset: Iterable[int]) -> bool:
    return len(normalizer(G, subset)) == G.order


def conjugacy_classes(G: FiniteGroup) -> list[list[int]]:
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    t, inv = G.table, G.inverses
    for x in range(G.order):
        if seen[x]:
            continue
        cls = sorted(set(t[t[inv, x], np.arange(G.order)].tolist()))
        seen[cls] = True
        classes.append(cls)
    return classes


def quotient(G: FiniteGroup, N: Iterable[int], name: str = "") -> tuple[FiniteGroup, GroupHom]:
    """G/N with the projection; cosets ordered by their smallest element."""
    N = sorted(set(N))
    if not is_normal(G, N):
        raise GroupError("quotient by a non-normal subset")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            coset_of[G.table[g, N]] = len(reps)
            reps.append(g)
    r = np.array(reps)
    table = coset_of[G.table[np.ix_(r, r)]]
    gens = [(l, int(coset_of[i])) for l, i in G.generators if coset_of[i] != coset_of[G.identity]]
    Q = FiniteGroup(table, int(coset_of[G.identity]), gens, None, name)
    return Q, GroupHom(G, Q, coset_of)


def is_cyclic(G: FiniteGroup) -> bool:
    return bool((G.orders == G.order).any())


def commutator_subgroup(G: FiniteGroup) -> list[int]:
    t, inv = G.table, G.inverses
    comms = set()
    for a in range(G.order):
        for b in range(G.order):
            comms.add(int(t[t[inv[a], inv[b]], t[a, b]]))
    return closure(G, comms)


# ---------------------------------------------------------------- homomorphism search

def extend_partial(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], imgs: Sequence[int],
                   injective: bool = True) -> np.ndarray | None:
    """Extend gens -> imgs to a homomorphism on <gens>.

    Returns an array with -1 outside <gens>, or None if the assignment is not
    well defined (or not injective when requested).  Defining f(x g) = f(x) f(g)
    along a breadth-first spanning tree and checking every edge is equivalent
    to checking the homomorphism property on the subgroup.
    """
    f = np.full(G.order, -1, dtype=np.int64)
    f[G.identity] = H.identity
    used = {H.identity}
    queue = deque([G.identity])
    gt, ht = G.table, H.table
    pairs = list(zip(gens, imgs))
    while queue:
        x = queue.popleft()
        fx = f[x]
        for g, h in pairs:
            y = gt[x, g]
            fy = ht[fx, h]
            if f[y] < 0:
                if injective and fy in used:
                    return None
                f[y] = fy
                used.add(int(fy))
                queue.append(y)
            elif f[y] != fy:
                return None
    return f


def _invariant_keys(G: FiniteGroup) -> np.ndarray:
    t = G.table
    csize = (t == t.T).sum(axis=1)
    orders = G.orders
    # order of the square refines the profile a little more for free
    sq = orders[t[np.arange(G.order), np.arange(G.order)]]
    return np.stack([orders, csize, sq], axis=1)


def invariant_profile(G: FiniteGroup) -> tuple:
    keys = _invariant_keys(G)
    return tuple(sorted(Counter(map(tuple, keys.tolist())).items()))


def _search_maps(G, H, gens, cands, injective, accept, first_only):
    found = []

    def rec(i, imgs):
        if i == len(gens):
            f = extend_partial(G, H, gens, imgs, injective)
            if f is not None and accept(f):
                found.append(f)
                return first_only
            return False
        for c in cands[i]:
            f = extend_partial(G, H, gens[: i + 1], imgs + [c], injective)
            if f is None:
                continue
            if rec(i + 1, imgs + [c]):
                return True
        return False

    rec(0, [])
    return found


def isomorphism(G: FiniteGroup, H: FiniteGroup, bound: int = DEFAULT_ISO_BOUND,
                preserve: Sequence[tuple[Iterable[int], Iterable[int]]] = ()) -> GroupHom | None:
    """An isomorphism G -> H, or None.

    ``preserve`` is a list of (subset of G, subset of H) pairs that the
    isomorphism must carry onto each other.
    """
    if G.order != H.order:
        return None
    if G.order > bound:
        raise CapacityError(f"isomorphism test limited to order {bound}")
    if invariant_profile(G) != invariant_profile(H):
        return None
    pres = [(frozenset(a), frozenset(b)) for a, b in preserve]
    for a, b in pres:
        if len(a) != len(b):
            return None
    gk, hk = _invariant_keys(G), _invariant_keys(H)
    gens = small_generating_set(G)
    cands = []
    for g in gens:
        ok = np.nonzero((hk == gk[g]).all(axis=1))[0].tolist()
        ok = [h for h in ok if all((g in a) == (h in b) for a, b in pres)]
        cands.append(ok)

    def accept(f):
        return all(frozenset(f[list(a)].tolist()) == b for a, b in pres)

    found = _search_maps(G, H, gens, cands, True, accept, True)
    if not found:
        return None
    return GroupHom(G, H, found[0])


def isomorphic(G: FiniteGroup, H: FiniteGroup, bound: int = DEFAULT_ISO_BOUND) -> bool:
    return isomorphism(G, H, bound) is not None


# ---------------------------------------------------------------- automorphisms

@dataclass(frozen=True, eq=False)
class AutomorphismGroup:
    group: FiniteGroup          # abstract Aut(G); element i is automorphisms[i]
    automorphisms: list         # GroupHom G -> G, index 0 is the identity
    base: FiniteGroup

    def index_of(self, f) -> int:
        key = tuple((f.image if isinstance(f, GroupHom) else np.asarray(f)).tolist())
        return self._lookup()[key]

    def _lookup(self):
        lk = self.__dict__.get("_lk")
        if lk is None:
            lk = {tuple(a.image.tolist()): i for i, a in enumerate(self.automorphisms)}
            object.__setattr__(self, "_lk", lk)
        return lk

    def inner(self) -> list[int]:
        G = self.base
        return sorted({self.index_of(conjugation_hom(G, g)) for g in range(G.order)})


def automorphism_group(G: FiniteGroup, bound: int = DEFAULT_AUT_BOUND) -> AutomorphismGroup:
    """Aut(G) by backtracking over images of a small generating set.

    Group law in the abstract group: index(f) * index(g) = index(f o g).
    """
    if G.order > bound:
        raise CapacityError(f"automorphism group limited to order {bound}")
    gk = _invariant_keys(G)
    gens = small_generating_set(G)
    cands = [np.nonzero((gk == gk[g]).all(axis=1))[0].tolist() for g in gens]
    maps = _search_maps(G, G, gens, cands, True, lambda f: True, False)
    maps.sort(key=lambda f: (not (f == np.arange(G.order)).all(), f.tolist()))
    index = {tuple(f.tolist()): i for i, f in enumerate(maps)}
    n = len(maps)
    arr = np.array(maps)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        comp = arr[i][arr]  # row j: maps[i] o maps[j]
        for j in range(n):
            table[i, j] = index[tuple(comp[j].tolist())]
    A = FiniteGroup(table, 0, [(f"a{i}", i) for i in small_generating_set_from_table(table)],
                    None, f"Aut({G.name})")
    return AutomorphismGroup(A, [GroupHom(G, G, f) for f in maps], G)


def small_generating_set_from_table(table: np.ndarray) -> list[int]:
    tmp = FiniteGroup(table, 0, [])
    return small_generating_set(tmp)


@dataclass(frozen=True, eq=False)
class InnerOuter:
    aut: AutomorphismGroup
    inner: list             # indices into aut.automorphisms
    outer_reps: list        # one automorphism index per coset of Inn
    outer: FiniteGroup      # Out(G) = Aut/Inn
    projection: GroupHom    # Aut -> Out

    @property
    def inner_group(self) -> FiniteGroup:
        return induced_subgroup(self.aut.group, self.inner, f"Inn({self.aut.base.name})")[0]


def inner_and_outer(G: FiniteGroup, bound: int = DEFAULT_AUT_BOUND) -> InnerOuter:
    aut = automorphism_group(G, bound)
    inner = aut.inner()
    Out, proj = quotient(aut.group, inner, f"Out({G.name})")
    reps = []
    seen = set()
    for i in range(aut.group.order):
        c = proj(i)
        if c not in seen:
            seen.add(c)
            reps.append(i)
    return InnerOuter(aut, inner, reps, Out, proj)


def is_dihedral(G: FiniteGroup) -> bool:
    """Isomorphic to D_m for some m >= 1 (D_1 = Z2, D_2 = Klein four)."""
    n = G.order
    if n % 2:
        return False
    m = n // 2
    if m == 1:
        return True
    if m == 2:
        return bool((G.orders <= 2).all())
    orders = G.orders
    for s in np.nonzero(orders == m)[0]:
        C = set(closure(G, [int(s)]))
        if all(orders[x] == 2 for x in range(n) if x not in C):
            return True
    return False


def polyhedral_type(G: FiniteGroup) -> str | None:
    """'cyclic', 'dihedral', 'tet', 'oct', 'icos' or None."""
    if is_cyclic(G):
        return "cyclic"
    if is_dihedral(G):
        return "dihedral"
    for tag, build in (("tet", tetrahedral), ("oct", octahedral), ("icos", icosahedral)):
        if G.order == {"tet": 12, "oct": 24, "icos": 60}[tag] and isomorphic(G, build()):
            return tag
    return None


def prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    r = n
    for p in prime_factors(n):
        r = r // p * (p - 1)
    return r


def element_order_profile(G: FiniteGroup) -> tuple:
    return tuple(sorted(Counter(G.orders.tolist()).items()))


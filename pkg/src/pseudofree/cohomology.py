"""Group cohomology H^k(G; M) of finite groups with finitely generated coefficients.

Two independent routes compute the same groups:

* ``bar``: normalized inhomogeneous cochains (functions on (G - 1)^k).  Used for
  small groups and whenever explicit cocycles on G^k are wanted.
* ``resolution``: a free ZG-resolution built by exact integer kernels, with
  Hom_G(P_k, M) = M^{r_k}.  Scales to the larger groups.

Cochain groups are Z^n modulo a diagonal torsion vector; the quotient
ker / im is put in Smith form, so all arithmetic is exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import groups as gr
from ._intmat import Echelon, LatticeMembership, LatticeSolver, column_hnf_basis, kernel_lattice, smith
from .groups import CapacityError, FiniteGroup, GroupError, GroupHom

BAR_AUTO_LIMIT = 3000         # rows of the top coboundary before switching routes
BAR_HARD_LIMIT = 200000
RESOLUTION_MAX_ORDER = 120
MAX_DEGREE = 4


# ---------------------------------------------------------------- modules

@dataclass(frozen=True, eq=False)
class GModule:
    """Z^rank_free + sum Z/t with G acting through integer matrices."""
    group: FiniteGroup
    rank_free: int
    torsion: tuple
    action: np.ndarray          # shape (|G|, r, r)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        r = self.rank
        act = np.asarray(self.action, dtype=np.int64).reshape(self.group.order, r, r)
        act = act.copy()
        mods = self.moduli
        for j, t in enumerate(mods):
            if t:
                act[:, j, :] %= t
        act.setflags(write=False)
        object.__setattr__(self, "action", act)
        if any(t < 2 for t in self.torsion):
            raise GroupError("torsion orders must be at least 2")
        self.check()

    @property
    def rank(self) -> int:
        return self.rank_free + len(self.torsion)

    @property
    def moduli(self) -> tuple:
        return (0,) * self.rank_free + self.torsion

    def reduce(self, v):
        v = np.array(v, dtype=object)
        mods = self.moduli
        r = self.rank
        flat = v.reshape(-1, r) if v.size else v
        for j, t in enumerate(mods):
            if t:
                flat[:, j] %= t
        return flat.reshape(v.shape)

    def _eq_mod(self, A, B) -> bool:
        D = np.asarray(A, dtype=object) - np.asarray(B, dtype=object)
        for j, t in enumerate(self.moduli):
            row = D[j]
            if t:
                if any(int(x) % t for x in row):
                    return False
            elif any(int(x) for x in row):
                return False
        return True

    def check(self) -> None:
        G, A = self.group, self.action
        r = self.rank
        mods = self.moduli
        if not self._eq_mod(A[G.identity], np.eye(r, dtype=np.int64)):
            raise GroupError("identity must act trivially")
        # torsion relations map to torsion relations
        for g in range(G.order):
            for j, t in enumerate(mods):
                if t and not self._eq_mod(t * A[g][:, j:j + 1], np.zeros((r, 1), dtype=np.int64)):
                    raise GroupError("action does not preserve the torsion relations")
        for g in range(G.order):
            for h in range(G.order):
                if not self._eq_mod(A[G.mul(g, h)], A[g].astype(object) @ A[h].astype(object)):
                    raise GroupError("action is not a homomorphism")

    def restrict(self, inclusion: GroupHom) -> "GModule":
        return GModule(inclusion.domain, self.rank_free, self.torsion,
                       self.action[inclusion.image], self.name)


def trivial_module(G: FiniteGroup, m: int = 0) -> GModule:
    """Z (m = 0) or Z/m with trivial action."""
    act = np.ones((G.order, 1, 1), dtype=np.int64)
    if m == 0:
        return GModule(G, 1, (), act, "Z")
    return GModule(G, 0, (m,), act, f"Z{m}")


def cyclic_module(G: FiniteGroup, m: int, multipliers) -> GModule:
    """Z/m (m = 0 for Z) with element g acting by multipliers[g]."""
    act = np.array(multipliers, dtype=np.int64).reshape(G.order, 1, 1)
    if m == 0:
        return GModule(G, 1, (), act, "Z~")
    return GModule(G, 0, (m,), act % m, f"Z{m}~")


def module_from_generator_action(G: FiniteGroup, m: int, gen_mult: dict) -> GModule:
    """Rank-one module where each labelled generator acts by multiplication by a unit."""
    mult = {G.identity: 1}
    frontier = [G.identity]
    mod = m if m else None
    gens = [(G.generator(l), u) for l, u in gen_mult.items()]
    for l, i in G.generators:
        if l not in gen_mult:
            gens.append((i, 1))
    while frontier:
        nxt = []
        for x in frontier:
            for g, u in gens:
                y = G.mul(x, g)
                v = mult[x] * u
                if mod:
                    v %= mod
                if y not in mult:
                    mult[y] = v
                    nxt.append(y)
        frontier = nxt
    if len(mult) != G.order:
        raise GroupError("generators do not reach every element")
    return cyclic_module(G, m, [mult[g] for g in range(G.order)])


# ---------------------------------------------------------------- complexes

@dataclass(frozen=True, eq=False)
class CochainComplex:
    """Coboundaries delta^k : C^k -> C^(k+1), C^k = Z^(n_k) / moduli_k."""
    deltas: dict            # k -> integer matrix (n_{k+1} x n_k)
    moduli: dict            # k -> tuple of length n_k


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    degree: int
    factors: tuple              # 0 stands for a free Z summand
    generator_cocycles: list    # cochain vectors (route-specific coordinates)
    names: list
    route: str
    module: GModule
    _solver: LatticeSolver | None = field(repr=False, default=None)
    _P: np.ndarray | None = field(repr=False, default=None)
    _keep: list = field(repr=False, default_factory=list)
    _diag: list = field(repr=False, default_factory=list)
    _moduli: tuple = field(repr=False, default=())
    _delta: np.ndarray | None = field(repr=False, default=None)
    _tuples: list | None = field(repr=False, default=None)
    _next_moduli: tuple = field(repr=False, default=())

    @property
    def invariant_factors(self) -> tuple:
        return self.factors

    @property
    def order(self) -> float:
        if any(f == 0 for f in self.factors):
            return math.inf
        return math.prod(self.factors)

    def is_zero(self) -> bool:
        return len(self.factors) == 0

    def is_cocycle(self, x) -> bool:
        if self._delta is None:
            return True
        y = np.asarray(self._delta, dtype=object) @ np.asarray(x, dtype=object)
        mods = self._next_moduli
        return all((int(v) % t == 0) if t else int(v) == 0 for v, t in zip(y, mods))

    def coordinates(self, x) -> tuple:
        """Class of cocycle x in the factor basis (entries reduced mod each factor)."""
        if self._solver is None:
            return ()
        if not self.is_cocycle(x):
            raise GroupError("not a cocycle")
        c = self._solver.solve(np.asarray(x, dtype=object))
        if c is None:
            raise GroupError("not a cocycle")
        y = self._P @ c
        out = []
        for i, d in zip(self._keep, self._factors_full()):
            v = int(y[i])
            out.append(v % d if d else v)
        return tuple(out)

    def _factors_full(self):
        return [self._diag[i] for i in self._keep]

    def evaluate(self, i: int, args: tuple) -> tuple:
        """Value of the i-th generator cocycle on a tuple of group elements (bar route only)."""
        if self.route != "bar":
            raise GroupError("explicit evaluation needs the bar route")
        return _bar_value(self, self.generator_cocycles[i], args)

    def to_json(self) -> dict:
        return {"degree": self.degree, "factors": list(self.factors), "names": list(self.names)}

    def describe(self) -> str:
        if not self.factors:
            return "0"
        return " x ".join("Z" if f == 0 else f"Z{f}" for f in self.factors)


def _compact(D):
    """int64 copy of an integer matrix when its entries fit, else unchanged."""
    if D is None or D.dtype != object:
        return D
    if D.size == 0 or max(abs(int(x)) for x in D.ravel()) < (1 << 40):
        return D.astype(np.int64)
    return D


def _complex_cohomology(delta_prev, delta_k, mods_k, mods_next, degree, route, module,
                        tuples=None) -> CohomologyGroup:
    delta_prev, delta_k = _compact(delta_prev), _compact(delta_k)
    n = len(mods_k)
    if n == 0:
        return CohomologyGroup(degree, (), [], [], route, module)
    if delta_k is None or delta_k.shape[0] == 0:
        Z = np.eye(n, dtype=np.int64)
    else:
        Z = kernel_lattice(delta_k, mods_next)
    z = Z.shape[1]
    if z == 0:
        return CohomologyGroup(degree, (), [], [], route, module)
    solver = LatticeSolver(Z)
    rels = []
    if delta_prev is not None and delta_prev.shape[1]:
        for col in column_hnf_basis(delta_prev).T:
            rels.append(col)
    for j, t in enumerate(mods_k):
        if t:
            e = np.zeros(n, dtype=np.int64)
            e[j] = t
            rels.append(e)
    coords = []
    for r in rels:
        c = solver.solve(np.asarray(r, dtype=object))
        if c is None:
            raise GroupError("coboundary outside the cocycles: complex is not a complex")
        coords.append(c)
    C = np.array(coords, dtype=object).T if coords else np.zeros((z, 0), dtype=object)
    if C.shape[1]:
        C = column_hnf_basis(_compact(C))
    diag, P, Pinv = smith(C) if C.shape[1] else ([0] * z, np.eye(z, dtype=object), np.eye(z, dtype=object))
    keep = [i for i, d in enumerate(diag) if d != 1]
    factors = tuple(int(diag[i]) for i in keep)
    gens = []
    Zo = Z.astype(object)
    for i in keep:
        v = Zo @ Pinv[:, i]
        v = np.array([int(x) % t if t else int(x) for x, t in zip(v, mods_k)], dtype=object)
        gens.append(v)
    names = [f"x{i}" for i in range(len(keep))]
    return CohomologyGroup(degree, factors, gens, names, route, module, solver, P, keep,
                           list(diag), tuple(mods_k), delta_k, tuples, tuple(mods_next))


# ---------------------------------------------------------------- bar route

def _nonidentity(G: FiniteGroup) -> list[int]:
    return [g for g in range(G.order) if g != G.identity]


def _bar_delta(G: FiniteGroup, M: GModule, k: int) -> np.ndarray:
    """Matrix of delta^k on normalized cochains, coordinates (tuple index, module coord)."""
    ne = _nonidentity(G)
    m = len(ne)
    r = M.rank
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[ne] = np.arange(m)
    rows_n = m ** (k + 1)
    cols_n = m ** k
    D = np.zeros((rows_n * r, cols_n * r), dtype=np.int64)
    if rows_n == 0:
        return D
    T = np.array(list(itertools.product(range(m), repeat=k + 1)), dtype=np.int64).reshape(rows_n, k + 1)
    elems = np.array(ne, dtype=np.int64)[T]        # actual group elements
    radix = m ** np.arange(k - 1, -1, -1) if k else np.zeros(0, dtype=np.int64)

    def idx(cols):
        if k == 0:
            return np.zeros(rows_n, dtype=np.int64)
        return (pos[cols] * radix).sum(axis=1)

    row_ids = np.arange(rows_n)
    act = M.action
    # term 0: g1 . f(g2, ..., g_{k+1})
    tgt = idx(elems[:, 1:])
    for a in range(r):
        for b in range(r):
            np.add.at(D, (row_ids * r + a, tgt * r + b), act[elems[:, 0], a, b])
    # middle terms
    for i in range(1, k + 1):
        prod = G.table[elems[:, i - 1], elems[:, i]]
        ok = prod != G.identity
        merged = np.concatenate([elems[:, : i - 1], prod[:, None], elems[:, i + 1:]], axis=1)
        t = idx(np.where(ok[:, None], merged, elems[:, :k]))
        sign = (-1) ** i
        for a in range(r):
            np.add.at(D, (row_ids[ok] * r + a, t[ok] * r + a), sign)
    # last term
    t = idx(elems[:, :k])
    sign = (-1) ** (k + 1)
    for a in range(r):
        np.add.at(D, (row_ids * r + a, t * r + a), sign)
    mods = M.moduli
    for a, mod in enumerate(mods):
        if mod:
            D[a::r] %= mod
    return D


def _bar_moduli(G, M, k):
    m = G.order - 1
    return tuple(M.moduli) * (m ** k)


def _bar_value(H: CohomologyGroup, vec, args):
    G = H.module.group
    ne = _nonidentity(G)
    pos = {g: i for i, g in enumerate(ne)}
    r = H.module.rank
    if any(a == G.identity for a in args):
        return (0,) * r
    m = len(ne)
    t = 0
    for a in args:
        t = t * m + pos[a]
    return tuple(int(x) for x in vec[t * r:(t + 1) * r])


def bar_cochain(G: FiniteGroup, M: GModule, k: int, func) -> np.ndarray:
    """Vector of the normalized cochain (g1..gk) -> func(g1..gk) (module coordinates)."""
    ne = _nonidentity(G)
    r = M.rank
    out = []
    for tup in itertools.product(ne, repeat=k):
        v = func(*tup)
        v = (v,) if np.isscalar(v) or isinstance(v, (int, np.integer)) else tuple(v)
        out.extend(int(x) for x in v)
    return M.reduce(np.array(out, dtype=object)) if out else np.zeros(0, dtype=object)


def _bar_size(G, M, k):
    return (G.order - 1) ** (k + 1) * M.rank


def _bar_cohomology(G: FiniteGroup, M: GModule, k: int) -> CohomologyGroup:
    prev = _bar_delta(G, M, k - 1) if k >= 1 else None
    cur = _bar_delta(G, M, k)
    return _complex_cohomology(prev, cur, _bar_moduli(G, M, k), _bar_moduli(G, M, k + 1), k,
                               "bar", M)


# ---------------------------------------------------------------- resolution route

def _translate(G: FiniteGroup, v: np.ndarray, h: int, r: int) -> np.ndarray:
    """Left translate by h of a vector in ZG^r (coordinate i*|G| + g for g e_i)."""
    n = G.order
    w = np.zeros_like(v)
    vv = v.reshape(r, n)
    ww = w.reshape(r, n)
    ww[:, G.table[h]] = vv
    return w


class FreeResolution:
    """P_k = ZG^(r_k) with d_k(e_j) stored as integer vectors in ZG^(r_{k-1})."""

    def __init__(self, G: FiniteGroup, length: int):
        if G.order > RESOLUTION_MAX_ORDER:
            raise CapacityError(f"resolutions limited to groups of order {RESOLUTION_MAX_ORDER}")
        self.group = G
        self.ranks = [1]
        self.boundary_gens: list[list[np.ndarray]] = [[]]
        n = G.order
        gens = gr.small_generating_set(G)
        d1 = []
        for g in gens:
            v = np.zeros(n, dtype=np.int64)
            v[g] += 1
            v[G.identity] -= 1
            d1.append(v)
        self.ranks.append(len(d1))
        self.boundary_gens.append(d1)
        for k in range(2, length + 1):
            self._extend()

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def matrix(self, k: int) -> np.ndarray:
        """Z-matrix of d_k : ZG^(r_k) -> ZG^(r_{k-1}); column j*|G| + h is h.d(e_j)."""
        G = self.group
        n = G.order
        rk, rp = self.ranks[k], self.ranks[k - 1]
        dt = object if any(v.dtype == object for v in self.boundary_gens[k]) else np.int64
        D = np.zeros((rp * n, rk * n), dtype=dt)
        for j, v in enumerate(self.boundary_gens[k]):
            vv = v.reshape(rp, n)
            for h in range(n):
                col = np.zeros((rp, n), dtype=dt)
                col[:, G.table[h]] = vv
                D[:, j * n + h] = col.ravel()
        return D

    def _extend(self):
        G = self.group
        n = G.order
        k = self.length
        r = self.ranks[k]
        if r == 0:
            self.ranks.append(0)
            self.boundary_gens.append([])
            return
        D = self.matrix(k)
        K = kernel_lattice(D)
        if K.shape[1] == 0:
            self.ranks.append(0)
            self.boundary_gens.append([])
            return
        cols = [K[:, j] for j in range(K.shape[1])]
        # prefer short kernel vectors: they tend to generate more
        cols.sort(key=lambda v: (int(np.count_nonzero(v)), int(np.abs(v).sum())))
        L = LatticeMembership(r * n)
        chosen = []
        for v in cols:
            if L.contains(v):
                continue
            chosen.append(np.array(v))
            for h in range(n):
                L.add(_translate(G, np.array(v), h, r))
        self.ranks.append(len(chosen))
        self.boundary_gens.append(chosen)

    def check_exact(self) -> None:
        """d_{k} d_{k+1} = 0 and rank bookkeeping; raises GroupError on failure."""
        for k in range(1, self.length):
            A = self.matrix(k).astype(object)
            B = self.matrix(k + 1).astype(object)
            if B.shape[1] and not (A @ B == 0).all():
                raise GroupError(f"d_{k} d_{k+1} != 0")

    # cochains -----------------------------------------------------------
    def cochain_delta(self, M: GModule, k: int, coset=None) -> np.ndarray:
        """delta^k : Hom(P_k, M) -> Hom(P_{k+1}, M) in generator coordinates.

        With ``coset`` = (H_positions, reps) the complex is taken over ZH, with
        free basis (t e_i) for right coset representatives t.
        """
        G = self.group
        n = G.order
        r = M.rank
        act = M.action
        rk = self.ranks[k]
        rn = self.ranks[k + 1] if k + 1 < len(self.ranks) else 0
        if coset is None:
            D = np.zeros((rn * r, rk * r), dtype=object)
            for j, v in enumerate(self.boundary_gens[k + 1]):
                vv = v.reshape(rk, n)
                for i in range(rk):
                    nz = np.nonzero(vv[i])[0]
                    if len(nz) == 0:
                        continue
                    block = (vv[i, nz].astype(object)[:, None, None] * act[nz].astype(object)).sum(axis=0)
                    D[j * r:(j + 1) * r, i * r:(i + 1) * r] += block
        else:
            Hmap, reps, coset_of, hpart = coset
            nt = len(reps)
            D = np.zeros((rn * nt * r, rk * nt * r), dtype=object)
            for j, v in enumerate(self.boundary_gens[k + 1]):
                vv = v.reshape(rk, n)
                for ti, t in enumerate(reps):
                    row0 = (j * nt + ti) * r
                    for i in range(rk):
                        for g in np.nonzero(vv[i])[0]:
                            tg = G.mul(t, int(g))
                            tj = coset_of[tg]
                            h = hpart[tg]
                            col0 = (i * nt + tj) * r
                            D[row0:row0 + r, col0:col0 + r] += int(vv[i, g]) * act[h].astype(object)
        mods = M.moduli
        for a, m in enumerate(mods):
            if m:
                D[a::r] %= m
        return D


def _coset_data(G: FiniteGroup, H: list[int]):
    """Right cosets H t: representatives, coset index of each g, and h with g = h t."""
    Hs = set(H)
    coset_of = np.full(G.order, -1, dtype=np.int64)
    hpart = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_of[g] >= 0:
            continue
        t = g
        ci = len(reps)
        reps.append(t)
        for h in H:
            x = G.mul(h, t)
            coset_of[x] = ci
            hpart[x] = h
    return Hs, reps, coset_of, hpart


_RES_CACHE: dict = {}


def free_resolution(G: FiniteGroup, length: int) -> FreeResolution:
    key = (id(G), length)
    hit = _RES_CACHE.get(key)
    if hit is not None and hit[0] is G:
        return hit[1]
    R = FreeResolution(G, length)
    _RES_CACHE[key] = (G, R)
    return R


def _res_cohomology(G, M, k, R: FreeResolution, coset=None) -> CohomologyGroup:
    mult = 1 if coset is None else len(coset[1])
    prev = R.cochain_delta(M, k - 1, coset) if k >= 1 else None
    cur = R.cochain_delta(M, k, coset)
    mods_k = tuple(M.moduli) * (R.ranks[k] * mult)
    nk1 = R.ranks[k + 1] if k + 1 < len(R.ranks) else 0
    mods_next = tuple(M.moduli) * (nk1 * mult)
    return _complex_cohomology(prev, cur, mods_k, mods_next, k, "resolution", M)


# ---------------------------------------------------------------- public entry points

def choose_route(G: FiniteGroup, M: GModule, k: int) -> str:
    return "bar" if _bar_size(G, M, k) <= BAR_AUTO_LIMIT else "resolution"


def cohomology(G: FiniteGroup, M: GModule, k: int, route: str = "auto") -> CohomologyGroup:
    """H^k(G; M) for 0 <= k <= 4."""
    if M.group is not G:
        raise GroupError("module is over a different group")
    if not 0 <= k <= MAX_DEGREE:
        raise GroupError(f"degree must be in 0..{MAX_DEGREE}")
    if route == "auto":
        route = choose_route(G, M, k)
    if route == "bar":
        if _bar_size(G, M, k) > BAR_HARD_LIMIT:
            raise CapacityError("bar cochains too large; use the resolution route")
        return _bar_cohomology(G, M, k)
    if route == "resolution":
        R = free_resolution(G, k + 1)
        return _res_cohomology(G, M, k, R)
    raise GroupError(f"unknown route {route!r}")


@dataclass(frozen=True, eq=False)
class Restriction:
    source: CohomologyGroup
    target: CohomologyGroup
    matrix: np.ndarray          # target coordinates of each source generator (columns)

    def is_zero(self) -> bool:
        return all(int(x) == 0 for x in self.matrix.ravel())

    def is_isomorphism(self) -> bool:
        s, t = self.source.factors, self.target.factors
        if sorted(s) != sorted(t) or any(f == 0 for f in s):
            return False
        # finite groups of equal order: injective iff bijective; check image size
        return _image_size(self) == math.prod(t)


def _image_size(res: Restriction) -> int:
    tf = res.target.factors
    imgs = set()
    cols = [tuple(int(x) for x in res.matrix[:, j]) for j in range(res.matrix.shape[1])]
    for coeffs in itertools.product(*[range(f) for f in res.source.factors]):
        v = tuple(sum(c * col[i] for c, col in zip(coeffs, cols)) % tf[i] for i in range(len(tf)))
        imgs.add(v)
    return len(imgs)


def restriction(G: FiniteGroup, H, M: GModule, k: int, route: str = "auto") -> Restriction:
    """Matrix of H^k(G; M) -> H^k(H; M) in the computed bases (columns = source generators)."""
    Hsub = sorted(set(int(h) for h in H))
    if not gr.is_subgroup(G, Hsub):
        raise GroupError("not a subgroup")
    if route == "auto":
        route = choose_route(G, M, k)
    src = cohomology(G, M, k, route)
    if route == "bar":
        Hg, inc = gr.induced_subgroup(G, Hsub)
        MH = M.restrict(inc)
        tgt = _bar_cohomology(Hg, MH, k)
        cols = [tgt.coordinates(restrict_bar_cochain(G, Hg, inc, M, k, v)) for v in src.generator_cocycles]
    else:
        R = free_resolution(G, k + 1)
        coset = _coset_data(G, Hsub)
        tgt = _res_cohomology(G, M, k, R, coset)
        cols = [tgt.coordinates(_restrict_res_cochain(M, R, k, coset, v)) for v in src.generator_cocycles]
    mat = np.array(cols, dtype=object).T if cols else np.zeros((len(tgt.factors), 0), dtype=object)
    if mat.size == 0:
        mat = np.zeros((len(tgt.factors), len(src.factors)), dtype=object)
    return Restriction(src, tgt, mat)


def restrict_bar_cochain(G, Hg, inc: GroupHom, M, k, vec) -> np.ndarray:
    ne_g = _nonidentity(G)
    pos = {g: i for i, g in enumerate(ne_g)}
    m = len(ne_g)
    r = M.rank
    out = []
    for tup in itertools.product(_nonidentity(Hg), repeat=k):
        t = 0
        for h in tup:
            t = t * m + pos[inc(h)]
        out.extend(vec[t * r:(t + 1) * r])
    return np.array(out, dtype=object)


def _restrict_res_cochain(M, R: FreeResolution, k, coset, vec) -> np.ndarray:
    _, reps, _, _ = coset
    r = M.rank
    out = []
    act = M.action
    for i in range(R.ranks[k]):
        fi = np.asarray(vec[i * r:(i + 1) * r], dtype=object)
        for t in reps:
            out.extend(act[t].astype(object) @ fi)
    return M.reduce(np.array(out, dtype=object))


# ---------------------------------------------------------------- named classes

def beta_of_hom(G: FiniteGroup, e) -> np.ndarray:
    """Integral 2-cocycle (g, h) -> e(g) e(h) lifting the square of a homomorphism e: G -> Z2."""
    M = trivial_module(G)
    e = np.asarray(e)
    return bar_cochain(G, M, 2, lambda g, h: int(e[g]) * int(e[h]))


def carry_cocycle(G: FiniteGroup, gen: int, n: int) -> np.ndarray:
    """(g, h) -> floor((i(g) + i(h)) / n) on G = <gen> of order n, with g = gen^i(g)."""
    expo = {}
    x = G.identity
    for i in range(n):
        expo[x] = i
        x = G.mul(x, gen)
    M = trivial_module(G)
    return bar_cochain(G, M, 2, lambda g, h: (expo[g] + expo[h]) // n)


def hom_to_z2(G: FiniteGroup, values: dict) -> np.ndarray:
    """Homomorphism G -> Z2 given on generators (element index -> 0/1)."""
    gens = list(values)
    f = gr.extend_partial(G, gr.cyclic(2), gens, [values[g] % 2 for g in gens], injective=False)
    if f is None or (f < 0).any():
        raise GroupError("values do not define a homomorphism on all of G")
    return f


def express_named(H: CohomologyGroup, cocycle, named: list[tuple[str, np.ndarray]]) -> str:
    """Write the class of ``cocycle`` as a combination of named classes, e.g. '2c' or 'b^2'."""
    target = H.coordinates(cocycle)
    if all(int(x) == 0 for x in target):
        return "0"
    basis = [(nm, H.coordinates(v)) for nm, v in named]
    ranges = []
    for _, c in basis:
        order = 1
        for x, f in zip(c, H.factors):
            if f:
                order = math.lcm(order, f // math.gcd(f, int(x)) if int(x) else 1)
        ranges.append(range(order))
    for coeffs in itertools.product(*ranges):
        tot = [0] * len(H.factors)
        for a, (_, c) in zip(coeffs, basis):
            for i in range(len(tot)):
                tot[i] += a * int(c[i])
        tot = tuple(t % f if f else t for t, f in zip(tot, H.factors))
        if tot == tuple(target):
            parts = []
            for a, (nm, _) in zip(coeffs, basis):
                if a:
                    parts.append(nm if a == 1 else f"{a}{nm}")
            return "+".join(parts)
    raise GroupError("class is not in the span of the named classes")


D4_SUBGROUP_ORDER = ("G_{s^2,t}", "G_{s^2,st}", "G_{s^2}", "G_t", "G_st", "G_s")


def d4_named_classes(D4: FiniteGroup | None = None):
    """D4 with its classes e^2, f^2 (cocycles) built from e(s)=1,e(t)=0 and f(s)=f(t)=1."""
    D4 = D4 or gr.dihedral(4)
    s, t = D4.generator("s"), D4.generator("t")
    e = hom_to_z2(D4, {s: 1, t: 0})
    f = hom_to_z2(D4, {s: 1, t: 1})
    return D4, {"e^2": beta_of_hom(D4, e), "f^2": beta_of_hom(D4, f)}


def _d4_subgroups(D4):
    s, t = D4.generator("s"), D4.generator("t")
    s2 = D4.mul(s, s)
    st = D4.mul(s, t)
    return {
        "G_{s^2,t}": [s2, t],
        "G_{s^2,st}": [s2, st],
        "G_{s^2}": [s2],
        "G_t": [t],
        "G_st": [st],
        "G_s": [s],
    }


def _named_basis_for(Hg: FiniteGroup, gens_in_H: list[int]):
    """Named integral degree-2 classes of Z2, Z4 or Z2 x Z2 with ordered generators."""
    if Hg.order == 2:
        (x,) = gens_in_H
        b = hom_to_z2(Hg, {x: 1})
        return [("b^2", beta_of_hom(Hg, b))]
    if Hg.order == 4 and len(gens_in_H) == 1:
        return [("c", carry_cocycle(Hg, gens_in_H[0], 4))]
    if Hg.order == 4 and len(gens_in_H) == 2:
        x, y = gens_in_H
        a = hom_to_z2(Hg, {x: 1, y: 0})
        b = hom_to_z2(Hg, {x: 0, y: 1})
        return [("a^2", beta_of_hom(Hg, a)), ("b^2", beta_of_hom(Hg, b))]
    raise GroupError("no naming convention for this subgroup")


def d4_restriction_table() -> dict:
    """Images of e^2 and f^2 under H^2(D4; Z) -> H^2(H; Z) for the six subgroups, by name."""
    D4, named = d4_named_classes()
    M = trivial_module(D4)
    table = {}
    for label, gens in _d4_subgroups(D4).items():
        Hsub = gr.closure(D4, gens)
        Hg, inc = gr.induced_subgroup(D4, Hsub, gens=gens)
        MH = M.restrict(inc)
        tgt = _bar_cohomology(Hg, MH, 2)
        back = {int(v): i for i, v in enumerate(inc.image)}
        basis = _named_basis_for(Hg, [back[g] for g in gens])
        row = {}
        for cname, cocycle in named.items():
            restricted = restrict_bar_cochain(D4, Hg, inc, M, 2, cocycle)
            row[cname] = express_named(tgt, restricted, basis)
        table[label] = row
    return table


# ---------------------------------------------------------------- obstruction and lens check

def obstruction_vanishes(K: FiniteGroup, gamma: GroupHom) -> bool:
    """For quotient Z2: some g with gamma^2 = mu_g is fixed by gamma."""
    sq = gamma.image[gamma.image]
    t, inv = K.table, K.inverses
    roots = [g for g in range(K.order) if (t[t[inv[g]], g] == sq).all()]
    if not roots:
        raise GroupError("gamma^2 is not inner")
    return any(gamma(g) == g for g in roots)


def order_four_unit(p: int) -> int:
    for a in range(2, p):
        if pow(a, 4, p) == 1 and pow(a, 2, p) != 1:
            return a
    raise GroupError(f"no unit of order 4 mod {p}")


def lens_group(p: int) -> FiniteGroup:
    """Z_p x| Z4 with the generator h acting by an element of order 4 in Aut(Z_p)."""
    return gr.cyclic_semidirect(p, 4, order_four_unit(p), f"Z{p}:Z4")


@dataclass(frozen=True, eq=False)
class LensReport:
    p: int
    twisted: CohomologyGroup
    untwisted: CohomologyGroup
    to_cyclic_p: Restriction
    to_z4: list
    ok: bool

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "twisted_H3": self.twisted.to_json(),
            "untwisted_H3": self.untwisted.to_json(),
            "restriction_to_Zp_iso": self.to_cyclic_p.is_isomorphism(),
            "restriction_to_Z4_zero": all(r.is_zero() for r in self.to_z4),
            "z4_subgroups": len(self.to_z4),
            "ok": self.ok,
        }


def twisted_lens_check(p: int) -> LensReport:
    """H^3 of Z_p x| Z4 with coefficients Z/p on which Z4 acts by -1, and its restrictions."""
    if p > 13:
        raise CapacityError("twisted check limited to p <= 13")
    if p < 3 or p % 4 != 1 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise GroupError("p must be a prime congruent to 1 mod 4")
    G = lens_group(p)
    h = G.generator("g'")
    Mt = module_from_generator_action(G, p, {"g": 1, "g'": -1})
    Mu = trivial_module(G, p)
    tw = cohomology(G, Mt, 3, route="resolution")
    un = cohomology(G, Mu, 3, route="resolution")
    Zp = gr.closure(G, [G.generator("g")])
    r_p = restriction(G, Zp, Mt, 3, route="resolution")
    sylow = sorted({tuple(gr.closure(G, [G.conj(x, h)])) for x in range(G.order)})
    r4 = [restriction(G, list(S), Mt, 3, route="resolution") for S in sylow]
    ok = (tw.factors == (p,) and un.factors == () and r_p.is_isomorphism()
          and all(r.is_zero() for r in r4))
    return LensReport(p, tw, un, r_p, r4, ok)

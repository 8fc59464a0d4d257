"""Isometries of S^2 x S^2 in the group W = (SO(3) x SO(3) x <alpha>) x| <sigma>.

An element is stored in normal form (r1, r2, antipodal, swap) and acts on a
pair of unit vectors by: swap the factors if ``swap``, then rotate by
(r1, r2), then apply the antipode in both factors if ``antipodal``.
Rotations are unit quaternions compared up to sign with tolerance EPS.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import groups as gr
from .groups import FiniteGroup, GroupError, CapacityError

EPS = 1e-9
# angles between EPS and AMBIGUOUS_BAND are neither clearly zero nor clearly nonzero
AMBIGUOUS_BAND = 1e-6
KEY_SCALE = 1e7


class AmbiguityError(ArithmeticError):
    """A tolerance test could not be decided."""


# ---------------------------------------------------------------- quaternion arithmetic

def qmul(p, q) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ], axis=-1)


def qconj(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def quat_matrix(q) -> np.ndarray:
    """Rotation matrices of unit quaternions (broadcasting)."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    return np.stack([
        np.stack([1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)], -1),
        np.stack([2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)], -1),
        np.stack([2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)], -1),
    ], -2)


def canonical_sign(q) -> np.ndarray:
    """Multiply each quaternion by +-1 so its first clearly nonzero entry is positive."""
    q = np.array(q, dtype=float)
    flat = q.reshape(-1, 4)
    big = np.abs(flat) > 1e-6
    first = np.argmax(big, axis=1)
    sign = np.sign(flat[np.arange(len(flat)), first])
    sign[sign == 0] = 1.0
    return (flat * sign[:, None]).reshape(q.shape)


def quat_keys(q) -> np.ndarray:
    """Integer keys identifying rotations up to quaternion sign."""
    return np.rint(canonical_sign(q) * KEY_SCALE).astype(np.int64)


def _angle(q) -> float:
    """Rotation angle in [0, pi]."""
    w = abs(float(q[0]))
    v = float(np.linalg.norm(q[1:]))
    return 2.0 * math.atan2(v, w)


# ---------------------------------------------------------------- rotations

@dataclass(frozen=True, eq=False)
class Rotation:
    q: tuple

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(4)
        nrm = float(np.linalg.norm(q))
        if abs(nrm - 1.0) > 1e-6:
            raise GroupError(f"quaternion norm {nrm} is not 1")
        object.__setattr__(self, "q", tuple(float(x) for x in q / nrm))

    @classmethod
    def identity(cls) -> "Rotation":
        return cls((1.0, 0.0, 0.0, 0.0))

    @classmethod
    def about(cls, axis, angle: float) -> "Rotation":
        a = np.asarray(axis, dtype=float)
        a = a / np.linalg.norm(a)
        s = math.sin(angle / 2)
        return cls((math.cos(angle / 2), s * a[0], s * a[1], s * a[2]))

    @classmethod
    def z(cls, angle: float) -> "Rotation":
        return cls.about((0, 0, 1), angle)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.q)

    def __mul__(self, other: "Rotation") -> "Rotation":
        return Rotation(qmul(self.q, other.q))

    def inverse(self) -> "Rotation":
        return Rotation(qconj(self.q))

    def matrix(self) -> np.ndarray:
        return quat_matrix(self.q)

    def apply(self, v) -> np.ndarray:
        return self.matrix() @ np.asarray(v, dtype=float)

    @property
    def angle(self) -> float:
        return _angle(self.q)

    def is_identity(self, eps: float = EPS) -> bool:
        """Tolerance test; raises AmbiguityError inside the undecidable band."""
        a = self.angle
        if a < eps:
            return True
        if a < AMBIGUOUS_BAND:
            raise AmbiguityError(f"rotation angle {a:.3e} is neither zero nor clearly nonzero")
        return False

    def is_half_turn(self, eps: float = EPS) -> bool:
        d = abs(self.angle - math.pi)
        if d < eps:
            return True
        if d < AMBIGUOUS_BAND:
            raise AmbiguityError(f"rotation angle is {d:.3e} away from pi")
        return False

    @property
    def axis(self) -> np.ndarray:
        """Unit axis with the angle in [0, pi]; for half turns the first nonzero coordinate is positive."""
        q = np.array(self.q)
        if q[0] < 0:
            q = -q
        v = q[1:]
        n = np.linalg.norm(v)
        if n < EPS:
            raise AmbiguityError("identity rotation has no axis")
        v = v / n
        if self.is_half_turn():
            nz = np.nonzero(np.abs(v) > 1e-9)[0]
            if v[nz[0]] < 0:
                v = -v
        return v

    def close(self, other: "Rotation", eps: float = EPS) -> bool:
        d = float(abs(np.dot(self.q, other.q)))
        return d > 1.0 - eps

    def key(self) -> tuple:
        return tuple(quat_keys(np.array(self.q)).tolist())

    def __repr__(self):
        return "Rotation(%.6f, %.6f, %.6f, %.6f)" % self.q


# ---------------------------------------------------------------- homology representation

@dataclass(frozen=True)
class HomologyRep:
    """Action on H_2 in the basis (x, y): one of +-I, +-S with S the swap matrix."""
    antipodal: int
    swap: int

    @property
    def matrix(self) -> tuple:
        s = -1 if self.antipodal else 1
        if self.swap:
            return ((0, s), (s, 0))
        return ((s, 0), (0, s))

    @property
    def trace(self) -> int:
        m = self.matrix
        return m[0][0] + m[1][1]

    @property
    def index(self) -> int:
        """Position in the Klein group {1, a, b, ab} with a = -I and b = S."""
        return self.antipodal + 2 * self.swap

    def __mul__(self, other: "HomologyRep") -> "HomologyRep":
        return HomologyRep(self.antipodal ^ other.antipodal, self.swap ^ other.swap)

    def name(self) -> str:
        return ["1", "a", "b", "ab"][self.index]


def lefschetz(rep: HomologyRep) -> int:
    return 2 + rep.trace


# ---------------------------------------------------------------- W elements

@dataclass(frozen=True, eq=False)
class WElement:
    r1: Rotation
    r2: Rotation
    antipodal: int = 0
    swap: int = 0

    def __post_init__(self):
        if self.antipodal not in (0, 1) or self.swap not in (0, 1):
            raise GroupError("antipodal and swap must be bits")

    def __mul__(self, other: "WElement") -> "WElement":
        return w_mul(self, other)

    def inverse(self) -> "WElement":
        return w_inv(self)

    def apply(self, x, y) -> tuple[np.ndarray, np.ndarray]:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        if self.swap:
            x, y = y, x
        x, y = self.r1.apply(x), self.r2.apply(y)
        if self.antipodal:
            x, y = -x, -y
        return x, y

    def apply_point(self, p) -> np.ndarray:
        x, y = self.apply(p[:3], p[3:])
        return np.concatenate([x, y])

    def matrix6(self) -> np.ndarray:
        """The linear map of R^6 = R^3 x R^3 this element restricts from."""
        R = np.zeros((6, 6))
        R[:3, :3] = self.r1.matrix()
        R[3:, 3:] = self.r2.matrix()
        if self.swap:
            P = np.zeros((6, 6))
            P[:3, 3:] = np.eye(3)
            P[3:, :3] = np.eye(3)
            R = R @ P
        return -R if self.antipodal else R

    def is_identity(self, eps: float = EPS) -> bool:
        return (not self.antipodal and not self.swap
                and self.r1.is_identity(eps) and self.r2.is_identity(eps))

    def close(self, other: "WElement", eps: float = EPS) -> bool:
        return (self.antipodal == other.antipodal and self.swap == other.swap
                and self.r1.close(other.r1, eps) and self.r2.close(other.r2, eps))

    def key(self) -> tuple:
        return self.r1.key() + self.r2.key() + (self.antipodal, self.swap)

    def to_json(self) -> dict:
        return {"r1": list(self.r1.q), "r2": list(self.r2.q),
                "antipodal": self.antipodal, "swap": self.swap}

    @classmethod
    def from_json(cls, data: dict) -> "WElement":
        return cls(Rotation(data["r1"]), Rotation(data["r2"]),
                   int(data.get("antipodal", 0)), int(data.get("swap", 0)))

    def __repr__(self):
        return f"WElement({self.r1!r}, {self.r2!r}, antipodal={self.antipodal}, swap={self.swap})"


def w_identity() -> WElement:
    return WElement(Rotation.identity(), Rotation.identity())


def alpha() -> WElement:
    return WElement(Rotation.identity(), Rotation.identity(), 1, 0)


def sigma() -> WElement:
    return WElement(Rotation.identity(), Rotation.identity(), 0, 1)


def pair(r1: Rotation, r2: Rotation) -> WElement:
    return WElement(r1, r2)


def w_mul(g: WElement, h: WElement) -> WElement:
    """g o h (apply h first).  When g swaps, h's rotation pair is switched."""
    h1, h2 = (h.r2, h.r1) if g.swap else (h.r1, h.r2)
    return WElement(g.r1 * h1, g.r2 * h2, g.antipodal ^ h.antipodal, g.swap ^ h.swap)


def w_inv(g: WElement) -> WElement:
    if g.swap:
        return WElement(g.r2.inverse(), g.r1.inverse(), g.antipodal, 1)
    return WElement(g.r1.inverse(), g.r2.inverse(), g.antipodal, 0)


def w_pow(g: WElement, k: int) -> WElement:
    if k < 0:
        g, k = w_inv(g), -k
    out = w_identity()
    base = g
    while k:
        if k & 1:
            out = w_mul(out, base)
        base = w_mul(base, base)
        k >>= 1
    return out


def w_order(g: WElement, cap: int = 10000) -> int:
    """Least k <= cap with g^k = 1; CapacityError if there is none."""
    x = g
    for k in range(1, cap + 1):
        if x.is_identity():
            return k
        x = w_mul(x, g)
    raise CapacityError(f"element order exceeds {cap}")


def phi(g: WElement) -> HomologyRep:
    return HomologyRep(g.antipodal, g.swap)


# ---------------------------------------------------------------- fixed sets

FIX_ALL = "all"
FIX_SPHERE_PAIR = "sphere-times-pair"
FIX_TORUS = "torus"
FIX_SPHERE = "sphere"
FIX_FINITE = "finite"
FIX_EMPTY = "empty"

_CHI = {FIX_ALL: 4, FIX_SPHERE_PAIR: 4, FIX_TORUS: 0, FIX_SPHERE: 2, FIX_EMPTY: 0}
_DIM = {FIX_ALL: 4, FIX_SPHERE_PAIR: 2, FIX_TORUS: 2, FIX_SPHERE: 2, FIX_FINITE: 0, FIX_EMPTY: -1}


@dataclass(frozen=True, eq=False)
class FixedSet:
    kind: str
    points: np.ndarray | None = None     # (k, 6) for finite sets
    note: str = ""

    @property
    def dimension(self) -> int:
        return _DIM[self.kind]

    @property
    def is_finite(self) -> bool:
        return self.kind in (FIX_FINITE, FIX_EMPTY)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "dimension": self.dimension}
        if self.points is not None:
            out["points"] = [[round(float(v), 12) for v in p] for p in self.points]
        if self.note:
            out["note"] = self.note
        return out


def euler_characteristic(f: FixedSet) -> int:
    if f.kind == FIX_FINITE:
        return len(f.points)
    return _CHI[f.kind]


def _check_fixed(g: WElement, pts: np.ndarray, tol: float = 1e-8) -> None:
    for p in pts:
        if np.linalg.norm(g.apply_point(p) - p) > tol:
            raise AmbiguityError("computed fixed point is not fixed within tolerance")


def fixed_set(g: WElement) -> FixedSet:
    """Fixed point set of g on S^2 x S^2, by solving the fixed-point equations of the normal form."""
    r1, r2 = g.r1, g.r2
    if not g.swap and not g.antipodal:
        i1, i2 = r1.is_identity(), r2.is_identity()
        if i1 and i2:
            return FixedSet(FIX_ALL)
        if i1 or i2:
            which = "second" if i1 else "first"
            return FixedSet(FIX_SPHERE_PAIR, note=f"S^2 times the poles of the {which} factor")
        a1, a2 = r1.axis, r2.axis
        pts = np.array([np.concatenate([s1 * a1, s2 * a2]) for s1 in (1, -1) for s2 in (1, -1)])
        _check_fixed(g, pts)
        return FixedSet(FIX_FINITE, pts)
    if not g.swap:
        # -r1 x = x and -r2 y = y: each factor needs a half turn (circle of solutions)
        if r1.is_identity() or r2.is_identity():
            return FixedSet(FIX_EMPTY)
        if r1.is_half_turn() and r2.is_half_turn():
            return FixedSet(FIX_TORUS, note="equator of r1 times equator of r2")
        return FixedSet(FIX_EMPTY)
    # swap: x = (+-) r1 y, y = (+-) r2 x, so x = r1 r2 x
    c = r1 * r2
    sign = -1.0 if g.antipodal else 1.0
    if c.is_identity():
        return FixedSet(FIX_SPHERE, note="graph of y = %s r2 x" % ("-" if g.antipodal else "+"))
    a = c.axis
    pts = np.array([np.concatenate([x, sign * r2.apply(x)]) for x in (a, -a)])
    _check_fixed(g, pts)
    return FixedSet(FIX_FINITE, pts)


# ---------------------------------------------------------------- tangent data

def _frame(x) -> np.ndarray:
    """Oriented orthonormal basis (e1, e2) of the tangent plane at x, with e1 x e2 = x."""
    x = np.asarray(x, dtype=float)
    a = np.eye(3)[int(np.argmin(np.abs(x)))]
    e1 = a - np.dot(a, x) * x
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(x, e1)
    return np.stack([e1, e2], axis=1)


def tangent_matrix(g: WElement, p) -> np.ndarray:
    """Derivative of g at the fixed point p, in oriented frames of the two factors."""
    p = np.asarray(p, dtype=float)
    B = np.zeros((6, 4))
    B[:3, :2] = _frame(p[:3])
    B[3:, 2:] = _frame(p[3:])
    return B.T @ g.matrix6() @ B


def _pfaffian4(S) -> float:
    return S[0, 1] * S[2, 3] - S[0, 2] * S[1, 3] + S[0, 3] * S[1, 2]


def local_rotation_numbers(g: WElement, p, order: int | None = None) -> tuple[Fraction, Fraction]:
    """Rotation numbers (fractions of a turn) of g on the tangent space at an isolated fixed point.

    Without swap the two numbers belong to the two factor planes, in order.
    With swap the invariant planes are diagonal; the pair is then defined up
    to exchange and a common sign, and a normalized representative is returned.
    """
    p = np.asarray(p, dtype=float)
    if np.linalg.norm(g.apply_point(p) - p) > 1e-8:
        raise GroupError("point is not fixed")
    f = fixed_set(g)
    if f.kind != FIX_FINITE:
        raise GroupError(f"fixed point is not isolated (fixed set is {f.kind})")
    n = order or w_order(g)
    M = tangent_matrix(g, p)
    if not g.swap:
        t1 = math.atan2(M[1, 0], M[0, 0]) / (2 * math.pi)
        t2 = math.atan2(M[3, 2], M[2, 2]) / (2 * math.pi)
        return _as_fraction(t1, n), _as_fraction(t2, n)
    # M in SO(4): recover {theta1, theta2} from trace, the lambda^2 coefficient and the Pfaffian
    tr = np.trace(M)
    c2 = np.poly(M)[2]              # = 2 + 4 cos t1 cos t2
    pf = _pfaffian4(M - M.T) / 4.0  # = sin t1 sin t2
    ks = np.arange(n)
    ang = 2 * np.pi * ks / n
    C, S = np.cos(ang), np.sin(ang)
    ok = (np.abs(C[:, None] + C[None, :] - tr / 2) < 1e-6) \
        & (np.abs(2 + 4 * C[:, None] * C[None, :] - c2) < 1e-6) \
        & (np.abs(S[:, None] * S[None, :] - pf) < 1e-6)
    sols = [(int(i), int(j)) for i, j in zip(*np.nonzero(ok))]
    if not sols:
        raise AmbiguityError("tangent rotation angles are not multiples of 2 pi / order")
    reps = {min(((a % n, b % n), (b % n, a % n), (-a % n, -b % n), (-b % n, -a % n))) for a, b in sols}
    if len(reps) != 1:
        raise AmbiguityError("tangent rotation data is not determined")
    a, b = reps.pop()
    return Fraction(a, n), Fraction(b, n)


def _as_fraction(t: float, n: int) -> Fraction:
    k = t * n
    r = round(k)
    if abs(k - r) > 1e-6:
        raise AmbiguityError("rotation number is not a multiple of 1/order")
    return Fraction(int(r) % n, n)


def lens_type(numbers: tuple[Fraction, Fraction]) -> tuple[int, int]:
    """(n, q) with the local link L(n, q), q normalized among +-q^(+-1) mod n."""
    a, b = numbers
    n = math.lcm(a.denominator, b.denominator)
    pa, pb = int(a * n) % n, int(b * n) % n
    if n == 1:
        return 1, 0
    if math.gcd(pa, n) != 1 or math.gcd(pb, n) != 1:
        raise GroupError("rotation numbers do not give a free action on the link")
    q = pb * pow(pa, -1, n) % n
    qi = pow(q, -1, n)
    return n, min(q, (-q) % n, qi, (-qi) % n)


# ---------------------------------------------------------------- finite rotation groups

def rotation_closure(gens: list[Rotation], cap: int = 240) -> list[Rotation]:
    """Breadth-first closure of rotations (identity first)."""
    elems = [Rotation.identity()]
    index = {elems[0].key()}
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                k = y.key()
                if k not in index:
                    index.add(k)
                    elems.append(y)
                    nxt.append(y)
                    if len(elems) > cap:
                        raise CapacityError(f"rotation group exceeds {cap} elements")
        frontier = nxt
    return elems


def rotation_table(elems: list[Rotation]) -> np.ndarray:
    Q = np.array([r.q for r in elems])
    keys = quat_keys(Q)
    lookup = {k.tobytes(): i for i, k in enumerate(keys)}
    prod = qmul(Q[:, None, :], Q[None, :, :])
    pk = quat_keys(prod)
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            v = lookup.get(pk[i, j].tobytes())
            if v is None:
                raise AmbiguityError("rotation set is not closed within tolerance")
            table[i, j] = v
    return table


_PHI = (1 + math.sqrt(5)) / 2
_OMEGA = (0.5, 0.5, 0.5, 0.5)


FAMILY_ALIASES = {"Z": "cyclic", "cyclic": "cyclic", "D": "dihedral", "dihedral": "dihedral",
                  "T": "tet", "tet": "tet", "tetrahedral": "tet", "O": "oct", "oct": "oct",
                  "octahedral": "oct", "I": "icos", "icos": "icos", "icosahedral": "icos"}


def family_name(family: str) -> str:
    try:
        return FAMILY_ALIASES[family]
    except KeyError:
        raise GroupError(f"unknown polyhedral family {family!r}") from None


def _family_generators(family: str, n: int | None) -> list[Rotation]:
    if family == "cyclic":
        return [Rotation.z(2 * math.pi / n)]
    if family == "dihedral":
        return [Rotation.z(2 * math.pi / n), Rotation((0.0, 1.0, 0.0, 0.0))]
    if family == "tet":
        return [Rotation((0.0, 1.0, 0.0, 0.0)), Rotation(_OMEGA)]
    if family == "oct":
        return [Rotation((1 / math.sqrt(2), 1 / math.sqrt(2), 0.0, 0.0)), Rotation(_OMEGA)]
    if family == "icos":
        return [Rotation((_PHI / 2, 1 / (2 * _PHI), 0.5, 0.0)), Rotation(_OMEGA)]
    raise GroupError(f"unknown polyhedral family {family!r}")


def standard_polyhedral(family: str, n: int | None = None) -> list[Rotation]:
    """A standard finite subgroup of SO(3): cyclic and dihedral about the z-axis
    (dihedral flip about x), tet/oct/icos from the standard quaternion groups."""
    if family in ("cyclic", "dihedral") and (n is None or n < 1):
        raise GroupError("cyclic and dihedral families need n >= 1")
    return rotation_closure(_family_generators(family, n), cap=240)


def abstract_family(family: str, n: int | None = None) -> FiniteGroup:
    family = family_name(family)
    if family == "cyclic":
        return gr.cyclic(n)
    if family == "dihedral":
        return gr.dihedral(n)
    return {"tet": gr.tetrahedral, "oct": gr.octahedral, "icos": gr.icosahedral}[family]()


@lru_cache(maxsize=None)
def standard_embedding(family: str, n: int | None = None) -> tuple[FiniteGroup, tuple]:
    """(abstract group, rotations indexed by its elements): an isomorphism onto the standard copy."""
    family = family_name(family)
    if family in ("cyclic", "dihedral") and (n is None or n < 1):
        raise GroupError("cyclic and dihedral families need n >= 1")
    A = abstract_family(family, n)
    if family == "cyclic":
        return A, tuple(Rotation.z(2 * math.pi * k / n) for k in range(n))
    if family == "dihedral":
        flip = Rotation((0.0, 1.0, 0.0, 0.0))
        rots = [Rotation.z(2 * math.pi * (i % n) / n) * (flip if i >= n else Rotation.identity())
                for i in range(2 * n)]
        _check_embedding(A, rots)
        return A, tuple(rots)
    elems = standard_polyhedral(family, n)
    R = FiniteGroup(rotation_table(elems), 0, [], None, f"SO3-{family}")
    iso = gr.isomorphism(A, R)
    if iso is None:
        raise GroupError(f"standard {family} rotations are not isomorphic to the abstract group")
    rots = [elems[int(j)] for j in iso.image]
    return A, tuple(rots)


def _check_embedding(A: FiniteGroup, rots: list[Rotation]) -> None:
    for g in A.generator_indices():
        for x in range(A.order):
            if not (rots[x] * rots[g]).close(rots[A.mul(x, g)], 1e-9):
                raise GroupError("rotation assignment is not a homomorphism")


# ---------------------------------------------------------------- closure in W

def _w_arrays(elems: list[WElement]):
    Q1 = np.array([e.r1.q for e in elems])
    Q2 = np.array([e.r2.q for e in elems])
    E = np.array([e.antipodal for e in elems], dtype=np.int64)
    S = np.array([e.swap for e in elems], dtype=np.int64)
    return Q1, Q2, E, S


def _w_keys(Q1, Q2, E, S) -> list[bytes]:
    k = np.concatenate([quat_keys(Q1), quat_keys(Q2), E[..., None], S[..., None]], axis=-1)
    k = k.reshape(-1, 10)
    return [row.tobytes() for row in k]


def _w_mul_arrays(a, b):
    """Elementwise products of two equally shaped batches."""
    Q1a, Q2a, Ea, Sa = a
    Q1b, Q2b, Eb, Sb = b
    sw = (Sa == 1)[..., None]
    h1 = np.where(sw, Q2b, Q1b)
    h2 = np.where(sw, Q1b, Q2b)
    return qmul(Q1a, h1), qmul(Q2a, h2), Ea ^ Eb, Sa ^ Sb


@dataclass(frozen=True, eq=False)
class WGroup:
    """A finite subgroup of W with its Cayley table (index 0 is the identity)."""
    elements: tuple
    group: FiniteGroup
    generator_indices: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def phi_indices(self) -> np.ndarray:
        return np.array([e.antipodal + 2 * e.swap for e in self.elements], dtype=np.int64)


def w_closure(gens: list[WElement], max_order: int = 512, labels: list[str] | None = None) -> WGroup:
    """Close generators in W and tabulate; CapacityError past ``max_order``."""
    elems = [w_identity()]
    keys = {_w_keys(*_w_arrays(elems))[0]: 0}
    gen_idx = []
    for g in gens:
        k = _w_keys(*_w_arrays([g]))[0]
        if k not in keys:
            keys[k] = len(elems)
            elems.append(g)
        gen_idx.append(keys[k])
    frontier = list(range(len(elems)))
    while frontier:
        A = _w_arrays([elems[i] for i in frontier])
        new = []
        for g in gens:
            G = _w_arrays([g])
            prod = _w_mul_arrays(A, tuple(np.broadcast_to(x, (len(frontier),) + x.shape[1:]) for x in G))
            for j, kb in enumerate(_w_keys(*prod)):
                if kb in keys:
                    continue
                keys[kb] = len(elems)
                elems.append(WElement(Rotation(prod[0][j]), Rotation(prod[1][j]),
                                      int(prod[2][j]), int(prod[3][j])))
                new.append(len(elems) - 1)
                if len(elems) > max_order:
                    raise CapacityError(f"closure exceeds {max_order} elements")
        frontier = new
    arrs = _w_arrays(elems)
    lookup = {kb: i for i, kb in enumerate(_w_keys(*arrs))}
    n = len(elems)
    Aa = tuple(np.repeat(x, n, axis=0) for x in arrs)
    Bb = tuple(np.tile(x, (n,) + (1,) * (x.ndim - 1)) for x in arrs)
    pk = _w_keys(*_w_mul_arrays(Aa, Bb))
    table = np.empty(n * n, dtype=np.int64)
    for t, kb in enumerate(pk):
        v = lookup.get(kb)
        if v is None:
            raise AmbiguityError("W subset is not closed within tolerance")
        table[t] = v
    table = table.reshape(n, n)
    labels = labels or [f"g{i}" for i in range(len(gens))]
    glist = [(l, i) for l, i in zip(labels, gen_idx) if i != 0]
    G = FiniteGroup(table, 0, glist, None, "W-subgroup")
    return WGroup(tuple(elems), G, tuple(gen_idx))

"""Exact integer linear algebra: kernel lattices, column echelon form, Smith form.

Arrays start as int64 and are promoted to Python-int object arrays before any
update that could overflow, so results are always exact.
"""
from __future__ import annotations

import math

import numpy as np

_LIMIT = 1 << 60


def _as_int(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return a.copy()
    return a.astype(np.int64, copy=True)


def _absmax(a) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def _promote(*arrs):
    return tuple(a.astype(object) for a in arrs)


def _needs_promotion(x, qmax, col) -> bool:
    if x.dtype == object:
        return False
    return _absmax(x) + qmax * _absmax(col) >= _LIMIT


class Echelon:
    """Column echelon form E = A V of an integer matrix, V unimodular up to moduli.

    ``moduli[i]`` (0 for none) says row i only has to vanish modulo that
    number; then the surviving columns of V span {x : A x = 0 mod moduli}.
    """

    def __init__(self, A, moduli=None):
        A = _as_int(A)
        m, n = A.shape
        V = np.eye(n, dtype=object if A.dtype == object else np.int64)
        active = list(range(n))
        pivots = []        # (row, column of V)
        for i in range(m):
            if not active:
                break
            t = int(moduli[i]) if moduli is not None else 0
            row = A[i] @ V[:, active]
            if t:
                row = row % t
            while True:
                nz = np.nonzero(row)[0]
                if len(nz) == 0:
                    break
                if len(nz) == 1:
                    p = int(nz[0])
                    break
                absrow = np.abs(row[nz])
                p = int(nz[int(np.argmin(absrow))])
                others = [int(j) for j in nz if j != p]
                q = row[others] // row[p]
                cp = active[p]
                cols = [active[j] for j in others]
                qmax = _absmax(q)
                if q.dtype == object or _needs_promotion(V, qmax, V[:, cp]):
                    V, A = _promote(V, A)
                    row = row.astype(object)
                    q = q.astype(object)
                V[:, cols] -= np.outer(V[:, cp], q)
                row[others] -= q * row[p]
                if t:
                    row = row % t
            if len(nz) == 0:
                continue
            cp = active[p]
            if t:
                mult = t // math.gcd(int(row[p]), t)
                if mult != 1:
                    if V.dtype != object and _absmax(V[:, cp]) * mult >= _LIMIT:
                        V, A = _promote(V, A)
                    V[:, cp] *= mult
            else:
                pivots.append((i, cp))
                active.pop(p)
        self.A = A
        self.V = V
        self.pivots = pivots
        self.kernel_columns = active

    def kernel(self) -> np.ndarray:
        return self.V[:, self.kernel_columns]

    def image_basis(self) -> np.ndarray:
        """Columns A V at pivot positions: a Z-basis of the column lattice of A (moduli ignored)."""
        cols = [c for _, c in self.pivots]
        return self.A @ self.V[:, cols]


def kernel_lattice(A, moduli=None) -> np.ndarray:
    """Basis (as columns) of {x in Z^n : A x = 0}, rows taken modulo ``moduli`` where nonzero."""
    A = np.asarray(A)
    if A.shape[0] == 0:
        return np.eye(A.shape[1], dtype=np.int64)
    return Echelon(A, moduli).kernel()


class LatticeSolver:
    """Coordinates of lattice vectors in a fixed basis B (independent columns)."""

    def __init__(self, B):
        B = _as_int(B)
        self.B = B
        n, z = B.shape
        # column echelon of B: B V = E with pivots in increasing rows
        ech = Echelon(B)
        if len(ech.pivots) != z:
            raise ValueError("basis columns are dependent")
        cols = [c for _, c in ech.pivots]
        self.V = ech.V[:, cols]
        self.E = B @ self.V
        self.rows = [r for r, _ in ech.pivots]

    def solve(self, v):
        """Integer c with B c = v, or None if v is not in the lattice."""
        v = np.asarray(v)
        z = len(self.rows)
        d = [0] * z
        E = self.E
        for j, r in enumerate(self.rows):
            acc = int(v[r]) - sum(int(E[r, k]) * d[k] for k in range(j) if E[r, k] != 0)
            piv = int(E[r, j])
            if acc % piv:
                return None
            d[j] = acc // piv
        dv = np.array(d, dtype=object)
        c = self.V.astype(object) @ dv if z else np.zeros(0, dtype=object)
        if not (self.B.astype(object) @ c == v.astype(object)).all():
            return None
        return np.array([int(x) for x in c], dtype=object)


def smith(M):
    """Smith normal form.  Returns (diag, P, Pinv) with P M Q diagonal.

    ``diag`` has length rows(M) (zeros for free directions); P and its
    inverse are unimodular object arrays.
    """
    M = np.array(M, dtype=object)
    m, n = M.shape
    P = np.eye(m, dtype=object)
    Pinv = np.eye(m, dtype=object)
    A = M.copy()
    diag = []
    for k in range(min(m, n)):
        sub = A[k:, k:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        while True:
            sub = A[k:, k:]
            nz = np.argwhere(sub != 0)
            vals = np.array([abs(sub[i, j]) for i, j in nz], dtype=object)
            i0, j0 = nz[int(np.argmin(vals))]
            i0 += k
            j0 += k
            # move pivot to (k, k)
            if i0 != k:
                A[[k, i0]] = A[[i0, k]]
                P[[k, i0]] = P[[i0, k]]
                Pinv[:, [k, i0]] = Pinv[:, [i0, k]]
            if j0 != k:
                A[:, [k, j0]] = A[:, [j0, k]]
            piv = A[k, k]
            done = True
            for i in range(k + 1, m):
                if A[i, k] != 0:
                    q = A[i, k] // piv
                    A[i] -= q * A[k]
                    P[i] -= q * P[k]
                    Pinv[:, k] += q * Pinv[:, i]
                    if A[i, k] != 0:
                        done = False
            for j in range(k + 1, n):
                if A[k, j] != 0:
                    q = A[k, j] // piv
                    A[:, j] -= q * A[:, k]
                    if A[k, j] != 0:
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the rest of the block
            bad = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if A[i, j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            A[k] += A[bad]
            P[k] += P[bad]
            Pinv[:, bad] -= Pinv[:, k]
        if A[k, k] < 0:
            A[k] = -A[k]
            P[k] = -P[k]
            Pinv[:, k] = -Pinv[:, k]
        diag.append(int(A[k, k]))
    diag += [0] * (m - len(diag))
    return diag, P, Pinv


def column_hnf_basis(R) -> np.ndarray:
    """A basis of the column lattice of R (drops dependent columns)."""
    R = np.asarray(R)
    if R.shape[1] == 0:
        return R.astype(object)
    return Echelon(R).image_basis()


class LatticeMembership:
    """Incremental Hermite-reduced row basis of a lattice in Z^n with membership tests.

    Rows are kept reduced against each other's pivots, which keeps entries
    bounded by the pivots instead of growing with every insertion.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: dict[int, np.ndarray] = {}

    def _lead(self, v):
        nz = np.nonzero(v)[0]
        return int(nz[0]) if len(nz) else -1

    def _sub(self, v, q, r):
        if q == 0:
            return v
        if v.dtype != object and (r.dtype == object or _absmax(v) + abs(int(q)) * _absmax(r) >= _LIMIT):
            v = v.astype(object)
        return v - q * r

    def reduce(self, v):
        """Subtract pivot rows while the leading entry is divisible by the pivot."""
        v = _as_int(v)
        while True:
            j = self._lead(v)
            if j < 0 or j not in self.rows:
                return v
            r = self.rows[j]
            if int(v[j]) % int(r[j]):
                return v
            v = self._sub(v, int(v[j]) // int(r[j]), r)

    def contains(self, v) -> bool:
        return self._lead(self.reduce(v)) < 0

    def _install(self, j, v):
        if v[j] < 0:
            v = -v
        for jj in sorted(self.rows):
            if jj > j:
                v = self._sub(v, int(v[jj]) // int(self.rows[jj][jj]), self.rows[jj])
        self.rows[j] = v
        for i in sorted(self.rows):
            if i < j:
                r = self.rows[i]
                self.rows[i] = self._sub(r, int(r[j]) // int(v[j]), v)

    def add(self, v) -> bool:
        """Insert v; returns True if the lattice grew."""
        grew = False
        while True:
            v = self.reduce(v)
            j = self._lead(v)
            if j < 0:
                return grew
            grew = True
            if j not in self.rows:
                self._install(j, v)
                return True
            r = self.rows[j]
            a, b = int(r[j]), int(v[j])
            g, x, y = _egcd(a, b)
            new = _lin(x, r, y, v)
            rest = _lin(b // g, r, -(a // g), v)
            del self.rows[j]
            self._install(j, new)
            v = rest

    def rank(self) -> int:
        return len(self.rows)


def _lin(x, r, y, v):
    big = max(abs(x), abs(y)) * (max(_absmax(r), _absmax(v)) + 1)
    if r.dtype == object or v.dtype == object or big >= _LIMIT // 2:
        return x * r.astype(object) + y * v.astype(object)
    return x * r + y * v


def _egcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0

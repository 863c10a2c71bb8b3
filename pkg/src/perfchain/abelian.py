"""Finitely generated abelian groups, Smith normal form, and l-completion.

All integer arithmetic uses Python ints (arbitrary precision); pivots are
chosen with minimal absolute value to control entry growth.  The l-adic
integers are handled symbolically: a completed module is a free rank plus
a multiset of l-power torsion orders, and "over Z_l" questions reduce to
l-valuations of integer Smith data.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatchError, NotExactIntegrallyError


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B) -> list[list[int]]:
    n, k = len(A), len(A[0]) if A else 0
    m = len(B[0]) if B else 0
    if len(B) != k:
        raise DimensionMismatchError("integer matrix shapes do not compose")
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    row[j] += a * Bt[j]
    return out


def mat_vec(A, v) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def _copy_matrix(M) -> list[list[int]]:
    return [[int(x) for x in row] for row in M]


@dataclass(frozen=True)
class SNFResult:
    """U @ M @ V == diag(d) with U, V unimodular and d_1 | d_2 | ...

    `diag` has min(rows, cols) entries, nonnegative, zeros last.
    `u_inv` is the exact inverse of U (tracked during reduction).
    """

    diag: tuple
    U: tuple
    V: tuple
    u_inv: tuple

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)


def smith_normal_form(M) -> SNFResult:
    """Smith normal form with transformation witnesses."""
    A = _copy_matrix(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = _identity(rows)
    Uinv = _identity(rows)
    V = _identity(cols)

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, q):
        # row i += q * row j
        A[i] = [a + q * b for a, b in zip(A[i], A[j])]
        U[i] = [a + q * b for a, b in zip(U[i], U[j])]
        for r in Uinv:
            r[j] -= q * r[i]

    def col_add(i, j, q):
        # col i += q * col j
        for r in A:
            r[i] += q * r[j]
        for r in V:
            r[i] += q * r[j]

    def row_negate(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    n = min(rows, cols)
    for k in range(n):
        while True:
            pivot = None
            best = None
            for i in range(k, rows):
                for j in range(k, cols):
                    a = abs(A[i][j])
                    if a and (best is None or a < best):
                        best, pivot = a, (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != k:
                row_swap(k, pi)
            if pj != k:
                col_swap(k, pj)
            dirty = False
            for i in range(k + 1, rows):
                if A[i][k]:
                    q = A[i][k] // A[k][k]
                    if q:
                        row_add(i, k, -q)
                    if A[i][k]:
                        dirty = True
            for j in range(k + 1, cols):
                if A[k][j]:
                    q = A[k][j] // A[k][k]
                    if q:
                        col_add(j, k, -q)
                    if A[k][j]:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the rest of the block
            fix = None
            for i in range(k + 1, rows):
                for j in range(k + 1, cols):
                    if A[i][j] % A[k][k]:
                        fix = i
                        break
                if fix is not None:
                    break
            if fix is None:
                break
            row_add(k, fix, 1)
        if A[k][k] < 0:
            row_negate(k)
    diag = tuple(A[k][k] for k in range(n))
    return SNFResult(diag, tuple(map(tuple, U)), tuple(map(tuple, V)),
                     tuple(map(tuple, Uinv)))


def invariant_factors(M) -> tuple:
    return smith_normal_form(M).diag


class Lattice:
    """The column lattice of an integer matrix, with exact membership tests."""

    def __init__(self, matrix, ambient_dim: int | None = None):
        matrix = [list(map(int, row)) for row in matrix]
        if ambient_dim is None:
            ambient_dim = len(matrix)
        self.ambient_dim = ambient_dim
        if not matrix:
            matrix = [[] for _ in range(ambient_dim)]
        if len(matrix) != ambient_dim:
            raise DimensionMismatchError("lattice generators have wrong length")
        self.matrix = matrix
        self.ncols = len(matrix[0]) if matrix else 0
        self._snf = None

    def snf(self) -> SNFResult:
        if self._snf is None:
            self._snf = smith_normal_form(self.matrix)
        return self._snf

    def _reduced_rhs(self, v):
        s = self.snf()
        return mat_vec(s.U, list(map(int, v)))

    def contains(self, v) -> bool:
        """Is v an integer combination of the columns?"""
        s = self.snf()
        c = self._reduced_rhs(v)
        for i, ci in enumerate(c):
            d = s.diag[i] if i < len(s.diag) else 0
            if d == 0:
                if ci != 0:
                    return False
            elif ci % d:
                return False
        return True

    def contains_l_locally(self, v, l: int) -> bool:
        """Is v in the Z_l-span of the columns?  Decided on l-valuations."""
        s = self.snf()
        c = self._reduced_rhs(v)
        for i, ci in enumerate(c):
            d = s.diag[i] if i < len(s.diag) else 0
            if d == 0:
                if ci != 0:
                    return False
            else:
                if ci % _l_part(d, l):
                    return False
        return True

def _l_part(d: int, l: int) -> int:
    d = abs(d)
    out = 1
    while d % l == 0:
        d //= l
        out *= l
    return out


def integer_kernel_columns(M) -> list[list[int]]:
    """Columns spanning {x : M x = 0} over Z."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if cols == 0:
        return [[] for _ in range(0)]
    s = smith_normal_form(M)
    r = s.rank
    # M (V y) = 0 iff the first r coordinates of y vanish
    return [[s.V[i][j] for j in range(r, cols)] for i in range(cols)]


def hstack_int(*mats) -> list[list[int]]:
    mats = [m for m in mats if m and len(m[0]) >= 0]
    rows = len(mats[0])
    out = [[] for _ in range(rows)]
    for m in mats:
        if len(m) != rows:
            raise DimensionMismatchError("hstack row mismatch")
        for i in range(rows):
            out[i] = out[i] + list(map(int, m[i]))
    return out


# ----------------------------------------------------------------------
# finitely generated abelian groups and their maps


class FGAbelian:
    """Z^n modulo the column lattice of a presentation matrix."""

    def __init__(self, n_generators: int, relations=None):
        self.n = int(n_generators)
        if relations is None or (len(relations) == 0):
            relations = [[] for _ in range(self.n)]
        relations = [list(map(int, row)) for row in relations]
        if len(relations) != self.n:
            raise DimensionMismatchError(
                f"presentation has {len(relations)} rows for {self.n} generators"
            )
        self.relations = relations
        self._snf = None

    @staticmethod
    def from_invariants(free_rank: int, torsion=()) -> "FGAbelian":
        """Z^free_rank direct sum of Z/t for t in torsion."""
        torsion = [int(t) for t in torsion]
        n = free_rank + len(torsion)
        rel = [[0] * len(torsion) for _ in range(n)]
        for k, t in enumerate(torsion):
            rel[free_rank + k][k] = t
        return FGAbelian(n, rel)

    def snf(self) -> SNFResult:
        if self._snf is None:
            self._snf = smith_normal_form(self.relations)
        return self._snf

    @property
    def free_rank(self) -> int:
        return self.n - self.snf().rank

    @property
    def invariant_factors(self) -> list[int]:
        """Torsion orders > 1, in divisibility order."""
        return [d for d in self.snf().diag if d > 1]

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"FGAbelian({self})"


class FGAbelianMap:
    """A homomorphism given by an integer matrix on generators."""

    def __init__(self, source: FGAbelian, target: FGAbelian, matrix, validate: bool = True):
        matrix = [list(map(int, row)) for row in matrix]
        if len(matrix) != target.n or any(len(r) != source.n for r in matrix):
            raise DimensionMismatchError(
                f"matrix must be {target.n} x {source.n}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if validate:
            tgt = Lattice(target.relations, target.n)
            img = mat_mul(matrix, source.relations) if source.relations and len(
                source.relations[0]) else None
            if img is not None:
                for j in range(len(img[0])):
                    if not tgt.contains([img[i][j] for i in range(target.n)]):
                        raise DimensionMismatchError(
                            "matrix does not send relations into relations"
                        )

    def __repr__(self):
        return f"FGAbelianMap({self.source} -> {self.target})"


@dataclass(frozen=True)
class FGZlModule:
    """A finitely generated module over the l-adic integers, symbolically:
    a free rank plus l-power torsion orders."""

    prime: int
    rank: int
    torsion: tuple

    def __post_init__(self):
        for t in self.torsion:
            if t <= 1 or _l_part(t, self.prime) != t:
                raise DimensionMismatchError(f"torsion order {t} is not an l-power > 1")

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def direct_sum(self, other: "FGZlModule") -> "FGZlModule":
        if other.prime != self.prime:
            raise DimensionMismatchError("direct sum over different primes")
        tors = tuple(sorted(self.torsion + other.torsion, reverse=True))
        return FGZlModule(self.prime, self.rank + other.rank, tors)

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append(f"Z_{self.prime}")
        elif self.rank > 1:
            parts.append(f"Z_{self.prime}^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


def l_complete(A: FGAbelian, l: int) -> FGZlModule:
    """The inverse limit of A/l^n A: keep the free rank (now of l-adic
    summands) and the l-parts of the torsion."""
    torsion = []
    for d in A.invariant_factors:
        p = _l_part(d, l)
        if p > 1:
            torsion.append(p)
    return FGZlModule(l, A.free_rank, tuple(sorted(torsion, reverse=True)))


def _preimage_lattice(M, tgt: Lattice) -> list[list[int]]:
    """Generators of {x : M x lies in tgt}, as columns."""
    rows = len(M)
    n = len(M[0]) if rows else 0
    big = hstack_int(M, [[-v for v in row] for row in tgt.matrix]) if tgt.ncols else M
    ker = integer_kernel_columns(big)
    if not ker or not ker[0]:
        return [[] for _ in range(n)]
    return [ker[i] for i in range(n)]


def _preimage_lattice_l_local(M, tgt: Lattice, l: int) -> list[list[int]]:
    """Generators of {x : M x lies in the Z_l-span of tgt}.

    Conditions come from the Smith form of the target lattice: with
    U R V = diag(d), the requirement on c = U M x is c_i = 0 beyond the
    rank and c_i divisible by the l-part of d_i otherwise.
    """
    rows = len(M)
    n = len(M[0]) if rows else 0
    s = tgt.snf()
    UM = mat_mul(list(map(list, s.U)), M) if rows else []
    r = s.rank
    stacked = []
    pad = 0
    for i in range(rows):
        d = s.diag[i] if i < len(s.diag) else 0
        if d == 0:
            stacked.append((list(UM[i]), None))
        else:
            stacked.append((list(UM[i]), _l_part(d, l)))
            pad += 1
    mat = []
    k = 0
    for row, modulus in stacked:
        extra = [0] * pad
        if modulus is not None:
            extra[k] = modulus
            k += 1
        mat.append(row + extra)
    ker = integer_kernel_columns(mat)
    if not ker or not ker[0]:
        return [[] for _ in range(n)]
    return [ker[i] for i in range(n)]


def _sublattice_of(generators, big: Lattice, l: int | None) -> bool:
    """Is every generator column in `big` (integrally, or l-locally)?"""
    if not generators or not generators[0]:
        return True
    ncols = len(generators[0])
    for j in range(ncols):
        v = [generators[i][j] for i in range(len(generators))]
        ok = big.contains_l_locally(v, l) if l else big.contains(v)
        if not ok:
            return False
    return True


def _exact_at_all_spots(f: FGAbelianMap, g: FGAbelianMap, l: int | None) -> bool:
    """Exactness of 0 -> A -> B -> C -> 0, integrally (l=None) or after
    l-completion (decided on l-parts)."""
    A, B, C = f.source, f.target, g.target
    rel_a = Lattice(A.relations, A.n)
    rel_b = Lattice(B.relations, B.n)
    im_f_rel_b = Lattice(hstack_int(f.matrix, B.relations), B.n)
    im_g_rel_c = Lattice(hstack_int(g.matrix, C.relations), C.n)
    pre = _preimage_lattice_l_local if l else _preimage_lattice

    # injectivity of A -> B: preimage of rel_B under f lies in rel_A
    ker_f = pre(f.matrix, rel_b, l) if l else _preimage_lattice(f.matrix, rel_b)
    if not _sublattice_of(ker_f, rel_a, l):
        return False
    # exactness at B: preimage of rel_C under g lies in im(f) + rel_B
    ker_g = pre(g.matrix, Lattice(C.relations, C.n), l) if l else _preimage_lattice(
        g.matrix, Lattice(C.relations, C.n))
    if not _sublattice_of(ker_g, im_f_rel_b, l):
        return False
    # surjectivity of B -> C: every generator of C is hit
    eye = _identity(C.n)
    if not _sublattice_of(eye, im_g_rel_c, l):
        return False
    return True


def check_exactness(f: FGAbelianMap, g: FGAbelianMap, l: int) -> bool:
    """Does 0 -> A_l -> B_l -> C_l -> 0 stay exact after l-completion?

    Validates that g o f = 0 and that the integral sequence is a short
    exact sequence (NotExactIntegrallyError otherwise), then decides the
    completed sequence by independent l-local lattice computations.
    """
    if f.target is not g.source and f.target.n != g.source.n:
        raise DimensionMismatchError("maps do not compose")
    comp = mat_mul(g.matrix, f.matrix)
    rel_c = Lattice(g.target.relations, g.target.n)
    for j in range(f.source.n):
        if not rel_c.contains([comp[i][j] for i in range(g.target.n)]):
            raise NotExactIntegrallyError("g o f is not zero")
    if not _exact_at_all_spots(f, g, None):
        raise NotExactIntegrallyError("integral sequence is not short exact")
    return _exact_at_all_spots(f, g, l)

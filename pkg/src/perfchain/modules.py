"""Finitely generated F_l[pi]-modules as F_l spaces with pi-action.

Every predicate here reduces to exact finite linear algebra.  The freeness
test uses the minimal-cover criterion, valid because F_l[pi] is local:
a module is free iff the cover by lifted minimal generators has zero
kernel.
"""

from __future__ import annotations

import numpy as np

from . import flinalg
from .errors import DimensionMismatchError, GroupMismatchError
from .groups import GroupTable, regular_action_matrices


class PiModule:
    """A finite-dimensional F_l space with a left pi-action.

    `action[g]` acts on column vectors; action(g) @ action(h) == action(gh)
    is validated at construction (which also forces invertibility).
    """

    __slots__ = ("group", "dim", "action")

    def __init__(self, group: GroupTable, dim: int, action, validate: bool = True):
        l = group.prime_l
        action = [flinalg.asfield(a, l) for a in action]
        if len(action) != group.order:
            raise DimensionMismatchError("need one action matrix per group element")
        for a in action:
            if a.shape != (dim, dim):
                raise DimensionMismatchError("action matrix shape mismatch")
            a.flags.writeable = False
        if validate:
            if not np.array_equal(action[group.identity], flinalg.identity(dim, l)):
                raise DimensionMismatchError("identity must act as the identity matrix")
            for g in range(group.order):
                for h in range(group.order):
                    gh = group.mult[g, h]
                    if not np.array_equal((action[g] @ action[h]) % l, action[gh]):
                        raise DimensionMismatchError("action is not a homomorphism")
        self.group = group
        self.dim = int(dim)
        self.action = action

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other):
        return (
            isinstance(other, PiModule)
            and self.group == other.group
            and self.dim == other.dim
            and all(np.array_equal(a, b) for a, b in zip(self.action, other.action))
        )

    def __repr__(self):
        return f"PiModule(dim={self.dim} over {self.group.descriptor})"


class PiModuleMap:
    """An equivariant F_l-linear map between PiModules."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: PiModule, target: PiModule, matrix, validate: bool = True):
        if source.group != target.group:
            raise GroupMismatchError("map between modules over different groups")
        l = source.group.prime_l
        matrix = flinalg.asfield(matrix, l)
        if matrix.shape != (target.dim, source.dim):
            raise DimensionMismatchError(
                f"matrix shape {matrix.shape} != ({target.dim}, {source.dim})"
            )
        matrix.flags.writeable = False
        if validate:
            for g in range(source.group.order):
                lhs = (target.action[g] @ matrix) % l
                rhs = (matrix @ source.action[g]) % l
                if not np.array_equal(lhs, rhs):
                    raise DimensionMismatchError("matrix does not commute with the action")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __repr__(self):
        return f"PiModuleMap({self.source.dim} -> {self.target.dim})"


def zero_module(G: GroupTable) -> PiModule:
    return PiModule(G, 0, [np.zeros((0, 0), dtype=np.int64)] * G.order, validate=False)


def trivial_module(G: GroupTable, dim: int = 1) -> PiModule:
    eye = flinalg.identity(dim, G.prime_l)
    return PiModule(G, dim, [eye] * G.order, validate=False)


def regular_module(G: GroupTable, rank: int) -> PiModule:
    """The free module F_l[pi]^rank with its left translation action."""
    if rank == 0:
        return zero_module(G)
    return PiModule(G, rank * G.order, regular_action_matrices(G, rank), validate=False)


def direct_sum_modules(*mods: PiModule) -> PiModule:
    if not mods:
        raise DimensionMismatchError("empty direct sum")
    G = mods[0].group
    for m in mods[1:]:
        if m.group != G:
            raise GroupMismatchError("direct sum over different groups")
    dim = sum(m.dim for m in mods)
    action = []
    for g in range(G.order):
        big = np.zeros((dim, dim), dtype=np.int64)
        off = 0
        for m in mods:
            big[off:off + m.dim, off:off + m.dim] = m.action[g]
            off += m.dim
        action.append(big)
    return PiModule(G, dim, action, validate=False)


def radical_basis(M: PiModule) -> np.ndarray:
    """Basis (columns) of rad * M = span{(g - 1) m}."""
    l = M.group.prime_l
    if M.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    eye = flinalg.identity(M.dim, l)
    blocks = [(M.action[g] - eye) % l for g in range(M.group.order)]
    return flinalg.column_space_basis(np.hstack(blocks), l)


def minimal_generators(M: PiModule) -> int:
    """Nakayama count: dim of M / rad*M."""
    return M.dim - radical_basis(M).shape[1]


def minimal_generator_lifts(M: PiModule, reverse: bool = False) -> np.ndarray:
    """Columns are module elements whose classes form a basis of M/rad*M.

    Chosen by echelon completion against the standard basis; `reverse`
    flips the scan order (used to test choice-independence of verdicts).
    """
    l = M.group.prime_l
    rad = radical_basis(M)
    eye = flinalg.identity(M.dim, l)
    if reverse:
        eye = eye[:, ::-1]
    return flinalg.complete_basis(rad, eye, l)


def free_cover(M: PiModule, reverse: bool = False) -> PiModuleMap:
    """The minimal surjection F_l[pi]^k -> M, k = minimal_generators(M)."""
    G = M.group
    l = G.prime_l
    gens = minimal_generator_lifts(M, reverse=reverse)
    k = gens.shape[1]
    F = regular_module(G, k)
    o = G.order
    mat = np.zeros((M.dim, k * o), dtype=np.int64)
    for t in range(k):
        for s in range(o):
            mat[:, t * o + s] = (M.action[s] @ gens[:, t]) % l
    return PiModuleMap(F, M, mat, validate=False)


def kernel_of_map(f: PiModuleMap) -> tuple[PiModule, PiModuleMap]:
    """Kernel with its inclusion; the pi-action restricts exactly."""
    G = f.source.group
    l = G.prime_l
    K = flinalg.kernel_basis(f.matrix, l)
    kdim = K.shape[1]
    action = []
    for g in range(G.order):
        if kdim == 0:
            action.append(np.zeros((0, 0), dtype=np.int64))
            continue
        X = flinalg.solve_matrix(K, (f.source.action[g] @ K) % l, l)
        if X is None:
            raise AssertionError("kernel not action-invariant")
        action.append(X)
    ker = PiModule(G, kdim, action, validate=False)
    incl = PiModuleMap(ker, f.source, K, validate=False)
    return ker, incl


def is_free(M: PiModule) -> tuple[bool, int | None]:
    """True iff M is a free module, with its rank when so.

    Decided by the minimal free cover: over a local ring the cover is
    onto, and M is free exactly when the cover has zero kernel.
    """
    G = M.group
    k = minimal_generators(M)
    if M.dim != k * G.order:
        return False, None
    if k == 0:
        return True, 0
    cover = free_cover(M)
    if flinalg.rank(cover.matrix, G.prime_l) == k * G.order:
        return True, k
    return False, None


def is_projective(M: PiModule) -> bool:
    """Projective == free over F_l[pi]; same verdict as is_free."""
    return is_free(M)[0]


def has_equivariant_section(f: PiModuleMap) -> bool:
    """Splitting oracle: does f admit an equivariant right inverse?

    Solves the finite linear system f @ s = id, s equivariant, over F_l.
    Kept independent of is_free/is_projective so tests can compare the
    two routes.
    """
    G = f.source.group
    l = G.prime_l
    sdim, tdim = f.source.dim, f.target.dim
    if tdim == 0:
        return True
    eye_s = flinalg.identity(sdim, l)
    eye_t = flinalg.identity(tdim, l)
    rows = [np.kron(eye_t, f.matrix)]
    rhs = [flinalg.identity(tdim, l).T.reshape(-1)]
    for g in range(G.order):
        rows.append(np.kron(f.target.action[g].T, eye_s) - np.kron(eye_t, f.source.action[g]))
        rhs.append(np.zeros(sdim * tdim, dtype=np.int64))
    A = np.vstack(rows) % l
    b = np.concatenate(rhs) % l
    return flinalg.solve_matrix(A, b, l) is not None


def submodule_span(M: PiModule, vectors) -> np.ndarray:
    """Basis of the submodule generated by the given columns.

    One pass over all group elements suffices because the action matrices
    form a group.
    """
    l = M.group.prime_l
    V = flinalg.asfield(vectors, l)
    if V.ndim == 1:
        V = V[:, None]
    if V.shape[1] == 0:
        return np.zeros((M.dim, 0), dtype=np.int64)
    blocks = [(M.action[g] @ V) % l for g in range(M.group.order)]
    return flinalg.column_space_basis(np.hstack(blocks), l)


def quotient_module(M: PiModule, sub_basis) -> tuple[PiModule, PiModuleMap]:
    """Quotient of M by an action-invariant subspace, with the projection."""
    G = M.group
    l = G.prime_l
    W = flinalg.asfield(sub_basis, l)
    for g in range(G.order):
        img = (M.action[g] @ W) % l
        if W.size and not flinalg.same_column_space(np.hstack([W, img]), W, l):
            raise DimensionMismatchError("subspace is not action-invariant")
    quo = flinalg.QuotientSpace(flinalg.identity(M.dim, l), W, l)
    action = [quo.project((M.action[g] @ quo.reps) % l) for g in range(G.order)]
    Q = PiModule(G, quo.dim, action, validate=False)
    proj = PiModuleMap(M, Q, quo.project(flinalg.identity(M.dim, l)), validate=False)
    return Q, proj

"""Machine-checkable certificates for CLI verdicts.

Every certificate embeds the canonical form of its input (plus a sha256
digest of the canonical text) and enough witness data to re-validate the
verdict without re-running any search: quasi-isomorphism witnesses are
re-checked by cone acyclicity, non-freeness by an explicit kernel vector
of the minimal cover, Smith forms by multiplying out the transformations.
"""

from __future__ import annotations

import json

from . import flinalg, serialize
from .abelian import FGAbelian, SNFResult, mat_mul
from .chains import ChainComplex, is_quasi_iso, module_mapping_cone
from .errors import ParseError
from .finiteness import PerfectnessVerdict
from .modules import PiModuleMap, free_cover, minimal_generators, regular_module
from .towers import Tower

FORMAT = "perfchain-cert-v1"


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, separators=(",", ":")) + "\n"


def loads(text: str) -> dict:
    try:
        cert = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"bad certificate JSON: {e}")
    if not isinstance(cert, dict) or cert.get("format") != FORMAT:
        raise ParseError("not a perfchain certificate")
    return cert


class VerificationFailure(Exception):
    """Raised by checkers with the reason a certificate is invalid."""


def _base(kind: str, input_text: str) -> dict:
    return {
        "format": FORMAT,
        "kind": kind,
        "digest": serialize.digest_text(input_text),
    }


# ----------------------------------------------------------------------
# perfectness


def perfectness_certificate(C: ChainComplex, verdict: PerfectnessVerdict) -> dict:
    cert = _base("perfectness", serialize.write_complex(C))
    cert["input"] = serialize.complex_to_json(C)
    cert["verdict"] = {"perfect": verdict.perfect}
    if verdict.perfect:
        cert["verdict"]["euler_class"] = verdict.euler_class
        cert["witness"] = {
            "replacement": serialize.complex_to_json(verdict.replacement),
            "map": serialize.chain_map_to_json(verdict.witness),
        }
    else:
        cert["witness"] = _nonfree_witness(verdict)
    return cert


def _nonfree_witness(verdict: PerfectnessVerdict) -> dict:
    P = verdict.top_obstruction
    cover = free_cover(P)
    kernel = flinalg.kernel_basis(cover.matrix, P.group.prime_l)
    if kernel.shape[1] == 0:
        raise AssertionError("non-perfect verdict with free obstruction")
    return {
        "obstruction": serialize.module_to_json(P),
        "cover": cover.matrix.tolist(),
        "kernel_vector": kernel[:, 0].tolist(),
    }


def _check_nonfree(witness: dict, G) -> None:
    P = serialize.module_from_json(witness["obstruction"], G)
    l = G.prime_l
    k = minimal_generators(P)
    cover_mat = flinalg.asfield(witness["cover"], l)
    if cover_mat.shape != (P.dim, k * G.order):
        raise VerificationFailure("cover matrix has wrong shape for a minimal cover")
    cover = PiModuleMap(regular_module(G, k), P, cover_mat)  # validates equivariance
    if flinalg.rank(cover.matrix, l) != P.dim:
        raise VerificationFailure("recorded cover is not surjective")
    v = flinalg.asfield(witness["kernel_vector"], l)
    if not v.any():
        raise VerificationFailure("kernel vector is zero")
    if ((cover.matrix @ v) % l).any():
        raise VerificationFailure("kernel vector is not in the kernel")


def check_perfectness(cert: dict) -> None:
    C = serialize.complex_from_json(cert["input"])
    if cert["digest"] != serialize.digest_text(serialize.write_complex(C)):
        raise VerificationFailure("input digest mismatch")
    if cert["verdict"]["perfect"]:
        _check_positive_witness(cert, C)
    else:
        _check_nonfree(cert["witness"], C.group)


def _check_positive_witness(cert: dict, C) -> None:
    from .chains import euler_characteristic
    R = serialize.complex_from_json(cert["witness"]["replacement"])
    if not R.is_minimal():
        raise VerificationFailure("replacement is not minimal")
    f = serialize.chain_map_from_json(cert["witness"]["map"], R, C)
    if not is_quasi_iso(f):
        raise VerificationFailure("witness map is not a quasi-isomorphism")
    if euler_characteristic(R) != cert["verdict"]["euler_class"]:
        raise VerificationFailure("euler_class does not match the replacement")


# ----------------------------------------------------------------------
# quasi-iso (minimalization)


def quasi_iso_certificate(C: ChainComplex, minimal: ChainComplex, witness) -> dict:
    cert = _base("quasi-iso", serialize.write_complex(C))
    cert["input"] = serialize.complex_to_json(C)
    cert["witness"] = {
        "minimal": serialize.complex_to_json(minimal),
        "map": serialize.chain_map_to_json(witness),
    }
    return cert


def check_quasi_iso(cert: dict) -> None:
    C = serialize.complex_from_json(cert["input"])
    if cert["digest"] != serialize.digest_text(serialize.write_complex(C)):
        raise VerificationFailure("input digest mismatch")
    R = serialize.complex_from_json(cert["witness"]["minimal"])
    if not R.is_minimal():
        raise VerificationFailure("claimed minimal complex has a unit entry")
    f = serialize.chain_map_from_json(cert["witness"]["map"], R, C)
    if not is_quasi_iso(f):
        raise VerificationFailure("witness map is not a quasi-isomorphism")


# ----------------------------------------------------------------------
# tower limits


def limit_certificate(T: Tower, horizon: int, limit) -> dict:
    cert = _base("limit", serialize.write_tower(T))
    cert["input"] = {"tower": serialize.write_tower(T)}
    cert["horizon"] = horizon
    cert["limit"] = serialize.module_complex_to_json(limit)
    return cert


def check_limit(cert: dict) -> None:
    from .towers import limit_complex
    T = serialize.read_tower(cert["input"]["tower"])
    if cert["digest"] != serialize.digest_text(serialize.write_tower(T)):
        raise VerificationFailure("input digest mismatch")
    h = cert["horizon"]
    try:
        recomputed = limit_complex(T, h)
    except Exception as e:
        raise VerificationFailure(f"limit could not be recomputed: {e}")
    if serialize.module_complex_to_json(recomputed) != cert["limit"]:
        raise VerificationFailure("recorded limit does not match the stable images")


def tower_perfectness_certificate(T: Tower, horizon: int, limit,
                                  verdict: PerfectnessVerdict) -> dict:
    cert = _base("perfectness", serialize.write_tower(T))
    cert["input"] = {"tower": serialize.write_tower(T), "horizon": horizon}
    cert["limit"] = serialize.module_complex_to_json(limit)
    cert["verdict"] = {"perfect": verdict.perfect}
    if verdict.perfect:
        cert["verdict"]["euler_class"] = verdict.euler_class
        cert["witness"] = {
            "replacement": serialize.complex_to_json(verdict.replacement),
            "map": serialize.module_map_to_json(verdict.witness),
        }
    else:
        cert["witness"] = _nonfree_witness(verdict)
    return cert


def check_tower_perfectness(cert: dict) -> None:
    T = serialize.read_tower(cert["input"]["tower"])
    if cert["digest"] != serialize.digest_text(serialize.write_tower(T)):
        raise VerificationFailure("input digest mismatch")
    limit = serialize.module_complex_from_json(cert["limit"])
    if cert["verdict"]["perfect"]:
        R = serialize.complex_from_json(cert["witness"]["replacement"])
        if not R.is_minimal():
            raise VerificationFailure("replacement is not minimal")
        f = serialize.module_map_from_json(cert["witness"]["map"], R.expanded(), limit)
        if not module_mapping_cone(f).is_acyclic():
            raise VerificationFailure("witness map is not a quasi-isomorphism")
        from .chains import euler_characteristic
        if euler_characteristic(R) != cert["verdict"]["euler_class"]:
            raise VerificationFailure("euler_class does not match the replacement")
    else:
        _check_nonfree(cert["witness"], limit.group)


# ----------------------------------------------------------------------
# Smith normal form / completion


def _int_det(M) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def snf_certificate(M, result: SNFResult) -> dict:
    cert = _base("snf", serialize.write_int_matrix(M))
    cert["input"] = {"matrix": [list(map(int, r)) for r in M]}
    cert["witness"] = {
        "diag": list(result.diag),
        "U": [list(r) for r in result.U],
        "V": [list(r) for r in result.V],
    }
    return cert


def _check_snf_witness(M, witness: dict) -> None:
    U, V, diag = witness["U"], witness["V"], witness["diag"]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if abs(_int_det(U)) != 1 or abs(_int_det(V)) != 1:
        raise VerificationFailure("transformation matrices are not unimodular")
    D = mat_mul(mat_mul(U, M), V) if rows and cols else [[0] * cols for _ in range(rows)]
    for i in range(rows):
        for j in range(cols):
            expected = diag[i] if i == j and i < len(diag) else 0
            if D[i][j] != expected:
                raise VerificationFailure("U M V is not the claimed diagonal")
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            raise VerificationFailure("zero factor precedes a nonzero factor")
        if a and b % a:
            raise VerificationFailure("invariant factors fail divisibility")


def check_snf(cert: dict) -> None:
    M = cert["input"]["matrix"]
    if cert["digest"] != serialize.digest_text(serialize.write_int_matrix(M)):
        raise VerificationFailure("input digest mismatch")
    _check_snf_witness(M, cert["witness"])


def completion_certificate(A: FGAbelian, l: int, result) -> dict:
    text = serialize.write_int_matrix(A.relations) if A.n else "\n"
    cert = _base("completion", text)
    snf = A.snf()
    cert["input"] = {"generators": A.n, "relations": [list(r) for r in A.relations],
                     "prime": l}
    cert["witness"] = {
        "diag": list(snf.diag),
        "U": [list(r) for r in snf.U],
        "V": [list(r) for r in snf.V],
    }
    cert["verdict"] = {"rank": result.rank, "torsion": list(result.torsion)}
    return cert


def check_completion(cert: dict) -> None:
    n = cert["input"]["generators"]
    rel = cert["input"]["relations"]
    l = cert["input"]["prime"]
    if len(rel) != n:
        raise VerificationFailure("relations do not match generator count")
    _check_snf_witness(rel, cert["witness"])
    diag = cert["witness"]["diag"]
    rank = n - sum(1 for d in diag if d)
    torsion = []
    for d in diag:
        p = 1
        d = abs(d)
        while d and d % l == 0:
            d //= l
            p *= l
        if p > 1:
            torsion.append(p)
    torsion.sort(reverse=True)
    if rank != cert["verdict"]["rank"] or torsion != list(cert["verdict"]["torsion"]):
        raise VerificationFailure("completion does not match the Smith data")


# ----------------------------------------------------------------------


_CHECKERS = {
    "perfectness": check_perfectness,
    "quasi-iso": check_quasi_iso,
    "limit": check_limit,
    "snf": check_snf,
    "completion": check_completion,
}


def verify(cert: dict) -> None:
    """Raise VerificationFailure (or ParseError) unless the certificate
    is internally valid."""
    kind = cert.get("kind")
    if kind == "perfectness" and "tower" in cert.get("input", {}):
        check_tower_perfectness(cert)
        return
    checker = _CHECKERS.get(kind)
    if checker is None:
        raise ParseError(f"unknown certificate kind {kind!r}")
    checker(cert)

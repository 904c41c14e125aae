"""Factor-once, solve-many linear algebra for real and complex-shifted systems."""

import hashlib
import logging
import re
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from padestep.errors import FactorizationError, ParameterError
from padestep.models import FactorKind

logger = logging.getLogger(__name__)

_MINOR_RE = re.compile(r"(\d+)-th leading minor")


@dataclass(frozen=True)
class Factorization:
    """An immutable factorization handle, reusable for any number of right-hand sides."""

    kind: FactorKind
    n: int
    dtype: np.dtype
    checksum: str
    handle: Any = field(repr=False, compare=False)

    @property
    def is_complex(self) -> bool:
        return np.issubdtype(self.dtype, np.complexfloating)


def _checksum(a) -> str:
    digest = hashlib.blake2b(digest_size=16)
    if sp.issparse(a):
        a = a.tocsr()
        for part in (a.data, a.indices, a.indptr):
            digest.update(np.ascontiguousarray(part).tobytes())
    else:
        digest.update(np.ascontiguousarray(a).tobytes())
    return digest.hexdigest()


def is_symmetric(a, tol: float = 1e-12) -> bool:
    """max |a_ij - a_ji| <= tol * ||a||_inf."""
    if sp.issparse(a):
        diff = abs(a - a.T).max() if a.nnz else 0.0
        norm = spla.norm(a, np.inf) if a.nnz else 0.0
    else:
        a = np.asarray(a)
        diff = np.max(np.abs(a - a.T)) if a.size else 0.0
        norm = np.linalg.norm(a, np.inf) if a.size else 0.0
    return bool(diff <= tol * norm)


def _validate_square(a) -> int:
    shape = a.shape
    if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 1:
        raise ParameterError(f"expected a non-empty square matrix, got shape {shape}")
    values = a.data if sp.issparse(a) else a
    if not np.all(np.isfinite(values)):
        raise ParameterError("matrix has non-finite entries")
    return shape[0]


def factor(a, spd: bool = False) -> Factorization:
    """Cholesky (spd=True) or partially pivoted LU of a dense matrix; SuperLU of a sparse one."""
    if not sp.issparse(a):
        a = np.asarray(a)
    n = _validate_square(a)
    checksum = _checksum(a)

    if sp.issparse(a):
        csc = sp.csc_matrix(a)
        try:
            handle = spla.splu(csc)
        except RuntimeError as exc:
            raise FactorizationError(f"sparse matrix is singular: {exc}") from exc
        return Factorization(FactorKind.SPLU, n, csc.dtype, checksum, handle)

    if spd:
        try:
            handle = sla.cho_factor(a, lower=True, check_finite=False)
        except np.linalg.LinAlgError as exc:
            match = _MINOR_RE.search(str(exc))
            pivot = int(match.group(1)) - 1 if match else None
            raise FactorizationError(f"matrix is not positive definite: {exc}", pivot) from exc
        return Factorization(FactorKind.CHOLESKY, n, a.dtype, checksum, handle)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    diag = np.abs(np.diag(lu))
    scale = float(np.max(np.abs(a)))
    tiny = np.flatnonzero(diag <= np.finfo(float).eps * n * scale)
    if scale == 0.0 or tiny.size:
        pivot = int(tiny[0]) if tiny.size else 0
        raise FactorizationError(f"matrix is singular at pivot {pivot}", pivot)
    return Factorization(FactorKind.LU, n, lu.dtype, checksum, (lu, piv))


def _solve_raw(f: Factorization, b: np.ndarray) -> np.ndarray:
    if f.kind is FactorKind.CHOLESKY:
        return sla.cho_solve(f.handle, b, check_finite=False)
    if f.kind is FactorKind.LU:
        return sla.lu_solve(f.handle, b, check_finite=False)
    return f.handle.solve(b.astype(f.dtype, copy=False))


def solve(f: Factorization, b) -> np.ndarray:
    """Solve A x = b with a stored factorization."""
    b = np.asarray(b)
    if b.ndim == 0 or b.shape[0] != f.n:
        raise ParameterError(f"right-hand side has shape {b.shape}, expected leading dim {f.n}")
    if np.iscomplexobj(b) and not f.is_complex:
        return _solve_raw(f, b.real.astype(float)) + 1j * _solve_raw(f, b.imag.astype(float))
    if f.is_complex:
        b = b.astype(complex)
    else:
        b = b.astype(float)
    return _solve_raw(f, b)


def generalized_eig(k, m) -> tuple[np.ndarray, np.ndarray]:
    """Solve K phi = w² M phi densely; eigenvalues ascending, eigenvectors M-orthonormal."""
    k = k.toarray() if sp.issparse(k) else np.asarray(k, dtype=float)
    m = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=float)
    n = _validate_square(k)
    if m.shape != (n, n):
        raise ParameterError(f"K is {k.shape} but M is {m.shape}")
    if not (is_symmetric(k) and is_symmetric(m)):
        raise ParameterError("K and M must be symmetric")
    if n > 200:
        logger.debug("dense generalized eigensolve with n=%d", n)
    try:
        w2, phi = sla.eigh(k, m)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"mass matrix is not positive definite: {exc}") from exc
    return w2, phi

"""Derivation algebras Der(g) computed as a numerical null space.

A derivation is a linear map D with D[x, y] = [Dx, y] + [x, Dy].  The
defect of that identity over all basis pairs is a linear function of D,
so Der(g) is the null space of a fixed matrix; we extract it with an
SVD and keep the right singular vectors whose singular values fall
below 1e-9 times the largest one.  The resulting basis matrices are
orthonormal in the Frobenius inner product.

For the two built-in families the answer has a rigid shape: the first
row vanishes, row 2 is supported on columns 1..2, column 2 vanishes
below row 2, and the trailing (n-2) x (n-2) block is free, giving
dimension (n-2)^2 + n.  ``pattern_check`` verifies exactly that.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, UnsupportedFamilyError
from .lie_core import Family, LieAlgebra, jacobi_defect

NULLSPACE_RTOL = 1e-9
PATTERN_TOL = 1e-8


@dataclass(frozen=True)
class DerivationBasis:
    """Frobenius-orthonormal spanning set of Der(g), shape (dim, n, n)."""

    mats: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.mats, dtype=float)
        if m.ndim != 3 or m.shape[1] != m.shape[2]:
            raise ShapeError(f"expected (d, n, n) stack of matrices, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "mats", m)

    @property
    def dim(self) -> int:
        return self.mats.shape[0]

    @property
    def n(self) -> int:
        return self.mats.shape[1]


def _leibniz_operator(g: LieAlgebra) -> np.ndarray:
    """Matrix of D -> (D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]) over pairs i<j."""
    n = g.dim
    c = g.c
    eye = np.eye(n)
    # T[i,j,k,a,b] is the coefficient of D[a,b] in the k-th component of
    # the pair-(i,j) defect.
    T = (
        np.einsum("ijb,ak->ijkab", c, eye)
        - np.einsum("ib,ajk->ijkab", eye, c)
        - np.einsum("jb,iak->ijkab", eye, c)
    )
    iu, ju = np.triu_indices(n, k=1)
    return T[iu, ju].reshape(len(iu) * n, n * n)


def derivation_basis(g: LieAlgebra) -> DerivationBasis:
    """Compute an orthonormal basis of Der(g).

    Requires jacobi_defect(g) < 1e-9.  The abelian algebra returns the
    full n^2-dimensional matrix space.
    """
    defect = jacobi_defect(g)
    if defect >= 1e-9:
        raise ValueError(f"not a Lie algebra (Jacobi defect {defect:g})")
    n = g.dim
    L = _leibniz_operator(g)
    _, s, vt = np.linalg.svd(L, full_matrices=True)
    smax = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s >= NULLSPACE_RTOL * smax))
    mats = vt[rank:].reshape(-1, n, n)
    return DerivationBasis(mats=mats)


def is_derivation(g: LieAlgebra, D: np.ndarray, tol: float) -> tuple[bool, float]:
    """Check the Leibniz rule for one matrix; returns (verdict, defect).

    The defect is the max over pairs i < j of the sup-norm of
    D[e_i,e_j] - [De_i,e_j] - [e_i,De_j].
    """
    D = np.asarray(D, dtype=float)
    n = g.dim
    if D.shape != (n, n):
        raise ShapeError(f"expected a {n}x{n} matrix, got {D.shape}")
    c = g.c
    lhs = np.einsum("ijm,km->ijk", c, D)
    rhs = np.einsum("mi,mjk->ijk", D, c) + np.einsum("mj,imk->ijk", D, c)
    iu, ju = np.triu_indices(n, k=1)
    defect = float(np.max(np.abs((lhs - rhs)[iu, ju]))) if iu.size else 0.0
    return defect <= tol, defect


def _forbidden_mask(n: int) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    mask[0, :] = True            # first row
    mask[1, 2:] = True           # row 2 beyond column 2
    mask[2:, 1] = True           # column 2 below row 2
    return mask


def pattern_check(g: LieAlgebra, basis: DerivationBasis) -> bool:
    """Verify the family derivation shape against a computed basis.

    True iff every basis element vanishes on the forbidden positions and
    every free position is reachable, i.e. the span is the whole
    pattern space.  Only defined for the built-in families.
    """
    if g.family_tag is Family.CUSTOM:
        raise UnsupportedFamilyError("pattern_check needs a built-in family")
    n = g.dim
    if basis.n != n:
        raise ShapeError(f"basis is {basis.n}x{basis.n}, algebra is {n}-dimensional")
    forbidden = _forbidden_mask(n)
    mats = basis.mats
    scale = max(1.0, float(np.max(np.abs(mats))) if mats.size else 1.0)
    if mats.size and np.max(np.abs(mats[:, forbidden])) > PATTERN_TOL * scale:
        return False
    # Span check: each free elementary matrix must project onto the basis
    # with no residual.
    flat = mats.reshape(basis.dim, n * n)
    for p, q in zip(*np.nonzero(~forbidden)):
        e = np.zeros(n * n)
        e[p * n + q] = 1.0
        resid = e - flat.T @ (flat @ e)
        if np.linalg.norm(resid) > PATTERN_TOL:
            return False
    return True


def conjugated_derivation_basis(basis: DerivationBasis, lam: float) -> DerivationBasis:
    """Express Der(g) in the reduced frame: conjugate by g_λ = I - λ E_{n,2}.

    Matrix expressions transform by D -> g_λ^{-1} D g_λ; the conjugated
    family pattern picks up the coupling entry (n, 2) = λ (D_22 - D_nn).
    The result is re-orthonormalized.
    """
    if lam < 0:
        raise ValueError(f"frame parameter must be nonnegative, got {lam}")
    n = basis.n
    g_lam = np.eye(n)
    g_lam[n - 1, 1] = -lam
    # E_{n,2}^2 = 0, so the inverse is I + lam E_{n,2} exactly.
    g_inv = np.eye(n)
    g_inv[n - 1, 1] = lam
    conj = np.einsum("ab,dbc,ce->dae", g_inv, basis.mats, g_lam)
    flat = conj.reshape(basis.dim, n * n)
    _, s, vt = np.linalg.svd(flat, full_matrices=False)
    smax = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s >= 1e-12 * smax))
    return DerivationBasis(mats=vt[:rank].reshape(-1, n, n))

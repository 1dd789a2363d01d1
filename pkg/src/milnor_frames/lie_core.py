"""Lie algebras as dense structure-constant tensors.

A Lie algebra of dimension n is stored as a rank-3 tensor ``c`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  Throughout the documentation and
in the text file format indices are 1-based, matching the usual
``e_1, ..., e_n`` notation; the arrays themselves are 0-based.

Two families are built in:

* ``rh2+abelian``: ``[e_1, e_2] = e_2`` and everything else abelian.
* ``rh-line``: ``[e_1, e_i] = e_i`` for ``i = 3..n``.

Every value is immutable after construction and every function here is
pure, so the module is safe to use from multiple threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DimensionError,
    ShapeError,
    SingularMatrixError,
    UnsupportedFamilyError,
)

# Constructed families have exact constants; this is an absolute gate.
ANTISYMMETRY_ATOL = 1e-12
JACOBI_ATOL = 1e-12


class Family(str, Enum):
    """Tags for the built-in algebra families (values match the CLI)."""

    RH2_SUM_ABELIAN = "rh2+abelian"
    RH_LINE_SUM = "rh-line"
    CUSTOM = "custom"


FAMILIES = (Family.RH2_SUM_ABELIAN, Family.RH_LINE_SUM)


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LieAlgebra:
    """Immutable structure-constant tensor plus a family tag.

    ``c[i, j, k]`` is the coefficient of ``e_k`` in ``[e_i, e_j]``
    (0-based here, 1-based in rendered output).
    """

    dim: int
    c: np.ndarray
    family_tag: Family = Family.CUSTOM

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise DimensionError(f"need dim >= 2, got {self.dim}")
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.dim, self.dim, self.dim):
            raise ShapeError(
                f"structure tensor must be {3 * (self.dim,)}, got {c.shape}"
            )
        scale = max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)
        skew = np.max(np.abs(c + c.transpose(1, 0, 2)))
        if skew > ANTISYMMETRY_ATOL * scale:
            raise ShapeError(f"structure constants not antisymmetric (defect {skew:g})")
        object.__setattr__(self, "c", _freeze(c))


def build_family(family_tag: Family | str, n: int) -> LieAlgebra:
    """Construct one of the two built-in families in its canonical basis.

    ``rh2+abelian`` has the single relation [e_1, e_2] = e_2;
    ``rh-line`` has [e_1, e_i] = e_i for i = 3..n.  Requires n >= 3.
    """
    family = Family(family_tag)
    if family is Family.CUSTOM:
        raise UnsupportedFamilyError("operation needs a built-in family, got 'custom'")
    if n < 3:
        raise DimensionError(f"family algebras need n >= 3, got {n}")
    c = np.zeros((n, n, n))
    if family is Family.RH2_SUM_ABELIAN:
        c[0, 1, 1] = 1.0
        c[1, 0, 1] = -1.0
    else:
        for i in range(2, n):
            c[0, i, i] = 1.0
            c[i, 0, i] = -1.0
    return LieAlgebra(dim=n, c=c, family_tag=family)


def milnor_pattern(family_tag: Family | str, n: int, lam: float) -> LieAlgebra:
    """Bracket relations of the reduced orthonormal frame with parameter λ.

    For ``rh2+abelian``: [x_1, x_2] = x_2 + λ x_n.
    For ``rh-line``:     [x_1, x_2] = -λ x_n and [x_1, x_i] = x_i, i >= 3.

    λ = 0 reproduces the canonical constants of :func:`build_family`.
    """
    family = Family(family_tag)
    if family is Family.CUSTOM:
        raise UnsupportedFamilyError("operation needs a built-in family, got 'custom'")
    if n < 3:
        raise DimensionError(f"family algebras need n >= 3, got {n}")
    if lam < 0:
        raise ValueError(f"frame parameter must be nonnegative, got {lam}")
    c = np.zeros((n, n, n))
    if family is Family.RH2_SUM_ABELIAN:
        c[0, 1, 1] = 1.0
        c[0, 1, n - 1] += lam
    else:
        c[0, 1, n - 1] = -lam
        for i in range(2, n):
            c[0, i, i] += 1.0
    c = c - c.transpose(1, 0, 2)
    return LieAlgebra(dim=n, c=c, family_tag=Family.CUSTOM)


def bracket(g: LieAlgebra, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Evaluate [x, y], i.e. contract the structure tensor with two vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (g.dim,) or y.shape != (g.dim,):
        raise ShapeError(f"expected vectors of length {g.dim}, got {x.shape} and {y.shape}")
    return np.einsum("i,j,ijk->k", x, y, g.c)


def jacobi_defect(g: LieAlgebra) -> float:
    """Worst violation of the Jacobi identity over all basis triples.

    Returns ``max_{i,j,k} || [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] ||_inf``,
    which is 0 for a genuine Lie algebra.
    """
    c = g.c
    jac = (
        np.einsum("jkm,iml->ijkl", c, c)
        + np.einsum("kim,jml->ijkl", c, c)
        + np.einsum("ijm,kml->ijkl", c, c)
    )
    return float(np.max(np.abs(jac)))


def change_basis(g: LieAlgebra, basis: np.ndarray) -> LieAlgebra:
    """Push the structure constants through a new basis.

    ``basis`` is an invertible n x n matrix whose columns are the new basis
    vectors in old coordinates.  The returned constants c' satisfy
    ``[P col_i, P col_j] = sum_k c'[i, j, k] (P col_k)`` where P = basis.
    The family tag degrades to CUSTOM because the canonical relations are
    generally destroyed.
    """
    P = np.asarray(basis, dtype=float)
    if P.shape != (g.dim, g.dim):
        raise ShapeError(f"basis matrix must be {g.dim}x{g.dim}, got {P.shape}")
    s = np.linalg.svd(P, compute_uv=False)
    if s[-1] <= 1e-12 * s[0]:
        raise SingularMatrixError("basis matrix is singular to working precision")
    P_inv = np.linalg.inv(P)
    cp = np.einsum("ia,jb,ijm,km->abk", P, P, g.c, P_inv)
    # kill the antisymmetry drift from floating-point summation order
    cp = 0.5 * (cp - cp.transpose(1, 0, 2))
    return LieAlgebra(dim=g.dim, c=cp, family_tag=Family.CUSTOM)


# --- structure-constants text format -------------------------------------
#
# line 1:            n
# following lines:   i j k v      (1-based, only pairs i < j listed)
#
# Antisymmetric completion is implied and unlisted entries are zero.


def parse_structure_constants(text: str) -> LieAlgebra:
    """Parse the structure-constants text format into a LieAlgebra."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty structure-constants input")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"first line must be the dimension, got {lines[0]!r}") from exc
    if n < 2:
        raise DimensionError(f"need dim >= 2, got {n}")
    c = np.zeros((n, n, n))
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError(f"expected 'i j k v', got {ln!r}")
        i, j, k = (int(p) for p in parts[:3])
        v = float(parts[3])
        if not (1 <= i < j <= n) or not (1 <= k <= n):
            raise ValueError(f"indices out of range (need 1 <= i < j <= n): {ln!r}")
        c[i - 1, j - 1, k - 1] = v
        c[j - 1, i - 1, k - 1] = -v
    alg = LieAlgebra(dim=n, c=c, family_tag=Family.CUSTOM)
    defect = jacobi_defect(alg)
    if defect > JACOBI_ATOL:
        raise ValueError(f"constants violate the Jacobi identity (defect {defect:g})")
    return alg


def format_structure_constants(g: LieAlgebra) -> str:
    """Render a LieAlgebra in the text format (1-based, pairs i < j only)."""
    out = [str(g.dim)]
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            for k in range(g.dim):
                v = float(g.c[i, j, k])
                if v != 0.0:
                    out.append(f"{i + 1} {j + 1} {k + 1} {v!r}")
    return "\n".join(out) + "\n"

"""Self-verification suite: the checks behind ``milnor-frames verify-paper``.

Each check exercises one end-to-end property of the two families, at
fixed tolerances, with deterministic sampling.  The functions return
:class:`CriterionResult` records instead of raising so the CLI and the
test suite can both consume them.

One check, ``block-characteristic-polynomial``, is expected to fail:
see its docstring.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .curvature import closed_form_ricci, levi_civita, ricci_operator, riemann
from .derivations import derivation_basis, pattern_check
from .eigensolve import jacobi_eigh
from .frame_reduction import reduce
from .lie_core import FAMILIES, Family, build_family, change_basis, milnor_pattern
from .sampling import RandomMetricSpec, SplitMix64, sample_metric
from .solvsoliton import classify_metric

LAMBDA_GRID = (0.0, 0.5, 1.0, 2.0, 7.3)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _result(name: str, passed: bool, detail: str, t0: float) -> CriterionResult:
    return CriterionResult(name=name, passed=passed, detail=detail, elapsed=time.perf_counter() - t0)


# --- deterministic helpers -------------------------------------------------


def _pattern_automorphism(rng: SplitMix64, n: int) -> np.ndarray:
    """Random element of the connected scaled-automorphism pattern, unit scale."""
    phi = np.eye(n)
    phi[1, 1] = 0.5 + 1.5 * abs(rng.uniform())
    phi[1, 0] = rng.uniform()
    for i in range(2, n):
        phi[i, 0] = 0.5 * rng.uniform()
    m = n - 2
    if m == 1:
        phi[2, 2] = 0.5 + 1.5 * abs(rng.uniform())
    else:
        raw = rng.matrix(m, m) + 2.0 * np.eye(m)
        Q, R = np.linalg.qr(raw)
        Q = Q * np.where(np.diag(R) < 0, -1.0, 1.0)
        if np.linalg.det(Q) < 0:
            Q[:, 0] *= -1.0
        phi[2:, 2:] = Q
    return phi


def _pushforward(G: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Gram matrix of the metric pushed forward by phi."""
    phi_inv = np.linalg.inv(phi)
    Gp = phi_inv.T @ G @ phi_inv
    return 0.5 * (Gp + Gp.T)


def _metric_with_parameter(n: int, lam: float) -> np.ndarray:
    """Gram matrix whose reduction parameter is exactly lam, by construction."""
    g_lam = np.eye(n)
    g_lam[n - 1, 1] = -lam
    return np.linalg.inv(g_lam @ g_lam.T)


# --- expected connection and curvature tables ------------------------------


def _expected_connection(family: Family, n: int, lam: float) -> np.ndarray:
    """The complete list of nonzero connection coefficients per family."""
    gam = np.zeros((n, n, n))
    last = n - 1
    if family is Family.RH2_SUM_ABELIAN:
        gam[0, 1, last] = lam / 2
        gam[1, 0, 1] = -1.0
        gam[1, 0, last] = -lam / 2
        gam[0, last, 1] = -lam / 2
        gam[last, 0, 1] = -lam / 2
        gam[1, 1, 0] = 1.0
        gam[1, last, 0] = lam / 2
        gam[last, 1, 0] = lam / 2
    else:
        gam[0, 1, last] = -lam / 2
        gam[1, 0, last] = lam / 2
        gam[0, last, 1] = lam / 2
        gam[last, 0, 1] = lam / 2
        gam[last, 0, last] = -1.0
        gam[1, last, 0] = -lam / 2
        gam[last, 1, 0] = -lam / 2
        gam[last, last, 0] = 1.0
        for i in range(2, n - 1):
            gam[i, 0, i] = -1.0
            gam[i, i, 0] = 1.0
    return gam


def _expected_curvature_rows(
    family: Family, n: int, lam: float
) -> list[tuple[tuple[int, int, int], np.ndarray]]:
    """Tabulated rows R(x_i, x_j) x_k that feed the Ricci contraction."""

    def e(idx: int, coef: float = 1.0) -> np.ndarray:
        v = np.zeros(n)
        v[idx] = coef
        return v

    last = n - 1
    rows: list[tuple[tuple[int, int, int], np.ndarray]] = []
    if family is Family.RH2_SUM_ABELIAN:
        rows += [
            ((0, 1, 1), e(0, -(1 + 0.75 * lam**2))),
            ((0, last, last), e(0, 0.25 * lam**2)),
            ((1, 0, 0), e(1, -(1 + 0.75 * lam**2))),
            ((1, last, last), e(1, 0.25 * lam**2)),
            ((last, 0, 0), e(last, 0.25 * lam**2)),
            ((last, 1, 1), e(last, 0.25 * lam**2)),
        ]
    else:
        rows += [
            ((0, 1, 1), e(0, -0.75 * lam**2)),
            ((0, last, last), e(0, -(1 - 0.25 * lam**2))),
            ((1, 0, 0), e(1, -0.75 * lam**2) + e(last, lam)),
            ((1, last, last), e(1, 0.25 * lam**2)),
            ((last, 0, 0), e(1, lam) + e(last, -(1 - 0.25 * lam**2))),
            ((last, 1, 1), e(last, 0.25 * lam**2)),
        ]
        for i in range(2, n - 1):
            rows.append(((0, i, i), e(0, -1.0)))
            rows.append(((1, i, i), e(last, lam / 2)))
            rows.append(((last, i, i), e(1, lam / 2) + e(last, -1.0)))
            for j in range(n):
                if j not in (1, i):
                    rows.append(((i, j, j), e(i, -1.0)))
    return rows


# --- the checks -------------------------------------------------------------


def check_ricci_closed_form() -> CriterionResult:
    """Generic pipeline vs closed form, entrywise, for both families."""
    t0 = time.perf_counter()
    worst = 0.0
    for family in FAMILIES:
        for n in range(3, 9):
            for lam in LAMBDA_GRID:
                alg = milnor_pattern(family, n, lam)
                got = ricci_operator(alg, np.eye(n)).ric
                want = closed_form_ricci(family, n, lam).ric
                worst = max(worst, float(np.max(np.abs(got - want))))
    elapsed = time.perf_counter() - t0
    passed = worst <= 1e-9 and elapsed < 5.0
    return _result(
        "ricci-closed-form-equivalence",
        passed,
        f"max entrywise deviation {worst:.2e} (tol 1e-09), {elapsed:.2f}s (< 5s)",
        t0,
    )


def check_connection_curvature_tables() -> CriterionResult:
    """Tabulated connection and curvature components at λ in {0, 1, 2}."""
    t0 = time.perf_counter()
    worst_conn = 0.0
    worst_curv = 0.0
    for family in FAMILIES:
        for n in (3, 4, 6):
            for lam in (0.0, 1.0, 2.0):
                alg = milnor_pattern(family, n, lam)
                ct = levi_civita(alg)
                worst_conn = max(
                    worst_conn,
                    float(np.max(np.abs(ct.gamma - _expected_connection(family, n, lam)))),
                )
                R = riemann(ct, alg)
                for (i, j, k), want in _expected_curvature_rows(family, n, lam):
                    worst_curv = max(worst_curv, float(np.max(np.abs(R[i, j, k] - want))))
    passed = worst_conn <= 1e-10 and worst_curv <= 1e-10
    return _result(
        "connection-curvature-tables",
        passed,
        f"max connection deviation {worst_conn:.2e}, max curvature deviation "
        f"{worst_curv:.2e} (tol 1e-10)",
        t0,
    )


def check_reduction_soundness(samples_per_dim: int = 250) -> CriterionResult:
    """Random-metric reduction postconditions and λ invariances."""
    t0 = time.perf_counter()
    worst_ortho = 0.0
    worst_bracket = 0.0
    worst_invariance = 0.0
    lam_negative = False
    seed_stream = SplitMix64(0x5EED0001)
    for family in FAMILIES:
        for n in range(3, 7):
            alg = build_family(family, n)
            for _ in range(samples_per_dim):
                seed = seed_stream.next_uint64()
                G = sample_metric(RandomMetricSpec(seed=seed), n)
                fr = reduce(alg, G)
                if fr.lam < 0:
                    lam_negative = True
                ortho = float(np.max(np.abs(fr.scale_k * fr.frame.T @ G @ fr.frame - np.eye(n))))
                pattern = milnor_pattern(family, n, fr.lam).c
                bracket = float(np.max(np.abs(change_basis(alg, fr.frame).c - pattern)))
                worst_ortho = max(worst_ortho, ortho)
                worst_bracket = max(worst_bracket, bracket)

                scale = 0.1 + 9.9 * abs(seed_stream.uniform())
                lam_scaled = reduce(alg, scale * G).lam
                phi = _pattern_automorphism(seed_stream, n)
                lam_pushed = reduce(alg, _pushforward(G, phi)).lam
                rel = max(1.0, fr.lam)
                worst_invariance = max(
                    worst_invariance,
                    abs(lam_scaled - fr.lam) / rel,
                    abs(lam_pushed - fr.lam) / rel,
                )
    elapsed = time.perf_counter() - t0
    passed = (
        worst_ortho <= 1e-8
        and worst_bracket <= 1e-8
        and worst_invariance <= 1e-8
        and not lam_negative
        and elapsed < 30.0
    )
    return _result(
        "reduction-soundness",
        passed,
        f"worst orthonormality {worst_ortho:.2e}, bracket {worst_bracket:.2e}, "
        f"λ invariance {worst_invariance:.2e} (tol 1e-08), λ >= 0: {not lam_negative}, "
        f"{elapsed:.2f}s (< 30s)",
        t0,
    )


def _signature_pair(family: Family, n: int) -> tuple[tuple[int, int, int], tuple[int, int, int]]:
    """(degenerate member for λ = 0, member for λ > 0)."""
    if family is Family.RH2_SUM_ABELIAN:
        return (2, n - 2, 0), (2, n - 3, 1)
    return (n - 1, 1, 0), (n - 1, 0, 1)


def check_signature_dichotomy(samples_per_dim: int = 150) -> CriterionResult:
    """Sampled signatures stay inside the declared pair; constructed
    metrics land on the predicted member."""
    t0 = time.perf_counter()
    failures: list[str] = []
    seed_stream = SplitMix64(0x5EED0002)
    for family in FAMILIES:
        for n in range(3, 7):
            alg = build_family(family, n)
            degenerate, generic = _signature_pair(family, n)
            for _ in range(samples_per_dim):
                G = sample_metric(RandomMetricSpec(seed=seed_stream.next_uint64()), n)
                sig = ricci_operator(alg, G).signature
                if sig not in (degenerate, generic):
                    failures.append(f"{family.value} n={n}: sampled signature {sig}")
            for _ in range(5):
                phi = _pattern_automorphism(seed_stream, n)
                scale = 0.2 + 5.0 * abs(seed_stream.uniform())
                flat = _pushforward(scale * np.eye(n), phi)
                if ricci_operator(alg, flat).signature != degenerate:
                    failures.append(f"{family.value} n={n}: λ=0 metric missed {degenerate}")
                lam = 0.3 + 3.0 * abs(seed_stream.uniform())
                curved = _pushforward(_metric_with_parameter(n, lam), phi)
                if ricci_operator(alg, curved).signature != generic:
                    failures.append(f"{family.value} n={n}: λ>0 metric missed {generic}")
    passed = not failures
    detail = "all signatures in the declared pairs" if passed else "; ".join(failures[:4])
    return _result("ricci-signature-dichotomy", passed, detail, t0)


def check_block_characteristic_polynomial() -> CriterionResult:
    """Eigenvalues of twice the rh-line (x2, xn) Ricci block against the
    reference polynomial t^2 + 2(n-2) t - (n-1)^2 λ^2.

    Kept exactly as stated even though it fails for λ > 0: the reference
    polynomial drops the diagonal contribution of the block, whose true
    characteristic polynomial is t^2 + 2(n-2) t - λ^2 (λ^2 + (n-2)^2 + 1).
    The discrepancy λ^2 (2(n-2) - λ^2) is reported, not patched.
    """
    t0 = time.perf_counter()
    worst = 0.0
    worst_at = ""
    for n in range(3, 9):
        for lam in (0.0, 1.0, 3.0):
            ric = closed_form_ricci(Family.RH_LINE_SUM, n, lam).ric
            idx = np.ix_((1, n - 1), (1, n - 1))
            block = 2.0 * ric[idx]
            mu, _ = jacobi_eigh(block)
            resid = float(np.max(np.abs(mu**2 + 2 * (n - 2) * mu - (n - 1) ** 2 * lam**2)))
            if resid > worst:
                worst, worst_at = resid, f"n={n}, λ={lam}"
    passed = worst <= 1e-8
    return _result(
        "block-characteristic-polynomial",
        passed,
        f"max |p(μ)| = {worst:.3e} at {worst_at} (tol 1e-08)",
        t0,
    )


def check_solvsoliton_classification(samples_per_dim: int = 100) -> CriterionResult:
    """Solvsoliton verdict iff λ = 0, and the canonical soliton constants."""
    t0 = time.perf_counter()
    failures: list[str] = []
    seed_stream = SplitMix64(0x5EED0003)
    for family in FAMILIES:
        for n in range(3, 7):
            alg = build_family(family, n)
            for _ in range(samples_per_dim):
                G = sample_metric(RandomMetricSpec(seed=seed_stream.next_uint64()), n)
                verdict, lam = classify_metric(alg, G)
                if verdict.is_solvsoliton != (lam == 0.0):
                    failures.append(f"{family.value} n={n}: verdict/λ mismatch (λ={lam})")
            for _ in range(5):
                phi = _pattern_automorphism(seed_stream, n)
                scale = 0.2 + 5.0 * abs(seed_stream.uniform())
                flat = _pushforward(scale * np.eye(n), phi)
                verdict, lam = classify_metric(alg, flat)
                if not verdict.is_solvsoliton or lam != 0.0:
                    failures.append(f"{family.value} n={n}: canonical-orbit metric judged non-soliton")
    for n in range(3, 9):
        v1, _ = classify_metric(build_family(Family.RH2_SUM_ABELIAN, n), np.eye(n))
        if abs(v1.c - (-1.0)) > 1e-10:
            failures.append(f"rh2+abelian n={n}: soliton constant {v1.c} != -1")
        v2, _ = classify_metric(build_family(Family.RH_LINE_SUM, n), np.eye(n))
        if abs(v2.c - (-(n - 2.0))) > 1e-10:
            failures.append(f"rh-line n={n}: soliton constant {v2.c} != {-(n - 2)}")
    passed = not failures
    detail = (
        "solvsoliton iff λ = 0; canonical constants -1 and -(n-2) recovered"
        if passed
        else "; ".join(failures[:4])
    )
    return _result("solvsoliton-classification", passed, detail, t0)


def check_einstein_nonexistence(samples_per_dim: int = 50) -> CriterionResult:
    """Einstein residual bounded away from zero for every sampled metric."""
    t0 = time.perf_counter()
    worst_ratio = np.inf
    seed_stream = SplitMix64(0x5EED0004)
    for family in FAMILIES:
        for n in range(3, 9):
            alg = build_family(family, n)
            for _ in range(samples_per_dim):
                G = sample_metric(RandomMetricSpec(seed=seed_stream.next_uint64()), n)
                verdict, lam = classify_metric(alg, G)
                ric_norm = float(np.linalg.norm(closed_form_ricci(family, n, lam).ric))
                worst_ratio = min(worst_ratio, verdict.einstein_residual / ric_norm)
    passed = worst_ratio > 1e-3
    return _result(
        "einstein-nonexistence",
        passed,
        f"min einstein_residual / ||Ric|| = {worst_ratio:.3e} (> 1e-03 required)",
        t0,
    )


def check_derivation_dimension() -> CriterionResult:
    """dim Der = (n-2)^2 + n and the zero pattern holds, both families."""
    t0 = time.perf_counter()
    failures: list[str] = []
    for family in FAMILIES:
        for n in range(3, 9):
            alg = build_family(family, n)
            basis = derivation_basis(alg)
            want = (n - 2) ** 2 + n
            if basis.dim != want:
                failures.append(f"{family.value} n={n}: dim {basis.dim} != {want}")
            elif not pattern_check(alg, basis):
                failures.append(f"{family.value} n={n}: pattern check failed")
    passed = not failures
    detail = "dimensions (n-2)^2 + n and patterns verified" if passed else "; ".join(failures)
    return _result("derivation-dimension-pattern", passed, detail, t0)


ALL_CHECKS = (
    check_ricci_closed_form,
    check_connection_curvature_tables,
    check_reduction_soundness,
    check_signature_dichotomy,
    check_block_characteristic_polynomial,
    check_solvsoliton_classification,
    check_einstein_nonexistence,
    check_derivation_dimension,
)


def run_all() -> list[CriterionResult]:
    """Run every check in order; deterministic across runs and platforms."""
    return [check() for check in ALL_CHECKS]

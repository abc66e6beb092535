# -*- coding: utf-8 -*-
"""
单个矩阵的完整恒等式校验

按输入的性质逐级展开：
    可逆 → solid（幂等系统 Φ_R 的检查）→ AO（对称系统、特征系统、对偶的检查）
前提不满足的检查记为 skipped 并给出原因；只有 fail 会让 verify 失败。
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Tuple, Union

from loguru import logger

from api.exceptions import IdemsysError
from services.character_systems import (
    bilinear_form_identities,
    build_psi_p,
    character_system_invariants,
    eigenmatrix,
    form_table,
    semisimple_decompose,
)
from services.correspondences import dual_aon, dual_cs, dual_sis, phi_of_psi, psi_of_phi
from services.exact_linalg import ExactMatrix, identity, is_invertible, mat_inverse, scale, transpose
from services.idempotent_systems import (
    apply_antiautomorphism,
    assemble_eigendata,
    build_phi_r,
    compute_a_basis,
    dual_system,
    eigendata,
    eigendata_identities,
    intersection_numbers_by_multiplication,
    isomorphism_witness,
    normalized_representative,
    symmetry_witness,
    verify_axioms,
)
from services.solid_matrices import check_ao, diagonal_equivalence, is_normalized, is_solid, normalize

CheckOutcome = Union[bool, Tuple[bool, str]]


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: CheckStatus
    reason: str = ""


@dataclass
class VerificationReport:
    """全部检查结果（按执行顺序）"""
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.status is not CheckStatus.FAIL for check in self.checks)

    def count(self, status: CheckStatus) -> int:
        return sum(1 for check in self.checks if check.status is status)


class _Runner:
    """执行检查并收集结果，异常按失败处理"""

    def __init__(self):
        self.report = VerificationReport()

    def run(self, name: str, fn: Callable[[], CheckOutcome]) -> bool:
        try:
            outcome = fn()
        except IdemsysError as e:
            self.report.checks.append(CheckResult(name, CheckStatus.FAIL, f"{e.error_code}: {e.message}"))
            return False
        holds, reason = outcome if isinstance(outcome, tuple) else (outcome, "")
        status = CheckStatus.PASS if holds else CheckStatus.FAIL
        self.report.checks.append(CheckResult(name, status, reason))
        return holds

    def skip(self, names: List[str], reason: str) -> None:
        for name in names:
            self.report.checks.append(CheckResult(name, CheckStatus.SKIPPED, reason))


SOLID_CHECKS = [
    "inverse_is_solid",
    "transpose_is_solid",
    "phi_r_axioms",
    "dual_phi_r_isomorphic_to_phi_r_inverse",
    "normalize_is_idempotent",
    "normalize_is_diagonally_equivalent",
    "normalized_representative",
    "ao",
]

EIGENDATA_IDENTITIES = [
    "k0_is_one",
    "kstar0_is_one",
    "nu_is_sum_k",
    "sum_m_is_one",
    "pq_is_nu_identity",
    "pt_kstar_is_k_q",
    "p_column0_ones",
    "p_row0_is_k",
    "pinv_column0_is_nu_inverse",
    "pinv_row0_is_scaled_kstar",
    "p0ij_is_delta_k",
    "kikj_is_sum_pk",
]

FORM_IDENTITIES = [
    "form_nondegenerate",
    "form_uv_is_uv_x0",
    "idempotents_orthogonal_under_form",
    "form_xi_ej",
    "phi_is_nu_form_e0",
    "sum_x_is_nu_e0",
    "kstar0_is_one",
    "pinv_border",
    "m_nonzero",
]

SYMMETRIC_CHECKS = (
    ["symmetry_witness_fixes_idempotents", "antiautomorphism_is_involution", "a0_is_identity"]
    + EIGENDATA_IDENTITIES
    + ["intersection_numbers_by_multiplication", "eigenmatrix_is_aon", "eigenmatrix_roundtrip",
       "dual_eigenmatrix_is_q", "dual_swaps_starred_scalars", "psi_p_roundtrip",
       "character_system_invariants", "semisimple_decompose_recovers_eigenmatrix"]
    + [f"form:{name}" for name in FORM_IDENTITIES]
    + ["sis_cs_roundtrip", "cs_sis_roundtrip", "dual_aon_involution", "p_pstar_is_nu_identity",
       "dual_cs_eigenmatrix", "dual_sis_eigenmatrix"]
)


def _sorted_rows(m: ExactMatrix) -> List[Tuple]:
    return sorted(tuple(x.sort_key() for x in row) for row in m.rows)


def _random_matrix(r: ExactMatrix, rng: random.Random) -> ExactMatrix:
    spec, n = r.spec, r.size
    upper = 5 if spec.is_rational else spec.modulus - 1
    return ExactMatrix(spec, tuple(
        tuple(spec.scalar(rng.randint(-upper, upper)) for _ in range(n)) for _ in range(n)
    ))


def _solid_checks(run: _Runner, r: ExactMatrix) -> bool:
    phi = build_phi_r(r)
    r_inv = mat_inverse(r)
    run.run("inverse_is_solid", lambda: is_solid(r_inv))
    run.run("transpose_is_solid", lambda: is_solid(transpose(r)))
    run.run("phi_r_axioms", lambda: verify_axioms(phi))
    run.run("dual_phi_r_isomorphic_to_phi_r_inverse",
            lambda: isomorphism_witness(dual_system(phi), build_phi_r(r_inv)) is not None)
    run.run("normalize_is_idempotent", lambda: normalize(normalize(r)) == normalize(r))
    run.run("normalize_is_diagonally_equivalent",
            lambda: diagonal_equivalence(r, normalize(r)) is not None and is_normalized(normalize(r)))
    run.run("normalized_representative", lambda: normalized_representative(phi) == normalize(r))

    ao = check_ao(r) is not None
    symmetric = symmetry_witness(phi) is not None
    if ao != symmetric:
        run.run("ao", lambda: (False, f"check_ao = {ao}，symmetry_witness = {symmetric}"))
        return False
    if not ao:
        run.skip(["ao"], "not AO")
        return False
    run.run("ao", lambda: True)
    return True


def _symmetric_checks(run: _Runner, r: ExactMatrix) -> None:
    phi = build_phi_r(r)
    n = r.size
    witness = symmetry_witness(phi)
    run.run("symmetry_witness_fixes_idempotents",
            lambda: all(apply_antiautomorphism(witness, a) == a for a in phi.matrices()))

    def involution() -> bool:
        rng = random.Random(n)
        samples = [_random_matrix(r, rng) for _ in range(10)]
        return all(apply_antiautomorphism(witness, apply_antiautomorphism(witness, a)) == a for a in samples)
    run.run("antiautomorphism_is_involution", involution)

    basis = compute_a_basis(phi)
    run.run("a0_is_identity", lambda: basis[0] == identity(r.spec, n))

    report = assemble_eigendata(phi)
    failures = set(eigendata_identities(report))
    for name in EIGENDATA_IDENTITIES:
        run.run(name, lambda name=name: name not in failures)

    p = report.p
    run.run("intersection_numbers_by_multiplication",
            lambda: intersection_numbers_by_multiplication(basis) == report.pnum)
    run.run("eigenmatrix_is_aon", lambda: is_normalized(p) and check_ao(p) is not None)
    run.run("eigenmatrix_roundtrip", lambda: eigendata(build_phi_r(p)).p == p)

    dual_report = assemble_eigendata(dual_system(phi))
    run.run("dual_eigenmatrix_is_q", lambda: dual_report.p == report.q)
    run.run("dual_swaps_starred_scalars",
            lambda: dual_report.m == report.mstar and dual_report.mstar == report.m
            and dual_report.k == report.kstar and dual_report.kstar == report.k)

    psi = build_psi_p(p)
    run.run("psi_p_roundtrip", lambda: eigenmatrix(psi) == p)
    run.run("character_system_invariants", lambda: not character_system_invariants(psi))
    run.run("semisimple_decompose_recovers_eigenmatrix",
            lambda: _sorted_rows(semisimple_decompose(psi.algebra).p) == _sorted_rows(p))

    table = form_table(psi)
    form_failures = set(bilinear_form_identities(psi, table))
    for name in FORM_IDENTITIES:
        run.run(f"form:{name}", lambda name=name: name not in form_failures)

    run.run("sis_cs_roundtrip", lambda: eigendata(phi_of_psi(psi_of_phi(phi))).p == p)
    run.run("cs_sis_roundtrip", lambda: eigenmatrix(psi_of_phi(phi_of_psi(psi))) == p)

    pstar = dual_aon(p)
    run.run("dual_aon_involution", lambda: dual_aon(pstar) == p)
    run.run("p_pstar_is_nu_identity", lambda: p @ pstar == scale(identity(r.spec, n), report.nu))
    run.run("dual_cs_eigenmatrix", lambda: eigenmatrix(dual_cs(psi)) == pstar)
    run.run("dual_sis_eigenmatrix", lambda: eigendata(dual_sis(phi)).p == pstar)


def verify_matrix(r: ExactMatrix) -> VerificationReport:
    """对矩阵运行全部适用的检查"""
    run = _Runner()
    if not run.run("invertible", lambda: is_invertible(r)):
        run.skip(["transpose_inverse_compatible", "solid"] + SOLID_CHECKS + SYMMETRIC_CHECKS, "not invertible")
        return run.report
    run.run("transpose_inverse_compatible", lambda: mat_inverse(transpose(r)) == transpose(mat_inverse(r)))

    if not is_solid(r):
        run.skip(["solid"] + SOLID_CHECKS + SYMMETRIC_CHECKS, "not solid")
        return run.report
    run.run("solid", lambda: True)

    try:
        symmetric = _solid_checks(run, r)
    except IdemsysError as e:
        run.run("solid_checks", lambda: (False, f"{e.error_code}: {e.message}"))
        return run.report
    if not symmetric:
        run.skip(SYMMETRIC_CHECKS, "not AO")
        return run.report

    try:
        _symmetric_checks(run, r)
    except IdemsysError as e:
        run.run("symmetric_checks", lambda: (False, f"{e.error_code}: {e.message}"))
    logger.debug(f"[Verify] {run.report.count(CheckStatus.PASS)} pass, "
                 f"{run.report.count(CheckStatus.FAIL)} fail, {run.report.count(CheckStatus.SKIPPED)} skipped")
    return run.report


def first_failure(report: VerificationReport) -> Optional[CheckResult]:
    return next((check for check in report.checks if check.status is CheckStatus.FAIL), None)

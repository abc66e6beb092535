# -*- coding: utf-8 -*-
"""
AON 矩阵、对称幂等系统、特征系统三者之间的双射与对偶

同构类用规范代表表示：对称幂等系统和特征系统的类都由其 AON 特征矩阵刻画，
所有类层面的映射都在代表上实现，相等性在特征矩阵层面比较。
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, List

from loguru import logger

from api.exceptions import InvariantViolationError, NotAONError, NotSymmetricError
from services.character_systems import (
    CharacterAlgebra,
    CharacterSystem,
    build_psi_p,
    character_system_invariants,
    eigenmatrix,
    first_axiom_violation,
    systems_isomorphic,
)
from services.exact_linalg import ExactMatrix, is_diagonal, mat_inverse, scale
from services.idempotent_systems import (
    IdempotentSystem,
    build_phi_r,
    dual_system,
    eigendata,
    isomorphism_witness,
    is_symmetric,
)
from services.solid_matrices import check_ao, is_normalized


class ObjectKind(str, Enum):
    """双射图中的三类对象"""
    AON = "AON"
    SIS = "SIS"
    CS = "CS"


@dataclass(frozen=True)
class CorrespondenceReport:
    """一次正向映射及其往返校验"""
    source_kind: ObjectKind
    target_kind: ObjectKind
    forward_image: Any
    roundtrip_equal: bool


# ==================== 双射 ====================

def psi_of_phi(phi: IdempotentSystem) -> CharacterSystem:
    """Ψ_Φ：结构常数取 Φ 的 p^h_{ij}，特征矩阵取 Φ 的第一特征矩阵

    Raises:
        NotSymmetricError: Φ 不对称
    """
    if not is_symmetric(phi):
        raise NotSymmetricError()
    report = eigendata(phi)
    alg = CharacterAlgebra(report.spec, report.pnum, report.k)
    violation = first_axiom_violation(alg)
    if violation is not None:
        raise InvariantViolationError(violation[0], violation[1])
    system = CharacterSystem(alg, report.p)
    failures = character_system_invariants(system)
    if failures:
        raise InvariantViolationError(failures[0], f"Ψ_Φ 不变量失败: {', '.join(failures)}")
    return system


def phi_of_psi(system: CharacterSystem) -> IdempotentSystem:
    """Φ_Ψ：在 e 基实现下 E_i = Δ_{i,i}，E*_i = P·Δ_{i,i}·P⁻¹"""
    return build_phi_r(eigenmatrix(system))


# ==================== 对偶 ====================

def _require_aon(p: ExactMatrix) -> None:
    if not is_normalized(p):
        raise NotAONError("矩阵不是 normalized solid")
    if check_ao(p) is None:
        raise NotAONError("矩阵不是 AO")


def dual_aon(p: ExactMatrix) -> ExactMatrix:
    """P* = ν·P⁻¹，ν⁻¹ 是 P⁻¹ 的 (0,0) 元

    Raises:
        NotAONError: P 不是 AON
    """
    _require_aon(p)
    p_inv = mat_inverse(p)
    result = scale(p_inv, p_inv[0, 0].inverse())
    if not is_normalized(result) or check_ao(result) is None:
        raise InvariantViolationError("dual_is_aon", f"P* = {result} 不是 AON")
    logger.debug(f"[Duality] {p} -> {result}")
    return result


def dual_sis(phi: IdempotentSystem) -> IdempotentSystem:
    """对称幂等系统的对偶 Φ*，并校验其特征矩阵等于 dual_aon(P)

    Raises:
        NotSymmetricError: Φ 不对称
    """
    if not is_symmetric(phi):
        raise NotSymmetricError()
    result = dual_system(phi)
    expected = dual_aon(eigendata(phi).p)
    actual = eigendata(result).p
    if actual != expected:
        raise InvariantViolationError("dual_sis_eigenmatrix", f"Φ* 的 P = {actual}，应为 {expected}")
    return result


def is_dual_pair(first: CharacterSystem, second: CharacterSystem) -> bool:
    """P·P' ∈ F·I"""
    if first.spec != second.spec or first.p.size != second.p.size:
        return False
    product = first.p @ second.p
    diagonal_values = product.diagonal_entries()
    return is_diagonal(product) and all(x == diagonal_values[0] for x in diagonal_values)


def dual_cs(system: CharacterSystem) -> CharacterSystem:
    """对偶特征系统：特征矩阵为 dual_aon(P)"""
    result = build_psi_p(dual_aon(eigenmatrix(system)))
    if not is_dual_pair(system, result):
        raise InvariantViolationError("dual_pair", "P·P* 不是 I 的倍数")
    return result


# ==================== 报告 ====================

def _from_aon(p: ExactMatrix) -> List[CorrespondenceReport]:
    phi = build_phi_r(p)
    psi = build_psi_p(p)
    return [
        CorrespondenceReport(ObjectKind.AON, ObjectKind.SIS, phi, eigendata(phi).p == p),
        CorrespondenceReport(ObjectKind.AON, ObjectKind.CS, psi, eigenmatrix(psi) == p),
    ]


def _from_sis(phi: IdempotentSystem) -> List[CorrespondenceReport]:
    if not is_symmetric(phi):
        raise NotSymmetricError()
    p = eigendata(phi).p
    psi = psi_of_phi(phi)
    return [
        CorrespondenceReport(ObjectKind.SIS, ObjectKind.AON, p,
                             isomorphism_witness(build_phi_r(p), phi) is not None),
        CorrespondenceReport(ObjectKind.SIS, ObjectKind.CS, psi,
                             eigendata(phi_of_psi(psi)).p == p),
    ]


def _from_cs(system: CharacterSystem) -> List[CorrespondenceReport]:
    p = eigenmatrix(system)
    phi = phi_of_psi(system)
    return [
        CorrespondenceReport(ObjectKind.CS, ObjectKind.AON, p,
                             systems_isomorphic(build_psi_p(p), system)),
        CorrespondenceReport(ObjectKind.CS, ObjectKind.SIS, phi,
                             eigenmatrix(psi_of_phi(phi)) == p),
    ]


def correspondence_report(kind: ObjectKind, obj: Any) -> List[CorrespondenceReport]:
    """从一类对象出发，映到另外两类并做往返校验"""
    handlers = {
        ObjectKind.AON: _from_aon,
        ObjectKind.SIS: _from_sis,
        ObjectKind.CS: _from_cs,
    }
    reports = handlers[ObjectKind(kind)](obj)
    for report in reports:
        logger.debug(f"[Correspondence] {report.source_kind.value} -> {report.target_kind.value}: "
                     f"roundtrip={report.roundtrip_equal}")
    return reports

# -*- coding: utf-8 -*-
"""
CLI 子命令的实现

每个 cmd_* 接收解析好的文档，返回可序列化的报告模型；
读写文件、选择输出格式和退出码由 main.py 负责。
"""

from __future__ import annotations

from typing import Optional

from loguru import logger

from api.exceptions import NotAONError
from api.schemas import (
    AlgebraDocument,
    AOModel,
    CensusModel,
    CharacterModel,
    ClassificationModel,
    EigendataModel,
    MatrixDocument,
    NormalizeModel,
    VerifyModel,
    WitnessModel,
)
from services.character_systems import bilinear_form, require_character_axioms, semisimple_decompose
from services.correspondences import dual_aon
from services.enumeration import enumerate_aon
from services.idempotent_systems import build_phi_r, eigendata
from services.solid_matrices import check_ao, classify, is_normalized, normalize, normalizing_witness
from services.verification import verify_matrix


def cmd_classify(document: MatrixDocument) -> ClassificationModel:
    """全部谓词：invertible / solid / normalized / AO（附见证）"""
    matrix = document.to_matrix()
    return ClassificationModel.from_report(matrix, classify(matrix))


def cmd_normalize(document: MatrixDocument) -> NormalizeModel:
    """规范代表 normalize(R) 及 (H, K)"""
    matrix = document.to_matrix()
    witness = normalizing_witness(matrix)
    return NormalizeModel(
        normalized=MatrixDocument.from_matrix(normalize(matrix)),
        witness=WitnessModel.from_witness(witness),
    )


def cmd_ao(document: MatrixDocument) -> AOModel:
    matrix = document.to_matrix()
    witness = check_ao(matrix)
    return AOModel(ao=witness is not None,
                   witness=WitnessModel.from_witness(witness) if witness else None)


def _require_aon(document: MatrixDocument):
    matrix = document.to_matrix()
    if not is_normalized(matrix):
        raise NotAONError("输入不是 normalized solid 矩阵")
    if check_ao(matrix) is None:
        raise NotAONError("输入不是 AO 矩阵")
    return matrix


def cmd_eigendata(document: MatrixDocument) -> EigendataModel:
    """Φ_P 的完整特征数据

    Raises:
        NotAONError: 输入不是 AON
    """
    matrix = _require_aon(document)
    return EigendataModel.from_report(eigendata(build_phi_r(matrix)))


def cmd_dual(document: MatrixDocument) -> MatrixDocument:
    """P* = ν·P⁻¹"""
    return MatrixDocument.from_matrix(dual_aon(_require_aon(document)))


def cmd_character(document: AlgebraDocument) -> CharacterModel:
    """特征代数的半单分解

    Raises:
        AxiomViolationError: 公理不成立（带首个失败公理名）
        NotSplitSemisimpleError: 在 F 上不可分裂半单
    """
    algebra = require_character_axioms(document.to_algebra())
    system = semisimple_decompose(algebra)
    table = bilinear_form(system)
    return CharacterModel.from_system(system, table.nu, table.gram_e, table.kstar)


def cmd_enumerate(d: int, p: int, budget: Optional[int] = None,
                  workers: Optional[int] = None) -> CensusModel:
    """F_p 上 AON_d 的穷举普查"""
    return CensusModel.from_census(enumerate_aon(d, p, budget=budget, max_workers=workers))


def cmd_verify(document: MatrixDocument) -> VerifyModel:
    """运行全部适用的恒等式检查"""
    report = verify_matrix(document.to_matrix())
    if not report.passed:
        logger.warning("[Verify] 存在失败的检查")
    return VerifyModel.from_report(report)

# -*- coding: utf-8 -*-
"""
文档与报告的数据模型 (Pydantic Schemas)

JSON 是唯一的机器契约：精确标量一律以字符串表示（"a/b"、"a" 或 F_p 的代表元），
域描述为 {"type": "rational"} 或 {"type": "prime", "p": 5}。
"""

from __future__ import annotations

from typing import List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError

from api.exceptions import ParseError, SizeMismatchError
from services.character_systems import CharacterAlgebra, CharacterSystem
from services.enumeration import Census
from services.exact_linalg import ExactMatrix, FieldScalar, FieldSpec
from services.idempotent_systems import EigendataReport
from services.solid_matrices import ClassificationReport, DiagonalWitness
from services.verification import VerificationReport


def _strings(values) -> List[str]:
    return [str(v) for v in values]


# ==================== 输入文档 ====================

class FieldDescriptor(BaseModel):
    """域描述"""
    type: Literal["rational", "prime"] = Field(..., description="rational 或 prime")
    p: Optional[int] = Field(None, description="素域模数（type=prime 时必填）")

    def to_spec(self) -> FieldSpec:
        if self.type == "rational":
            return FieldSpec.rational()
        if self.p is None:
            raise ParseError("prime 域缺少模数 p")
        return FieldSpec.prime(self.p)

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "FieldDescriptor":
        return cls(**spec.describe())


class MatrixDocument(BaseModel):
    """(d+1)×(d+1) 精确矩阵"""
    field: FieldDescriptor = Field(..., description="所在域")
    entries: List[List[str]] = Field(..., description="行优先的精确标量字符串")

    def to_matrix(self) -> ExactMatrix:
        spec = self.field.to_spec()
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise ParseError("entries 必须是非空方阵", {"rows": [len(row) for row in self.entries]})
        return ExactMatrix(spec, tuple(tuple(spec.parse(v) for v in row) for row in self.entries))

    @classmethod
    def from_matrix(cls, matrix: ExactMatrix) -> "MatrixDocument":
        return cls(field=FieldDescriptor.from_spec(matrix.spec), entries=matrix.to_strings())


class AlgebraDocument(BaseModel):
    """特征代数的结构常数，pnum[h][i][j] = p^h_{ij}"""
    field: FieldDescriptor = Field(..., description="所在域")
    d: int = Field(..., ge=0, description="直径")
    pnum: List[List[List[str]]] = Field(..., description="(d+1)³ 结构常数，下标顺序 [h][i][j]")

    def to_algebra(self) -> CharacterAlgebra:
        spec = self.field.to_spec()
        n = self.d + 1
        if len(self.pnum) != n or any(len(layer) != n or any(len(row) != n for row in layer)
                                      for layer in self.pnum):
            raise ParseError(f"pnum 必须是 {n}×{n}×{n}", {"d": self.d})
        try:
            return CharacterAlgebra.from_structure_constants(
                spec, [[[spec.parse(v) for v in row] for row in layer] for layer in self.pnum]
            )
        except SizeMismatchError as e:
            raise ParseError(e.message) from e

    @classmethod
    def from_algebra(cls, alg: CharacterAlgebra) -> "AlgebraDocument":
        return cls(
            field=FieldDescriptor.from_spec(alg.spec),
            d=alg.d,
            pnum=[[_strings(row) for row in layer] for layer in alg.pnum],
        )


def parse_document(model: type, text: str):
    """解析 JSON 文本为文档模型，校验失败统一转为 ParseError"""
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise ParseError(f"文档格式错误: {e.error_count()} 处", {"errors": e.errors(include_url=False)}) from e


# ==================== 输出报告 ====================

class WitnessModel(BaseModel):
    """对角见证 S = H·R·K"""
    h: List[str] = Field(..., description="H 的对角元")
    k: List[str] = Field(..., description="K 的对角元")

    @classmethod
    def from_witness(cls, witness: DiagonalWitness) -> "WitnessModel":
        return cls(h=_strings(witness.h), k=_strings(witness.k))


class ClassificationModel(BaseModel):
    """classify 输出"""
    field: FieldDescriptor
    d: int
    invertible: bool
    solid: bool
    normalized: bool
    ao: bool
    aon: bool
    ao_witness: Optional[WitnessModel] = Field(None, description="Rᵗ = H·R⁻¹·K 的见证")

    @classmethod
    def from_report(cls, matrix: ExactMatrix, report: ClassificationReport) -> "ClassificationModel":
        return cls(
            field=FieldDescriptor.from_spec(matrix.spec),
            d=matrix.d,
            invertible=report.invertible,
            solid=report.solid,
            normalized=report.normalized,
            ao=report.ao,
            aon=report.aon,
            ao_witness=WitnessModel.from_witness(report.ao_witness) if report.ao_witness else None,
        )


class NormalizeModel(BaseModel):
    """normalize 输出：规范代表与 (H, K)"""
    normalized: MatrixDocument
    witness: WitnessModel


class AOModel(BaseModel):
    """ao 输出"""
    ao: bool
    witness: Optional[WitnessModel] = None


class EigendataModel(BaseModel):
    """eigendata 输出"""
    field: FieldDescriptor
    d: int
    p: List[List[str]] = Field(..., description="第一特征矩阵")
    q: List[List[str]] = Field(..., description="第二特征矩阵")
    nu: str
    k: List[str]
    kstar: List[str]
    m: List[str]
    mstar: List[str]
    pnum: List[List[List[str]]] = Field(..., description="p^h_{ij}，下标顺序 [h][i][j]")

    @classmethod
    def from_report(cls, report: EigendataReport) -> "EigendataModel":
        return cls(
            field=FieldDescriptor.from_spec(report.spec),
            d=report.d,
            p=report.p.to_strings(),
            q=report.q.to_strings(),
            nu=str(report.nu),
            k=_strings(report.k),
            kstar=_strings(report.kstar),
            m=_strings(report.m),
            mstar=_strings(report.mstar),
            pnum=[[_strings(row) for row in layer] for layer in report.pnum],
        )


class CharacterModel(BaseModel):
    """character 输出"""
    field: FieldDescriptor
    d: int
    eigenmatrix: List[List[str]]
    idempotents: List[List[str]] = Field(..., description="e_i 在 x 基下的坐标，平凡幂等元在前")
    k: List[str]
    nu: str
    m: List[str]
    kstar: List[str]

    @classmethod
    def from_system(cls, system: CharacterSystem, nu: FieldScalar, m, kstar) -> "CharacterModel":
        return cls(
            field=FieldDescriptor.from_spec(system.spec),
            d=system.d,
            eigenmatrix=system.p.to_strings(),
            idempotents=[_strings(e) for e in system.idempotents()],
            k=_strings(system.algebra.k),
            nu=str(nu),
            m=_strings(m),
            kstar=_strings(kstar),
        )


class CensusEntryModel(BaseModel):
    entries: List[List[str]]
    ao: bool


class CensusModel(BaseModel):
    """enumerate 输出"""
    field: FieldDescriptor
    d: int
    candidates: int = Field(..., ge=0, description="候选总数 p^{(d+1)d}")
    normalized_count: int = Field(..., ge=0)
    aon_count: int = Field(..., ge=0)
    matrices: List[CensusEntryModel] = Field(..., description="normalized solid 矩阵（字典序），ao 标记 AON")

    @classmethod
    def from_census(cls, census: Census) -> "CensusModel":
        return cls(
            field=FieldDescriptor.from_spec(census.spec),
            d=census.d,
            candidates=census.candidates,
            normalized_count=census.normalized_count,
            aon_count=census.aon_count,
            matrices=[CensusEntryModel(entries=e.matrix.to_strings(), ao=e.ao) for e in census.entries],
        )


class CheckModel(BaseModel):
    name: str
    status: Literal["pass", "fail", "skipped"]
    reason: str = ""


class VerifyModel(BaseModel):
    """verify 输出"""
    passed: bool
    checks: List[CheckModel]

    @classmethod
    def from_report(cls, report: VerificationReport) -> "VerifyModel":
        return cls(
            passed=report.passed,
            checks=[CheckModel(name=c.name, status=c.status.value, reason=c.reason) for c in report.checks],
        )

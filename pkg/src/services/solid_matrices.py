# -*- coding: utf-8 -*-
"""
可逆矩阵的谓词与规范形

- solid: R 与 R⁻¹ 的第 0 行、第 0 列全部非零
- 对角等价: S = H·R·K（H、K 为可逆对角矩阵），给出可校验的见证
- normalized: 每个对角等价类中唯一的规范代表
- AO (almost orthogonal): Rᵗ 与 R⁻¹ 对角等价

另外提供 Kronecker 积与随机生成器，用于构造测试语料。
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Deque, List, Optional, Tuple

from loguru import logger

from api.exceptions import (
    FieldMismatchError,
    InvariantViolationError,
    NotSolidError,
    SingularMatrixError,
    SizeMismatchError,
)
from services.exact_linalg import (
    ExactMatrix,
    FieldScalar,
    FieldSpec,
    diagonal,
    is_invertible,
    mat_inverse,
    transpose,
)


@dataclass(frozen=True)
class DiagonalWitness:
    """对角等价见证：S = H·R·K 中 H、K 的对角元"""
    h: Tuple[FieldScalar, ...]
    k: Tuple[FieldScalar, ...]

    def __post_init__(self):
        if len(self.h) != len(self.k):
            raise SizeMismatchError(len(self.h), len(self.k))
        for entry in self.h + self.k:
            if entry.is_zero():
                raise InvariantViolationError("witness_nonzero", "对角见证含零元")

    @property
    def spec(self) -> FieldSpec:
        return self.h[0].spec

    def h_matrix(self) -> ExactMatrix:
        return diagonal(self.spec, self.h)

    def k_matrix(self) -> ExactMatrix:
        return diagonal(self.spec, self.k)


@dataclass(frozen=True)
class ClassificationReport:
    """谓词汇总"""
    invertible: bool
    solid: bool
    normalized: bool
    ao: bool
    ao_witness: Optional[DiagonalWitness] = None

    @property
    def aon(self) -> bool:
        return self.ao and self.normalized


def _check_compatible(r: ExactMatrix, s: ExactMatrix) -> None:
    if r.spec != s.spec:
        raise FieldMismatchError(str(r.spec), str(s.spec))
    if r.size != s.size:
        raise SizeMismatchError(r.size, s.size)


# ==================== 见证运算 ====================

def apply_witness(r: ExactMatrix, witness: DiagonalWitness) -> ExactMatrix:
    """H·R·K，按 (HRK)_{r,s} = R_{r,s}·H_{r,r}·K_{s,s} 逐元计算"""
    if len(witness.h) != r.size:
        raise SizeMismatchError(len(witness.h), r.size)
    return ExactMatrix(r.spec, tuple(
        tuple(r[i, j] * witness.h[i] * witness.k[j] for j in range(r.size))
        for i in range(r.size)
    ))


def compose_witness(first: DiagonalWitness, second: DiagonalWitness) -> DiagonalWitness:
    """若 S = H₁RK₁、T = H₂SK₂，则 T = (H₂H₁)·R·(K₁K₂)"""
    return DiagonalWitness(
        tuple(a * b for a, b in zip(second.h, first.h)),
        tuple(a * b for a, b in zip(first.k, second.k)),
    )


def invert_witness(witness: DiagonalWitness) -> DiagonalWitness:
    """S = HRK ⇒ R = H⁻¹·S·K⁻¹"""
    return DiagonalWitness(
        tuple(x.inverse() for x in witness.h),
        tuple(x.inverse() for x in witness.k),
    )


def unit_witness(spec: FieldSpec, n: int) -> DiagonalWitness:
    ones = tuple(spec.one() for _ in range(n))
    return DiagonalWitness(ones, ones)


# ==================== 对角等价 ====================

def diagonal_equivalence(r: ExactMatrix, s: ExactMatrix) -> Optional[DiagonalWitness]:
    """求 (H, K) 使 S = H·R·K，不存在时返回 None

    算法：
    1. r 与 s 的零模式必须一致；
    2. 行节点与列节点组成二部图，每个非零元是一条边；
    3. 每个连通分量固定编号最小的节点乘子为 1（列节点优先），沿生成树传播 h_i·k_j = s_ij / r_ij；
    4. 逐边校验，任何不一致返回 None。
    """
    _check_compatible(r, s)
    n = r.size
    for i in range(n):
        for j in range(n):
            if r[i, j].is_zero() != s[i, j].is_zero():
                return None

    one = r.spec.one()
    h: List[Optional[FieldScalar]] = [None] * n
    k: List[Optional[FieldScalar]] = [None] * n
    anchors = [("col", j) for j in range(n)] + [("row", i) for i in range(n)]
    for kind, index in anchors:
        multipliers = k if kind == "col" else h
        if multipliers[index] is not None:
            continue
        multipliers[index] = one
        queue: Deque[Tuple[str, int]] = deque([(kind, index)])
        while queue:
            node_kind, node = queue.popleft()
            if node_kind == "col":
                for i in range(n):
                    if h[i] is None and not r[i, node].is_zero():
                        h[i] = s[i, node] / r[i, node] / k[node]
                        queue.append(("row", i))
            else:
                for j in range(n):
                    if k[j] is None and not r[node, j].is_zero():
                        k[j] = s[node, j] / r[node, j] / h[node]
                        queue.append(("col", j))

    for i in range(n):
        for j in range(n):
            if not r[i, j].is_zero() and h[i] * k[j] != s[i, j] / r[i, j]:
                return None

    witness = DiagonalWitness(tuple(h), tuple(k))
    if apply_witness(r, witness) != s:
        raise InvariantViolationError("S = H·R·K")
    return witness


# ==================== solid / normalized ====================

def _border_nonzero(m: ExactMatrix) -> bool:
    return all(not x.is_zero() for x in m.row(0) + m.column(0))


def is_solid(r: ExactMatrix) -> bool:
    """R 可逆，且 R 与 R⁻¹ 的第 0 行、第 0 列全部非零

    不可逆时返回 False（solid 以可逆为前提）。
    """
    try:
        r_inv = mat_inverse(r)
    except SingularMatrixError:
        return False
    return _border_nonzero(r) and _border_nonzero(r_inv)


def is_normalized(r: ExactMatrix) -> bool:
    """solid，且 R 的第 0 列全为 1、R⁻¹ 的第 0 列为常数"""
    if not is_solid(r):
        return False
    if not all(x.is_one() for x in r.column(0)):
        return False
    inverse_column = mat_inverse(r).column(0)
    return all(x == inverse_column[0] for x in inverse_column)


def normalizing_witness(r: ExactMatrix) -> DiagonalWitness:
    """取 K_{0,0} = 1 时使 H·R·K 规范化的 (H, K)

    H_{r,r} = 1 / R_{r,0}，K_{r,r} = (R⁻¹)_{r,0} / (R⁻¹)_{0,0}
    """
    if not is_solid(r):
        raise NotSolidError()
    r_inv = mat_inverse(r)
    pivot = r_inv[0, 0]
    return DiagonalWitness(
        tuple(x.inverse() for x in r.column(0)),
        tuple(x / pivot for x in r_inv.column(0)),
    )


def normalize(r: ExactMatrix) -> ExactMatrix:
    """与 r 对角等价的唯一 normalized 矩阵"""
    result = apply_witness(r, normalizing_witness(r))
    logger.debug(f"[Normalize] {r} -> {result}")
    return result


# ==================== AO ====================

def check_ao(r: ExactMatrix) -> Optional[DiagonalWitness]:
    """若 Rᵗ = H·R⁻¹·K 返回见证，否则返回 None

    Raises:
        SingularMatrixError: r 不可逆
    """
    return diagonal_equivalence(mat_inverse(r), transpose(r))


def classify(r: ExactMatrix) -> ClassificationReport:
    """汇总全部谓词"""
    invertible = is_invertible(r)
    witness = check_ao(r) if invertible else None
    return ClassificationReport(
        invertible=invertible,
        solid=is_solid(r),
        normalized=is_normalized(r),
        ao=witness is not None,
        ao_witness=witness,
    )


def is_aon(r: ExactMatrix) -> bool:
    return is_normalized(r) and check_ao(r) is not None


# ==================== 语料生成 ====================

def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker 积，块按行优先排列"""
    if a.spec != b.spec:
        raise FieldMismatchError(str(a.spec), str(b.spec))
    m = b.size
    return ExactMatrix(a.spec, tuple(
        tuple(a[r // m, s // m] * b[r % m, s % m] for s in range(a.size * m))
        for r in range(a.size * m)
    ))


def _random_entry(spec: FieldSpec, rng: random.Random, bound: int) -> FieldScalar:
    if spec.is_rational:
        return spec.scalar(rng.randint(-bound, bound))
    return spec.scalar(rng.randrange(spec.modulus))


def random_diagonal(spec: FieldSpec, n: int, rng: random.Random, bound: int = 5) -> DiagonalWitness:
    """随机可逆对角见证 (H, K)"""
    def nonzero() -> FieldScalar:
        while True:
            value = _random_entry(spec, rng, bound)
            if not value.is_zero():
                return value
    return DiagonalWitness(
        tuple(nonzero() for _ in range(n)),
        tuple(nonzero() for _ in range(n)),
    )


def random_solid(spec: FieldSpec, n: int, rng: random.Random, bound: int = 3,
                 max_attempts: int = 10_000) -> ExactMatrix:
    """反复抽样直到得到 solid 矩阵"""
    for _ in range(max_attempts):
        candidate = ExactMatrix(spec, tuple(
            tuple(_random_entry(spec, rng, bound) for _ in range(n)) for _ in range(n)
        ))
        if is_solid(candidate):
            return candidate
    raise NotSolidError(f"{max_attempts} 次抽样未得到 {n}×{n} solid 矩阵")

# -*- coding: utf-8 -*-
"""
有限域上 AON 矩阵的穷举普查

候选为 Mat_{d+1}(F_p) 中第 0 列全为 1 的矩阵，共 p^{(d+1)·d} 个，按字典序编号：
自由元按行优先排列，编号的 p 进制展开（高位在前）就是自由元的代表元序列。
保留 normalized solid 的候选，并标出其中的 AO 子集 AON_d(F_p)。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from loguru import logger

from api.exceptions import BudgetExceededError, FieldError
from services.exact_linalg import ExactMatrix, FieldSpec
from services.solid_matrices import check_ao, is_normalized
from services.unified_config import get_config
from utils.concurrency import ordered_parallel_map, partition


@dataclass(frozen=True)
class CensusEntry:
    """一个 normalized solid 候选"""
    matrix: ExactMatrix
    ao: bool


@dataclass(frozen=True)
class Census:
    """普查结果（entries 按字典序）"""
    spec: FieldSpec
    d: int
    candidates: int
    entries: Tuple[CensusEntry, ...]

    @property
    def normalized_count(self) -> int:
        return len(self.entries)

    @property
    def aon(self) -> List[ExactMatrix]:
        return [entry.matrix for entry in self.entries if entry.ao]

    @property
    def aon_count(self) -> int:
        return sum(1 for entry in self.entries if entry.ao)


def candidate_count(d: int, p: int) -> int:
    return p ** ((d + 1) * d)


def candidate_at(spec: FieldSpec, d: int, index: int) -> ExactMatrix:
    """第 index 个候选（字典序）"""
    p = spec.modulus
    free = (d + 1) * d
    digits = [0] * free
    for position in range(free - 1, -1, -1):
        index, digits[position] = divmod(index, p)
    one = spec.one()
    rows = []
    for r in range(d + 1):
        rows.append((one,) + tuple(spec.scalar(v) for v in digits[r * d:(r + 1) * d]))
    return ExactMatrix(spec, tuple(rows))


def _scan(spec: FieldSpec, d: int, indices: range) -> List[CensusEntry]:
    found = []
    for index in indices:
        candidate = candidate_at(spec, d, index)
        if is_normalized(candidate):
            found.append(CensusEntry(candidate, check_ao(candidate) is not None))
    return found


def enumerate_aon(d: int, p: int, budget: Optional[int] = None,
                  max_workers: Optional[int] = None) -> Census:
    """穷举 d、p 下的 normalized solid 矩阵并标出 AO 子集

    Args:
        d: 直径
        p: 素数模数
        budget: 候选数上限，缺省取配置 enumerate_budget
        max_workers: 线程数，缺省取配置 max_workers

    Raises:
        FieldError: p 不是素数
        BudgetExceededError: 候选数超出预算
    """
    if d < 0:
        raise FieldError(f"直径必须非负: d = {d}", {"d": d})
    spec = FieldSpec.prime(p)
    config = get_config()
    budget = config.enumerate_budget if budget is None else budget
    max_workers = config.max_workers if max_workers is None else max_workers

    total = candidate_count(d, p)
    if total > budget:
        raise BudgetExceededError(total, budget)

    chunks = partition(total, max(1, max_workers) * 4)
    logger.info(f"[Enumerate] d={d} p={p}: {total} 个候选，{len(chunks)} 个分片，{max_workers} 个线程")
    parts = ordered_parallel_map(lambda chunk: _scan(spec, d, chunk), chunks, max_workers)
    entries = tuple(entry for part in parts for entry in part)
    census = Census(spec, d, total, entries)
    logger.info(f"[Enumerate] normalized {census.normalized_count} 个，AON {census.aon_count} 个")
    return census


def d1_family_count(p: int) -> int:
    """#{k ∈ F_p : k ≠ 0, k ≠ -1}，即 d = 1 的特征代数中在 F_p 上半单的个数"""
    spec = FieldSpec.prime(p)
    minus_one = -spec.one()
    return sum(1 for k in spec.elements() if not k.is_zero() and k != minus_one)

# -*- coding: utf-8 -*-
"""
精确域上的特征代数与特征系统

代数只用结构常数表示：元素是 x 基下的坐标向量，乘法由 p^h_{ij} 给出。

- CharacterAlgebra / verify_character_axioms: 结构常数与公理
- semisimple_decompose: 求本原幂等元，平凡幂等元排第一，得到特征矩阵 P
- build_psi_p: 由 AON 矩阵反向构造特征系统
- bilinear_form: ⟨x_i, x_j⟩ = δ_{ij}·k_i 及相关恒等式
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from api.exceptions import (
    AxiomViolationError,
    DegenerateFormError,
    InvariantViolationError,
    NotAONError,
    NotSplitSemisimpleError,
    SizeMismatchError,
    ZeroKError,
)
from services.exact_linalg import (
    ExactMatrix,
    FieldScalar,
    FieldSpec,
    eigenvalues_in_field,
    identity,
    mat_inverse,
    rank,
    scale,
    zeros,
)
from services.idempotent_systems import intersection_numbers
from services.solid_matrices import check_ao, is_normalized
from services.unified_config import get_config

Vector = Tuple[FieldScalar, ...]
Tensor = Tuple[Tuple[Tuple[FieldScalar, ...], ...], ...]

AXIOM_ORDER = (
    "identity",
    "commutativity",
    "associativity",
    "p0ij",
    "k0",
    "k_nonzero",
    "homomorphism",
)


@dataclass(frozen=True)
class CharacterAlgebra:
    """特征代数：pnum[h][i][j] = p^h_{ij}，k[i] = k_i

    构造时只检查形状，公理由 verify_character_axioms 判定。
    """
    spec: FieldSpec
    pnum: Tensor
    k: Vector

    def __post_init__(self):
        n = len(self.k)
        if n == 0 or len(self.pnum) != n:
            raise SizeMismatchError(len(self.pnum), n)
        for layer in self.pnum:
            if len(layer) != n or any(len(row) != n for row in layer):
                raise SizeMismatchError("pnum", f"{n}×{n}×{n}")

    @classmethod
    def from_structure_constants(cls, spec: FieldSpec, pnum: Sequence[Sequence[Sequence[object]]]) -> "CharacterAlgebra":
        """由结构常数构造，k_i 取 p^0_{ii}"""
        table = tuple(tuple(tuple(spec.scalar(v) for v in row) for row in layer) for layer in pnum)
        n = len(table)
        if n == 0:
            raise SizeMismatchError(0, "d+1 ≥ 1")
        if any(len(layer) != n or any(len(row) != n for row in layer) for layer in table):
            raise SizeMismatchError("pnum", f"{n}×{n}×{n}")
        return cls(spec, table, tuple(table[0][i][i] for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.k)

    @property
    def d(self) -> int:
        return len(self.k) - 1

    def basis_vector(self, i: int) -> Vector:
        """x_i 的坐标"""
        one, zero = self.spec.one(), self.spec.zero()
        return tuple(one if r == i else zero for r in range(self.size))


@dataclass(frozen=True)
class CharacterSystem:
    """特征系统：代数加特征矩阵 P（x_j = Σ_i P_{i,j}·e_i）"""
    algebra: CharacterAlgebra
    p: ExactMatrix

    @property
    def spec(self) -> FieldSpec:
        return self.algebra.spec

    @property
    def d(self) -> int:
        return self.algebra.d

    def idempotents(self) -> Tuple[Vector, ...]:
        """e_i 在 x 基下的坐标，即 P⁻¹ 的第 i 列"""
        p_inv = mat_inverse(self.p)
        return tuple(p_inv.column(i) for i in range(self.p.size))


@dataclass(frozen=True)
class BilinearFormTable:
    """⟨·,·⟩ 的对角数据"""
    gram_x: Vector      # ⟨x_i, x_i⟩ = k_i
    gram_e: Vector      # ⟨e_i, e_i⟩ = m_i
    nu: FieldScalar
    kstar: Vector


# ==================== 代数运算 ====================

def multiply(alg: CharacterAlgebra, u: Sequence[FieldScalar], v: Sequence[FieldScalar]) -> Vector:
    """(uv)_h = Σ_{i,j} u_i·v_j·p^h_{ij}"""
    n = alg.size
    result = []
    for h in range(n):
        total = alg.spec.zero()
        layer = alg.pnum[h]
        for i in range(n):
            if u[i].is_zero():
                continue
            for j in range(n):
                if not v[j].is_zero():
                    total = total + u[i] * v[j] * layer[i][j]
        result.append(total)
    return tuple(result)


def phi_hom(alg: CharacterAlgebra, u: Sequence[FieldScalar]) -> FieldScalar:
    """φ(u) = Σ u_i·k_i"""
    total = alg.spec.zero()
    for coefficient, k_i in zip(u, alg.k):
        total = total + coefficient * k_i
    return total


def regular_representation(alg: CharacterAlgebra, i: int) -> ExactMatrix:
    """左正则表示 L_i：(L_i)_{h,j} = p^h_{ij}"""
    n = alg.size
    return ExactMatrix(alg.spec, tuple(
        tuple(alg.pnum[h][i][j] for j in range(n)) for h in range(n)
    ))


def first_axiom_violation(alg: CharacterAlgebra) -> Optional[Tuple[str, str]]:
    """按 AXIOM_ORDER 顺序返回第一个不成立的公理 (名称, 说明)，全部成立时返回 None"""
    n, pnum, k = alg.size, alg.pnum, alg.k
    one, zero = alg.spec.one(), alg.spec.zero()

    for h in range(n):
        for i in range(n):
            expected = one if h == i else zero
            if pnum[h][i][0] != expected or pnum[h][0][i] != expected:
                return "identity", f"x_0 不是单位元（h={h}, i={i}）"

    for h in range(n):
        for i in range(n):
            for j in range(i + 1, n):
                if pnum[h][i][j] != pnum[h][j][i]:
                    return "commutativity", f"p^{h}_{{{i}{j}}} ≠ p^{h}_{{{j}{i}}}"

    for h in range(n):
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    left = zero
                    right = zero
                    for r in range(n):
                        left = left + pnum[r][i][j] * pnum[h][r][l]
                        right = right + pnum[r][j][l] * pnum[h][i][r]
                    if left != right:
                        return "associativity", f"(x_{i}x_{j})x_{l} ≠ x_{i}(x_{j}x_{l}) 在 x_{h} 分量"

    for i in range(n):
        for j in range(n):
            expected = k[i] if i == j else zero
            if pnum[0][i][j] != expected:
                return "p0ij", f"p^0_{{{i}{j}}} = {pnum[0][i][j]}，应为 {expected}"

    if k[0] != one:
        return "k0", f"k_0 = {k[0]}"

    for i, value in enumerate(k):
        if value.is_zero():
            return "k_nonzero", f"k_{i} = 0"

    for i in range(n):
        for j in range(n):
            total = zero
            for h in range(n):
                total = total + pnum[h][i][j] * k[h]
            if total != k[i] * k[j]:
                return "homomorphism", f"Σ_h p^h_{{{i}{j}}} k_h = {total} ≠ k_{i}k_{j} = {k[i] * k[j]}"
    return None


def verify_character_axioms(alg: CharacterAlgebra) -> bool:
    return first_axiom_violation(alg) is None


def require_character_axioms(alg: CharacterAlgebra) -> CharacterAlgebra:
    """公理不成立时抛出 AxiomViolationError"""
    violation = first_axiom_violation(alg)
    if violation is not None:
        axiom, message = violation
        raise AxiomViolationError(axiom, message)
    return alg


def algebra_isomorphic(a: CharacterAlgebra, b: CharacterAlgebra) -> bool:
    """x 基下结构常数相同即同构"""
    return a.spec == b.spec and a.pnum == b.pnum


def systems_isomorphic(a: CharacterSystem, b: CharacterSystem) -> bool:
    """特征矩阵相同即同构"""
    return a.spec == b.spec and a.p == b.p


def build_d1_algebra(kparam: FieldScalar) -> CharacterAlgebra:
    """d = 1 的特征代数 F[x]/((x+1)(x-k))：x_1² = k·x_0 + (k-1)·x_1

    Raises:
        ZeroKError: k = 0
    """
    if kparam.is_zero():
        raise ZeroKError()
    spec = kparam.spec
    one, zero = spec.one(), spec.zero()
    pnum = (
        ((one, zero), (zero, kparam)),
        ((zero, one), (one, kparam - one)),
    )
    return require_character_axioms(CharacterAlgebra(spec, pnum, (one, kparam)))


# ==================== 半单分解 ====================

def _combination(alg: CharacterAlgebra, coefficients: Sequence[FieldScalar]) -> ExactMatrix:
    result = zeros(alg.spec, alg.size)
    for i, c in enumerate(coefficients):
        if not c.is_zero():
            result = result + scale(regular_representation(alg, i), c)
    return result


def _separator_candidates(alg: CharacterAlgebra, attempts: int, seed: int,
                          bound: int) -> Iterator[Vector]:
    """x_1, x_1+x_2, ..., 之后是小系数的伪随机组合，总数不超过 attempts"""
    spec, n = alg.spec, alg.size
    one, zero = spec.one(), spec.zero()
    produced = 0
    for t in range(1, n):
        if produced >= attempts:
            return
        yield tuple(one if 1 <= i <= t else zero for i in range(n))
        produced += 1
    rng = random.Random(seed)
    while produced < attempts:
        yield tuple(spec.scalar(rng.randint(-bound, bound)) for _ in range(n))
        produced += 1


def _spectral_projections(a: ExactMatrix, eigenvalues: Sequence[FieldScalar]) -> List[ExactMatrix]:
    """可对角化矩阵的谱投影：E_λ = Π_{μ≠λ} (A - μI)/(λ - μ)"""
    n = a.size
    unit = identity(a.spec, n)
    projections = []
    for lam in eigenvalues:
        projection = unit
        for mu in eigenvalues:
            if mu != lam:
                projection = projection @ scale(a - scale(unit, mu), (lam - mu).inverse())
        projections.append(projection)
    return projections


def _is_diagonalizable(a: ExactMatrix, eigenvalues: Sequence[FieldScalar]) -> bool:
    n = a.size
    unit = identity(a.spec, n)
    geometric = sum(n - rank(a - scale(unit, lam)) for lam in eigenvalues)
    return geometric == n


def _idempotents_by_separator(alg: CharacterAlgebra, attempts: int, seed: int,
                              bound: int) -> Optional[List[Vector]]:
    n = alg.size
    for tries, coefficients in enumerate(_separator_candidates(alg, attempts, seed, bound), start=1):
        element = _combination(alg, coefficients)
        eigenvalues = eigenvalues_in_field(element)
        if len(eigenvalues) != n:
            continue
        logger.debug(f"[Semisimple] 第 {tries} 次尝试找到分离元 {[str(c) for c in coefficients]}")
        return [projection.column(0) for projection in _spectral_projections(element, eigenvalues)]
    return None


def _idempotents_by_refinement(alg: CharacterAlgebra) -> List[Vector]:
    """用每个 L_i 的谱投影逐步细分，适用于 |F| < d+1 等没有分离元的情况"""
    n = alg.size
    blocks = [identity(alg.spec, n)]
    for i in range(1, n):
        l_i = regular_representation(alg, i)
        eigenvalues = eigenvalues_in_field(l_i)
        if not _is_diagonalizable(l_i, eigenvalues):
            raise NotSplitSemisimpleError(f"L_{i} 在 {alg.spec} 上不可对角化", {"index": i})
        projections = _spectral_projections(l_i, eigenvalues)
        blocks = [block @ projection for block in blocks for projection in projections
                  if not (block @ projection).is_zero()]
        if len(blocks) == n:
            break
    if len(blocks) != n or any(rank(block) != 1 for block in blocks):
        raise NotSplitSemisimpleError(f"只分解出 {len(blocks)} 个幂等元，需要 {n} 个")
    logger.debug(f"[Semisimple] 联合谱分解得到 {n} 个幂等元")
    return [block.column(0) for block in blocks]


def _order_idempotents(alg: CharacterAlgebra, idempotents: List[Vector]) -> List[Vector]:
    """平凡幂等元（φ(e) = 1）排第一，其余按坐标字典序"""
    one = alg.spec.one()
    trivial = [index for index, e in enumerate(idempotents) if phi_hom(alg, e) == one]
    if len(trivial) != 1:
        raise InvariantViolationError("unique_trivial_idempotent", f"φ(e) = 1 的幂等元有 {len(trivial)} 个")
    rest = sorted((e for index, e in enumerate(idempotents) if index != trivial[0]),
                  key=lambda e: tuple(c.sort_key() for c in e))
    return [idempotents[trivial[0]]] + rest


def semisimple_decompose(
    alg: CharacterAlgebra,
    attempts: Optional[int] = None,
    seed: Optional[int] = None,
    bound: Optional[int] = None,
) -> CharacterSystem:
    """求本原幂等元并组装特征矩阵

    先按确定性序列寻找分离元（d+1 个 F 中互异特征值），其谱投影的第 0 列即幂等元坐标；
    尝试次数用尽后退回到各 L_i 谱投影的联合细分。

    Args:
        alg: 特征代数
        attempts / seed / bound: 分离元搜索参数，缺省取配置

    Raises:
        AxiomViolationError: 公理不成立
        NotSplitSemisimpleError: 在 F 上不可分裂半单
    """
    require_character_axioms(alg)
    config = get_config()
    attempts = config.separator_attempts if attempts is None else attempts
    seed = config.separator_seed if seed is None else seed
    bound = config.separator_coefficient_bound if bound is None else bound

    n = alg.size
    if n == 1:
        idempotents = [alg.basis_vector(0)]
    else:
        idempotents = _idempotents_by_separator(alg, attempts, seed, bound)
        if idempotents is None:
            idempotents = _idempotents_by_refinement(alg)

    ordered = _order_idempotents(alg, idempotents)
    p_inv = ExactMatrix(alg.spec, tuple(tuple(ordered[i][h] for i in range(n)) for h in range(n)))
    system = CharacterSystem(alg, mat_inverse(p_inv))
    failures = character_system_invariants(system)
    if failures:
        raise InvariantViolationError(failures[0], f"特征系统不变量失败: {', '.join(failures)}")
    logger.debug(f"[Semisimple] d={alg.d} P={system.p}")
    return system


def character_system_invariants(system: CharacterSystem) -> List[str]:
    """检查特征系统不变量，返回失败项名称列表"""
    alg, p = system.algebra, system.p
    n = alg.size
    one, zero = alg.spec.one(), alg.spec.zero()
    failures: List[str] = []
    if not all(p[i, 0] == one for i in range(n)):
        failures.append("p_column0_ones")
    if not all(p[0, j] == alg.k[j] for j in range(n)):
        failures.append("p_row0_is_k")
    idempotents = system.idempotents()
    null = tuple(zero for _ in range(n))
    if any(multiply(alg, idempotents[i], idempotents[j]) != (idempotents[i] if i == j else null)
           for i in range(n) for j in range(n)):
        failures.append("idempotents_orthogonal")
    values = [phi_hom(alg, e) for e in idempotents]
    if values[0] != one or any(v != zero for v in values[1:]):
        failures.append("trivial_idempotent_first")
    return failures


# ==================== 由 AON 矩阵构造 ====================

def build_psi_p(p: ExactMatrix) -> CharacterSystem:
    """把 AON 矩阵 P 看作 {e_i} 到 {x_i} 的过渡矩阵，得到特征矩阵恰为 P 的特征系统

    Raises:
        NotAONError: P 不是 AON
    """
    if not is_normalized(p):
        raise NotAONError("矩阵不是 normalized solid")
    if check_ao(p) is None:
        raise NotAONError("矩阵不是 AO")
    pnum = intersection_numbers(p)
    alg = CharacterAlgebra(p.spec, pnum, tuple(p[0, j] for j in range(p.size)))
    violation = first_axiom_violation(alg)
    if violation is not None:
        raise InvariantViolationError(violation[0], violation[1])
    system = CharacterSystem(alg, p)
    failures = character_system_invariants(system)
    if failures:
        raise InvariantViolationError(failures[0], f"特征系统不变量失败: {', '.join(failures)}")
    return system


def eigenmatrix(system: CharacterSystem) -> ExactMatrix:
    """特征矩阵 P（必为 AON）"""
    if not is_normalized(system.p) or check_ao(system.p) is None:
        raise InvariantViolationError("eigenmatrix_is_aon", f"特征矩阵 {system.p} 不是 AON")
    return system.p


# ==================== 双线性形式 ====================

def form(alg: CharacterAlgebra, u: Sequence[FieldScalar], v: Sequence[FieldScalar]) -> FieldScalar:
    """⟨u, v⟩ = Σ u_i·v_i·k_i"""
    total = alg.spec.zero()
    for a, b, k_i in zip(u, v, alg.k):
        total = total + a * b * k_i
    return total


def form_table(system: CharacterSystem) -> BilinearFormTable:
    alg = system.algebra
    m = []
    for i, e_i in enumerate(system.idempotents()):
        value = form(alg, e_i, e_i)
        if value.is_zero():
            raise DegenerateFormError(i)
        m.append(value)
    nu = m[0].inverse()
    return BilinearFormTable(
        gram_x=tuple(alg.k),
        gram_e=tuple(m),
        nu=nu,
        kstar=tuple(nu * x for x in m),
    )


def bilinear_form_identities(system: CharacterSystem, table: BilinearFormTable) -> List[str]:
    """⟨·,·⟩ 相关恒等式，返回失败项名称列表"""
    alg, p = system.algebra, system.p
    n = alg.size
    one, zero = alg.spec.one(), alg.spec.zero()
    nu, nu_inv = table.nu, table.nu.inverse()
    p_inv = mat_inverse(p)
    x = [alg.basis_vector(i) for i in range(n)]
    e = system.idempotents()
    failures: List[str] = []

    if any(value.is_zero() for value in table.gram_x):
        failures.append("form_nondegenerate")
    if not all(form(alg, x[i], x[j]) == form(alg, multiply(alg, x[i], x[j]), x[0])
               for i in range(n) for j in range(n)):
        failures.append("form_uv_is_uv_x0")
    if not all(form(alg, e[i], e[j]).is_zero() for i in range(n) for j in range(n) if i != j):
        failures.append("idempotents_orthogonal_under_form")
    if not all(form(alg, x[i], e[j]) == nu_inv * p[j, i] * table.kstar[j] == alg.k[i] * p_inv[i, j]
               for i in range(n) for j in range(n)):
        failures.append("form_xi_ej")
    if not all(phi_hom(alg, x[i]) == nu * form(alg, x[i], e[0]) for i in range(n)):
        failures.append("phi_is_nu_form_e0")
    if tuple(one for _ in range(n)) != tuple(nu * c for c in e[0]):
        failures.append("sum_x_is_nu_e0")
    if table.kstar[0] != one:
        failures.append("kstar0_is_one")
    if not all(p_inv[i, 0] == nu_inv for i in range(n)) or \
            not all(p_inv[0, j] == nu_inv * table.kstar[j] for j in range(n)):
        failures.append("pinv_border")
    if zero in table.gram_e:
        failures.append("m_nonzero")
    return failures


def bilinear_form(system: CharacterSystem) -> BilinearFormTable:
    """计算 m_i = ⟨e_i, e_i⟩、ν = m_0⁻¹、k*_i = ν·m_i 并校验全部恒等式

    Raises:
        DegenerateFormError: 某个 m_i = 0
        InvariantViolationError: 恒等式不成立
    """
    table = form_table(system)
    failures = bilinear_form_identities(system, table)
    if failures:
        raise InvariantViolationError(failures[0], f"双线性形式恒等式失败: {', '.join(failures)}")
    return table

# -*- coding: utf-8 -*-
"""
Mat_{d+1}(F) 中的具体幂等系统

- IdempotentSystem: 两个秩 1 正交幂等元族 ({E_i}, {E*_i})
- build_phi_r: 由 solid 矩阵 R 构造 Φ_R
- canonicalize: 共轭到 E_i = Δ_{i,i} 的规范形
- symmetry_witness: 对称性判定与反自同构 A ↦ K·Aᵗ·K⁻¹
- eigendata: m_i、ν、A_i、k_i、P、Q、p^h_{ij} 全套数据及恒等式校验
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from api.exceptions import (
    DegenerateSystemError,
    InvalidSystemError,
    InvariantViolationError,
    NotAnIdempotentFamilyError,
    NotSolidError,
    NotSymmetricError,
    SingularMatrixError,
    SizeMismatchError,
)
from services.exact_linalg import (
    ExactMatrix,
    FieldScalar,
    FieldSpec,
    delta,
    diagonal,
    identity,
    mat_inverse,
    recover_diagonalizer,
    scale,
    solve_linear_system,
    trace,
    transpose,
    verify_idempotent_family,
    zeros,
)
from services.solid_matrices import check_ao, diagonal_equivalence, is_solid, normalize


@dataclass(frozen=True)
class IdempotentSystem:
    """幂等系统 Φ = ({E_i}; {E*_i})

    构造时只检查形状，公理由 verify_axioms 判定。
    """
    e: Tuple[ExactMatrix, ...]
    estar: Tuple[ExactMatrix, ...]

    def __post_init__(self):
        if not self.e or len(self.e) != len(self.estar):
            raise SizeMismatchError(len(self.e), len(self.estar))
        n = self.e[0].size
        if len(self.e) != n:
            raise SizeMismatchError(len(self.e), n)
        for member in self.e + self.estar:
            if member.size != n or member.spec != self.e[0].spec:
                raise SizeMismatchError(member.size, n)

    @property
    def spec(self) -> FieldSpec:
        return self.e[0].spec

    @property
    def size(self) -> int:
        return len(self.e)

    @property
    def d(self) -> int:
        return len(self.e) - 1

    def matrices(self) -> Tuple[ExactMatrix, ...]:
        """全部 2(d+1) 个幂等元"""
        return self.e + self.estar


@dataclass(frozen=True)
class EigendataReport:
    """对称幂等系统的特征数据"""
    p: ExactMatrix
    q: ExactMatrix
    nu: FieldScalar
    k: Tuple[FieldScalar, ...]
    kstar: Tuple[FieldScalar, ...]
    m: Tuple[FieldScalar, ...]
    mstar: Tuple[FieldScalar, ...]
    pnum: Tuple[Tuple[Tuple[FieldScalar, ...], ...], ...]   # pnum[h][i][j] = p^h_{ij}

    @property
    def d(self) -> int:
        return self.p.d

    @property
    def spec(self) -> FieldSpec:
        return self.p.spec


# ==================== 构造与公理 ====================

def build_phi_r(r: ExactMatrix) -> IdempotentSystem:
    """Φ_R = ({Δ_{i,i}}; {R·Δ_{i,i}·R⁻¹})

    Raises:
        NotSolidError: R 不是 solid，公理 (iii)(iv) 必然失败
    """
    if not is_solid(r):
        raise NotSolidError()
    spec, n = r.spec, r.size
    r_inv = mat_inverse(r)
    e = tuple(delta(spec, n, i, i) for i in range(n))
    estar = tuple(r @ e_i @ r_inv for e_i in e)
    return IdempotentSystem(e, estar)


def _is_canonical(phi: IdempotentSystem) -> bool:
    return all(e_i == delta(phi.spec, phi.size, i, i) for i, e_i in enumerate(phi.e))


def _border_criteria(r: ExactMatrix) -> Tuple[bool, bool]:
    """Φ_R 的公理 (iii)(iv) 的矩阵元判据

    (iii) ⇔ R_{0,i} ≠ 0 且 (R⁻¹)_{i,0} ≠ 0
    (iv)  ⇔ R_{i,0} ≠ 0 且 (R⁻¹)_{0,i} ≠ 0
    """
    r_inv = mat_inverse(r)
    n = r.size
    third = all(not r[0, i].is_zero() and not r_inv[i, 0].is_zero() for i in range(n))
    fourth = all(not r[i, 0].is_zero() and not r_inv[0, i].is_zero() for i in range(n))
    return third, fourth


def verify_axioms(phi: IdempotentSystem) -> bool:
    """幂等系统公理 (i)–(iv)

    (i)(ii): 两族都是和为 I 的正交秩 1 幂等元
    (iii):   E_0·E*_i·E_0 ≠ 0
    (iv):    E*_0·E_i·E*_0 ≠ 0

    规范形系统另按 R 的矩阵元判据复核 (iii)(iv)，两者不一致说明内核有缺陷。
    """
    if verify_idempotent_family(phi.e) is not None:
        return False
    if verify_idempotent_family(phi.estar) is not None:
        return False
    e0, es0 = phi.e[0], phi.estar[0]
    third = all(not (e0 @ es_i @ e0).is_zero() for es_i in phi.estar)
    fourth = all(not (es0 @ e_i @ es0).is_zero() for e_i in phi.e)

    if _is_canonical(phi):
        expected = _border_criteria(recover_diagonalizer(phi.estar))
        if expected != (third, fourth):
            raise InvariantViolationError(
                "border_criteria",
                f"公理 (iii)(iv) = {(third, fourth)}，矩阵元判据 = {expected}",
            )
    return third and fourth


def _require_valid(phi: IdempotentSystem) -> None:
    if not verify_axioms(phi):
        raise InvalidSystemError("输入不满足幂等系统公理")


def dual_system(phi: IdempotentSystem) -> IdempotentSystem:
    """Φ* = ({E*_i}; {E_i})"""
    return IdempotentSystem(phi.estar, phi.e)


def canonicalize(phi: IdempotentSystem) -> Tuple[IdempotentSystem, ExactMatrix]:
    """把 Φ 共轭到 E_i = Δ_{i,i} 的规范形

    Returns:
        (规范形系统, T)，其中 E_i = T·Δ_{i,i}·T⁻¹，规范形为 A ↦ T⁻¹·A·T 的像
    """
    try:
        t = recover_diagonalizer(phi.e)
    except (NotAnIdempotentFamilyError, SingularMatrixError) as e:
        raise InvalidSystemError(f"{{E_i}} 不是幂等元族: {e.message}") from e
    t_inv = mat_inverse(t)
    e = tuple(t_inv @ a @ t for a in phi.e)
    estar = tuple(t_inv @ a @ t for a in phi.estar)
    return IdempotentSystem(e, estar), t


def defining_matrix(phi: IdempotentSystem) -> ExactMatrix:
    """规范形中 E*_i = R·Δ_{i,i}·R⁻¹ 的 R（按列缩放不唯一）"""
    canonical, _ = canonicalize(phi)
    try:
        return recover_diagonalizer(canonical.estar)
    except (NotAnIdempotentFamilyError, SingularMatrixError) as e:
        raise InvalidSystemError(f"{{E*_i}} 不是幂等元族: {e.message}") from e


def normalized_representative(phi: IdempotentSystem) -> ExactMatrix:
    """唯一的 normalized R 使 Φ ≅ Φ_R（不要求对称）"""
    _require_valid(phi)
    return normalize(defining_matrix(phi))


def isomorphism_witness(phi1: IdempotentSystem, phi2: IdempotentSystem) -> Optional[ExactMatrix]:
    """求 G 使 A ↦ G·A·G⁻¹ 把 Φ₁ 映为 Φ₂，不同构时返回 None

    规范形之间的同构由对角矩阵 H 实现（R₂ = H·R₁·K），G = T₂·H·T₁⁻¹。
    """
    _require_valid(phi1)
    _require_valid(phi2)
    if phi1.spec != phi2.spec or phi1.size != phi2.size:
        return None
    canon1, t1 = canonicalize(phi1)
    canon2, t2 = canonicalize(phi2)
    r1 = recover_diagonalizer(canon1.estar)
    r2 = recover_diagonalizer(canon2.estar)
    witness = diagonal_equivalence(r1, r2)
    if witness is None:
        return None
    g = t2 @ witness.h_matrix() @ mat_inverse(t1)
    g_inv = mat_inverse(g)
    for a, b in zip(phi1.matrices(), phi2.matrices()):
        if g @ a @ g_inv != b:
            raise InvariantViolationError("isomorphism_witness", "同构见证未能映射全部幂等元")
    return g


# ==================== 对称性 ====================

def apply_antiautomorphism(k: ExactMatrix, a: ExactMatrix) -> ExactMatrix:
    """A ↦ K·Aᵗ·K⁻¹"""
    return k @ transpose(a) @ mat_inverse(k)


def symmetry_witness(phi: IdempotentSystem) -> Optional[ExactMatrix]:
    """对称系统返回 M，使 A ↦ M·Aᵗ·M⁻¹ 固定全部 E_i 与 E*_i；不对称时返回 None

    规范形中 M 是对角矩阵 K，取自 Rᵗ = H·R⁻¹·K；一般系统返回 M = T·K·Tᵗ。

    Raises:
        InvalidSystemError: 公理不成立
    """
    _require_valid(phi)
    canonical, t = canonicalize(phi)
    r = recover_diagonalizer(canonical.estar)
    witness = check_ao(r)
    if witness is None:
        logger.debug(f"[Symmetry] R = {r} 不是 AO")
        return None
    m = t @ witness.k_matrix() @ transpose(t)
    for i, a in enumerate(phi.matrices()):
        if apply_antiautomorphism(m, a) != a:
            raise InvariantViolationError("antiautomorphism_fixes_idempotents", f"第 {i} 个幂等元未被固定")
    logger.debug(f"[Symmetry] 反自同构矩阵 M = {m}")
    return m


def is_symmetric(phi: IdempotentSystem) -> bool:
    return symmetry_witness(phi) is not None


# ==================== 特征数据 ====================

def multiplicities(phi: IdempotentSystem) -> Tuple[List[FieldScalar], FieldScalar]:
    """m_i = tr(E*_0·E_i)，ν = m_0⁻¹

    Raises:
        DegenerateSystemError: 某个 m_i = 0
        InvariantViolationError: Σ m_i ≠ 1
    """
    es0 = phi.estar[0]
    m = [trace(es0 @ e_i) for e_i in phi.e]
    for i, value in enumerate(m):
        if value.is_zero():
            raise DegenerateSystemError(i)
    total = phi.spec.zero()
    for value in m:
        total = total + value
    if not total.is_one():
        raise InvariantViolationError("sum_m_equals_one", f"Σ m_i = {total}")
    return m, m[0].inverse()


def _a_coefficients(phi: IdempotentSystem) -> List[List[FieldScalar]]:
    """A_i = Σ_j c_{i,j}·E_j 的系数 c_{i,j}

    对每个 i 解 (Σ_j c_j·E_j·B) = C_i，B = E*_0·E_0，C_i = E*_i·E_0，
    矩阵方程按矩阵元展开成 (d+1)² 个方程、d+1 个未知数。
    """
    n = phi.size
    b = phi.estar[0] @ phi.e[0]
    products = [e_j @ b for e_j in phi.e]
    rows = [[products[j][r, s] for j in range(n)] for r in range(n) for s in range(n)]
    coefficients = []
    for i in range(n):
        c = phi.estar[i] @ phi.e[0]
        rhs = [c[r, s] for r in range(n) for s in range(n)]
        coefficients.append(solve_linear_system(phi.spec, rows, rhs))
    return coefficients


def compute_a_basis(phi: IdempotentSystem) -> List[ExactMatrix]:
    """A_i ∈ span{E_j}，满足 A_i·E*_0·E_0 = E*_i·E_0

    Raises:
        NotSymmetricError: 系统不对称
        NoSolutionError / NonUniqueSolutionError: 线性方程组失败
    """
    if not is_symmetric(phi):
        raise NotSymmetricError()
    basis = []
    for coefficients in _a_coefficients(phi):
        a_i = zeros(phi.spec, phi.size)
        for c, e_j in zip(coefficients, phi.e):
            if not c.is_zero():
                a_i = a_i + scale(e_j, c)
        basis.append(a_i)
    if basis[0] != identity(phi.spec, phi.size):
        raise InvariantViolationError("a0_is_identity", f"A_0 = {basis[0]}")
    return basis


def _first_eigenmatrix(phi: IdempotentSystem) -> ExactMatrix:
    """A_j = Σ_i P_{i,j}·E_i，即 P 的第 j 列是 A_j 的系数"""
    coefficients = _a_coefficients(phi)
    n = phi.size
    return ExactMatrix(phi.spec, tuple(
        tuple(coefficients[j][i] for j in range(n)) for i in range(n)
    ))


def first_eigenmatrix(phi: IdempotentSystem) -> ExactMatrix:
    """对称系统的第一特征矩阵 P"""
    if not is_symmetric(phi):
        raise NotSymmetricError()
    return _first_eigenmatrix(phi)


def intersection_numbers(p: ExactMatrix) -> Tuple[Tuple[Tuple[FieldScalar, ...], ...], ...]:
    """由特征矩阵做基变换：p^h_{ij} = Σ_r (P⁻¹)_{h,r}·P_{r,i}·P_{r,j}

    Returns:
        pnum[h][i][j]
    """
    n = p.size
    p_inv = mat_inverse(p)
    zero = p.spec.zero()
    table = []
    for h in range(n):
        layer = []
        for i in range(n):
            row = []
            for j in range(n):
                total = zero
                for r in range(n):
                    total = total + p_inv[h, r] * p[r, i] * p[r, j]
                row.append(total)
            layer.append(tuple(row))
        table.append(tuple(layer))
    return tuple(table)


def intersection_numbers_by_multiplication(
    basis: Sequence[ExactMatrix],
) -> Tuple[Tuple[Tuple[FieldScalar, ...], ...], ...]:
    """直接把 A_i·A_j 在 {A_h} 下展开得到 p^h_{ij}"""
    n = len(basis)
    spec = basis[0].spec
    size = basis[0].size
    rows = [[basis[h][r, s] for h in range(n)] for r in range(size) for s in range(size)]
    table = [[[spec.zero()] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            product = basis[i] @ basis[j]
            rhs = [product[r, s] for r in range(size) for s in range(size)]
            for h, value in enumerate(solve_linear_system(spec, rows, rhs)):
                table[h][i][j] = value
    return tuple(tuple(tuple(row) for row in layer) for layer in table)


def eigendata_identities(report: EigendataReport) -> List[str]:
    """逐项检查特征数据恒等式，返回失败项名称列表"""
    spec, n = report.spec, report.p.size
    p, q = report.p, report.q
    one, zero = spec.one(), spec.zero()
    failures: List[str] = []

    def check(name: str, holds: bool) -> None:
        if not holds:
            failures.append(name)

    total_k = zero
    for value in report.k:
        total_k = total_k + value
    total_m = zero
    for value in report.m:
        total_m = total_m + value
    p_inv = mat_inverse(p)
    nu_inv = report.nu.inverse()
    k_mat = diagonal(spec, report.k)
    kstar_mat = diagonal(spec, report.kstar)

    check("k0_is_one", report.k[0] == one)
    check("kstar0_is_one", report.kstar[0] == one)
    check("nu_is_sum_k", report.nu == total_k)
    check("sum_m_is_one", total_m == one)
    check("pq_is_nu_identity", p @ q == scale(identity(spec, n), report.nu))
    check("pt_kstar_is_k_q", transpose(p) @ kstar_mat == k_mat @ q)
    check("p_column0_ones", all(p[i, 0] == one for i in range(n)))
    check("p_row0_is_k", all(p[0, j] == report.k[j] for j in range(n)))
    check("pinv_column0_is_nu_inverse", all(p_inv[i, 0] == nu_inv for i in range(n)))
    check("pinv_row0_is_scaled_kstar", all(p_inv[0, j] == nu_inv * report.kstar[j] for j in range(n)))
    check("p0ij_is_delta_k", all(
        report.pnum[0][i][j] == (report.k[i] if i == j else zero)
        for i in range(n) for j in range(n)
    ))
    kikj_holds = True
    for i in range(n):
        for j in range(n):
            total = zero
            for h in range(n):
                total = total + report.pnum[h][i][j] * report.k[h]
            if total != report.k[i] * report.k[j]:
                kikj_holds = False
    check("kikj_is_sum_pk", kikj_holds)
    return failures


def assemble_eigendata(phi: IdempotentSystem) -> EigendataReport:
    """计算特征数据但不做恒等式校验（校验见 eigendata_identities）

    先共轭到规范形；Q 取对偶系统的第一特征矩阵。
    """
    _require_valid(phi)
    canonical, _ = canonicalize(phi)
    if symmetry_witness(canonical) is None:
        raise NotSymmetricError()
    dual_canonical, _ = canonicalize(dual_system(canonical))

    p = _first_eigenmatrix(canonical)
    q = _first_eigenmatrix(dual_canonical)
    m, nu = multiplicities(canonical)
    mstar, nu_star = multiplicities(dual_canonical)
    if nu != nu_star:
        raise InvariantViolationError("nu_self_dual", f"ν = {nu}，ν* = {nu_star}")

    r = recover_diagonalizer(canonical.estar)
    if normalize(r) != p:
        raise InvariantViolationError("p_is_normalized_r", f"P = {p}，normalize(R) = {normalize(r)}")

    return EigendataReport(
        p=p,
        q=q,
        nu=nu,
        k=tuple(nu * x for x in mstar),
        kstar=tuple(nu * x for x in m),
        m=tuple(m),
        mstar=tuple(mstar),
        pnum=intersection_numbers(p),
    )


def eigendata(phi: IdempotentSystem) -> EigendataReport:
    """对称系统的 (P, Q, ν, k, k*, m, m*, p^h_{ij})

    Raises:
        InvalidSystemError: 公理不成立
        NotSymmetricError: 系统不对称
        InvariantViolationError: 任一恒等式不成立
    """
    report = assemble_eigendata(phi)
    failures = eigendata_identities(report)
    if failures:
        raise InvariantViolationError(failures[0], f"特征数据恒等式失败: {', '.join(failures)}")
    logger.debug(f"[Eigendata] d={report.d} ν={report.nu} P={report.p}")
    return report

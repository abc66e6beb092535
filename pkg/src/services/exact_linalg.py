# -*- coding: utf-8 -*-
"""
精确线性代数内核

在有理数域 Q 与素域 F_p 上做精确运算，所有下游模块都建立在这里：
- FieldSpec / FieldScalar: 域描述与域元素
- ExactMatrix: (d+1)×(d+1) 稠密矩阵，行列下标 0..d
- Gauss–Jordan 求逆、秩、行列式、线性方程组
- 幂等元族的对角化矩阵恢复

使用方式:
    from services.exact_linalg import FieldSpec, ExactMatrix, mat_inverse

    Q = FieldSpec.rational()
    r = ExactMatrix.from_rows(Q, [[1, 2], [1, -1]])
    mat_inverse(r)   # (1/3)·[[1,2],[1,-1]]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Iterator, List, Optional, Sequence, Tuple

from loguru import logger
from sympy import Poly, Rational, Symbol, isprime
from sympy import Matrix as SymMatrix

from api.exceptions import (
    FieldError,
    FieldMismatchError,
    NoSolutionError,
    NonUniqueSolutionError,
    NotAnIdempotentFamilyError,
    ParseError,
    SingularMatrixError,
    SizeMismatchError,
    ZeroInverseError,
)


_RATIONAL_PATTERN = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")
_INTEGER_PATTERN = re.compile(r"^\s*(-?\d+)\s*$")

# 素数模数限制在机器字长以内
MAX_MODULUS = 2 ** 63


class FieldKind(str, Enum):
    """域的种类"""
    RATIONAL = "rational"
    PRIME = "prime"


@dataclass(frozen=True)
class FieldSpec:
    """域描述：Q 或 F_p"""
    kind: FieldKind
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.kind is FieldKind.PRIME:
            if not isinstance(self.modulus, int) or isinstance(self.modulus, bool):
                raise FieldError("素域必须给出整数模数", {"modulus": self.modulus})
            if self.modulus >= MAX_MODULUS:
                raise FieldError(f"模数 {self.modulus} 超出 2^63", {"modulus": self.modulus})
            if not isprime(self.modulus):
                raise FieldError(f"模数 {self.modulus} 不是素数", {"modulus": self.modulus})
        elif self.modulus is not None:
            raise FieldError("有理数域不接受模数", {"modulus": self.modulus})

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONAL)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME, p)

    @property
    def is_rational(self) -> bool:
        return self.kind is FieldKind.RATIONAL

    def scalar(self, value: Any) -> "FieldScalar":
        """把 int / Fraction / str / FieldScalar 转为本域元素"""
        if isinstance(value, FieldScalar):
            if value.spec != self:
                raise FieldMismatchError(str(value.spec), str(self))
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise ParseError(f"无法转换为域元素: {value!r}")
        if self.is_rational:
            return FieldScalar(self, Fraction(value))
        p = self.modulus
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ParseError(f"{value} 的分母在 F_{p} 中为零")
            return FieldScalar(self, value.numerator * pow(value.denominator, -1, p) % p)
        return FieldScalar(self, value % p)

    def parse(self, text: str) -> "FieldScalar":
        """按精确标量文本语法解析

        有理数: "a" 或 "a/b"（十进制整数，可带负号）
        素域:   十进制整数，载入时对 p 取模
        """
        if not isinstance(text, str):
            raise ParseError(f"标量必须是字符串: {text!r}")
        if self.is_rational:
            match = _RATIONAL_PATTERN.match(text)
            if not match:
                raise ParseError(f"无法解析有理数: {text!r}", {"text": text})
            numerator = int(match.group(1))
            denominator = int(match.group(2)) if match.group(2) is not None else 1
            if denominator == 0:
                raise ParseError(f"分母为零: {text!r}", {"text": text})
            return FieldScalar(self, Fraction(numerator, denominator))
        match = _INTEGER_PATTERN.match(text)
        if not match:
            raise ParseError(f"无法解析 F_{self.modulus} 元素: {text!r}", {"text": text})
        return FieldScalar(self, int(match.group(1)) % self.modulus)

    def zero(self) -> "FieldScalar":
        return self.scalar(0)

    def one(self) -> "FieldScalar":
        return self.scalar(1)

    def elements(self) -> Iterator["FieldScalar"]:
        """按规范代表元顺序列出 F_p 的全部元素"""
        if self.is_rational:
            raise FieldError("有理数域不可枚举")
        for residue in range(self.modulus):
            yield FieldScalar(self, residue)

    def describe(self) -> dict:
        """JSON 域描述"""
        if self.is_rational:
            return {"type": "rational"}
        return {"type": "prime", "p": self.modulus}

    def __str__(self) -> str:
        return "Q" if self.is_rational else f"F_{self.modulus}"


@dataclass(frozen=True)
class FieldScalar:
    """域元素

    有理数以最简分数（分母为正）存储；素域元素以 [0, p) 中的代表元存储。
    构造请走 FieldSpec.scalar / FieldSpec.parse。
    """
    spec: FieldSpec
    value: Any

    def _coerce(self, other: Any) -> "FieldScalar":
        if isinstance(other, FieldScalar):
            if other.spec != self.spec:
                raise FieldMismatchError(str(self.spec), str(other.spec))
            return other
        return self.spec.scalar(other)

    def _wrap(self, value: Any) -> "FieldScalar":
        if self.spec.is_rational:
            return FieldScalar(self.spec, value)
        return FieldScalar(self.spec, value % self.spec.modulus)

    def __add__(self, other: Any) -> "FieldScalar":
        return self._wrap(self.value + self._coerce(other).value)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "FieldScalar":
        return self._wrap(self.value - self._coerce(other).value)

    def __rsub__(self, other: Any) -> "FieldScalar":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "FieldScalar":
        return self._wrap(self.value * self._coerce(other).value)

    __rmul__ = __mul__

    def __neg__(self) -> "FieldScalar":
        return self._wrap(-self.value)

    def inverse(self) -> "FieldScalar":
        if self.is_zero():
            raise ZeroInverseError(str(self.spec))
        if self.spec.is_rational:
            return FieldScalar(self.spec, 1 / self.value)
        return FieldScalar(self.spec, pow(self.value, -1, self.spec.modulus))

    def __truediv__(self, other: Any) -> "FieldScalar":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> "FieldScalar":
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "FieldScalar":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.spec.one()
        for _ in range(exponent):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def sort_key(self) -> Any:
        """同一域内的全序键（确定性排序用）"""
        return self.value

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, FieldScalar):
            return self.spec == other.spec and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self.value == self.spec.scalar(other).value
            except ParseError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, self.value))

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"{self.value}@{self.spec}"


Row = Tuple[FieldScalar, ...]


@dataclass(frozen=True)
class ExactMatrix:
    """(d+1)×(d+1) 精确矩阵，行列下标 0..d"""
    spec: FieldSpec
    rows: Tuple[Row, ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            raise SizeMismatchError("empty", "(d+1)×(d+1), d ≥ 0")
        for row in self.rows:
            if len(row) != n:
                raise SizeMismatchError(f"{n}×{len(row)}", f"{n}×{n}")
            for entry in row:
                if not isinstance(entry, FieldScalar) or entry.spec != self.spec:
                    raise FieldMismatchError(str(self.spec), repr(entry))

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[Any]]) -> "ExactMatrix":
        """从 int / Fraction / str / FieldScalar 的二维列表构造"""
        return cls(spec, tuple(tuple(spec.scalar(v) for v in row) for row in rows))

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def d(self) -> int:
        """直径 d（矩阵为 (d+1)×(d+1)）"""
        return len(self.rows) - 1

    def __getitem__(self, index: Tuple[int, int]) -> FieldScalar:
        r, s = index
        return self.rows[r][s]

    def row(self, r: int) -> Row:
        return self.rows[r]

    def column(self, s: int) -> Row:
        return tuple(row[s] for row in self.rows)

    def diagonal_entries(self) -> Row:
        return tuple(self.rows[i][i] for i in range(self.size))

    @property
    def T(self) -> "ExactMatrix":
        return transpose(self)

    def inverse(self) -> "ExactMatrix":
        return mat_inverse(self)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return add(self, other)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return sub(self, other)

    def __neg__(self) -> "ExactMatrix":
        return scale(self, -self.spec.one())

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.rows for entry in row)

    def to_strings(self) -> List[List[str]]:
        return [[str(entry) for entry in row] for row in self.rows]

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows) + "]"


# ==================== 构造 ====================

def identity(spec: FieldSpec, n: int) -> ExactMatrix:
    one, zero = spec.one(), spec.zero()
    return ExactMatrix(spec, tuple(tuple(one if r == s else zero for s in range(n)) for r in range(n)))


def zeros(spec: FieldSpec, n: int) -> ExactMatrix:
    zero = spec.zero()
    return ExactMatrix(spec, tuple(tuple(zero for _ in range(n)) for _ in range(n)))


def delta(spec: FieldSpec, n: int, i: int, j: int) -> ExactMatrix:
    """Δ_{i,j}: (i,j) 位置为 1，其余为 0"""
    one, zero = spec.one(), spec.zero()
    return ExactMatrix(spec, tuple(
        tuple(one if (r, s) == (i, j) else zero for s in range(n)) for r in range(n)
    ))


def diagonal(spec: FieldSpec, values: Sequence[Any]) -> ExactMatrix:
    zero = spec.zero()
    entries = [spec.scalar(v) for v in values]
    n = len(entries)
    return ExactMatrix(spec, tuple(
        tuple(entries[r] if r == s else zero for s in range(n)) for r in range(n)
    ))


# ==================== 基本运算 ====================

def _check_compatible(a: ExactMatrix, b: ExactMatrix) -> None:
    if a.spec != b.spec:
        raise FieldMismatchError(str(a.spec), str(b.spec))
    if a.size != b.size:
        raise SizeMismatchError(a.size, b.size)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """精确矩阵乘法"""
    _check_compatible(a, b)
    n = a.size
    zero = a.spec.zero()
    columns = [b.column(s) for s in range(n)]
    rows = []
    for row in a.rows:
        out = []
        for col in columns:
            acc = zero
            for x, y in zip(row, col):
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            out.append(acc)
        rows.append(tuple(out))
    return ExactMatrix(a.spec, tuple(rows))


def add(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    _check_compatible(a, b)
    return ExactMatrix(a.spec, tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)
    ))


def sub(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    _check_compatible(a, b)
    return ExactMatrix(a.spec, tuple(
        tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)
    ))


def scale(a: ExactMatrix, factor: Any) -> ExactMatrix:
    c = a.spec.scalar(factor)
    return ExactMatrix(a.spec, tuple(tuple(c * x for x in row) for row in a.rows))


def transpose(a: ExactMatrix) -> ExactMatrix:
    return ExactMatrix(a.spec, tuple(a.column(s) for s in range(a.size)))


def trace(a: ExactMatrix) -> FieldScalar:
    """对角元之和"""
    total = a.spec.zero()
    for entry in a.diagonal_entries():
        total = total + entry
    return total


def is_diagonal(a: ExactMatrix) -> bool:
    """非对角元全为零"""
    return all(a[r, s].is_zero() for r in range(a.size) for s in range(a.size) if r != s)


def commutes(a: ExactMatrix, b: ExactMatrix) -> bool:
    return mat_mul(a, b) == mat_mul(b, a)


# ==================== 消元 ====================

def _row_reduce(rows: List[List[FieldScalar]], pivot_columns: int) -> List[int]:
    """原地做 Gauss–Jordan 消元（只在前 pivot_columns 列上找主元）

    主元按列顺序取第一个非零元，精确运算不需要按大小选主元。

    Returns:
        主元所在列的列表（长度即秩）
    """
    pivots: List[int] = []
    pivot_row = 0
    for col in range(pivot_columns):
        found = next((r for r in range(pivot_row, len(rows)) if not rows[r][col].is_zero()), None)
        if found is None:
            continue
        rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
        inv = rows[pivot_row][col].inverse()
        rows[pivot_row] = [x * inv for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return pivots


def rank(a: ExactMatrix) -> int:
    work = [list(row) for row in a.rows]
    return len(_row_reduce(work, a.size))


def is_rank_one(a: ExactMatrix) -> bool:
    return rank(a) == 1


def determinant(a: ExactMatrix) -> FieldScalar:
    """消元求行列式"""
    work = [list(row) for row in a.rows]
    n = a.size
    det = a.spec.one()
    for col in range(n):
        found = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
        if found is None:
            return a.spec.zero()
        if found != col:
            work[col], work[found] = work[found], work[col]
            det = -det
        pivot = work[col][col]
        det = det * pivot
        for r in range(col + 1, n):
            if not work[r][col].is_zero():
                factor = work[r][col] / pivot
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return det


def mat_inverse(a: ExactMatrix) -> ExactMatrix:
    """增广矩阵 [A | I] 的 Gauss–Jordan 消元求逆

    Raises:
        SingularMatrixError: 矩阵不可逆
    """
    n = a.size
    one, zero = a.spec.one(), a.spec.zero()
    work = [list(row) + [one if r == s else zero for s in range(n)] for r, row in enumerate(a.rows)]
    pivots = _row_reduce(work, n)
    if len(pivots) < n:
        raise SingularMatrixError()
    return ExactMatrix(a.spec, tuple(tuple(row[n:]) for row in work))


def is_invertible(a: ExactMatrix) -> bool:
    return rank(a) == a.size


def conjugate(a: ExactMatrix, t: ExactMatrix) -> ExactMatrix:
    """t·a·t⁻¹"""
    return mat_mul(mat_mul(t, a), mat_inverse(t))


def solve_linear_system(
    spec: FieldSpec,
    coefficients: Sequence[Sequence[FieldScalar]],
    rhs: Sequence[FieldScalar],
) -> List[FieldScalar]:
    """解（可能超定的）线性方程组 C·x = b

    Args:
        spec: 所在域
        coefficients: 系数矩阵（m 行 n 列）
        rhs: 右端（长度 m）

    Returns:
        唯一解 x（长度 n）

    Raises:
        NoSolutionError: 方程组不相容
        NonUniqueSolutionError: 解空间维数大于零
    """
    if len(coefficients) != len(rhs):
        raise SizeMismatchError(len(coefficients), len(rhs))
    n = len(coefficients[0]) if coefficients else 0
    work = [[spec.scalar(c) for c in row] + [spec.scalar(b)] for row, b in zip(coefficients, rhs)]
    pivots = _row_reduce(work, n)
    for row in work[len(pivots):]:
        if not row[n].is_zero():
            raise NoSolutionError("线性方程组不相容")
    if len(pivots) < n:
        raise NonUniqueSolutionError(f"解不唯一（秩 {len(pivots)} < 未知数 {n}）")
    solution = [spec.zero()] * n
    for r, col in enumerate(pivots):
        solution[col] = work[r][n]
    return solution


# ==================== 特征值 ====================

def _rational_eigenvalues(a: ExactMatrix) -> List[FieldScalar]:
    lam = Symbol("lam")
    sym = SymMatrix(a.size, a.size, lambda r, s: Rational(a[r, s].value.numerator, a[r, s].value.denominator))
    poly = Poly(sym.charpoly(lam).as_expr(), lam, domain="QQ")
    roots = []
    for root in poly.ground_roots():
        value = Rational(root)
        roots.append(a.spec.scalar(Fraction(int(value.p), int(value.q))))
    return roots


def _residue_eigenvalues(a: ExactMatrix) -> List[FieldScalar]:
    n = a.size
    return [lam for lam in a.spec.elements()
            if rank(sub(a, scale(identity(a.spec, n), lam))) < n]


def eigenvalues_in_field(a: ExactMatrix) -> List[FieldScalar]:
    """落在 F 中的互异特征值（按 sort_key 升序）

    Q 上用 sympy 对特征多项式做有理因式分解，F_p 上逐个代表元检验。
    """
    values = _rational_eigenvalues(a) if a.spec.is_rational else _residue_eigenvalues(a)
    return sorted(set(values), key=lambda v: v.sort_key())


# ==================== 幂等元族 ====================

def verify_idempotent_family(family: Sequence[ExactMatrix]) -> Optional[str]:
    """检查互相正交的秩 1 幂等元族且和为 I

    Returns:
        None 表示通过，否则返回失败原因
    """
    if not family:
        return "空族"
    spec, n = family[0].spec, family[0].size
    if len(family) != n:
        return f"族的大小 {len(family)} 不等于 d+1 = {n}"
    for member in family:
        if member.spec != spec or member.size != n:
            return "族成员的域或尺寸不一致"
    for i, e_i in enumerate(family):
        if not is_rank_one(e_i):
            return f"E_{i} 的秩不为 1"
        for j, e_j in enumerate(family):
            product = mat_mul(e_i, e_j)
            expected = e_i if i == j else zeros(spec, n)
            if product != expected:
                return f"E_{i}·E_{j} ≠ δ_{{{i},{j}}}·E_{i}"
    total = zeros(spec, n)
    for member in family:
        total = add(total, member)
    if total != identity(spec, n):
        return "族之和不等于 I"
    return None


def recover_diagonalizer(family: Sequence[ExactMatrix]) -> ExactMatrix:
    """求可逆 R 使 family[i] = R·Δ_{i,i}·R⁻¹

    R 的第 i 列取 family[i] 最左侧的非零列。

    Raises:
        NotAnIdempotentFamilyError: 族不满足正交秩 1 幂等元的定义
        SingularMatrixError: 拼出的 R 不可逆
    """
    reason = verify_idempotent_family(family)
    if reason is not None:
        raise NotAnIdempotentFamilyError(reason)
    spec, n = family[0].spec, family[0].size
    columns = []
    for member in family:
        col = next(s for s in range(n) if any(not x.is_zero() for x in member.column(s)))
        columns.append(member.column(col))
    r = ExactMatrix(spec, tuple(tuple(columns[s][row] for s in range(n)) for row in range(n)))
    r_inv = mat_inverse(r)
    for i, member in enumerate(family):
        if mat_mul(mat_mul(r, delta(spec, n, i, i)), r_inv) != member:
            raise NotAnIdempotentFamilyError(f"无法由 R 重建 E_{i}")
    logger.debug(f"[Diagonalizer] 恢复 R = {r}")
    return r

# -*- coding: utf-8 -*-
"""
自定义异常类
提供细分的异常类型，便于错误处理、日志记录和 CLI 退出码映射

- DomainError: 数学前提不成立（退出码 1）
- InputError: 文档解析 / 文件读写失败（退出码 2）
"""

from typing import Optional, Dict, Any


class IdemsysError(Exception):
    """基础异常类"""

    exit_code: int = 1
    error_code: str = "INTERNAL_ERROR"

    def __init__(
        self,
        message: str = "内部错误",
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.details = details or {}
        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典格式（用于 JSON 输出）"""
        return {
            "error": True,
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details
        }


# ==================== 领域错误 ====================

class DomainError(IdemsysError):
    """领域错误基类"""
    exit_code = 1
    error_code = "DOMAIN_ERROR"


class FieldMismatchError(DomainError):
    """两个对象不在同一个域上"""
    error_code = "FIELD_MISMATCH"

    def __init__(self, left: str, right: str):
        super().__init__(f"域不一致: {left} vs {right}", {"left": left, "right": right})


class SizeMismatchError(DomainError):
    """矩阵尺寸不一致"""
    error_code = "SIZE_MISMATCH"

    def __init__(self, left: Any, right: Any):
        super().__init__(f"尺寸不一致: {left} vs {right}", {"left": left, "right": right})


class SingularMatrixError(DomainError):
    """矩阵不可逆"""
    error_code = "SINGULAR"

    def __init__(self, message: str = "矩阵不可逆（行列式为零）"):
        super().__init__(message)


class ZeroInverseError(DomainError):
    """域中的零元不可逆"""
    error_code = "ZERO_INVERSE"

    def __init__(self, field: str):
        super().__init__(f"{field} 中零元不可逆", {"field": field})


class NotAnIdempotentFamilyError(DomainError):
    """不是互相正交的秩 1 幂等元族"""
    error_code = "NOT_AN_IDEMPOTENT_FAMILY"

    def __init__(self, reason: str):
        super().__init__(f"不是秩 1 正交幂等元族: {reason}", {"reason": reason})


class NotSolidError(DomainError):
    """矩阵不是 solid"""
    error_code = "NOT_SOLID"

    def __init__(self, message: str = "矩阵不是 solid 可逆矩阵"):
        super().__init__(message)


class InvalidSystemError(DomainError):
    """幂等系统公理不成立"""
    error_code = "INVALID_SYSTEM"


class DegenerateSystemError(DomainError):
    """某个 m_i 为零"""
    error_code = "DEGENERATE_SYSTEM"

    def __init__(self, index: int):
        super().__init__(f"m_{index} = 0，输入族无效", {"index": index})


class NoSolutionError(DomainError):
    """线性方程组无解"""
    error_code = "NO_SOLUTION"


class NonUniqueSolutionError(DomainError):
    """线性方程组解不唯一"""
    error_code = "NON_UNIQUE"


class NotSymmetricError(DomainError):
    """幂等系统不对称（R 不是 AO）"""
    error_code = "NOT_SYMMETRIC"

    def __init__(self, message: str = "幂等系统不是对称的（矩阵不是 AO）"):
        super().__init__(message)


class ZeroKError(DomainError):
    """k 必须非零"""
    error_code = "ZERO_K"

    def __init__(self):
        super().__init__("k 必须非零")


class NotSplitSemisimpleError(DomainError):
    """代数在 F 上不可分裂半单"""
    error_code = "NOT_SPLIT_SEMISIMPLE"


class NotAONError(DomainError):
    """矩阵不是 AO normalized solid invertible"""
    error_code = "NOT_AON"

    def __init__(self, reason: str = "矩阵不是 AON"):
        super().__init__(reason, {"reason": reason})


class DegenerateFormError(DomainError):
    """双线性形式退化"""
    error_code = "DEGENERATE_FORM"

    def __init__(self, index: int):
        super().__init__(f"<e_{index}, e_{index}> = 0，输入已损坏", {"index": index})


class AxiomViolationError(DomainError):
    """特征代数公理不成立"""
    error_code = "AXIOM_VIOLATION"

    def __init__(self, axiom: str, message: str = ""):
        super().__init__(message or f"公理不成立: {axiom}", {"axiom": axiom})
        self.axiom = axiom


class BudgetExceededError(DomainError):
    """枚举规模超出预算"""
    error_code = "BUDGET_EXCEEDED"

    def __init__(self, candidates: int, budget: int):
        super().__init__(
            f"候选数 {candidates} 超出预算 {budget}",
            {"candidates": candidates, "budget": budget}
        )


class InvariantViolationError(DomainError):
    """内部恒等式校验失败"""
    error_code = "INVARIANT_VIOLATION"

    def __init__(self, identity: str, message: str = ""):
        super().__init__(message or f"恒等式不成立: {identity}", {"identity": identity})


# ==================== 输入错误 ====================

class InputError(IdemsysError):
    """输入错误基类"""
    exit_code = 2
    error_code = "INPUT_ERROR"


class ParseError(InputError):
    """标量或文档解析失败"""
    error_code = "PARSE_ERROR"


class FieldError(InputError):
    """域描述无效（例如模数不是素数）"""
    error_code = "FIELD_ERROR"


class InputFileError(InputError):
    """输入文件读写失败"""
    error_code = "INPUT_FILE_ERROR"

    def __init__(self, path: str, reason: str):
        super().__init__(f"无法读取 {path}: {reason}", {"path": path})

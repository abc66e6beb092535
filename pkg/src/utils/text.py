# -*- coding: utf-8 -*-
from __future__ import annotations

from typing import Any, Dict, List

from pydantic import BaseModel


def _is_matrix(value: Any) -> bool:
    return (isinstance(value, list) and bool(value)
            and all(isinstance(row, list) and all(isinstance(x, str) for x in row) for row in value))


def _is_tensor(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(_is_matrix(layer) for layer in value)


def format_matrix(rows: List[List[str]], indent: str = "  ") -> str:
    """按列右对齐排版矩阵"""
    if not rows:
        return f"{indent}[]"
    widths = [max(len(row[s]) for row in rows) for s in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
        lines.append(f"{indent}[ {cells} ]")
    return "\n".join(lines)


def format_vector(values: List[str]) -> str:
    return "(" + ", ".join(values) + ")"


def format_field(descriptor: Dict[str, Any]) -> str:
    return "Q" if descriptor.get("type") == "rational" else f"F_{descriptor.get('p')}"


def _render_value(key: str, value: Any, indent: str) -> List[str]:
    if key == "field" and isinstance(value, dict):
        return [f"{indent}{key}: {format_field(value)}"]
    if _is_tensor(value):
        lines = [f"{indent}{key}:"]
        for index, layer in enumerate(value):
            lines.append(f"{indent}  [{index}]")
            lines.append(format_matrix(layer, indent + "    "))
        return lines
    if _is_matrix(value):
        return [f"{indent}{key}:", format_matrix(value, indent + "  ")]
    if isinstance(value, list) and all(isinstance(x, str) for x in value):
        return [f"{indent}{key}: {format_vector(value)}"]
    if isinstance(value, dict):
        lines = [f"{indent}{key}:"]
        for sub_key, sub_value in value.items():
            lines.extend(_render_value(sub_key, sub_value, indent + "  "))
        return lines
    if isinstance(value, list):
        lines = [f"{indent}{key}: {len(value)} 项"]
        for index, item in enumerate(value):
            if isinstance(item, dict):
                lines.append(f"{indent}  - #{index}")
                for sub_key, sub_value in item.items():
                    lines.extend(_render_value(sub_key, sub_value, indent + "    "))
            else:
                lines.append(f"{indent}  - {item}")
        return lines
    if value is None:
        return [f"{indent}{key}: -"]
    return [f"{indent}{key}: {value}"]


def render_pretty(model: BaseModel) -> str:
    """把报告模型排版成便于阅读的文本"""
    data = model.model_dump()
    if "checks" in data:
        return render_checks(data)
    lines: List[str] = []
    for key, value in data.items():
        lines.extend(_render_value(key, value, ""))
    return "\n".join(lines)


def render_checks(data: Dict[str, Any]) -> str:
    """verify 报告：每个检查一行"""
    checks = data.get("checks", [])
    width = max((len(c["name"]) for c in checks), default=0)
    lines = []
    for check in checks:
        reason = f"  {check['reason']}" if check.get("reason") else ""
        lines.append(f"{check['name'].ljust(width)}  {check['status']:<7}{reason}".rstrip())
    lines.append(f"passed: {data.get('passed')}")
    return "\n".join(lines)

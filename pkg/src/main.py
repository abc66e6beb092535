# -*- coding: utf-8 -*-
"""
idemsys - 幂等系统与特征系统的精确计算工具
主入口：命令行

运行方式:
    python src/main.py classify --input r.json
    python src/main.py eigendata --input p.json --format pretty
    python src/main.py enumerate --d 1 --p 5
    python src/main.py verify --input p.json

退出码: 0 成功，1 领域错误，2 解析 / IO 错误
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

# 确保UTF-8编码
if sys.platform == 'win32':
    try:
        if hasattr(sys.stdout, 'reconfigure'):
            sys.stdout.reconfigure(encoding='utf-8')
            sys.stderr.reconfigure(encoding='utf-8')
    except Exception:
        pass


def setup_path():
    """设置Python路径"""
    src_dir = Path(__file__).resolve().parent
    if str(src_dir) not in sys.path:
        sys.path.insert(0, str(src_dir))
    return src_dir.parent


PROJECT_ROOT = setup_path()

from loguru import logger  # noqa: E402

from api.exceptions import IdemsysError, InputFileError  # noqa: E402
from api.schemas import AlgebraDocument, MatrixDocument, VerifyModel, parse_document  # noqa: E402
from services import commands  # noqa: E402
from services.logger import configure_logger  # noqa: E402
from services.unified_config import get_config, reload_config, update_config  # noqa: E402
from utils.text import render_pretty  # noqa: E402

VERSION = "1.0.0"

MATRIX_COMMANDS = {
    "classify": (commands.cmd_classify, "全部谓词：invertible / solid / normalized / AO"),
    "normalize": (commands.cmd_normalize, "对角等价类中的 normalized 代表"),
    "ao": (commands.cmd_ao, "AO 判定与见证"),
    "eigendata": (commands.cmd_eigendata, "AON 矩阵的 P、Q、ν、k、k*、m、m*、p^h_ij"),
    "dual": (commands.cmd_dual, "对偶 AON 矩阵 ν·P⁻¹"),
    "verify": (commands.cmd_verify, "运行全部适用的恒等式检查"),
}


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    """全局选项，主解析器和子命令都接受"""
    default = argparse.SUPPRESS if suppress else None
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--input", default=default, help="输入 JSON 文件（缺省读 stdin）")
    parent.add_argument("--format", choices=["json", "pretty"], default=default, help="输出格式")
    parent.add_argument("--budget", type=int, default=default, help="enumerate 的候选数上限")
    parent.add_argument("--workers", type=int, default=default, help="enumerate 的线程数")
    parent.add_argument("--log-level", dest="log_level", default=default, help="日志级别")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idemsys",
        description=f"idemsys v{VERSION} - 幂等系统与特征系统的精确计算",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[_global_options(suppress=False)],
        epilog="""
示例:
  python src/main.py classify --input r.json
  python src/main.py character --input algebra.json --format pretty
  python src/main.py enumerate --d 1 --p 5 --workers 8
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)
    shared = _global_options(suppress=True)
    for name, (_, help_text) in MATRIX_COMMANDS.items():
        sub.add_parser(name, help=help_text, parents=[shared])
    sub.add_parser("character", help="特征代数的半单分解（AlgebraDocument 输入）", parents=[shared])
    enumerate_parser = sub.add_parser("enumerate", help="F_p 上 AON_d 的穷举普查", parents=[shared])
    enumerate_parser.add_argument("--d", type=int, required=True, help="直径")
    enumerate_parser.add_argument("--p", type=int, required=True, help="素数模数")
    return parser


def read_input(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(path, str(e)) from e


def dispatch(args: argparse.Namespace):
    if args.command == "enumerate":
        return commands.cmd_enumerate(args.d, args.p,
                                      budget=get_config().enumerate_budget,
                                      workers=get_config().max_workers)
    text = read_input(args.input)
    if args.command == "character":
        return commands.cmd_character(parse_document(AlgebraDocument, text))
    handler, _ = MATRIX_COMMANDS[args.command]
    return handler(parse_document(MatrixDocument, text))


def emit(model, output_format: str) -> None:
    if output_format == "pretty":
        print(render_pretty(model))
    else:
        print(model.model_dump_json(indent=2))


def emit_error(error: IdemsysError, output_format: str) -> None:
    if output_format == "pretty":
        print(f"错误 [{error.error_code}]: {error.message}", file=sys.stderr)
    else:
        print(json.dumps(error.to_dict(), ensure_ascii=False, indent=2, default=str))


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    args = build_parser().parse_args(argv)
    reload_config()
    update_config(
        output_format=args.format,
        enumerate_budget=args.budget,
        max_workers=args.workers,
        log_level=args.log_level,
    )
    cfg = get_config()
    configure_logger(cfg.log_level)

    logger.info(f"[CLI] {args.command} 开始")
    try:
        model = dispatch(args)
    except IdemsysError as e:
        logger.warning(f"[CLI] {args.command} 失败: {e.error_code} {e.message}")
        emit_error(e, cfg.output_format)
        return e.exit_code

    emit(model, cfg.output_format)
    if isinstance(model, VerifyModel) and not model.passed:
        return 1
    logger.info(f"[CLI] {args.command} 完成")
    return 0


if __name__ == "__main__":
    sys.exit(main())

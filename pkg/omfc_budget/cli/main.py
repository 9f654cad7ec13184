"""命令行入口

    omfc-budget convert --config run.yaml --out convert.csv
    omfc-budget sensitivity --scheme fd_squeezing --fmin 1 --fmax 1000 --points 200
    omfc-budget tune --out tune.csv --trace trace.csv
    omfc-budget sweep --param omfc.gamma_a --values 1e5,1.5e5,2e5 --table convert

CSV 写到 --out 或 stdout，日志写到 stderr。
退出码：0 成功，2 配置/参数错误，3 数值失败，4 调参未收敛。
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from dotenv import load_dotenv
from loguru import logger

from .. import __version__
from ..errors import OmfcBudgetError
from ..logging_config import configure_logging
from ..schemes import SchemeMode
from . import commands


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="配置文件（YAML，或本工具输出的 CSV）")
    common.add_argument("--fmin", type=float, default=None, help="最低频率 (Hz)")
    common.add_argument("--fmax", type=float, default=None, help="最高频率 (Hz)")
    common.add_argument("--points", type=int, default=None, help="网格点数")
    common.add_argument("--out", default=None, help="输出 CSV 路径，缺省写到 stdout")
    common.add_argument(
        "--scheme",
        default=None,
        choices=[m.value for m in SchemeMode],
        help="探测器方案",
    )
    common.add_argument("--log-level", default=None, help="日志级别（覆盖 LOG_LEVEL）")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omfc-budget",
        description="光机频率转换器辅助引力波探测器的量子噪声预算",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    p = sub.add_parser("convert", parents=[common], help="转换率、有效损耗、热噪声与压缩度")
    p.set_defaults(handler=commands.cmd_convert)

    p = sub.add_parser("sensitivity", parents=[common], help="灵敏度曲线（含 SQL 与参考曲线）")
    p.set_defaults(handler=commands.cmd_sensitivity)

    p = sub.add_parser("budget", parents=[common], help="完整噪声预算（全部分量）")
    p.set_defaults(handler=commands.cmd_budget)

    p = sub.add_parser("criterion", parents=[common], help="热噪声判据")
    p.set_defaults(handler=commands.cmd_criterion)

    p = sub.add_parser("tune", parents=[common], help="调节滤波腔与直流零差角")
    p.add_argument("--trace", default=None, help="轨迹 CSV 路径，缺省为 <out>_trace.csv")
    p.set_defaults(handler=commands.cmd_tune)

    p = sub.add_parser("sweep", parents=[common], help="对一个标量参数扫描")
    p.add_argument("--param", required=True, help="点分配置键，如 omfc.gamma_a")
    p.add_argument("--values", required=True, help="逗号分隔的取值")
    p.add_argument("--table", default="sensitivity", choices=commands.SWEEP_TABLES, help="拼接的表格")
    p.set_defaults(handler=commands.cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """解析参数并执行子命令，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.log_level:
        configure_logging(args.log_level)

    try:
        return args.handler(args)
    except OmfcBudgetError as exc:
        logger.error("{}", exc)
        return exc.exit_code


def run() -> None:
    """console script 入口"""
    load_dotenv(override=False)
    configure_logging()
    sys.exit(main())


if __name__ == "__main__":
    run()

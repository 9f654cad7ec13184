"""CSV 输出：`# key = value` 头部 + 表格

头部先回显完整配置（config.*），再写推导量（meta.*），不含时间戳，
相同输入得到逐字节相同的文件。
"""

from __future__ import annotations

import json
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Mapping, Optional

import numpy as np
import pandas as pd

from ..config.settings import CONFIG_PREFIX, META_PREFIX, RunConfig

FLOAT_FORMAT = "%.12e"


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def header_lines(run: RunConfig, meta: Mapping[str, Any]) -> list[str]:
    lines = [f"# {CONFIG_PREFIX}{key} = {json.dumps(value)}" for key, value in run.flatten().items()]
    lines += [f"# {META_PREFIX}{key} = {json.dumps(_plain(value))}" for key, value in meta.items()]
    return lines


def render_table(frame: pd.DataFrame, run: RunConfig, meta: Mapping[str, Any]) -> str:
    body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return "\n".join(header_lines(run, meta)) + "\n" + body


def write_text(text: str, out: Optional[Path]) -> None:
    """写入文件；out 为 None 时写到 stdout"""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def write_table(
    frame: pd.DataFrame,
    run: RunConfig,
    meta: Mapping[str, Any],
    out: Optional[Path],
) -> None:
    write_text(render_table(frame, run, meta), out)


def read_table(path: str | Path) -> pd.DataFrame:
    """读回本工具写出的 CSV（跳过头部）"""
    return pd.read_csv(path, comment="#")

"""运行配置：YAML/CSV 头部读取、校验与解析"""

from .resolve import (
    ResolvedRun,
    resolve_filter_spec,
    resolve_ifo,
    resolve_omfc,
    resolve_run,
    resolve_scheme,
    resolve_tune_spec,
    run_metadata,
)
from .settings import (
    CONFIG_PREFIX,
    META_PREFIX,
    CriterionSettings,
    FilterSettings,
    GridSettings,
    IfoSettings,
    OmfcSettings,
    RunConfig,
    SchemeSettings,
    SqueezeSettings,
    TuneSettings,
    flatten_document,
    load_config,
    parse_header_lines,
    unflatten_document,
)

__all__ = [
    "ResolvedRun",
    "resolve_filter_spec",
    "resolve_ifo",
    "resolve_omfc",
    "resolve_run",
    "resolve_scheme",
    "resolve_tune_spec",
    "run_metadata",
    "CONFIG_PREFIX",
    "META_PREFIX",
    "CriterionSettings",
    "FilterSettings",
    "GridSettings",
    "IfoSettings",
    "OmfcSettings",
    "RunConfig",
    "SchemeSettings",
    "SqueezeSettings",
    "TuneSettings",
    "flatten_document",
    "load_config",
    "parse_header_lines",
    "unflatten_document",
]

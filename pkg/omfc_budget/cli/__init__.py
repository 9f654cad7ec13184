"""命令行：convert / sensitivity / budget / criterion / tune / sweep"""

from .main import build_parser, main, run

__all__ = ["build_parser", "main", "run"]

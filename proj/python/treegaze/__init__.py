"""Python interface to the treegaze C++ library."""

from ._treegaze import *  # noqa: F401,F403
from ._treegaze import (
    ConfigError,
    DomainError,
    Error,
    IngestError,
    ParseError,
    TreeError,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Attention maps over Java source and their ROC agreement with gaze."""

from ._core import (
    CodeattnError,
    attention_map,
    dump_ast,
    gaze_histogram,
    normalize_indent,
    path_contexts,
    roc,
    version,
)

__all__ = [
    "CodeattnError",
    "attention_map",
    "dump_ast",
    "gaze_histogram",
    "normalize_indent",
    "path_contexts",
    "roc",
    "version",
]
__version__ = version()

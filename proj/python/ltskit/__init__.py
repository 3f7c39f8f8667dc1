"""Letter-to-sound rules learned from a pronunciation lexicon.

The heavy lifting lives in the C++ extension; this package re-exports it.
"""

from ltskit._core import (
    CompressedLexicon,
    DataError,
    InternalError,
    Model,
    align,
    compress,
    evaluate,
    parse_lexicon,
    train,
)

__all__ = [
    "CompressedLexicon",
    "DataError",
    "InternalError",
    "Model",
    "align",
    "compress",
    "evaluate",
    "parse_lexicon",
    "train",
]

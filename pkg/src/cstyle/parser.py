import logging
from pathlib import Path

import javalang
from javalang.parser import JavaSyntaxError
from javalang.tokenizer import LexerError
from javalang.tree import CompilationUnit

from snapshot.utils import read_source

from .models import ParseFailure

logger = logging.getLogger(__name__)


def _position(error: Exception) -> tuple[int | None, int | None]:
    position = getattr(getattr(error, "at", None), "position", None)
    if position is None:
        return None, None
    line = getattr(position, "line", None)
    column = getattr(position, "column", None)
    if line is None:
        line, column = position[0], position[1]
    return line, column


def parse_source(source: str, path: str = "<source>") -> CompilationUnit | ParseFailure:
    """
    Parse Java source into a javalang syntax tree.

    Args:
        source: File content.
        path: Name used in the failure value.

    Returns:
        CompilationUnit | ParseFailure: The tree, or the first error's location.
    """
    if not source.strip():
        return CompilationUnit(imports=[], types=[])
    try:
        return javalang.parse.parse(source)
    except (JavaSyntaxError, LexerError) as e:
        line, column = _position(e)
        message = getattr(e, "description", None) or str(e) or type(e).__name__
        return ParseFailure(path=path, line=line, column=column, message=message)
    except Exception as e:
        # javalang raises bare errors on some truncated inputs
        logger.debug(f"Parser crashed on {path}: {e!r}")
        return ParseFailure(path=path, message=f"{type(e).__name__}: {e}")


def parse_file(path: Path) -> CompilationUnit | ParseFailure:
    return parse_source(read_source(path), str(path))

import logging
from pathlib import Path

logger = logging.getLogger(__name__)


def read_source(path: Path) -> str:
    """
    Read a source file as text without newline translation.

    Undecodable bytes are replaced and reported, so character counts stay
    defined for every file in the corpus.
    """
    raw = Path(path).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        logger.warning(f"{path} is not valid UTF-8, decoding lossily")
        return raw.decode("utf-8", errors="replace")


def count_lines(text: str) -> int:
    """Physical lines: newline-delimited, a trailing partial line counts as one."""
    if not text:
        return 0
    return text.count("\n") + (0 if text.endswith("\n") else 1)

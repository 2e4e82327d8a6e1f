import logging
import os
from typing import Optional


def setup_logging(level: Optional[str] = None):
    level = level or os.environ.get("PACE_LOG_LEVEL", "INFO")
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s [%(levelname)s] [%(name)s] %(message)s",
        force=True,
    )
    # gensim logs every epoch at INFO
    logging.getLogger("gensim").setLevel(logging.WARNING)

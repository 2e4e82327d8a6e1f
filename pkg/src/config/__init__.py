from typing import Optional

from dotenv import load_dotenv

from .logging import setup_logging


def setup(level: Optional[str] = None):
    """Global setup routine"""
    # Load variables from .env into os.environ
    load_dotenv()
    # Setup logging
    setup_logging(level)

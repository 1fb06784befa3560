"""
Rigid Symbol Toolkit - Main Application
"""

import logging
import sys

from utils.settings import settings
from cli.commands import run

# Configure logging (stderr keeps stdout machine-readable)
logging.basicConfig(
    level=settings.log_level.upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)


def main() -> int:
    logger.info(f"Starting {settings.app_name} {settings.version}")
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())

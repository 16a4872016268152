#!/usr/bin/env python3
"""
Launcher for hqdisk

Adds the repository root to the Python path and runs the command line front
end, so the experiments work from a checkout without installation.
"""

import os
import sys
import logging

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


def run_hqdisk():
    """Run the hqdisk command line"""
    # Add the current directory to the Python path
    sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

    try:
        from hqdisk.cli import main
        return main()
    except ImportError as e:
        logger.error(f"Failed to import hqdisk: {str(e)}")
        return 2


if __name__ == "__main__":
    sys.exit(run_hqdisk())

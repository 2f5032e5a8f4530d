#!/usr/bin/env python3
"""
fuzzdep - Main Entry Point

Command-line toolkit for fuzzy relations: semantic proximity of interval,
alpha-cut and trapezoidal values, FFD/FMVD checking, dependency inference
and lossless decomposition.
"""

import sys
import logging
from app import create_cli
from config import Config

def setup_logging():
    """Configure application logging.

    Reports go to stdout, so log records are written to the log file and stderr.
    """
    Config.ensure_log_dir()

    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO),
        format=Config.LOG_FORMAT,
        handlers=[
            logging.FileHandler(Config.LOG_FILE),
            logging.StreamHandler(sys.stderr)
        ]
    )

def main():
    """Main entry point of the application."""
    problems = Config.invalid_settings()
    if problems:
        for problem in problems:
            print(f"error: {problem}", file=sys.stderr)
        sys.exit(2)

    setup_logging()
    logger = logging.getLogger(__name__)
    try:
        cli = create_cli()
        logger.debug(f"Configuration: measure={Config.DEFAULT_MEASURE}, alpha={Config.DEFAULT_ALPHA}, "
                     f"workers={Config.MAX_WORKERS}")
        cli(prog_name='fuzzdep')

    except KeyboardInterrupt:
        logger.info("Stopped by user")
        sys.exit(130)
    except Exception as e:
        logger.error(f"Unexpected failure: {str(e)}", exc_info=True)
        sys.exit(2)

if __name__ == '__main__':
    main()

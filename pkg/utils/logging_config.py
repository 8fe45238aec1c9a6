import logging
import sys
from datetime import datetime
import os
from typing import Optional

import config


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None) -> logging.Logger:
    """Setup logging configuration for the revseq logger tree"""

    level = (level or config.LOG_LEVEL).upper()
    log_dir = config.LOG_DIR if log_dir is None else log_dir

    # Create formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    app_logger = logging.getLogger("revseq")
    app_logger.setLevel(level)

    # Handlers are installed once per process
    if getattr(app_logger, "_revseq_configured", False):
        return app_logger

    # Console goes to stderr; stdout carries netlists and tables
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    app_logger.addHandler(console_handler)

    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        log_filename = os.path.join(log_dir, f"revseq_{datetime.now().strftime('%Y%m%d')}.log")
        file_handler = logging.FileHandler(log_filename)
        file_handler.setFormatter(formatter)
        app_logger.addHandler(file_handler)

    app_logger.propagate = False
    app_logger._revseq_configured = True
    return app_logger

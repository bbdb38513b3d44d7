# -*- coding: utf-8 -*-
"""
This module sets up the logger for experiment runs.

Records go to the console, to a daily-rotated nsdecay.log in the configured
log directory and, when a run directory is given, to <run_dir>/run.log so that
every artifact directory carries the log of the run that produced it. Python
warnings (e.g. scipy's IntegrationWarning from the Beta quadratures) are routed
into the same handlers.
"""

import logging
import os
from logging.handlers import TimedRotatingFileHandler
from typing import Any, Dict, Optional

LOG_FORMAT = '[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
LOG_FILE_NAME = 'nsdecay.log'
RUN_LOG_NAME = 'run.log'
QUIET_LOGGERS = ('urllib3',)


def setup_logging(config: Dict[str, Any], run_dir: Optional[str] = None) -> str:
    """
    Configures the root logger from the 'logging' config section.

    Args:
        config (Dict[str, Any]): e.g. {'level': 'INFO', 'log_dir': './logs', 'max_days': 7}
        run_dir (Optional[str]): Artifact directory of the current run, if any.

    Returns:
        str: The path of the rotating log file.
    """
    log_level = str(config.get('level', 'INFO')).upper()
    log_dir = config.get('log_dir', './logs')
    max_days = int(config.get('max_days', 7))

    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(log_dir, LOG_FILE_NAME)

    logger = logging.getLogger()
    logger.setLevel(log_level)

    # repeated runs in one process must not stack handlers
    for handler in list(logger.handlers):
        handler.close()
        logger.removeHandler(handler)

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    handlers = [
        logging.StreamHandler(),
        TimedRotatingFileHandler(log_file, when='D', interval=1, backupCount=max_days, encoding='utf-8'),
    ]
    if run_dir:
        os.makedirs(run_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(run_dir, RUN_LOG_NAME), mode='w', encoding='utf-8'))
    for handler in handlers:
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    logging.captureWarnings(True)
    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(max(logging.WARNING, logger.level))

    logging.info(f"Log level set to {log_level}. Logging to console and {log_file}"
                 + (f" (run log in '{run_dir}')." if run_dir else "."))
    return log_file

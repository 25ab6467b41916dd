# utils/log_utils.py
import logging
import sys

import config


def setup_logging(level=None):
    """配置根日志记录器（只在程序入口调用一次）"""
    level = (level or config.LOG_LEVEL).upper()
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(config.LOG_FORMAT))
        root.addHandler(handler)
    root.setLevel(level)
    return root

"""
Utility functions for logging and helpers.
"""
import logging
import sys
import time
from contextlib import contextmanager


def setup_logging(level=logging.INFO):
    """
    Setup standard logging configuration.

    Args:
        level: Logging level (default: INFO)
    """
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stdout)
        ]
    )
    return logging.getLogger("theta_regulator")


logger = setup_logging()


@contextmanager
def timed(label: str):
    """
    Measure the wall-clock time of a block.

    Yields a dict whose "seconds" entry is filled when the block exits.
    """
    record = {"seconds": 0.0}
    start = time.perf_counter()
    try:
        yield record
    finally:
        record["seconds"] = time.perf_counter() - start
        logger.debug(f"⏱️  {label}: {record['seconds']:.3f}s")

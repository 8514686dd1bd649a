import logging
import sys

from gtcs.core.errors import InvalidParameterError

LOG_FORMAT = "%(asctime)s level=%(levelname)s logger=%(name)s %(message)s"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def configure_logging(level: str = "INFO") -> None:
    """Attach a single stderr handler to the gtcs logger tree.

    Calling it again replaces the previous handler with one bound to the
    current sys.stderr; the old stream is left untouched, it may be closed.

    Args:
        level: Logging level name (e.g. "INFO", "DEBUG")

    Raises:
        InvalidParameterError: If level is not a known level name
    """
    name = str(level).upper()
    if name not in LOG_LEVELS:
        raise InvalidParameterError(
            f"Unknown log level {level!r}; expected one of {', '.join(LOG_LEVELS)}"
        )

    logger = logging.getLogger("gtcs")
    logger.setLevel(name)

    for handler in list(logger.handlers):
        if getattr(handler, "_gtcs", False):
            logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._gtcs = True
    logger.addHandler(handler)

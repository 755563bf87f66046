import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path

FILE_FORMAT = "%(asctime)s %(levelname)s [%(process)d] %(name)s: %(message)s"
STDOUT_FORMAT = "%(levelname)s %(name)s: %(message)s"

# set once configure_logging has run in this process
_LOG_CONFIGURED = False


def _ensure_parent_dir(path: Path) -> None:
    """Create the parent directory of `path` if missing."""
    Path(path).expanduser().parent.mkdir(parents=True, exist_ok=True)


def _make_file_handler(
    log_file: str | Path,
    level: int,
    max_bytes: int,
    backup_count: int,
    **handler_kwargs,
) -> RotatingFileHandler:
    """
    Create a rotating file handler for run logs.

    Parameters
    ----------
    log_file : str | Path
        Target log file, its parent directory is created.
    level : int
        Level of the handler.
    max_bytes : int
        Size in bytes at which the file rotates.
    backup_count : int
        Number of rotated files kept.
    **handler_kwargs
        Forwarded to RotatingFileHandler (e.g. delay=True).

    Returns
    -------
    RotatingFileHandler
    """
    log_path = Path(log_file).expanduser().resolve()
    _ensure_parent_dir(log_path)
    handler = RotatingFileHandler(
        filename=str(log_path),
        maxBytes=max_bytes,
        backupCount=backup_count,
        encoding="utf-8",
        **handler_kwargs,
    )
    handler.setFormatter(logging.Formatter(FILE_FORMAT))
    handler.setLevel(level)
    return handler


def _is_stdout_handler(handler: logging.Handler) -> bool:
    return isinstance(handler, logging.StreamHandler) and not isinstance(
        handler, RotatingFileHandler
    )


def configure_logging(
    *,
    log_file: str | Path | None = None,
    level: int = logging.INFO,
    max_bytes: int = 5_000_000,
    backup_count: int = 5,
    stdout: bool = True,
    stdout_format: str | None = STDOUT_FORMAT,
    **handler_kwargs,
) -> logging.Logger:
    """
    Configure the root logger once per process.

    Repeated calls do not stack handlers: at most one stdout handler is added and
    exactly one RotatingFileHandler is kept, pointing to `log_file`. Calling with
    another `log_file` moves file logging to the new file, so each CLI run can log
    into its own output directory.

    Parameters
    ----------
    log_file : str | Path, optional
        Log file. None keeps file logging as it is.
    level : int, optional
        Level of the root logger and the new handlers, by default logging.INFO.
    max_bytes : int, optional
        Rotation size in bytes, by default 5_000_000.
    backup_count : int, optional
        Number of rotated files kept, by default 5.
    stdout : bool, optional
        Add a stdout handler if there is none, by default True.
    stdout_format : str | None, optional
        Format of the stdout handler. None uses the logging default.
    **handler_kwargs
        Forwarded to RotatingFileHandler (e.g. delay=True).

    Returns
    -------
    logging.Logger
        The root logger.
    """
    global _LOG_CONFIGURED
    root = logging.getLogger()
    root.setLevel(level)

    if stdout and not any(_is_stdout_handler(h) for h in root.handlers):
        stream_handler = logging.StreamHandler()
        stream_handler.setLevel(level)
        if stdout_format is not None:
            stream_handler.setFormatter(logging.Formatter(stdout_format))
        root.addHandler(stream_handler)

    if log_file is not None:
        target = Path(log_file).expanduser().resolve()
        keep = False
        for handler in [h for h in root.handlers if isinstance(h, RotatingFileHandler)]:
            if Path(handler.baseFilename).resolve() == target:
                keep = True
                continue
            root.removeHandler(handler)
            handler.close()

        if not keep:
            root.addHandler(
                _make_file_handler(
                    log_file=target,
                    level=level,
                    max_bytes=max_bytes,
                    backup_count=backup_count,
                    **handler_kwargs,
                )
            )

    _LOG_CONFIGURED = True
    return root


def get_logger(name: str | None = None) -> logging.Logger:
    """
    Return a logger without touching handlers. Modules use:
        logger = get_logger(__name__)
    """
    return logging.getLogger(name)


def init_logger(
    name: str, log_file: Path | None = None, debug: bool = False
) -> logging.Logger:
    """Initialise logging for an entry point (CLI, script) and return its logger.

    Parameters
    ----------
    name : str
        Logger name.
    log_file : Path | None, optional
        File to log to, by default None (stdout only).
    debug : bool, optional
        Log at debug instead of info level, by default False

    Returns
    -------
    logging.Logger
    """
    level = logging.DEBUG if debug else logging.INFO
    configure_logging(log_file=log_file, level=level, delay=True)
    return get_logger(name)

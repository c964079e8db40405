import logging
import os
from importlib.resources import as_file, files

from dotenv import load_dotenv

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_MAX_EXPLICIT_QUBITS = 26
DEFAULT_CHUNK_SIZE = 1 << 16
DEFAULT_SESSION_DIR = "./sessions"
DEFAULT_DATABASE_URL = "sqlite:///qsim_bench.db"
BACKENDS = ("process", "thread")


# 加载 .env 文件中的环境变量
def load_env() -> bool:
    home_env = os.path.expanduser("~/.qsim.env")
    if os.path.exists(home_env):
        load_dotenv(home_env)
        logger.info("Loaded .env from %s", home_env)
        return True
    # 包内自带的 .env（只读）
    try:
        with as_file(files("qsim").joinpath(".env")) as pkg_env:
            if os.path.exists(pkg_env):
                load_dotenv(pkg_env)
                logger.info("Loaded .env from package: %s", pkg_env)
                return True
    except Exception:
        pass
    logger.debug("No .env file found in any known location.")
    return False


def _get_int(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw, 0)
    except ValueError:
        raise ConfigError(f"{name}={raw!r} is not an integer") from None
    if value < minimum:
        raise ConfigError(f"{name}={value} must be >= {minimum}")
    return value


def get_max_explicit_qubits() -> int:
    return _get_int("QSIM_MAX_EXPLICIT_QUBITS", DEFAULT_MAX_EXPLICIT_QUBITS)


def get_default_chunk_size() -> int:
    return _get_int("QSIM_CHUNK_SIZE", DEFAULT_CHUNK_SIZE)


def get_default_workers() -> int:
    return _get_int("QSIM_WORKERS", os.cpu_count() or 1)


def get_default_backend() -> str:
    backend = os.getenv("QSIM_BACKEND", "process").strip().lower()
    if backend not in BACKENDS:
        raise ConfigError(f"QSIM_BACKEND={backend!r} must be one of {BACKENDS}")
    return backend


def get_session_dir() -> str:
    return os.getenv("QSIM_SESSION_DIR", DEFAULT_SESSION_DIR)

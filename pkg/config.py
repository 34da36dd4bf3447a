import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw, 0)
    except ValueError:
        raise ValueError(f"{name} must be an integer literal, got {raw!r}") from None


class Config:
    CACHE_DIR = os.getenv("AMALGAM_CACHE_DIR", ".amalgam_cache")
    LOG_FILE = os.getenv("AMALGAM_LOG_FILE", "delta.log")

    # Модуль GF(64) битовой маской, по умолчанию x^6 + x^4 + x^3 + x + 1
    MODULUS = _int_env("AMALGAM_MODULUS", "0b1011011")
    THREADS = _int_env("AMALGAM_THREADS", "1")

    # Выборка вершин для проверок "для всех z"
    SAMPLE_SIZE = _int_env("AMALGAM_SAMPLE_SIZE", "100")
    SEED = _int_env("AMALGAM_SEED", "0")

    if THREADS < 1:
        raise ValueError("AMALGAM_THREADS must be at least 1")
    if SAMPLE_SIZE < 0:
        raise ValueError("AMALGAM_SAMPLE_SIZE must be non-negative")

import logging
import os
from typing import Optional

from algebra.errors import CacheMismatchError
from cache.models import GraphHeader
from cache.storage import FORMAT_VERSION

from .construction import Construction

logger = logging.getLogger("delta_amalgam.guard")

DEFAULT_MISMATCH_HINT = "delete the cache file or rerun with --no-cache"


def ensure_cache_consistent(construction: Construction, *, hint: str = DEFAULT_MISMATCH_HINT) -> Optional[GraphHeader]:
    """Проверяет заголовок кэша графа до начала долгих вычислений.

    Возвращает заголовок пригодного файла кэша или None, если файла нет или кэш отключен.
    """
    storage = construction.storage
    if storage is None or not construction.use_cache:
        return None
    path = storage.path_for(construction.modulus)
    if not os.path.exists(path):
        return None
    with open(path, "rb") as f:
        header = storage.read_header(f)
    problems = []
    if header.version != FORMAT_VERSION:
        problems.append(f"format version {header.version}, expected {FORMAT_VERSION}")
    if header.modulus != construction.modulus:
        problems.append(f"modulus {header.modulus:#x}, expected {construction.modulus:#x}")
    if header.group_hash != construction.group_hash:
        problems.append("group data hash differs from the running build")
    if problems:
        raise CacheMismatchError(f"{path}: {'; '.join(problems)} ({hint})")
    logger.info(f"graph cache {path} is consistent")
    return header

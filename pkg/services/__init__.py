from .claims import registry, run_verification
from .construction import Construction
from .guard import ensure_cache_consistent
from .summary import format_build, format_report

__all__ = ['Construction', 'registry', 'run_verification', 'ensure_cache_consistent', 'format_build',
           'format_report']

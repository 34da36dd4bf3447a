from .errors import (
    CacheMismatchError,
    ConstructionError,
    ConventionError,
    DeltaError,
    FieldConfigurationError,
    GroupOrderExceeded,
)
from .gf64 import GF64
from .grp import SmallGroup

__all__ = ['GF64', 'SmallGroup', 'DeltaError', 'FieldConfigurationError', 'ConventionError',
           'GroupOrderExceeded', 'ConstructionError', 'CacheMismatchError']

"""Python bindings for the MQCIC core library.

The heavy lifting (rule DSL, loaders, answer extraction, metrics arithmetic)
lives in the compiled _mqcic module; this package re-exports it.
"""

from _mqcic import *  # noqa: F401,F403
from _mqcic import __doc__  # noqa: F401

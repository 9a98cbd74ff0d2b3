"""Goal-oriented adaptive quasicontinuum solver for a harmonic dislocation chain.

The heavy lifting lives in the compiled extension ``qcfk._core``; this package
re-exports its small functional surface.
"""

from qcfk._core import ConfigError, evaluate, partial_refine_widths, run

__all__ = ["ConfigError", "evaluate", "partial_refine_widths", "run"]

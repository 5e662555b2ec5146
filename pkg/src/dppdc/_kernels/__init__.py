"""Backend selection for the split-step hot kernel.

The midpoint nonlinear update runs once per grid point per z step and
dominates the non-FFT cost of a simulation.  A compiled Cython version is
used when available; otherwise the NumPy fallback is selected.  Set
``DPPDC_FORCE_FALLBACK=1`` to force the fallback (used by the equivalence
tests and the benchmark).
"""

import os

from . import fallback

HAVE_COMPILED = False

if os.environ.get("DPPDC_FORCE_FALLBACK", "0") != "1":
    try:
        from . import _nonlinear as _impl

        HAVE_COMPILED = True
    except ImportError:
        _impl = fallback
else:
    _impl = fallback

BACKEND = "cython" if HAVE_COMPILED else "numpy"

nl_midpoint_undepleted = _impl.nl_midpoint_undepleted
nl_midpoint_depleted = _impl.nl_midpoint_depleted

"""Select the DP backend at import time.

The compiled kernel is used when it was built; TDCORPUS_PURE=1 forces the
Python one. Both return identical results.
"""

import os

from . import _dp

python_dp_align = _dp.dp_align

try:
    from ._dpcore import dp_align as compiled_dp_align
except ImportError:
    compiled_dp_align = None

if compiled_dp_align is not None and not os.environ.get("TDCORPUS_PURE"):
    dp_align = compiled_dp_align
    BACKEND = "compiled"
else:
    dp_align = python_dp_align
    BACKEND = "python"

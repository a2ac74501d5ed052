"""Relative pose estimation for catadioptric omni-cameras.

Cylindrical panorama geometry, Fourier-Mellin window registration,
sinusoid fitting of the per-column motion field and pose extraction.
"""

from ._panopose import *  # noqa: F401,F403
from ._panopose import __doc__ as _core_doc  # noqa: F401

"""Numerical checks for negatively pinched warped-product metrics on cusp ends.

Submodules: ``jets`` (profile functions with two derivatives), ``metrics``,
``curvature``, ``verify``, ``volume``, ``gluing``, ``report`` and ``cli``.
"""

__version__ = "0.1.0"

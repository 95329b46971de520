"""Closed-form reference results used to pin the numerical machinery.

Nothing here is user API; these fixtures exist so that generator and
resolvent code cannot drift without a test noticing.
"""

from . import two_spin

__all__ = ["two_spin"]

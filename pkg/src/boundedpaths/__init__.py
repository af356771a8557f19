"""Random walks and diffusions conditioned on a capped local time.

The package computes the quantitative content of that conditioning from
both ends:

* exact dyadic probabilities, renewal analysis and excursion tables for
  the nearest-neighbour walk whose site visits are capped at ``L0``
  (:mod:`~boundedpaths.lattice`, :mod:`~boundedpaths.enumeration`,
  :mod:`~boundedpaths.regen`);
* the continuous-side constants -- the first zero of the Bessel function
  ``J0``, the mean square radius of the disk-confined diffusion and the
  limiting speed ``3 / (1 - 2 j0^-2)`` -- plus Monte-Carlo verification
  harnesses for the underlying diffusion facts
  (:mod:`~boundedpaths.bessel`, :mod:`~boundedpaths.diffusion`).

Everything stochastic is seeded and reproducible; everything exact is
dyadic/rational and bit-identical across runs.
"""

__version__ = "0.1.0"

from .errors import (
    AcceptanceTimeoutError,
    EnumerationBudgetError,
    QuadratureError,
    StepCollapseError,
)

__all__ = [
    "__version__",
    "AcceptanceTimeoutError",
    "EnumerationBudgetError",
    "QuadratureError",
    "StepCollapseError",
]

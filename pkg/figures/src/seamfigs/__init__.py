"""Figure regeneration from the simulator's CSV outputs.

Three standalone scripts, each reading documented CSV schemas and writing
one figure file:

* ``fig2a``: logical failure rate versus error rate, one curve per
  (family, L), from failure-sweep CSVs.
* ``fig2b``: below-threshold region in the (local error, Bell error)
  plane, with the small-modules line and a star on the headline ray,
  from a threshold-ray CSV.
* ``fig3``: Bell-pair rate versus communication-qubit count with cap
  corners and the reference-rate line, from the rate-curve CSV.

Rendering is strictly read-only over the CSVs: all modeling happens
upstream; these scripts only draw and annotate what they are given.
"""

__version__ = "0.1.0"

from .common import FigureSpec, SchemaError, read_csv_checked

__all__ = ["FigureSpec", "SchemaError", "read_csv_checked", "__version__"]

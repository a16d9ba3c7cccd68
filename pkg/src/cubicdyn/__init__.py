"""Computational dynamics of the cubic family lam z + b z^2 + z^3.

Modules:

* lamina   exact chord and lamination combinatorics under sigma_d
* cubic    the cubic family: orbits, basins, classification, center curves
* blaschke normalized quadratic Blaschke products
* brjuno   continued fractions and Brjuno sums
* rays     external rays and landing points
* atlas    parameter-slice classification and rendering
"""

from . import atlas, blaschke, brjuno, cubic, lamina, rays
from .atlas import Classification, SliceSpec, classify_point, render_slice
from .cubic import CubicParams

__all__ = ["atlas", "blaschke", "brjuno", "cubic", "lamina", "rays",
           "Classification", "CubicParams", "SliceSpec", "classify_point", "render_slice"]
__version__ = "0.1.0"

"""oritube: bi-directional origami-tube actuator toolkit.

Design checking, tube generation, crease-pattern unrolling, rigid-folding
kinematics, bar-and-hinge structural simulation, Ogden material fitting
and actuator test-data analysis, with STL/SVG/CSV export and a CLI.
"""

from .section import CrossSection, EdgeGroupReport, check_admissible, make_quad_section
from .tube import Crease, TubeGeometry, TubeSpec, generate_tube
from .folding import (
    FoldedState,
    enclosed_volume,
    extension_ratio,
    fold_configuration,
    fold_sweep,
)

__all__ = [
    "CrossSection",
    "EdgeGroupReport",
    "check_admissible",
    "make_quad_section",
    "Crease",
    "TubeGeometry",
    "TubeSpec",
    "generate_tube",
    "FoldedState",
    "fold_configuration",
    "fold_sweep",
    "enclosed_volume",
    "extension_ratio",
]

__version__ = "0.1.0"

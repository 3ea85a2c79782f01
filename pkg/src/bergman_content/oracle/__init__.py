"""Independent numerical checks of the closed forms."""

from .gram import (
    MAX_GRAM_CONDITION,
    Laurent,
    ProjectionResult,
    gram_project_annulus,
    gram_project_confocal,
    gram_project_disk,
    gram_project_laurent,
)
from .quad import quad_project_disk
from .torsion import TorsionSolveResult, fd_torsion

__all__ = [
    "MAX_GRAM_CONDITION",
    "Laurent",
    "ProjectionResult",
    "TorsionSolveResult",
    "fd_torsion",
    "gram_project_annulus",
    "gram_project_confocal",
    "gram_project_disk",
    "gram_project_laurent",
    "quad_project_disk",
]

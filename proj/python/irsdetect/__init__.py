"""Active-IRS target detection: NP detector statistics, joint beamforming
design, benchmark schemes and Monte Carlo validation."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    ConfigError,
    DegenerateDesign,
    InfeasibleProblem,
    SceneParams,
    SchemeId,
)

__version__ = "0.1.0"

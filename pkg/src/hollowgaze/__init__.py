"""Design compiler and percept simulator for concave-eye robot gaze."""

__version__ = "0.1.0"

from .exceptions import ConfigError, DesignError, GeometryError, HollowGazeError, ModelError  # noqa: E402
from .geometry import (  # noqa: E402
    ConePoint,
    ConeSpec,
    DiscSpec,
    PlanePoint,
    SectorPoint,
    cone_from_depth,
    cone_from_disc,
    depth_from_wedge,
    develop_point,
    lift_point,
    predistort_feature,
    project_point,
    visible_slant_limit,
    wedge_from_depth,
    wrap_point,
)
from .percept import (  # noqa: E402
    EyeGeometry,
    FusionParams,
    ObserverProfile,
    SceneConfig,
    ViewerPose,
    calibrate_fusion,
    percept,
    sweep_gaze_curve,
)
from .templates import TemplateConfig, build_templates  # noqa: E402
from .constraints import DeploymentScenario, check_design, check_scenario  # noqa: E402
from .estimator import GazePerceptEstimator  # noqa: E402

__all__ = [
    "ConfigError", "DesignError", "GeometryError", "HollowGazeError", "ModelError",
    "ConePoint", "ConeSpec", "DiscSpec", "PlanePoint", "SectorPoint",
    "cone_from_depth", "cone_from_disc", "depth_from_wedge", "develop_point", "lift_point",
    "predistort_feature", "project_point", "visible_slant_limit", "wedge_from_depth", "wrap_point",
    "EyeGeometry", "FusionParams", "ObserverProfile", "SceneConfig", "ViewerPose",
    "calibrate_fusion", "percept", "sweep_gaze_curve",
    "TemplateConfig", "build_templates",
    "DeploymentScenario", "check_design", "check_scenario",
    "GazePerceptEstimator",
]

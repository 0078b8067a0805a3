"""scikit-learn style wrapper around the percept model.

``fit`` calibrates the fusion parameters from the two categorisation rates;
``transform``/``predict``/``predict_proba`` evaluate viewer positions given as
an ``(n_samples, 3)`` array of per-eye coordinates in millimetres.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .percept import (
    EyeGeometry,
    FusionParams,
    ObserverProfile,
    SceneConfig,
    ViewerPose,
    calibrate_fusion,
    percept,
)

FEATURES = (
    "perceived_pupil_x_mm",
    "perceived_pupil_y_mm",
    "perceived_gaze_deg",
    "gaze_error_deg",
    "illusion_strength",
    "p_convex",
)


class GazePerceptEstimator(TransformerMixin, BaseEstimator):
    def __init__(
        self,
        depth_mm=35.0,
        disc_radius_mm=40.0,
        pupil_offset_mm=(0.0, 0.0),
        aperture_radius_mm=15.0,
        profile="adult",
        prior_scale=None,
        orientation="upright",
        lighting="from_above",
        face_context="full_face",
        binocular=True,
        half_width_deg=10.0,
        adult_rate=0.99,
        schizophrenia_rate=0.06,
        crossover_distance_mm=500.0,
        reference_distance_mm=1000.0,
        disparity_exponent=4.0,
    ):
        self.depth_mm = depth_mm
        self.disc_radius_mm = disc_radius_mm
        self.pupil_offset_mm = pupil_offset_mm
        self.aperture_radius_mm = aperture_radius_mm
        self.profile = profile
        self.prior_scale = prior_scale
        self.orientation = orientation
        self.lighting = lighting
        self.face_context = face_context
        self.binocular = binocular
        self.half_width_deg = half_width_deg
        self.adult_rate = adult_rate
        self.schizophrenia_rate = schizophrenia_rate
        self.crossover_distance_mm = crossover_distance_mm
        self.reference_distance_mm = reference_distance_mm
        self.disparity_exponent = disparity_exponent

    def fit(self, X=None, y=None):
        base = FusionParams(
            crossover_distance_mm=self.crossover_distance_mm,
            reference_distance_mm=self.reference_distance_mm,
            disparity_exponent=self.disparity_exponent,
        )
        self.fusion_params_, self.schizophrenia_scale_ = calibrate_fusion(
            self.adult_rate, self.schizophrenia_rate, base
        )
        self.eye_ = EyeGeometry.from_depth(
            self.depth_mm, self.disc_radius_mm, tuple(self.pupil_offset_mm), self.aperture_radius_mm
        )
        if self.prior_scale is not None:
            self.profile_ = ObserverProfile(self.profile, float(self.prior_scale))
        elif self.profile == "schizophrenia":
            self.profile_ = ObserverProfile("schizophrenia", self.schizophrenia_scale_)
        else:
            self.profile_ = ObserverProfile.preset(self.profile)
        self.scene_ = SceneConfig(self.orientation, self.lighting, self.face_context)
        if X is not None:
            self._validate(X)
        self.n_features_in_ = 3
        return self

    def _validate(self, X):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != 3:
            raise ValueError(f"expected viewer positions with 3 columns (x, y, z), got {X.shape[1]}")
        return X

    def _results(self, X):
        check_is_fitted(self, "fusion_params_")
        X = self._validate(X)
        return [
            percept(self.eye_, ViewerPose(tuple(row), bool(self.binocular)), self.profile_, self.scene_,
                    self.fusion_params_, self.half_width_deg)
            for row in X
        ]

    def transform(self, X):
        rows = [
            (r.perceived_pupil.x_mm, r.perceived_pupil.y_mm, r.perceived_gaze_angle_deg,
             r.gaze_error_deg, r.illusion_strength, r.p_convex)
            for r in self._results(X)
        ]
        return np.asarray(rows, dtype=np.float64).reshape(-1, len(FEATURES))

    def predict(self, X):
        """Mutual-gaze flag per viewer position."""
        return np.array([r.mutual_gaze for r in self._results(X)], dtype=bool)

    def predict_proba(self, X):
        """Columns: P(concave percept), P(convex percept)."""
        p = np.array([r.p_convex for r in self._results(X)], dtype=np.float64)
        return np.column_stack([1.0 - p, p])

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURES, dtype=object)

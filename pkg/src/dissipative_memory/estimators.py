"""scikit-learn compatible front ends.

``LyapunovEstimator`` fits the exponential divergence rate of a sampled
separation series; ``MemoryTrajectory`` turns a grid of times into the
per-time feature table of one evolving memory code.  Both follow the usual
estimator contract (constructor only stores parameters, learned attributes
end with an underscore, ``get_params``/``set_params`` via BaseEstimator).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import analytics
from .exceptions import InsufficientSamples, WindowContainsZeroCrossing
from .modes import MemoryCode, build_grid

__all__ = ["LyapunovEstimator", "MemoryTrajectory"]


def _as_times(X):
    X = np.asarray(X, dtype=float)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"expected a single time column, got shape {X.shape}")
        X = X[:, 0]
    elif X.ndim != 1:
        raise ValueError(f"expected 1-D times, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("times must be finite")
    return X


class LyapunovEstimator(RegressorMixin, BaseEstimator):
    """Least-squares slope of ``ln|y|`` against time.

    Parameters
    ----------
    window : tuple of float or None
        Closed time interval ``(t_lo, t_hi)`` to fit; ``None`` uses all samples.
    min_samples : int
        Minimum number of samples inside the window.

    Attributes
    ----------
    exponent_ : float
        Fitted divergence rate.
    intercept_ : float
        Fitted ``ln|y|`` at t = 0.
    residual_ : float
        Root-mean-square residual of the log-linear fit.
    window_ : tuple of float
        Time span of the samples actually used.
    n_samples_fit_ : int
    """

    def __init__(self, window=None, min_samples=8):
        self.window = window
        self.min_samples = min_samples

    def fit(self, X, y):
        t = _as_times(X)
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.shape != t.shape:
            raise ValueError("X and y must have the same number of samples")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.window is not None:
            lo, hi = self.window
            mask = (t >= lo) & (t <= hi)
            t, y = t[mask], y[mask]
        if t.size < max(2, self.min_samples):
            raise InsufficientSamples(
                f"{t.size} samples in the fit window, need at least {self.min_samples}"
            )
        if not np.all(np.isfinite(y)):
            raise ValueError("series contains non-finite values")
        sign = np.sign(y)
        if np.any(sign == 0) or np.any(sign != sign[0]):
            raise WindowContainsZeroCrossing(
                f"series vanishes or changes sign inside [{t[0]}, {t[-1]}]"
            )
        log_y = np.log(np.abs(y))
        design = np.column_stack([t, np.ones_like(t)])
        (slope, intercept), *_ = np.linalg.lstsq(design, log_y, rcond=None)
        resid = log_y - (slope * t + intercept)
        self.exponent_ = float(slope)
        self.intercept_ = float(intercept)
        self.residual_ = float(np.sqrt(np.mean(resid**2)))
        self.window_ = (float(t[0]), float(t[-1]))
        self.n_samples_fit_ = int(t.size)
        return self

    def predict(self, X):
        """Fitted ``ln|y|`` at the given times."""
        check_is_fitted(self, "exponent_")
        return self.exponent_ * _as_times(X) + self.intercept_

    def score(self, X, y, sample_weight=None):
        """R^2 of the log-linear model on ``ln|y|``."""
        y = np.log(np.abs(np.asarray(y, dtype=float).reshape(-1)))
        return super().score(X, y, sample_weight=sample_weight)


class MemoryTrajectory(TransformerMixin, BaseEstimator):
    """Evaluate one memory code along a grid of times.

    Parameters
    ----------
    thetas : sequence of float
        Squeeze angles at t = 0, one per mode.
    gammas : sequence of float
        Damping constants.
    omegas : sequence of float or None
        Frequencies; default 1.0 for every mode.
    energies : sequence of float or None
        Mode energies; default equal to ``omegas``.

    ``transform(times)`` returns an array with columns
    ``r_0, N_0, r_1, N_1, ..., S, overlap0, envelope``.
    """

    def __init__(self, thetas=(0.0,), gammas=(1.0,), omegas=None, energies=None):
        self.thetas = thetas
        self.gammas = gammas
        self.omegas = omegas
        self.energies = energies

    def fit(self, X=None, y=None):
        gammas = list(np.atleast_1d(np.asarray(self.gammas, dtype=float)))
        omegas = (
            [1.0] * len(gammas)
            if self.omegas is None
            else list(np.atleast_1d(np.asarray(self.omegas, dtype=float)))
        )
        energies = (
            [None] * len(gammas)
            if self.energies is None
            else list(np.atleast_1d(np.asarray(self.energies, dtype=float)))
        )
        specs = [
            (o, g) if e is None else (o, g, e) for o, g, e in zip(omegas, gammas, energies)
        ]
        grid = build_grid(specs)
        self.code_ = MemoryCode(grid, tuple(np.atleast_1d(np.asarray(self.thetas, float))))
        self.n_modes_ = len(grid)
        self.feature_names_ = feature_names(self.n_modes_)
        return self

    def transform(self, X):
        check_is_fitted(self, "code_")
        return trajectory_table(self.code_, _as_times(X))

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "code_")
        return np.asarray(self.feature_names_, dtype=object)


def feature_names(n_modes):
    names = []
    for k in range(n_modes):
        names += [f"r_{k}", f"N_{k}"]
    return names + ["S", "overlap0", "envelope"]


def trajectory_table(code: MemoryCode, times) -> np.ndarray:
    """Rows of ``r_k, N_k`` per mode followed by entropy, overlap with the
    t = 0 state and the exponential decay envelope."""
    times = np.asarray(times, dtype=float)
    m = len(code)
    out = np.empty((times.size, 2 * m + 3))
    initial = code.at(0.0)
    for i, t in enumerate(times):
        state = code.at(float(t))
        r = state.squeeze_parameters()
        out[i, 0 : 2 * m : 2] = r
        out[i, 1 : 2 * m : 2] = np.sinh(r) ** 2
        out[i, 2 * m] = analytics.entanglement_entropy(state)
        out[i, 2 * m + 1] = analytics.overlap(state, initial)
        out[i, 2 * m + 2] = analytics.decay_envelope(code, float(t))
    return out

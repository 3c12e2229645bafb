"""scikit-learn style wrappers around the analysis pipeline.

Inputs are graphs (anything :func:`check_graph` accepts) rather than
feature matrices, so these estimators plug into ``get_params`` /
``set_params`` / ``clone`` but not into numeric pipelines.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .accondition import NODE_COUNT, REGIMES, classify
from .dynamics import evolve, overlap_curves
from .maxcut import DEFAULT_ENUM_CAP, CostModel
from .spectrum import AnnealHamiltonian, gap_scan, lowest_two
from .validation import check_graph, check_graphs, check_positive, check_unit_interval

FEATURES = ("lambda0", "n_alpha_T", "deg_avg_loc", "deg_max_loc", "delta_H1", "s_lg")


class AcClassifier(ClassifierMixin, BaseEstimator):
    """Predict the avoided-crossing regime of each input graph.

    There is nothing to learn; ``fit`` only records the regime labels.
    ``transform`` returns the quantities the decision rests on, one row
    per graph in the order of :data:`FEATURES` (``s_lg`` is NaN unless AC).
    """

    def __init__(self, n_convention=NODE_COUNT, fixed_node=0, enum_cap=DEFAULT_ENUM_CAP,
                 validity=False):
        self.n_convention = n_convention
        self.fixed_node = fixed_node
        self.enum_cap = enum_cap
        self.validity = validity

    def _verdicts(self, X):
        return [classify(CostModel(g, self.fixed_node, self.enum_cap),
                         n_convention=self.n_convention, validity=self.validity)
                for g in check_graphs(X)]

    def fit(self, X, y=None):
        self.classes_ = np.array(REGIMES)
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        return np.array([v.regime for v in self._verdicts(X)])

    def verdicts(self, X):
        return self._verdicts(X)

    def transform(self, X):
        rows = []
        for v in self._verdicts(X):
            rows.append([v.lambda0, float(v.n_alpha[self.n_convention]), float(v.deg_avg_loc),
                         v.deg_max_loc, v.delta_H1, np.nan if v.s_lg is None else v.s_lg])
        return np.array(rows, dtype=float)


class GapScanner(BaseEstimator):
    """Fit = scan the gap of one graph; ``predict(s)`` returns the gap at given schedule points."""

    def __init__(self, grid_points=201, refine=True, s_tol=1e-4, rtol=1e-9, fixed_node=0,
                 seed=0):
        self.grid_points = grid_points
        self.refine = refine
        self.s_tol = s_tol
        self.rtol = rtol
        self.fixed_node = fixed_node
        self.seed = seed

    def fit(self, X, y=None):
        self.model_ = CostModel(check_graph(X), self.fixed_node)
        self.hamiltonian_ = AnnealHamiltonian(self.model_)
        self.scan_ = gap_scan(self.hamiltonian_, self.grid_points, refine=self.refine,
                              s_tol=self.s_tol, rtol=self.rtol, seed=self.seed)
        self.s_min_ = self.scan_.s_min
        self.gap_min_ = self.scan_.gap_min
        return self

    def predict(self, s):
        check_is_fitted(self, "scan_")
        return np.array([lowest_two(self.hamiltonian_, x, rtol=self.rtol, seed=self.seed).gap
                         for x in check_unit_interval(np.atleast_1d(s))])


class AnnealSimulator(TransformerMixin, BaseEstimator):
    """Fit = bind a graph; ``predict(t_max)`` gives the final ground-state probabilities.

    ``transform(s)`` returns the ``(g0, g1)`` overlap columns at the given schedule points.
    """

    def __init__(self, dt=None, fixed_node=0, seed=0):
        self.dt = dt
        self.fixed_node = fixed_node
        self.seed = seed

    def fit(self, X, y=None):
        self.model_ = CostModel(check_graph(X), self.fixed_node)
        self.hamiltonian_ = AnnealHamiltonian(self.model_)
        return self

    def evolve(self, t_max):
        check_is_fitted(self, "model_")
        return [evolve(self.model_, t, dt=self.dt, ham=self.hamiltonian_)
                for t in check_positive(np.atleast_1d(t_max))]

    def predict(self, t_max):
        return np.array([r.p_gs for r in self.evolve(t_max)])

    def transform(self, s):
        check_is_fitted(self, "model_")
        oc = overlap_curves(self.model_, check_unit_interval(np.atleast_1d(s)),
                            ham=self.hamiltonian_, seed=self.seed)
        return np.column_stack([oc.g0, oc.g1])

"""Batch interface in the scikit-learn estimator style.

Rows of ``X`` are coefficient tuples: 3 entries ``(a, b, c)`` for rank 3 or 6
entries ``(a, b, c, d, e, f)`` for rank 4, the upper triangle of a unitriangular
Gram matrix.  Nothing is learned; ``fit`` only validates and records the
labels seen, so the estimator composes with pipelines and ``get_params``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .classify import classify, s_parity
from .diophantine import markov_value, rank4_values
from .lattice import GramMatrix, SurfaceType

FEATURES = ("q1", "q2", "surface_star", "delta", "s_parity")


def validate_coeffs(X) -> list[tuple[int, ...]]:
    """Check ``X`` is a 2-d integer table with 3 or 6 columns; return exact rows."""
    arr = np.asarray(X, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got {arr.ndim} dimension(s)")
    if arr.shape[0] == 0:
        raise ValueError("empty input")
    if arr.shape[1] not in (3, 6):
        raise ValueError("rows must have 3 (rank 3) or 6 (rank 4) coefficients")
    rows = []
    for r in arr:
        vals = []
        for x in r:
            if isinstance(x, (bool, np.bool_)) or not isinstance(x, (int, np.integer)):
                if isinstance(x, (float, np.floating)) and float(x).is_integer():
                    x = int(x)
                else:
                    raise ValueError(f"non-integer coefficient {x!r}")
            vals.append(int(x))
        rows.append(tuple(vals))
    return rows


def _gram(t) -> GramMatrix:
    return GramMatrix.from_upper(t, 3 if len(t) == 3 else 4)


class GramClassifier(ClassifierMixin, TransformerMixin, BaseEstimator):
    """Canonical class labels (``predict``) and invariant features (``transform``).

    ``bfs_fallback`` and ``max_nodes`` are passed to the rank-4 classifier.
    """

    def __init__(self, bfs_fallback: bool = True, max_nodes: int = 200_000):
        self.bfs_fallback = bfs_fallback
        self.max_nodes = max_nodes

    def fit(self, X, y=None):
        rows = validate_coeffs(X)
        self.n_features_in_ = len(rows[0])
        self.classes_ = np.array(sorted({v.cls.label for v in self._verdicts(rows)}))
        return self

    def _verdicts(self, rows):
        kw = {} if len(rows[0]) == 3 else {"bfs_fallback": self.bfs_fallback,
                                           "max_nodes": self.max_nodes}
        return [classify(_gram(t), **kw) for t in rows]

    def _checked(self, X):
        check_is_fitted(self)
        rows = validate_coeffs(X)
        if len(rows[0]) != self.n_features_in_:
            raise ValueError(f"X has {len(rows[0])} features, expected {self.n_features_in_}")
        return rows

    def predict(self, X) -> np.ndarray:
        return np.array([v.cls.label for v in self._verdicts(self._checked(X))], dtype=object)

    def predict_witness(self, X) -> list:
        """The braid words carrying each row to its canonical representative."""
        return [v.witness for v in self._verdicts(self._checked(X))]

    def transform(self, X) -> np.ndarray:
        """Columns ``FEATURES``; ``delta`` is ``None`` off surface type."""
        out = []
        for t in self._checked(X):
            g = _gram(t)
            q = (markov_value(t), 0) if len(t) == 3 else rank4_values(t)
            kind = g.surface_type()
            delta = None if kind is SurfaceType.NOT_SURFACE else g.degree()
            out.append((*q, kind is SurfaceType.SURFACE_STAR, delta, s_parity(g)))
        return np.array(out, dtype=object)

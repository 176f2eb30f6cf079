"""scikit-learn style wrapper: circuits in, resource-count feature matrix out."""

from __future__ import annotations

import json

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .circuit import Circuit, CircuitFormatError, parse_circuit, validate
from .layout import layout
from .metrics import UNDEFINED, metrics_row
from .patterns import default_catalogue, load_catalogue

FEATURES = (
    "rows",
    "cols",
    "lattice",
    "clifford4",
    "cnot",
    "zrot4",
    "t4",
    "excised",
    "graph_state",
    "pauli",
    "pauli_per_non_pauli",
)


def check_circuits(X) -> list[Circuit]:
    """Coerce circuits, JSON dicts or JSON strings to validated :class:`Circuit` objects.

    Raises ValueError naming the offending position.
    """
    if isinstance(X, (str, bytes, dict, Circuit)):
        raise ValueError("expected a sequence of circuits, got a single one; wrap it in a list")
    out = []
    for i, item in enumerate(X):
        if isinstance(item, Circuit):
            c = item
        elif isinstance(item, dict):
            c = parse_circuit(json.dumps(item))
        elif isinstance(item, (str, bytes)):
            c = parse_circuit(item)
        else:
            raise ValueError(f"item {i}: cannot read a circuit from {type(item).__name__}")
        problems = validate(c)
        if problems:
            raise CircuitFormatError(f"item {i}: " + "; ".join(map(str, problems)))
        out.append(c)
    if not out:
        raise ValueError("no circuits given")
    return out


class CircuitEtcher(TransformerMixin, BaseEstimator):
    """Transpile circuits and report one row of resource counts per circuit.

    Undefined Pauli ratios (no non-Pauli qubits) come out as NaN.
    """

    def __init__(self, catalogue_path=None, input_state="0"):
        self.catalogue_path = catalogue_path
        self.input_state = input_state

    def fit(self, X, y=None):
        if self.input_state not in ("0", "+", "psi"):
            raise ValueError(f"input_state must be '0', '+' or 'psi', got {self.input_state!r}")
        self.catalogue_ = default_catalogue() if self.catalogue_path is None else load_catalogue(self.catalogue_path)
        check_circuits(X)
        self.n_features_out_ = len(FEATURES)
        return self

    def transform(self, X):
        check_is_fitted(self, "catalogue_")
        rows = []
        for c in check_circuits(X):
            r = metrics_row(c, layout(c, self.catalogue_, input_state=self.input_state))
            ratio = np.nan if r.ratio is UNDEFINED else float(r.ratio)
            rows.append([*r.specification, r.lattice, r.clifford4, r.cnot, r.zrot4, r.t4, r.excised,
                         r.graph_state, r.pauli, ratio])
        return np.asarray(rows, dtype=float)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURES, dtype=object)

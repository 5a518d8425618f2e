"""Graph operators as dense symmetric matrices, commutators, kernel generators."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .graph_core import Graph, connected_components

SYMMETRY_TOL = 1e-12
DEFAULT_COMMUTATION_TOL = 1e-10  # relative, double precision with O(n) accumulation


class OperatorKind(Enum):
    UNNORMALIZED_LAPLACIAN = "delta"
    NORMALIZED_LAPLACIAN = "delta_norm"
    RENORMALIZED_LAPLACIAN = "delta_tilde_norm"
    NORMALIZED_ADJACENCY = "a_norm"
    RENORMALIZED_ADJACENCY = "a_tilde_norm"
    CUSTOM = "custom"


LAPLACIAN_KINDS = (
    OperatorKind.UNNORMALIZED_LAPLACIAN,
    OperatorKind.NORMALIZED_LAPLACIAN,
    OperatorKind.RENORMALIZED_LAPLACIAN,
)


@dataclass(frozen=True, eq=False)
class GraphOperator:
    kind: OperatorKind
    matrix: np.ndarray
    graph_ref: Graph
    name: str | None = None  # label for CUSTOM operators

    def __post_init__(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("operator matrix must be square")
        if m.shape[0] != self.graph_ref.n_nodes:
            raise DomainError("operator size does not match the graph")
        scale = max(1.0, float(np.abs(m).max()))
        if float(np.abs(m - m.T).max()) > SYMMETRY_TOL * scale:
            raise DomainError("operator matrix is not symmetric")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class KernelGenerator:
    vector: np.ndarray  # unit norm
    operator_kind: OperatorKind


def _require_connected(g: Graph):
    if len(connected_components(g)) != 1:
        raise DomainError("operator construction requires a connected graph")


def build(g: Graph, kind: OperatorKind) -> GraphOperator:
    """Construct one of the standard operators for a connected graph.

    Delta = D - A; Delta_norm = I - D^{-1/2} A D^{-1/2};
    Delta~_norm = I - (D+I)^{-1/2} (A+I) (D+I)^{-1/2};
    A_norm = D^{-1/2} A D^{-1/2}; A~_norm = I - Delta~_norm.
    """
    _require_connected(g)
    a = g.adjacency_matrix()
    d = g.degree_vector()
    n = g.n_nodes
    eye = np.eye(n)

    if kind in (OperatorKind.NORMALIZED_LAPLACIAN, OperatorKind.NORMALIZED_ADJACENCY):
        if d.min() < 1:
            raise DomainError("normalized operators need minimum degree >= 1")

    if kind is OperatorKind.UNNORMALIZED_LAPLACIAN:
        m = np.diag(d) - a
    elif kind is OperatorKind.NORMALIZED_LAPLACIAN:
        s = 1.0 / np.sqrt(d)
        m = eye - s[:, None] * a * s[None, :]
    elif kind is OperatorKind.NORMALIZED_ADJACENCY:
        s = 1.0 / np.sqrt(d)
        m = s[:, None] * a * s[None, :]
    elif kind is OperatorKind.RENORMALIZED_LAPLACIAN:
        s = 1.0 / np.sqrt(d + 1.0)
        m = eye - s[:, None] * (a + eye) * s[None, :]
    elif kind is OperatorKind.RENORMALIZED_ADJACENCY:
        s = 1.0 / np.sqrt(d + 1.0)
        m = s[:, None] * (a + eye) * s[None, :]
    else:
        raise DomainError("build() handles only the standard operator kinds")
    return GraphOperator(kind=kind, matrix=m, graph_ref=g)


def custom_operator(name: str, matrix: np.ndarray, g: Graph) -> GraphOperator:
    """Wrap an arbitrary symmetric matrix as an operator on ``g``."""
    return GraphOperator(
        kind=OperatorKind.CUSTOM, matrix=np.asarray(matrix, dtype=float), graph_ref=g, name=name
    )


def commutator(p: GraphOperator, q: GraphOperator) -> np.ndarray:
    """PQ - QP for two operators on the same graph."""
    if p.graph_ref != q.graph_ref or p.n != q.n:
        raise DomainError("commutator requires operators on the same graph")
    return p.matrix @ q.matrix - q.matrix @ p.matrix


def is_commuting_pair(
    p: GraphOperator, q: GraphOperator, tol: float = DEFAULT_COMMUTATION_TOL
) -> bool:
    """True iff ||PQ - QP||_F <= tol * ||P||_F * ||Q||_F."""
    c = commutator(p, q)
    scale = float(np.linalg.norm(p.matrix) * np.linalg.norm(q.matrix))
    return float(np.linalg.norm(c)) <= tol * scale


def kernel_generator(g: Graph, kind: OperatorKind) -> KernelGenerator:
    """Unit vector spanning the kernel of the requested Laplacian on a connected graph."""
    _require_connected(g)
    if kind not in LAPLACIAN_KINDS:
        raise DomainError(f"{kind} is not a Laplacian kind")
    if kind is OperatorKind.UNNORMALIZED_LAPLACIAN:
        v = np.ones(g.n_nodes)
    elif kind is OperatorKind.NORMALIZED_LAPLACIAN:
        v = np.sqrt(g.degree_vector())
    else:
        v = np.sqrt(g.degree_vector() + 1.0)
    return KernelGenerator(vector=v / np.linalg.norm(v), operator_kind=kind)


def propagation_kernel_vector(g: Graph, kind: OperatorKind) -> np.ndarray:
    """Unit fixed-point direction of a propagation operator (eigenvalue-1 eigenvector)."""
    if kind is OperatorKind.NORMALIZED_ADJACENCY:
        return kernel_generator(g, OperatorKind.NORMALIZED_LAPLACIAN).vector
    if kind is OperatorKind.RENORMALIZED_ADJACENCY:
        return kernel_generator(g, OperatorKind.RENORMALIZED_LAPLACIAN).vector
    raise DomainError(f"{kind} is not a propagation operator")

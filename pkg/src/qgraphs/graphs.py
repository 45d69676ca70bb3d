"""Quantum graphs: rotation, Schur-product calculus and the predicate battery.

A quantum graph on X is stored canonically through its adjacency operator,
an N x N matrix on l2(X) in the orthonormal basis.  The edge projection is
a derived view obtained by "rotation":

* abstractly, the edge element is ``A_tilde = A F`` as an N x N coefficient
  matrix in the e_p (x) e_q basis (F is the duality/star matrix), and the
  inverse rotation is right multiplication by conj(F);
* concretely, for sets with matrix-unit bases the edge element materialises
  per ordered block pair (i, j) as the realignment
  ``M[(a,c),(b,d)] = A[(i,a,b),(j,c,d)] / sqrt(n_i n_j)``,
  which is an orthogonal projection exactly when A is Schur-idempotent and
  Schur-self-adjoint.

The Schur product is ``A . B = m (A (x) B) m^dag`` with unit J = eta eta^dag;
operators diagonal in a group-indexed basis use an O(N^2) convolution fast
path instead of the generic O(N^4) contraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    DENSE_LIMIT,
    Operator,
    QuantumSet,
    build_quantum_set,
)
from .errors import InvalidInput, ResourceLimit
from .kernels import gram_schmidt, hermitian_eigs, max_abs, scale_of, span_residual

__all__ = [
    "QuantumGraph",
    "EdgeProjection",
    "GraphReport",
    "schur_unit",
    "schur_product",
    "schur_star",
    "rotate_to_edge",
    "rotate_from_edge",
    "adjacency_to_projection",
    "projection_to_adjacency",
    "graph_report",
    "is_quantum_graph",
    "quantum_edge",
    "graph_from_subspace",
    "subspace_from_graph",
    "selfadjoint_basis",
    "check_bimodule",
    "edge_spectrum",
    "projection_is_positive",
]


@dataclass(eq=False)
class QuantumGraph:
    """A quantum set together with an adjacency operator on l2(X)."""

    set: QuantumSet
    adjacency: np.ndarray

    def __post_init__(self) -> None:
        self.adjacency = np.asarray(self.adjacency, dtype=complex)
        if self.adjacency.shape != (self.set.N, self.set.N):
            raise InvalidInput(
                f"adjacency has shape {self.adjacency.shape}, expected "
                f"({self.set.N}, {self.set.N})"
            )

    def adjacency_operator(self) -> Operator:
        return Operator(self.set, self.set, self.adjacency)


@dataclass(eq=False)
class EdgeProjection:
    """Edge element materialised per ordered block pair (matrix-unit sets)."""

    set: QuantumSet
    blocks: dict[tuple[int, int], np.ndarray]


@dataclass
class GraphReport:
    is_graph: bool
    is_undirected: bool
    loop_status: str  # "none" | "all" | "partial" | "mixed-weighted"
    is_simple: bool
    is_multigraph: Optional[bool]
    vertices: int
    edges: complex
    quantum_edges: Optional[int]
    regular_degree: Optional[float]

    def invariants(self) -> dict:
        """The fields preserved by quantum isomorphism.

        The number of quantum edges (rank of the edge projection) is
        deliberately excluded: it is basis data, not an invariant.
        """
        return {
            "is_graph": self.is_graph,
            "is_undirected": self.is_undirected,
            "loop_status": self.loop_status,
            "is_simple": self.is_simple,
            "is_multigraph": self.is_multigraph,
            "vertices": self.vertices,
            "edges": complex(self.edges),
            "regular_degree": self.regular_degree,
        }

    def as_dict(self) -> dict:
        d = self.invariants()
        d["quantum_edges"] = self.quantum_edges
        return d


# ---------------------------------------------------------------------------
# Schur calculus
# ---------------------------------------------------------------------------


def schur_unit(x: QuantumSet) -> np.ndarray:
    """J = eta eta^dag, the unit of the Schur product."""
    return np.outer(x.unit_vec, np.conj(x.unit_vec))


def _is_exactly_diagonal(a: np.ndarray) -> bool:
    return not np.any(a - np.diag(np.diag(a)))


def _unwrap_endomorphism(x: QuantumSet, a) -> np.ndarray:
    if isinstance(a, Operator):
        if not (a.domain.same_set(x) and a.codomain.same_set(x)):
            raise InvalidInput("operator does not live on the given quantum set")
        a = a.matrix
    return np.asarray(a, dtype=complex)


def _group_convolve(x: QuantumSet, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a . b)_kappa = (1/N) sum_{mu+nu=kappa} a_mu b_nu for diagonal operators."""
    table = x.group.addition_table()
    weights = np.outer(a, b).ravel()
    idx = table.ravel()
    re = np.bincount(idx, weights=weights.real, minlength=x.N)
    im = np.bincount(idx, weights=weights.imag, minlength=x.N)
    return (re + 1j * im) / x.N


def schur_product(x: QuantumSet, a, b) -> np.ndarray:
    """Schur product m (A (x) B) m^dag of two operators on l2(X).

    Accepts plain matrices or Operator objects (whose sets must match x).
    On classical sets this is exactly the Hadamard (entrywise) product;
    diagonal operators on group-indexed sets reduce to a convolution.  Both
    fast paths are exact and are cross-checked against the generic
    contraction in the test suite.
    """
    a = _unwrap_endomorphism(x, a)
    b = _unwrap_endomorphism(x, b)
    if a.shape != (x.N, x.N) or b.shape != (x.N, x.N):
        raise InvalidInput("schur_product: operands must be N x N on the same set")
    if x.blocks is not None and all(n == 1 for n in x.blocks):
        return a * b
    if x.group is not None and _is_exactly_diagonal(a) and _is_exactly_diagonal(b):
        return np.diag(_group_convolve(x, np.diag(a), np.diag(b)))
    if x.N > DENSE_LIMIT:
        raise ResourceLimit(
            f"generic Schur product refused for N={x.N} > {DENSE_LIMIT}; "
            "only diagonal operators on group-indexed sets are supported there"
        )
    m = x.dense_mult()
    t = np.einsum("prs,ru->pus", m, a)
    t = np.einsum("pus,sv->puv", t, b)
    return np.einsum("puv,quv->pq", t, np.conj(m))


def _monomial_form(f: np.ndarray):
    """(src, vals) with f[src[i], i] = vals[i] if f has one entry per column."""
    n = f.shape[0]
    nz = np.abs(f) > 0
    if not np.array_equal(nz.sum(axis=0), np.ones(n, dtype=np.int64)):
        return None
    if not np.array_equal(nz.sum(axis=1), np.ones(n, dtype=np.int64)):
        return None
    src = np.argmax(nz, axis=0)
    return src, f[src, np.arange(n)]


def schur_star(x: QuantumSet, a) -> np.ndarray:
    """The involution of the Schur C*-structure: F^T conj(A) conj(F).

    The star matrix of every set built here is monomial (one phase per
    row), in which case the triple product reduces to an exact O(N^2)
    permute-and-phase; a dense fallback covers the general case.
    """
    a = _unwrap_endomorphism(x, a)
    f = x.star_mat
    mono = _monomial_form(f)
    if mono is not None:
        src, vals = mono
        return (vals[:, None] * np.conj(vals)[None, :]) * np.conj(a)[np.ix_(src, src)]
    return f.T @ np.conj(a) @ np.conj(f)


# ---------------------------------------------------------------------------
# rotation between adjacency and edge projection
# ---------------------------------------------------------------------------


def rotate_to_edge(x: QuantumSet, a: np.ndarray) -> np.ndarray:
    """Edge element of A as coefficients on e_p (x) e_q (an N x N matrix)."""
    return np.asarray(a, dtype=complex) @ x.star_mat


def rotate_from_edge(x: QuantumSet, a_tilde: np.ndarray) -> np.ndarray:
    """Inverse rotation; round-trips with :func:`rotate_to_edge`."""
    return np.asarray(a_tilde, dtype=complex) @ np.conj(x.star_mat)


def _block_slices(x: QuantumSet) -> list[slice]:
    out = []
    offset = 0
    for n in x.blocks:
        out.append(slice(offset, offset + n * n))
        offset += n * n
    return out


def adjacency_to_projection(g: QuantumGraph) -> EdgeProjection:
    """Realign the adjacency into per-block-pair matrices.

    Block pair (i, j) acts on C^{n_i} (x) C^{n_j} with entries
    A[(i,a,b),(j,c,d)] / sqrt(n_i n_j) at row (a,c), column (b,d).
    """
    x = g.set
    if x.blocks is None:
        raise InvalidInput("edge-projection materialisation needs a matrix-unit basis")
    slices = _block_slices(x)
    blocks: dict[tuple[int, int], np.ndarray] = {}
    for i, ni in enumerate(x.blocks):
        for j, nj in enumerate(x.blocks):
            sub = g.adjacency[slices[i], slices[j]]
            four = sub.reshape(ni, ni, nj, nj)  # indices (a, b, c, d)
            mat = four.transpose(0, 2, 1, 3).reshape(ni * nj, ni * nj)
            blocks[(i, j)] = mat / math.sqrt(ni * nj)
    return EdgeProjection(set=x, blocks=blocks)


def projection_to_adjacency(p: EdgeProjection) -> QuantumGraph:
    x = p.set
    if x.blocks is None:
        raise InvalidInput("projection_to_adjacency needs a matrix-unit basis")
    a = np.zeros((x.N, x.N), dtype=complex)
    slices = _block_slices(x)
    for i, ni in enumerate(x.blocks):
        for j, nj in enumerate(x.blocks):
            mat = np.asarray(p.blocks[(i, j)], dtype=complex)
            if mat.shape != (ni * nj, ni * nj):
                raise InvalidInput(
                    f"projection block ({i},{j}) has shape {mat.shape}, expected "
                    f"({ni * nj}, {ni * nj})"
                )
            four = mat.reshape(ni, nj, ni, nj).transpose(0, 2, 1, 3)
            a[slices[i], slices[j]] = four.reshape(ni * ni, nj * nj) * math.sqrt(ni * nj)
    return QuantumGraph(set=x, adjacency=a)


def edge_spectrum(g: QuantumGraph, tol: Optional[float] = None) -> Optional[np.ndarray]:
    """Spectrum of the edge element, when cheaply computable.

    Matrix-unit sets: eigenvalues of the realigned blocks.  Group-indexed
    sets with diagonal adjacency: inverse Fourier transform of the diagonal
    (the Schur calculus restricted to diagonals is the convolution algebra,
    so these are exactly the spectral values).  Returns None otherwise.
    """
    x = g.set
    tol = x.tol if tol is None else tol
    if x.blocks is not None:
        proj = adjacency_to_projection(g)
        lams = []
        for mat in proj.blocks.values():
            herm = 0.5 * (mat + mat.conj().T)
            if max_abs(herm - mat) > tol * scale_of(mat):
                return None
            lam, _ = hermitian_eigs(herm, tol=tol)
            lams.append(lam)
        return np.sort(np.concatenate(lams))
    if x.group is not None and _is_exactly_diagonal(g.adjacency):
        fourier = x.group.fourier_matrix()
        vals = fourier @ np.diag(g.adjacency) / x.N
        if max_abs(np.asarray(vals).imag) > tol * scale_of(g.adjacency):
            return None
        return np.sort(vals.real)
    return None


def projection_is_positive(g: QuantumGraph, tol: Optional[float] = None) -> bool:
    """Whether the edge element of ``g`` is a positive element (weighted graph)."""
    x = g.set
    tol = x.tol if tol is None else tol
    spec = edge_spectrum(g, tol=tol)
    if spec is None:
        raise ResourceLimit("edge-element spectrum not available for this graph")
    if spec.size == 0:
        return True
    return bool(spec[0] >= -tol * scale_of(g.adjacency))


# ---------------------------------------------------------------------------
# predicate battery
# ---------------------------------------------------------------------------


def is_quantum_graph(g: QuantumGraph, tol: Optional[float] = None) -> bool:
    """A . A = A and A = A* in the Schur calculus."""
    x = g.set
    tol = x.tol if tol is None else tol
    a = g.adjacency
    scale = scale_of(a)
    return (
        max_abs(schur_product(x, a, a) - a) <= tol * scale
        and max_abs(schur_star(x, a) - a) <= tol * scale
    )


def _count_quantum_edges(g: QuantumGraph, tol: float) -> Optional[int]:
    if g.set.blocks is None:
        return None
    proj = adjacency_to_projection(g)
    total = 0
    for mat in proj.blocks.values():
        herm = 0.5 * (mat + mat.conj().T)
        if max_abs(herm - mat) > tol * scale_of(mat):
            return None
        lam, _ = hermitian_eigs(herm, tol=tol)
        total += int(np.sum(lam > 0.5))
    return total


def graph_report(g: QuantumGraph, tol: Optional[float] = None) -> GraphReport:
    """Evaluate the full predicate battery on ``g``."""
    x = g.set
    tol = x.tol if tol is None else tol
    a = g.adjacency
    scale = scale_of(a)
    eye = np.eye(x.N, dtype=complex)

    graph_flag = is_quantum_graph(g, tol=tol)
    undirected = max_abs(a - a.conj().T) <= tol * scale

    loops_left = schur_product(x, a, eye)
    loops_right = schur_product(x, eye, a)
    no_loops = max_abs(loops_left) <= tol * scale and max_abs(loops_right) <= tol * scale
    all_loops = (
        max_abs(loops_left - eye) <= tol * scale
        and max_abs(loops_right - eye) <= tol * scale
    )
    if no_loops:
        loop_status = "none"
    elif all_loops:
        loop_status = "all"
    elif graph_flag:
        loop_status = "partial"
    else:
        loop_status = "mixed-weighted"

    vertices = int(round(np.vdot(x.unit_vec, x.unit_vec).real))
    edges = complex(np.vdot(x.unit_vec, a @ x.unit_vec))

    eta_row = np.conj(x.unit_vec) @ a  # eta^dag A
    degree = edges / vertices
    if max_abs(eta_row - degree * np.conj(x.unit_vec)) <= tol * max(scale, 1.0):
        regular: Optional[float] = float(degree.real)
    else:
        regular = None

    spec = edge_spectrum(g, tol=tol)
    if spec is None:
        multigraph: Optional[bool] = None
    else:
        multigraph = bool(np.all(np.abs(spec - np.round(spec)) <= tol * max(scale, 1.0))
                          and np.all(spec >= -tol * max(scale, 1.0)))

    return GraphReport(
        is_graph=graph_flag,
        is_undirected=undirected,
        loop_status=loop_status,
        is_simple=graph_flag and undirected and loop_status == "none",
        is_multigraph=multigraph,
        vertices=vertices,
        edges=edges,
        quantum_edges=_count_quantum_edges(g, tol),
        regular_degree=regular,
    )


# ---------------------------------------------------------------------------
# quantum edges and operator-space form on M_n
# ---------------------------------------------------------------------------


def quantum_edge(n: int, xi: np.ndarray, tol: float = 1e-9) -> QuantumGraph:
    """The quantum edge on M_n attached to a nonzero matrix xi.

    Adjacency P[(i,j),(k,l)] = n / Tr(xi^dag xi) * xi[i,k] conj(xi[j,l]);
    it carries no loop iff Tr xi = 0 and is symmetric iff xi is
    proportional to xi^dag.
    """
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (n, n):
        raise InvalidInput(f"xi has shape {xi.shape}, expected ({n}, {n})")
    norm = np.trace(xi.conj().T @ xi).real
    if norm <= 0.0:
        raise InvalidInput("quantum_edge: xi must be nonzero")
    x = build_quantum_set([n], tol=tol)
    p = (n / norm) * np.einsum("ik,jl->ijkl", xi, np.conj(xi)).reshape(n * n, n * n)
    return QuantumGraph(set=x, adjacency=p)


def graph_from_subspace(
    n: int, basis: Sequence[np.ndarray], tol: float = 1e-9
) -> QuantumGraph:
    """Graph on M_n with operator space spanned by ``basis``.

    The basis is orthonormalised under <xi, zeta> = Tr(xi^dag zeta) and
    rescaled to Tr(xi^dag xi) = n, then A = sum_s xi_s (x) xi_s^*; the
    result depends only on the span.
    """
    mats = [np.asarray(b, dtype=complex) for b in basis]
    for b in mats:
        if b.shape != (n, n):
            raise InvalidInput(f"subspace basis matrix has shape {b.shape}, expected ({n}, {n})")
    ortho = gram_schmidt(mats, tol=tol)
    if len(ortho) != len(mats):
        raise InvalidInput("graph_from_subspace: basis is linearly dependent")
    x = build_quantum_set([n], tol=tol)
    a = np.zeros((n * n, n * n), dtype=complex)
    for xi in ortho:
        xi = xi * math.sqrt(n)  # Tr(xi^dag xi) = n
        a += np.einsum("ik,jl->ijkl", xi, np.conj(xi)).reshape(n * n, n * n)
    return QuantumGraph(set=x, adjacency=a)


def subspace_from_graph(
    g: QuantumGraph, tol: Optional[float] = None
) -> dict[tuple[int, int], list[np.ndarray]]:
    """Recover the block-pair operator spaces V_ij from a quantum graph.

    Eigenvectors of each realigned block with eigenvalue above the 0.5
    rank threshold are reshaped to n_i x n_j matrices, rescaled so that
    Tr(xi^dag xi) = sqrt(n_i n_j).
    """
    x = g.set
    tol = x.tol if tol is None else tol
    if not is_quantum_graph(g, tol=tol):
        raise InvalidInput("subspace_from_graph expects a quantum graph")
    proj = adjacency_to_projection(g)
    out: dict[tuple[int, int], list[np.ndarray]] = {}
    for (i, j), mat in proj.blocks.items():
        ni, nj = x.blocks[i], x.blocks[j]
        lam, vecs = hermitian_eigs(0.5 * (mat + mat.conj().T), tol=tol)
        kept = []
        for k in range(lam.size):
            if lam[k] > 0.5:
                xi = vecs[:, k].reshape(ni, nj) * (ni * nj) ** 0.25
                kept.append(xi)
        out[(i, j)] = kept
    return out


def selfadjoint_basis(
    basis: Sequence[np.ndarray], tol: float = 1e-9
) -> list[np.ndarray]:
    """Self-adjoint basis of a dagger-closed span of matrices.

    Takes real and imaginary parts (xi + xi^dag)/2 and i(xi^dag - xi)/2 of
    the given spanning family and keeps a maximal independent subfamily;
    raises InvalidInput if the span is not closed under dagger.
    """
    mats = [np.asarray(b, dtype=complex) for b in basis]
    ortho = gram_schmidt(mats, tol=tol)
    for b in mats:
        if span_residual(b.conj().T, ortho) > tol * scale_of(b):
            raise InvalidInput("selfadjoint_basis: span is not closed under dagger")
    chosen: list[np.ndarray] = []
    chosen_ortho: list[np.ndarray] = []
    for b in mats:
        for cand in (0.5 * (b + b.conj().T), 0.5j * (b.conj().T - b)):
            if not chosen_ortho:
                nrm = math.sqrt(abs(np.vdot(cand, cand).real))
                if nrm > tol * scale_of(cand):
                    chosen.append(cand)
                    chosen_ortho = gram_schmidt(chosen, tol=tol)
                continue
            if span_residual(cand, chosen_ortho) > tol * max(scale_of(cand), 1.0):
                chosen.append(cand)
                chosen_ortho = gram_schmidt(chosen, tol=tol)
    if len(chosen) != len(ortho):
        raise InvalidInput("selfadjoint_basis: failed to span with self-adjoint parts")
    return chosen


def check_bimodule(
    x: QuantumSet, basis: Sequence[np.ndarray], tol: Optional[float] = None
) -> bool:
    """Closure of an operator space under the commutant bimodule action.

    The commutant of C(X) acting on C^{n_1} + ... + C^{n_a} is spanned by
    the block projections; V is a bimodule over it iff compressing every
    basis element to any block pair stays inside the span.
    """
    tol = x.tol if tol is None else tol
    if x.blocks is None:
        raise InvalidInput("check_bimodule needs a matrix-unit basis")
    small = sum(x.blocks)
    mats = [np.asarray(b, dtype=complex) for b in basis]
    for b in mats:
        if b.shape != (small, small):
            raise InvalidInput(f"bimodule basis matrix has shape {b.shape}, expected ({small}, {small})")
    ortho = gram_schmidt(mats, tol=tol)
    bounds = np.cumsum([0] + list(x.blocks))
    for b in mats:
        for i in range(len(x.blocks)):
            for j in range(len(x.blocks)):
                comp = np.zeros_like(b)
                comp[bounds[i]:bounds[i + 1], bounds[j]:bounds[j + 1]] = (
                    b[bounds[i]:bounds[i + 1], bounds[j]:bounds[j + 1]]
                )
                if span_residual(comp, ortho) > tol * max(scale_of(b), 1.0):
                    return False
    return True

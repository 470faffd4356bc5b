"""POVMs, classical post-processing, and coarse-grained state estimates.

A measurement here is a finite POVM. Fine-grained measurements (rank-1
projective) are the informationally sharpest ones; applying a
column-stochastic matrix to the outcome labels coarsens them. The
coarse-grained state is the maximum-ignorance estimate of the input state
consistent with the observed outcome statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePovm, DimensionMismatch, PreconditionFailed, ZeroMass
from .linalg import adjoint, as_matrix, max_abs, require_hermitian
from .states import DensityMatrix, Hamiltonian, RandomSource

ELEMENT_PSD_TOL = -1e-10
COMPLETENESS_TOL = 1e-9
ZERO_ELEMENT_TOL = 1e-12
COLUMN_SUM_TOL = 1e-12
ROW_SUM_TOL = 1e-10
UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Column-stochastic post-processing map: entry (i, j) is the probability
    of reporting outcome i given raw outcome j. The bistochastic flag is set
    automatically when every row also sums to 1."""

    entries: np.ndarray
    bistochastic: bool = field(init=False)

    def __post_init__(self):
        m = as_matrix(self.entries, dtype=float)
        if m.shape[0] < 1 or m.shape[1] < 1:
            raise DimensionMismatch(f"stochastic matrix must be at least 1x1, got {m.shape}")
        if float(np.min(m)) < 0.0:
            raise ValueError(f"stochastic matrix has negative entry {float(np.min(m)):.3e}")
        col_defect = max_abs(m.sum(axis=0) - 1.0)
        if col_defect > COLUMN_SUM_TOL:
            raise ValueError(f"column sums deviate from 1 by {col_defect:.3e} > {COLUMN_SUM_TOL:.0e}")
        row_defect = max_abs(m.sum(axis=1) - 1.0)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "bistochastic", bool(row_defect <= ROW_SUM_TOL))

    @property
    def n_out(self) -> int:
        return self.entries.shape[0]

    @property
    def n_in(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def identity(cls, n: int) -> "StochasticMatrix":
        return cls(np.eye(n))


@dataclass(frozen=True, eq=False)
class Povm:
    """Positive operators summing to the identity.

    ``labels`` track outcome identity through relabelings: post-processing
    that drops all-zero outcomes records which of the original indices
    survive. Zero elements are forbidden because coarse-grained states divide
    by each element's volume (trace).
    """

    elements: tuple
    labels: tuple = None

    def __post_init__(self):
        mats = tuple(as_matrix(e) for e in self.elements)
        if not mats:
            raise DegeneratePovm("a POVM needs at least one element")
        d = mats[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for k, e in enumerate(mats):
            if e.shape != (d, d):
                raise DimensionMismatch(f"element {k} has shape {e.shape}, expected {(d, d)}")
            require_hermitian(e, what=f"POVM element {k}")
            lo = float(np.min(np.linalg.eigvalsh((e + adjoint(e)) / 2.0)))
            if lo < ELEMENT_PSD_TOL:
                raise ValueError(f"POVM element {k} has eigenvalue {lo:.3e} below {ELEMENT_PSD_TOL:.0e}")
            if float(np.trace(e).real) < ZERO_ELEMENT_TOL:
                raise ValueError(f"POVM element {k} is (numerically) the zero operator")
            total += e
        defect = max_abs(total - np.eye(d))
        if defect > COMPLETENESS_TOL:
            raise ValueError(f"POVM elements sum to identity within {defect:.3e} > {COMPLETENESS_TOL:.0e}")
        labels = self.labels if self.labels is not None else tuple(range(1, len(mats) + 1))
        if len(labels) != len(mats):
            raise ValueError(f"{len(labels)} labels for {len(mats)} elements")
        object.__setattr__(self, "elements", mats)
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.elements)

    @property
    def volumes(self) -> np.ndarray:
        """Trace of each element: the dimension-weight of its maximum-ignorance ensemble."""
        return np.array([float(np.trace(e).real) for e in self.elements])

    def is_fine_grained(self, tol: float = 1e-9) -> bool:
        """True when every element is (numerically) a rank-1 projector."""
        if self.n_outcomes != self.dim:
            return False
        for e in self.elements:
            w = np.linalg.eigvalsh((e + adjoint(e)) / 2.0)
            if abs(w[-1] - 1.0) > tol or max_abs(w[:-1]) > tol:
                return False
        return True


@dataclass(frozen=True, eq=False)
class FineGrainedMeasurement(Povm):
    """Rank-1 projective measurement onto the columns of an orthonormal basis."""

    basis: np.ndarray = field(default=None, kw_only=True)

    def __post_init__(self):
        b = as_matrix(self.basis)
        if b.shape[0] != b.shape[1]:
            raise DimensionMismatch(f"basis must be square, got {b.shape}")
        defect = max_abs(adjoint(b) @ b - np.eye(b.shape[0]))
        if defect > UNITARY_TOL:
            raise ValueError(f"basis is not unitary: max |B^dag B - I| = {defect:.3e} > {UNITARY_TOL:.0e}")
        object.__setattr__(self, "basis", b)
        super().__post_init__()

    @classmethod
    def from_basis(cls, basis) -> "FineGrainedMeasurement":
        b = as_matrix(basis)
        projectors = tuple(np.outer(b[:, k], np.conj(b[:, k])) for k in range(b.shape[1]))
        return cls(elements=projectors, basis=b)


def computational_basis(d: int) -> FineGrainedMeasurement:
    return FineGrainedMeasurement.from_basis(np.eye(d))


def random_column_stochastic(n_out: int, n_in: int, rng: RandomSource, identity: bool = False) -> StochasticMatrix:
    """Sample each column uniformly on the probability simplex (normalized
    exponential variates). ``identity=True`` short-circuits to the trivial
    post-processing, which requires n_out == n_in."""
    if n_out < 1 or n_in < 1:
        raise DimensionMismatch(f"stochastic matrix sizes must be positive, got {n_out}x{n_in}")
    if identity:
        if n_out != n_in:
            raise DimensionMismatch(f"identity post-processing needs n_out == n_in, got {n_out}x{n_in}")
        return StochasticMatrix.identity(n_out)
    cols = rng.exponential((n_out, n_in))
    return StochasticMatrix(cols / cols.sum(axis=0))


def post_process(p: Povm, d: StochasticMatrix) -> Povm:
    """Coarsen a measurement: output element i is sum_j D[i, j] * P_j.

    Outcomes whose operator vanishes (an all-zero row of D) are dropped; the
    surviving original outcome indices are recorded in the result's labels.
    """
    if d.n_in != p.n_outcomes:
        raise DimensionMismatch(f"post-processing expects {d.n_in} inputs but measurement has {p.n_outcomes} outcomes")
    dim = p.dim
    stacked = np.stack(p.elements)
    mixed = np.einsum("ij,jkl->ikl", d.entries, stacked)
    kept_elements = []
    kept_labels = []
    for i in range(d.n_out):
        e = (mixed[i] + adjoint(mixed[i])) / 2.0
        if float(np.trace(e).real) < ZERO_ELEMENT_TOL:
            continue
        kept_elements.append(e)
        kept_labels.append(i + 1)
    if not kept_elements:
        raise DegeneratePovm("post-processing produced only zero outcomes")
    return Povm(elements=tuple(kept_elements), labels=tuple(kept_labels))


def energy_incoherent(h: Hamiltonian, q: StochasticMatrix) -> Povm:
    """Measurement diagonal in the energy eigenbasis: element i is
    sum_j q[i, j] |E_j><E_j| built from the Hamiltonian's tie-broken basis."""
    if q.n_in != h.dim:
        raise DimensionMismatch(f"post-processing expects {q.n_in} energy levels but Hamiltonian has {h.dim}")
    v = h.eigenbasis
    elements = []
    for i in range(q.n_out):
        e = (v * q.entries[i]) @ adjoint(v)
        elements.append((e + adjoint(e)) / 2.0)
    return Povm(elements=tuple(elements))


def outcome_distribution(rho: DensityMatrix, m: Povm) -> np.ndarray:
    """Born probabilities p_i = tr(rho M_i), clipped of benign negative roundoff."""
    if rho.dim != m.dim:
        raise DimensionMismatch(f"state is {rho.dim}-dimensional but measurement is {m.dim}-dimensional")
    p = np.array([float(np.trace(rho.op @ e).real) for e in m.elements])
    if float(np.min(p)) < -1e-12:
        raise ValueError(f"outcome probability {float(np.min(p)):.3e} is negative beyond roundoff")
    p = np.clip(p, 0.0, None)
    if abs(float(p.sum()) - 1.0) > 1e-10:
        raise ValueError(f"outcome probabilities sum to {float(p.sum())!r}, expected 1")
    return p


def coarse_grained_state(rho: DensityMatrix, m: Povm) -> DensityMatrix:
    """Maximum-ignorance estimate sum_i p_i M_i / V_i of rho given one round
    of outcome statistics from m."""
    if rho.dim != m.dim:
        raise DimensionMismatch(f"state is {rho.dim}-dimensional but measurement is {m.dim}-dimensional")
    out = np.zeros((rho.dim, rho.dim), dtype=complex)
    for e in m.elements:
        p_i = float(np.trace(rho.op @ e).real)
        v_i = float(np.trace(e).real)
        out += (p_i / v_i) * e
    return DensityMatrix((out + adjoint(out)) / 2.0)


def refine_distribution(p: Povm, d: StochasticMatrix) -> StochasticMatrix:
    """Conditional distribution of the raw outcome given the coarse one.

    Column i holds q(j|i) = D[i, j] V_j / sum_k D[i, k] V_k, the probability
    that coarse outcome i originated from raw outcome j. Requires a
    fine-grained parent measurement (all volumes 1).
    """
    if d.n_in != p.n_outcomes:
        raise DimensionMismatch(f"post-processing expects {d.n_in} inputs but measurement has {p.n_outcomes} outcomes")
    vols = p.volumes
    if max_abs(vols - 1.0) > 1e-9 or not p.is_fine_grained():
        raise PreconditionFailed("refinement is defined for fine-grained (rank-1 projective) measurements")
    weighted = d.entries * vols[np.newaxis, :]
    mass = weighted.sum(axis=1)
    if float(np.min(mass)) < 1e-15:
        bad = int(np.argmin(mass))
        raise ZeroMass(f"outcome {bad} has total mass {float(mass[bad]):.3e}; refinement undefined")
    return StochasticMatrix((weighted / mass[:, np.newaxis]).T)


__all__ = [
    "FineGrainedMeasurement",
    "Povm",
    "StochasticMatrix",
    "coarse_grained_state",
    "computational_basis",
    "energy_incoherent",
    "outcome_distribution",
    "post_process",
    "random_column_stochastic",
    "refine_distribution",
]

"""Work quantities: passive energy, ergotropy, and their variants.

Ergotropy is the maximum work a cyclic unitary can extract from a state:
mean energy minus passive energy. The minimization over unitaries has a
closed form (ascending energies paired with descending populations), so no
optimizer appears here; a Monte-Carlo minimizer exists only in the tests as
an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .linalg import adjoint, eig_hermitian
from .measurement import Povm, coarse_grained_state
from .states import DensityMatrix, Hamiltonian, dephase, mean_energy

DECOMPOSITION_TOL = 1e-10
NONNEGATIVITY_TOL = 1e-10


@dataclass(frozen=True)
class WorkReport:
    """All work quantities for one (state, Hamiltonian, measurement) instance.

    ``observational`` is None when no measurement was supplied. Energies are
    in the Hamiltonian's units.
    """

    dimension: int
    mean_energy: float
    passive_energy: float
    ergotropy: float
    incoherent: float
    coherent: float
    observational: float | None = None

    def __post_init__(self):
        if abs(self.ergotropy - (self.mean_energy - self.passive_energy)) > 1e-12:
            raise ValueError("ergotropy must equal mean energy minus passive energy")
        if abs(self.ergotropy - (self.incoherent + self.coherent)) > DECOMPOSITION_TOL:
            raise ValueError("ergotropy must split into incoherent plus coherent parts")
        if self.ergotropy < -NONNEGATIVITY_TOL:
            raise ValueError(f"ergotropy is negative: {self.ergotropy!r}")

    def to_json_dict(self) -> dict:
        return {
            "d": self.dimension,
            "mean": self.mean_energy,
            "passive": self.passive_energy,
            "ergotropy": self.ergotropy,
            "incoherent": self.incoherent,
            "coherent": self.coherent,
            "observational": self.observational,
        }

    CSV_HEADER = "d,mean,passive,ergotropy,incoherent,coherent,observational"

    def to_csv_row(self) -> str:
        fields = [str(self.dimension)]
        fields += [repr(float(x)) for x in (self.mean_energy, self.passive_energy, self.ergotropy,
                                            self.incoherent, self.coherent)]
        fields.append("" if self.observational is None else repr(float(self.observational)))
        return ",".join(fields)


def _descending(values: np.ndarray) -> np.ndarray:
    """Descending stable sort: ties keep their ascending-order position."""
    order = np.argsort(-values, kind="stable")
    return values[order], order


def passive_energy_of_spectrum(h: Hamiltonian, spectrum) -> float:
    """Minimal mean energy over all states with the given spectrum: ascending
    energies paired with descending populations."""
    x = np.asarray(spectrum, dtype=float)
    if x.shape != (h.dim,):
        raise DimensionMismatch(f"spectrum has length {x.shape}, Hamiltonian dimension is {h.dim}")
    desc, _ = _descending(x)
    return float(h.energies @ desc)


def passive_energy(rho: DensityMatrix, h: Hamiltonian) -> float:
    if rho.dim != h.dim:
        raise DimensionMismatch(f"state is {rho.dim}-dimensional but Hamiltonian is {h.dim}-dimensional")
    return passive_energy_of_spectrum(h, np.linalg.eigvalsh(rho.op))


def passive_state(rho: DensityMatrix, h: Hamiltonian) -> tuple[DensityMatrix, np.ndarray]:
    """Passive state of rho and the unitary that reaches it.

    Returns (Pi, U) with Pi carrying rho's populations in descending order on
    the ascending energy levels, and U mapping rho's sorted eigenvectors onto
    the energy eigenvectors so that U rho U^dag = Pi. For degenerate spectra
    the tie-broken representative is returned.
    """
    if rho.dim != h.dim:
        raise DimensionMismatch(f"state is {rho.dim}-dimensional but Hamiltonian is {h.dim}-dimensional")
    dec = eig_hermitian(rho.op)
    lam_desc, order = _descending(dec.eigenvalues)
    sorted_vectors = dec.eigenvectors[:, order]
    w = h.eigenbasis
    pi_op = (w * lam_desc) @ adjoint(w)
    unitary = w @ adjoint(sorted_vectors)
    return DensityMatrix((pi_op + adjoint(pi_op)) / 2.0), unitary


def ergotropy(rho: DensityMatrix, h: Hamiltonian) -> float:
    """Maximum unitarily extractable work: mean energy minus passive energy."""
    return mean_energy(rho, h) - passive_energy(rho, h)


def observational_ergotropy(rho: DensityMatrix, h: Hamiltonian, m: Povm) -> float:
    """Work extractable when the state is known only through one round of
    outcome statistics of m: mean energy of rho minus the passive energy of
    the coarse-grained estimate. Can be negative when the estimate misranks
    the populations."""
    if rho.dim != h.dim:
        raise DimensionMismatch(f"state is {rho.dim}-dimensional but Hamiltonian is {h.dim}-dimensional")
    estimate = coarse_grained_state(rho, m)
    return mean_energy(rho, h) - passive_energy(estimate, h)


def incoherent_ergotropy(rho: DensityMatrix, h: Hamiltonian) -> float:
    """Ergotropy of the energy-dephased state; dephasing keeps the mean
    energy, so this is the classical share of the total."""
    return ergotropy(dephase(rho, h), h)


def coherent_ergotropy(rho: DensityMatrix, h: Hamiltonian) -> float:
    """Remainder of ergotropy beyond the incoherent part; nonnegative."""
    return ergotropy(rho, h) - incoherent_ergotropy(rho, h)


def report(rho: DensityMatrix, h: Hamiltonian, m: Povm | None = None) -> WorkReport:
    """Bundle every work quantity for one instance."""
    mean = mean_energy(rho, h)
    passive = passive_energy(rho, h)
    total = mean - passive
    incoherent = incoherent_ergotropy(rho, h)
    observational = None if m is None else observational_ergotropy(rho, h, m)
    return WorkReport(
        dimension=rho.dim,
        mean_energy=mean,
        passive_energy=passive,
        ergotropy=total,
        incoherent=incoherent,
        coherent=total - incoherent,
        observational=observational,
    )


__all__ = [
    "WorkReport",
    "coherent_ergotropy",
    "ergotropy",
    "incoherent_ergotropy",
    "observational_ergotropy",
    "passive_energy",
    "passive_energy_of_spectrum",
    "passive_state",
    "report",
]

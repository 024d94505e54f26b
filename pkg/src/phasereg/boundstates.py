"""Rovibrational bound states on the propagation grid.

The Hamiltonian is diagonalized in the Fourier grid representation with
the same periodic FFT kinetic operator used by the time propagator, so
an eigenvector propagated field-free only picks up the phase exp(-iEt).
"""

from dataclasses import dataclass

import numpy as np

from . import potentials, units

__all__ = ["RovibLevel", "kinetic_matrix", "solve_bound", "franck_condon", "predict_peak"]


@dataclass(frozen=True)
class RovibLevel:
    v: int
    n: int
    energy: float          # hartree
    wavefunction: np.ndarray  # real, unit norm with grid weight dR
    grid: potentials.GridSpec


def kinetic_matrix(grid, mu):
    """Dense kinetic matrix of the periodic Fourier grid: F^H diag(k^2/2mu) F.

    Real symmetric circulant; built from one inverse FFT of the kinetic
    spectrum.
    """
    t_k = grid.k ** 2 / (2.0 * mu)
    first_row = np.fft.ifft(t_k).real
    idx = np.arange(grid.n)
    return first_row[(idx[:, None] - idx[None, :]) % grid.n]


def solve_bound(curve, n, n_levels, grid=None):
    """Lowest n_levels rovibrational eigenpairs for rotational number N.

    Raises if fewer grid-supported bound levels exist than requested
    (bound meaning below the potential value at both grid edges).
    """
    if grid is None:
        grid = potentials.GridSpec()
    if n_levels == 0:
        return []
    mu = curve.mu
    v_eff = potentials.evaluate(curve, grid.r, n)
    h = kinetic_matrix(grid, mu) + np.diag(v_eff)
    energies, vectors = np.linalg.eigh(h)

    v_edge = min(v_eff[0], v_eff[-1])
    n_bound = int(np.sum(energies < v_edge))
    if n_levels > n_bound:
        raise ValueError(
            f"requested {n_levels} bound levels but only {n_bound} are "
            f"supported by the grid for N={n}"
        )

    levels = []
    for v in range(n_levels):
        chi = vectors[:, v] / np.sqrt(grid.dr)
        # sign convention: inner-turning-point lobe positive
        lead = np.flatnonzero(np.abs(chi) > 1e-3 * np.max(np.abs(chi)))[0]
        if chi[lead] < 0:
            chi = -chi
        levels.append(RovibLevel(v, n, float(energies[v]), chi, grid))
    return levels


def franck_condon(level_a, level_b):
    """Real radial overlap integral between two levels on the same grid."""
    if level_a.grid != level_b.grid:
        raise ValueError("Franck-Condon overlap requires a shared grid")
    return float(np.sum(level_a.wavefunction * level_b.wavefunction) * level_a.grid.dr)


def predict_peak(level_e, level_ion, omega):
    """Photoelectron energy from energy conservation, in cm^-1.

    omega is the carrier photon energy in hartree.  Returns None when the
    channel is closed (predicted energy not positive).
    """
    eps = level_e.energy + omega - level_ion.energy
    if eps <= 0.0:
        return None
    return units.hartree_to_cm(eps)

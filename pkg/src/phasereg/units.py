"""Unit conversions and physical constants.

Everything internal to the package is expressed in Hartree atomic units
(hbar = m_e = e = a0 = 1).  Configuration boundaries accept cm^-1, nm,
ps and fs; the constants below are quoted to 10 significant digits.
"""

import math

# 1 hartree expressed in cm^-1 (CODATA 2018)
HARTREE_TO_CM = 219474.6313632

# 1 unified atomic mass unit in electron masses
AMU_TO_ME = 1822.888486209

# 1 atomic time unit in seconds
ATOMIC_TIME_S = 2.418884326586e-17

# mass of 7Li in amu
MASS_7LI_AMU = 7.016003437

# reduced mass of the 7Li2 dimer in electron masses
MU_LI2 = MASS_7LI_AMU / 2.0 * AMU_TO_ME


def cm_to_hartree(e_cm):
    return e_cm / HARTREE_TO_CM


def hartree_to_cm(e_h):
    return e_h * HARTREE_TO_CM


def nm_to_hartree(wavelength_nm):
    """Photon energy of a wavelength given in nm (vacuum)."""
    return cm_to_hartree(1.0e7 / wavelength_nm)


def ps_to_au(t_ps):
    return t_ps * 1.0e-12 / ATOMIC_TIME_S


def fs_to_au(t_fs):
    return t_fs * 1.0e-15 / ATOMIC_TIME_S


def au_to_ps(t_au):
    return t_au * ATOMIC_TIME_S / 1.0e-12


def spectral_fwhm_cm(tau_ps):
    """FWHM (cm^-1) of the photoelectron line produced by a sin^2 pulse.

    The line profile is |A(delta)|^2 with A the Fourier transform of the
    sin^2(pi t / 2 tau) envelope of total duration 2 tau.  The half-width
    solves |A|^2 = 1/2 at x = delta * tau ~ 2.1967, found numerically once.
    """
    x_half = 2.196741
    delta_half = x_half / ps_to_au(tau_ps)  # hartree (hbar = 1)
    return 2.0 * hartree_to_cm(delta_half)


def envelope_spectrum(delta, big_t):
    """Fourier amplitude of sin^2(pi t / big_t) over [0, big_t] at detuning delta.

    Normalized to 1 at delta = 0.  Used by tests as an independent
    first-order perturbation-theory oracle.
    """
    x = delta * big_t / 2.0
    if abs(x) < 1e-8:
        return 1.0
    sinc = math.sin(x) / x
    pi2 = math.pi ** 2
    if abs(pi2 - x * x) < 1e-8:
        # removable singularity at x = pi
        return 0.5 * math.sin(x) / x
    return sinc * pi2 / (pi2 - x * x)

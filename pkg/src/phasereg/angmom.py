"""Angular momentum algebra for the bound-continuum coupling problem.

Wigner 3-j symbols, the preparation coefficients of the two-step
excitation, the laboratory/molecular frame transformation with its
quantum-defect phases, and the full coupling table between the bound
rotational channels and the ionization channels.

Only integer angular momenta appear in this problem (Sigma electronic
states, p-wave electron), so all routines take plain ints.
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "QuantumDefects",
    "LI2_DEFECTS",
    "LI2_MOMENTS",
    "wigner3j",
    "prep_coefficient",
    "frame_transform",
    "dipole_lambda",
    "source_term",
    "coupling_matrix",
    "ion_channels",
]


@dataclass(frozen=True)
class QuantumDefects:
    """Short-range quantum defects of the sigma and pi continua."""

    mu_sigma: float
    mu_pi: float

    @property
    def isotropic(self):
        return self.mu_sigma == self.mu_pi

    def phase(self, lam):
        """exp(i pi mu_Lambda) for Lambda = 0 (sigma) or 1 (pi)."""
        mu = self.mu_sigma if lam == 0 else self.mu_pi
        return cmath.exp(1j * math.pi * mu)


# defects of the Li2 E-state p-Rydberg series
LI2_DEFECTS = QuantumDefects(mu_sigma=0.001, mu_pi=-0.287)


@lru_cache(maxsize=None)
def _factorial(n):
    return math.factorial(n)


def wigner3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3-j symbol for integer arguments.

    Selection-rule violations (triangle rule, projection sum, |m| > j)
    return exactly 0.0.  Evaluated with the Racah single-sum formula;
    factorials are exact Python integers so the only rounding happens in
    the final float conversions.
    """
    if m1 + m2 + m3 != 0:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    if j3 < abs(j1 - j2) or j3 > j1 + j2:
        return 0.0

    # triangle coefficient and projection factorials, kept as exact ints
    num = (
        _factorial(j1 + j2 - j3)
        * _factorial(j1 - j2 + j3)
        * _factorial(-j1 + j2 + j3)
        * _factorial(j1 - m1)
        * _factorial(j1 + m1)
        * _factorial(j2 - m2)
        * _factorial(j2 + m2)
        * _factorial(j3 - m3)
        * _factorial(j3 + m3)
    )
    den = _factorial(j1 + j2 + j3 + 1)

    t_min = max(0, j2 - j3 - m1, j1 - j3 + m2)
    t_max = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    sqrt_pre = math.sqrt(num / den)
    total = 0.0
    for t in range(t_min, t_max + 1):
        d = (
            _factorial(t)
            * _factorial(j3 - j2 + m1 + t)
            * _factorial(j3 - j1 - m2 + t)
            * _factorial(j1 + j2 - j3 - t)
            * _factorial(j1 - m1 - t)
            * _factorial(j2 + m2 - t)
        )
        total += (-1) ** t / d
    return (-1) ** (j1 - j2 - m3) * sqrt_pre * total


def prep_coefficient(n_x, n_a, n_e, m):
    """Relative amplitude of the (N_E, M) rotational channel after the
    two sequential one-photon excitations X -> A -> E.

    Product of degeneracy roots and four 3-j symbols; forbidden
    combinations return 0.
    """
    return (
        math.sqrt(2 * n_e + 1)
        * (2 * n_a + 1)
        * math.sqrt(2 * n_x + 1)
        * wigner3j(n_a, 1, n_x, m, 0, -m)
        * wigner3j(n_a, 1, n_x, 0, 0, 0)
        * wigner3j(n_e, 1, n_a, m, 0, -m)
        * wigner3j(n_e, 1, n_a, 0, 0, 0)
    )


def frame_transform(n_prime, l_prime, n, lam):
    """<N' l' | N Lambda>: unitary rotation between laboratory-frame
    (N', l') channels and molecular-frame Lambda channels, also used as
    the Hoenl-London factor with l' = 1.
    """
    delta_l0 = 1.0 if lam == 0 else 0.0
    return (
        (-1) ** (n_prime + lam + 1)
        * math.sqrt(2.0 - delta_l0)
        * math.sqrt(2 * n_prime + 1)
        * wigner3j(l_prime, n, n_prime, -lam, lam, 0)
    )


def dipole_lambda(l, lam, dipole_const=1.0):
    """Molecular-frame dipole amplitude d^l_Lambda under the Condon
    approximation.  The 3-j factor kills every l except the p wave.

    dipole_const is either a single scalar (equal sigma and pi transition
    moments) or a pair (d_sigma, d_pi).  Unequal magnitudes encode the
    different short-range radial dipole integrals of the two continua;
    they are what makes the channel-summed ionization probability depend
    on the bound-state phases at all -- any purely Lambda-dependent phase
    (the quantum defects included) is unitary and cancels from the total.

    The extra (-1)^Lambda makes the amplitude Lambda-sign-free; without
    it the Lambda sum does not close and an isotropic molecule
    (mu_sigma == mu_pi, d_sigma == d_pi) would still exchange angular
    momentum with the electron, which is unphysical.
    """
    d = dipole_const[min(lam, 1)] if np.ndim(dipole_const) else dipole_const
    return (-1) ** lam * wigner3j(l, 1, 0, -lam, lam, 0) * d


# sigma / pi transition moments of the Li2 model; the ratio sets the
# interference contrast of the channel-summed ionization signal
LI2_MOMENTS = (0.2, 1.0)


def source_term(n_e, n, n_plus, l, defects, dipole_const=1.0):
    """Molecular-frame ionization amplitude connecting the bound channel
    N_E to the ion channel (N+, l) through total angular momentum N.

    Sum over Lambda = 0, 1 of the two frame-transformation factors, the
    quantum-defect phase and the Condon dipole.  Complex because the
    sigma and pi continua carry different short-range phases.
    """
    total = 0j
    for lam in (0, 1):
        total += (
            frame_transform(n_plus, l, n, lam)
            * defects.phase(lam)
            * dipole_lambda(l, lam, dipole_const)
            * frame_transform(n_e, 1, n, lam)
        )
    return total


def ion_channels(n_e_list, m, l=1):
    """Angular ionization channels (N+, m_l) reachable from the given
    bound rotational levels at fixed laboratory projection M.

    N+ runs over the parity-allowed set N_E, N_E +- 2 (p-wave, Sigma
    core); channels whose ion projection M - m_l would exceed N+ are
    dropped.  Sorted for deterministic ordering.
    """
    chans = set()
    for n_e in n_e_list:
        for n_plus in range(max(0, n_e - l - 1), n_e + l + 2):
            if (n_plus + n_e) % 2 != 0:
                # u/g parity: one-photon ionization of a gerade Rydberg
                # state changes N by an even amount for l = 1
                continue
            for ml in range(-l, l + 1):
                if abs(m - ml) <= n_plus:
                    chans.add((n_plus, ml))
    return sorted(chans)


def coupling_matrix(n_e_list, ion_channel_list, m, defects, l=1, dipole_const=1.0):
    """Dimensionless coupling amplitudes M^{N+,l,ml}_{N_E,M}.

    Returns a complex array of shape (len(n_e_list), len(ion_channel_list)).
    The intermediate total angular momentum N is summed over the
    intersection of the two triangle conditions.
    """
    out = np.zeros((len(n_e_list), len(ion_channel_list)), dtype=complex)
    for i, n_e in enumerate(n_e_list):
        for k, (n_plus, ml) in enumerate(ion_channel_list):
            if abs(m - ml) > n_plus or abs(ml) > l:
                continue
            n_lo = max(abs(n_plus - l), abs(n_e - 1))
            n_hi = min(n_plus + l, n_e + 1)
            val = 0j
            for n in range(n_lo, n_hi + 1):
                w1 = wigner3j(n_plus, l, n, m - ml, ml, -m)
                if w1 == 0.0:
                    continue
                w2 = wigner3j(n_e, 1, n, m, 0, -m)
                if w2 == 0.0:
                    continue
                val += (2 * n + 1) * w1 * w2 * source_term(
                    n_e, n, n_plus, l, defects, dipole_const
                )
            out[i, k] = val
    return out

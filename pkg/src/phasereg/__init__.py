"""Coupled-channel simulator of phase-encoded rotational wave packets.

An integer is stored in the relative phases (0 or pi) of a Li2 Rydberg
rotational wave packet, the packet is ionized by a picosecond pulse, and
the integer is read back from interference structures in the
photoelectron spectrum.

Modules:
    units        atomic-unit conversions and constants
    angmom       3-j symbols, frame transformation, coupling tables
    potentials   model and tabulated potential curves, radial grid
    boundstates  Fourier-grid rovibrational eigenstates
    quantumstate phase register, channel layout, wave-packet container
    propagator   split-operator propagation of the coupled equations
    spectra      photoelectron observables and register decoding
    experiment   config-driven experiment orchestration
    cli          command-line entry point
"""

__version__ = "1.0.0"

from . import (  # noqa: F401
    angmom,
    boundstates,
    potentials,
    propagator,
    quantumstate,
    spectra,
    units,
)

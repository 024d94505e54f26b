"""Channel-resolved wave packet, phase-register encoding, initial state.

A WavepacketState holds every radial channel function for one value of
the laboratory projection M: the bound rotational channels (N_E, M) and
the discretized ionization channels (N+, l, m_l, energy bin).  All
channels share one radial grid.

The stored ionization amplitudes carry the sqrt(d_eps) discretization
weight (it lives in the coupling, see the propagator), so the total norm
is a plain sum of |psi|^2 dR over every channel.
"""

from dataclasses import dataclass

import numpy as np

from . import angmom, potentials, units

__all__ = [
    "EnergyBins",
    "ChannelLabel",
    "PhaseRegister",
    "WavepacketState",
    "encode",
    "assemble_initial",
]


@dataclass(frozen=True)
class EnergyBins:
    """Uniform photoelectron energy discretization (bin centers, cm^-1)."""

    eps_min_cm: float = 10.0
    eps_max_cm: float = 190.0
    n_bins: int = 150

    @property
    def centers_cm(self):
        return np.linspace(self.eps_min_cm, self.eps_max_cm, self.n_bins)

    @property
    def centers(self):
        return units.cm_to_hartree(self.centers_cm)

    @property
    def d_eps(self):
        return units.cm_to_hartree(
            (self.eps_max_cm - self.eps_min_cm) / (self.n_bins - 1)
        )


@dataclass(frozen=True)
class ChannelLabel:
    """Identifies one radial channel function.

    kind 'bound': rotational level N_E at projection M (bin is None).
    kind 'ion'  : ion rotation N+, electron (l, m_l), energy-bin index;
                  the ion projection is M - m_l.
    """

    kind: str
    n: int            # N_E or N+
    m_total: int      # laboratory projection M of the neutral
    l: int = None
    ml: int = None
    bin_index: int = None

    def __post_init__(self):
        if self.kind not in ("bound", "ion"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.kind == "bound":
            if abs(self.m_total) > self.n:
                raise ValueError("|M| exceeds N_E")
        else:
            if abs(self.ml) > self.l:
                raise ValueError("|m_l| exceeds l")
            if abs(self.m_total - self.ml) > self.n:
                raise ValueError("|M - m_l| exceeds N+")


@dataclass(frozen=True)
class PhaseRegister:
    """Integer stored as {0, pi} phase differences, one per vibrational level.

    Convention (fixed): bit 1 of the integer maps to an in-phase pair
    (delta_phi = 0), bit 0 to out-of-phase (delta_phi = pi).  Bit v of n
    controls vibrational level v, so the most significant bit sits on the
    highest level.
    """

    value: int
    n_v: int

    def __post_init__(self):
        if not 0 <= self.value < 2 ** self.n_v:
            raise ValueError(
                f"integer {self.value} out of range for {self.n_v} levels"
            )

    def bit(self, v):
        return (self.value >> v) & 1

    def delta_phi(self, v):
        return 0.0 if self.bit(v) else np.pi

    @property
    def phases(self):
        """delta_phi per level, highest vibrational level first."""
        return tuple(self.delta_phi(v) for v in reversed(range(self.n_v)))


def encode(n, n_v):
    """Phase register storing the integer n on n_v vibrational levels."""
    return PhaseRegister(int(n), int(n_v))


class WavepacketState:
    """All radial channel functions for one M, on one shared grid.

    Internally the bound channels live in a (n_bound, n_grid) complex
    array and the ionization channels in (n_ang, n_bins, n_grid), where
    n_ang indexes the sorted (N+, m_l) pairs.  Label-based access is
    provided for inspection and snapshots.
    """

    def __init__(self, grid, bins, bound_n_list, ion_ang_list, m_total, l=1, t=0.0):
        self.grid = grid
        self.bins = bins
        self.m_total = m_total
        self.l = l
        self.t = t
        self.bound_n_list = list(bound_n_list)
        self.ion_ang_list = list(ion_ang_list)
        self.bound = np.zeros((len(self.bound_n_list), grid.n), dtype=complex)
        self.ion = np.zeros(
            (len(self.ion_ang_list), bins.n_bins, grid.n), dtype=complex
        )

    # -- label access -------------------------------------------------

    def labels(self):
        out = [
            ChannelLabel("bound", n, self.m_total) for n in self.bound_n_list
        ]
        for (n_plus, ml) in self.ion_ang_list:
            for j in range(self.bins.n_bins):
                out.append(
                    ChannelLabel("ion", n_plus, self.m_total, self.l, ml, j)
                )
        return out

    def __getitem__(self, label):
        if label.kind == "bound":
            return self.bound[self.bound_n_list.index(label.n)]
        k = self.ion_ang_list.index((label.n, label.ml))
        return self.ion[k, label.bin_index]

    # -- norms --------------------------------------------------------

    def bound_norm(self):
        return float(np.sum(np.abs(self.bound) ** 2) * self.grid.dr)

    def ion_norm(self):
        return float(np.sum(np.abs(self.ion) ** 2) * self.grid.dr)

    def norm(self):
        return self.bound_norm() + self.ion_norm()

    def copy(self):
        other = WavepacketState(
            self.grid, self.bins, self.bound_n_list, self.ion_ang_list,
            self.m_total, self.l, self.t,
        )
        other.bound = self.bound.copy()
        other.ion = self.ion.copy()
        return other

    # -- snapshots ----------------------------------------------------

    def save(self, path):
        """Binary snapshot: labels and complex channel arrays (npz).

        Layout: 'bound' (n_bound, n_grid), 'ion' (n_ang, n_bins, n_grid),
        'bound_n', 'ion_ang', grid and bin parameters, 'm_total', 't'.
        """
        np.savez(
            path,
            bound=self.bound,
            ion=self.ion,
            bound_n=np.array(self.bound_n_list),
            ion_ang=np.array(self.ion_ang_list),
            grid=np.array([self.grid.r_min, self.grid.r_max, self.grid.n]),
            bins=np.array([self.bins.eps_min_cm, self.bins.eps_max_cm, self.bins.n_bins]),
            m_total=np.array([self.m_total]),
            l=np.array([self.l]),
            t=np.array([self.t]),
        )

    @classmethod
    def load(cls, path):
        data = np.load(path)
        grid = potentials.GridSpec(*data["grid"][:2], int(data["grid"][2]))
        bins = EnergyBins(*data["bins"][:2], int(data["bins"][2]))
        state = cls(
            grid,
            bins,
            [int(n) for n in data["bound_n"]],
            [tuple(int(x) for x in pair) for pair in data["ion_ang"]],
            int(data["m_total"][0]),
            int(data["l"][0]),
            float(data["t"][0]),
        )
        state.bound = data["bound"]
        state.ion = data["ion"]
        return state


def assemble_initial(
    register, levels_e, n_a, n_x, m_total, grid=None, bins=None,
    components=("lower", "upper"),
):
    """Initial wave packet for one M from a phase register.

    levels_e maps rotational number N_E to the list of RovibLevel objects
    (index = vibrational number) on the shared grid.  Each populated
    level enters with equal amplitude (the amplitude mask of the
    preparation step), phase 0 on the N_A - 1 component and delta_phi on
    the N_A + 1 component, both scaled by the preparation coefficient.
    Ionization channels start empty.  No global renormalization.
    """
    if grid is None:
        grid = potentials.GridSpec()
    if bins is None:
        bins = EnergyBins()

    wanted = []
    if "lower" in components:
        wanted.append(n_a - 1)
    if "upper" in components:
        wanted.append(n_a + 1)
    bound_n = [n for n in wanted if abs(m_total) <= n]
    if not bound_n:
        raise ValueError(f"no bound channel accepts projection M={m_total}")
    ang = angmom.ion_channels(bound_n, m_total)

    state = WavepacketState(grid, bins, bound_n, ang, m_total)
    for i, n_e in enumerate(bound_n):
        try:
            levels = levels_e[n_e]
        except KeyError:
            raise ValueError(f"missing rovibrational levels for N_E={n_e}")
        coef = angmom.prep_coefficient(n_x, n_a, n_e, m_total)
        acc = np.zeros(grid.n, dtype=complex)
        for v in range(register.n_v):
            if v >= len(levels):
                raise ValueError(f"missing level v={v} for N_E={n_e}")
            phase = register.delta_phi(v) if n_e == n_a + 1 else 0.0
            acc += np.exp(1j * phase) * levels[v].wavefunction
        state.bound[i] = coef * acc
    return state

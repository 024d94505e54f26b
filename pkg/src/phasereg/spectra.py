"""Photoelectron observables and register readout.

Everything here is pure post-processing of final wave-packet states:
energy spectra and angular distributions (incoherent over N+, m_l and M,
since the p-wave carries no partial-wave cross terms), signal
differences between register values, Franck-Condon renormalization of
those differences, and the threshold decoder that turns band intensities
back into an integer.

All spectra are in arbitrary units; every quantitative statement made
about them is a ratio.
"""

from dataclasses import dataclass, field

import numpy as np

from . import units

__all__ = [
    "SpectrumResult",
    "AngularGrid",
    "angular_distribution",
    "energy_spectrum",
    "signal_difference",
    "BandTable",
    "fc_renormalize",
    "DecodeCalibration",
    "decode",
    "DecodeAmbiguity",
]


def _channel_yield(state):
    """Integrated |psi|^2 dR per (angular channel, energy bin), divided by
    the bin measure so the numbers are energy densities."""
    return np.sum(np.abs(state.ion) ** 2, axis=-1) * state.grid.dr / state.bins.d_eps


@dataclass
class SpectrumResult:
    eps_cm: np.ndarray                  # bin centers, cm^-1
    total: np.ndarray                   # P(eps), arbitrary units
    per_n_plus: dict                    # N+ -> P(eps) partial
    per_channel: dict                   # (M, N+, m_l) -> P(eps) partial
    d_eps: float                        # bin measure, hartree
    metadata: dict = field(default_factory=dict)

    def integral(self):
        return float(np.sum(self.total) * self.d_eps)


@dataclass(frozen=True)
class AngularGrid:
    """Product grid in the electron emission direction (theta_k, phi_k).

    325 directions: 25 Gauss-Legendre nodes in cos(theta) crossed with 13
    uniform azimuthal angles.  Gauss-Legendre keeps the solid-angle
    quadrature exact for the low-order polynomials |Y_1m|^2.
    """

    n_theta: int = 25
    n_phi: int = 13

    def nodes(self):
        x, w = np.polynomial.legendre.leggauss(self.n_theta)
        theta = np.arccos(x)
        phi = np.linspace(0.0, 2.0 * np.pi, self.n_phi, endpoint=False)
        w_phi = np.full(self.n_phi, 2.0 * np.pi / self.n_phi)
        return theta, w, phi, w_phi


def _y1m_sq(m, theta):
    # |Y_1m(theta, phi)|^2; no phi dependence for fixed |m|
    if m == 0:
        return 3.0 / (4.0 * np.pi) * np.cos(theta) ** 2
    return 3.0 / (8.0 * np.pi) * np.sin(theta) ** 2


def angular_distribution(final_states, k_grid=None):
    """P(eps, k_hat) summed over the supplied per-M final states.

    Returns (theta, phi, dist) with dist of shape
    (n_bins, n_theta, n_phi), plus the quadrature weights, as a dict.
    """
    if k_grid is None:
        k_grid = AngularGrid()
    theta, w_theta, phi, w_phi = k_grid.nodes()
    first = next(iter(final_states.values()))
    dist = np.zeros((first.bins.n_bins, k_grid.n_theta, k_grid.n_phi))
    for state in final_states.values():
        if state.l != 1:
            raise ValueError("angular distributions are implemented for l = 1")
        dens = _channel_yield(state)            # (n_ang, n_bins)
        for k, (_n_plus, ml) in enumerate(state.ion_ang_list):
            shape = _y1m_sq(ml, theta)          # (n_theta,)
            dist += dens[k][:, None, None] * shape[:, None]
    return {
        "theta": theta, "phi": phi,
        "w_theta": w_theta, "w_phi": w_phi,
        "dist": dist,
    }


def integrate_angular(ang):
    """Solid-angle integral of an angular_distribution result -> P(eps)."""
    return np.einsum("etp,t,p->e", ang["dist"], ang["w_theta"], ang["w_phi"])


def energy_spectrum(final_states, metadata=None):
    """Total photoelectron spectrum, averaged (summed) over M.

    final_states maps M to the final WavepacketState of its propagation.
    """
    if not final_states:
        raise ValueError("no final states supplied")
    ms = sorted(final_states)
    n_x = max(abs(m) for m in ms) if ms != [0] else 0
    expected = list(range(-n_x, n_x + 1)) if n_x else [0]
    if ms != expected:
        raise ValueError(f"missing M runs: have {ms}, expected {expected}")

    first = final_states[ms[0]]
    total = np.zeros(first.bins.n_bins)
    per_n_plus = {}
    per_channel = {}
    for m, state in final_states.items():
        dens = _channel_yield(state)
        for k, (n_plus, ml) in enumerate(state.ion_ang_list):
            per_channel[(m, n_plus, ml)] = dens[k]
            per_n_plus[n_plus] = per_n_plus.get(n_plus, 0.0) + dens[k]
            total += dens[k]
    return SpectrumResult(
        eps_cm=first.bins.centers_cm,
        total=total,
        per_n_plus=per_n_plus,
        per_channel=per_channel,
        d_eps=first.bins.d_eps,
        metadata=dict(metadata or {}),
    )


def signal_difference(p_n, p_0):
    """S(n, eps) = P(n, eps) - P(0, eps), bin by bin."""
    if not np.array_equal(p_n.eps_cm, p_0.eps_cm):
        raise ValueError("spectra live on different energy grids")
    meta = dict(p_n.metadata)
    meta["reference"] = p_0.metadata.get("register", 0)
    return SpectrumResult(
        eps_cm=p_n.eps_cm,
        total=p_n.total - p_0.total,
        per_n_plus={},
        per_channel={},
        d_eps=p_n.d_eps,
        metadata=meta,
    )


# -- vibrational band bookkeeping -------------------------------------


@dataclass(frozen=True)
class BandTable:
    """Energy window per vibrational level: v -> (lo_cm, hi_cm, center_cm)."""

    windows: tuple   # ((v, lo, hi, center), ...) sorted by v

    @classmethod
    def from_peaks(cls, centers_by_v, half_width_cm, eps_range=(10.0, 190.0)):
        """Windows centered on the predicted peaks, clipped to the grid and
        truncated at the midpoint between neighbouring bands."""
        items = sorted(centers_by_v.items())
        rows = []
        for i, (v, c) in enumerate(items):
            lo = max(c - half_width_cm, eps_range[0])
            hi = min(c + half_width_cm, eps_range[1])
            for j, (_v2, c2) in enumerate(items):
                if j == i:
                    continue
                mid = 0.5 * (c + c2)
                if c2 < c:
                    lo = max(lo, mid)
                else:
                    hi = min(hi, mid)
            rows.append((v, lo, hi, c))
        return cls(windows=tuple(rows))

    def mask(self, eps_cm, v):
        for (vv, lo, hi, _c) in self.windows:
            if vv == v:
                return (eps_cm >= lo) & (eps_cm <= hi)
        raise KeyError(f"no band window for v={v}")

    @property
    def levels(self):
        return [row[0] for row in self.windows]


def band_integral(spec, band_table, v):
    mask = band_table.mask(spec.eps_cm, v)
    return float(np.sum(spec.total[mask]) * spec.d_eps)


def fc_renormalize(s, band_table, fc_by_v, min_fc=1e-6):
    """Divide S(n, eps) by the per-band Franck-Condon factor F(eps).

    F is a step function, constant on each band window.  Bins outside
    every window are left untouched and reported in metadata.
    """
    out = s.total.copy()
    covered = np.zeros_like(s.total, dtype=bool)
    for v in band_table.levels:
        f = fc_by_v[v]
        if abs(f) < min_fc:
            raise ValueError(
                f"Franck-Condon factor {f:.2e} for band v={v} below {min_fc}; "
                "renormalization would blow up"
            )
        mask = band_table.mask(s.eps_cm, v)
        out[mask] = out[mask] / f
        covered |= mask
    meta = dict(s.metadata)
    meta["fc_renormalized"] = True
    meta["bins_outside_bands"] = int(np.sum(~covered))
    return SpectrumResult(
        eps_cm=s.eps_cm, total=out, per_n_plus={}, per_channel={},
        d_eps=s.d_eps, metadata=meta,
    )


# -- readout ----------------------------------------------------------


class DecodeAmbiguity(RuntimeError):
    """A band intensity ratio fell inside the guard margin."""


@dataclass(frozen=True)
class DecodeCalibration:
    """Per-band reference integrals of P(0) and the measured contrasts.

    per_band holds the constructive/destructive intensity ratio of each
    band, obtained from an all-bits-set calibration run against the
    all-zero reference; contrast is their mean (about 1.7 for the Li2
    model).  Thresholds are per band because the interference contrast
    weakens slowly with v (the rotational splitting shrinks through the
    vibration-rotation coupling).
    """

    reference: dict     # v -> integral of P(0) over the band
    per_band: dict      # v -> constructive/destructive ratio
    contrast: float     # mean of per_band

    @classmethod
    def from_runs(cls, p_all_ones, p_zero, band_table):
        ref = {}
        per_band = {}
        for v in band_table.levels:
            r0 = band_integral(p_zero, band_table, v)
            r1 = band_integral(p_all_ones, band_table, v)
            ref[v] = r0
            per_band[v] = r1 / r0
        return cls(
            reference=ref,
            per_band=per_band,
            contrast=float(np.mean(list(per_band.values()))),
        )


def decode(spec, band_table, calibration, guard=0.1):
    """Read the stored integer back from a photoelectron spectrum.

    For each band, the intensity ratio r_v against the P(0) reference is
    compared with the threshold (1 + rho_v)/2, rho_v being that band's
    calibrated contrast.  Ratios within `guard` of the threshold raise
    DecodeAmbiguity instead of guessing.
    """
    n = 0
    report = {}
    for v in band_table.levels:
        rho = calibration.per_band[v]
        threshold = 0.5 * (1.0 + rho)
        r = band_integral(spec, band_table, v) / calibration.reference[v]
        if abs(r - threshold) < guard:
            raise DecodeAmbiguity(
                f"band v={v}: ratio {r:.4f} within {guard} of threshold "
                f"{threshold:.4f}"
            )
        bit = (r < threshold) if rho < 1.0 else (r > threshold)
        report[v] = (r, int(bit))
        n |= int(bit) << v
    return n, report

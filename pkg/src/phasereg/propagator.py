"""Split-operator time evolution of the coupled bound/ion equations.

Second-order symmetric splitting T(dt/2) V(dt/2) W(dt) V(dt/2) T(dt/2).
Kinetic factors act in momentum space through the FFT; potential factors
are diagonal phases; the interaction factor is evaluated exactly by a
singular-value decomposition of the bound-continuum coupling block
(there is no continuum-continuum coupling, so exp(-i W dt) closes on the
left/right singular subspaces).

The rotating-wave approximation is built in: the ion channels are
dressed by -omega and the coupling amplitude is E0 f(t) / 2.  Because
the electronic dipole is R-independent (Condon), one interaction matrix
per time step serves every grid point.
"""

import logging
from dataclasses import dataclass

import numpy as np

from . import angmom, potentials, units

__all__ = ["PulseParams", "PropagationConfig", "Propagator", "propagate"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PulseParams:
    """sin^2 pulse: FWHM tau, total duration 2 tau."""

    e0: float          # field amplitude, au
    omega: float       # carrier angular frequency, hartree
    tau_ps: float      # FWHM in ps

    @property
    def tau(self):
        return units.ps_to_au(self.tau_ps)

    @property
    def duration(self):
        return 2.0 * self.tau

    def envelope(self, t):
        t = np.asarray(t, dtype=float)
        f = np.sin(np.pi * t / (2.0 * self.tau)) ** 2
        return np.where((t < 0) | (t > self.duration), 0.0, f)

    def rwa_amplitude(self, t):
        """Coupling amplitude E0 f(t) / 2 (rotating-wave halving)."""
        return 0.5 * self.e0 * float(self.envelope(t))


@dataclass(frozen=True)
class PropagationConfig:
    dt_fs: float = 4.0
    defects: angmom.QuantumDefects = angmom.LI2_DEFECTS
    dipole_const: object = angmom.LI2_MOMENTS
    log_every: int = 0          # steps between progress lines; 0 = silent
    check_every: int = 200      # steps between NaN/overflow checks

    @property
    def dt(self):
        return units.fs_to_au(self.dt_fs)


class Propagator:
    """Precomputed split-operator machinery for one state structure.

    Bound to the channel layout of a template state (grid, bound list,
    ion angular list, M); propagating a state with a different layout is
    an error.
    """

    def __init__(self, curve_e, curve_ion, pulse, config, template):
        self.pulse = pulse
        self.config = config
        self.grid = template.grid
        self.bins = template.bins
        self.m_total = template.m_total
        self.bound_n_list = list(template.bound_n_list)
        self.ion_ang_list = list(template.ion_ang_list)
        mu = curve_e.mu

        r = self.grid.r
        self.kin = self.grid.k ** 2 / (2.0 * mu)
        self.v_bound = np.array(
            [potentials.evaluate(curve_e, r, n) for n in self.bound_n_list]
        )
        self.v_ion_ang = np.array(
            [potentials.evaluate(curve_ion, r, n, rwa_shift=-pulse.omega)
             for (n, _ml) in self.ion_ang_list]
        )
        self.eps = self.bins.centers

        # coupling block and its SVD; singular values are scaled by the
        # instantaneous field amplitude at application time
        m_block = angmom.coupling_matrix(
            self.bound_n_list, self.ion_ang_list, self.m_total,
            config.defects, dipole_const=config.dipole_const,
        )
        scale = np.sqrt(self.bins.d_eps * self.bins.n_bins)
        u, s, vh = np.linalg.svd(-scale * m_block, full_matrices=False)
        keep = s > s[0] * 1e-15 if s.size and s[0] > 0 else slice(0, 0)
        self.svd_u = u[:, keep]
        self.svd_s = s[keep]
        self.svd_v = vh[keep].conj().T    # (n_ang, rank)

    # -- elementary steps ---------------------------------------------

    def kinetic_half_step(self, state, dt):
        self._apply_kinetic(state, 0.5 * dt)

    def _apply_kinetic(self, state, dt):
        phase = np.exp(-1j * self.kin * dt)
        state.bound = np.fft.ifft(np.fft.fft(state.bound, axis=-1) * phase, axis=-1)
        state.ion = np.fft.ifft(np.fft.fft(state.ion, axis=-1) * phase, axis=-1)

    def potential_half_step(self, state, dt):
        half = 0.5 * dt
        state.bound *= np.exp(-1j * self.v_bound * half)
        state.ion *= np.exp(-1j * self.v_ion_ang * half)[:, None, :]
        state.ion *= np.exp(-1j * self.eps * half)[None, :, None]

    def interaction_step(self, state, t, dt):
        """Exact exp(-i W dt) with W evaluated at the midpoint t + dt/2."""
        # abs() keeps the sample on the forward midpoint when a reversed
        # run retraces the same step with dt < 0
        a = self.pulse.rwa_amplitude(t + 0.5 * abs(dt))
        if a == 0.0 or self.svd_s.size == 0:
            return
        theta = self.svd_s * (a * dt)
        cos_m1 = np.cos(theta) - 1.0
        sin = np.sin(theta)
        nb = 1.0 / np.sqrt(self.bins.n_bins)

        p = self.svd_u.conj().T @ state.bound                  # (r, n_grid)
        q = nb * np.einsum("kr,kjg->rg", self.svd_v.conj(), state.ion)
        state.bound += self.svd_u @ (cos_m1[:, None] * p - 1j * sin[:, None] * q)
        dq = cos_m1[:, None] * q - 1j * sin[:, None] * p
        state.ion += nb * np.einsum("kr,rg->kg", self.svd_v, dq)[:, None, :]

    # -- full runs ----------------------------------------------------

    def _steps(self):
        dt = self.config.dt
        total = self.pulse.duration
        n_full = int(total // dt)
        rest = total - n_full * dt
        steps = [(k * dt, dt) for k in range(n_full)]
        if rest > 1e-9 * dt:
            steps.append((n_full * dt, rest))
        return steps

    def run(self, initial, reverse=False):
        if (list(initial.bound_n_list) != self.bound_n_list
                or list(initial.ion_ang_list) != self.ion_ang_list):
            raise ValueError("state layout does not match this propagator")
        state = initial.copy()
        steps = self._steps()
        if reverse:
            steps = [(t, -dt) for (t, dt) in reversed(steps)]
        for idx, (t, dt) in enumerate(steps):
            self.kinetic_half_step(state, dt)
            self.potential_half_step(state, dt)
            self.interaction_step(state, t, dt)
            self.potential_half_step(state, dt)
            self.kinetic_half_step(state, dt)
            if self.config.check_every and (idx + 1) % self.config.check_every == 0:
                self._health_check(state, idx)
            if self.config.log_every and (idx + 1) % self.config.log_every == 0:
                log.info(
                    "step %d  t=%.3f ps  norm=%.12f  bound=%.3e  ion=%.3e",
                    idx + 1, units.au_to_ps(t + dt), state.norm(),
                    state.bound_norm(), state.ion_norm(),
                )
        state.t = steps[-1][0] + steps[-1][1] if not reverse else 0.0
        return state

    def _health_check(self, state, idx):
        for name, arr in (("bound", state.bound), ("ion", state.ion)):
            mx = np.max(np.abs(arr)) if arr.size else 0.0
            if not np.isfinite(mx) or mx > 1e6:
                raise FloatingPointError(
                    f"propagation diverged at step {idx}: max |{name}| = {mx}"
                )


def propagate(initial, curve_e, curve_ion, pulse, config=None, reverse=False):
    """One-shot propagation over the whole pulse; returns the final state."""
    if config is None:
        config = PropagationConfig()
    prop = Propagator(curve_e, curve_ion, pulse, config, initial)
    return prop.run(initial, reverse=reverse)

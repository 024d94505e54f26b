"""Config-driven experiment orchestration.

Ties the physics modules together: parse a flat key=value configuration,
calibrate the carrier frequency against the model (or tabulated) curves,
run the per-(register, M) propagations, average the spectra, decode the
register, and write every artifact needed to reproduce the run.

All file outputs are deterministic: no timestamps, fixed iteration
order, and a manifest that restates the complete configuration.
"""

import concurrent.futures
import hashlib
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import (
    __version__,
    angmom,
    boundstates,
    potentials,
    propagator,
    quantumstate,
    spectra,
    units,
)

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "parse_config",
    "calibrate_carrier",
    "build_band_table",
    "run_experiment",
]


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def _parse_bool(s):
    if isinstance(s, bool):
        return s
    t = str(s).strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_int_list(s):
    if isinstance(s, (list, tuple)):
        return tuple(int(x) for x in s)
    t = str(s).strip()
    if not t:
        return ()
    return tuple(int(x) for x in t.replace(",", " ").split())


@dataclass(frozen=True)
class ExperimentConfig:
    """Every knob of one experiment; defaults reproduce the Li2 model."""

    scenario: str = "custom"
    curve_e: str = ""            # tabulated-curve path; empty = bundled model
    curve_ion: str = ""
    n_x: int = 1                 # ground-state rotational level
    n_a: int = 2                 # intermediate rotational level
    n_v: int = 1                 # number of register bits / vibrational levels
    registers: tuple = ()        # integers to encode; 0 and all-ones always run
    tau_ps: float = 2.5
    e0: float = 3.0e-4
    wavelength_nm: float = 0.0   # 0 = unset
    omega_cm: float = 0.0        # 0 = unset; else carrier in cm^-1
    target_eps_cm: float = 55.0  # calibration target for the v=0 main peak
    mu_sigma: float = angmom.LI2_DEFECTS.mu_sigma
    mu_pi: float = angmom.LI2_DEFECTS.mu_pi
    d_sigma: float = angmom.LI2_MOMENTS[0]
    d_pi: float = angmom.LI2_MOMENTS[1]
    eps_min_cm: float = 10.0
    eps_max_cm: float = 190.0
    n_bins: int = 150
    r_min: float = 3.5
    r_max: float = 14.0
    n_grid: int = 128
    dt_fs: float = 4.0
    workers: int = 1
    m_symmetry: bool = True      # run M >= 0 only, mirror the M > 0 states
    save_states: bool = False
    band_half_fwhm: float = 3.0  # band half-width in units of spectral FWHM
    guard: float = 0.1           # decode ambiguity margin
    outdir: str = "."

    # -- derived builders ---------------------------------------------

    def grid(self):
        return potentials.GridSpec(self.r_min, self.r_max, self.n_grid)

    def bins(self):
        return quantumstate.EnergyBins(self.eps_min_cm, self.eps_max_cm, self.n_bins)

    def defects(self):
        return angmom.QuantumDefects(self.mu_sigma, self.mu_pi)

    def moments(self):
        return (self.d_sigma, self.d_pi)

    def curves(self):
        if bool(self.curve_e) != bool(self.curve_ion):
            raise ConfigError("curve_e and curve_ion must be given together")
        if self.curve_e:
            return (
                potentials.load_tabulated("E_state", self.curve_e),
                potentials.load_tabulated("ion", self.curve_ion),
            )
        return potentials.load_model_li2()

    def bound_n(self):
        """The two rotational components of the register wave packet."""
        return (self.n_a - 1, self.n_a + 1)

    def validate(self):
        if self.scenario not in SCENARIOS and self.scenario != "custom":
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.wavelength_nm and self.omega_cm:
            raise ConfigError("wavelength_nm and omega_cm are mutually exclusive")
        for key in ("tau_ps", "e0", "dt_fs", "n_bins", "n_grid", "n_v"):
            if getattr(self, key) <= 0:
                raise ConfigError(f"{key} must be positive")
        if self.n_a < 1 or self.n_x < 0:
            raise ConfigError("need n_a >= 1 and n_x >= 0")
        if abs(self.n_a - self.n_x) != 1:
            raise ConfigError("n_a must differ from n_x by one (one-photon step)")
        if self.eps_min_cm >= self.eps_max_cm or self.eps_min_cm <= 0:
            raise ConfigError("need 0 < eps_min_cm < eps_max_cm")
        if self.r_min >= self.r_max:
            raise ConfigError("need r_min < r_max")
        if self.n_grid & (self.n_grid - 1):
            raise ConfigError("n_grid must be a power of two (FFT grid)")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        for n in self.registers:
            if not 0 <= n < 2 ** self.n_v:
                raise ConfigError(f"register {n} out of range for n_v={self.n_v}")
        return self

    def to_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            out[f.name] = v
        return out


# scenario presets: key -> config overrides applied beneath user keys
SCENARIOS = {
    "linescan": {"n_v": 1, "tau_ps": 15.0, "target_eps_cm": 55.0},
    "onebit": {"n_v": 1, "registers": (0, 1), "tau_ps": 2.5,
               "target_eps_cm": 55.0},
    "twobit": {"n_v": 2, "registers": (0, 1, 2, 3), "tau_ps": 2.5,
               "target_eps_cm": 120.0},
    "fivebit": {"n_v": 5, "registers": (0, 1, 10, 31), "tau_ps": 2.5,
                "target_eps_cm": 165.0},
}

_CASTERS = {
    "registers": _parse_int_list,
    "m_symmetry": _parse_bool,
    "save_states": _parse_bool,
}


def _cast(name, raw):
    for f in fields(ExperimentConfig):
        if f.name != name:
            continue
        if name in _CASTERS:
            return _CASTERS[name](raw)
        return type(getattr(ExperimentConfig(), name))(raw)
    raise ConfigError(f"unknown configuration key {name!r}")


def parse_config(path=None, overrides=None):
    """ExperimentConfig from a flat key=value file plus override pairs.

    File format: one `key = value` per line, '#' starts a comment, blank
    lines ignored.  Overrides (a dict of already-typed or string values)
    win over file keys; scenario presets fill whatever neither sets.
    """
    raw = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}")
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            raw[key] = val
    for key, val in (overrides or {}).items():
        if val is not None:
            raw[key] = val

    try:
        typed = {k: _cast(k, v) for k, v in raw.items()}
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad configuration value: {exc}")

    scenario = typed.get("scenario", "custom")
    preset = SCENARIOS.get(scenario, {})
    merged = dict(preset)
    merged.update(typed)
    try:
        config = ExperimentConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc))
    return config.validate()


# -- carrier calibration ----------------------------------------------


def solve_levels(config, curves=None):
    """Rovibrational levels used by one experiment.

    Returns (levels_e, levels_ion): maps N -> [RovibLevel per v].  The
    E-state needs the two register components; the ion every reachable
    N+.
    """
    if curves is None:
        curves = config.curves()
    curve_e, curve_ion = curves
    grid = config.grid()
    lo, hi = config.bound_n()
    levels_e = {
        n: boundstates.solve_bound(curve_e, n, config.n_v, grid)
        for n in (lo, hi)
    }
    n_plus_set = sorted({n for (n, _ml) in angmom.ion_channels([lo, hi], 0)})
    levels_ion = {
        n: boundstates.solve_bound(curve_ion, n, config.n_v, grid)
        for n in n_plus_set
    }
    return levels_e, levels_ion


def calibrate_carrier(config, curves=None, levels=None):
    """Carrier angular frequency placing the v=0 main peak at the target.

    The main line is the N-preserving channel of the lower register
    component: eps = E(v=0, N_lo) + omega - E+(v=0, N_lo).  Raises
    ConfigError when the target or any of the n_v vibrational bands
    falls outside the energy grid.
    """
    lo_cm, hi_cm = config.eps_min_cm, config.eps_max_cm
    if not lo_cm <= config.target_eps_cm <= hi_cm:
        raise ConfigError(
            f"calibration target {config.target_eps_cm} cm^-1 outside the "
            f"energy grid [{lo_cm}, {hi_cm}]"
        )
    if levels is None:
        levels = solve_levels(config, curves)
    levels_e, levels_ion = levels
    n_lo = config.bound_n()[0]
    omega = (
        units.cm_to_hartree(config.target_eps_cm)
        - levels_e[n_lo][0].energy
        + levels_ion[n_lo][0].energy
    )
    for v in range(config.n_v):
        eps = boundstates.predict_peak(levels_e[n_lo][v], levels_ion[n_lo][v], omega)
        if eps is None or not lo_cm <= eps <= hi_cm:
            raise ConfigError(
                f"vibrational band v={v} falls at {eps} cm^-1, outside the "
                f"energy grid; no carrier places all {config.n_v} bands inside"
            )
    return omega


def resolve_omega(config, levels=None):
    """Carrier in hartree from omega_cm, wavelength_nm, or calibration."""
    if config.omega_cm:
        return units.cm_to_hartree(config.omega_cm)
    if config.wavelength_nm:
        return units.nm_to_hartree(config.wavelength_nm)
    return calibrate_carrier(config, levels=levels)


def build_band_table(config, omega, levels=None):
    """Decode windows centered on the predicted v -> v main peaks."""
    if levels is None:
        levels = solve_levels(config)
    levels_e, levels_ion = levels
    n_lo = config.bound_n()[0]
    centers = {}
    for v in range(config.n_v):
        centers[v] = boundstates.predict_peak(
            levels_e[n_lo][v], levels_ion[n_lo][v], omega
        )
    half = config.band_half_fwhm * units.spectral_fwhm_cm(config.tau_ps)
    return spectra.BandTable.from_peaks(
        centers, half, (config.eps_min_cm, config.eps_max_cm)
    )


# -- propagation workers ----------------------------------------------


def _mirror_state(state):
    """The M -> -M final state by symmetry: relabel m_l -> -m_l.

    Channel amplitudes for (M, m_l) and (-M, -m_l) have equal modulus,
    which is all the incoherent spectrum needs.
    """
    mirrored_ang = sorted((n, -ml) for (n, ml) in state.ion_ang_list)
    other = quantumstate.WavepacketState(
        state.grid, state.bins, state.bound_n_list, mirrored_ang,
        -state.m_total, state.l, state.t,
    )
    other.bound = state.bound.copy()
    for k, (n, ml) in enumerate(state.ion_ang_list):
        other.ion[mirrored_ang.index((n, -ml))] = state.ion[k]
    return other


def _run_one(config, omega, n, m_total, components=("lower", "upper")):
    """Propagate one (register, M) pair; used directly or via the pool."""
    curves = config.curves()
    grid, bins = config.grid(), config.bins()
    levels_e, _ = solve_levels(config, curves)
    register = quantumstate.encode(n, config.n_v)
    initial = quantumstate.assemble_initial(
        register, levels_e, config.n_a, config.n_x, m_total, grid, bins,
        components=components,
    )
    pulse = propagator.PulseParams(config.e0, omega, config.tau_ps)
    prop_config = propagator.PropagationConfig(
        dt_fs=config.dt_fs,
        defects=config.defects(),
        dipole_const=config.moments(),
    )
    return propagator.propagate(initial, curves[0], curves[1], pulse, prop_config)


def _pool_task(args):
    config_dict, omega, n, m_total, components = args
    config = ExperimentConfig(**config_dict)
    return (n, m_total), _run_one(config, omega, n, m_total, components)


def run_register(config, omega, n, executor=None, components=("lower", "upper")):
    """Final states for every M of one register value."""
    m_values = list(range(-config.n_x, config.n_x + 1))
    run_ms = [m for m in m_values if m >= 0] if config.m_symmetry else m_values
    if executor is None:
        results = {m: _run_one(config, omega, n, m, components) for m in run_ms}
    else:
        cd = _config_fields(config)
        futs = {
            m: executor.submit(_pool_task, (cd, omega, n, m, components))
            for m in run_ms
        }
        results = {m: futs[m].result()[1] for m in run_ms}
    if config.m_symmetry:
        for m in run_ms:
            if m > 0:
                results[-m] = _mirror_state(results[m])
    return {m: results[m] for m in sorted(results)}


def _config_fields(config):
    return {f.name: getattr(config, f.name) for f in fields(config)}


# -- file outputs ------------------------------------------------------


def write_spectrum(path, spec):
    """Delimiter-separated spectrum: eps, total, one column per N+."""
    n_plus_cols = sorted(spec.per_n_plus)
    with open(path, "w") as fh:
        fh.write("# photoelectron spectrum (arbitrary units)\n")
        cols = ["eps_cm", "P_total"] + [f"P_Nplus{n}" for n in n_plus_cols]
        fh.write("# " + "\t".join(cols) + "\n")
        for i, eps in enumerate(spec.eps_cm):
            row = [f"{eps:.6f}", f"{spec.total[i]:.12e}"]
            row += [f"{spec.per_n_plus[n][i]:.12e}" for n in n_plus_cols]
            fh.write("\t".join(row) + "\n")


def _grid_hash(config):
    h = hashlib.sha256()
    h.update(config.grid().r.tobytes())
    h.update(config.bins().centers.tobytes())
    return h.hexdigest()[:16]


def write_meta(path, config, extras):
    rows = dict(sorted(config.to_dict().items()))
    rows.update(extras)
    rows["version"] = __version__
    rows["grid_hash"] = _grid_hash(config)
    with open(path, "w") as fh:
        for key, val in rows.items():
            fh.write(f"{key} = {val}\n")


# -- top-level experiment ---------------------------------------------


def run_experiment(config, progress=None):
    """Full pipeline for one configuration; returns a result dict.

    Writes spectra, signal differences, decode report and manifest into
    config.outdir.  DecodeAmbiguity (if any band is unreadable) is
    raised only after every artifact has been written.
    """
    say = progress or (lambda msg: None)
    outdir = Path(config.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    curves = config.curves()
    levels = solve_levels(config, curves)
    omega = resolve_omega(config, levels=levels)
    result = {
        "omega_cm": units.hartree_to_cm(omega),
        "files": [],
        "decoded": {},
    }

    executor = None
    if config.workers > 1:
        executor = concurrent.futures.ProcessPoolExecutor(config.workers)
    try:
        if config.scenario == "linescan":
            _run_single_level_scans(config, omega, outdir, result, say, executor)
        else:
            _run_register_scenario(
                config, omega, curves, levels, outdir, result, say, executor
            )
    finally:
        if executor is not None:
            executor.shutdown()

    manifest = outdir / "manifest.txt"
    extras = {"omega_cm_calibrated": f"{result['omega_cm']:.6f}"}
    if "contrast" in result:
        extras["contrast"] = f"{result['contrast']:.6f}"
    for n, dec in sorted(result["decoded"].items()):
        extras[f"decoded_n{n}"] = dec
    extras["outputs"] = ",".join(sorted(result["files"]))
    write_meta(manifest, config, extras)
    result["files"].append(manifest.name)

    if result.get("ambiguities"):
        raise result["ambiguities"][0]
    return result


def _run_single_level_scans(config, omega, outdir, result, say, executor):
    """Scenario linescan: one rotational level at a time, two defect
    models, long and short pulses."""
    iso = {"mu_sigma": 0.1, "mu_pi": 0.1, "d_sigma": 1.0, "d_pi": 1.0}
    variants = [("li2", {}), ("iso", iso)]
    lo, hi = config.bound_n()
    for tag, over in variants:
        sub = replace(config, **over)
        for n_e, comp in ((lo, ("lower",)), (hi, ("upper",))):
            for tau in (config.tau_ps, 2.5):
                say(f"linescan run: {tag} N_E={n_e} tau={tau} ps")
                run_cfg = replace(sub, tau_ps=tau)
                states = run_register(run_cfg, omega, 0, executor, comp)
                spec = spectra.energy_spectrum(
                    states, {"level": n_e, "defects": tag, "tau_ps": tau}
                )
                name = f"spectrum_{tag}_ne{n_e}_tau{tau:g}.tsv"
                write_spectrum(outdir / name, spec)
                write_meta(
                    outdir / (name[:-4] + ".meta"), run_cfg,
                    {"level": n_e, "defects": tag,
                     "omega_cm": f"{result['omega_cm']:.6f}"},
                )
                result["files"] += [name, name[:-4] + ".meta"]


def _run_register_scenario(config, omega, curves, levels, outdir, result, say,
                           executor):
    all_ones = 2 ** config.n_v - 1
    regs = sorted(set(config.registers) | {0, all_ones})
    levels_e, levels_ion = levels
    n_lo = config.bound_n()[0]

    specs = {}
    for n in regs:
        say(f"register n={n} ({config.n_v} bits)")
        states = run_register(config, omega, n, executor)
        specs[n] = spectra.energy_spectrum(states, {"register": n})
        name = f"spectrum_n{n}.tsv"
        write_spectrum(outdir / name, specs[n])
        write_meta(
            outdir / (name[:-4] + ".meta"), config,
            {"register": n, "omega_cm": f"{result['omega_cm']:.6f}"},
        )
        result["files"] += [name, name[:-4] + ".meta"]
        if config.save_states:
            for m, st in states.items():
                sname = f"state_n{n}_M{m}.npz"
                st.save(outdir / sname)
                result["files"].append(sname)

    band_table = build_band_table(config, omega, levels)
    calibration = spectra.DecodeCalibration.from_runs(
        specs[all_ones], specs[0], band_table
    )
    result["contrast"] = calibration.contrast
    result["band_table"] = band_table

    fc_by_v = {
        v: boundstates.franck_condon(levels_e[n_lo][v], levels_ion[n_lo][v]) ** 2
        for v in range(config.n_v)
    }
    ambiguities = []
    for n in regs:
        sdiff = spectra.signal_difference(specs[n], specs[0])
        name = f"sdiff_n{n}.tsv"
        write_spectrum(outdir / name, sdiff)
        result["files"].append(name)
        if config.n_v > 1:
            renorm = spectra.fc_renormalize(sdiff, band_table, fc_by_v)
            rname = f"srenorm_n{n}.tsv"
            write_spectrum(outdir / rname, renorm)
            result["files"].append(rname)
        try:
            decoded, report = spectra.decode(
                specs[n], band_table, calibration, guard=config.guard
            )
            result["decoded"][n] = decoded
            say(f"decode n={n} -> {decoded} "
                + " ".join(f"v{v}:{r:.3f}" for v, (r, _b) in sorted(report.items())))
        except spectra.DecodeAmbiguity as exc:
            result["decoded"][n] = f"ambiguous: {exc}"
            ambiguities.append(exc)

    report_name = "decode_report.txt"
    with open(outdir / report_name, "w") as fh:
        fh.write(f"# register decode report (contrast {calibration.contrast:.4f})\n")
        for (v, lo, hi, c) in band_table.windows:
            fh.write(f"# band v={v}: [{lo:.2f}, {hi:.2f}] cm^-1, center {c:.2f}\n")
        for n in regs:
            fh.write(f"n={n} -> {result['decoded'][n]}\n")
    result["files"].append(report_name)
    result["ambiguities"] = ambiguities
    result["spectra"] = specs

"""Scenario configuration: defaults, validation, and YAML round-tripping.

A scenario bundles every parameter of a detector-evaluation run. Missing
keys fall back to the default system parameters; unknown keys are rejected
rather than ignored. Concentration-valued overrides may be given in
mol/m^3 and are converted to molecules/m^3 internally.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, replace

import yaml

from ..channel import ChannelSpec, ReleaseEvent, received_concentration
from ..constants import CODATA
from ..kinetics import ConcentrationPair, InterfererModel, LigandKinetics
from ..spectral import PsdModelParams
from ..transduction import ReceiverSpec

SWEEP_VARIABLES = ("gamma", "eta", "N", "dt")


class ScenarioError(ValueError):
    """Raised when a scenario mapping fails validation."""


DEFAULTS: dict = {
    "channel": {
        "T": 300.0,
        "h_ch": 5.0e-6,
        "l_ch": 1.0e-5,
        "u": 1.0e-5,
        "D_0": 2.0e-11,
        "x_R": 1.0e-3,
    },
    "receiver": {
        "N_r": 120,
        "r": 2.0e-9,
        "N_e": 3,
        "g": 1.9044e-4,
        "c_q": 2.0e-2,
        "l_gr": 1.0e-5,
        "A_gr": None,
        "c_ion": 30.0,
        "eps_rel": 80.0,
        "S_f1Hz": 1.0e-23,
        "beta": 1.0,
    },
    "kinetics": {
        "k_plus_m": 4.0e-17,
        "k_minus_m": 2.0,
        "k_plus_i": 4.0e-17,
        "k_minus_i": 8.0,
    },
    "release": {
        "N_m0": 1000,
        "N_m1": 5000,
    },
    "interference": {
        "gamma": 1.0,
        "mean_to_std": 10.0,
        "mu_ci": None,
        "concentration_unit": "molecules_per_m3",
    },
    "sampling": {
        "N": 700,
        "dt": 0.005,
    },
    "detector": {
        "tdd_band": None,
        "lorentzian_threshold": False,
        "alias_folds": 8,
    },
    "sweep": {
        "variable": "gamma",
        "values": [1.0],
    },
    "trials": 0,
    "seed": 1,
}


@dataclass(frozen=True)
class Scenario:
    """Fully validated run configuration."""

    channel: ChannelSpec
    receiver: ReceiverSpec
    kin_m: LigandKinetics
    kin_i: LigandKinetics
    n_m0: int
    n_m1: int
    gamma: float
    mean_to_std: float
    mu_ci_override: float | None
    n_samples: int
    dt: float
    tdd_band: tuple[float, float]
    lorentzian_threshold: bool
    alias_folds: int
    sweep_variable: str
    sweep_values: tuple[float, ...]
    trials: int
    seed: int

    # Derived quantities -------------------------------------------------

    def received(self, bit: int) -> float:
        """Sampling-time information concentration for the given bit."""
        n_m = self.n_m1 if bit else self.n_m0
        return received_concentration(ReleaseEvent(N_m=n_m), self.channel)

    def interferer(self) -> InterfererModel:
        mu = self.mu_ci_override
        if mu is None:
            mu = self.gamma * self.received(1)
        return InterfererModel(mu_ci=mu, sigma_ci=mu / self.mean_to_std)

    def psd_params(self, lam: ConcentrationPair | None = None) -> PsdModelParams:
        if lam is None:
            lam = ConcentrationPair(c_m=self.received(1), c_i=self.interferer().mu_ci)
        return PsdModelParams(lam=lam, kin_m=self.kin_m, kin_i=self.kin_i,
                              receiver=self.receiver, temperature=self.channel.T)


def _fail(path: str, message: str):
    raise ScenarioError(f"{path}: {message}")


def _as_float(value, path: str) -> float:
    # YAML 1.1 parses exponent-only literals like 5e-6 as strings; accept them.
    if isinstance(value, bool):
        _fail(path, "expected a number")
    try:
        return float(value)
    except (TypeError, ValueError):
        _fail(path, f"expected a number, got {value!r}")


def _as_int(value, path: str) -> int:
    f = _as_float(value, path)
    if f != int(f):
        _fail(path, f"expected an integer, got {value!r}")
    return int(f)


def _merge_section(defaults: dict, user, path: str) -> dict:
    if user is None:
        return copy.deepcopy(defaults)
    if not isinstance(user, dict):
        _fail(path, "expected a mapping")
    unknown = sorted(set(user) - set(defaults))
    if unknown:
        _fail(path, f"unknown keys: {', '.join(unknown)}")
    merged = copy.deepcopy(defaults)
    merged.update(user)
    return merged


def scenario_from_mapping(mapping: dict | None) -> Scenario:
    """Validate a configuration mapping and build a Scenario.

    Missing sections default to the standard system parameters; unknown keys
    raise ScenarioError naming the offending field.
    """
    if mapping is None:
        mapping = {}
    if not isinstance(mapping, dict):
        raise ScenarioError("scenario: expected a mapping at the top level")
    top = _merge_section(DEFAULTS, mapping, "scenario")
    cfg = {
        key: _merge_section(DEFAULTS[key], mapping.get(key), key)
        for key in ("channel", "receiver", "kinetics", "release", "interference",
                    "sampling", "detector", "sweep")
    }

    def build(section, factory, fields):
        kwargs = {}
        for name, (kind, target) in fields.items():
            raw = cfg[section][name]
            path = f"{section}.{name}"
            if raw is None and kind == "optional_float":
                kwargs[target] = None
            elif kind == "float":
                kwargs[target] = _as_float(raw, path)
            elif kind == "optional_float":
                kwargs[target] = _as_float(raw, path)
            elif kind == "int":
                kwargs[target] = _as_int(raw, path)
        try:
            return factory(**kwargs)
        except ValueError as exc:
            raise ScenarioError(f"{section}: {exc}") from exc

    chan = build("channel", ChannelSpec, {
        "h_ch": ("float", "h_ch"), "l_ch": ("float", "l_ch"), "u": ("float", "u"),
        "D_0": ("float", "D_0"), "x_R": ("float", "x_R"), "T": ("float", "T"),
    })
    if _as_int(cfg["receiver"]["N_r"], "receiver.N_r") < 1:
        _fail("receiver.N_r", "must be positive")
    rx = build("receiver", ReceiverSpec, {
        "N_r": ("int", "N_r"), "r": ("float", "r"), "N_e": ("int", "N_e"),
        "g": ("float", "g"), "c_q": ("float", "c_q"), "l_gr": ("float", "l_gr"),
        "A_gr": ("optional_float", "A_gr"), "c_ion": ("float", "c_ion"),
        "eps_rel": ("float", "eps_rel"), "S_f1Hz": ("float", "S_f1Hz"),
        "beta": ("float", "beta"),
    })
    try:
        kin_m = LigandKinetics(k_plus=_as_float(cfg["kinetics"]["k_plus_m"], "kinetics.k_plus_m"),
                               k_minus=_as_float(cfg["kinetics"]["k_minus_m"], "kinetics.k_minus_m"))
        kin_i = LigandKinetics(k_plus=_as_float(cfg["kinetics"]["k_plus_i"], "kinetics.k_plus_i"),
                               k_minus=_as_float(cfg["kinetics"]["k_minus_i"], "kinetics.k_minus_i"))
    except ValueError as exc:
        raise ScenarioError(f"kinetics: {exc}") from exc

    n_m0 = _as_int(cfg["release"]["N_m0"], "release.N_m0")
    n_m1 = _as_int(cfg["release"]["N_m1"], "release.N_m1")
    if n_m0 < 0 or n_m1 < 0:
        _fail("release", "molecule counts must be nonnegative")
    if not n_m0 < n_m1:
        _fail("release", "N_m0 must be smaller than N_m1")

    gamma = _as_float(cfg["interference"]["gamma"], "interference.gamma")
    mts = _as_float(cfg["interference"]["mean_to_std"], "interference.mean_to_std")
    if gamma <= 0:
        _fail("interference.gamma", "must be positive")
    if mts <= 0:
        _fail("interference.mean_to_std", "must be positive")
    mu_override = cfg["interference"]["mu_ci"]
    if mu_override is not None:
        mu_override = _as_float(mu_override, "interference.mu_ci")
        unit = cfg["interference"]["concentration_unit"]
        if unit == "mol_per_m3":
            mu_override *= CODATA.N_A
        elif unit != "molecules_per_m3":
            _fail("interference.concentration_unit",
                  "must be 'molecules_per_m3' or 'mol_per_m3'")
        if mu_override <= 0:
            _fail("interference.mu_ci", "must be positive")

    n = _as_int(cfg["sampling"]["N"], "sampling.N")
    dt = _as_float(cfg["sampling"]["dt"], "sampling.dt")
    if n < 4 or n % 2 != 0:
        _fail("sampling.N", "must be even and at least 4")
    if dt <= 0:
        _fail("sampling.dt", "must be positive")

    band = cfg["detector"]["tdd_band"]
    if band is None:
        # Pinned to the base sampling window; sweeps over N or dt change the
        # periodogram grid only, never the one-shot detector's noise band.
        band = (1.0 / (n * dt), 1.0 / (2.0 * dt))
    else:
        if not isinstance(band, (list, tuple)) or len(band) != 2:
            _fail("detector.tdd_band", "expected [f_low, f_high]")
        band = (_as_float(band[0], "detector.tdd_band[0]"),
                _as_float(band[1], "detector.tdd_band[1]"))
        if not 0 < band[0] <= band[1]:
            _fail("detector.tdd_band", "need 0 < f_low <= f_high")
    lorentzian = cfg["detector"]["lorentzian_threshold"]
    if not isinstance(lorentzian, bool):
        _fail("detector.lorentzian_threshold", "expected true/false")
    alias_folds = _as_int(cfg["detector"]["alias_folds"], "detector.alias_folds")
    if alias_folds < 0:
        _fail("detector.alias_folds", "must be nonnegative (0 disables folding)")

    variable = cfg["sweep"]["variable"]
    if variable not in SWEEP_VARIABLES:
        _fail("sweep.variable", f"must be one of {', '.join(SWEEP_VARIABLES)}")
    raw_values = cfg["sweep"]["values"]
    if not isinstance(raw_values, (list, tuple)) or not raw_values:
        _fail("sweep.values", "expected a non-empty list of numbers")
    values = tuple(_as_float(v, f"sweep.values[{k}]") for k, v in enumerate(raw_values))
    for k, v in enumerate(values):
        if v <= 0:
            _fail(f"sweep.values[{k}]", "must be positive")
        if variable == "N" and (v != int(v) or int(v) % 2 != 0 or v < 4):
            _fail(f"sweep.values[{k}]", "N values must be even integers >= 4")

    trials = _as_int(top["trials"], "trials")
    if trials < 0:
        _fail("trials", "must be nonnegative")
    seed = _as_int(top["seed"], "seed")
    if seed < 0:
        _fail("seed", "must be nonnegative")

    return Scenario(channel=chan, receiver=rx, kin_m=kin_m, kin_i=kin_i,
                    n_m0=n_m0, n_m1=n_m1, gamma=gamma, mean_to_std=mts,
                    mu_ci_override=mu_override, n_samples=n, dt=dt,
                    tdd_band=band, lorentzian_threshold=lorentzian,
                    alias_folds=alias_folds,
                    sweep_variable=variable, sweep_values=values,
                    trials=trials, seed=seed)


def scenario_to_mapping(scn: Scenario) -> dict:
    """Fully explicit mapping reproducing this scenario (round-trip safe)."""
    return {
        "channel": {
            "T": scn.channel.T, "h_ch": scn.channel.h_ch, "l_ch": scn.channel.l_ch,
            "u": scn.channel.u, "D_0": scn.channel.D_0, "x_R": scn.channel.x_R,
        },
        "receiver": {
            "N_r": scn.receiver.N_r, "r": scn.receiver.r, "N_e": scn.receiver.N_e,
            "g": scn.receiver.g, "c_q": scn.receiver.c_q, "l_gr": scn.receiver.l_gr,
            "A_gr": scn.receiver.A_gr, "c_ion": scn.receiver.c_ion,
            "eps_rel": scn.receiver.eps_rel, "S_f1Hz": scn.receiver.S_f1Hz,
            "beta": scn.receiver.beta,
        },
        "kinetics": {
            "k_plus_m": scn.kin_m.k_plus, "k_minus_m": scn.kin_m.k_minus,
            "k_plus_i": scn.kin_i.k_plus, "k_minus_i": scn.kin_i.k_minus,
        },
        "release": {"N_m0": scn.n_m0, "N_m1": scn.n_m1},
        "interference": {
            "gamma": scn.gamma, "mean_to_std": scn.mean_to_std,
            "mu_ci": scn.mu_ci_override, "concentration_unit": "molecules_per_m3",
        },
        "sampling": {"N": scn.n_samples, "dt": scn.dt},
        "detector": {
            "tdd_band": [scn.tdd_band[0], scn.tdd_band[1]],
            "lorentzian_threshold": scn.lorentzian_threshold,
            "alias_folds": scn.alias_folds,
        },
        "sweep": {"variable": scn.sweep_variable, "values": list(scn.sweep_values)},
        "trials": scn.trials,
        "seed": scn.seed,
    }


def load_scenario(path) -> Scenario:
    """Parse and validate a YAML scenario file."""
    with open(path, "r", encoding="utf-8") as fh:
        mapping = yaml.safe_load(fh)
    return scenario_from_mapping(mapping)


def save_scenario(scn: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(scenario_to_mapping(scn), fh, sort_keys=False)


def with_sampling(scn: Scenario, n: int | None = None, dt: float | None = None) -> Scenario:
    """Copy with a different periodogram sampling configuration."""
    return replace(scn, n_samples=scn.n_samples if n is None else n,
                   dt=scn.dt if dt is None else dt)

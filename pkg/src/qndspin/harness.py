"""Experiment runner: configs, engines, figure-family reproduction, sweeps.

Every run is deterministic: identical configs produce bit-identical CSV.
The CSV schema is fixed to

    time_omega_t, engine, mean_x, mean_p, var_x, var_p, regime_flag

with the full parameter set echoed in ``#`` header lines.  Engine failures
are recorded per row (nan values, regime_flag "error") and surface as a
nonzero count in the run report.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import closed_forms, core, exact, husimi, hybrid
from .core import MomentSet, SystemParams
from .spin import build_spin_matrices

ENGINES = ("exact", "hybrid-numeric", "closed-form")
CSV_COLUMNS = (
    "time_omega_t", "engine", "mean_x", "mean_p", "var_x", "var_p", "regime_flag"
)
Q_SNAPSHOTS = (0.0, 50.0, 100.0, 150.0, 200.0, 300.0)

_PRESETS = {
    "fig-variances": core.preset_variances,
    "fig-qfunction": core.preset_qfunction,
    "fig-means": core.preset_means,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One run: physical params, time grid, outcome policy, engines, output."""

    params: SystemParams
    t_max_omega: float = 120.0
    steps: int = 241
    outcome_policy: str = "most-probable-balanced"
    n_c: int | None = None
    n_d: int | None = None
    engines: tuple[str, ...] = ENGINES
    out_dir: str = "out"
    snapshots: tuple[float, ...] = Q_SNAPSHOTS
    q_grid_nu_max: float = 5.0
    q_grid_resolution: int = 201
    label: str = "run"

    def omega_t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max_omega, self.steps)

    def resolve_outcome(self) -> tuple[int, int]:
        """(n_c, n_d) under the configured policy.

        most-probable-balanced: total T = round(|alpha_l|^2 + |alpha_r|^2),
        n_c = T // 2, n_d = T - n_c (so n_d = n_c + 1 when T is odd).
        """
        if self.outcome_policy == "explicit":
            if self.n_c is None or self.n_d is None:
                raise ValueError("explicit outcome policy requires n_c and n_d")
            return self.n_c, self.n_d
        if self.outcome_policy != "most-probable-balanced":
            raise ValueError(f"unknown outcome policy {self.outcome_policy!r}")
        total = round(self.params.total_intensity)
        n_c = total // 2
        return n_c, total - n_c


def config_from_file(path, overrides=None) -> ExperimentConfig:
    """Parse a flat key-value config with section headers (INI layout).

    [system] atom_number, omega, g or g_ratio (g = g_ratio*omega/N),
             alpha_l, alpha_r, excited_fraction_abs, phase_alpha
    [time]   t_max_omega, steps
    [outcome] policy, n_c, n_d
    [engines] use (comma list)
    [output] dir, label
    [qgrid]  snapshots, nu_max, resolution
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    with open(path) as fh:
        cp.read_file(fh)
    sys_sec = cp["system"]
    n = sys_sec.getint("atom_number")
    omega = sys_sec.getfloat("omega", math.pi / 4)
    if "g" in sys_sec:
        g = sys_sec.getfloat("g")
    else:
        g = sys_sec.getfloat("g_ratio", 0.1) * omega / n
    mag = sys_sec.getfloat("excited_fraction_abs", 0.0)
    phase = sys_sec.getfloat("phase_alpha", 0.0)
    params = SystemParams.create(
        atom_number=n,
        omega=omega,
        g=g,
        alpha_l=sys_sec.getfloat("alpha_l"),
        alpha_r=sys_sec.getfloat("alpha_r"),
        excited_fraction=mag * complex(math.cos(phase), math.sin(phase)),
    )
    kwargs = {"params": params}
    if cp.has_section("time"):
        if cp.has_option("time", "t_max_omega"):
            kwargs["t_max_omega"] = cp["time"].getfloat("t_max_omega")
        if cp.has_option("time", "steps"):
            kwargs["steps"] = cp["time"].getint("steps")
    if cp.has_section("outcome"):
        kwargs["outcome_policy"] = cp["outcome"].get("policy", "most-probable-balanced")
        if cp.has_option("outcome", "n_c"):
            kwargs["n_c"] = cp["outcome"].getint("n_c")
        if cp.has_option("outcome", "n_d"):
            kwargs["n_d"] = cp["outcome"].getint("n_d")
    if cp.has_section("engines") and cp.has_option("engines", "use"):
        kwargs["engines"] = tuple(
            e.strip() for e in cp["engines"].get("use").split(",") if e.strip()
        )
    if cp.has_section("output"):
        if cp.has_option("output", "dir"):
            kwargs["out_dir"] = cp["output"].get("dir")
        if cp.has_option("output", "label"):
            kwargs["label"] = cp["output"].get("label")
    if cp.has_section("qgrid"):
        if cp.has_option("qgrid", "snapshots"):
            kwargs["snapshots"] = tuple(
                float(s) for s in cp["qgrid"].get("snapshots").split(",")
            )
        if cp.has_option("qgrid", "nu_max"):
            kwargs["q_grid_nu_max"] = cp["qgrid"].getfloat("nu_max")
        if cp.has_option("qgrid", "resolution"):
            kwargs["q_grid_resolution"] = cp["qgrid"].getint("resolution")
    if overrides:
        kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


def preset_config(family: str, **overrides) -> ExperimentConfig:
    """Built-in parameter sets for each figure family."""
    if family == "fig-variances-imperfect":
        raise ValueError("imperfect family has two presets; use preset_configs_imperfect")
    if family not in _PRESETS:
        raise ValueError(f"unknown family {family!r}")
    defaults = {
        "fig-variances": {"t_max_omega": 160.0, "steps": 321, "label": "variances"},
        "fig-qfunction": {"t_max_omega": 300.0, "steps": 61, "label": "qfunction"},
        "fig-means": {"t_max_omega": 60.0, "steps": 241, "label": "means"},
    }[family]
    kwargs = {"params": _PRESETS[family](), **defaults}
    kwargs.update(overrides)
    return ExperimentConfig(**kwargs)


def preset_configs_imperfect(**overrides) -> tuple[ExperimentConfig, ExperimentConfig]:
    base = {"t_max_omega": 63.0, "steps": 127}
    base.update(overrides)
    a = ExperimentConfig(
        params=core.preset_variances_imperfect_small(),
        **{"label": "variances_imperfect_alpha_0p01", **base},
    )
    b = ExperimentConfig(
        params=core.preset_variances_imperfect_large(),
        **{"label": "variances_imperfect_alpha_sqrt0p001", **base},
    )
    return a, b


# ---------------------------------------------------------------------------
# engines
# ---------------------------------------------------------------------------


def _param_echo(config: ExperimentConfig) -> list[str]:
    p = config.params
    n_c, n_d = config.resolve_outcome()
    rep = closed_forms.validity_time(p)
    return [
        f"atom_number={p.atom_number}",
        f"omega={p.omega!r}",
        f"g={p.g!r}",
        f"kappa={p.kappa!r}",
        f"alpha_l={p.alpha_l!r}",
        f"alpha_r={p.alpha_r!r}",
        f"excited_fraction={p.excited_fraction!r}",
        f"ground_fraction={p.ground_fraction!r}",
        f"outcome_policy={config.outcome_policy}",
        f"n_c={n_c}",
        f"n_d={n_d}",
        f"omega_t_star={rep.omega_t_star!r}",
        f"engines={','.join(config.engines)}",
    ]


class _ExactEngine:
    """Conditioned moments from the exact trajectory."""

    name = "exact"

    def __init__(self, config: ExperimentConfig):
        p = config.params
        self._t_grid = config.omega_t_grid() / p.omega
        self._traj = exact.evolve_exact(p, self._t_grid)
        self._mats = build_spin_matrices(p.atom_number, basis="jx")
        self._outcome = config.resolve_outcome()

    def moments(self, i: int, t: float) -> MomentSet:
        state = exact.conditional_state_exact(self._traj, t, *self._outcome)
        return exact.exact_moments(state, self._mats)


class _HybridEngine:
    """Conditioned oscillator moments in the large-N picture."""

    name = "hybrid-numeric"

    def __init__(self, config: ExperimentConfig):
        self._params = config.params
        self._outcome = config.resolve_outcome()
        self._initial = hybrid.initial_hp_state(config.params)

    def moments(self, i: int, t: float) -> MomentSet:
        state = hybrid.hp_conditional_state_numeric(
            self._params, *self._outcome, t, initial=self._initial
        )
        return hybrid.hp_moments(state)

    def state(self, t: float) -> hybrid.HPState:
        return hybrid.hp_conditional_state_numeric(
            self._params, *self._outcome, t, initial=self._initial
        )


class _ClosedFormEngine:
    """Short-time analytic means and variances."""

    name = "closed-form"

    def __init__(self, config: ExperimentConfig):
        self._params = config.params

    def moments(self, i: int, t: float) -> MomentSet:
        var_x, var_p = closed_forms.approx_variances(self._params, t)
        if self._params.excited_fraction == 0:
            mean_x, mean_p = 0.0, 0.0
        else:
            mean_x, mean_p = closed_forms.approx_means_imperfect(self._params, t)
        return MomentSet(
            mean_x=mean_x, mean_p=mean_p, var_x=var_x, var_p=var_p,
            engine=self.name,
        )


_ENGINE_TYPES = {
    "exact": _ExactEngine,
    "hybrid-numeric": _HybridEngine,
    "closed-form": _ClosedFormEngine,
}


@dataclass
class RunReport:
    """Output paths plus per-row failure records."""

    csv_paths: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _moment_rows(config: ExperimentConfig, report: RunReport):
    """Rows of the fixed schema for every (time, engine) pair."""
    p = config.params
    omega_ts = config.omega_t_grid()
    rep = closed_forms.validity_time(p)
    engines = []
    for name in config.engines:
        if name not in _ENGINE_TYPES:
            raise ValueError(f"unknown engine {name!r}")
        try:
            engines.append(_ENGINE_TYPES[name](config))
        except Exception as err:  # engine construction failed: all rows fail
            engines.append((name, err))
            report.failures.append((name, "construction", repr(err)))
    rows = []
    for i, ot in enumerate(omega_ts):
        t = ot / p.omega
        flag = "inside" if ot < rep.omega_t_star else "outside"
        for eng in engines:
            if isinstance(eng, tuple):
                name = eng[0]
                rows.append([_fmt(ot), name, "nan", "nan", "nan", "nan", "error"])
                continue
            try:
                mo = eng.moments(i, t)
                rows.append([
                    _fmt(ot), eng.name,
                    _fmt(mo.mean_x), _fmt(mo.mean_p),
                    _fmt(mo.var_x), _fmt(mo.var_p), flag,
                ])
            except Exception as err:
                report.failures.append((eng.name, ot, repr(err)))
                rows.append([_fmt(ot), eng.name, "nan", "nan", "nan", "nan", "error"])
    return rows


def _write_csv(path: Path, header_lines, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)


def run_fig_variances(config: ExperimentConfig) -> RunReport:
    """Conditional variances vs Omega t for every requested engine."""
    report = RunReport()
    rows = _moment_rows(config, report)
    path = Path(config.out_dir) / f"{config.label}.csv"
    _write_csv(path, _param_echo(config), rows)
    report.csv_paths.append(path)
    return report


def run_fig_means(config: ExperimentConfig) -> RunReport:
    """Conditional means vs Omega t (same schema; means carry the signal)."""
    return run_fig_variances(config)


def run_fig_variances_imperfect(configs=None, **overrides) -> RunReport:
    """Both imperfect-polarization presets, one CSV each."""
    if configs is None:
        configs = preset_configs_imperfect(**overrides)
    report = RunReport()
    for cfg in configs:
        sub = run_fig_variances(cfg)
        report.csv_paths.extend(sub.csv_paths)
        report.failures.extend(sub.failures)
    return report


def run_fig_qfunction(config: ExperimentConfig) -> RunReport:
    """Q-function snapshots of the conditional oscillator state.

    One grid CSV per snapshot (columns re_nu, im_nu, q_value).
    """
    report = RunReport()
    p = config.params
    engine = _HybridEngine(config)
    spec = husimi.GridSpec(nu_max=config.q_grid_nu_max, resolution=config.q_grid_resolution)
    for ot in config.snapshots:
        t = ot / p.omega
        path = Path(config.out_dir) / f"{config.label}_omegat_{ot:g}.csv"
        try:
            state = engine.state(t)
            grid = husimi.q_function_numeric(state, spec)
            husimi.write_qgrid_csv(
                grid, path,
                header_lines=_param_echo(config) + [f"omega_t={ot!r}"],
            )
        except Exception as err:
            report.failures.append(("hybrid-numeric", ot, repr(err)))
            continue
        report.csv_paths.append(path)
    return report


def sweep(configs) -> dict:
    """Per-config squeezing summary over a list of configs.

    Summaries are keyed in input order and report the minimum var_x per
    engine, its location, the validity time, and uncertainty products.
    """
    out = {"runs": []}
    for cfg in configs:
        report = RunReport()
        rows = _moment_rows(cfg, report)
        rep = closed_forms.validity_time(cfg.params)
        per_engine = {}
        for row in rows:
            ot, engine = float(row[0]), row[1]
            if row[6] == "error":
                continue
            var_x, var_p = float(row[4]), float(row[5])
            entry = per_engine.setdefault(
                engine, {"min_var_x": math.inf, "argmin_omega_t": math.nan,
                         "max_uncertainty_product": 0.0}
            )
            if var_x < entry["min_var_x"]:
                entry["min_var_x"] = var_x
                entry["argmin_omega_t"] = ot
            entry["max_uncertainty_product"] = max(
                entry["max_uncertainty_product"], var_x * var_p
            )
        out["runs"].append({
            "label": cfg.label,
            "omega_t_star": rep.omega_t_star,
            "engines": per_engine,
            "failures": len(report.failures),
        })
    return out


def write_sweep_json(summary: dict, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

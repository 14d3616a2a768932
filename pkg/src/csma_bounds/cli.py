"""Command-line front end.

Every run is described by a flat JSON config whose keys can each be
overridden by a flag of the same name, e.g. ``--d2_m 36``. Outputs are
written to a temporary file and renamed into place only on success.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, fields

import numpy as np

from . import codes, planner, validation
from .bounds import Scenario, bound_curve, make_grid, select_dmax
from .geometry import RadioEnvironment, max_interferer_count


class ConfigError(ValueError):
    """A configuration value breaks a precondition."""


@dataclass
class RunConfig:
    p_t: float = 1.0
    eta: float = 2.2
    sigma_db: float = 2.0
    d1_m: float = 6.0
    d2_m: float = 18.0
    scenario: str = "dense"
    m_flows: int = 1
    d_min_m: float = 1.0
    d_max_m: float = 5.0
    d_step_m: float = 0.1
    samples: int = 50_000
    seed: int = 0
    sir_th_db: float = -5.0
    sir_th_min_db: float = -5.0
    sir_th_max_db: float = 5.0
    sir_th_step_db: float = 1.0
    gamma: float = 0.1
    kappa: float = 0.5
    n_codes: int = 1
    n_max: int = 0
    n_interferers_override: int = 0
    path_length_m: float = 100.0
    flows: str = ""
    trials: int = 1000
    trial_samples: int = 2000
    expected_candidates: float = 1000.0
    endpoint_sets: int = 500
    points_per_m: float = 10.0
    out: str = ""

    def check(self) -> "RunConfig":
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        try:
            self.env()
        except ValueError as exc:
            raise ConfigError(f"radio environment: {exc}") from None
        try:
            self.scenario_obj()
        except ValueError as exc:
            raise ConfigError(f"scenario: {exc}") from None
        need(self.d_step_m > 0, "d_step_m must be > 0")
        need(0 < self.d_min_m <= self.d_max_m, "need 0 < d_min_m <= d_max_m")
        need(self.d_min_m < self.d1_m, "d_min_m must be below d1_m")
        need(self.grid()[-1] < self.d1_m, "distance grid must stay below d1_m")
        need(self.samples >= 1, "samples must be >= 1")
        need(self.seed >= 0 and self.seed < 2**64, "seed must be an unsigned 64-bit integer")
        need(0 < self.gamma <= 0.5, "gamma must lie in (0, 0.5]")
        need(0.5 <= self.kappa < 1, "kappa must lie in [0.5, 1)")
        need(self.n_codes >= 1, "n_codes must be >= 1")
        need(self.n_max >= 0, "n_max must be >= 0 (0 means derive from geometry)")
        need(self.n_interferers_override >= 0, "n_interferers_override must be >= 0")
        need(self.path_length_m > 0, "path_length_m must be > 0")
        need(self.sir_th_step_db > 0, "sir_th_step_db must be > 0")
        need(self.sir_th_min_db <= self.sir_th_max_db, "need sir_th_min_db <= sir_th_max_db")
        need(self.trials >= 1, "trials must be >= 1")
        need(self.trial_samples >= 0, "trial_samples must be >= 0")
        need(self.expected_candidates > 0, "expected_candidates must be > 0")
        need(self.endpoint_sets >= 1, "endpoint_sets must be >= 1")
        need(self.points_per_m > 0, "points_per_m must be > 0")
        return self

    def env(self) -> RadioEnvironment:
        return RadioEnvironment(self.p_t, self.eta, self.sigma_db, self.d1_m, self.d2_m)

    def scenario_obj(self) -> Scenario:
        sc = Scenario.parse(self.scenario)
        if sc.kind == "flow" and ":" not in self.scenario:
            sc = Scenario.flow(self.m_flows)
        return sc

    def grid(self) -> np.ndarray:
        return make_grid(self.d_min_m, self.d_max_m, self.d_step_m)

    def override(self) -> int | None:
        return self.n_interferers_override or None

    def sir_th_grid(self) -> np.ndarray:
        return make_grid(self.sir_th_min_db, self.sir_th_max_db, self.sir_th_step_db)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"float": float, "int": int, "str": str}


def _cast(key: str, value):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        return _CASTS[kind](value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot interpret {value!r} as {kind}") from None


def load_config(path: str | None, overrides: dict) -> RunConfig:
    data = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"config {path}: top level must be an object")
        unknown = sorted(set(data) - set(_FIELD_TYPES))
        if unknown:
            raise ConfigError(f"config {path}: unknown keys {unknown}")
    data.update({k: v for k, v in overrides.items() if v is not None})
    cfg = RunConfig(**{k: _cast(k, v) for k, v in data.items()})
    return cfg.check()


def _write(text: str, out: str) -> None:
    if not out:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(out))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _curve(cfg: RunConfig, scenario: Scenario | None = None):
    return bound_curve(cfg.env(), scenario or cfg.scenario_obj(), cfg.grid(),
                       cfg.seed, cfg.samples, cfg.override(), cfg.n_codes)


def cmd_bound(cfg: RunConfig) -> int:
    _write(_curve(cfg).to_csv(cfg.sir_th_db), cfg.out)
    return 0


def cmd_dmax(cfg: RunConfig) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        d = select_dmax(_curve(cfg), cfg.sir_th_db, cfg.gamma)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _write("infeasible\n" if d is None else f"{d:.10g}\n", cfg.out)
    return 0


def cmd_codes(cfg: RunConfig) -> int:
    n_max = cfg.n_max or max_interferer_count(cfg.env(), cfg.override()) + 1
    _write(codes.code_report_json(n_max, cfg.kappa), cfg.out)
    return 0


def _read_flows(path: str) -> list[planner.FlowSpec]:
    if not path:
        raise ConfigError("plan needs a flow list: set flows to a JSON file path")
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"flows {path}: {exc}") from None
    if isinstance(data, dict):
        data = data.get("flows", [])
    try:
        flows = [planner.FlowSpec(tuple(f["source"]), tuple(f["sink"])) for f in data]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"flows {path}: bad flow entry ({exc})") from None
    if not flows:
        raise ConfigError(f"flows {path}: no flows listed")
    return flows


def cmd_plan(cfg: RunConfig) -> int:
    flows = _read_flows(cfg.flows)
    plan = planner.plan_deployment(flows, cfg.env(), cfg.sir_th_db, cfg.gamma,
                                   cfg.seed, cfg.samples, cfg.grid())
    _write(plan.to_json(), cfg.out)
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    rows = planner.compare_bounds(cfg.env(), cfg.sir_th_grid(), cfg.gamma, cfg.path_length_m,
                                  cfg.m_flows, cfg.seed, cfg.samples, cfg.grid(),
                                  cfg.override())
    _write(planner.comparison_csv(rows), cfg.out)
    return 0


def cmd_validate(cfg: RunConfig) -> int:
    report = validation.run_validation(
        cfg.env(), cfg.scenario_obj(), cfg.grid(), cfg.trials, cfg.seed, cfg.trial_samples,
        n_bound=cfg.samples, n_max=cfg.override(),
        expected_count=cfg.expected_candidates, endpoint_sets=cfg.endpoint_sets,
        points_per_meter=cfg.points_per_m)
    text = report.to_json() if cfg.out.endswith(".json") else report.to_csv()
    _write(text, cfg.out)
    return 0


COMMANDS = {
    "bound": (cmd_bound, "write the bound curve as CSV"),
    "dmax": (cmd_dmax, "print the largest link length meeting the outage target"),
    "codes": (cmd_codes, "select the orthogonal-code count, JSON report"),
    "plan": (cmd_plan, "relay robots per flow for a flow list, JSON plan"),
    "compare": (cmd_compare, "dense vs flow robot counts over an SIR threshold sweep, CSV"),
    "validate": (cmd_validate, "random-cover validation report, CSV or JSON"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON file with RunConfig keys")
    for f in fields(RunConfig):
        metavar = "U64" if f.name == "seed" else f.type.upper()
        common.add_argument(f"--{f.name}", dest=f.name, default=None, metavar=metavar,
                            help=f"(default {f.default!r})")
    parser = argparse.ArgumentParser(prog="csma-bounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {f.name: getattr(args, f.name) for f in fields(RunConfig)}
    try:
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command][0](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

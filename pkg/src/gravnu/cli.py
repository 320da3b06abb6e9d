"""Command-line front end: ``gravnu k3``, ``gravnu coherence`` and ``gravnu selftest``.

Configuration is layered, lowest priority first: built-in defaults, a named
preset, a flat JSON config file (``--config`` or ``$GRAVNU_CONFIG``), and
explicit flags. Config-file keys are the long flag names with dashes replaced
by underscores. The resolved configuration is echoed into every output.

Exit codes: 0 success, 1 self-test failure, 2 usage error, 3 domain error.
"""

import argparse
import json
import os
import sys

from . import __version__
from .coherence import coherence_mu
from .errors import GravnuError
from .lgi import evaluate
from .oscillation import (
    EnergyReference,
    OscillationParams,
    PropagationScenario,
    scenario_phase,
    transition_probability,
)
from .selftest import format_table, run_all
from .sweep import PRESETS, SweepKind, SweepSpec, format_number, run_sweep

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

CONFIG_ENV = "GRAVNU_CONFIG"

_COMMON_DEFAULTS = {
    "gm": 3e7,
    "theta": 0.59,
    "delta_m2": 7.92e-5,
    "direction": "outward",
    "alpha": "mu",
    "units": "paper_figure",
    "approx": "weak",
    "steps": 2000,
    "format": "csv",
    "out": None,
    "sweep": False,
    "preset": None,
}

DEFAULTS = {
    "k3": dict(_COMMON_DEFAULTS, r_source=1e8, baseline=3e8, energy=300.0,
               energy_min=150.0, energy_max=500.0, baseline_min=2e8, baseline_max=4e8),
    "coherence": dict(_COMMON_DEFAULTS, r_source=1e8, baseline=3e8, energy=300.0,
                      energy_min=150.0, energy_max=500.0, baseline_min=2e8, baseline_max=4e8),
    "selftest": {"gm": 3e7, "theta": None, "delta_m2": None, "seed": 0, "samples": 200},
}

_PRESET_KIND = {"k3": SweepKind.K3_ENERGY, "coherence": SweepKind.COHERENCE_BASELINE}


class UsageError(Exception):
    pass


def _preset_layer(command, name):
    if name not in PRESETS:
        raise UsageError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
    spec = PRESETS[name]
    if spec.kind is not _PRESET_KIND[command]:
        raise UsageError(f"preset {name!r} is not a {command} preset")
    layer = {
        "gm": spec.gm, "theta": spec.theta, "delta_m2": spec.delta_m2,
        "direction": spec.direction.value, "r_source": spec.r_source,
        "units": spec.units.value, "steps": spec.steps, "alpha": spec.alpha,
        "approx": spec.approx.value, "sweep": True,
    }
    if spec.kind is SweepKind.K3_ENERGY:
        layer.update(baseline=spec.l_p, energy_min=spec.x_min, energy_max=spec.x_max)
    else:
        layer.update(energy=spec.energy, baseline_min=spec.x_min, baseline_max=spec.x_max)
    return layer


def _load_config_file(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a flat JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve_config(command, flags, environ=None):
    """Merge defaults, preset, config file and explicit flags for ``command``."""
    environ = os.environ if environ is None else environ
    config = dict(DEFAULTS[command])
    flags = {k: v for k, v in flags.items() if v is not None and k not in ("command", "config")}

    path = flags.pop("config_path", None) or environ.get(CONFIG_ENV)
    file_layer = _load_config_file(path) if path else {}
    file_layer.pop("config", None)

    # one file may serve every command; keys no command knows are rejected
    known_anywhere = set().union(*DEFAULTS.values())
    unknown = set(file_layer) - known_anywhere
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    file_layer = {k: v for k, v in file_layer.items() if k in config}

    preset_name = flags.get("preset") or file_layer.get("preset")
    if command != "selftest" and preset_name:
        config.update(_preset_layer(command, preset_name))
        config["preset"] = preset_name
    config.update(file_layer)
    config.update(flags)
    return config


# -- builders ----------------------------------------------------------------


def _params(cfg):
    return OscillationParams(cfg["theta"], cfg["delta_m2"], cfg["units"])


def _scenario(cfg, reference):
    return PropagationScenario(
        params=_params(cfg),
        source=cfg["gm"],
        direction=cfg["direction"],
        r_source=cfg["r_source"],
        l_p=cfg["baseline"],
        energy=cfg["energy"],
        energy_reference=reference,
        approx=cfg["approx"],
    )


def _sweep_spec(command, cfg):
    common = dict(
        direction=cfg["direction"], theta=cfg["theta"], delta_m2=cfg["delta_m2"],
        gm=cfg["gm"], r_source=cfg["r_source"], l_p=cfg["baseline"],
        energy=cfg["energy"], steps=cfg["steps"], units=cfg["units"],
        alpha=cfg["alpha"], approx=cfg["approx"],
    )
    if command == "k3":
        return SweepSpec(kind=SweepKind.K3_ENERGY, x_min=cfg["energy_min"], x_max=cfg["energy_max"], **common)
    return SweepSpec(kind=SweepKind.COHERENCE_BASELINE, x_min=cfg["baseline_min"],
                     x_max=cfg["baseline_max"], **common)


# -- output ------------------------------------------------------------------


def _echo(cfg):
    return json.dumps(cfg, sort_keys=True)


def _render_single(cfg, names, values):
    if cfg["format"] == "json":
        payload = {"tool": "gravnu", "version": __version__, "config": cfg,
                   "result": dict(zip(names, values))}
        return json.dumps(payload, sort_keys=True) + "\n"
    cells = [str(v).lower() if isinstance(v, bool) else format_number(v) for v in values]
    return (
        f"# tool: gravnu {__version__}\n# config: {_echo(cfg)}\n"
        + ",".join(names) + "\n" + ",".join(cells) + "\n"
    )


def _render_sweep(cfg, result):
    text = result.dumps(cfg["format"])
    if cfg["format"] == "json":
        payload = json.loads(text)
        payload["config"] = cfg
        return json.dumps(payload, sort_keys=True) + "\n"
    return f"# config: {_echo(cfg)}\n" + text


def _emit(cfg, text, stdout):
    if cfg.get("out"):
        with open(cfg["out"], "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


# -- commands ----------------------------------------------------------------


def cmd_k3(cfg, stdout):
    if cfg["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    if cfg["sweep"]:
        text = _render_sweep(cfg, run_sweep(_sweep_spec("k3", cfg)))
    else:
        r = evaluate(_scenario(cfg, EnergyReference.INFINITY), cfg["alpha"])
        text = _render_single(
            cfg,
            ["k3", "c_0_1", "c_1_2", "c_0_2", "violation"],
            [r.k3, r.c_0_1, r.c_1_2, r.c_0_2, r.violation],
        )
    _emit(cfg, text, stdout)
    return EXIT_OK


def cmd_coherence(cfg, stdout):
    if cfg["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {cfg['format']!r}")
    if cfg["sweep"]:
        text = _render_sweep(cfg, run_sweep(_sweep_spec("coherence", cfg)))
    else:
        s = _scenario(cfg, EnergyReference.LOCAL)
        p = float(transition_probability(s.params.theta, scenario_phase(s)))
        text = _render_single(cfg, ["coherence", "p_transition", "p_survival"],
                              [coherence_mu(s), p, 1.0 - p])
    _emit(cfg, text, stdout)
    return EXIT_OK


def cmd_selftest(cfg, stdout):
    results = run_all(gm=cfg["gm"], seed=cfg["seed"], samples=cfg["samples"],
                      theta=cfg["theta"], delta_m2=cfg["delta_m2"])
    stdout.write(format_table(results) + "\n")
    failed = [r for r in results if not r.ok]
    stdout.write(f"{len(results) - len(failed)}/{len(results)} suites without failure\n")
    return EXIT_SELFTEST_FAILED if failed else EXIT_OK


_COMMANDS = {"k3": cmd_k3, "coherence": cmd_coherence, "selftest": cmd_selftest}


def _add_physics_flags(p, scenario=True):
    p.add_argument("--gm", type=float, help="GM in km (0 = flat spacetime)")
    p.add_argument("--theta", type=float, help="mixing angle in rad")
    p.add_argument("--delta-m2", type=float, help="mass-squared splitting in eV^2")
    p.add_argument("--config", dest="config_path", metavar="PATH",
                   help=f"flat JSON config file (default ${CONFIG_ENV})")
    if not scenario:
        return
    p.add_argument("--r-source", type=float, help="source radius in km")
    p.add_argument("--baseline", type=float, help="proper baseline L_p in km")
    p.add_argument("--direction", choices=["outward", "inward"])
    p.add_argument("--energy", type=float, help="energy in TeV")
    p.add_argument("--energy-min", type=float)
    p.add_argument("--energy-max", type=float)
    p.add_argument("--baseline-min", type=float)
    p.add_argument("--baseline-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--alpha", choices=["e", "mu"], help="measured flavour")
    p.add_argument("--units", choices=["physical", "paper_figure"])
    p.add_argument("--approx", choices=["weak", "exact"])
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--sweep", action="store_true", default=None, help="run a grid sweep")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gravnu",
        description="Neutrino oscillation coherence observables in a Schwarzschild field.",
    )
    parser.add_argument("--version", action="version", version=f"gravnu {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_physics_flags(sub.add_parser("k3", help="Leggett-Garg K3 (single value or energy sweep)"))
    _add_physics_flags(sub.add_parser("coherence", help="l1-norm coherence C_mu (single value or baseline sweep)"))
    st = sub.add_parser("selftest", help="run the randomised consistency suites")
    _add_physics_flags(st, scenario=False)
    st.add_argument("--seed", type=int, help="seed for the randomised sample")
    st.add_argument("--samples", type=int, help="samples per suite")
    return parser


def main(argv=None, stdout=None, stderr=None, environ=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = resolve_config(args.command, vars(args), environ)
        return _COMMANDS[args.command](cfg, stdout)
    except UsageError as exc:
        stderr.write(f"gravnu: usage error: {exc}\n")
        return EXIT_USAGE
    except GravnuError as exc:
        stderr.write(f"gravnu: error: {exc}\n")
        return EXIT_DOMAIN
    except (TypeError, ValueError) as exc:
        # wrongly typed config-file values
        stderr.write(f"gravnu: usage error: bad configuration value ({exc})\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

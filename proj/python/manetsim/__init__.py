"""Python interface to the manetsim simulator.

Configuration is a mapping of "section.key" names to values, exactly the
keys of the CLI's --set option (see config_keys()). A bare key such as
"nodes" is accepted when it names exactly one field.
"""

from . import _core
from ._core import ConfigError, SweepError, TraceParseError, config_keys, summarize_csv, trace_positions

__all__ = [
    "ConfigError",
    "SweepError",
    "TraceParseError",
    "config_keys",
    "default_config",
    "resolve_config",
    "validate_config",
    "print_config",
    "run",
    "sweep",
    "sweep_csv",
    "summarize_csv",
    "generate_trace",
    "trace_positions",
]


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ";".join(",".join(str(v) for v in row) for row in value)
    return str(value)


def _fields(config, overrides):
    merged = dict(config or {})
    merged.update(overrides)
    keys = _core.config_keys()
    out = {}
    for name, value in merged.items():
        if name not in keys:
            matches = [k for k in keys if k.split(".", 1)[1] == name]
            if len(matches) != 1:
                raise ConfigError(f"unknown configuration key '{name}'")
            name = matches[0]
        out[name] = _format(value)
    return out


def default_config():
    return _core.resolve_config()


def resolve_config(config=None, text="", **overrides):
    return _core.resolve_config(_fields(config, overrides), text)


def validate_config(config=None, text="", **overrides):
    """List of field-named problems; empty when the scenario is runnable."""
    return _core.validate_config(_fields(config, overrides), text)


def print_config(config=None, text="", **overrides):
    return _core.print_config(_fields(config, overrides), text)


def run(config=None, text="", trace=None, packets=False, **overrides):
    """Simulate one scenario. Pass trace= (text) to replay a mobility trace."""
    return _core.run(_fields(config, overrides), text, trace, packets)


def sweep(config=None, text="", models=("rwp", "rd", "prw"), nodes=None, speeds=None, seeds=10, base_seed=1,
          workers=1, **overrides):
    kwargs = _sweep_args(models, nodes, speeds, seeds, base_seed, workers)
    return _core.sweep(_fields(config, overrides), text, **kwargs)


def sweep_csv(config=None, text="", models=("rwp", "rd", "prw"), nodes=None, speeds=None, seeds=10, base_seed=1,
              workers=1, **overrides):
    kwargs = _sweep_args(models, nodes, speeds, seeds, base_seed, workers)
    return _core.sweep_csv(_fields(config, overrides), text, **kwargs)


def generate_trace(config=None, text="", **overrides):
    return _core.generate_trace(_fields(config, overrides), text)


def _sweep_args(models, nodes, speeds, seeds, base_seed, workers):
    kwargs = {"models": list(models), "seeds": seeds, "base_seed": base_seed, "workers": workers}
    if nodes is not None:
        kwargs["nodes"] = list(nodes)
    if speeds is not None:
        kwargs["speeds"] = [float(s) for s in speeds]
    return kwargs

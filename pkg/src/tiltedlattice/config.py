"""Plain-text scenario files.

One ``key = value`` pair per line, ``#`` starts a comment, keys are case
sensitive. Numbers are decimal with an optional exponent (``0.5``,
``-3``, ``2.5e-3``); lists are comma separated. Every problem is reported
with its line number.
"""

import re
from dataclasses import dataclass, field

from .errors import ConfigError

MODES = ("evolve1d", "evolve2d", "lissajous", "breathing", "figure-preset")
OUTPUT_KINDS = ("trajectory-csv", "density-csv", "density-frames")
PRESETS = ("fig1", "fig2", "fig3", "fig4", "fig5")

_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_INTEGER = re.compile(r"[+-]?\d+")


def _any(v):
    return True


def _positive(v):
    return v > 0


def _nonneg(v):
    return v >= 0


def _sigma(v):
    return 0 < v <= 30


# key -> (kind, range check, range description)
_KEYS = {
    "mode": ("mode", None, None),
    "preset": ("preset", None, None),
    "output_dir": ("text", None, None),
    "outputs": ("outputs", None, None),
    "J": ("number", _positive, "> 0"),
    "t_start": ("number", _nonneg, ">= 0"),
    "t_end": ("number", _nonneg, ">= 0"),
    "samples": ("int", _positive, ">= 1"),
    "F_over_J": ("number", _nonneg, ">= 0"),
    "Fx_over_J": ("number", _nonneg, ">= 0"),
    "Fy_over_J": ("number", _nonneg, ">= 0"),
    "sigma": ("number", _sigma, "in (0, 30]"),
    "x0": ("int", _any, None),
    "X": ("number", _any, None),
    "Y": ("number", _any, None),
    "P": ("number", _any, None),
    "Px": ("number", _any, None),
    "Py": ("number", _any, None),
    "p": ("int", _positive, ">= 1"),
    "q": ("int", _positive, ">= 1"),
    "phi": ("number", _any, None),
    "amp_A": ("number", _positive, "> 0"),
    "amp_B": ("number", _positive, "> 0"),
    "base_frequency": ("number", _positive, "> 0"),
    "F_over_J_values": ("list", _nonneg, ">= 0"),
    "P_values": ("list", _any, None),
    "sigma_values": ("list", _sigma, "in (0, 30]"),
    "phi_values": ("list", _any, None),
}

_COMMON_OPTIONAL = {"output_dir": "out", "outputs": ("trajectory-csv",), "J": 1.0, "t_start": 0.0}

# mode -> (required keys, optional keys with defaults)
_MODE_KEYS = {
    "breathing": (("F_over_J", "t_end", "samples"), {"x0": 0}),
    "evolve1d": (("F_over_J", "sigma", "t_end", "samples"), {"X": 0.0, "P": 0.0}),
    "evolve2d": (
        ("Fx_over_J", "Fy_over_J", "sigma", "t_end", "samples"),
        {"X": 0.0, "Y": 0.0, "Px": 0.0, "Py": 0.0},
    ),
    "lissajous": (
        ("p", "q", "sigma"),
        {"phi": 0.0, "amp_A": None, "amp_B": None, "base_frequency": None, "t_end": None, "samples": 64},
    ),
    "figure-preset": (
        ("preset",),
        {
            "F_over_J_values": None,
            "P_values": None,
            "sigma_values": None,
            "phi_values": None,
            "samples": None,
            "outputs": None,
        },
    ),
}

# stable key order for writing configs back out
KEY_ORDER = tuple(_KEYS)


@dataclass(frozen=True)
class ScenarioConfig:
    mode: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        v = self.values.get(key)
        return default if v is None else v

    @property
    def output_dir(self):
        return self.values["output_dir"]

    @property
    def outputs(self):
        return self.values["outputs"]

    def times(self):
        """Uniform grid of ``samples`` times from t_start to t_end inclusive."""
        t0, t1, n = self.values["t_start"], self.values["t_end"], self.values["samples"]
        if n == 1:
            return [t0]
        span = t1 - t0
        return [t0 + span * k / (n - 1) for k in range(n)]


def _parse_value(key, raw, line):
    kind, check, desc = _KEYS[key]
    if kind == "mode":
        if raw not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {raw!r}", line)
        return raw
    if kind == "preset":
        if raw not in PRESETS:
            raise ConfigError(f"preset must be one of {', '.join(PRESETS)}, got {raw!r}", line)
        return raw
    if kind == "text":
        if not raw:
            raise ConfigError(f"{key} is empty", line)
        return raw
    if kind == "outputs":
        kinds = tuple(s.strip() for s in raw.split(","))
        for k in kinds:
            if k not in OUTPUT_KINDS:
                raise ConfigError(f"unknown output kind {k!r} in outputs; allowed: {', '.join(OUTPUT_KINDS)}", line)
        if len(set(kinds)) != len(kinds):
            raise ConfigError("outputs lists a kind twice", line)
        return kinds
    if kind == "list":
        items = [s.strip() for s in raw.split(",")]
        vals = tuple(_number(key, s, line) for s in items)
        for v in vals:
            if not check(v):
                raise ConfigError(f"{key} entry {v!r} out of range (must be {desc})", line)
        return vals
    if kind == "int":
        if not _INTEGER.fullmatch(raw):
            raise ConfigError(f"malformed integer for {key}: {raw!r}", line)
        v = int(raw)
    else:
        v = _number(key, raw, line)
    if not check(v):
        raise ConfigError(f"{key} = {raw} out of range (must be {desc})", line)
    return v


def _number(key, raw, line):
    if not _NUMBER.fullmatch(raw):
        raise ConfigError(f"malformed number for {key}: {raw!r}", line)
    return float(raw)


def parse_config(text):
    """Parse and fully validate a scenario file into a ScenarioConfig."""
    entries = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first set on line {entries[key][1]})", lineno)
        entries[key] = (_parse_value(key, value, lineno), lineno)

    if "mode" not in entries:
        raise ConfigError("missing key 'mode'")
    mode = entries["mode"][0]
    required, optional = _MODE_KEYS[mode]
    allowed = {"mode"} | set(required) | set(optional) | set(_COMMON_OPTIONAL)
    for key, (_, lineno) in entries.items():
        if key not in allowed:
            raise ConfigError(f"key {key!r} is not used by mode {mode}", lineno)
    for key in required:
        if key not in entries:
            raise ConfigError(f"missing key {key!r} required by mode {mode}")

    values = dict(_COMMON_OPTIONAL)
    values.update(optional)
    values.update({k: v for k, (v, _) in entries.items() if k != "mode"})
    if mode == "figure-preset" and "outputs" not in entries:
        values["outputs"] = None

    t_end = values.get("t_end")
    if t_end is not None and t_end < values["t_start"]:
        raise ConfigError(
            f"t_end = {t_end!r} precedes t_start = {values['t_start']!r}", entries.get("t_end", (None, None))[1]
        )
    if mode == "lissajous":
        if values["amp_A"] is None and values["amp_B"] is None and values["base_frequency"] is None:
            raise ConfigError("lissajous needs amp_A and amp_B, or base_frequency")
        if (values["amp_A"] is None) != (values["amp_B"] is None) and values["base_frequency"] is None:
            raise ConfigError("lissajous needs both amp_A and amp_B when base_frequency is absent")
    return ScenarioConfig(mode, values)


def _format_value(v):
    if isinstance(v, tuple):
        return ", ".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_config(cfg, comments=()):
    """Serialize a config so that parse_config returns an equal object."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"mode = {cfg.mode}")
    for key in KEY_ORDER:
        if key == "mode":
            continue
        v = cfg.values.get(key)
        if v is None:
            continue
        lines.append(f"{key} = {_format_value(v)}")
    return "\n".join(lines) + "\n"

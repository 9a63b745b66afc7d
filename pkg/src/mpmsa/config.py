"""Flat key-value experiment configuration with sections.

The file format is deliberately plain so every key can be echoed verbatim
into reports:

    [experiment]
    kind = wegner
    trials = 2000

Unknown sections or keys are rejected by name; values are kept as raw strings
(parsing happens at the point of use) so a parse -> serialize -> parse round
trip is lossless.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigurationError

KNOWN_KEYS: dict[str, tuple[str, ...]] = {
    "experiment": ("kind", "trials", "seed", "out"),
    "model": ("graph", "particles", "distribution", "interaction", "g"),
    "params": (
        "mode", "nstar", "d", "zeta", "kappa", "beta", "delta",
        "mstar", "nustar", "k", "l0", "b", "alpha", "tau", "pstar",
    ),
    "run": (
        "energy", "energy_policy", "radius", "center", "center_x", "center_y",
        "s_grid", "q_sizes", "kmax", "pairs", "t", "level", "ell", "g_grid",
        "theta_floor", "volumes", "energies_per_instance", "batches",
        "allow_param_violations", "grid_points", "xi",
    ),
}

KINDS = (
    "validate-params", "classify", "gri", "wegner", "evc2", "rcm", "shift",
    "induction", "bridge", "efc", "dominate",
)


@dataclass
class ExperimentConfig:
    """Raw section/key/value table plus typed accessors."""

    table: dict[str, dict[str, str]] = field(default_factory=dict)

    # -- raw access ---------------------------------------------------------
    def get(self, section: str, key: str, default: str | None = None) -> str:
        try:
            return self.table[section][key]
        except KeyError:
            if default is not None:
                return default
            raise ConfigurationError(f"missing config key [{section}] {key}") from None

    def has(self, section: str, key: str) -> bool:
        return key in self.table.get(section, {})

    def set(self, section: str, key: str, value: str) -> None:
        if section not in KNOWN_KEYS or key not in KNOWN_KEYS[section]:
            raise ConfigurationError(f"unknown config key [{section}] {key}")
        self.table.setdefault(section, {})[key] = value

    # -- typed accessors ----------------------------------------------------
    def get_int(self, section: str, key: str, default: str | None = None) -> int:
        raw = self.get(section, key, default)
        try:
            return int(raw)
        except ValueError:
            raise ConfigurationError(f"[{section}] {key} = '{raw}' is not an integer") from None

    def get_float(self, section: str, key: str, default: str | None = None) -> float:
        raw = self.get(section, key, default)
        try:
            return float(raw)
        except ValueError:
            raise ConfigurationError(f"[{section}] {key} = '{raw}' is not a number") from None

    def get_bool(self, section: str, key: str, default: str = "false") -> bool:
        raw = self.get(section, key, default).strip().lower()
        if raw in ("true", "1", "yes"):
            return True
        if raw in ("false", "0", "no"):
            return False
        raise ConfigurationError(f"[{section}] {key} = '{raw}' is not a boolean")

    def get_floats(self, section: str, key: str, default: str | None = None) -> list[float]:
        raw = self.get(section, key, default)
        try:
            return [float(p) for p in raw.split(",") if p.strip()]
        except ValueError:
            raise ConfigurationError(f"[{section}] {key} = '{raw}' is not a float list") from None

    def get_ints(self, section: str, key: str, default: str | None = None) -> list[int]:
        raw = self.get(section, key, default)
        try:
            return [int(p) for p in raw.split(",") if p.strip()]
        except ValueError:
            raise ConfigurationError(f"[{section}] {key} = '{raw}' is not an int list") from None

    def get_config_tuple(self, section: str, key: str, default: str | None = None) -> tuple[int, ...]:
        return tuple(self.get_ints(section, key, default))

    def get_pairs(self, section: str, key: str) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """'0,2|5,7;1,1|9,9' -> [((0,2),(5,7)), ((1,1),(9,9))]."""
        raw = self.get(section, key)
        out = []
        try:
            for chunk in raw.split(";"):
                if not chunk.strip():
                    continue
                left, right = chunk.split("|")
                out.append(
                    (tuple(int(v) for v in left.split(",")), tuple(int(v) for v in right.split(",")))
                )
        except ValueError:
            raise ConfigurationError(f"[{section}] {key} = '{raw}' is not a pair list") from None
        return out

    def flat(self) -> dict[str, str]:
        return {f"{sec}.{key}": val for sec, kv in sorted(self.table.items()) for key, val in sorted(kv.items())}


def parse_config_text(text: str) -> ExperimentConfig:
    table: dict[str, dict[str, str]] = {}
    section: str | None = None
    unknown: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in KNOWN_KEYS:
                unknown.append(f"section [{section}]")
            table.setdefault(section, {})
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got '{line}'")
        if section is None:
            raise ConfigurationError(f"line {lineno}: key outside any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if section in KNOWN_KEYS and key not in KNOWN_KEYS[section]:
            unknown.append(f"[{section}] {key}")
        table[section][key] = value
    if unknown:
        raise ConfigurationError("unknown config keys: " + ", ".join(unknown))
    return ExperimentConfig(table=table)


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config_text(Path(path).read_text())


def serialize_config(config: ExperimentConfig) -> str:
    lines = []
    for section in sorted(config.table):
        lines.append(f"[{section}]")
        for key in sorted(config.table[section]):
            lines.append(f"{key} = {config.table[section][key]}")
        lines.append("")
    return "\n".join(lines)

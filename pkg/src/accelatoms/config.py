"""Scenario configuration: a flat key = value text format with a schema version.

Lines are `key = value`; `#` starts a comment; keys are snake_case. List values
are comma separated. `alphas` and `couplings` accept either an explicit list or
a rule (`equal: 2` or, for alphas, `mismatch: 0.2, 0.6` meaning
base + step*(j-1)). All simulation quantities are in natural units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import ConfigError

SCHEMA_VERSION = 1

SCENARIOS = ("equal_acceleration_sweep", "mismatch_cases", "counter_wedge",
             "bec_design", "custom")
OMEGA_RULES = ("equal", "resonant", "explicit")
INITIAL_STATES = ("all_excited", "all_ground", "explicit")


@dataclass
class ScenarioConfig:
    schema_version: int = SCHEMA_VERSION
    scenario: str = "custom"
    n_atoms: int = 2
    a_ref: float | None = None
    alphas: str = "equal: 2"
    omega_rule: str = "equal"
    omega_ref: float = 1.0
    omegas: tuple[float, ...] = ()
    gamma0: float = 0.1
    eps_res: float = 1e-6
    couplings: str = "equal: 1"
    initial_state: str = "all_excited"
    initial_pattern: str = ""
    t_max: float = 20.0
    dt: float = 1e-3
    record_every: int = 10
    concurrence_pair: tuple[int, int] = (1, 2)  # 1-based atom labels
    retain_states: bool = False
    output_path: str = ""
    wedges: tuple[str, ...] = ()
    # equal_acceleration_sweep
    sweep_alphas: tuple[float, ...] = (2.0, 4.0, 6.0, 8.0, 10.0)
    # mismatch_cases
    alpha_equal: float = 2.0
    alpha_base: float = 0.2
    delta_equal_omega: float = 0.6
    deltas_resonant: tuple[float, ...] = (0.6, 0.03)
    # bec_design
    bec_m: float = 1.0
    bec_mu: float = 1.0
    bec_n0: float = 50.0
    bec_length: float = 100.0
    bec_u0: float = 0.02
    bec_temperature: float = 0.5
    tweezer_depth: float = math.pi / 2.0
    tweezer_mass: float = 2.0
    tweezer_coupling: float = 0.0036
    tweezer_waists: tuple[float, ...] = (1.05,)
    tweezer_positions: tuple[float, ...] = (0.0,)
    k_min: float = 1e-3
    k_max: float = 10.0
    k_points: int = 1000
    waist_points: int = 200
    nb_grid_points: int = 20
    nb_depth_min: float = 0.5
    nb_depth_max: float = 8.0
    nb_waist_min: float = 0.4
    nb_waist_max: float = 2.4


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_floats(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.split(",") if tok.strip())


def _parse_strs(raw: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in raw.split(",") if tok.strip())


def _parse_pair(raw: str) -> tuple[int, int]:
    parts = [int(tok) for tok in raw.split(",") if tok.strip()]
    if len(parts) != 2:
        raise ValueError(f"expected two indices, got {raw!r}")
    return parts[0], parts[1]


_PARSERS = {
    int: lambda raw: int(raw.strip()),
    float: lambda raw: float(raw.strip()),
    bool: _parse_bool,
    str: lambda raw: raw.strip(),
    "floats": _parse_floats,
    "strs": _parse_strs,
    "pair": _parse_pair,
    "optfloat": lambda raw: float(raw.strip()),
}

_FIELD_KINDS = {
    "omegas": "floats", "sweep_alphas": "floats", "deltas_resonant": "floats",
    "tweezer_waists": "floats", "tweezer_positions": "floats",
    "wedges": "strs", "concurrence_pair": "pair", "a_ref": "optfloat",
}


def _field_kind(f):
    return _FIELD_KINDS.get(f.name, f.type if isinstance(f.type, type) else
                            {"int": int, "float": float, "bool": bool, "str": str,
                             "float | None": "optfloat"}.get(f.type, str))


def parse_config(text: str) -> ScenarioConfig:
    """Parse configuration text; raises ConfigError on any syntax problem."""
    diagnostics: list[str] = []
    values: dict[str, object] = {}
    known = {f.name: f for f in fields(ScenarioConfig)}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            diagnostics.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in known:
            diagnostics.append(f"line {lineno}: unknown key {key!r}")
            continue
        if key in values:
            diagnostics.append(f"line {lineno}: duplicate key {key!r}")
            continue
        parser = _PARSERS[_field_kind(known[key])]
        try:
            values[key] = parser(raw)
        except ValueError as exc:
            diagnostics.append(f"line {lineno}: {key}: {exc}")
    if "schema_version" not in values:
        diagnostics.append("missing required key schema_version")
    elif values["schema_version"] != SCHEMA_VERSION:
        diagnostics.append(f"schema_version: unsupported version {values['schema_version']} "
                           f"(this build reads version {SCHEMA_VERSION})")
    if diagnostics:
        raise ConfigError(diagnostics)
    return ScenarioConfig(**values)


def resolve_alphas(config: ScenarioConfig) -> list[float]:
    """Expand the alphas field (rule or explicit list) to one value per atom."""
    raw = config.alphas.strip()
    n = config.n_atoms
    if raw.startswith("equal:"):
        return [float(raw.split(":", 1)[1])] * n
    if raw.startswith("mismatch:"):
        base, step = _parse_floats(raw.split(":", 1)[1])
        return [base + step * j for j in range(n)]
    vals = list(_parse_floats(raw))
    if len(vals) != n:
        raise ConfigError([f"alphas: expected {n} entries, got {len(vals)}"])
    return vals


def resolve_couplings(config: ScenarioConfig) -> list[float]:
    raw = config.couplings.strip()
    if raw.startswith("equal:"):
        return [float(raw.split(":", 1)[1])] * config.n_atoms
    vals = list(_parse_floats(raw))
    if len(vals) != config.n_atoms:
        raise ConfigError([f"couplings: expected {config.n_atoms} entries, got {len(vals)}"])
    return vals


def resolve_omegas(config: ScenarioConfig, alphas: list[float], a_ref: float) -> list[float]:
    if config.omega_rule == "equal":
        return [config.omega_ref] * config.n_atoms
    if config.omega_rule == "resonant":
        # proper frequencies chosen so every red-shifted frequency equals omega_ref
        return [config.omega_ref * alpha / a_ref for alpha in alphas]
    return list(config.omegas)


def validate(config: ScenarioConfig) -> list[str]:
    """All semantic violations, without running anything. Empty means runnable."""
    diags: list[str] = []
    n = config.n_atoms
    if config.scenario not in SCENARIOS:
        diags.append(f"scenario: unknown scenario {config.scenario!r}; "
                     f"expected one of {', '.join(SCENARIOS)}")
        return diags
    if config.scenario == "bec_design":
        for name in ("bec_m", "bec_mu", "bec_n0", "bec_length", "bec_u0",
                     "bec_temperature", "tweezer_depth", "tweezer_mass"):
            if getattr(config, name) <= 0:
                diags.append(f"{name}: must be > 0")
        if config.tweezer_coupling < 0:
            diags.append("tweezer_coupling: must be >= 0")
        if not config.tweezer_waists:
            diags.append("tweezer_waists: at least one tweezer required")
        if len(config.tweezer_positions) != len(config.tweezer_waists):
            diags.append(f"tweezer_positions: expected {len(config.tweezer_waists)} "
                         f"entries matching tweezer_waists, got {len(config.tweezer_positions)}")
        if not 0 < config.k_min < config.k_max:
            diags.append("k_min/k_max: need 0 < k_min < k_max")
        for name in ("k_points", "waist_points", "nb_grid_points"):
            if getattr(config, name) < 2:
                diags.append(f"{name}: must be >= 2")
        if not 0 < config.nb_depth_min < config.nb_depth_max:
            diags.append("nb_depth_min/nb_depth_max: need 0 < min < max")
        if not 0 < config.nb_waist_min < config.nb_waist_max:
            diags.append("nb_waist_min/nb_waist_max: need 0 < min < max")
        return diags

    if n < 1:
        diags.append("n_atoms: must be >= 1")
        return diags
    if config.dt <= 0:
        diags.append("dt: must be > 0")
    if config.t_max <= 0:
        diags.append("t_max: must be > 0")
    elif config.dt >= config.t_max:
        diags.append(f"dt: must be < t_max ({config.dt} >= {config.t_max})")
    if config.record_every < 1:
        diags.append("record_every: must be >= 1")
    if config.gamma0 < 0:
        diags.append("gamma0: must be >= 0")
    if config.eps_res <= 0:
        diags.append("eps_res: must be > 0")
    try:
        alphas = resolve_alphas(config)
        if any(a <= 0 for a in alphas):
            diags.append("alphas: all proper accelerations must be > 0")
            alphas = None
    except ConfigError as exc:
        diags.extend(exc.diagnostics)
        alphas = None
    except ValueError as exc:
        diags.append(f"alphas: {exc}")
        alphas = None
    try:
        resolve_couplings(config)
    except ConfigError as exc:
        diags.extend(exc.diagnostics)
    except ValueError as exc:
        diags.append(f"couplings: {exc}")
    if config.omega_rule not in OMEGA_RULES:
        diags.append(f"omega_rule: unknown rule {config.omega_rule!r}")
    elif config.omega_rule == "explicit" and len(config.omegas) != n:
        diags.append(f"omegas: explicit rule needs {n} entries, got {len(config.omegas)}")
    if config.initial_state not in INITIAL_STATES:
        diags.append(f"initial_state: unknown state {config.initial_state!r}")
    elif config.initial_state == "explicit":
        if len(config.initial_pattern) != n or any(c not in "eg" for c in config.initial_pattern):
            diags.append(f"initial_pattern: need {n} letters over e/g, got "
                         f"{config.initial_pattern!r}")
    if alphas is not None and config.a_ref is not None:
        if abs(config.a_ref - alphas[0]) > 1e-12 * max(1.0, abs(alphas[0])):
            diags.append(f"a_ref: must equal the proper acceleration of atom 1 "
                         f"({config.a_ref} != {alphas[0]})")
    pair = config.concurrence_pair
    if n >= 2:
        if pair[0] == pair[1] or not all(1 <= p <= n for p in pair):
            diags.append(f"concurrence_pair: need two distinct 1-based labels <= {n}, "
                         f"got {pair}")
    if config.scenario == "counter_wedge":
        if len(config.wedges) != n:
            diags.append(f"wedges: expected {n} entries, got {len(config.wedges)}")
        elif any(w not in ("I", "II") for w in config.wedges):
            diags.append("wedges: entries must be 'I' or 'II'")
        else:
            if "II" not in config.wedges:
                diags.append("wedges: counter_wedge requires at least one atom in wedge II")
            if "I" not in config.wedges:
                diags.append("wedges: counter_wedge requires at least one atom in wedge I")
            if config.wedges != tuple(sorted(config.wedges)):
                diags.append("wedges: list wedge-I atoms first, then wedge-II atoms")
    if config.scenario == "equal_acceleration_sweep":
        if not config.sweep_alphas:
            diags.append("sweep_alphas: at least one sweep value required")
        elif any(a <= 0 for a in config.sweep_alphas):
            diags.append("sweep_alphas: all values must be > 0")
    if config.scenario == "mismatch_cases":
        if config.alpha_equal <= 0 or config.alpha_base <= 0:
            diags.append("alpha_equal/alpha_base: must be > 0")
        if config.delta_equal_omega <= 0:
            diags.append("delta_equal_omega: must be > 0")
        if not config.deltas_resonant or any(d <= 0 for d in config.deltas_resonant):
            diags.append("deltas_resonant: need positive mismatch values")
    return diags

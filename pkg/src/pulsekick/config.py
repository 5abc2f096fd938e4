"""Config file parsing and serialization.

The on-disk format is TOML (nesting and comments come for free).  Two input
modes are supported:

* SI mode: ``[atom]``, ``[field]``, ``[field.envelope]``, ``[numerics]``
  tables with SI values.
* scaled mode: a ``[scaled]`` table giving the physics in units of gamma
  (delta/gamma, Omega0/gamma, gamma*tau, ...).  The parser converts to SI
  at parse time; dipole and mass still come from ``[atom]``.

Serialization always emits the resolved SI form with shortest round-trip
float formatting, so parse -> serialize -> parse is bitwise exact.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from typing import Any

from .constants import HBAR
from .envelopes import SHAPES, make_envelope
from .types import AtomParams, ConfigError, PulseField, SimConfig

_SCALED_KEYS = frozenset({
    "gamma", "omega_over_gamma", "delta_over_gamma", "rabi0_over_gamma",
    "gamma_rise_time", "gamma_plateau", "gamma_fall_time",
})

_SCALED_REQUIRED = ("gamma", "omega_over_gamma", "delta_over_gamma",
                    "rabi0_over_gamma", "gamma_rise_time", "gamma_plateau")


def parse_config(text: str) -> SimConfig:
    """Parse a TOML config document into a validated SimConfig."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config document: {exc}") from exc
    return config_from_dict(doc)


def parse_config_file(path) -> SimConfig:
    with open(path, "rb") as fh:
        data = fh.read()
    return parse_config(data.decode("utf-8"))


def config_from_dict(doc: dict[str, Any]) -> SimConfig:
    """Build a SimConfig from a parsed TOML document (dict tree)."""
    doc = dict(doc)
    errors: list[str] = []

    if "scaled" in doc:
        doc = _expand_scaled(doc, errors)
        if errors:
            raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))

    atom_tbl = _table(doc, "atom", errors)
    field_tbl = _table(doc, "field", errors)
    num_tbl = doc.get("numerics", {})
    if not isinstance(num_tbl, dict):
        errors.append("numerics: must be a table")
        num_tbl = {}
    if errors:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))

    atom = AtomParams(
        omega_at=_num(atom_tbl, "omega_at", "atom", errors),
        gamma=_num(atom_tbl, "gamma", "atom", errors),
        dipole=_num(atom_tbl, "dipole", "atom", errors),
        mass=_num(atom_tbl, "mass", "atom", errors),
        mag_dipole=_vec3(atom_tbl.get("mag_dipole", [0.0, 0.0, 0.0]), "atom.mag_dipole", errors),
    )

    env_tbl = field_tbl.get("envelope")
    if not isinstance(env_tbl, dict):
        errors.append("field.envelope: missing or not a table")
        env_tbl = {"shape": "raised_cosine", "rise_time": 1.0, "plateau": 1.0}
    shape = env_tbl.get("shape", "raised_cosine")
    if shape not in SHAPES:
        errors.append(f"field.envelope.shape: must be one of {SHAPES} (got {shape!r})")
        shape = "raised_cosine"
    try:
        envelope = make_envelope(
            shape,
            _num(env_tbl, "rise_time", "field.envelope", errors, positive=True),
            _num(env_tbl, "plateau", "field.envelope", errors, nonneg=True),
            env_tbl.get("fall_time"),
        )
    except (ValueError, TypeError) as exc:
        errors.append(f"field.envelope: {exc}")
        envelope = make_envelope("raised_cosine", 1.0, 1.0)

    mode_volume = field_tbl.get("mode_volume")
    field_obj = PulseField(
        omega=_num(field_tbl, "omega", "field", errors),
        peak_E0=_num(field_tbl, "peak_E0", "field", errors),
        envelope=envelope,
        polarization=_vec3(field_tbl.get("polarization", [1.0, 0.0, 0.0]),
                           "field.polarization", errors),
        mode_volume=float(mode_volume) if mode_volume is not None else None,
        group_velocity_factor=float(field_tbl.get("group_velocity_factor", 1.0)),
        mode_volume_defaulted=mode_volume is None,
    )

    fidelity = num_tbl.get("fidelity", "full-obe")
    config = SimConfig(
        atom=atom,
        field=field_obj,
        rtol=float(num_tbl.get("rtol", 1e-10)),
        atol=float(num_tbl.get("atol", 1e-12)),
        fidelity=fidelity,
        neglect_dxb=bool(num_tbl.get("neglect_dxb", False)),
        outputs=tuple(num_tbl.get("outputs", ["csv", "json"])),
    )

    if errors:
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(errors))
    config.validate()
    return config


def _expand_scaled(doc: dict[str, Any], errors: list[str]) -> dict[str, Any]:
    """Convert a [scaled] table into the equivalent SI document."""
    scaled = doc.pop("scaled")
    if not isinstance(scaled, dict):
        errors.append("scaled: must be a table")
        return doc
    unknown = set(scaled) - _SCALED_KEYS
    if unknown:
        errors.append(f"scaled: unknown keys {sorted(unknown)}")
    missing = [k for k in _SCALED_REQUIRED if k not in scaled]
    if missing:
        errors.append(f"scaled: missing required keys {missing}")
        return doc

    atom_tbl = dict(doc.get("atom", {}))
    field_tbl = dict(doc.get("field", {}))
    for key, owner in (("omega_at", "atom"), ("gamma", "atom"),
                       ("omega", "field"), ("peak_E0", "field")):
        tbl = atom_tbl if owner == "atom" else field_tbl
        if key in tbl:
            errors.append(f"{owner}.{key}: given both directly and via [scaled]")
    if "envelope" in field_tbl:
        errors.append("field.envelope: given both directly and via [scaled] ramp times")
    dipole = atom_tbl.get("dipole")
    if not isinstance(dipole, (int, float)) or dipole == 0:
        errors.append("atom.dipole: scaled mode needs a nonzero dipole to fix the field amplitude")
    if errors:
        return doc

    gamma = float(scaled["gamma"])
    if not gamma > 0:
        errors.append(f"scaled.gamma: must be > 0 (got {gamma!r})")
        return doc
    omega = float(scaled["omega_over_gamma"]) * gamma
    delta = float(scaled["delta_over_gamma"]) * gamma
    rabi0 = abs(float(scaled["rabi0_over_gamma"])) * gamma

    atom_tbl["gamma"] = gamma
    atom_tbl["omega_at"] = omega - delta
    field_tbl["omega"] = omega
    field_tbl["peak_E0"] = HBAR * rabi0 / abs(float(dipole))
    env = {
        "shape": scaled.get("shape", "raised_cosine"),
        "rise_time": float(scaled["gamma_rise_time"]) / gamma,
        "plateau": float(scaled["gamma_plateau"]) / gamma,
    }
    if "gamma_fall_time" in scaled:
        env["fall_time"] = float(scaled["gamma_fall_time"]) / gamma
    field_tbl["envelope"] = env

    out = dict(doc)
    out["atom"] = atom_tbl
    out["field"] = field_tbl
    return out


# -- serialization -----------------------------------------------------------

def serialize_config(config: SimConfig) -> str:
    """Emit the resolved SI TOML document for a config."""
    a, f = config.atom, config.field
    lines = [
        "[atom]",
        f"omega_at = {_fmt(a.omega_at)}",
        f"gamma = {_fmt(a.gamma)}",
        f"dipole = {_fmt(a.dipole)}",
        f"mass = {_fmt(a.mass)}",
        f"mag_dipole = [{_fmt(a.mag_dipole[0])}, {_fmt(a.mag_dipole[1])}, {_fmt(a.mag_dipole[2])}]",
        "",
        "[field]",
        f"omega = {_fmt(f.omega)}",
        f"peak_E0 = {_fmt(f.peak_E0)}",
        f"polarization = [{_fmt(f.polarization[0])}, {_fmt(f.polarization[1])}, {_fmt(f.polarization[2])}]",
        f"group_velocity_factor = {_fmt(f.group_velocity_factor)}",
    ]
    if f.mode_volume is not None:
        lines.append(f"mode_volume = {_fmt(f.mode_volume)}")
    lines += [
        "",
        "[field.envelope]",
        f'shape = "{f.envelope.shape}"',
        f"rise_time = {_fmt(f.envelope.rise_time)}",
        f"plateau = {_fmt(f.envelope.plateau_time)}",
        f"fall_time = {_fmt(f.envelope.fall_time)}",
        "",
        "[numerics]",
        f"rtol = {_fmt(config.rtol)}",
        f"atol = {_fmt(config.atol)}",
        f'fidelity = "{config.fidelity}"',
        f"neglect_dxb = {'true' if config.neglect_dxb else 'false'}",
        "outputs = [" + ", ".join(f'"{o}"' for o in config.outputs) + "]",
        "",
    ]
    return "\n".join(lines)


def config_to_dict(config: SimConfig) -> dict[str, Any]:
    """JSON-friendly resolved view of a config (for provenance records)."""
    a, f = config.atom, config.field
    return {
        "atom": {
            "omega_at": a.omega_at, "gamma": a.gamma, "dipole": a.dipole,
            "mass": a.mass, "mag_dipole": list(a.mag_dipole),
        },
        "field": {
            "omega": f.omega, "peak_E0": f.peak_E0,
            "polarization": list(f.polarization),
            "group_velocity_factor": f.group_velocity_factor,
            "mode_volume": f.resolved_mode_volume(),
            "mode_volume_defaulted": f.mode_volume_defaulted,
            "envelope": {
                "shape": f.envelope.shape,
                "rise_time": f.envelope.rise_time,
                "plateau": f.envelope.plateau_time,
                "fall_time": f.envelope.fall_time,
            },
        },
        "numerics": {
            "rtol": config.rtol, "atol": config.atol, "fidelity": config.fidelity,
            "neglect_dxb": config.neglect_dxb, "outputs": list(config.outputs),
        },
    }


def _fmt(x: float) -> str:
    """Shortest representation that round-trips the double exactly."""
    s = repr(float(x))
    # TOML requires a decimal point or exponent in floats; repr provides one
    # except for infinities, which are invalid configs anyway.
    return s


def _table(doc: dict, name: str, errors: list[str]) -> dict:
    tbl = doc.get(name)
    if not isinstance(tbl, dict):
        errors.append(f"{name}: missing required table")
        return {}
    return tbl


def _num(tbl: dict, key: str, path: str, errors: list[str],
         positive: bool = False, nonneg: bool = False) -> float:
    val = tbl.get(key)
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        errors.append(f"{path}.{key}: missing or not a number")
        return 1.0
    val = float(val)
    if positive and not val > 0:
        errors.append(f"{path}.{key}: must be > 0 (got {val!r})")
        return 1.0
    if nonneg and not val >= 0:
        errors.append(f"{path}.{key}: must be >= 0 (got {val!r})")
        return 0.0
    return val


def _vec3(val, path: str, errors: list[str]) -> tuple[float, float, float]:
    try:
        x, y, z = (float(c) for c in val)
        return (x, y, z)
    except (TypeError, ValueError):
        errors.append(f"{path}: must be a 3-vector of numbers")
        return (1.0, 0.0, 0.0)

"""INI-style configuration files and dotted-key overrides.

Sections and keys (SI units, couplings in rad/s)::

    [field]          b0, theta, phi
    [rf]             b_rf, omega, alpha, beta, track_theta, electrons
    [hyperfine]      ax, ay, az
    [rates]          k, gamma
    [noise]          kind, gamma_rate
    [initial_state]  preset | matrix
    [numerics]       dt

``rf.omega = resonant`` selects 2 gamma B0; ``rf.alpha`` also accepts
``perpendicular`` or ``parallel`` (which imply ``track_theta``). The
initial state is either a preset (singlet, mixed, triplet0) or sixteen
``re,im`` pairs in row-major order.
"""

import configparser
import copy
import re

import numpy as np

from . import model, spinlin
from .errors import ConfigurationError


def _float(text):
    return float(text)


def _bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _omega(text):
    t = str(text).strip().lower()
    return "resonant" if t == "resonant" else float(t)


def _alpha(text):
    t = str(text).strip().lower()
    return t if t in ("perpendicular", "parallel") else float(t)


def _electrons(text):
    return tuple(s.strip() for s in str(text).split(",") if s.strip())


def _noise_kind(text):
    t = str(text).strip().lower()
    return None if t in ("", "none") else t


def _optional_float(text):
    t = str(text).strip().lower()
    return None if t in ("", "none", "auto") else float(t)


def _matrix(text):
    pairs = [p for p in re.split(r"[\s;]+", str(text).strip()) if p]
    if len(pairs) != 16:
        raise ValueError(f"expected 16 're,im' pairs, got {len(pairs)}")
    vals = []
    for pair in pairs:
        re_, _, im = pair.partition(",")
        vals.append(complex(float(re_), float(im or 0.0)))
    return np.array(vals, dtype=complex).reshape(4, 4)


SCHEMA = {
    "field": {"b0": _float, "theta": _float, "phi": _float},
    "rf": {
        "b_rf": _float,
        "omega": _omega,
        "alpha": _alpha,
        "beta": _float,
        "track_theta": _bool,
        "electrons": _electrons,
    },
    "hyperfine": {"ax": _float, "ay": _float, "az": _float},
    "rates": {"k": _float, "gamma": _float},
    "noise": {"kind": _noise_kind, "gamma_rate": _float},
    "initial_state": {"preset": str, "matrix": _matrix},
    "numerics": {"dt": _optional_float},
}

PRESETS = {
    "reference": {},
    "weak": {"field": {"b0": model.B0_WEAK}},
    "strong": {"field": {"b0": model.B0_STRONG}},
    "reference_rf": {"rf": {"b_rf": model.B_RF_REFERENCE}},
}

STATE_PRESETS = {
    "singlet": spinlin.singlet_state,
    "mixed": lambda: spinlin.maximally_mixed(4),
    "triplet0": lambda: spinlin.projector(spinlin.triplet0_vector()),
}


def default_values():
    return {
        "field": {"b0": model.B0_GEOMAGNETIC, "theta": np.pi / 4, "phi": 0.0},
        "rf": {
            "b_rf": 0.0,
            "omega": "resonant",
            "alpha": "perpendicular",
            "beta": 0.0,
            "track_theta": True,
            "electrons": ("electron1", "electron2"),
        },
        "hyperfine": {"ax": 0.0, "ay": 0.0, "az": model.AZ_REFERENCE},
        "rates": {"k": 1e4, "gamma": model.GAMMA_E},
        "noise": {"kind": None, "gamma_rate": 0.0},
        "initial_state": {"preset": "singlet", "matrix": None},
        "numerics": {"dt": None},
    }


def _line_of(text, section, key):
    """Best-effort line number of ``key`` inside ``[section]``."""
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            current = m.group(1).strip().lower()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", s, re.I):
            return n
    return None


def set_value(values, dotted, raw, where=""):
    """Parse ``raw`` with the schema for ``section.key`` and store it."""
    section, _, key = dotted.strip().lower().partition(".")
    if section not in SCHEMA:
        raise ConfigurationError(f"unknown section {section!r}{where}", key=dotted)
    if key not in SCHEMA[section]:
        raise ConfigurationError(f"unknown key {dotted!r}{where}", key=dotted)
    try:
        values[section][key] = SCHEMA[section][key](raw)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad value for {dotted}{where}: {exc}", key=dotted) from None
    if section == "initial_state":
        # the two forms are exclusive; the latest one wins
        other = "matrix" if key == "preset" else "preset"
        values[section][other] = None


def load_values(path=None, preset="reference", text=None):
    values = default_values()
    if preset not in PRESETS:
        raise ConfigurationError(f"unknown preset {preset!r}", key="preset")
    for section, entries in PRESETS[preset].items():
        values[section].update(entries)
    if path is not None or text is not None:
        if text is None:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigurationError(f"cannot read config: {exc}", key="config") from None
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=str(path or "<string>"))
        except configparser.Error as exc:
            raise ConfigurationError(f"config parse error: {exc}", key="config") from None
        for section in parser.sections():
            for key, raw in parser.items(section):
                line = _line_of(text, section.lower(), key)
                where = f" ({path or '<string>'}:{line})" if line else ""
                set_value(values, f"{section}.{key}", raw, where)
    return values


def apply_overrides(values, overrides):
    """Apply ``section.key=value`` strings or a mapping of dotted keys."""
    values = copy.deepcopy(values)
    items = overrides.items() if isinstance(overrides, dict) else (_split(o) for o in overrides)
    for dotted, raw in items:
        set_value(values, dotted, raw, " (override)")
    return values


def _split(item):
    key, sep, raw = str(item).partition("=")
    if not sep:
        raise ConfigurationError(f"override {item!r} is not of the form key=value", key=item)
    return key.strip(), raw.strip()


def initial_state_from(values):
    st = values["initial_state"]
    if st.get("matrix") is not None:
        return st["matrix"]
    name = str(st.get("preset") or "singlet").strip().lower()
    if name not in STATE_PRESETS:
        raise ConfigurationError(f"unknown initial state preset {name!r}", key="initial_state.preset")
    return STATE_PRESETS[name]()


def build_params(values):
    """RpParams from a values dictionary; invariant violations name their key."""
    f, rf, hf, rates, noise = (values[s] for s in ("field", "rf", "hyperfine", "rates", "noise"))
    gamma = rates["gamma"]
    osc = None
    if rf["b_rf"] > 0:
        omega = model.resonant_omega(f["b0"], gamma) if rf["omega"] == "resonant" else rf["omega"]
        alpha, track = rf["alpha"], rf["track_theta"]
        if alpha == "perpendicular":
            alpha, track = np.pi / 2, True
        elif alpha == "parallel":
            alpha, track = 0.0, True
        osc = model.OscillatingField(rf["b_rf"], omega, alpha, rf["beta"], track, rf["electrons"])
    spec = None
    if noise["kind"] is not None:
        spec = model.NoiseSpec(noise["kind"], noise["gamma_rate"])
    return model.RpParams(
        static_field=model.StaticField(f["b0"], f["theta"], f["phi"]),
        hf=model.HyperfineTensor(hf["ax"], hf["ay"], hf["az"]),
        k=rates["k"],
        osc_field=osc,
        gamma=gamma,
        initial_electron_state=initial_state_from(values),
        noise=spec,
    )


def load_params(path=None, preset="reference", overrides=()):
    values = apply_overrides(load_values(path, preset), overrides)
    return build_params(values), values


def dump_values(values):
    """JSON-friendly copy of a values dictionary."""
    out = {}
    for section, entries in values.items():
        out[section] = {}
        for key, v in entries.items():
            if isinstance(v, np.ndarray):
                v = [[float(x.real), float(x.imag)] for x in v.ravel()]
            elif isinstance(v, tuple):
                v = list(v)
            out[section][key] = v
    return out

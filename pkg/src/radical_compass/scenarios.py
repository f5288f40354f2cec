"""Deterministic sweeps behind each figure, random-state studies and output files.

A scenario is a list of curves, each a fully resolved parameter set plus the
quantities to evaluate on it. Work is split into fixed-size chunks of
theta points (or sampled states) so the chunking, and therefore every
number produced, does not depend on the worker count.
"""

import copy
import csv
import io
import json
import os
import platform
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy

from . import config, metrology, model, spinlin
from .entanglement import concurrence
from .errors import CompassError, ConfigurationError, ScenarioError
from .steady import SteadyMapFamily

VERSION = "0.1.0"
SCENARIOS = ("fig1", "fig2a", "fig2b", "figA1", "figA2", "figA3", "figA4",
             "figA5", "figA6", "figA7", "custom")
DESCRIPTIONS = {
    "fig1": "QFI vs theta for three field strengths and with perpendicular RF",
    "fig2a": "1/var(theta) for the total-spin measurement",
    "fig2b": "1/var(theta) for the S_z^2 measurement",
    "figA1": "QFI with and without RF for k = 1e4, 1e5, 1e6",
    "figA2": "QFI disruption by perpendicular RF for random initial states",
    "figA3": "as fig1 with A_x = A_y = A_z / 2",
    "figA4": "QFI and concurrence vs k at theta = pi/4",
    "figA5": "amplitude damping at Gamma = 0.1k, k, 10k",
    "figA6": "dephasing at Gamma = 0.1k, k, 10k",
    "figA7": "depolarizing at Gamma = 0.1k, k, 10k",
    "custom": "single parameter point from a config file",
}
NOISE_SCENARIOS = {"figA5": "amplitude_damping", "figA6": "dephasing", "figA7": "depolarizing"}
GAMMA_FACTORS = (("G_0.1k", 0.1), ("G_1k", 1.0), ("G_10k", 10.0))
FIELDS_UT = (32.2, 46.0, 59.8)
FLAT_QFI = 1e-9
CHUNK = 12
STATE_CHUNK = 10
CSV_HEADER = ("scenario", "curve", "theta_rad", "quantity", "value", "method")


def default_theta_grid(n=46):
    return np.linspace(0.01, np.pi / 2, n)


def workers_from_env(default=1):
    raw = os.environ.get("RADICAL_COMPASS_WORKERS")
    if raw is None:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise ConfigurationError(
            f"RADICAL_COMPASS_WORKERS={raw!r} is not an integer", key="RADICAL_COMPASS_WORKERS"
        ) from None
    if n < 1:
        raise ConfigurationError("worker count must be >= 1", key="RADICAL_COMPASS_WORKERS")
    return n


# ------------------------------------------------------------ specs


@dataclass(frozen=True)
class SweepSpec:
    scenario: str
    theta_grid: tuple = None
    overrides: dict = field(default_factory=dict)
    seed: int = 0
    parallelism: int = 1
    n_states: int = 100
    measure: str = "hilbert_schmidt_mixed"
    base_values: dict = None  # resolved config for the custom scenario

    __hash__ = object.__hash__

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigurationError(f"unknown scenario {self.scenario!r}", key="scenario")
        grid = default_theta_grid() if self.theta_grid is None else self.theta_grid
        grid = tuple(float(t) for t in np.atleast_1d(grid))
        if not grid:
            raise ConfigurationError("theta grid is empty", key="theta_grid")
        object.__setattr__(self, "theta_grid", grid)
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be a 64-bit unsigned integer", key="seed")
        if int(self.parallelism) < 1:
            raise ConfigurationError("parallelism must be >= 1", key="workers")
        if self.n_states < 1:
            raise ConfigurationError("n_states must be >= 1", key="n_states")
        if self.measure not in RandomStateSampler.MEASURES:
            raise ConfigurationError(f"unknown measure {self.measure!r}", key="measure")


@dataclass(frozen=True)
class Row:
    curve: str
    theta: float
    quantity: str
    value: float
    method: str


@dataclass
class SweepResult:
    scenario: str
    rows: list
    manifest: dict

    def values(self, curve, quantity):
        """(thetas, values) for one curve and quantity, in theta order."""
        sel = [r for r in self.rows if r.curve == curve and r.quantity == quantity]
        return np.array([r.theta for r in sel]), np.array([r.value for r in sel])

    def curves(self):
        return sorted({r.curve for r in self.rows})

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([self.scenario, r.curve, repr(float(r.theta)), r.quantity,
                        f"{r.value:.17g}", r.method])
        return buf.getvalue()


@dataclass(frozen=True)
class Curve:
    label: str
    params: model.RpParams
    quantities: tuple
    dt: float = None
    values: dict = None

    __hash__ = object.__hash__


# ------------------------------------------------------------ random states


class RandomStateSampler:
    """Seeded two-qubit states: Ginibre (Hilbert-Schmidt) mixed or Haar pure."""

    MEASURES = ("hilbert_schmidt_mixed", "haar_pure")

    def __init__(self, measure="hilbert_schmidt_mixed", seed=0):
        if measure not in self.MEASURES:
            raise ConfigurationError(f"unknown measure {measure!r}", key="measure")
        self.measure, self.seed = measure, int(seed)
        self._rng = np.random.default_rng(self.seed)

    def sample(self):
        rng = self._rng
        if self.measure == "haar_pure":
            v = rng.normal(size=4) + 1j * rng.normal(size=4)
            rho = spinlin.projector(v / np.linalg.norm(v))
        else:
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            rho = g @ g.conj().T
            rho = rho / np.trace(rho).real
        return spinlin.check_density(spinlin.hermitize(rho))

    def states(self, n):
        return [self.sample() for _ in range(n)]


# ------------------------------------------------------------ evaluation


def _closed_form(p, theta):
    """Strong-hyperfine closed form where it applies, else None."""
    if p.hf.ax != 0 or p.noisy or p.static_field.phi != 0:
        return None
    rho0 = p.initial_electron_state
    if not p.driven:
        return metrology.qfi_strong_hf_static(rho0, theta)
    f = p.osc_field
    resonant = np.isclose(f.omega, model.resonant_omega(p.static_field.magnitude_T, p.gamma))
    perpendicular = f.track_theta and np.isclose(f.alpha, np.pi / 2) and f.beta == 0
    if resonant and perpendicular:
        return metrology.qfi_strong_hf_driven(rho0, theta, p.k, p.gamma * f.magnitude_T)
    return None


def _evaluate_curve(curve, thetas):
    """Rows for one curve over a chunk of theta values."""
    try:
        fam = SteadyMapFamily(curve.params, dt=curve.dt)
    except CompassError as exc:
        raise ScenarioError(
            f"curve {curve.label!r} failed while calibrating at theta={curve.params.theta!r}: {exc}",
            point={"curve": curve.label, "theta": float(curve.params.theta)},
        ) from exc
    tag = f"{fam.method}+spectral"
    s2, sz2 = spinlin.total_spin_sq(), spinlin.total_sz_sq()
    rows = []
    for theta in thetas:
        try:
            st = metrology.Stencil(fam.family(), theta)
            out = {}
            q = curve.quantities
            if "qfi" in q:
                out["qfi"] = metrology.qfi_spectral(None, theta, stencil=st)
            if "qfi_closed_form" in q:
                cf = _closed_form(curve.params, theta)
                if cf is not None:
                    out["qfi_closed_form"] = cf
            if "singlet_yield" in q:
                out["singlet_yield"] = metrology.singlet_yield(st.rho)
            for name, obs in (("s2", s2), ("sz2", sz2)):
                if f"cfi_{name}" in q:
                    out[f"cfi_{name}"] = metrology.cfi_projective(None, obs, theta, stencil=st)
                if f"inv_var_{name}" in q:
                    ep = metrology.error_propagation(None, obs, theta, stencil=st)
                    out[f"inv_var_{name}"] = ep.inv_var
            if "concurrence" in q:
                out["concurrence"] = concurrence(st.rho)
        except CompassError as exc:
            raise ScenarioError(
                f"curve {curve.label!r} failed at theta={theta!r}: {exc}",
                point={"curve": curve.label, "theta": float(theta)},
            ) from exc
        for name, value in out.items():
            method = "closed_form" if name == "qfi_closed_form" else tag
            rows.append(Row(curve.label, float(theta), name, float(value), method))
    return rows


def _curve_task(args):
    curve, thetas = args
    return _evaluate_curve(curve, thetas)


def _state_task(args):
    """Undriven and driven QFI for a chunk of initial states."""
    p_off, p_on, states, thetas, offset = args
    off, on = SteadyMapFamily(p_off), SteadyMapFamily(p_on)
    out = []
    for i, rho0 in enumerate(states):
        q0 = np.empty(len(thetas))
        q1 = np.empty(len(thetas))
        for j, theta in enumerate(thetas):
            try:
                q0[j] = metrology.qfi_spectral(off.family(rho0), theta)
                q1[j] = metrology.qfi_spectral(on.family(rho0), theta)
            except CompassError as exc:
                raise ScenarioError(
                    f"random state {offset + i} failed at theta={theta!r}: {exc}",
                    point={"state": offset + i, "theta": float(theta)},
                ) from exc
        out.append((q0, q1))
    return out


def _map(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(fn, tasks))


def _chunks(seq, size):
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def evaluate_curves(curves, thetas, workers=1):
    tasks = [(c, chunk) for c in curves for chunk in _chunks(list(thetas), CHUNK)]
    rows = [r for part in _map(_curve_task, tasks, workers) for r in part]
    return sorted(rows, key=lambda r: (r.curve, r.theta, r.quantity))


def ratio_rows(rows, pairs):
    """Delta QFI / QFI for (undriven, driven) curve pairs, flagged where flat."""
    qfi = {(r.curve, r.theta): r.value for r in rows if r.quantity == "qfi"}
    out = []
    for base, driven in pairs:
        for (label, theta), q0 in sorted(qfi.items()):
            if label != base or (driven, theta) not in qfi:
                continue
            if q0 < FLAT_QFI:
                out.append(Row(driven, theta, "flat_signal", 1.0, "guard"))
                continue
            ratio = (q0 - qfi[(driven, theta)]) / q0
            out.append(Row(driven, theta, "delta_qfi_ratio", ratio, f"ratio_vs:{base}"))
    return out


# ------------------------------------------------------------ scenario builders

QFI_COLUMNS = ("qfi", "qfi_closed_form", "singlet_yield")


def _values_for(base, b0_uT=46.0, rf=None, hf_ratio=0.0, k=None, noise=None):
    v = copy.deepcopy(base)
    v["field"]["b0"] = b0_uT * 1e-6
    v["hyperfine"]["ax"] = v["hyperfine"]["ay"] = hf_ratio * v["hyperfine"]["az"]
    if k is not None:
        v["rates"]["k"] = float(k)
    if rf is not None:
        v["rf"].update(b_rf=model.B_RF_REFERENCE, omega="resonant", alpha=rf, track_theta=True)
    if noise is not None:
        v["noise"].update(kind=noise[0], gamma_rate=noise[1])
    return v


def _field_label(b0_uT):
    return f"B0_{b0_uT:.1f}uT"


def _field_set(base, quantities, hf_ratio=0.0, prefix="", noise=None, parallel=True):
    """Three undriven field strengths plus the RF curves at 46 uT."""
    specs = [(prefix + _field_label(b), _values_for(base, b, hf_ratio=hf_ratio, noise=noise))
             for b in FIELDS_UT]
    ref = prefix + _field_label(46.0)
    specs.append((prefix + "rf_perp", _values_for(base, 46.0, "perpendicular", hf_ratio, noise=noise)))
    pairs = [(ref, prefix + "rf_perp")]
    if parallel:
        specs.append((prefix + "rf_par", _values_for(base, 46.0, "parallel", hf_ratio, noise=noise)))
        pairs.append((ref, prefix + "rf_par"))
    return [(label, v, quantities) for label, v in specs], pairs


def _caption(hf_ratio=0.0, k=1e4, b0s=FIELDS_UT, **extra):
    az = model.AZ_REFERENCE
    cap = {"A_z": az, "A_x": hf_ratio * az, "A_y": hf_ratio * az, "k": k,
           "B0_T": [b * 1e-6 for b in b0s], "B_rf_T": model.B_RF_REFERENCE,
           "initial_state": "singlet"}
    cap.update(extra)
    return cap


def build_scenario(spec):
    """(curve specs, ratio pairs, caption, theta grid) for a sweep spec."""
    base = config.default_values()
    name = spec.scenario
    thetas = spec.theta_grid
    if name == "fig1":
        specs, pairs = _field_set(base, QFI_COLUMNS)
        caption = _caption()
    elif name in ("fig2a", "fig2b"):
        obs = "s2" if name == "fig2a" else "sz2"
        specs, pairs = _field_set(base, ("qfi", "singlet_yield", f"cfi_{obs}", f"inv_var_{obs}"),
                                  parallel=False)
        caption = _caption(observable="S^2" if obs == "s2" else "S_z^2")
    elif name == "figA1":
        specs, pairs = [], []
        for k in model.K_VALUES:
            tag = f"k_{k:.0e}"
            specs.append((f"{tag}_undriven", _values_for(base, k=k), QFI_COLUMNS))
            specs.append((f"{tag}_rf_perp", _values_for(base, rf="perpendicular", k=k), QFI_COLUMNS))
            pairs.append((f"{tag}_undriven", f"{tag}_rf_perp"))
        caption = _caption(k=list(model.K_VALUES), b0s=(46.0,))
    elif name == "figA3":
        specs, pairs = _field_set(base, ("qfi", "singlet_yield"), hf_ratio=0.5)
        caption = _caption(hf_ratio=0.5)
    elif name == "figA4":
        thetas = (np.pi / 4,)
        specs, pairs = [], []
        for e in np.arange(3.0, 10.01, 0.5):
            specs.append((f"log10k_{e:06.3f}", _values_for(base, k=10.0**e),
                          ("qfi", "concurrence", "singlet_yield")))
        caption = _caption(b0s=(46.0,), k=[10.0**e for e in np.arange(3.0, 10.01, 0.5)],
                           theta=np.pi / 4)
        caption.pop("B_rf_T")
    elif name in NOISE_SCENARIOS:
        kind = NOISE_SCENARIOS[name]
        specs, pairs = [], []
        for tag, factor in GAMMA_FACTORS:
            s, pr = _field_set(base, ("qfi", "singlet_yield"), prefix=f"{tag}_",
                               noise=(kind, factor * 1e4), parallel=False)
            specs += s
            pairs += pr
        caption = _caption(noise=kind, gamma_over_k=[f for _, f in GAMMA_FACTORS])
    elif name == "custom":
        v = spec.base_values if spec.base_values is not None else base
        q = ("qfi", "qfi_closed_form", "singlet_yield", "cfi_s2", "cfi_sz2",
             "inv_var_s2", "inv_var_sz2", "concurrence")
        specs = [("custom", v, q)]
        pairs = []
        if v["rf"]["b_rf"] > 0:
            off = copy.deepcopy(v)
            off["rf"]["b_rf"] = 0.0
            specs.append(("custom_undriven", off, q))
            pairs.append(("custom_undriven", "custom"))
        caption = {}
    elif name == "figA2":
        specs = [("singlet_undriven", _values_for(base), ("qfi",)),
                 ("singlet_rf_perp", _values_for(base, rf="perpendicular"), ("qfi",))]
        pairs = [("singlet_undriven", "singlet_rf_perp")]
        caption = _caption(b0s=(46.0,), n_states=spec.n_states, measure=spec.measure)
    else:  # pragma: no cover - guarded by SweepSpec
        raise ConfigurationError(f"unknown scenario {name!r}", key="scenario")
    curves = []
    for label, values, quantities in specs:
        values = config.apply_overrides(values, spec.overrides or {})
        values["field"]["theta"] = np.pi / 4
        curves.append(Curve(label, config.build_params(values), tuple(quantities),
                            values["numerics"]["dt"], values))
    return curves, pairs, caption, tuple(thetas)


# ------------------------------------------------------------ studies


@dataclass
class RandomStudyResult:
    thetas: np.ndarray
    qfi_undriven: np.ndarray  # (n_states, n_theta)
    qfi_driven: np.ndarray
    states: list

    @property
    def flat(self):
        return self.qfi_undriven < FLAT_QFI

    @property
    def ratios(self):
        q0 = np.where(self.flat, np.nan, self.qfi_undriven)
        return (q0 - self.qfi_driven) / q0

    @property
    def min_ratio(self):
        return float(np.nanmin(self.ratios))


def random_state_study(n, sampler, theta_grid=None, params=None, workers=1):
    """Delta QFI / QFI under perpendicular 150 nT RF for ``n`` sampled states."""
    if n < 1:
        raise ConfigurationError("need at least one state", key="n_states")
    thetas = tuple(default_theta_grid() if theta_grid is None else theta_grid)
    p_off = params if params is not None else model.reference_params()
    p_on = p_off.with_(osc_field=model.perpendicular_rf(p_off.static_field.magnitude_T,
                                                        gamma=p_off.gamma))
    states = sampler.states(n)
    tasks = [(p_off, p_on, chunk, thetas, i * STATE_CHUNK)
             for i, chunk in enumerate(_chunks(states, STATE_CHUNK))]
    res = [r for part in _map(_state_task, tasks, workers) for r in part]
    return RandomStudyResult(np.array(thetas), np.array([r[0] for r in res]),
                             np.array([r[1] for r in res]), states)


def k_order_analysis(theta_grid=None, k_values=model.K_VALUES, workers=1):
    """Per-k undriven and driven QFI curves with the disruption ratio."""
    spec = SweepSpec("figA1", theta_grid=theta_grid, parallelism=workers)
    res = run_scenario(spec)
    out = {}
    for k in k_values:
        tag = f"k_{k:.0e}"
        th, q0 = res.values(f"{tag}_undriven", "qfi")
        _, q1 = res.values(f"{tag}_rf_perp", "qfi")
        _, ratio = res.values(f"{tag}_rf_perp", "delta_qfi_ratio")
        out[k] = {"theta": th, "undriven": q0, "driven": q1, "ratio": ratio}
    return out


# ------------------------------------------------------------ driver


def _summary(rows, pairs):
    summary = {"signal_contrast": {}, "min_delta_qfi_ratio": {}, "max_delta_qfi_ratio": {}}
    yields = {}
    for r in rows:
        if r.quantity == "singlet_yield":
            yields.setdefault(r.curve, []).append(r.value)
    for label, ys in yields.items():
        if len(ys) > 1:
            summary["signal_contrast"][label] = metrology.signal_contrast(ys)
    for _, driven in pairs:
        vals = [r.value for r in rows if r.curve == driven and r.quantity == "delta_qfi_ratio"]
        if vals:
            summary["min_delta_qfi_ratio"][driven] = min(vals)
            summary["max_delta_qfi_ratio"][driven] = max(vals)
    return summary


def _method_for(curve):
    fam = "quadrature" if curve.params.driven else (
        "liouvillian_resolvent" if curve.params.noisy else "unitary_resolvent")
    return {"steady_state": fam, "qfi": "spectral",
            "derivative": f"central difference h={metrology.H_DEFAULT:g} with h/2 check"}


def run_scenario(spec):
    t0 = time.perf_counter()
    curves, pairs, caption, thetas = build_scenario(spec)
    workers = int(spec.parallelism)
    rows = evaluate_curves(curves, thetas, workers)
    extra = {}
    if spec.scenario == "figA2":
        sampler = RandomStateSampler(spec.measure, spec.seed)
        study = random_state_study(spec.n_states, sampler, thetas, curves[0].params, workers)
        for i in range(spec.n_states):
            label = f"state_{i:03d}"
            for j, theta in enumerate(study.thetas):
                rows.append(Row(label, float(theta), "qfi_undriven",
                                float(study.qfi_undriven[i, j]), "exact+spectral"))
                rows.append(Row(label, float(theta), "qfi_driven",
                                float(study.qfi_driven[i, j]), "exact+spectral"))
                if study.flat[i, j]:
                    rows.append(Row(label, float(theta), "flat_signal", 1.0, "guard"))
                else:
                    rows.append(Row(label, float(theta), "delta_qfi_ratio",
                                    float(study.ratios[i, j]), "ratio_vs:undriven"))
        extra = {"min_delta_qfi_ratio_states": study.min_ratio,
                 "flat_points": int(study.flat.sum())}
    rows = rows + ratio_rows(rows, pairs)
    rows.sort(key=lambda r: (r.curve, r.theta, r.quantity))
    summary = _summary(rows, pairs)
    summary.update(extra)
    manifest = {
        "scenario": spec.scenario,
        "description": DESCRIPTIONS[spec.scenario],
        "seed": int(spec.seed),
        "theta_grid": list(thetas),
        "overrides": {str(k): str(v) for k, v in dict(spec.overrides or {}).items()},
        "caption": caption,
        "curves": {
            c.label: {"values": config.dump_values(c.values), "quantities": list(c.quantities),
                      "method": _method_for(c)}
            for c in curves
        },
        "ratio_pairs": [list(p) for p in pairs],
        "summary": summary,
        "versions": {"radical_compass": VERSION, "numpy": np.__version__,
                     "scipy": scipy.__version__, "python": platform.python_version()},
        "workers": workers,
        "wall_time_s": time.perf_counter() - t0,
    }
    if spec.scenario == "figA2":
        manifest["sampler"] = {"measure": spec.measure, "seed": int(spec.seed),
                               "n_states": spec.n_states}
    return SweepResult(spec.scenario, rows, manifest)


# ------------------------------------------------------------ output

PRIMARY = {"fig2a": "inv_var_s2", "fig2b": "inv_var_sz2", "figA2": "delta_qfi_ratio"}


def _svg(result):
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    qty = PRIMARY.get(result.scenario, "qfi")
    if result.scenario == "figA4":
        for q in ("qfi", "concurrence"):
            pts = sorted((float(c.split("_")[1]), v) for c in result.curves()
                         for v in result.values(c, q)[1])
            ax.plot([10**e for e, _ in pts], [v for _, v in pts], marker="o", label=q)
        ax.set_xscale("log")
        ax.set_xlabel("k (1/s)")
    else:
        for c in result.curves():
            th, v = result.values(c, qty)
            if th.size:
                ax.plot(th, v, lw=1 if c.startswith("state_") else 1.8,
                        label=None if c.startswith("state_") else c)
        ax.set_xlabel("theta (rad)")
        ax.set_ylabel(qty)
    ax.set_title(result.scenario)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=7)
    buf = io.StringIO()
    fig.savefig(buf, format="svg")
    return buf.getvalue()


def write_outputs(result, output_dir, svg=True):
    """Write ``<scenario>_<seed>.{csv,json,svg}``; nothing is left behind on failure."""
    os.makedirs(output_dir, exist_ok=True)
    stem = f"{result.scenario}_{result.manifest['seed']}"
    payloads = {"csv": result.to_csv(),
                "json": json.dumps(result.manifest, indent=2, sort_keys=True, default=_json_default)}
    if svg:
        payloads["svg"] = _svg(result)
    temps = {}
    try:
        for ext, text in payloads.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{stem}.", suffix=f".{ext}.tmp", dir=output_dir)
            temps[ext] = tmp
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.chmod(tmp, 0o644)
        paths = []
        for ext, tmp in temps.items():
            dest = os.path.join(output_dir, f"{stem}.{ext}")
            os.replace(tmp, dest)
            paths.append(dest)
        return paths
    finally:
        for tmp in temps.values():
            if os.path.exists(tmp):
                os.remove(tmp)


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))

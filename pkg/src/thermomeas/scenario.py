"""Scenario ingestion, deterministic execution, and report/sweep emission.

Scenario files are JSON. Complex numbers serialize as ``[re, im]`` pairs,
matrices as row-major nested arrays of such pairs, and diagonal
Hamiltonians may be given as flat lists of real energies. A scenario names
a system (and optionally probe) Hamiltonian, an inverse temperature, a
scheme constructor (``"swap"``, ``"random_block"``, or an explicit Kraus
list) and/or an observable for classifier-only runs, a collection of input
states, the checks to run, and tolerances.

Reports are deterministic: for a fixed scenario and seed the emitted JSON
is byte-identical across runs and thread counts (timing is therefore kept
out of the serialized report unless explicitly requested).
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .errors import ValidationError
from .linalg import eig_hermitian, frobenius, require_hermitian
from .objects import (
    ChoiMatrix,
    Instrument,
    KrausChannel,
    Observable,
    State,
    gibbs_state,
    spectral_observable,
)
from .sampling import random_density_matrix, rng_from_seed
from .schemes import (
    MeasurementScheme,
    energy_moment_defect,
    induced_instrument,
    random_free_scheme,
    trivial_scheme,
    validate_free_scheme,
)
from .thermo import heat_absorbed, second_law_report, skew_information_chain
from . import classify

SCHEMA_VERSION = 1

DEFAULT_THEOREM_TOL = 1e-8
DEFAULT_VALIDATION_TOL = 1e-9

KNOWN_CHECKS = (
    "free_scheme",
    "second_law",
    "covariant",
    "gibbs_preserving",
    "nuclear",
    "prop2",
    "quasi_complete",
    "thermal_observable",
    "joint_observable",
    "post_processing",
    "refine",
    "moments",
    "skew_chain",
    "heat_duality",
)


# ---------------------------------------------------------------------------
# JSON (de)serialization of matrices and quantum objects
# ---------------------------------------------------------------------------


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[encode_complex(z) for z in row] for row in m]


def decode_matrix(obj, name: str = "matrix") -> np.ndarray:
    """Nested rows of ``[re, im]`` pairs (bare reals are accepted as entries)."""
    if not isinstance(obj, list) or not obj:
        raise ValidationError(f"{name}: expected a nonempty nested list")
    rows = []
    for row in obj:
        if not isinstance(row, list):
            raise ValidationError(f"{name}: expected a list of rows")
        entries = []
        for entry in row:
            if isinstance(entry, (int, float)):
                entries.append(complex(entry))
            elif isinstance(entry, list) and len(entry) == 2:
                entries.append(complex(entry[0], entry[1]))
            else:
                raise ValidationError(
                    f"{name}: matrix entries must be numbers or [re, im] pairs, got {entry!r}"
                )
        rows.append(entries)
    return np.array(rows, dtype=complex)


def decode_hamiltonian(obj, name: str) -> np.ndarray:
    """Full matrix, or a flat list of real energies meaning a diagonal matrix."""
    if isinstance(obj, list) and obj and all(isinstance(e, (int, float)) for e in obj):
        return np.diag(np.asarray(obj, dtype=float)).astype(complex)
    return require_hermitian(decode_matrix(obj, name), name=name)


def encode_observable(observable: Observable) -> dict:
    return {
        "outcomes": list(observable.outcomes),
        "effects": [encode_matrix(e) for e in observable.effects],
    }


def decode_observable(obj, tol: float = DEFAULT_VALIDATION_TOL) -> Observable:
    if not isinstance(obj, dict) or "effects" not in obj:
        raise ValidationError("observable: expected an object with an 'effects' field")
    effects = [decode_matrix(e, f"effect {i}") for i, e in enumerate(obj["effects"])]
    outcomes = obj.get("outcomes") or [f"x{i}" for i in range(len(effects))]
    return Observable(outcomes, effects, tol)


def encode_channel(channel: KrausChannel) -> dict:
    return {"kraus": [encode_matrix(k) for k in channel.kraus]}


def decode_channel(obj, tol: float = DEFAULT_VALIDATION_TOL) -> KrausChannel:
    if not isinstance(obj, dict) or "kraus" not in obj:
        raise ValidationError("channel: expected an object with a 'kraus' field")
    return KrausChannel([decode_matrix(k, f"Kraus {i}") for i, k in enumerate(obj["kraus"])], tol)


def encode_state(state: State) -> dict:
    return {"matrix": encode_matrix(state.matrix)}


def encode_instrument(instrument: Instrument) -> dict:
    return {
        "outcomes": list(instrument.outcomes),
        "kraus_sets": [[encode_matrix(k) for k in ops] for ops in instrument.kraus_sets],
    }


def decode_instrument(obj, tol: float = DEFAULT_VALIDATION_TOL) -> Instrument:
    if not isinstance(obj, dict) or "kraus_sets" not in obj:
        raise ValidationError("instrument: expected an object with a 'kraus_sets' field")
    sets = [
        [decode_matrix(k, f"Kraus {i}.{j}") for j, k in enumerate(ops)]
        for i, ops in enumerate(obj["kraus_sets"])
    ]
    outcomes = obj.get("outcomes") or [f"x{i}" for i in range(len(sets))]
    return Instrument(outcomes, sets, tol)


def encode_choi(choi: ChoiMatrix) -> dict:
    return {
        "matrix": encode_matrix(choi.matrix),
        "dim_out": choi.dim_out,
        "dim_in": choi.dim_in,
    }


def decode_choi(obj, tol: float = DEFAULT_VALIDATION_TOL) -> ChoiMatrix:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ValidationError("Choi matrix: expected an object with a 'matrix' field")
    return ChoiMatrix(
        decode_matrix(obj["matrix"], "Choi matrix"),
        int(obj["dim_out"]),
        int(obj["dim_in"]),
        tol,
    )


# ---------------------------------------------------------------------------
# Scenario resolution
# ---------------------------------------------------------------------------


@dataclass
class Scenario:
    """A parsed scenario: resolved objects plus the canonical echo dict."""

    beta: float
    seed: int
    system_hamiltonian: np.ndarray
    probe_hamiltonian: np.ndarray
    scheme: MeasurementScheme
    observable: Observable
    states: list
    checks: list
    tolerances: dict
    echo: dict

    _instrument: Instrument = None

    def tol_for(self, check: str) -> float:
        return float(self.tolerances.get(check, self.tolerances["default"]))

    @property
    def instrument(self) -> Instrument:
        """Instrument under test: induced by the scheme, else Lueders of the observable."""
        if self._instrument is None:
            if self.scheme is not None:
                self._instrument = induced_instrument(self.scheme)
            elif self.observable is not None:
                self._instrument = Instrument.luders(self.observable)
            else:
                raise ValidationError("scenario provides neither a scheme nor an observable")
        return self._instrument

    def observable_under_test(self) -> Observable:
        if self.observable is not None:
            return self.observable
        return self.instrument.induced_observable()


def _named_state(name: str, h_system, beta: float) -> State:
    if name == "gibbs":
        return gibbs_state(h_system, beta)
    if name == "maximally_mixed":
        d = h_system.shape[0]
        return State(np.eye(d) / d)
    if name == "ground":
        decomp = eig_hermitian(h_system)
        p = decomp.projectors[0]
        return State(p / decomp.multiplicities[0])
    raise ValidationError(
        f"unknown named state {name!r}; expected 'gibbs', 'ground', or 'maximally_mixed'"
    )


def _resolve_states(spec, h_system, beta, scenario_seed) -> tuple:
    """Return ([(name, State)], canonical echo entry)."""
    if spec is None:
        spec = ["gibbs"]
    states = []
    if isinstance(spec, dict):
        count = int(spec.get("count", 0))
        seed = int(spec.get("seed", scenario_seed))
        if count < 0:
            raise ValidationError(f"states.count must be nonnegative, got {count}")
        rng = rng_from_seed(seed)
        d = h_system.shape[0]
        for i in range(count):
            states.append((f"random_{i:04d}", random_density_matrix(d, rng)))
        return states, {"count": count, "seed": seed}
    if isinstance(spec, list):
        echo = []
        for i, entry in enumerate(spec):
            if isinstance(entry, str):
                states.append((entry, _named_state(entry, h_system, beta)))
                echo.append(entry)
            elif isinstance(entry, dict) and "matrix" in entry:
                name = str(entry.get("name", f"state_{i}"))
                states.append((name, State(decode_matrix(entry["matrix"], name))))
                echo.append({"name": name, "matrix": encode_matrix(states[-1][1].matrix)})
            else:
                raise ValidationError(f"states[{i}]: expected a name or an object with 'matrix'")
        return states, echo
    raise ValidationError("states: expected a generator object or a list")


def _resolve_scheme(spec, h_system, h_probe, beta, scenario_seed, observable, validation_tol):
    if spec is None:
        return None, None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValidationError("scheme: expected an object with a 'kind' field")
    kind = spec["kind"]
    pointer = None
    if spec.get("pointer") is not None:
        pointer = decode_observable(spec["pointer"], validation_tol)
    if kind == "swap":
        target = pointer or observable
        if target is None:
            raise ValidationError("scheme 'swap' needs a pointer or a top-level observable")
        scheme = trivial_scheme(target, h_system, beta)
        echo = {"kind": "swap", "pointer": encode_observable(target)}
        return scheme, echo
    if kind == "random_block":
        if pointer is None:
            raise ValidationError("scheme 'random_block' needs a pointer observable on the probe")
        seed = int(spec.get("seed", scenario_seed))
        mixture_size = int(spec.get("mixture_size", 3))
        scheme = random_free_scheme(h_system, h_probe, beta, pointer, seed, mixture_size)
        echo = {
            "kind": "random_block",
            "seed": seed,
            "mixture_size": mixture_size,
            "pointer": encode_observable(pointer),
        }
        return scheme, echo
    if kind == "kraus":
        if pointer is None:
            raise ValidationError("scheme 'kraus' needs a pointer observable on the probe")
        interaction = decode_channel(spec, validation_tol)
        scheme = MeasurementScheme(h_system, h_probe, beta, interaction, pointer)
        echo = {
            "kind": "kraus",
            "kraus": [encode_matrix(k) for k in interaction.kraus],
            "pointer": encode_observable(pointer),
        }
        return scheme, echo
    raise ValidationError(f"unknown scheme kind {kind!r}; expected swap, random_block, or kraus")


def parse_scenario(raw: dict, seed_override=None, tol_override=None) -> Scenario:
    """Validate and resolve a scenario dict into live objects plus a canonical echo."""
    if not isinstance(raw, dict):
        raise ValidationError("scenario: expected a JSON object at top level")
    schema = raw.get("schema_version", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {schema}, expected {SCHEMA_VERSION}")
    if "system_hamiltonian" not in raw:
        raise ValidationError("scenario: missing required field 'system_hamiltonian'")
    if "beta" not in raw:
        raise ValidationError("scenario: missing required field 'beta'")
    beta = float(raw["beta"])
    if not np.isfinite(beta) or beta <= 0:
        raise ValidationError(f"beta must be positive and finite, got {beta}")
    seed = int(seed_override if seed_override is not None else raw.get("seed", 0))

    tolerances = {"default": DEFAULT_THEOREM_TOL, "validation": DEFAULT_VALIDATION_TOL}
    raw_tols = raw.get("tolerances", {})
    if not isinstance(raw_tols, dict):
        raise ValidationError("tolerances: expected an object")
    for key, value in raw_tols.items():
        tolerances[str(key)] = float(value)
    if tol_override is not None:
        tolerances["default"] = float(tol_override)
    validation_tol = tolerances["validation"]

    h_system = decode_hamiltonian(raw["system_hamiltonian"], "system_hamiltonian")
    h_probe = (
        decode_hamiltonian(raw["probe_hamiltonian"], "probe_hamiltonian")
        if raw.get("probe_hamiltonian") is not None
        else h_system
    )

    observable = None
    if raw.get("observable") is not None:
        observable = decode_observable(raw["observable"], validation_tol)
        if observable.dim != h_system.shape[0]:
            raise ValidationError(
                f"observable dimension {observable.dim} does not match the system "
                f"dimension {h_system.shape[0]}"
            )

    scheme, scheme_echo = _resolve_scheme(
        raw.get("scheme"), h_system, h_probe, beta, seed, observable, validation_tol
    )
    if scheme is None and observable is None:
        raise ValidationError("scenario must provide a scheme, an observable, or both")

    checks = raw.get("checks")
    if not isinstance(checks, list) or not checks:
        raise ValidationError("scenario: 'checks' must be a nonempty list of check names")
    for name in checks:
        if name not in KNOWN_CHECKS:
            raise ValidationError(
                f"unknown check {name!r}; known checks: {', '.join(KNOWN_CHECKS)}"
            )
    scheme_checks = {"free_scheme", "second_law", "moments", "heat_duality"}
    for name in checks:
        if name in scheme_checks and scheme is None:
            raise ValidationError(f"check {name!r} requires a scheme")

    states, states_echo = _resolve_states(raw.get("states"), h_system, beta, seed)

    echo = {
        "schema_version": SCHEMA_VERSION,
        "beta": beta,
        "seed": seed,
        "system_hamiltonian": encode_matrix(h_system),
        "probe_hamiltonian": encode_matrix(h_probe),
        "scheme": scheme_echo,
        "observable": encode_observable(observable) if observable is not None else None,
        "states": states_echo,
        "checks": list(checks),
        "tolerances": tolerances,
    }
    return Scenario(
        beta=beta,
        seed=seed,
        system_hamiltonian=h_system,
        probe_hamiltonian=h_probe,
        scheme=scheme,
        observable=observable,
        states=states,
        checks=list(checks),
        tolerances=tolerances,
        echo=echo,
    )


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def _map_states(fn, states, jobs):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, states))
    return [fn(s) for s in states]


def _require_states(sc: Scenario, check: str):
    if not sc.states:
        raise ValidationError(f"check {check!r} requires at least one input state")


def _check_free_scheme(sc: Scenario, jobs: int) -> dict:
    report = validate_free_scheme(sc.scheme, sc.tol_for("free_scheme"))
    return {"name": "free_scheme", **report.to_dict()}


def _check_second_law(sc: Scenario, jobs: int) -> dict:
    tol = sc.tol_for("second_law")
    _require_states(sc, "second_law")

    def one(named):
        name, state = named
        law, work = second_law_report(sc.scheme, state, tol)
        return {"state": name, "work": work.to_dict(), "second_law": law.to_dict()}

    rows = _map_states(one, sc.states, jobs)
    verdict = all(r["second_law"]["verdict"] for r in rows)
    worst = min(r["second_law"]["prop1_slack"] for r in rows)
    return {
        "name": "second_law",
        "verdict": verdict,
        "n_states": len(rows),
        "worst_prop1_slack": worst,
        "per_state": rows,
    }


def _check_covariant(sc: Scenario, jobs: int) -> dict:
    verdict = classify.is_covariant_instrument(
        sc.instrument, sc.system_hamiltonian, sc.tol_for("covariant")
    )
    return {"name": "covariant", **verdict.to_dict()}


def _check_gibbs_preserving(sc: Scenario, jobs: int) -> dict:
    verdict = classify.is_gibbs_preserving(
        sc.instrument, sc.system_hamiltonian, sc.beta, sc.tol_for("gibbs_preserving")
    )
    return {"name": "gibbs_preserving", **verdict.to_dict()}


def _check_nuclear(sc: Scenario, jobs: int) -> dict:
    verdict = classify.is_nuclear(sc.instrument, sc.tol_for("nuclear"))
    return {"name": "nuclear", **verdict.to_dict()}


def _check_prop2(sc: Scenario, jobs: int) -> dict:
    verdict = classify.check_prop2(
        sc.instrument, sc.system_hamiltonian, sc.beta, sc.tol_for("prop2")
    )
    return {"name": "prop2", **verdict.to_dict()}


def _check_quasi_complete(sc: Scenario, jobs: int) -> dict:
    verdict = classify.is_quasi_complete(sc.instrument, sc.tol_for("quasi_complete"))
    return {"name": "quasi_complete", **verdict.to_dict()}


def _check_thermal_observable(sc: Scenario, jobs: int) -> dict:
    verdict = classify.is_thermal_observable(
        sc.observable_under_test(), sc.system_hamiltonian, sc.tol_for("thermal_observable")
    )
    return {"name": "thermal_observable", **verdict.to_dict()}


def _check_joint_observable(sc: Scenario, jobs: int) -> dict:
    tol = sc.tol_for("joint_observable")
    observable = sc.observable_under_test()
    joint = classify.joint_with_hamiltonian(observable, sc.system_hamiltonian, tol)
    energy = spectral_observable(sc.system_hamiltonian)
    n_m = energy.n_outcomes
    defect = 0.0
    for i, e in enumerate(observable.effects):
        marg = sum(joint.effects[i * n_m + j] for j in range(n_m))
        defect = max(defect, frobenius(marg - e))
    for j, p in enumerate(energy.effects):
        marg = sum(joint.effects[i * n_m + j] for i in range(observable.n_outcomes))
        defect = max(defect, frobenius(marg - p))
    return {
        "name": "joint_observable",
        "verdict": defect <= tol,
        "marginal_defect": defect,
        "n_effects": joint.n_outcomes,
        "tol": tol,
    }


def _check_post_processing(sc: Scenario, jobs: int) -> dict:
    tol = sc.tol_for("post_processing")
    post = classify.post_processing_decomposition(
        sc.observable_under_test(), sc.system_hamiltonian, tol
    )
    return {
        "name": "post_processing",
        "verdict": post.reconstruction_defect <= tol,
        "reconstruction_defect": post.reconstruction_defect,
        "matrix": [[float(v) for v in row] for row in post.matrix],
        "energies": [float(e) for e in post.energies],
        "tol": tol,
    }


def _check_refine(sc: Scenario, jobs: int) -> dict:
    tol = sc.tol_for("refine")
    observable = sc.observable_under_test()
    refined, relabel = classify.refine_to_rank_one(observable)
    defect = 0.0
    for y, original in zip(observable.outcomes, observable.effects):
        coarse = sum(
            e for label, e in zip(refined.outcomes, refined.effects) if relabel[label] == y
        )
        defect = max(defect, frobenius(coarse - original))
    return {
        "name": "refine",
        "verdict": defect <= tol and refined.is_rank_one(),
        "coarse_grain_defect": defect,
        "n_refined": refined.n_outcomes,
        "tol": tol,
    }


def _check_moments(sc: Scenario, jobs: int, max_moment: int = 4) -> dict:
    tol = sc.tol_for("moments")
    h_total = sc.scheme.total_hamiltonian()
    defects = [
        energy_moment_defect(sc.scheme.interaction, h_total, k)
        for k in range(1, max_moment + 1)
    ]
    joint_gibbs = np.kron(sc.scheme.system_gibbs().matrix, sc.scheme.probe_state.matrix)
    fixed_point = frobenius(sc.scheme.interaction.apply(joint_gibbs) - joint_gibbs)
    return {
        "name": "moments",
        "verdict": max(max(defects), fixed_point) <= tol,
        "moment_defects": defects,
        "fixed_point_defect": fixed_point,
        "tol": tol,
    }


def _check_skew_chain(sc: Scenario, jobs: int) -> dict:
    tol = sc.tol_for("skew_chain")
    _require_states(sc, "skew_chain")

    def one(named):
        name, state = named
        selective, convexity = skew_information_chain(
            sc.instrument, state, sc.system_hamiltonian
        )
        return {"state": name, "selective_slack": selective, "convexity_slack": convexity}

    rows = _map_states(one, sc.states, jobs)
    worst = min(min(r["selective_slack"], r["convexity_slack"]) for r in rows)
    return {
        "name": "skew_chain",
        "verdict": worst >= -tol,
        "n_states": len(rows),
        "worst_slack": worst,
        "per_state": rows,
    }


def _check_heat_duality(sc: Scenario, jobs: int) -> dict:
    tol = sc.tol_for("heat_duality")
    _require_states(sc, "heat_duality")

    def one(named):
        name, state = named
        report = heat_absorbed(sc.scheme, state)
        return {"state": name, "heat": report.heat, "duality_defect": report.duality_defect}

    rows = _map_states(one, sc.states, jobs)
    worst = max(r["duality_defect"] for r in rows)
    return {
        "name": "heat_duality",
        "verdict": worst <= tol,
        "n_states": len(rows),
        "worst_duality_defect": worst,
        "per_state": rows,
    }


_CHECK_FUNCTIONS = {
    "free_scheme": _check_free_scheme,
    "second_law": _check_second_law,
    "covariant": _check_covariant,
    "gibbs_preserving": _check_gibbs_preserving,
    "nuclear": _check_nuclear,
    "prop2": _check_prop2,
    "quasi_complete": _check_quasi_complete,
    "thermal_observable": _check_thermal_observable,
    "joint_observable": _check_joint_observable,
    "post_processing": _check_post_processing,
    "refine": _check_refine,
    "moments": _check_moments,
    "skew_chain": _check_skew_chain,
    "heat_duality": _check_heat_duality,
}


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


@dataclass
class RunReport:
    """Outcome of one scenario run; serializes deterministically.

    ``timing_ms`` is measured wall time and is excluded from the serialized
    form by default so that reports are byte-reproducible for a fixed
    scenario and seed.
    """

    scenario: dict
    checks: list
    verdict: bool
    timing_ms: float

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "version": __version__,
            "scenario": self.scenario,
            "checks": self.checks,
            "verdict": self.verdict,
        }
        if include_timing:
            out["timing_ms"] = self.timing_ms
        return out

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"


def _load(source) -> dict:
    if isinstance(source, dict):
        return source
    with open(source, "r", encoding="utf-8") as fh:
        return json.load(fh)


def run_scenario(source, seed=None, tol=None, jobs: int = 1) -> RunReport:
    """Execute a scenario (path or dict) and return the report.

    Checks run in declared order; the overall verdict is the conjunction of
    the per-check verdicts.
    """
    start = time.perf_counter()
    raw = _load(source)
    scenario = parse_scenario(raw, seed_override=seed, tol_override=tol)
    results = []
    for name in scenario.checks:
        results.append(_CHECK_FUNCTIONS[name](scenario, jobs))
    verdict = all(bool(r.get("verdict")) for r in results)
    elapsed = (time.perf_counter() - start) * 1000.0
    return RunReport(scenario=scenario.echo, checks=results, verdict=verdict, timing_ms=elapsed)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = (
    "axis",
    "axis_value",
    "seed",
    "beta",
    "state",
    "extractable_work",
    "average_extractable_work",
    "outcome_divergence",
    "heat",
    "groenewold_gain",
    "prop1_slack",
    "eq5_identity_defect",
    "eq5_bound_slack",
    "heat_bound_slack",
    "free_scheme_verdict",
    "second_law_verdict",
)


def _axis_values(axis) -> tuple:
    if not isinstance(axis, dict) or "name" not in axis:
        raise ValidationError("sweep: 'axis' must be an object with a 'name' field")
    name = axis["name"]
    if name not in ("beta", "seed"):
        raise ValidationError(f"sweep axis must be 'beta' or 'seed', got {name!r}")
    if "values" in axis:
        values = list(axis["values"])
    elif "range" in axis:
        lo, hi = axis["range"]
        values = list(range(int(lo), int(hi) + 1))
    else:
        raise ValidationError("sweep axis needs 'values' or 'range'")
    if name == "beta":
        values = [float(v) for v in values]
    else:
        values = [int(v) for v in values]
    return name, values


def run_sweep(source, seed=None, tol=None, jobs: int = 1) -> tuple[str, bool]:
    """Execute a sweep file; returns ``(csv_text, all_rows_pass)``.

    One CSV row per grid point. When the scenario carries several states,
    the row reports the state with the smallest second-law margin (minimal
    ``prop1_slack``), so a passing row certifies every state at that grid
    point.
    """
    raw = _load(source)
    if "scenario" not in raw or "axis" not in raw:
        raise ValidationError("sweep: expected 'scenario' and 'axis' fields")
    axis_name, values = _axis_values(raw["axis"])
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    all_pass = True
    for value in values:
        template = json.loads(json.dumps(raw["scenario"]))
        if axis_name == "beta":
            template["beta"] = value
        else:
            template["seed"] = value
        scenario = parse_scenario(template, seed_override=seed, tol_override=tol)
        if scenario.scheme is None:
            raise ValidationError("sweep scenarios must define a scheme")
        if not scenario.states:
            raise ValidationError("sweep scenarios need at least one input state")
        free = validate_free_scheme(scenario.scheme, scenario.tol_for("free_scheme"))
        tol_law = scenario.tol_for("second_law")

        def one(named):
            name, state = named
            law, work = second_law_report(scenario.scheme, state, tol_law)
            return name, law, work

        rows = _map_states(one, scenario.states, jobs)
        name, law, work = min(rows, key=lambda r: r[1].prop1_slack)
        ok = free.verdict and all(r[1].verdict for r in rows)
        all_pass = all_pass and ok
        writer.writerow(
            [
                axis_name,
                repr(float(value)) if axis_name == "beta" else value,
                scenario.seed,
                repr(float(scenario.beta)),
                name,
                repr(float(work.extractable_work)),
                repr(float(work.average_extractable_work)),
                repr(float(work.outcome_divergence)),
                repr(float(work.heat)),
                repr(float(work.groenewold_gain)),
                repr(float(law.prop1_slack)),
                repr(float(law.eq5_identity_defect)),
                repr(float(law.eq5_bound_slack)),
                repr(float(law.heat_bound_slack)),
                free.verdict,
                all(r[1].verdict for r in rows),
            ]
        )
    return buffer.getvalue(), all_pass

"""Work, heat, information gain, asymmetry, and the second-law report.

Conventions: entropic quantities are in nats, energies in the units of the
Hamiltonians, and the inverse temperature carries inverse-energy units.
Outcomes with probability below ``PROBABILITY_CUTOFF`` are excluded from
every conditional sum (the 0 ln 0 convention); conditional states are only
defined for outcomes that actually occur.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ValidationError
from .linalg import (
    as_matrix,
    dag,
    density_matrix,
    frobenius,
    psd_sqrt,
    relative_entropy,
    require_hermitian,
    von_neumann_entropy,
)
from .objects import Instrument, gibbs_state
from .schemes import (
    FREENESS_TOL,
    MeasurementScheme,
    conjugate_channel,
    induced_instrument,
    validate_free_scheme,
)

#: Outcomes with probability at or below this contribute nothing to conditional sums.
PROBABILITY_CUTOFF = 1e-12


@dataclass(frozen=True)
class WorkReport:
    """The scalar thermodynamic quantities of one (instrument, state) pair.

    ``heat`` is the heat absorbed by the system: probe-side when derived
    from a scheme, system-side (energy increase of the system) when derived
    from a bare instrument.
    """

    extractable_work: float
    average_extractable_work: float
    outcome_divergence: float
    heat: float
    groenewold_gain: float
    beta: float

    def to_dict(self) -> dict:
        return {
            "extractable_work": self.extractable_work,
            "average_extractable_work": self.average_extractable_work,
            "outcome_divergence": self.outcome_divergence,
            "heat": self.heat,
            "groenewold_gain": self.groenewold_gain,
            "beta": self.beta,
        }


@dataclass(frozen=True)
class SecondLawReport:
    """Slack and defect values of the second-law inequalities.

    ``prop1_slack``    : extractable work minus divergence term minus average
                         extractable work; nonnegative for thermal instruments.
    ``eq5_identity_defect`` : violation of the exact energy-entropy balance
                         relating the work gap to heat plus information gain.
    ``eq5_bound_slack``: distance by which heat plus scaled information gain
                         stays below the negative scaled divergence.
    ``heat_bound_slack``: distance by which the heat stays below the negative
                         scaled information gain.
    """

    prop1_slack: float
    eq5_identity_defect: float
    eq5_bound_slack: float
    heat_bound_slack: float
    tol: float

    @property
    def verdict(self) -> bool:
        return (
            self.prop1_slack >= -self.tol
            and self.eq5_identity_defect <= self.tol
            and self.eq5_bound_slack >= -self.tol
            and self.heat_bound_slack >= -self.tol
        )

    def to_dict(self) -> dict:
        return {
            "prop1_slack": self.prop1_slack,
            "eq5_identity_defect": self.eq5_identity_defect,
            "eq5_bound_slack": self.eq5_bound_slack,
            "heat_bound_slack": self.heat_bound_slack,
            "tol": self.tol,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class HeatReport:
    """Heat absorbed by the system plus the probe/system bookkeeping defect."""

    heat: float
    duality_defect: float


def _validate_beta(beta: float) -> float:
    if not np.isfinite(beta) or beta <= 0:
        raise ValidationError(f"inverse temperature must be positive and finite, got {beta}")
    return float(beta)


def extractable_work(rho, system_hamiltonian, beta: float) -> float:
    """Nonequilibrium free energy relative to the Gibbs state, over beta.

    This is the maximum work an isothermal process can extract while the
    state relaxes to thermal equilibrium; zero exactly at the Gibbs state.
    """
    beta = _validate_beta(beta)
    tau = gibbs_state(system_hamiltonian, beta)
    return relative_entropy(rho, tau) / beta


def _conditional_terms(instrument: Instrument, rho):
    """Outcome probabilities and conditional post-measurement states.

    Returns ``(probabilities, conditionals)`` where conditionals are plain
    Hermitian matrices (``None`` for outcomes below the probability cutoff).
    """
    outputs = instrument.apply(density_matrix(rho))
    probs = np.array([float(np.trace(out).real) for out in outputs])
    conditionals = []
    for p, out in zip(probs, outputs):
        if p > PROBABILITY_CUTOFF:
            m = (out + dag(out)) / 2 / p
            conditionals.append(m)
        else:
            conditionals.append(None)
    return probs, conditionals


def average_extractable_work(instrument: Instrument, rho, system_hamiltonian, beta: float) -> float:
    """Mean post-measurement extractable work under outcome-conditioned feedback."""
    beta = _validate_beta(beta)
    tau = gibbs_state(system_hamiltonian, beta)
    probs, conditionals = _conditional_terms(instrument, rho)
    total = 0.0
    for p, cond in zip(probs, conditionals):
        if cond is not None:
            total += p * relative_entropy(cond, tau.matrix, validate=False)
    return float(total / beta)


def outcome_divergence(observable, rho, system_hamiltonian, beta: float) -> float:
    """Classical relative entropy between measurement statistics in ``rho`` and in the Gibbs state."""
    beta = _validate_beta(beta)
    tau = gibbs_state(system_hamiltonian, beta)
    p = observable.probabilities(rho)
    q = observable.probabilities(tau)
    total = 0.0
    for label, px, qx in zip(observable.outcomes, p, q):
        if px <= PROBABILITY_CUTOFF:
            continue
        if qx <= PROBABILITY_CUTOFF:
            raise ValidationError(
                f"outcome {label!r} has zero Gibbs probability but p = {px:.3e}; "
                "effects must be zero operators to be skipped"
            )
        total += px * np.log(px / qx)
    return float(total)


def groenewold_gain(instrument: Instrument, rho) -> float:
    """Entropy of the input minus the mean entropy of the conditional outputs."""
    probs, conditionals = _conditional_terms(instrument, rho)
    gain = von_neumann_entropy(rho)
    for p, cond in zip(probs, conditionals):
        if cond is not None:
            gain -= p * von_neumann_entropy(cond, validate=False)
    return float(gain)


def heat_absorbed(scheme: MeasurementScheme, rho) -> HeatReport:
    """Heat the system absorbs from the probe: decrease of probe energy.

    The report carries the defect against the system-side accounting (the
    increase in the system's expected energy); the two agree for schemes
    whose interaction conserves the total Hamiltonian.
    """
    r = density_matrix(rho)
    xi = scheme.probe_state.matrix
    probe_after = conjugate_channel(scheme).apply(r)
    heat = float(np.trace(scheme.probe_hamiltonian @ (xi - probe_after)).real)
    system_after = sum(induced_instrument(scheme).apply(r))
    system_side = float(np.trace(scheme.system_hamiltonian @ (system_after - r)).real)
    return HeatReport(heat=heat, duality_defect=abs(heat - system_side))


def skew_information(hamiltonian, rho) -> float:
    """Wigner-Yanase skew information ``tr[rho H^2] - tr[sqrt(rho) H sqrt(rho) H]``.

    Defined for sub-normalized positive operators (trace at most 1) and
    linear under scaling ``rho -> p rho``; computed in the manifestly
    nonnegative commutator form.
    """
    h = require_hermitian(hamiltonian, name="hamiltonian")
    m = as_matrix(rho)
    m = (m + dag(m)) / 2
    trace = float(np.trace(m).real)
    if trace > 1 + 1e-9:
        raise ValidationError(f"operator must be sub-normalized, got trace {trace:.6f}")
    root = psd_sqrt(m)
    comm = root @ h - h @ root
    return 0.5 * frobenius(comm) ** 2


def skew_information_chain(instrument: Instrument, rho, system_hamiltonian):
    """Slacks of the selective asymmetry-monotonicity chain.

    Returns ``(selective_slack, convexity_slack)``: the asymmetry of the
    input minus the summed asymmetries of the (sub-normalized) outputs, and
    that sum minus the asymmetry of the total channel output. Both are
    nonnegative for covariant instruments.
    """
    h = require_hermitian(system_hamiltonian, name="hamiltonian")
    r = density_matrix(rho)
    outputs = instrument.apply(r)
    before = skew_information(h, r)
    per_outcome = sum(skew_information(h, out) for out in outputs)
    after_total = skew_information(h, sum(outputs))
    return before - per_outcome, per_outcome - after_total


def work_report(instrument: Instrument, rho, system_hamiltonian, beta: float) -> WorkReport:
    """Diagnostic work accounting for an arbitrary instrument.

    No freeness is assumed and no verdict is attached; the heat entry is the
    system-side energy increase (for non-free schemes no probe-side heat is
    defined). This is the mode to use for comparative studies such as the
    measurement-and-feedback engine run with a non-thermal instrument.
    """
    beta = _validate_beta(beta)
    h = require_hermitian(system_hamiltonian, name="system Hamiltonian")
    r = density_matrix(rho)
    system_after = sum(instrument.apply(r))
    return WorkReport(
        extractable_work=extractable_work(r, h, beta),
        average_extractable_work=average_extractable_work(instrument, r, h, beta),
        outcome_divergence=outcome_divergence(instrument.induced_observable(), r, h, beta),
        heat=float(np.trace(h @ (system_after - r)).real),
        groenewold_gain=groenewold_gain(instrument, r),
        beta=beta,
    )


def second_law_report(
    scheme: MeasurementScheme, rho, tol: float = FREENESS_TOL
) -> tuple[SecondLawReport, WorkReport]:
    """Full second-law audit of a thermodynamically free scheme on one state.

    The scheme must pass :func:`validate_free_scheme`; the audited
    inequalities are theorems only for thermal instruments, so non-free
    schemes are refused rather than scored. Use :func:`work_report` for
    diagnostics on arbitrary instruments.
    """
    freeness = validate_free_scheme(scheme, tol)
    if not freeness.verdict:
        raise PreconditionError(
            f"scheme is not thermodynamically free: worst defect "
            f"{freeness.worst_defect:.3e} > {tol:.1e}"
        )
    beta = scheme.beta
    r = density_matrix(rho)
    instrument = induced_instrument(scheme)
    tau = scheme.system_gibbs()
    xi = scheme.probe_state.matrix

    w = relative_entropy(r, tau.matrix, validate=False) / beta
    probs, conditionals = _conditional_terms(instrument, r)
    q = instrument.induced_observable().probabilities(tau)
    avg_w = 0.0
    divergence = 0.0
    gain = von_neumann_entropy(r)
    for px, qx, cond in zip(probs, q, conditionals):
        if cond is None:
            continue
        avg_w += px * relative_entropy(cond, tau.matrix, validate=False) / beta
        divergence += px * np.log(px / qx)
        gain -= px * von_neumann_entropy(cond, validate=False)

    probe_after = conjugate_channel(scheme).apply(r)
    heat = float(np.trace(scheme.probe_hamiltonian @ (xi - probe_after)).real)

    work = WorkReport(
        extractable_work=float(w),
        average_extractable_work=float(avg_w),
        outcome_divergence=float(divergence),
        heat=float(heat),
        groenewold_gain=float(gain),
        beta=beta,
    )
    law = SecondLawReport(
        prop1_slack=float(w - divergence / beta - avg_w),
        eq5_identity_defect=float(abs(avg_w - w - heat - gain / beta)),
        eq5_bound_slack=float(-divergence / beta - heat - gain / beta),
        heat_bound_slack=float(-gain / beta - heat),
        tol=tol,
    )
    return law, work

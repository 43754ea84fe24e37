"""Validated quantum objects: states, observables, channels, instruments, Choi forms.

All types are immutable after construction (backing arrays are marked
read-only) and validate their defining invariants on entry, so downstream
code can assume well-formed inputs. Default validation tolerance is 1e-9,
overridable per call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .linalg import (
    VALIDATION_TOL,
    as_matrix,
    dag,
    eig_hermitian,
    frobenius,
    psd_sqrt,
    require_hermitian,
    require_square,
)


#: Eigenvalue threshold below which an effect direction counts as null.
SUPPORT_RANK_TOL = 1e-10


def _freeze(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=complex)
    out.flags.writeable = False
    return out


class State:
    """Density operator: Hermitian, positive semidefinite, unit trace."""

    def __init__(self, matrix, tol: float = VALIDATION_TOL):
        m = require_hermitian(matrix, tol, name="state")
        trace_defect = abs(np.trace(m).real - 1.0)
        if trace_defect > tol:
            raise ValidationError(f"state trace differs from 1 by {trace_defect:.3e} > {tol:.1e}")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -tol:
            raise ValidationError(f"state has negative eigenvalue {min_eig:.3e} < -{tol:.1e}")
        self.matrix = _freeze(m)
        self.dim = m.shape[0]

    def expectation(self, a) -> float:
        """Real expectation value ``tr[A rho]`` of a Hermitian operator."""
        return float(np.trace(as_matrix(a) @ self.matrix).real)

    def __repr__(self):
        return f"State(dim={self.dim})"


def pure_state(vector, tol: float = VALIDATION_TOL) -> State:
    """State |v><v| from a (not necessarily normalized) vector."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("cannot normalize the zero vector")
    v = v / norm
    return State(np.outer(v, v.conj()), tol)


class Observable:
    """Discrete POVM: labeled effects with 0 <= E_x <= 1 summing to identity."""

    def __init__(self, outcomes: Sequence[str], effects: Sequence, tol: float = VALIDATION_TOL):
        outcomes = tuple(str(x) for x in outcomes)
        if not outcomes:
            raise ValidationError("observable needs at least one outcome")
        if len(set(outcomes)) != len(outcomes):
            raise ValidationError("outcome labels must be unique")
        if len(effects) != len(outcomes):
            raise ValidationError(
                f"{len(outcomes)} outcomes but {len(effects)} effects supplied"
            )
        checked = []
        dim = None
        worst = (0.0, None)  # range violation magnitude, offending label
        for label, effect in zip(outcomes, effects):
            m = require_hermitian(effect, tol, name=f"effect {label!r}")
            if dim is None:
                dim = m.shape[0]
            elif m.shape[0] != dim:
                raise ValidationError(
                    f"effect {label!r} has dimension {m.shape[0]}, expected {dim}"
                )
            evals = np.linalg.eigvalsh(m)
            violation = max(-float(evals[0]), float(evals[-1]) - 1.0)
            if violation > worst[0]:
                worst = (violation, label)
            checked.append(_freeze(m))
        if worst[0] > tol:
            raise ValidationError(
                f"effect {worst[1]!r} has an eigenvalue {worst[0]:.3e} outside [0, 1] "
                f"(worst violation over all effects; tolerance {tol:.1e})"
            )
        total = sum(checked)
        completeness_defect = frobenius(total - np.eye(dim))
        if completeness_defect > tol:
            raise ValidationError(
                f"effects sum differs from identity by {completeness_defect:.3e} > {tol:.1e}"
            )
        self.outcomes = outcomes
        self.effects = tuple(checked)
        self.dim = dim

    @classmethod
    def from_dict(cls, effects: dict, tol: float = VALIDATION_TOL) -> "Observable":
        return cls(tuple(effects.keys()), tuple(effects.values()), tol)

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    def effect(self, label: str) -> np.ndarray:
        return self.effects[self.outcomes.index(str(label))]

    def probabilities(self, rho) -> np.ndarray:
        """Born-rule outcome distribution ``tr[E_x rho]``."""
        m = as_matrix(rho)
        return np.array([float(np.trace(e @ m).real) for e in self.effects])

    def sharpness_defect(self) -> float:
        """Max ``||E_x E_y - delta_xy E_x||_F`` over outcome pairs."""
        worst = 0.0
        for i, a in enumerate(self.effects):
            for j, b in enumerate(self.effects):
                target = a if i == j else 0.0
                worst = max(worst, frobenius(a @ b - target))
        return worst

    def is_sharp(self, tol: float = VALIDATION_TOL) -> bool:
        return self.sharpness_defect() <= tol

    def triviality_defect(self) -> float:
        """Max distance of an effect from the span of the identity.

        Zero exactly when every effect is proportional to the identity (or
        the zero operator), i.e. when the observable carries no information.
        """
        eye = np.eye(self.dim)
        return max(
            frobenius(e - (np.trace(e).real / self.dim) * eye) for e in self.effects
        )

    def is_trivial(self, tol: float = VALIDATION_TOL) -> bool:
        return self.triviality_defect() <= tol

    def is_rank_one(self, rank_tol: float = SUPPORT_RANK_TOL) -> bool:
        """True when every effect is a positive multiple of a rank-1 projection."""
        for e in self.effects:
            if int(np.sum(np.linalg.eigvalsh(e) > rank_tol)) > 1:
                return False
        return True

    def __repr__(self):
        return f"Observable(outcomes={list(self.outcomes)}, dim={self.dim})"


class KrausChannel:
    """Trace-preserving completely positive map in Kraus form.

    Kraus operators may be rectangular (``dim_out x dim_in``); the trace
    preservation constraint is ``sum K† K = identity`` on the input space.
    """

    def __init__(self, kraus: Sequence, tol: float = VALIDATION_TOL):
        ops = [np.asarray(as_matrix(k), dtype=complex) for k in kraus]
        if not ops:
            raise ValidationError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        for i, k in enumerate(ops):
            if k.shape != shape:
                raise ValidationError(
                    f"Kraus operator {i} has shape {k.shape}, expected {shape}"
                )
        gram = sum(dag(k) @ k for k in ops)
        tp_defect = frobenius(gram - np.eye(shape[1]))
        if tp_defect > tol:
            raise ValidationError(
                f"channel is not trace preserving: ||sum K^dag K - 1||_F = "
                f"{tp_defect:.3e} > {tol:.1e}"
            )
        self.kraus = tuple(_freeze(k) for k in ops)
        self.dim_out, self.dim_in = shape
        self._stack = np.stack(self.kraus)

    @property
    def dim(self) -> int:
        if self.dim_in != self.dim_out:
            raise ValidationError(
                f"channel is rectangular ({self.dim_out} x {self.dim_in}), has no single dim"
            )
        return self.dim_in

    def apply(self, rho) -> np.ndarray:
        """Schroedinger action ``sum K rho K†``."""
        m = as_matrix(rho)
        if m.shape != (self.dim_in, self.dim_in):
            raise ValidationError(
                f"channel input must be {self.dim_in} x {self.dim_in}, got {m.shape}"
            )
        ks = self._stack
        return np.einsum("kij,jl,kml->im", ks, m, ks.conj())

    def apply_dual(self, a) -> np.ndarray:
        """Heisenberg action ``sum K† A K`` (trace dual of :meth:`apply`)."""
        m = as_matrix(a)
        if m.shape != (self.dim_out, self.dim_out):
            raise ValidationError(
                f"dual input must be {self.dim_out} x {self.dim_out}, got {m.shape}"
            )
        ks = self._stack
        return np.einsum("kai,ab,kbj->ij", ks.conj(), m, ks)

    def superoperator(self) -> np.ndarray:
        """Matrix of the channel on row-major vectorized operators."""
        return sum(np.kron(k, k.conj()) for k in self.kraus)

    def __repr__(self):
        return f"KrausChannel(n_kraus={len(self.kraus)}, dims={self.dim_out}x{self.dim_in})"


def apply_channel(channel: KrausChannel, rho: State, tol: float = VALIDATION_TOL) -> State:
    """Apply a channel to a state, revalidating the output."""
    return State(channel.apply(rho), tol)


def apply_dual(channel: KrausChannel, a) -> np.ndarray:
    return channel.apply_dual(a)


@dataclass(frozen=True)
class BistochasticReport:
    """Trace-preservation and unitality defects of a channel."""

    trace_defect: float
    unital_defect: float
    tol: float

    @property
    def verdict(self) -> bool:
        return self.trace_defect <= self.tol and self.unital_defect <= self.tol

    def to_dict(self) -> dict:
        return {
            "trace_defect": self.trace_defect,
            "unital_defect": self.unital_defect,
            "tol": self.tol,
            "verdict": self.verdict,
        }


def is_bistochastic(channel: KrausChannel, tol: float = VALIDATION_TOL) -> BistochasticReport:
    """Check that a channel preserves both the trace and the identity."""
    if channel.dim_in != channel.dim_out:
        raise ValidationError("bistochasticity is defined for square channels only")
    eye = np.eye(channel.dim_in)
    trace_defect = frobenius(sum(dag(k) @ k for k in channel.kraus) - eye)
    unital_defect = frobenius(sum(k @ dag(k) for k in channel.kraus) - eye)
    return BistochasticReport(trace_defect, unital_defect, tol)


def gibbs_state(hamiltonian, beta: float, tol: float = VALIDATION_TOL) -> State:
    """Thermal state ``exp(-beta H) / tr[exp(-beta H)]``, computed spectrally."""
    if not np.isfinite(beta) or beta <= 0:
        raise ValidationError(f"inverse temperature must be positive and finite, got {beta}")
    h = require_hermitian(hamiltonian, name="hamiltonian")
    evals, vecs = np.linalg.eigh(h)
    weights = np.exp(-beta * (evals - evals[0]))  # shift avoids overflow
    weights /= weights.sum()
    return State((vecs * weights) @ dag(vecs), tol)


def time_evolution(hamiltonian, t: float) -> np.ndarray:
    """Unitary ``exp(-i t H)`` computed spectrally."""
    h = require_hermitian(hamiltonian, name="hamiltonian")
    evals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(-1j * t * evals)) @ dag(vecs)


class Instrument:
    """Outcome-indexed family of CP trace non-increasing operations.

    Each outcome holds a Kraus set; the union of all sets must form a
    trace-preserving channel (the total channel).
    """

    def __init__(self, outcomes: Sequence[str], kraus_sets: Sequence, tol: float = VALIDATION_TOL):
        outcomes = tuple(str(x) for x in outcomes)
        if not outcomes:
            raise ValidationError("instrument needs at least one outcome")
        if len(set(outcomes)) != len(outcomes):
            raise ValidationError("outcome labels must be unique")
        if len(kraus_sets) != len(outcomes):
            raise ValidationError(
                f"{len(outcomes)} outcomes but {len(kraus_sets)} Kraus sets supplied"
            )
        dim = None
        frozen_sets = []
        for label, ops in zip(outcomes, kraus_sets):
            ops = [np.asarray(as_matrix(k), dtype=complex) for k in ops]
            if not ops:
                raise ValidationError(f"outcome {label!r} has an empty Kraus set")
            for k in ops:
                require_square(k, f"Kraus operator of outcome {label!r}")
                if dim is None:
                    dim = k.shape[0]
                elif k.shape[0] != dim:
                    raise ValidationError(
                        f"outcome {label!r} has a {k.shape[0]}-dimensional Kraus operator, "
                        f"expected {dim}"
                    )
            frozen_sets.append(tuple(_freeze(k) for k in ops))
        gram = sum(dag(k) @ k for ops in frozen_sets for k in ops)
        tp_defect = frobenius(gram - np.eye(dim))
        if tp_defect > tol:
            raise ValidationError(
                f"total channel is not trace preserving: ||sum K^dag K - 1||_F = "
                f"{tp_defect:.3e} > {tol:.1e}"
            )
        self.outcomes = outcomes
        self.kraus_sets = tuple(frozen_sets)
        self.dim = dim
        self._stacks = tuple(np.stack(ops) for ops in frozen_sets)

    @classmethod
    def luders(cls, observable: Observable, tol: float = VALIDATION_TOL) -> "Instrument":
        """Lueders instrument of an observable: Kraus sets ``{sqrt(E_x)}``."""
        return cls(
            observable.outcomes,
            [[psd_sqrt(e, tol)] for e in observable.effects],
            tol,
        )

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    def kraus_for(self, label: str):
        return self.kraus_sets[self.outcomes.index(str(label))]

    def apply_outcome(self, index: int, rho) -> np.ndarray:
        """Unnormalized post-measurement operator for one outcome."""
        m = as_matrix(rho)
        ks = self._stacks[index]
        return np.einsum("kij,jl,kml->im", ks, m, ks.conj())

    def apply(self, rho) -> list:
        """All unnormalized outputs ``[I_x(rho)]`` in outcome order."""
        m = as_matrix(rho)
        return [
            np.einsum("kij,jl,kml->im", ks, m, ks.conj()) for ks in self._stacks
        ]

    def probabilities(self, rho) -> np.ndarray:
        return np.array([float(np.trace(out).real) for out in self.apply(rho)])

    def total_channel(self, tol: float = VALIDATION_TOL) -> KrausChannel:
        return KrausChannel([k for ops in self.kraus_sets for k in ops], tol)

    def induced_observable(self, tol: float = VALIDATION_TOL) -> Observable:
        """The unique observable with ``tr[I_x(rho)] = tr[E_x rho]``."""
        effects = [sum(dag(k) @ k for k in ops) for ops in self.kraus_sets]
        return Observable(self.outcomes, effects, tol)

    def superoperator(self, index: int) -> np.ndarray:
        """Matrix of one outcome's operation on row-major vectorized operators."""
        return sum(np.kron(k, k.conj()) for k in self.kraus_sets[index])

    def __repr__(self):
        return f"Instrument(outcomes={list(self.outcomes)}, dim={self.dim})"


def spectral_observable(hamiltonian, cluster_tol: float = None) -> Observable:
    """Sharp observable of a Hermitian operator's spectral projectors.

    Outcomes are labeled ``"0", "1", ...`` in ascending eigenvalue order.
    """
    kwargs = {} if cluster_tol is None else {"cluster_tol": cluster_tol}
    decomp = eig_hermitian(hamiltonian, **kwargs)
    labels = [str(i) for i in range(len(decomp.projectors))]
    return Observable(labels, decomp.projectors)


class ChoiMatrix:
    """Choi operator of a completely positive operation.

    Convention: for an operation ``Phi`` the Choi matrix is
    ``sum_ij Phi(|i><j|) (x) |i><j|`` -- output factor first, input factor
    second -- so the Choi of the identity is the unnormalized maximally
    entangled projector.
    """

    def __init__(self, matrix, dim_out: int, dim_in: int, tol: float = VALIDATION_TOL):
        m = require_hermitian(matrix, tol, name="Choi matrix")
        if m.shape[0] != dim_out * dim_in:
            raise ValidationError(
                f"Choi matrix has dimension {m.shape[0]}, expected {dim_out * dim_in}"
            )
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -tol:
            raise ValidationError(
                f"Choi matrix is not positive semidefinite: min eigenvalue {min_eig:.3e}"
            )
        self.matrix = _freeze(m)
        self.dim_out = dim_out
        self.dim_in = dim_in

    def rank(self, tol: float = 1e-8) -> int:
        """Number of eigenvalues above ``tol``."""
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > tol))

    def to_kraus(self, tol: float = 1e-12) -> list:
        """Kraus operators from the Choi eigendecomposition."""
        evals, vecs = np.linalg.eigh(self.matrix)
        ops = []
        for lam, v in zip(evals, vecs.T):
            if lam > tol:
                ops.append(np.sqrt(lam) * v.reshape(self.dim_out, self.dim_in))
        return ops

    def __repr__(self):
        return f"ChoiMatrix(dims={self.dim_out}x{self.dim_in})"


def choi_of_operation(kraus: Sequence, tol: float = VALIDATION_TOL) -> ChoiMatrix:
    """Choi matrix of the CP operation with the given Kraus operators.

    Row-major flattening of a Kraus operator is exactly its image of the
    unnormalized maximally entangled vector, so the Choi matrix is the Gram
    sum of flattened Kraus operators.
    """
    ops = [as_matrix(k) for k in kraus]
    if not ops:
        raise ValidationError("operation needs at least one Kraus operator")
    d_out, d_in = ops[0].shape
    vecs = [k.reshape(-1) for k in ops]
    m = sum(np.outer(v, v.conj()) for v in vecs)
    return ChoiMatrix(m, d_out, d_in, tol)


def choi_rank(choi: ChoiMatrix, tol: float = 1e-8) -> int:
    return choi.rank(tol)

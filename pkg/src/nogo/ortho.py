"""
Turning non-orthogonal pure states into orthogonal ones, and the limits on
doing so.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import KrausChannel, apply_channel, squaring_circuit
from .distinguish import Povm, outcome_distribution
from .qcore import DimensionError, basis_state, normalize, projector, pure_state, tensor_product

PARALLEL_TOL = 1e-12


class ParallelStatesError(ValueError):
    """The two states are linearly dependent."""


@dataclass(frozen=True)
class UnambiguousResult:
    """Elements are ordered (identify-1, identify-2, inconclusive)."""

    povm: Povm
    success_prob: float


class SquaringRound(NamedTuple):
    overlap: float
    cumulative_success: float


def overlap(phi1, phi2):
    return float(abs(np.vdot(phi1, phi2)))


def _independent_pair(phi1, phi2):
    phi1, phi2 = pure_state(phi1), pure_state(phi2)
    if phi1.shape != phi2.shape:
        raise DimensionError("states live in different dimensions")
    s = overlap(phi1, phi2)
    if s > 1.0 - PARALLEL_TOL:
        raise ParallelStatesError("parallel states cannot be discriminated unambiguously")
    return phi1, phi2, min(s, 1.0)


def _idp_directions(phi1, phi2):
    """Unit vectors orthogonal to phi2 and to phi1, inside span{phi1, phi2}."""
    not_2 = normalize(phi1 - np.vdot(phi2, phi1) * phi2)
    not_1 = normalize(phi2 - np.vdot(phi1, phi2) * phi1)
    return not_2, not_1


def idp_povm(phi1, phi2):
    """Optimal zero-error discrimination of two equiprobable pure states.

    Each conclusive element is a multiple of the projector orthogonal to the
    *other* state; the weight ``1 / (1 + s)`` is the largest that keeps the
    inconclusive element positive.
    """
    phi1, phi2, s = _independent_pair(phi1, phi2)
    not_2, not_1 = _idp_directions(phi1, phi2)
    e1 = projector(not_2) / (1.0 + s)
    e2 = projector(not_1) / (1.0 + s)
    e_fail = np.eye(phi1.size) - e1 - e2
    povm = Povm([e1, e2, e_fail])
    p1 = outcome_distribution(projector(phi1), povm)
    p2 = outcome_distribution(projector(phi2), povm)
    return UnambiguousResult(povm=povm, success_prob=float(0.5 * (p1[0] + p2[1])))


def orthogonalization_bound(phi1, phi2):
    """Best success probability for orthogonalizing the pair given two copies of each: ``1 - s**2``."""
    return 1.0 - overlap(phi1, phi2) ** 2


def overlap_reduction_bound(s_in, s_out):
    """Largest equal success probability for mapping overlap ``s_in`` to ``s_out <= s_in``."""
    return (1.0 - s_in) / (1.0 - s_out)


def two_copy_instrument(phi1, phi2):
    """Measure-and-prepare operation on two copies: identify, then emit |0> or |1>.

    Only the conclusive branch is kept, so the operation is trace-decreasing.
    """
    phi1, phi2, _ = _independent_pair(phi1, phi2)
    two1, two2, s = _independent_pair(tensor_product(phi1, phi1), tensor_product(phi2, phi2))
    not_2, not_1 = _idp_directions(two1, two2)
    scale = 1.0 / np.sqrt(1.0 + s)
    return KrausChannel([
        scale * np.outer(basis_state(0, 2), np.conj(not_2)),
        scale * np.outer(basis_state(1, 2), np.conj(not_1)),
    ])


def orthogonalize_two_copy(phi1, phi2):
    """Run the two-copy identify-and-prepare protocol.

    Returns ``(success_prob, out1, out2)`` with outputs ``|0>`` and ``|1>``.
    The success probability is the equal-prior average of the simulated branch
    probabilities and saturates :func:`orthogonalization_bound`.
    """
    phi1, phi2, _ = _independent_pair(phi1, phi2)
    inst = two_copy_instrument(phi1, phi2)
    probs = []
    for phi in (phi1, phi2):
        _, p = apply_channel(inst, projector(tensor_product(phi, phi)))
        probs.append(p)
    return float(np.mean(probs)), basis_state(0, 2), basis_state(1, 2)


def iterate_squaring(phi1, phi2, k):
    """Apply the selective squaring circuit ``k`` times to each state.

    Every round consumes two copies of the current state. After each round the
    overlap ``sqrt(Tr rho1 rho2)`` and the equal-prior average of the
    cumulative success probabilities are recorded.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    rho1 = projector(pure_state(phi1))
    rho2 = projector(pure_state(phi2))
    if rho1.shape != (2, 2) or rho2.shape != (2, 2):
        raise DimensionError("iterate_squaring works on qubits")
    cum1 = cum2 = 1.0
    rounds = []
    for _ in range(k):
        rho1, p1 = squaring_circuit(rho1)
        rho2, p2 = squaring_circuit(rho2)
        cum1 *= p1
        cum2 *= p2
        s = np.sqrt(max(np.trace(rho1 @ rho2).real, 0.0))
        rounds.append(SquaringRound(float(s), 0.5 * (cum1 + cum2)))
    return rounds


def triple_product(phis):
    m = np.column_stack([np.asarray(p, dtype=complex) for p in phis])
    if m.shape != (3, 3):
        raise DimensionError("triple product needs three vectors of dimension 3")
    return np.linalg.det(m)


def triple_product_bound(phis, m, k=(1.0, 1.0, 1.0)):
    """``1 - sum(k) * |det[phi1 phi2 phi3]|**(2m) / 3``.

    The weights ``k`` depend on the geometry of the states and must be
    supplied by the caller.
    """
    if int(m) != m or m < 1:
        raise ValueError("m must be a positive integer")
    if len(k) != 3:
        raise ValueError("need exactly three weights")
    vol = abs(triple_product(phis))
    return float(1.0 - sum(k) * vol ** (2 * int(m)) / 3.0)

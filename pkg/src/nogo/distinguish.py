"""
Distinguishability of quantum states: minimum error probability, measurement
statistics, mutual and accessible information, and the entropy defect.

All information quantities are in bits.
"""

from dataclasses import dataclass

import numpy as np

from .qcore import (
    DimensionError,
    PSD_TOL,
    density_matrix,
    eigvals,
    hermitian_eig,
    projector,
    trace_norm,
    vn_entropy,
)

PRIOR_TOL = 1e-12
POVM_TOL = 1e-10
TIE_TOL = 1e-12

PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)


@dataclass(frozen=True)
class Ensemble:
    """States ``rho_i`` with prior probabilities ``pi_i``."""

    items: tuple

    def __init__(self, items):
        items = tuple((float(p), density_matrix(rho)) for p, rho in items)
        if not items:
            raise ValueError("empty ensemble")
        priors = np.array([p for p, _ in items])
        if np.any(priors < 0) or abs(priors.sum() - 1.0) > PRIOR_TOL:
            raise ValueError(f"priors must be non-negative and sum to 1, got {priors.tolist()}")
        dims = {rho.shape[0] for _, rho in items}
        if len(dims) != 1:
            raise DimensionError(f"ensemble mixes dimensions {sorted(dims)}")
        object.__setattr__(self, "items", items)

    @classmethod
    def equal(cls, *states):
        return cls([(1.0 / len(states), s) for s in states])

    @property
    def dim(self):
        return self.items[0][1].shape[0]

    @property
    def priors(self):
        return np.array([p for p, _ in self.items])

    @property
    def states(self):
        return [rho for _, rho in self.items]

    def average(self):
        return sum(p * rho for p, rho in self.items)


@dataclass(frozen=True)
class Povm:
    """Positive operators summing to the identity."""

    elements: tuple

    def __init__(self, elements):
        els = tuple(np.array(e, dtype=complex) for e in elements)
        if not els:
            raise ValueError("a POVM needs at least one element")
        d = els[0].shape[0]
        if any(e.shape != (d, d) for e in els):
            raise DimensionError("POVM elements must share one square shape")
        for e in els:
            if eigvals(e)[-1] < -PSD_TOL:
                raise ValueError("POVM element is not positive semidefinite")
        if np.max(np.abs(sum(els) - np.eye(d))) > POVM_TOL:
            raise ValueError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", els)

    @property
    def dim(self):
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)


def _check_pair(rho1, rho2):
    r1 = np.asarray(rho1, dtype=complex)
    r2 = np.asarray(rho2, dtype=complex)
    if r1.shape[-2:] != r2.shape[-2:]:
        raise DimensionError(f"states of shape {r1.shape} and {r2.shape}")
    return r1, r2


def prob_error(rho1, rho2):
    """Minimum error probability for two equiprobable states (stacks allowed)."""
    r1, r2 = _check_pair(rho1, rho2)
    return 0.5 - 0.25 * trace_norm(r1 - r2)


def helstrom_povm(rho1, rho2):
    """Optimal two-outcome measurement: guess 1 on the non-negative part of rho1 - rho2.

    The zero eigenspace goes to the first element.
    """
    r1, r2 = _check_pair(rho1, rho2)
    lam, vecs = hermitian_eig(r1 - r2)
    d = r1.shape[0]
    first = np.zeros((d, d), dtype=complex)
    second = np.zeros((d, d), dtype=complex)
    for k in range(d):
        p = projector(vecs[:, k])
        if lam[k] > -TIE_TOL:
            first += p
        else:
            second += p
    return Povm([first, second])


def outcome_distribution(rho, m):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (m.dim, m.dim):
        raise DimensionError(f"state {rho.shape} vs POVM on dimension {m.dim}")
    return np.array([np.trace(rho @ e).real for e in m.elements])


def _mutual_information(joint):
    px = joint.sum(axis=-1, keepdims=True)
    py = joint.sum(axis=-2, keepdims=True)
    denom = px * py
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(joint > 0, joint * np.log2(np.where(joint > 0, joint, 1.0) / np.where(denom > 0, denom, 1.0)), 0.0)
    return np.sum(terms, axis=(-2, -1))


def mutual_information(e, m):
    """Shannon mutual information between ensemble label and measurement outcome."""
    if e.dim != m.dim:
        raise DimensionError(f"ensemble on dimension {e.dim}, POVM on {m.dim}")
    joint = np.array([p * np.clip(outcome_distribution(rho, m), 0.0, None) for p, rho in e.items])
    return max(float(_mutual_information(joint)), 0.0)


def entropy_defect(e):
    """``S(sum pi_i rho_i) - sum pi_i S(rho_i)``, the Holevo quantity."""
    mixed = vn_entropy(e.average())
    return float(mixed - sum(p * vn_entropy(rho) for p, rho in e.items))


# ---------------------------------------------------------------------------
# Accessible information (lower bound by projective search on the qubit)
# ---------------------------------------------------------------------------

def bloch_vector(rho):
    rho = np.asarray(rho, dtype=complex)
    return np.real(np.einsum("kij,ji->k", PAULI, rho))


def _direction(theta, phi):
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


def projective_povm(theta, phi):
    """Qubit measurement along the Bloch direction (theta, phi)."""
    n_sigma = np.einsum("k,kij->ij", _direction(theta, phi), PAULI)
    return Povm([(np.eye(2) + n_sigma) / 2, (np.eye(2) - n_sigma) / 2])


def _projective_mi(priors, blochs, theta, phi):
    n = _direction(np.asarray(theta, float), np.asarray(phi, float))
    plus = 0.5 * (1.0 + n @ blochs.T)  # (..., n_states)
    plus = np.clip(plus, 0.0, 1.0)
    joint = np.stack([plus, 1.0 - plus], axis=-1) * priors[:, None]
    return _mutual_information(joint)


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo, hi, tol=1e-12, max_iter=200):
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def best_projective_measurement(e, grid=(181, 361), rounds=50):
    """Search rank-1 projective qubit measurements for maximal mutual information.

    A ``grid[0] x grid[1]`` scan over polar and azimuthal Bloch angles picks a
    starting direction, then golden-section line searches alternate between
    the two angles within one grid step until the gain stalls.

    Returns ``(mutual_information, (theta, phi))``.
    """
    if e.dim != 2:
        raise DimensionError(f"projective search is implemented for qubits, got dimension {e.dim}")
    priors = e.priors
    blochs = np.array([bloch_vector(rho) for rho in e.states])
    n_t, n_p = grid
    thetas = np.linspace(0.0, np.pi, n_t)
    phis = np.linspace(0.0, 2.0 * np.pi, n_p)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = _projective_mi(priors, blochs, tt, pp)
    i, j = np.unravel_index(int(np.argmax(values)), values.shape)
    best_t, best_p, best = thetas[i], phis[j], float(values[i, j])

    step_t = np.pi / (n_t - 1)
    step_p = 2.0 * np.pi / (n_p - 1)
    for _ in range(rounds):
        start = best
        t, v = _golden_max(
            lambda x: float(_projective_mi(priors, blochs, x, best_p)),
            best_t - step_t, best_t + step_t,
        )
        if v > best:
            best_t, best = t, v
        p, v = _golden_max(
            lambda x: float(_projective_mi(priors, blochs, best_t, x)),
            best_p - step_p, best_p + step_p,
        )
        if v > best:
            best_p, best = p, v
        if best - start <= 1e-15:
            break
    value = mutual_information(e, projective_povm(best_t, best_p))
    return value, (best_t, best_p)


def accessible_info_estimate(e, grid=(181, 361)):
    """Lower bound on the accessible information of a qubit ensemble (bits)."""
    return best_projective_measurement(e, grid=grid)[0]

"""
Quantum operations in Kraus form, Choi-matrix tests for complete positivity,
and reconstruction of a linear map from input/output data.

Choi convention: the channel acts on the *second* factor of the maximally
entangled state,

    C = (1/d_in) * sum_ij |i><j| ⊗ T(|i><j|),

so a trace-preserving channel has ``Tr C = 1`` and the input index is the
slow (leading) one.

Superoperators act on column-major vectorized matrices:
``vec(X)[i + j*d] = X[i, j]``, hence ``vec(A X A^dag) = (conj(A) ⊗ A) vec(X)``.
"""

from dataclasses import dataclass

import numpy as np

from .qcore import (
    DimensionError,
    NotHermitianError,
    dagger,
    eigvals,
    hermitian_deviation,
    partial_trace,
    tensor_product,
)

CP_TOL = 1e-9
TP_TOL = 1e-10
MIN_PROBABILITY = 1e-14
INFER_TOL = 1e-8
RANK_TOL = 1e-10


class UnderdeterminedError(ValueError):
    """Input operators do not span the operator space."""


class InconsistentDataError(ValueError):
    """No linear map reproduces every input/output pair."""


class NeverOccursError(ValueError):
    """A selective operation has (numerically) zero success probability."""


@dataclass(frozen=True)
class KrausChannel:
    """Operation ``rho -> sum_k A_k rho A_k^dag``; each ``A_k`` is ``dim_out x dim_in``."""

    kraus_ops: tuple

    def __init__(self, kraus_ops):
        ops = tuple(np.array(k, dtype=complex) for k in kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise DimensionError("Kraus operators must be matrices of one common shape")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def dim_in(self):
        return self.kraus_ops[0].shape[1]

    @property
    def dim_out(self):
        return self.kraus_ops[0].shape[0]

    def effect(self):
        """``sum_k A_k^dag A_k``; identity iff trace preserving."""
        return sum(dagger(k) @ k for k in self.kraus_ops)


@dataclass(frozen=True)
class ChannelVerdict:
    is_cp: bool
    is_tp: bool
    is_trace_nonincreasing: bool
    choi_eigenvalues: tuple


def identity_channel(dim):
    return KrausChannel([np.eye(dim)])


def unitary_channel(u):
    return KrausChannel([u])


def random_channel(dim, n_kraus, rng, dim_out=None):
    """Random trace-preserving channel from a Haar-like isometry."""
    d_out = dim if dim_out is None else dim_out
    g = rng.normal(size=(n_kraus * d_out, dim)) + 1j * rng.normal(size=(n_kraus * d_out, dim))
    q, _ = np.linalg.qr(g)
    return KrausChannel([q[i * d_out:(i + 1) * d_out] for i in range(n_kraus)])


def apply_channel(ch, rho):
    """Apply a (possibly selective) operation and renormalize.

    Returns ``(T(rho) / Tr T(rho), Tr T(rho))``. The trace is the success
    probability of the branch; it must exceed 1e-14.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim_in, ch.dim_in):
        raise DimensionError(f"channel expects {ch.dim_in}x{ch.dim_in} input, got {rho.shape}")
    if eigvals(ch.effect())[0] > 1.0 + TP_TOL:
        raise ValueError("Kraus operators violate sum A^dag A <= 1")
    out = sum(k @ rho @ dagger(k) for k in ch.kraus_ops)
    prob = float(np.trace(out).real)
    if prob < MIN_PROBABILITY:
        raise NeverOccursError(f"branch probability {prob:.3e} is below {MIN_PROBABILITY}")
    return out / prob, prob


def superoperator(ch):
    """``sum_k conj(A_k) ⊗ A_k`` acting on column-major ``vec``."""
    return sum(np.kron(np.conj(k), k) for k in ch.kraus_ops)


def vec(m):
    return np.asarray(m).reshape(-1, order="F")


def unvec(v, dim):
    return np.asarray(v).reshape((dim, dim), order="F")


def apply_superoperator(s, x):
    d_out = int(round(np.sqrt(s.shape[0])))
    return unvec(s @ vec(x), d_out)


def choi_matrix(ch):
    cols = [k.T.reshape(-1) for k in ch.kraus_ops]  # index (i_in, a_out)
    return sum(np.outer(c, np.conj(c)) for c in cols) / ch.dim_in


def choi_from_superoperator(s, dim_in, dim_out):
    # images[i, j] = T(|i><j|), stored column-major in s[:, i + j*dim_in]
    images = s.T.reshape(dim_in, dim_in, dim_out, dim_out)
    images = np.transpose(images, (1, 0, 3, 2))
    c = np.transpose(images, (0, 2, 1, 3)).reshape(dim_in * dim_out, dim_in * dim_out)
    return c / dim_in


def _verdict(choi, effect):
    choi = 0.5 * (choi + dagger(choi))
    effect = 0.5 * (effect + dagger(effect))
    lam = eigvals(choi)
    d = effect.shape[0]
    return ChannelVerdict(
        is_cp=bool(lam[-1] >= -CP_TOL),
        is_tp=bool(np.max(np.abs(effect - np.eye(d))) <= TP_TOL),
        is_trace_nonincreasing=bool(eigvals(effect)[0] <= 1.0 + TP_TOL),
        choi_eigenvalues=tuple(float(x) for x in lam),
    )


def check_channel(ch):
    return _verdict(choi_matrix(ch), ch.effect())


def verdict_from_superoperator(s, dim_in, dim_out):
    choi = choi_from_superoperator(s, dim_in, dim_out)
    # dim_in * Tr_out C is the transpose of sum A^dag A; same spectrum and distance to I.
    effect = dim_in * partial_trace(choi, (dim_in, dim_out), keep="A")
    return _verdict(choi, effect.T)


def infer_from_data(pairs):
    """Reconstruct the linear map that sends each input to its output.

    Parameters
    ----------
    pairs : sequence of (input, output)
        Hermitian matrices. Inputs must span the full ``d_in**2``-dimensional
        operator space.

    Returns
    -------
    superop : ndarray, shape (d_out**2, d_in**2)
        Matrix of the map in the column-major matrix-unit basis.
    verdict : ChannelVerdict
        Complete positivity and trace behaviour read off the Choi matrix.

    Raises
    ------
    UnderdeterminedError
        The inputs leave part of the operator space unconstrained, so some
        other extension could still be a valid channel.
    InconsistentDataError
        The best linear fit misses some output by more than 1e-8.
    """
    pairs = list(pairs)
    if not pairs:
        raise UnderdeterminedError("no data")
    xs = [np.asarray(x, dtype=complex) for x, _ in pairs]
    ys = [np.asarray(y, dtype=complex) for _, y in pairs]
    d_in = xs[0].shape[0]
    d_out = ys[0].shape[0]
    for m, d in [(x, d_in) for x in xs] + [(y, d_out) for y in ys]:
        if m.shape != (d, d):
            raise DimensionError("all inputs (outputs) must share one square shape")
        if hermitian_deviation(m) > 1e-10:
            raise NotHermitianError("data matrices must be Hermitian")

    x_mat = np.stack([vec(x) for x in xs], axis=1)
    y_mat = np.stack([vec(y) for y in ys], axis=1)
    frame = x_mat @ dagger(x_mat)
    lam = eigvals(frame)
    rank = int(np.sum(lam > RANK_TOL * max(lam[0], 1.0)))
    if rank < d_in * d_in:
        raise UnderdeterminedError(f"inputs span {rank} of {d_in * d_in} operator dimensions")

    s_t, *_ = np.linalg.lstsq(x_mat.T, y_mat.T, rcond=None)
    s = s_t.T
    resid = np.max(np.abs(s @ x_mat - y_mat))
    if resid > INFER_TOL:
        raise InconsistentDataError(f"no linear map fits the data (residual {resid:.3e})")
    return s, verdict_from_superoperator(s, d_in, d_out)


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def squaring_kraus():
    """Two-qubit circuit: CNOT (first qubit controls), keep the run where the target reads 0."""
    post = np.kron(np.eye(2), np.array([[1, 0]]))
    return KrausChannel([post @ CNOT])


def squaring_circuit(rho):
    """Run two copies of a qubit state through the selective squaring circuit.

    On success the surviving qubit is ``rho_ij**2 / (rho_00**2 + rho_11**2)``
    elementwise; the success probability is ``rho_00**2 + rho_11**2 >= 1/2``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise DimensionError("squaring circuit takes a single qubit")
    return apply_channel(squaring_kraus(), tensor_product(rho, rho))

"""
Dense linear algebra and state primitives for small quantum systems.

Matrices are plain complex numpy arrays. Most functions accept a stack of
matrices with shape ``(..., n, n)`` and operate on the trailing two axes, so
grid scans can push thousands of 4x4 problems through one call.

Dimensions in this package never exceed ~16, so the Hermitian eigensolver is a
cyclic Jacobi iteration rather than a LAPACK call.
"""

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-12

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class DimensionError(ValueError):
    """Operand shapes do not fit together."""


class NotHermitianError(ValueError):
    """A matrix required to be Hermitian is not."""


class NotPositiveError(ValueError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


def _as_square_stack(m):
    a = np.asarray(m, dtype=complex)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2] or a.shape[-1] < 1:
        raise DimensionError(f"expected square matrix, got shape {a.shape}")
    return a


def dagger(m):
    """Conjugate transpose over the trailing two axes."""
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_deviation(m):
    m = np.asarray(m)
    return np.max(np.abs(m - dagger(m)), initial=0.0)


def is_hermitian(m, tol=HERMITIAN_TOL):
    return hermitian_deviation(m) <= tol


def _require_hermitian(a, tol=HERMITIAN_TOL):
    dev = hermitian_deviation(a)
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max |H - H^dag| = {dev:.3e})")


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

def pure_state(amplitudes):
    """Validate a state vector and return it as a complex array.

    Raises ``ValueError`` if the Euclidean norm differs from 1 by more than
    1e-12. Use :func:`normalize` first for unnormalized input.
    """
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.ndim != 1 or psi.size < 1:
        raise DimensionError(f"state vector must be 1-D, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state vector not normalized (norm = {norm!r})")
    return psi


def normalize(v):
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / norm


def basis_state(index, dim):
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def projector(psi):
    """|psi><psi| for a vector, or a stack of vectors with shape ``(..., n)``."""
    psi = np.asarray(psi, dtype=complex)
    return psi[..., :, None] * np.conj(psi[..., None, :])


def density_matrix(m):
    """Validate ``m`` as a density matrix and return it as a complex array.

    Checks Hermiticity (1e-12 elementwise), unit trace (1e-10) and
    eigenvalues >= -1e-10.
    """
    rho = _as_square_stack(m)
    if rho.ndim != 2:
        raise DimensionError(f"expected a single matrix, got shape {rho.shape}")
    _require_hermitian(rho, tol=1e-12)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace is {tr.real!r}, expected 1")
    lam_min = hermitian_eig(rho)[0][-1]
    if lam_min < -PSD_TOL:
        raise NotPositiveError(f"density matrix has eigenvalue {lam_min!r}")
    return rho


def is_density_matrix(m):
    try:
        density_matrix(m)
    except ValueError:
        return False
    return True


def maximally_mixed(dim):
    return np.eye(dim, dtype=complex) / dim


# ---------------------------------------------------------------------------
# Products and reductions
# ---------------------------------------------------------------------------

def tensor_product(a, b):
    """Kronecker product ``a ⊗ b`` with block ordering ``a[i, j] * b``.

    Vectors and stacked matrices are both accepted; leading axes broadcast.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim == 1 and b.ndim == 1:
        return np.kron(a, b)
    if a.ndim < 2 or b.ndim < 2:
        raise DimensionError("tensor_product needs two vectors or two matrices")
    out = np.einsum("...ij,...kl->...ikjl", a, b)
    shape = out.shape[:-4] + (a.shape[-2] * b.shape[-2], a.shape[-1] * b.shape[-1])
    return out.reshape(shape)


def partial_trace(rho, dims, keep="A"):
    """Reduced state of a bipartite operator.

    Parameters
    ----------
    rho : array_like, shape (..., dA*dB, dA*dB)
    dims : tuple of int
        ``(dA, dB)``; the A factor is the leading (slow) index.
    keep : {"A", "B"}
        Which factor survives. ``keep="A"`` is Tr_B, ``keep="B"`` is Tr_A.
    """
    r = _as_square_stack(rho)
    d_a, d_b = (int(x) for x in dims)
    if d_a * d_b != r.shape[-1]:
        raise DimensionError(f"dims {dims} do not factor a {r.shape[-1]}-dimensional operator")
    t = r.reshape(r.shape[:-2] + (d_a, d_b, d_a, d_b))
    if keep == "A":
        return np.einsum("...ijkj->...ik", t)
    if keep == "B":
        return np.einsum("...jijk->...ik", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------

def _off_norm(a):
    n = a.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(a[:, mask]) ** 2, axis=-1))


_TINY = np.finfo(float).tiny


def _jacobi_sweep(a, v, pairs):
    for p, q in pairs:
        apq = a[:, p, q]
        r = np.abs(apq)
        # subnormal entries would overflow the phase; treat them as zero
        nz = r >= _TINY
        r_safe = np.where(nz, r, 1.0)
        phase = np.where(nz, apq / r_safe, 1.0)  # e^{i alpha}
        app = a[:, p, p].real.copy()
        aqq = a[:, q, q].real.copy()
        theta = (aqq - app) / (2.0 * r_safe)
        sgn = np.where(theta >= 0.0, 1.0, -1.0)
        with np.errstate(over="ignore"):
            t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
        t = np.where(nz, t, 0.0)
        c = 1.0 / np.sqrt(1.0 + t * t)
        s = t * c
        ph_bar = np.conj(phase)

        # A <- A V, with V restricted to (p, q) equal to [[c, s], [-s e^-ia, c e^-ia]]
        col_p = a[:, :, p].copy()
        col_q = a[:, :, q].copy()
        a[:, :, p] = c[:, None] * col_p - (s * ph_bar)[:, None] * col_q
        a[:, :, q] = s[:, None] * col_p + (c * ph_bar)[:, None] * col_q
        # A <- V^dag A
        row_p = a[:, p, :].copy()
        row_q = a[:, q, :].copy()
        a[:, p, :] = c[:, None] * row_p - (s * phase)[:, None] * row_q
        a[:, q, :] = s[:, None] * row_p + (c * phase)[:, None] * row_q
        a[:, p, q] = 0.0
        a[:, q, p] = 0.0
        a[:, p, p] = app - t * r
        a[:, q, q] = aqq + t * r

        vp = v[:, :, p].copy()
        vq = v[:, :, q].copy()
        v[:, :, p] = c[:, None] * vp - (s * ph_bar)[:, None] * vq
        v[:, :, q] = s[:, None] * vp + (c * ph_bar)[:, None] * vq


def hermitian_eig(h, check=True):
    """Eigen-decomposition of Hermitian matrices by cyclic Jacobi rotations.

    Parameters
    ----------
    h : array_like, shape (..., n, n)
        Hermitian matrix or stack of them.
    check : bool
        Raise :class:`NotHermitianError` if ``h`` deviates from Hermitian by
        more than 1e-10 elementwise.

    Returns
    -------
    eigenvalues : ndarray, shape (..., n)
        Real, sorted in descending order.
    eigenvectors : ndarray, shape (..., n, n)
        Orthonormal columns, ``h = V diag(w) V^dag``.

    Notes
    -----
    A sweep visits every pair (p, q) with p < q once. Each matrix is iterated
    until its off-diagonal Frobenius norm falls below
    ``1e-13 * max(1, ||h||_F)`` or 100 sweeps elapse. Converged matrices are
    frozen, so the result for any one matrix does not depend on what else was
    in the batch.
    """
    a = _as_square_stack(h)
    if check:
        _require_hermitian(a)
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = 0.5 * (a + dagger(a))
    a = np.ascontiguousarray(a.reshape((-1, n, n)))
    m = a.shape[0]
    v = np.broadcast_to(np.eye(n, dtype=complex), (m, n, n)).copy()

    if n > 1 and m > 0:
        pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
        scale = np.maximum(1.0, np.linalg.norm(a, axis=(-2, -1)))
        active = np.arange(m)
        for _ in range(JACOBI_MAX_SWEEPS):
            sub = a[active]
            keep = _off_norm(sub) >= JACOBI_TOL * scale[active]
            active = active[keep]
            if active.size == 0:
                break
            sub = sub[keep]
            vsub = v[active]
            _jacobi_sweep(sub, vsub, pairs)
            a[active] = sub
            v[active] = vsub

    w = np.diagonal(a, axis1=-2, axis2=-1).real.copy()
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return w.reshape(batch_shape + (n,)), v.reshape(batch_shape + (n, n))


def eigvals(h, check=True):
    """Descending eigenvalues only."""
    return hermitian_eig(h, check=check)[0]


def trace_norm(m):
    """Sum of absolute eigenvalues of a Hermitian matrix (stacks allowed)."""
    return np.sum(np.abs(eigvals(m)), axis=-1)


def _entropy_from_eigs(lam):
    lam = np.clip(lam, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0.0, -lam * np.log2(np.where(lam > 0.0, lam, 1.0)), 0.0)
    return np.sum(terms, axis=-1)


def vn_entropy(rho):
    """Von Neumann entropy in bits, ``-Tr rho log2 rho``.

    Eigenvalues in ``[-1e-10, 0)`` are treated as zero; anything more negative
    raises :class:`NotPositiveError`.
    """
    lam = eigvals(rho)
    worst = np.min(lam, initial=0.0)
    if worst < -PSD_TOL:
        raise NotPositiveError(f"eigenvalue {worst!r} below -{PSD_TOL}")
    return _entropy_from_eigs(lam)


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    return _entropy_from_eigs(np.stack([p, 1.0 - p], axis=-1))


def fidelity(psi, rho):
    """<psi|rho|psi> for a pure reference state and a density matrix."""
    psi = np.asarray(psi, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-1] != psi.shape[-1] or rho.shape[-2] != psi.shape[-1]:
        raise DimensionError(f"state of dim {psi.shape[-1]} vs operator {rho.shape}")
    return np.real(np.einsum("...i,...ij,...j->...", np.conj(psi), rho, psi))


# ---------------------------------------------------------------------------
# Random sampling (test and verification support)
# ---------------------------------------------------------------------------

def random_pure_state(dim, rng):
    return normalize(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_density_matrix(dim, rng, rank=None):
    """Ginibre-ensemble mixed state; ``rank=None`` gives full rank."""
    k = dim if rank is None else rank
    g = rng.normal(size=(dim, k)) + 1j * rng.normal(size=(dim, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim, rng):
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(dim, rng):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + g.conj().T)

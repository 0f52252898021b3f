"""
The disentangling map rho -> Tr_B rho ⊗ Tr_A rho and the evidence that it is
unphysical.

Two families of two-qubit pure-state pairs are studied:

* the outputs of the optimal two-state cloner, parametrized by the cloner
  angle ``theta``;
* the symmetric family ``|u> = a|00> + b(|01> + |10>) + c|11>`` with ``|v>``
  obtained by swapping ``a`` and ``c``, where
  ``(a, b, c) = (sin vt cos vp, sin vt sin vp / sqrt 2, cos vt)``.

For each pair the error probability (or entropy defect) of the original
states is compared with that of their disentangled images. Disentangling can
never make states *more* distinguishable, so points where it would are
forbidden.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cloner import check_theta, cloner_params
from .distinguish import Ensemble, entropy_defect, prob_error
from .qcore import (
    DimensionError,
    binary_entropy,
    partial_trace,
    projector,
    tensor_product,
    vn_entropy,
)

MARGIN = 1e-12
CHUNK_ROWS = 8


def disentangle(rho, dims):
    """Replace a bipartite state by the product of its two reductions.

    The A reduction stays in the first slot, so product states are fixed
    points. Stacks of matrices are accepted.
    """
    rho = np.asarray(rho, dtype=complex)
    d_a, d_b = dims
    if d_a * d_b != rho.shape[-1]:
        raise DimensionError(f"dims {dims} do not factor a {rho.shape[-1]}-dimensional state")
    rho_a = partial_trace(rho, dims, keep="A")
    rho_b = partial_trace(rho, dims, keep="B")
    return tensor_product(rho_a, rho_b)


# ---------------------------------------------------------------------------
# The symmetric two-qubit family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyPoint:
    vartheta: float
    varphi: float
    a: float
    b: float
    c: float


def family_point(vartheta, varphi):
    vt, vp = float(vartheta), float(varphi)
    a = np.sin(vt) * np.cos(vp)
    b = np.sin(vt) * np.sin(vp) / np.sqrt(2.0)
    c = np.cos(vt)
    return FamilyPoint(vt, vp, float(a), float(b), float(c))


def _family_vectors(vt, vp):
    a = np.sin(vt) * np.cos(vp)
    b = np.sin(vt) * np.sin(vp) / np.sqrt(2.0)
    c = np.cos(vt)
    u = np.stack([a, b, b, c], axis=-1).astype(complex)
    v = np.stack([c, b, b, a], axis=-1).astype(complex)
    return u, v


def family_states(p):
    """``(|u>, |v>)`` for a family point."""
    u, v = _family_vectors(np.float64(p.vartheta), np.float64(p.varphi))
    return u, v


def _pe_family_arrays(vt, vp):
    cos_t, sin_t = np.cos(vt), np.sin(vt)
    cos_p, sin_p = np.cos(vp), np.sin(vp)
    root = np.sqrt(
        cos_t**2 + cos_p**2 * sin_t**2 + 2 * sin_p**2 * sin_t**2 + cos_p * np.sin(2 * vt)
    )
    pe = 0.5 - 0.5 * np.abs(cos_t - cos_p * sin_t) * root
    f = (
        cos_t**4
        + cos_t**2 * sin_t**2 * (3 - np.cos(2 * vp))
        + 4 * cos_p * cos_t * sin_p**2 * sin_t**3
        + (5 - np.cos(4 * vp)) * sin_t**4 / 4
    )
    pe_d = 0.5 - 0.5 * np.abs(cos_t**2 - cos_p**2 * sin_t**2) * np.sqrt(f)
    return pe, pe_d


def pe_family(p):
    """Closed-form error probabilities ``(pe, pe_d)`` for a family point.

    ``pe`` uses the prefactor ``|cos vt - sin vt cos vp|``, i.e. ``|c - a|``;
    ``pe_d`` uses ``|c**2 - a**2|`` together with the quartic ``F(vt, vp)``.
    """
    pe, pe_d = _pe_family_arrays(p.vartheta, p.varphi)
    return float(pe), float(pe_d)


def pe_family_as_printed(p):
    """The ``pe`` closed form with a ``|c**2 - a**2|`` prefactor, as it is usually quoted.

    It differs from the true error probability by a factor ``|a + c|`` in the
    correction term and can go negative; kept only for comparison.
    """
    vt, vp = p.vartheta, p.varphi
    cos_t, sin_t = np.cos(vt), np.sin(vt)
    cos_p, sin_p = np.cos(vp), np.sin(vp)
    root = np.sqrt(
        cos_t**2 + cos_p**2 * sin_t**2 + 2 * sin_p**2 * sin_t**2 + cos_p * np.sin(2 * vt)
    )
    return float(0.5 - 0.5 * abs(cos_t**2 - cos_p**2 * sin_t**2) * root)


def entanglement_spectrum(a, b, c):
    """Schmidt weights and entanglement entropy of ``a|00> + b(|01>+|10>) + c|11>``.

    Returns ``(lambda_plus, lambda_minus, entropy_bits)`` with
    ``lambda_plus >= lambda_minus``.
    """
    norm = a * a + 2 * b * b + c * c
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"a^2 + 2b^2 + c^2 = {norm!r}, expected 1")
    split = abs(a + c) * np.sqrt(max(1 + 2 * b * b - 2 * a * c, 0.0))
    split = min(split, 1.0)
    lam_plus = 0.5 * (1 + split)
    lam_minus = 1.0 - lam_plus
    return lam_plus, lam_minus, float(binary_entropy(lam_plus))


def entropy_defect_pair(p):
    """``(ds, ds_d)``: entropy defect of the equiprobable pair and of its disentangled images."""
    u, v = family_states(p)
    pu, pv = projector(u), projector(v)
    ds = entropy_defect(Ensemble.equal(pu, pv))
    ds_d = entropy_defect(Ensemble.equal(disentangle(pu, (2, 2)), disentangle(pv, (2, 2))))
    return ds, ds_d


# ---------------------------------------------------------------------------
# The cloner outputs
# ---------------------------------------------------------------------------

def pe_cloner(theta):
    """Closed-form error probabilities ``(pe, pe_d)`` for the cloner outputs."""
    t = check_theta(theta)
    pe = 0.5 - 0.5 * abs(np.cos(t) ** 2 - np.sin(t) ** 2)
    inner = np.cos(2 * t) ** 2 * (
        13 - 10 * np.cos(4 * t) + np.cos(8 * t) + 6 * np.sin(2 * t) - 2 * np.sin(6 * t)
    )
    pe_d = 0.5 - np.sqrt(max(inner, 0.0)) / (np.sqrt(2.0) * np.sqrt((3 - np.cos(4 * t)) ** 3))
    return float(pe), float(pe_d)


def cloner_curve(theta_grid):
    """Locate each cloner output pair on the symmetric family."""
    points = []
    for theta in theta_grid:
        f00, f01, f11 = cloner_params(theta).output_coefficients()
        vt = float(np.arccos(np.clip(f11, -1.0, 1.0)))
        vp = float(np.arctan2(np.sqrt(2.0) * f01, f00))
        points.append(family_point(vt, vp))
    return points


# ---------------------------------------------------------------------------
# Forbidden-region scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionCell:
    vartheta: float
    varphi: float
    pe: float
    pe_d: float
    ds: float
    ds_d: float
    forbidden_pe: bool
    forbidden_ds: bool

    def forbidden(self, criterion="both"):
        if criterion == "pe":
            return self.forbidden_pe
        if criterion == "ds":
            return self.forbidden_ds
        if criterion == "both":
            return self.forbidden_pe or self.forbidden_ds
        raise ValueError(f"unknown criterion {criterion!r}")


FIELDS = ("vartheta", "varphi", "pe", "pe_d", "ds", "ds_d", "forbidden_pe", "forbidden_ds")


def _pair_entropy_defect(rho_u, rho_v):
    mixed = vn_entropy(0.5 * (rho_u + rho_v))
    return mixed - 0.5 * (vn_entropy(rho_u) + vn_entropy(rho_v))


def evaluate_points(vt, vp):
    """Vectorized cell evaluation; returns a dict of arrays keyed by :data:`FIELDS`."""
    vt = np.asarray(vt, dtype=float)
    vp = np.asarray(vp, dtype=float)
    pe, pe_d = _pe_family_arrays(vt, vp)
    u, v = _family_vectors(vt, vp)
    pu, pv = projector(u), projector(v)
    ds = _pair_entropy_defect(pu, pv)
    ds_d = _pair_entropy_defect(disentangle(pu, (2, 2)), disentangle(pv, (2, 2)))
    return {
        "vartheta": vt,
        "varphi": vp,
        "pe": pe,
        "pe_d": pe_d,
        "ds": ds,
        "ds_d": ds_d,
        "forbidden_pe": pe_d < pe - MARGIN,
        "forbidden_ds": ds_d > ds + MARGIN,
    }


def region_cell(vartheta, varphi):
    vals = evaluate_points(np.array([vartheta]), np.array([varphi]))
    return RegionCell(*(vals[k][0].item() for k in FIELDS))


def default_threads():
    raw = os.environ.get("NOGO_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return os.cpu_count() or 1


def region_table(grid_n, threads=None):
    """Evaluate the uniform ``grid_n x grid_n`` corner grid.

    vartheta runs over [0, pi] and varphi over [0, 2*pi], both endpoints
    included. Rows are ordered row-major (vartheta outer). Work is split into
    fixed blocks of rows, so the numbers do not depend on ``threads``.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    thetas = np.linspace(0.0, np.pi, grid_n)
    phis = np.linspace(0.0, 2.0 * np.pi, grid_n)
    blocks = [thetas[i:i + CHUNK_ROWS] for i in range(0, grid_n, CHUNK_ROWS)]

    def work(block):
        tt, pp = np.meshgrid(block, phis, indexing="ij")
        return evaluate_points(tt.ravel(), pp.ravel())

    n_threads = default_threads() if threads is None else max(1, int(threads))
    if n_threads == 1:
        parts = [work(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(pool.map(work, blocks))
    return {k: np.concatenate([p[k] for p in parts]) for k in FIELDS}


def region_scan(grid_n, criterion="both", threads=None):
    """Grid of fully populated :class:`RegionCell` objects.

    Every cell carries both flags whatever ``criterion`` is; the argument is
    only validated. Use :meth:`RegionCell.forbidden` to pick a single flag.
    """
    if criterion not in ("pe", "ds", "both"):
        raise ValueError(f"unknown criterion {criterion!r}")
    table = region_table(grid_n, threads=threads)
    cols = [table[k].tolist() for k in FIELDS]
    return [RegionCell(*row) for row in zip(*cols)]

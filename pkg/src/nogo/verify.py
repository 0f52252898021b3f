"""
Self-checks run by ``nogo verify``.

Each check recomputes a quantity two independent ways (closed form versus
brute-force simulation, or an inequality that must hold) and reports the
worst deviation against a fixed tolerance. Seeds are fixed.
"""

from dataclasses import dataclass

import numpy as np

from . import channels, cloner, disent, distinguish, ortho, qcore

SEED = 20260101


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    tolerance: float

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: measured {self.measured:.3e} (tolerance {self.tolerance:.0e})"


CHECKS = []


def check(tolerance):
    def register(fn):
        CHECKS.append((fn.__name__, tolerance, fn))
        return fn
    return register


def _rng():
    return np.random.default_rng(SEED)


@check(1e-10)
def eigensolver_reconstruction():
    rng = _rng()
    worst = 0.0
    for n in (1, 2, 3, 4, 8, 16):
        h = qcore.random_hermitian(n, rng)
        w, v = qcore.hermitian_eig(h)
        worst = max(worst, np.max(np.abs(v @ np.diag(w) @ v.conj().T - h)))
        worst = max(worst, np.max(np.abs(v.conj().T @ v - np.eye(n))))
    return worst


@check(1e-12)
def product_then_partial_trace():
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        ra = qcore.random_density_matrix(2, rng)
        rb = qcore.random_density_matrix(3, rng)
        rho = qcore.tensor_product(ra, rb)
        worst = max(worst, np.max(np.abs(qcore.partial_trace(rho, (2, 3), "A") - ra)))
        worst = max(worst, np.max(np.abs(qcore.partial_trace(rho, (2, 3), "B") - rb)))
    return worst


@check(1e-10)
def trace_preserving_probability():
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        ch = channels.random_channel(2, 3, rng)
        _, p = channels.apply_channel(ch, qcore.random_density_matrix(2, rng))
        worst = max(worst, abs(p - 1.0))
    return worst


@check(1e-10)
def choi_positive():
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        ch = channels.random_channel(2, int(rng.integers(1, 5)), rng)
        worst = max(worst, -qcore.eigvals(channels.choi_matrix(ch))[-1])
    return max(worst, 0.0)


@check(1e-8)
def inference_round_trip():
    rng = _rng()
    worst = 0.0
    for _ in range(20):
        ch = channels.random_channel(2, 2, rng)
        inputs = [qcore.random_density_matrix(2, rng) for _ in range(6)]
        s, _ = channels.infer_from_data([(x, channels.apply_channel(ch, x)[0]) for x in inputs])
        for _ in range(5):
            rho = qcore.random_density_matrix(2, rng)
            out = channels.apply_superoperator(s, rho)
            worst = max(worst, np.max(np.abs(out - channels.apply_channel(ch, rho)[0])))
    return worst


@check(1e-9)
def transpose_is_not_cp():
    rng = _rng()
    data = [(h, h.T) for h in (qcore.random_hermitian(2, rng) for _ in range(6))]
    _, verdict = channels.infer_from_data(data)
    lam = np.sort(verdict.choi_eigenvalues)
    err = np.max(np.abs(lam - np.array([-0.5, 0.5, 0.5, 0.5])))
    return err if not verdict.is_cp else np.inf


@check(1e-12)
def squaring_matches_elementwise_square():
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        rho = qcore.random_density_matrix(2, rng)
        out, p = channels.squaring_circuit(rho)
        p_ref = rho[0, 0].real ** 2 + rho[1, 1].real ** 2
        worst = max(worst, abs(p - p_ref), np.max(np.abs(out - rho**2 / p_ref)))
    return worst


@check(1e-10)
def helstrom_achieves_closed_form():
    rng = _rng()
    worst = 0.0
    for dim in (2, 4):
        for _ in range(25):
            r1 = qcore.random_density_matrix(dim, rng)
            r2 = qcore.random_density_matrix(dim, rng)
            povm = distinguish.helstrom_povm(r1, r2)
            measured = 0.5 * (distinguish.outcome_distribution(r1, povm)[1]
                              + distinguish.outcome_distribution(r2, povm)[0])
            worst = max(worst, abs(measured - distinguish.prob_error(r1, r2)))
    return worst


@check(1e-9)
def holevo_bound():
    rng = _rng()
    worst = -np.inf
    for _ in range(20):
        e = distinguish.Ensemble.equal(qcore.random_density_matrix(2, rng),
                                       qcore.random_density_matrix(2, rng))
        worst = max(worst, distinguish.accessible_info_estimate(e, grid=(91, 181))
                    - distinguish.entropy_defect(e))
    return max(worst, 0.0)


@check(1e-9)
def data_processing():
    rng = _rng()
    worst = -np.inf
    for _ in range(50):
        r1, r2 = qcore.random_density_matrix(2, rng), qcore.random_density_matrix(2, rng)
        ch = channels.random_channel(2, int(rng.integers(1, 5)), rng)
        before = distinguish.entropy_defect(distinguish.Ensemble.equal(r1, r2))
        after = distinguish.entropy_defect(distinguish.Ensemble.equal(
            channels.apply_channel(ch, r1)[0], channels.apply_channel(ch, r2)[0]))
        worst = max(worst, after - before)
    return max(worst, 0.0)


@check(1e-10)
def cloner_normalization_and_symmetric_reductions():
    worst = 0.0
    for theta in np.linspace(0.0, np.pi / 4, 200, endpoint=False):
        _, _, u_out, v_out = cloner.cloner_states(theta)
        for psi in (u_out, v_out):
            rho = qcore.projector(psi)
            worst = max(worst, abs(np.linalg.norm(psi) - 1.0),
                        np.max(np.abs(qcore.partial_trace(rho, (2, 2), "A")
                                      - qcore.partial_trace(rho, (2, 2), "B"))))
    return worst


@check(0.0)
def cloner_fidelity_floor():
    fmin = min(cloner.cloner_fidelity(t) for t in np.linspace(0.0, np.pi / 4, 200, endpoint=False))
    return max(0.985 - fmin, 0.0)


def _cloner_pe_numeric(theta):
    u_in, v_in, u_out, v_out = cloner.cloner_states(theta)
    pu, pv = qcore.projector(u_out), qcore.projector(v_out)
    pe = distinguish.prob_error(pu, pv)
    pe_d = distinguish.prob_error(disent.disentangle(pu, (2, 2)), disent.disentangle(pv, (2, 2)))
    return pe, pe_d


@check(1e-9)
def cloner_pe_closed_form():
    worst = 0.0
    for theta in np.linspace(0.0, np.pi / 4 - 1e-3, 200):
        a = disent.pe_cloner(theta)
        b = _cloner_pe_numeric(theta)
        worst = max(worst, abs(a[0] - b[0]), abs(a[1] - b[1]))
    return worst


@check(1e-9)
def family_pe_closed_form():
    vt, vp = np.meshgrid(np.linspace(0, np.pi, 40), np.linspace(0, 2 * np.pi, 40), indexing="ij")
    vt, vp = vt.ravel(), vp.ravel()
    pe, pe_d = disent._pe_family_arrays(vt, vp)
    u, v = disent._family_vectors(vt, vp)
    pu, pv = qcore.projector(u), qcore.projector(v)
    ref = distinguish.prob_error(pu, pv)
    ref_d = distinguish.prob_error(disent.disentangle(pu, (2, 2)), disent.disentangle(pv, (2, 2)))
    return max(np.max(np.abs(pe - ref)), np.max(np.abs(pe_d - ref_d)))


@check(0.0)
def disentangling_lowers_cloner_pe():
    gaps = [np.subtract(*disent.pe_cloner(t)) for t in np.linspace(0.01, np.pi / 4 - 0.01, 200)]
    return 0.0 if min(gaps) > 0 else 1.0


@check(1e-9)
def reflection_symmetry():
    rng = _rng()
    vt, vp = rng.uniform(0, np.pi, 200), rng.uniform(0, 2 * np.pi, 200)
    a = disent.evaluate_points(vt, vp)
    b = disent.evaluate_points(np.pi - vt, np.pi - vp)
    worst = max(np.max(np.abs(a[k] - b[k])) for k in ("pe", "pe_d", "ds", "ds_d"))
    for t, p in zip(vt[:50], vp[:50]):
        x = disent.family_point(t, p)
        y = disent.family_point(np.pi - t, np.pi - p)
        lx = disent.entanglement_spectrum(x.a, x.b, x.c)
        ly = disent.entanglement_spectrum(y.a, y.b, y.c)
        worst = max(worst, abs(lx[0] - ly[0]), abs(lx[1] - ly[1]))
    return worst


@check(1e-9)
def entanglement_entropy_matches_reduction():
    rng = _rng()
    worst = 0.0
    for _ in range(100):
        p = disent.family_point(rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi))
        u, _ = disent.family_states(p)
        s_red = qcore.vn_entropy(qcore.partial_trace(qcore.projector(u), (2, 2), "A"))
        worst = max(worst, abs(disent.entanglement_spectrum(p.a, p.b, p.c)[2] - s_red))
    return worst


@check(0.0)
def cloner_curve_is_forbidden():
    points = disent.cloner_curve(np.linspace(0.01, np.pi / 4 - 0.01, 100))
    allowed = sum(not disent.region_cell(p.vartheta, p.varphi).forbidden_pe for p in points)
    return float(allowed)


@check(1e-10)
def unambiguous_discrimination():
    rng = _rng()
    worst = 0.0
    for _ in range(50):
        phi1, phi2 = qcore.random_pure_state(2, rng), qcore.random_pure_state(2, rng)
        res = ortho.idp_povm(phi1, phi2)
        e1, e2, _ = res.povm.elements
        wrong = max(qcore.fidelity(phi2, e1), qcore.fidelity(phi1, e2))
        worst = max(worst, wrong, abs(res.success_prob - (1 - ortho.overlap(phi1, phi2))))
        two = ortho.orthogonalize_two_copy(phi1, phi2)[0]
        worst = max(worst, abs(two - ortho.orthogonalization_bound(phi1, phi2)))
    return worst


@check(1e-12)
def squaring_respects_separation_bound():
    worst = -np.inf
    for theta in np.linspace(0.02, np.pi / 4 - 0.02, 20):
        u = np.array([np.cos(theta), np.sin(theta)])
        v = np.array([np.sin(theta), np.cos(theta)])
        s_prev, bound, prev = ortho.overlap(u, v), 1.0, 1.0
        for r in ortho.iterate_squaring(u, v, 5):
            bound *= ortho.overlap_reduction_bound(s_prev**2, r.overlap)
            step = r.cumulative_success / prev
            worst = max(worst, r.cumulative_success - bound, 0.5 - step, step - 1.0)
            s_prev, prev = r.overlap, r.cumulative_success
    return max(worst, 0.0)


@check(1e-12)
def triple_product_unitary_invariance():
    rng = _rng()
    worst = 0.0
    for _ in range(20):
        phis = [qcore.random_pure_state(3, rng) for _ in range(3)]
        u = qcore.random_unitary(3, rng)
        worst = max(worst, abs(abs(ortho.triple_product(phis))
                               - abs(ortho.triple_product([u @ p for p in phis]))))
    return worst


@check(1e-12)
def disentangling_is_nonlinear():
    zero = qcore.projector([1, 0, 0, 0])
    bell = qcore.projector(np.array([1, 0, 0, 1]) / np.sqrt(2))
    lhs = disent.disentangle(0.5 * (zero + bell), (2, 2))[0, 0].real
    rhs = 0.5 * (disent.disentangle(zero, (2, 2)) + disent.disentangle(bell, (2, 2)))[0, 0].real
    return abs((rhs - lhs) - 0.0625)


def run_all():
    results = []
    for name, tol, fn in CHECKS:
        try:
            measured = float(fn())
            passed = measured <= tol
        except Exception:  # a crash is a failed check, not a crashed suite
            measured, passed = float("nan"), False
        results.append(CheckResult(name, passed, measured, tol))
    return results

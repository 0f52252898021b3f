"""Acceptance criteria 1-12, one PASS/FAIL line each (also shown in the terminal summary)."""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from nogo import cli
from nogo.channels import (
    apply_channel,
    apply_superoperator,
    infer_from_data,
    random_channel,
    squaring_circuit,
)
from nogo.cloner import cloner_fidelity, cloner_states
from nogo.disent import (
    cloner_curve,
    disentangle,
    evaluate_points,
    family_point,
    family_states,
    pe_cloner,
    pe_family,
    region_cell,
    region_scan,
)
from nogo.distinguish import Ensemble, accessible_info_estimate, entropy_defect, outcome_distribution, prob_error
from nogo.ortho import idp_povm, orthogonalize_two_copy, overlap
from nogo.qcore import partial_trace, projector, random_density_matrix, random_pure_state

SEED = 20260101

# closed-form oracles
PE_PI_8 = 0.5 - 0.5 * math.cos(math.pi / 4)                        # 0.146446609407
PE_D_PI_8 = 0.5 - math.sqrt((6 + math.sqrt(2)) / 27) / math.sqrt(2)  # 0.129459514824


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def brute_pe_stack(u, v):
    pu, pv = projector(u), projector(v)
    pe = prob_error(pu, pv)
    pe_d = prob_error(disentangle(pu, (2, 2)), disentangle(pv, (2, 2)))
    return pe, pe_d


@pytest.fixture(scope="module")
def scan200():
    return region_scan(200)


def test_criterion_01_cloner_transcription():
    start = time.perf_counter()
    thetas = np.linspace(0, np.pi / 4 - 1e-3, 1000)
    analytic = np.array([pe_cloner(t) for t in thetas])
    outs = [cloner_states(t) for t in thetas]
    pe, pe_d = brute_pe_stack(np.array([o[2] for o in outs]), np.array([o[3] for o in outs]))
    err = np.max(np.abs(analytic - np.stack([pe, pe_d], axis=1)))
    elapsed = time.perf_counter() - start
    report(1, err <= 1e-9 and elapsed < 5, f"max diff {err:.2e} <= 1e-9, {elapsed:.2f} s < 5 s")


def test_criterion_02_family_transcription():
    start = time.perf_counter()
    vt, vp = np.meshgrid(np.linspace(0, np.pi, 100), np.linspace(0, 2 * np.pi, 100), indexing="ij")
    points = [family_point(a, b) for a, b in zip(vt.ravel(), vp.ravel())]
    analytic = np.array([pe_family(p) for p in points])
    states = [family_states(p) for p in points]
    pe, pe_d = brute_pe_stack(np.array([s[0] for s in states]), np.array([s[1] for s in states]))
    err = np.max(np.abs(analytic - np.stack([pe, pe_d], axis=1)))
    elapsed = time.perf_counter() - start
    report(2, err <= 1e-9 and elapsed < 30, f"max diff {err:.2e} <= 1e-9, {elapsed:.2f} s < 30 s")


def test_criterion_03_fig1_strict_gap():
    values = np.array([pe_cloner(t) for t in np.linspace(0.01, np.pi / 4 - 0.01, 500)])
    gap = np.min(values[:, 0] - values[:, 1])
    pe, pe_d = pe_cloner(np.pi / 8)
    spot = max(abs(pe - PE_PI_8), abs(pe_d - PE_D_PI_8))
    ok = gap > 0 and spot <= 1e-6 and abs(pe - 0.146447) <= 1e-6
    report(3, ok, f"min pe - pe_d {gap:.3e} > 0; pi/8 -> ({pe:.6f}, {pe_d:.10f}), oracle diff {spot:.1e}")


def test_criterion_04_fig2_domains(scan200):
    n_forbidden = sum(c.forbidden_pe for c in scan200)
    n_allowed = len(scan200) - n_forbidden
    curve = cloner_curve(np.linspace(0.01, np.pi / 4 - 0.01, 500))
    cells = [region_cell(p.vartheta, p.varphi) for p in curve]
    on_curve = sum(c.forbidden_pe for c in cells)
    margin = min(c.pe - c.pe_d for c in cells)
    ok = n_forbidden > 0 and n_allowed > 0 and on_curve == len(curve)
    report(4, ok, f"{n_forbidden} forbidden / {n_allowed} allowed cells; "
                  f"{on_curve}/{len(curve)} curve points forbidden, min margin {margin:.1e}")


def test_criterion_05_fig3_and_symmetry(scan200):
    n_ds = sum(c.forbidden_ds for c in scan200)
    rng = np.random.default_rng(SEED)
    vt, vp = rng.uniform(0, np.pi, 1000), rng.uniform(0, 2 * np.pi, 1000)
    a = evaluate_points(vt, vp)
    b = evaluate_points(np.pi - vt, np.pi - vp)
    err = max(np.max(np.abs(a[k] - b[k])) for k in ("pe", "pe_d", "ds", "ds_d"))
    report(5, n_ds > 0 and err <= 1e-9, f"{n_ds} forbidden_ds cells; symmetry error {err:.2e} <= 1e-9")


def test_criterion_06_fidelity():
    thetas = np.linspace(0, np.pi / 4, 1000, endpoint=False)
    f_min = min(cloner_fidelity(t) for t in thetas)
    red_err = 0.0
    for t in thetas:
        _, _, u_out, v_out = cloner_states(t)
        for out in (u_out, v_out):
            rho = projector(out)
            red_err = max(red_err, np.max(np.abs(partial_trace(rho, (2, 2), "A") - partial_trace(rho, (2, 2), "B"))))
    report(6, f_min >= 0.985 and red_err <= 1e-10, f"min fidelity {f_min:.6f} >= 0.985; reduction gap {red_err:.1e}")


def test_criterion_07_holevo():
    rng = np.random.default_rng(SEED + 7)
    worst = -np.inf
    for _ in range(100):
        e = Ensemble.equal(random_density_matrix(2, rng), random_density_matrix(2, rng))
        worst = max(worst, accessible_info_estimate(e) - entropy_defect(e))
    ortho_err = 0.0
    for _ in range(5):
        u = random_pure_state(2, rng)
        v = np.array([-np.conj(u[1]), np.conj(u[0])])
        ortho_err = max(ortho_err, abs(accessible_info_estimate(Ensemble.equal(projector(u), projector(v))) - 1.0))
    report(7, worst <= 1e-9 and ortho_err <= 1e-6,
           f"max(I_acc - dS) {worst:.2e} <= 1e-9; orthogonal pairs within {ortho_err:.1e} of 1 bit")


def test_criterion_08_data_processing():
    rng = np.random.default_rng(SEED + 8)
    worst = -np.inf
    for _ in range(100):
        e = Ensemble.equal(random_density_matrix(2, rng), random_density_matrix(2, rng))
        ch = random_channel(2, int(rng.integers(1, 5)), rng)
        after = Ensemble.equal(*(apply_channel(ch, rho)[0] for rho in e.states))
        worst = max(worst, entropy_defect(after) - entropy_defect(e))
    report(8, worst <= 1e-9, f"max increase {worst:.2e} <= 1e-9")


def test_criterion_09_squaring():
    rng = np.random.default_rng(SEED + 9)
    out_err = p_err = 0.0
    for _ in range(100):
        rho = random_density_matrix(2, rng)
        out, p = squaring_circuit(rho)
        norm = rho[0, 0].real ** 2 + rho[1, 1].real ** 2
        out_err = max(out_err, np.max(np.abs(out - rho**2 / norm)))
        p_err = max(p_err, abs(p - norm))
    t = np.pi / 8
    _, p_spot = squaring_circuit(projector([np.cos(t), np.sin(t)]))
    ok = out_err <= 1e-12 and p_err <= 1e-12 and abs(p_spot - 0.75) <= 1e-12
    report(9, ok, f"output error {out_err:.1e}, probability error {p_err:.1e}; pi/8 -> p = {p_spot:.12f}")


def test_criterion_10_idp():
    rng = np.random.default_rng(SEED + 10)
    succ_err = mis = two_err = 0.0
    for _ in range(100):
        u, v = random_pure_state(2, rng), random_pure_state(2, rng)
        s = overlap(u, v)
        r = idp_povm(u, v)
        succ_err = max(succ_err, abs(r.success_prob - (1 - s)))
        mis = max(mis, outcome_distribution(projector(u), r.povm)[1], outcome_distribution(projector(v), r.povm)[0])
        two_err = max(two_err, abs(orthogonalize_two_copy(u, v)[0] - (1 - s * s)))
    ok = succ_err <= 1e-10 and mis <= 1e-12 and two_err <= 1e-10
    report(10, ok, f"success error {succ_err:.1e}, misidentification {mis:.1e}, two-copy error {two_err:.1e}")


def test_criterion_11_choi_inference():
    basis = []
    for i in range(2):
        for j in range(2):
            m = np.zeros((2, 2), dtype=complex)
            if i == j:
                m[i, i] = 1
            elif i < j:
                m[i, j] = m[j, i] = 1
            else:
                m[j, i], m[i, j] = 1j, -1j
            basis.append(m)
    _, verdict = infer_from_data([(h, h.T) for h in basis])
    eig_err = np.max(np.abs(np.sort(verdict.choi_eigenvalues) - [-0.5, 0.5, 0.5, 0.5]))

    rng = np.random.default_rng(SEED + 11)
    action_err = 0.0
    for _ in range(100):
        ch = random_channel(2, int(rng.integers(1, 5)), rng)
        inputs = [random_density_matrix(2, rng) for _ in range(6)]
        s, _ = infer_from_data([(x, apply_channel(ch, x)[0]) for x in inputs])
        tests = np.array([random_density_matrix(2, rng) for _ in range(100)])
        direct = sum(k @ tests @ k.conj().T for k in ch.kraus_ops)
        inferred = np.array([apply_superoperator(s, x) for x in tests])
        action_err = max(action_err, np.max(np.abs(inferred - direct)))
    ok = eig_err <= 1e-9 and not verdict.is_cp and action_err <= 1e-8
    report(11, ok, f"transpose eigenvalue error {eig_err:.1e}, is_cp={verdict.is_cp}; "
                   f"round-trip action error {action_err:.1e}")


def test_criterion_12_determinism(tmp_path, monkeypatch):
    blobs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("NOGO_THREADS", threads)
        out = tmp_path / f"regions_{threads}.csv"
        assert cli.main(["regions", "--grid", "100", "-o", str(out)]) == 0
        blobs.append(out.read_bytes())
    same = blobs[0] == blobs[1]
    report(12, same, f"NOGO_THREADS=1 vs 4: {'identical' if same else 'different'} ({len(blobs[0])} bytes)")

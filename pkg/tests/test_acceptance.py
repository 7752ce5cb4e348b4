"""Acceptance suite: one test per criterion, each at its stated
tolerance, printing one pass/fail line per criterion.

Run as

    pytest -v -s tests/test_acceptance.py

Random base points are sampled with |z| <= 0.6: the closed-form ball
geodesics have geometrically decaying coefficients with ratio |z|, so
this keeps the truncation floor of the M = 64 representation below the
1e-10 tolerances (0.6^65 ~ 4e-15).  Shell points for the reconstruction
criterion use radii in [0.55, 0.75] for the same reason.
"""

import time

import numpy as np
import pytest

from geodisc import (make_ball, make_perturbed_ball, ball_geodesic,
                     solve_from_center_direction, solve_two_point,
                     boundary_hausdorff, lift_from_disc, projectivize,
                     boundary_conormality_residual, extremality_probe,
                     trace_locus, jacobian_certificate,
                     push_domain_through_psi, consistency_check, restrict,
                     extension_defect, tangent_line_family,
                     counterexample_harness, analyze, synthesize,
                     hilbert_conjugate, negative_tail_norm, NAMED_FUNCTIONS,
                     SolverSettings, CircleGrid)
from geodisc.tangency import _find_parameter

BALL2 = make_ball([0, 0], 1.0)
BALL3 = make_ball([0, 0, 0], 1.0)
SETTINGS = SolverSettings()          # N = 256, M = 64

R_PAPER = np.sqrt(1.0 / 3.0)


def _report(num, text):
    print(f"\n[acceptance] criterion {num}: PASS - {text}")


def random_pairs(rng, n, count, radius=0.6):
    pairs = []
    for _ in range(count):
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        z *= radius * rng.uniform(0.05, 1.0) ** (1.0 / (2 * n)) / np.linalg.norm(z)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        pairs.append((z, v / np.linalg.norm(v)))
    return pairs


@pytest.fixture(scope="module")
def solved_batch():
    """50 random solves on the unit ball for n = 2 and n = 3, shared by
    criteria 1, 2 and 7."""
    rng = np.random.default_rng(20240817)
    batch = {}
    for n, domain in ((2, BALL2), (3, BALL3)):
        runs = []
        for z, v in random_pairs(rng, n, 50):
            t0 = time.perf_counter()
            disc, lift = solve_from_center_direction(domain, z, v, SETTINGS)
            dt = time.perf_counter() - t0
            runs.append((z, v, disc, lift, dt))
        batch[n] = runs
    return batch


def test_criterion_1_ball_oracle_equivalence(solved_batch):
    worst_sup = 0.0
    worst_time = 0.0
    for n, domain in ((2, BALL2), (3, BALL3)):
        for z, v, disc, _, dt in solved_batch[n]:
            oracle = ball_geodesic(domain, z, v, SETTINGS)
            sup = float(np.max(np.abs(disc.boundary_values()
                                      - oracle.boundary_values())))
            assert sup <= 1e-8, (n, z, v, sup)
            worst_sup = max(worst_sup, sup)
            worst_time = max(worst_time, dt)
            assert dt <= 1.0, f"solve took {dt:.2f}s"
    _report(1, f"100 solves (n=2,3): max sup-error {worst_sup:.2e}, "
               f"max time {worst_time:.2f}s <= 1s")


def test_criterion_2_lift_correctness(solved_batch):
    worst = {"imag_g": 0.0, "conorm": 0.0, "tail": 0.0}
    for n, domain in ((2, BALL2), (3, BALL3)):
        for z, v, disc, lift, _ in solved_batch[n]:
            assert lift.g_boundary[0] == 1.0          # g(1) = 1 exactly
            nodes = disc.grid.nodes
            w = lift(nodes)
            d = domain.grad(disc(nodes))
            ratio = np.sum(w * np.conj(d), axis=1) / np.sum(np.abs(d) ** 2,
                                                            axis=1)
            imag_g = float(np.max(np.abs(ratio.imag)))
            assert imag_g <= 1e-10
            conorm = boundary_conormality_residual(domain, disc, lift)
            assert conorm <= 1e-10
            data = nodes[:, None] * w
            tail = max(negative_tail_norm(analyze(data[:, c], disc.grid))
                       for c in range(n))
            assert tail <= 1e-10
            worst = {"imag_g": max(worst["imag_g"], imag_g),
                     "conorm": max(worst["conorm"], conorm),
                     "tail": max(worst["tail"], tail)}
    # the radial disc phi(tau) = (tau, 0) lifts to (1/tau, 0)
    radial, lift = solve_from_center_direction(
        BALL2, np.zeros(2), np.array([1.0, 0.0]), SETTINGS)
    assert np.max(np.abs(lift.pole_coeff - [1.0, 0.0])) <= 1e-10
    assert np.max(np.abs(lift.holo_coeffs)) <= 1e-10
    _report(2, f"g real to {worst['imag_g']:.1e}, g(1)=1 exact, "
               f"conormality {worst['conorm']:.1e}, "
               f"holomorphy tail {worst['tail']:.1e}, radial lift = (1/tau, 0)")


def test_criterion_3_two_point_uniqueness():
    rng = np.random.default_rng(3)
    worst_haus = 0.0
    worst_lift = 0.0
    for _ in range(2):
        (z, _), (w, _) = random_pairs(rng, 2, 2, radius=0.55)
        d1, _ = solve_two_point(BALL2, z, w, SETTINGS)
        d2, _ = solve_two_point(BALL2, w, z, SETTINGS)
        haus = boundary_hausdorff(d1, d2)
        assert haus <= 1e-6
        worst_haus = max(worst_haus, haus)
        l1 = lift_from_disc(BALL2, d1)
        l2 = lift_from_disc(BALL2, d2)
        for tau1 in 0.45 * np.exp(2j * np.pi * np.arange(20) / 20):
            y = d1(np.array([tau1]))[0]
            tau2, dist = _find_parameter(d2, y)
            assert dist < 1e-8
            gap = np.max(np.abs(projectivize(l1, tau1)
                                - projectivize(l2, tau2)))
            assert gap <= 1e-8
            worst_lift = max(worst_lift, gap)
    _report(3, f"(z,w) vs (w,z): Hausdorff {worst_haus:.1e} <= 1e-6, "
               f"projectivized lifts at 20 matched points {worst_lift:.1e} <= 1e-8")


def test_criterion_4_tangency_locus_oracle():
    worst_pt = 0.0
    worst_det = -np.inf
    for a in (0.6, 0.8, 0.95):
        for r2 in (0.4, 0.5, R_PAPER):
            inner = make_ball([0, 0], r2)
            z_o = np.array([a + 0j, 0j])
            locus = trace_locus(BALL2, inner, z_o, steps=16,
                                settings=SETTINGS)
            W = locus.touch_points()
            w1 = r2 ** 2 / a
            w2 = r2 * np.sqrt(1.0 - r2 ** 2 / a ** 2)
            err = max(float(np.max(np.abs(W[:, 0] - w1))),
                      float(np.max(np.abs(np.abs(W[:, 1]) - w2))))
            assert err <= 1e-8, (a, r2, err)
            worst_pt = max(worst_pt, err)
            rho_psi = push_domain_through_psi(BALL2, inner, z_o)
            for tp in locus.points:
                det = jacobian_certificate(rho_psi, tp.psi_coordinates())
                assert det < 0, (a, r2, det)
                worst_det = max(worst_det, det)
    # shrinking along a ray toward the inner boundary
    r2 = 0.5
    inner = make_ball([0, 0], r2)
    diams = []
    for da in (0.25, 0.15, 0.08, 0.04, 0.02):
        locus = trace_locus(BALL2, inner, np.array([r2 + da, 0.0]),
                            steps=12, settings=SETTINGS)
        diams.append(locus.diameter())
    assert all(diams[i] > diams[i + 1] for i in range(len(diams) - 1))
    _report(4, f"9 loci match the analytic circle to {worst_pt:.1e}; "
               f"all certificates < 0 (max {worst_det:.2e}); diameters "
               f"{['%.3f' % d for d in diams]} shrink monotonically")


def test_criterion_5_positive_reconstruction():
    t_start = time.perf_counter()
    f = NAMED_FUNCTIONS["holo_mix"]

    def oracle(z):
        return z[0] ** 2 + np.exp(z[1])

    # exact outer ball, inner radius 0.5, 50 shell points
    inner = make_ball([0, 0], 0.5)
    rng = np.random.default_rng(55)
    worst_spread = 0.0
    worst_err = 0.0
    for _ in range(50):
        raw = rng.standard_normal(4)
        raw /= np.linalg.norm(raw)
        z = rng.uniform(0.55, 0.75) * (raw[0::2] + 1j * raw[1::2])
        rep = consistency_check(f, BALL2, inner, z, disc_count=8,
                                settings=SETTINGS, trace_steps=12)
        assert np.all(rep.extendible)
        worst_spread = max(worst_spread, rep.spread)
        err = abs(np.mean(rep.values) - oracle(z))
        worst_err = max(worst_err, err)
    assert worst_spread <= 1e-8
    assert worst_err <= 1e-6

    # perturbed outer ball with numerically solved discs
    pb = make_perturbed_ball(0.05, "re_z1_sq")
    inner_pb = make_ball([0, 0], 0.4)
    small = SolverSettings(modes=32, grid=CircleGrid(128))
    worst_spread_pb = 0.0
    worst_err_pb = 0.0
    for _ in range(8):
        raw = rng.standard_normal(4)
        raw /= np.linalg.norm(raw)
        z = rng.uniform(0.55, 0.62) * (raw[0::2] + 1j * raw[1::2])
        rep = consistency_check(f, pb, inner_pb, z, disc_count=6,
                                settings=small, trace_steps=10)
        assert np.all(rep.extendible)
        worst_spread_pb = max(worst_spread_pb, rep.spread)
        worst_err_pb = max(worst_err_pb, abs(np.mean(rep.values) - oracle(z)))
    assert worst_spread_pb <= 1e-3
    assert worst_err_pb <= 1e-3
    elapsed = time.perf_counter() - t_start
    assert elapsed <= 300.0
    _report(5, f"ball: spread {worst_spread:.1e} <= 1e-8, error "
               f"{worst_err:.1e} <= 1e-6 at 50 points; perturbed: spread "
               f"{worst_spread_pb:.1e}, error {worst_err_pb:.1e} <= 1e-3; "
               f"runtime {elapsed:.0f}s <= 300s")


def test_criterion_6_counterexample_reproduction():
    # pre-build quadrature oracle: Fourier coefficients of the trace on
    # the same deterministic tangent-line family, by direct FFT of dense
    # samples (independent of the TrigSeries pipeline)
    grid = CircleGrid(512)
    discs = tangent_line_family(R_PAPER, 64, grid)
    s = np.sqrt(1.0 - R_PAPER ** 2)
    oracle_defects = []
    for disc in discs:
        theta = 2 * np.pi * np.arange(2048) / 2048
        z = disc.coeffs[0][None, :] \
            + np.exp(1j * theta)[:, None] * disc.coeffs[1][None, :]
        vals = z[:, 0] * np.conj(z[:, 1]) ** 2
        c = np.fft.fft(vals) / len(vals)
        oracle_defects.append(np.sqrt(np.sum(np.abs(c[len(c) // 2:]) ** 2)))
    oracle_min = float(np.min(oracle_defects))
    assert oracle_min >= 0.01

    rep = counterexample_harness(n_discs=64, grid_size=512)
    main = rep.per_radius[float(R_PAPER)]
    assert main["max_morera"] <= 1e-10
    assert main["min_defect"] >= 0.99 * oracle_min
    assert main["min_defect"] >= 0.01
    control = rep.per_radius[0.5]
    assert control["max_morera"] >= 1e-3
    holo = rep.holomorphic_control
    assert holo["max_morera"] <= 1e-10 and holo["max_defect"] <= 1e-10
    _report(6, f"r2=sqrt(1/3): max Morera {main['max_morera']:.1e} <= 1e-10, "
               f"min defect {main['min_defect']:.3f} >= oracle "
               f"{oracle_min:.3f}; control r2=0.5: max Morera "
               f"{control['max_morera']:.2e} >= 1e-3")


def test_criterion_7_extremality_probe(solved_batch):
    cases = []
    radial, _ = solve_from_center_direction(BALL2, np.zeros(2),
                                            np.array([1.0, 0.0]), SETTINGS)
    cases.append(("ball radial", BALL2, radial, True))
    _, _, off_disc, _, _ = solved_batch[2][0]
    cases.append(("ball off-center", BALL2, off_disc, False))
    pb = make_perturbed_ball(0.05, "re_z1_sq")
    pdisc, _ = solve_from_center_direction(
        pb, np.array([0.2 + 0.1j, -0.1j]), np.array([1.0, 0.3]), SETTINGS)
    cases.append(("perturbed ball", pb, pdisc, False))
    maxes = []
    for label, domain, disc, schwarz in cases:
        report = extremality_probe(domain, disc, trials=100, seed=7)
        assert report.max_abs_lambda < 1.0, label
        if schwarz:
            # Schwarz bound for competitors strictly inside the ball
            assert report.max_abs_lambda <= 1.0 - 1e-3
        maxes.append(report.max_abs_lambda)
    _report(7, f"300 competitors across 3 cases: max |lambda| "
               f"{max(maxes):.4f} < 1 (Schwarz margin on the ball)")


def test_criterion_8_spectral_sanity():
    # Hilbert multiplier identities at 1e-12
    g = CircleGrid(128)
    for k in (1, 3, 9):
        t = hilbert_conjugate(analyze(np.cos(k * g.angles), g))
        assert np.max(np.abs(synthesize(t).real - np.sin(k * g.angles))) \
            <= 1e-12
    u_vals = np.cos(2 * g.angles) - 0.7 * np.sin(5 * g.angles)
    tt = hilbert_conjugate(hilbert_conjugate(analyze(u_vals, g)))
    assert np.max(np.abs(synthesize(tt).real - (u_vals[0] - u_vals))) <= 1e-12

    # defect/residual metrics under (N, M) doubling
    f = NAMED_FUNCTIONS["holo_mix"]
    inner = make_ball([0, 0], 0.5)
    z = np.array([0.55 + 0.1j, 0.15 - 0.2j])
    v = np.array([0.8, 1.0 + 0.4j])
    zp = np.array([0.3 + 0.1j, 0.2j])
    pb = make_perturbed_ball(0.05, "re_z1_sq")
    levels = ((128, 32), (256, 64), (512, 128))
    metrics = {name: [] for name in
               ("geodesic attachment", "lift holomorphy tail",
                "conormality", "holo defect", "solved attachment",
                "consistency spread")}
    for (n_grid, m) in levels:
        st = SolverSettings(modes=m, grid=CircleGrid(n_grid))
        geo = ball_geodesic(BALL2, z, v, st)
        metrics["geodesic attachment"].append(geo.boundary_residual())
        lift = lift_from_disc(BALL2, geo)
        nodes = geo.grid.nodes
        data = nodes[:, None] * lift(nodes)
        metrics["lift holomorphy tail"].append(
            max(negative_tail_norm(analyze(data[:, c], geo.grid))
                for c in range(2)))
        metrics["conormality"].append(
            boundary_conormality_residual(BALL2, geo, lift))
        metrics["holo defect"].append(extension_defect(restrict(f, geo)))
        disc, _ = solve_from_center_direction(pb, zp, v, st)
        metrics["solved attachment"].append(disc.attachment_residual)
        rep = consistency_check(f, BALL2, inner, z, disc_count=4, settings=st)
        metrics["consistency spread"].append(rep.spread)
    floor = 5e-11
    for name, seq in metrics.items():
        for a, b in zip(seq, seq[1:]):
            assert b <= max(2.0 * a, floor), (name, seq)
    summary = {k: f"{v[0]:.1e}->{v[-1]:.1e}" for k, v in metrics.items()}
    _report(8, f"metrics non-increasing under (N,M) doubling: {summary}; "
               f"Hilbert identities at 1e-12")

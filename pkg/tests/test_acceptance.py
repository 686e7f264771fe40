"""Acceptance criteria, one test per criterion at the stated tolerances."""
import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import mild_stars, off_origin_domains
from isodensity.cli import main
from isodensity.conformal import replay_proof
from isodensity.geometry import Disk, area, random_star
from isodensity.greens import disk_green, flucher_bound, level_identities, star_green
from isodensity.hardy_sobolev import (
    ckn_admissible,
    coarea_check,
    exponent_map,
    extremal_sequence,
    hs_ratio,
    layer_cake_check,
    random_test_function,
    tent,
)
from isodensity.measures import deficit, weighted_perimeter
from isodensity.search import perturbation_scan, two_ball_deficit, two_ball_threshold

REPLAY_DOMAINS = mild_stars(2024, 10)
REPLAY_PS = (-0.5, 0.0, 1.0)


@pytest.fixture(scope="module")
def replays():
    return {(i, p): replay_proof(d, p) for i, d in enumerate(REPLAY_DOMAINS) for p in REPLAY_PS}


@pytest.fixture(scope="module")
def test_functions():
    g = np.random.default_rng(77)
    return [random_test_function(g) for _ in range(100)]


def test_c01_centered_ball_equality(criterion):
    worst = max(abs(deficit(Disk(0j, R), p).deficit)
                for R in (0.5, 1.0, 3.0) for p in (-1.0, -0.5, 0.0, 1.0, 2.5))
    criterion(1, worst <= 1e-9, f"max |deficit| on centred balls = {worst:.2e} (tol 1e-9)")


def test_c02_main_inequality_property_suite(criterion):
    g = np.random.default_rng(1)
    stars = [random_star(g, K=6, a0=float(g.uniform(0.3, 3.0)), spread=0.4) for _ in range(200)]
    inside = min(deficit(d, p).deficit for d in stars for p in (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0))
    free = off_origin_domains(2, 200)
    outside = min(deficit(d, p).deficit for d in free for p in (0.0, 0.5, 1.0, 2.0))
    ok = inside >= -1e-7 and outside >= -1e-7
    criterion(2, ok, f"min deficit origin-stars = {inside:.3e}, origin-free = {outside:.3e} (tol -1e-7)")


def test_c03_two_ball_counterexample(criterion):
    s = two_ball_threshold(1.0, -0.5).separation
    far = two_ball_deficit(1.0, 100.0, -0.5).deficit
    ok = abs(s - 27.94) <= 0.5 and far <= -0.08
    criterion(3, ok, f"s* = {s:.6f} (27.94 +- 0.5), deficit(s=100) = {far:.5f} (<= -0.08)")


def test_c04_conformal_replay(criterion, replays):
    mob = replay_proof(Disk((0.5, 0), 1.0), 1.0)
    ok_mob = abs(abs(mob.lam) - 1) <= 1e-6 and abs(mob.a0 - 0.5) <= 1e-6
    area_err = per_err = 0.0
    chains = True
    for (i, p), rep in replays.items():
        d = REPLAY_DOMAINS[i]
        area_err = max(area_err, abs(rep.area_limit / area(d) - 1))
        per_err = max(per_err, abs(rep.perimeter_limit / weighted_perimeter(d, p) - 1))
        chains &= rep.chain_monotone
    ok = ok_mob and area_err <= 1e-5 and per_err <= 1e-5 and chains
    criterion(4, ok, f"|lambda|-1 = {abs(mob.lam) - 1:.1e}, a0-0.5 = {abs(mob.a0 - 0.5):.1e}; "
                     f"area rel err {area_err:.1e}, perimeter rel err {per_err:.1e}, chain monotone {chains}")


def test_c05_step_bounds(criterion, replays):
    slack_area = slack_lam = math.inf
    for (i, p), rep in replays.items():
        d = REPLAY_DOMAINS[i]
        slack_area = min(slack_area, math.pi * abs(rep.lam) ** 2 + 1e-6 - area(d))
        slack_lam = min(slack_lam, weighted_perimeter(d, p) / (2 * math.pi) + 1e-6
                        - abs(rep.lam) ** (p + 1))
    ok = slack_area >= 0 and slack_lam >= 0
    criterion(5, ok, f"min slack |O| <= pi|lambda|^2: {slack_area:.3e}; "
                     f"|lambda|^(p+1) <= P/2pi: {slack_lam:.3e}")


def test_c06_hardy_sobolev_constant(criterion, test_functions):
    t = hs_ratio(tent(Disk(0j, 1.0)), 0.0).ratio
    ladder = [r for _, r in extremal_sequence(1.0, [0.5, 0.1, 0.02, 0.005])]
    worst = max(hs_ratio(u, p).ratio for u in test_functions for p in (0.0, 0.5, 1.0))
    ok = (abs(t - 2 / math.sqrt(6)) <= 1e-9 and all(np.diff(ladder) > 0)
          and max(ladder) < 1 and ladder[-1] >= 0.995 and worst <= 1 + 1e-7)
    criterion(6, ok, f"tent {t:.12f} vs {2 / math.sqrt(6):.12f}; ladder "
                     f"{', '.join(f'{r:.5f}' for r in ladder)}; max grid ratio {worst:.9f}")


def test_c07_coarea_and_layer_cake(criterion, test_functions):
    coarea_err, slack = 0.0, math.inf
    for u in test_functions:
        for p in (-0.5, 0.0, 0.5, 1.0):
            lhs, rhs = coarea_check(u, p)
            coarea_err = max(coarea_err, abs(lhs / rhs - 1))
            a, b, c = layer_cake_check(u, p)
            slack = min(slack, b - a, c - b)
    ok = coarea_err <= 1e-6 and slack >= -1e-7
    criterion(7, ok, f"coarea max rel err {coarea_err:.2e} (1e-6); layer-cake min slack {slack:.2e} (-1e-7)")


def test_c08_green_identities_and_flucher(criterion):
    greens = [disk_green(1.0), disk_green(2.0), disk_green(1.0, (0.5, 0)), disk_green(1.5, (-0.3, 0.4))]
    greens += [star_green(d) for d in mild_stars(808, 10)]
    flux_err = energy_err = 0.0
    for g in greens:
        for lvl in level_identities(g, [0.0, 0.1, 0.5, 1.0]):
            flux_err = max(flux_err, abs(lvl.flux - 1))
            energy_err = max(energy_err, abs(lvl.energy - lvl.t))
    eq_err = 0.0
    for R in (1.0, 2.0):
        for beta in (0.0, 0.5, 1.0, 2.0):
            rep = flucher_bound(disk_green(R), beta)
            exact = (math.pi * R * R) ** (1 - beta / 2)
            eq_err = max(eq_err, abs(rep.lhs - exact), abs(rep.rhs - exact))
    off = flucher_bound(disk_green(1.0, (0.5, 0)), 0.0)
    ok = (flux_err <= 1e-7 and energy_err <= 1e-6 and eq_err <= 1e-8
          and abs(off.rhs - 5 * math.pi / 3) <= 1e-8 and off.rhs >= math.pi)
    criterion(8, ok, f"flux err {flux_err:.1e}, energy err {energy_err:.1e}, disk equality err "
                     f"{eq_err:.1e}, off-centre rhs - 5pi/3 = {off.rhs - 5 * math.pi / 3:.1e}")


def test_c09_ckn_lattice(criterion):
    mismatches, checked = [], 0
    for k in range(13):
        p = Fraction(-1, 2) + k * Fraction(5, 24)
        for j in range(25):
            q = -1 + j * Fraction(5, 24)
            if (q + 2) / (p + 1) < 1:
                continue
            checked += 1
            band = -2 < p - 1 <= q <= 2 * p
            if ckn_admissible(exponent_map(p, q)) != band:
                mismatches.append((p, q))
    criterion(9, not mismatches, f"{checked} lattice points with r >= 1, {len(mismatches)} mismatches")


def test_c10_determinism(criterion, tmp_path):
    disk = tmp_path / "disk.json"
    disk.write_text('{"kind": "fourier_star", "center": [0, 0], "a0": 1, "cos": [0.1], "sin": [0.05]}')
    commands = [
        ["search", "perturb", "--p", "1", "--n", "25", "--seed", "9"],
        ["replay", "--domain", str(disk), "--p", "0.5"],
        ["verify", "--domain", str(disk), "--p", "-0.5"],
        ["green", "--domain", str(disk), "--beta", "1"],
    ]
    identical = True
    for n, argv in enumerate(commands):
        blobs = []
        for rep in range(2):
            out = tmp_path / f"r{n}_{rep}.json"
            assert main(argv + ["--out", str(out)]) == 0
            blobs.append(out.read_bytes())
        identical &= blobs[0] == blobs[1]
    a = perturbation_scan(0.5, n=30, seed=123)
    b = perturbation_scan(0.5, n=30, seed=123)
    identical &= a.to_csv() == b.to_csv()
    criterion(10, identical, f"{len(commands) + 1} report pairs byte-identical: {identical}")

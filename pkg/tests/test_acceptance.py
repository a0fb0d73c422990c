"""Acceptance gate: one test per release criterion, each printing a
single PASS/FAIL line with its measured numbers.

Run as part of the normal suite; the printed lines bypass output capture so
they are always visible.
"""

import json
import shutil
import time

import numpy as np
import pytest

from strainmix import (
    TransportTarget,
    estimate_aware,
    estimate_blind,
    fixture_path,
    mixture_given_infection,
    monte_carlo_study,
    oracle_contrast,
    s_b,
    s_c,
    s_conf,
    s_two_outcomes,
    sample_cohort,
    standardized_contrast,
    target_from_scenario,
    transport_contrast,
    version_irrelevance_check,
)
from strainmix.cli import run_command
from tests.conftest import MASTER_SEED, random_scenario, rng_for
from tests.props import (
    identity_deviation,
    monotonicity_deviation,
    refine_strain,
    relabel_strains,
)

TOL = 1e-12


def report(capsys, index: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"[criterion {index}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_1_identity_suite(capsys):
    start = time.perf_counter()
    worst = 0.0
    for case in range(1000):
        scenario = random_scenario(rng_for(case), two_outcomes=case % 4 == 0)
        for outcome in scenario.outcomes:
            worst = max(worst, identity_deviation(scenario, outcome))
    elapsed = time.perf_counter() - start
    ok = worst <= TOL and elapsed < 10.0
    report(capsys, 1, ok,
           f"identity suite on 1000 random scenarios: max deviation "
           f"{worst:.2e} (tol 1e-12), {elapsed:.1f}s (limit 10s)")


def test_criterion_2_composition_effect(capsys):
    cb = standardized_contrast(s_b(), "hosp")
    cc = standardized_contrast(s_c(), "hosp")
    checks = [
        abs(cb - 0.16) <= TOL,
        abs(cc - 0.28) <= TOL,
        abs(cb - oracle_contrast(s_b(), "hosp")) <= TOL,
        abs(cc - oracle_contrast(s_c(), "hosp")) <= TOL,
        cc > cb,
    ]
    report(capsys, 2, all(checks),
           f"composition effect: S_B contrast {cb:.6g} = 0.16, S_C contrast "
           f"{cc:.6g} = 0.28, S_C > S_B, both matching the oracle to 1e-12")


def test_criterion_3_confounded_fixture(capsys):
    from strainmix import decompose_contrast

    contrast = standardized_contrast(s_conf(), "hosp")
    terms = decompose_contrast(s_conf(), "hosp").terms
    young = sum(t.contribution for t in terms if t.stratum == "young")
    old = sum(t.contribution for t in terms if t.stratum == "old")
    checks = [
        abs(contrast - 0.072) <= TOL,
        abs(contrast - oracle_contrast(s_conf(), "hosp")) <= TOL,
        abs(young - 0.032) <= TOL,
        abs(old - 0.040) <= TOL,
    ]
    report(capsys, 3, all(checks),
           f"confounded fixture: contrast {contrast:.6g} = 0.072 vs oracle, "
           f"per-stratum contributions {young:.6g} = 0.032 and {old:.6g} = 0.040")


def test_criterion_4_transport_suite(capsys):
    to_sc = transport_contrast(s_b(), "hosp", target_from_scenario(s_c()))
    effects_transported_ok = abs(to_sc.target_contrast - 0.28) <= TOL

    zero_divergence_exact = True
    necessity_ok = True
    differing = 0
    for case in range(200):
        rng = rng_for(100_000 + case)
        scenario = random_scenario(rng)
        weights = {st.label: st.weight for st in scenario.strata}
        self_mix = {st.label: mixture_given_infection(scenario, st.label)[1]
                    for st in scenario.strata}
        self_report = transport_contrast(scenario, "y",
                                         TransportTarget(weights, self_mix))
        if (self_report.target_contrast != self_report.source_contrast
                or self_report.weight_divergence != 0.0
                or any(d != 0.0 for d in self_report.mixture_divergence.values())):
            zero_divergence_exact = False

        strains = sorted({k for st in scenario.strata for k in st.strains()})
        w = rng.dirichlet(np.ones(len(scenario.strata)))
        rand_weights = {st.label: float(w[i]) for i, st in enumerate(scenario.strata)}
        rand_mix = {st.label: {k: float(p) for k, p in
                               zip(strains, rng.dirichlet(np.ones(len(strains))))}
                    for st in scenario.strata}
        rand_report = transport_contrast(scenario, "y",
                                         TransportTarget(rand_weights, rand_mix))
        if abs(rand_report.target_contrast - rand_report.source_contrast) > 1e-9:
            differing += 1
            if (rand_report.weight_divergence <= 0.0
                    and max(rand_report.mixture_divergence.values()) <= 0.0):
                necessity_ok = False
    ok = (effects_transported_ok and zero_divergence_exact and necessity_ok
          and differing >= 50)
    report(capsys, 4, ok,
           f"transport: S_B effects under S_C mixture give "
           f"{to_sc.target_contrast:.6g} = 0.28; zero-divergence transport exact "
           f"on 200 scenarios; divergence necessary in all {differing} "
           f"differing randomized cases")


def test_criterion_5_perturbation_properties(capsys):
    worst_mono = 0.0
    checked = case = 0
    while checked < 500:
        rng = rng_for(200_000 + case)
        case += 1
        scenario = random_scenario(rng)
        dev = monotonicity_deviation(rng, scenario, "y")
        if dev is None:
            continue
        worst_mono = max(worst_mono, dev)
        checked += 1

    worst_refine = 0.0
    for case in range(500):
        rng = rng_for(300_000 + case)
        scenario = random_scenario(rng)
        refined = refine_strain(rng, scenario)
        worst_refine = max(worst_refine, abs(
            standardized_contrast(refined, "y")
            - standardized_contrast(scenario, "y")))

    worst_relabel = 0.0
    for case in range(500):
        rng = rng_for(400_000 + case)
        scenario = random_scenario(rng)
        renamed = relabel_strains(rng, scenario)
        worst_relabel = max(worst_relabel, abs(
            standardized_contrast(renamed, "y")
            - standardized_contrast(scenario, "y")))

    ok = max(worst_mono, worst_refine, worst_relabel) <= TOL
    report(capsys, 5, ok,
           f"500 trials each: monotone mass transfer max dev {worst_mono:.2e}, "
           f"refinement max dev {worst_refine:.2e}, relabel max dev "
           f"{worst_relabel:.2e} (tol 1e-12)")


def test_criterion_6_estimator_convergence(capsys):
    start = time.perf_counter()
    cohort = sample_cohort(s_b(), 1_000_000, MASTER_SEED)
    blind_dev = abs(estimate_blind(cohort, "hosp").estimate - 0.16)
    effects = {e.version: e.effect
               for e in estimate_aware(cohort, "hosp").effects}
    aware_devs = (abs(effects["s1"] - 0.20), abs(effects["s2"] - 0.0),
                  abs(effects["s3"] - 0.40))

    mc10 = monte_carlo_study(s_b(), "hosp", 10_000, 200, MASTER_SEED, workers=4)
    mc40 = monte_carlo_study(s_b(), "hosp", 40_000, 200, MASTER_SEED, workers=4)
    bias_limit = 3 * mc10.empirical_se / np.sqrt(200)
    ratio = mc10.empirical_se / mc40.empirical_se
    elapsed = time.perf_counter() - start

    ok = (blind_dev < 0.005 and all(d < 0.01 for d in aware_devs)
          and abs(mc10.mean_bias) < bias_limit and 1.6 <= ratio <= 2.5
          and elapsed < 60.0)
    report(capsys, 6, ok,
           f"estimators at n=1e6: blind dev {blind_dev:.2e} (<0.005), aware "
           f"effect devs {max(aware_devs):.2e} (<0.01); Monte Carlo "
           f"|mean bias| {abs(mc10.mean_bias):.2e} < {bias_limit:.2e}, SE "
           f"ratio {ratio:.2f} in [1.6, 2.5]; {elapsed:.1f}s (limit 60s)")


def test_criterion_7_irrelevance_outcome_dependence(capsys):
    scenario = s_two_outcomes()
    fever = version_irrelevance_check(scenario, "fever", TOL)
    hosp = version_irrelevance_check(scenario, "hosp", TOL)
    ok = fever.irrelevant and not hosp.irrelevant
    report(capsys, 7, ok,
           f"two-outcome fixture: strain identity irrelevant for fever "
           f"({fever.irrelevant}), compound for hosp (irrelevant="
           f"{hosp.irrelevant})")


def test_criterion_8_cli_determinism(capsys, tmp_path):
    scenario = tmp_path / "s_b.json"
    shutil.copyfile(fixture_path("s_b"), scenario)
    schedule = tmp_path / "schedule.json"
    schedule.write_text(json.dumps([
        {"time": 0, "strata": [{"label": "l0",
                                "versions": {"s1": 0.2, "s2": 0.5, "s3": 0.3}}]},
        {"time": 1, "strata": [{"label": "l0",
                                "versions": {"s1": 0.4, "s2": 0.1, "s3": 0.5}}]},
    ]))
    commands = {
        "exact": ["exact", "--scenario", str(scenario), "--format", "json"],
        "decompose": ["decompose", "--scenario", str(scenario), "--format", "csv"],
        "simulate": ["simulate", "--scenario", str(scenario), "--n", "50000",
                     "--seed", "7", "--format", "csv"],
        "aware": ["aware", "--scenario", str(scenario), "--n", "20000",
                  "--seed", "7", "--format", "json"],
        "drift": ["drift", "--scenario", str(scenario), "--schedule",
                  str(schedule), "--format", "csv"],
        "chart": ["chart", "--scenario", str(scenario)],
        "mc-serial": ["mc", "--scenario", str(scenario), "--n", "5000",
                      "--reps", "40", "--seed", "11", "--workers", "1"],
        "mc-concurrent": ["mc", "--scenario", str(scenario), "--n", "5000",
                          "--reps", "40", "--seed", "11", "--workers", "4"],
    }
    stable = []
    outputs = {}
    for name, argv in commands.items():
        a = tmp_path / f"{name}-a.out"
        b = tmp_path / f"{name}-b.out"
        code_a = run_command([*argv, "--out", str(a)])
        code_b = run_command([*argv, "--out", str(b)])
        same = code_a == code_b == 0 and a.read_bytes() == b.read_bytes()
        stable.append(same)
        outputs[name] = a.read_bytes()
    concurrent_matches_serial = outputs["mc-serial"] == outputs["mc-concurrent"]
    ok = all(stable) and concurrent_matches_serial
    report(capsys, 8, ok,
           f"CLI determinism: {sum(stable)}/{len(stable)} commands "
           f"byte-identical on repeat; concurrent Monte Carlo matches serial: "
           f"{concurrent_matches_serial}")

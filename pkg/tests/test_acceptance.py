"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is repeated in the terminal summary.
"""

import json
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import rand_sym, record
from oracles import sturm_signature
from quadtope.agrachev import OracleConfig, audit_A_equals_B, audit_C_prime, oracle_A
from quadtope.fibers import (
    EXAMPLES,
    Atom,
    BoundParams,
    FiberProblem,
    Or,
    bound_main,
    bound_others,
    census,
    closed_form_betti,
    example_family,
    fiber_invariant,
    lattice_fiber_b0,
    representatives,
    wall_sweep,
)
from quadtope.homology import alexander_audit, hocolim_audit, mv_audit, random_complex, random_cover
from quadtope.qform import QuadFamily, QuadForm, char_poly, index_descartes, omega_combine, signature_of
from quadtope.signcond import DEFAULT_ETA, build_ladder, disjointness_audit, h_values, omega_x_samples, sign_of
from quadtope.strata import retract_step

AGRACHEV_CFG = OracleConfig(tau=0.02)


def diag_family(*diags, k=0):
    return QuadFamily([np.diag(d).astype(int).tolist() for d in diags], k=k)


def test_c01_index_engine():
    g = np.random.default_rng(1)
    start = time.perf_counter()
    bad = 0
    for i in range(500):
        n = 2 + i % 7
        m = rand_sym(g, n)
        if i % 5 == 0:
            # force a kernel: repeat a row/column
            for j in range(n):
                m[j][n - 1] = m[j][0]
            for j in range(n):
                m[n - 1][j] = m[0][j]
            m[n - 1][n - 1] = m[0][0]
        ix = index_descartes(char_poly(QuadForm(m)))
        if (ix.neg, ix.zero, ix.pos) != sturm_signature(m):
            bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 60
    record(1, ok, f"500 matrices, {bad} disagreements, {elapsed:.1f}s")
    assert ok


def test_c02_sign_vector_determines_index():
    violations = 0
    groups_total = 0
    for name in EXAMPLES:
        fam = example_family(name).problem.family
        I = tuple(range(1, fam.m + 1))
        groups = {}
        for w, x in omega_x_samples(fam, I, 10_000, seed=0):
            s = tuple(sign_of(v) for v in h_values(fam, w, x))
            groups.setdefault(s, set()).add(sturm_signature(omega_combine(fam, w, x).matrix)[0])
        violations += sum(len(v) - 1 for v in groups.values())
        groups_total += len(groups)
    ok = violations == 0
    record(2, ok, f"{len(EXAMPLES)} families x 10000 samples, {groups_total} sign vectors, {violations} violations")
    assert ok


def test_c03_single_quadric_closed_form():
    g = np.random.default_rng(3)
    done = mismatches = 0
    while done < 50:
        l = int(g.integers(1, 4))
        m = rand_sym(g, l + 1)
        ev = np.linalg.eigvalsh(np.array(m, dtype=float))
        # documented gap guard: sampling cannot see sets thinner than the slack
        if np.min(np.abs(ev)) < 0.05 * np.max(np.abs(ev)):
            continue
        done += 1
        fam = QuadFamily([m])
        got = fiber_invariant(FiberProblem(fam, Or((Atom(1), Atom(1)))), ()).betti
        if got != closed_form_betti(signature_of(fam.form(0, ()))):
            mismatches += 1
    ok = mismatches == 0
    record(3, ok, f"50 forms (l <= 3, default budgets), {mismatches} mismatches")
    assert ok


def _agrachev_fixtures():
    out = [(f"index {k}", diag_family([-1] * k + [1] * (3 - k)), (), (1,)) for k in range(4)]
    out.append(("diagonal pencil", diag_family([1, 1, -1], [-1, 1, 1]), (), (1, 2)))
    sp = example_family("single-pencil").problem.family
    out += [(f"single-pencil x={x}", sp, (x,), (1,)) for x in (-1, 1)]
    wp = example_family("wall-pencil")
    out += [(f"wall-pencil {p}", wp.problem.family, p, (1, 2)) for p in wp.points]
    return out


def test_c04_agrachev_chain():
    failed = []
    n = 0
    for name, fam, x, I in _agrachev_fixtures():
        n += 1
        if not audit_A_equals_B(fam, x, I, AGRACHEV_CFG).ok:
            failed.append(f"A=B {name}")
    c_cases = [(f"m=1 index {k}", diag_family([-1] * k + [1] * (3 - k)), (1,)) for k in range(4)]
    c_cases.append(("diagonal pencil", diag_family([1, 1, -1], [-1, 1, 1]), (1, 2)))
    for name, fam, I in c_cases:
        for depth in (2, 3):
            n += 1
            if not audit_C_prime(fam, (), I, depth, AGRACHEV_CFG).ok:
                failed.append(f"C' {name} depth {depth}")
    ok = not failed
    record(4, ok, f"{n} audits, failed: {failed or 'none'}")
    assert ok


def test_c05_hocolim():
    start = time.perf_counter()
    bad = 0
    for seed in range(50):
        g = np.random.default_rng(1000 + seed)
        K = random_complex(g, int(g.integers(10, 15)), int(g.integers(15, 30)), 2)
        if not hocolim_audit(random_cover(g, K, int(g.integers(2, 5)))).ok:
            bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 120
    record(5, ok, f"50 covers, {bad} mismatches, {elapsed:.1f}s")
    assert ok


def test_c06_mayer_vietoris():
    violations = 0
    for seed in range(50):
        g = np.random.default_rng(2000 + seed)
        K = random_complex(g, int(g.integers(10, 15)), int(g.integers(15, 30)), 2)
        parts = random_cover(g, K, int(g.integers(2, 5))).parts
        violations += len(mv_audit(parts, 3).violations)
    ok = violations == 0
    record(6, ok, f"50 systems, {violations} violations")
    assert ok


def test_c07_retraction():
    g = np.random.default_rng(7)
    worst_norm = worst_zero = 0.0
    identity_exact = True
    for _ in range(10_000):
        n = int(g.integers(2, 9))
        j = int(g.integers(1, n))
        w = g.standard_normal(n)
        w /= np.linalg.norm(w)
        t = float(g.uniform())
        worst_norm = max(worst_norm, abs(np.linalg.norm(retract_step(w, j, t)) - 1))
        identity_exact &= np.array_equal(retract_step(w, j, 0.0), w)
        worst_zero = max(worst_zero, float(np.max(np.abs(retract_step(w, j, 1.0)[:j]))))
    ok = worst_norm <= 1e-12 and worst_zero <= 1e-12 and identity_exact
    record(7, ok, f"10000 steps, norm err {worst_norm:.1e}, t=1 residue {worst_zero:.1e}, t=0 exact {identity_exact}")
    assert ok


def test_c08_disjointness():
    total = 0
    violations = 0
    for name in EXAMPLES:
        fam = example_family(name).problem.family
        I = tuple(range(1, fam.m + 1))
        rep = disjointness_audit(fam, I, build_ladder(fam.l, DEFAULT_ETA), omega_x_samples(fam, I, 1000, seed=0))
        total += rep.checked
        violations += len(rep.violations)
    ok = violations == 0
    record(8, ok, f"eta = {DEFAULT_ETA}, {total} checks on {len(EXAMPLES)} families, {violations} violations")
    assert ok


def _census(ex, resolution, cfg):
    walls, _ = wall_sweep(ex.problem, ex.segment, resolution, cfg=cfg)
    return walls, census(ex.problem, representatives(walls, ex.segment), cfg, walls=walls)


def test_c09_census():
    notes = []
    ok = True
    bc = example_family("binary-components")
    l = bc.problem.family.l
    walls, rep = _census(bc, 16, bc.config)
    b0 = sorted((inv.betti.b[0] if inv.betti.b else 0) for inv in rep.all_invariants())
    truth = sorted({lattice_fiber_b0(x[0], 2) for x in rep.representatives} | {lattice_fiber_b0(w, 2) for w in walls})
    ok &= rep.distinct_count == 5 and sorted(set(b0)) == [0, 1, 2, 3, 4] == truth
    walls2, rep2 = _census(bc, 32, bc.config.doubled(l))
    ok &= walls2 == walls and rep2.distinct_count == rep.distinct_count
    notes.append(f"binary-components distinct {rep.distinct_count} b0 {sorted(set(b0), reverse=True)}")

    sp = example_family("single-pencil")
    walls, rep = _census(sp, 16, sp.config)
    ok &= rep.distinct_count == 2 and len(walls) == 1 and abs(walls[0]) <= Fraction(1, 10**6)
    walls2, rep2 = _census(sp, 32, sp.config.doubled(sp.problem.family.l))
    ok &= walls2 == walls and rep2.distinct_count == rep.distinct_count
    notes.append(f"single-pencil distinct {rep.distinct_count} walls {[str(w) for w in walls]}")
    record(9, ok, "; ".join(notes) + ", stable under doubling")
    assert ok


BOUND_TUPLES = [
    # (m, l, k, d, C) -> main, barvinok, general by hand
    ((2, 3, 1, 1, 1), 144, 36, 4096),
    ((1, 1, 1, 1, 1), 2, 1, 2),
    ((1, 2, 1, 1, 1), 4, 2, 16),
    ((2, 1, 1, 1, 1), 16, 4, 4),
    ((1, 1, 2, 1, 1), 16, 1, 16),
    ((2, 2, 1, 2, 1), 256, 16, 256),
    ((3, 1, 1, 1, 1), 512, 27, 6),
    ((1, 3, 1, 1, 1), 6, 3, 512),
    ((2, 2, 2, 1, 1), 16**4, 16, 16**4),
    ((2, 3, 1, 1, Fraction(1, 2)), 12, 6, 64),
]


def test_c10_bounds():
    mismatches = []
    for (m, l, k, d, C), main, barv, gen in BOUND_TUPLES:
        p = BoundParams(m, l, k, d, C)
        got = (bound_main(p), *bound_others(p, which=("barvinok", "general")).values())
        if got != (main, barv, gen):
            mismatches.append(((m, l, k, d, str(C)), got))
    metric_ok = bound_others(BoundParams(2, 3, 1, 1), M=2, which=("metric",))["metric"] == 2**9
    proj_ok = bound_others(BoundParams(1, 1, 1, 1), n=2, s=1, which=("projection",))["projection"] == 2**3
    empirical = {}
    for name in EXAMPLES:
        ex = example_family(name)
        fam = ex.problem.family
        T = ex.points or representatives([Fraction(w) for w in ex.expected.get("walls", [])], ex.segment)
        rep = census(ex.problem, T, ex.config)
        empirical[name] = (rep.distinct_count, rep.bound_comparisons["bounds"]["main"])
    within = all(d <= int(b) for d, b in empirical.values())
    ok = not mismatches and metric_ok and proj_ok
    record(10, ok, f"10 tuples, mismatches {mismatches or 'none'}; distinct <= main (C=1) on all families: {within}")
    assert ok and within


def test_c11_alexander():
    fam = diag_family([1, 1, -1])
    orc = oracle_A(fam, (), (1,), OracleConfig())
    rep = alexander_audit(orc.betti(), orc.complement_betti(), 2)
    ok = rep.ok and orc.betti().b == (2,)
    record(11, ok, f"set {orc.betti().b}, complement {orc.complement_betti().b}")
    assert ok


def test_c12_sweep_determinism(tmp_path):
    exe = [sys.executable, "-m", "quadtope.cli"]
    bundle = json.dumps(example_family("single-pencil").to_json())
    # --out is part of the run configuration, so both runs write the same path
    path = tmp_path / "sweep.json"
    outs = []
    for _ in range(2):
        subprocess.run(exe + ["sweep", "--seed", "4", "--resolution", "16", "--out", str(path)],
                       input=bundle, text=True, check=True)
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and b'"walls"' in outs[0]
    record(12, ok, f"two sweeps, {len(outs[0])} bytes each, identical {outs[0] == outs[1]}")
    assert ok

"""Acceptance criteria 1-10, each checked at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
terminal summary. Run directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import time

import numpy as np
import pytest

from mdl import catalog
from mdl.axioms import AxiomSpec, gamma_m, reduced_tree, build_eta
from mdl.constructions import (
    build_bundle,
    c1_sample_check,
    k1_isomorphism,
    pseudoproduct,
    refuting_valuation,
    verify_complete1,
    verify_rank1,
)
from mdl.graphs import complete_graph, cycle_graph, find_colouring, mycielski_tower
from mdl.minimizer import (
    classify,
    entails_globally,
    entails_locally,
    find_countermodel,
    is_globally_minimal,
    is_locally_minimal,
    random_diagram,
    random_frame,
)
from mdl.semantics import (
    Valuation,
    eval_batch,
    gamma_semantic,
    is_isomorphism,
    refute_at,
    satisfies_e,
)
from mdl.ultrafilter import ue_related, ultrafilter_extension_finite

RESULTS: list[str] = []


def report(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS.append(line)
    print(line)


@pytest.fixture(scope="module")
def diagrams():
    return {name: catalog.load(name) for name in catalog.names()}


def test_criterion_01_dichotomy(diagrams):
    expected = {"D_sym": "POSITIVE", "D_chain": "POSITIVE", "D_refsucc": "NEGATIVE", "D_tri": "NEGATIVE", "D_fig3": "NEGATIVE"}
    rows, ok = [], True
    for name, want in expected.items():
        t0 = time.perf_counter()
        got = classify(diagrams[name]).classification
        dt = time.perf_counter() - t0
        ok &= got == want and dt < 5
        rows.append(f"{name}={got} ({dt:.2f}s)")
    report(1, ok, ", ".join(rows))
    assert ok


def test_criterion_02_chain_minimality(diagrams):
    t0 = time.perf_counter()
    local = is_locally_minimal(diagrams["D_chain"])
    glob = is_globally_minimal(diagrams["D_chain"])
    dt = time.perf_counter() - t0
    ok = local is True and glob is False and dt < 1
    report(2, ok, f"D_chain locally minimal={local}, globally minimal={glob} ({dt:.3f}s)")
    assert ok


def test_criterion_03_rank1(diagrams):
    t0 = time.perf_counter()
    rows, ok = [], True
    for name in ("D_refsucc", "D_tri", "D_fig3"):
        rep = verify_rank1(diagrams[name], build_bundle(diagrams[name]))
        failed = [c.name for c in rep.conditions if not c.passed]
        ok &= not failed
        rows.append(f"{name}: {'all of C-i..C-vi' if not failed else 'failed ' + ','.join(failed)}, {rep.hom_count} homs")
        if name == "D_tri":
            ok &= rep["C-v"].detail["homomorphisms"] == 2
    dt = time.perf_counter() - t0
    ok &= dt < 30
    report(3, ok, "; ".join(rows) + f" ({dt:.2f}s)")
    assert ok


def test_criterion_04_soundness(diagrams):
    t0 = time.perf_counter()
    rng = random.Random(20240)
    rows, ok = [], True
    for name, d in diagrams.items():
        phi = gamma_m(AxiomSpec.for_diagram(d), 2)
        checked = violations = 0
        for _ in range(100):
            f = random_frame(rng, rng.randint(1, 6), d.labels, rng.choice((0.3, 0.5, 0.7, 0.9)))
            for w in f.points:
                if satisfies_e(f, w, d) is None:
                    continue
                checked += 1
                violations += refute_at(f, w, phi, budget=2**24) is not None
        ok &= violations == 0 and checked > 0
        rows.append(f"{name}: {checked} points, {violations} violations")
    dt = time.perf_counter() - t0
    ok &= dt < 120
    report(4, ok, "100 frames each; " + "; ".join(rows) + f" ({dt:.1f}s)")
    assert ok


@pytest.mark.parametrize("name,b,m", [("D_tri", 4, 7), ("D_refsucc", 3, 5)])
def test_criterion_05_c2(diagrams, name, b, m):
    d = diagrams[name]
    bundle = build_bundle(d)
    graph = complete_graph(2)
    valuation, m_got = refuting_valuation(bundle, graph, find_colouring(graph, 2), 2)
    frame = pseudoproduct(bundle, graph).frame
    spec = AxiomSpec.for_diagram(d)
    t0 = time.perf_counter()
    holds = gamma_semantic(frame, 0, spec, m_got, valuation)
    dt = time.perf_counter() - t0
    ok = bundle.b == b and m_got == m and not holds and dt < 1
    report(5, ok, f"{name} b={bundle.b} K_2: gamma_{m_got} {'refuted' if not holds else 'holds'} at w0 ({dt:.3f}s)")
    assert ok


def test_criterion_06_c1(diagrams):
    t0 = time.perf_counter()
    rows, ok = [], True
    for name, n, samples in (("D_refsucc", 9, 1000), ("D_tri", 17, 200)):
        bundle = build_bundle(diagrams[name])
        assert n > 2 ** (bundle.b * 1)
        rep = c1_sample_check(bundle, complete_graph(n), k=1, m=2, samples=samples, seed=1)
        ok &= rep.holds and rep.samples == samples
        rows.append(
            f"{name} K_{n}: {rep.samples} samples, guard active at w0 in {rep.active_at_root}, "
            + ("no counterexample" if rep.holds else f"counterexample {rep.counterexample}")
        )
    dt = time.perf_counter() - t0
    ok &= dt < 120
    report(6, ok, "; ".join(rows) + f" ({dt:.1f}s)")
    assert ok


def test_criterion_07_complete1(diagrams):
    t0 = time.perf_counter()
    negative = [name for name, d in diagrams.items() if classify(d).classification == "NEGATIVE"]
    rows, ok = [], bool(negative)
    for name in negative:
        rep = verify_complete1(diagrams[name], build_bundle(diagrams[name]), 6)
        root_ok = all(r["root_refuted"] for r in rep.rows)
        ok &= root_ok and len(rep.rows) == 6
        rows.append(f"{name}: e^D(w0) {'refuted' if root_ok else 'satisfied'} for alpha 1..6")
    dt = time.perf_counter() - t0
    ok &= dt < 30
    report(7, ok, "; ".join(rows) + f" ({dt:.2f}s)")
    assert ok


def _all_valuations(n_points, m):
    bits = m * n_points
    for code in range(1 << bits):
        yield Valuation({i + 1: {p for p in range(n_points) if code >> (i * n_points + p) & 1} for i in range(m)})


def test_criterion_08a_gamma_semantic_oracle(diagrams):
    t0 = time.perf_counter()
    rng = random.Random(88)
    names = sorted(diagrams)
    specs = {name: AxiomSpec.for_diagram(diagrams[name]) for name in names}
    trees = {name: reduced_tree(build_eta(specs[name])) for name in names}
    checks = disagreements = 0
    for _ in range(200):
        name = rng.choice(names)
        m = rng.randint(1, 2)
        f = random_frame(rng, rng.randint(1, 4), ("a",), rng.choice((0.3, 0.5, 0.7, 0.9)))
        phi = gamma_m(specs[name], m)
        vals = list(_all_valuations(f.size, m))
        batch = {
            i: np.array([[p in v(i) for p in f.points] for v in vals], dtype=bool) for i in range(1, m + 1)
        }
        expanded = eval_batch(f, batch, phi)
        for row, v in enumerate(vals):
            for w in f.points:
                checks += 1
                disagreements += gamma_semantic(f, w, specs[name], m, v, trees[name]) != bool(expanded[row, w])
    dt = time.perf_counter() - t0
    ok = disagreements == 0
    report(8, ok, f"(a) 200 instances, {checks} (valuation, point) checks, {disagreements} disagreements ({dt:.1f}s)")
    assert ok


def _projection_edges(bundle, pp, graph):
    fp, fm = bundle.f_plus, bundle.f_minus
    pairs = {q for u, v in graph.edges for q in ((u, v), (v, u))}
    out = set()
    for a, c in itertools.product(pp.frame.points, repeat=2):
        ya, yc, ha, hc = pp.pr[a], pp.pr[c], pp.h[a], pp.h[c]
        for lab in fp.labels:
            if fm.has_edge(ya, yc, lab) and (ha is None or hc is None or ha == hc):
                out.add((a, c, lab))
            elif fp.has_edge(ya, yc, lab) and not fm.has_edge(ya, yc, lab) and None not in (ha, hc) and (ha, hc) in pairs:
                out.add((a, c, lab))
    return out


def test_criterion_08b_pseudoproduct_definitions(diagrams):
    graphs = [complete_graph(n) for n in (1, 2, 3, 4)] + [cycle_graph(5), mycielski_tower(4)]
    built = mismatches = 0
    for name in ("D_refsucc", "D_tri", "D_fig3"):
        bundle = build_bundle(diagrams[name])
        for g in graphs:
            if name == "D_fig3" and g.order > 3:
                continue
            pp = pseudoproduct(bundle, g)
            built += 1
            mismatches += set(pp.frame.edges) != _projection_edges(bundle, pp, g)
    ok = mismatches == 0 and built > 0
    report(8, ok, f"(b) {built} pseudoproducts, five-clause vs projection mismatches: {mismatches}")
    assert ok


def test_criterion_08c_k1_isomorphism(diagrams):
    rows, ok = [], True
    for name in ("D_refsucc", "D_tri", "D_fig3"):
        bundle = build_bundle(diagrams[name])
        iso = k1_isomorphism(bundle)
        good = iso is not None and is_isomorphism(bundle.f_minus, pseudoproduct(bundle, complete_graph(1)).frame, iso)
        ok &= good
        rows.append(f"{name} {'verified' if good else 'missing'}")
    report(8, ok, "(c) pseudoproduct with K_1 isomorphic to F_-: " + ", ".join(rows))
    assert ok


def test_criterion_09_ultrafilters():
    t0 = time.perf_counter()
    rng = random.Random(9)
    failures = 0
    for _ in range(100):
        labels = ("a", "b")[: rng.randint(1, 2)]
        f = random_frame(rng, rng.randint(1, 5), labels, rng.random())
        ue = ultrafilter_extension_finite(f)
        pairs = all(
            f.has_edge(a, c, lab) == ue_related(f, lab, ue.ultrafilters[a], ue.ultrafilters[c])
            for lab in labels
            for a in f.points
            for c in f.points
        )
        failures += not (ue.is_isomorphism_to(f) and pairs)
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 10
    report(9, ok, f"100 frames, {failures} failures ({dt:.2f}s)")
    assert ok


def test_criterion_10_entailment(diagrams):
    t0 = time.perf_counter()
    rng = random.Random(10)
    pairs = list(itertools.product(diagrams.values(), repeat=2))
    cat_pairs = len(pairs)
    for i in range(100):
        labels = ("a",) if i % 2 else ("a", "b")
        pairs.append((random_diagram(rng, 4, labels), random_diagram(rng, 4, labels)))
    broken = sum(1 for d1, d2 in pairs if entails_locally(d1, d2) and not entails_globally(d1, d2))
    survived = countered = 0
    for d1, d2 in pairs[:cat_pairs]:
        if entails_globally(d1, d2):
            if find_countermodel(d1, d2, count=500, seed=rng.randrange(1 << 30)) is None:
                survived += 1
            else:
                countered += 1
    dt = time.perf_counter() - t0
    ok = broken == 0 and countered == 0 and dt < 120
    report(
        10, ok,
        f"{len(pairs)} pairs, {broken} local-without-global; {survived} global verdicts survive 500 frames, "
        f"{countered} refuted ({dt:.1f}s)",
    )
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))

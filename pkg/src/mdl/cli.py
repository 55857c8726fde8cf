"""Command-line front end.

Exit status: 0 when every check passes, 1 when a verified property fails,
2 for usage, parse and budget errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Callable, Sequence

from . import catalog
from .axioms import EXPANSION_CAP, AxiomSpec, build_eta, gamma_m, reduced_tree
from .constructions import (
    build_bundle,
    c1_sample_check,
    pseudoproduct,
    refuting_valuation,
    verify_complete1,
    verify_rank1,
)
from .diagram import Diagram, Frame, to_dsl
from .dot import bundle_to_dot, diagram_to_dot, frame_to_dot, pseudoproduct_to_dot
from .errors import MdlError
from .formulas import render
from .graphs import chromatic_number, find_colouring, graph_from_selector
from .minimizer import (
    SCHEMA_VERSION,
    Step,
    classify,
    entails_globally,
    entails_locally,
    is_globally_minimal,
    is_locally_minimal,
    minimize,
    minimize_all_orders,
    random_frame,
    try_delete,
)
from .semantics import VALUATION_BUDGET, gamma_semantic, refute_at, satisfies_e
from .ultrafilter import ue_related, ultrafilter_extension_finite

SUITES = ("soundness", "c2", "c1", "complete1", "uf3", "minimality")


class Outcome:
    """A report plus whether every check in it passed."""

    def __init__(self, payload: dict, text: str, ok: bool = True, dot: str | None = None, latex: str | None = None):
        self.payload = {"schema": SCHEMA_VERSION, **payload}
        self.text = text
        self.ok = ok
        self.dot = dot
        self.latex = latex


def _emit(out: Outcome, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.payload, sort_keys=True, indent=2) + "\n"
    if fmt == "dot":
        if out.dot is None:
            raise MdlError("this command has no DOT output")
        return out.dot
    if fmt == "latex":
        if out.latex is None:
            raise MdlError("this command has no LaTeX output")
        return out.latex + "\n"
    return out.text if out.text.endswith("\n") else out.text + "\n"


def _spec(args, d: Diagram) -> AxiomSpec:
    return AxiomSpec.for_diagram(d, guard_depth=args.guard_depth)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_classify(args) -> Outcome:
    v = classify(args.diagram)
    lines = [f"class: {v.classification}", f"inner_cycle: {str(v.inner_cycle).lower()}", "minimal:"]
    lines += ["  " + ln for ln in to_dsl(v.minimal_diagram).splitlines()]
    lines += [f"{k}: {s}" for k, s in v.property_table.items()]
    return Outcome(v.to_json(), "\n".join(lines), dot=diagram_to_dot(v.minimal_diagram, "minimal"))


def cmd_minimize(args) -> Outcome:
    trace: list[Step] = []
    m = minimize(args.diagram, trace=trace)
    payload: dict[str, Any] = {"minimal": to_dsl(m), "steps": [s.to_json() for s in trace]}
    text = to_dsl(m)
    if args.all_orders:
        results = sorted(minimize_all_orders(args.diagram, max_edges=args.max_size), key=to_dsl)
        payload["all_orders"] = [to_dsl(r) for r in results]
        text += f"# {len(results)} distinct fixpoint(s) over all deletion orders\n"
    return Outcome(payload, text, dot=diagram_to_dot(m, "minimal"))


def cmd_axioms(args) -> Outcome:
    spec = _spec(args, args.diagram)
    phi = gamma_m(spec, args.m, cap=args.cap_expansion)
    payload = {
        "m": args.m,
        "guard_depth": spec.guard_depth,
        "disjuncts": args.m ** spec.n_points,
        "formula": render(phi),
    }
    return Outcome(payload, render(phi), latex=render(phi, "latex"))


def cmd_eta(args) -> Outcome:
    spec = _spec(args, args.diagram)
    eta = build_eta(spec)
    tree = reduced_tree(eta)
    labels = [sorted(f"x{i}" for i in lbl) for lbl in tree.label_map]
    payload = {
        "eta": render(eta),
        "tree": {"points": tree.size, "edges": [list(e) for e in sorted(tree.edges)], "labels": labels},
    }
    lines = [render(eta), f"reduced tree: {tree.size} points"]
    lines += [f"  t{s} -{lab}-> t{t}" for s, t, lab in sorted(tree.edges)]
    lines += [f"  t{i}: {{{', '.join(lbl)}}}" for i, lbl in enumerate(labels)]
    names = tuple(f"t{i}:{'/'.join(lbl) or '-'}" for i, lbl in enumerate(labels))
    dot = frame_to_dot(Frame(tree.size, frozenset(tree.edges), names), "reduced_tree")
    return Outcome(payload, "\n".join(lines), dot=dot, latex=render(eta, "latex"))


def cmd_rank1(args) -> Outcome:
    bundle = build_bundle(args.diagram)
    report = verify_rank1(args.diagram, bundle)
    payload = {
        "points": bundle.b,
        "rounds": bundle.rounds,
        "selected": [f"x{bundle.selected[0]}", f"x{bundle.selected[1]}", bundle.selected[2]],
        **report.to_json(),
    }
    lines = [f"F+ points: {bundle.b} (b), chase rounds: {bundle.rounds}"]
    s, t, lab = bundle.selected
    lines.append(f"selected edge: x{s} -{lab}-> x{t}")
    for c in report.conditions:
        lines.append(f"{c.name}: {'pass' if c.passed else 'FAIL'}")
    lines.append(f"homomorphisms D -> F+ at w0: {report.hom_count}")
    return Outcome(payload, "\n".join(lines), ok=report.passed, dot=bundle_to_dot(bundle))


def cmd_pseudoproduct(args) -> Outcome:
    bundle = build_bundle(args.diagram)
    graph = graph_from_selector(args.graph)
    pp = pseudoproduct(bundle, graph)
    payload = {
        "points": pp.frame.size,
        "graph_order": graph.order,
        "edges": [[pp.frame.name(s), pp.frame.name(t), lab] for s, t, lab in pp.frame.sorted_edges()],
        "definitions_agree": True,
    }
    text = f"{pp.frame.size} points, {len(pp.frame.edges)} edges; clause and projection definitions agree"
    return Outcome(payload, text, dot=pseudoproduct_to_dot(bundle, pp))


def cmd_export(args) -> Outcome:
    d = args.diagram
    payload = {"dsl": to_dsl(d), "edges": [list(e) for e in d.sorted_edges()], "points": d.size}
    return Outcome(payload, to_dsl(d), dot=diagram_to_dot(d))


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


def suite_soundness(args) -> Outcome:
    d: Diagram = args.diagram
    spec = _spec(args, d)
    phi = gamma_m(spec, args.m, cap=args.cap_expansion)
    rng = random.Random(args.seed)
    labels = d.labels or ("a",)
    frames = checked = 0
    violations = []
    while frames < args.samples:
        f = random_frame(rng, rng.randint(1, args.max_size), labels, rng.choice((0.3, 0.5, 0.7, 0.9)))
        frames += 1
        for w in f.points:
            if satisfies_e(f, w, d) is None:
                continue
            checked += 1
            bad = refute_at(f, w, phi, budget=args.budget_valuations)
            if bad is not None:
                violations.append({"frame": to_dsl(f), "point": w, "valuation": bad.to_json()})
    ok = not violations
    payload = {"suite": "soundness", "m": args.m, "frames": frames, "points_checked": checked, "violations": violations}
    text = f"soundness: {frames} frames, {checked} points satisfying e^D, {len(violations)} violations"
    return Outcome(payload, text, ok=ok)


def suite_c2(args) -> Outcome:
    d = args.diagram
    bundle = build_bundle(d)
    graph = graph_from_selector(args.graph)
    n = chromatic_number(graph)
    if n is None:
        raise MdlError("the graph has loops and admits no colouring")
    colouring = find_colouring(graph, n)
    valuation, m = refuting_valuation(bundle, graph, colouring, n)
    pp = pseudoproduct(bundle, graph)
    holds = gamma_semantic(pp.frame, 0, _spec(args, d), m, valuation)
    payload = {
        "suite": "c2",
        "condition": "C2",
        "b": bundle.b,
        "colours": n,
        "m": m,
        "refuted_at_w0": not holds,
        "valuation": valuation.to_json(),
    }
    text = f"γ^D_{m} refuted at w0" if not holds else f"γ^D_{m} NOT refuted at w0"
    return Outcome(payload, text, ok=not holds)


def suite_c1(args) -> Outcome:
    d = args.diagram
    bundle = build_bundle(d)
    selector = args.graph or f"complete:{2 ** (bundle.b * args.k) + 1}"
    graph = graph_from_selector(selector)
    report = c1_sample_check(bundle, graph, args.k, args.m, args.samples, args.seed, _spec(args, d))
    payload = {"suite": "c1", "graph": selector, "k": args.k, "m": args.m, **report.to_json()}
    text = (
        f"C1: {report.samples} {args.k}-generated valuations on {report.points} points, "
        f"guard active at w0 in {report.active_at_root}; "
        + ("no counterexample" if report.holds else f"counterexample at {report.counterexample['point']}")
    )
    return Outcome(payload, text, ok=report.holds)


def suite_complete1(args) -> Outcome:
    d = args.diagram
    bundle = build_bundle(d)
    report = verify_complete1(d, bundle, args.alpha_max)
    lines = [
        f"K_{r['alpha']}: {r['points']} points, e^D(w0) {'refuted' if r['root_refuted'] else 'HOLDS'}, "
        f"other points {'all satisfy e^D' if r['others_satisfied'] else 'FAIL'}"
        for r in report.rows
    ]
    return Outcome({"suite": "complete1", **report.to_json()}, "\n".join(lines), ok=report.holds)


def suite_uf3(args) -> Outcome:
    rng = random.Random(args.seed)
    labels = ("a", "b")
    failures = []
    for n in range(args.samples):
        f = random_frame(rng, rng.randint(1, min(args.max_size, 6)), labels[: rng.randint(1, 2)], rng.random())
        ue = ultrafilter_extension_finite(f)
        iso = ue.is_isomorphism_to(f)
        pairs = all(
            f.has_edge(a, b, lab) == ue_related(f, lab, ue.ultrafilters[a], ue.ultrafilters[b])
            for lab in f.labels
            for a in f.points
            for b in f.points
        )
        if not (iso and pairs):
            failures.append(to_dsl(f))
    payload = {"suite": "uf3", "frames": args.samples, "failures": failures}
    return Outcome(payload, f"uf3: {args.samples} frames, {len(failures)} failures", ok=not failures)


def suite_minimality(args) -> Outcome:
    d = args.diagram
    rows = []
    for e in d.sorted_edges():
        nxt, reason = try_delete(d, e)
        smaller = d.with_edges(d.edges - {e})
        rows.append(
            {
                "edge": f"x{e[0]} -{e[2]}-> x{e[1]}",
                "locally_entails": entails_locally(smaller, d),
                "globally_entails": entails_globally(smaller, d),
                "minimize_step": reason,
            }
        )
    local, glob = is_locally_minimal(d), is_globally_minimal(d)
    payload = {"suite": "minimality", "locally_minimal": local, "globally_minimal": glob, "deletions": rows}
    text = f"locally minimal: {str(local).lower()}\nglobally minimal: {str(glob).lower()}"
    return Outcome(payload, text)


SUITE_FUNCS: dict[str, Callable[[Any], Outcome]] = {
    "soundness": suite_soundness,
    "c2": suite_c2,
    "c1": suite_c1,
    "complete1": suite_complete1,
    "uf3": suite_uf3,
    "minimality": suite_minimality,
}


def cmd_verify(args) -> Outcome:
    if args.suite != "uf3" and args.diagram is None:
        raise MdlError(f"suite {args.suite} needs a diagram")
    return SUITE_FUNCS[args.suite](args)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit with 2, as argparse does, but without the traceback noise
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json", "dot", "latex"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--k", type=int, default=1, help="number of nonempty variables in sampled valuations")
    p.add_argument("--guard-depth", type=int, default=None)
    p.add_argument("--graph", default=None, help="complete:<n>, cycle:<n>, mycielski:<k|selector>, file:<path>")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--alpha-max", type=int, default=6)
    p.add_argument("--budget-valuations", type=int, default=VALUATION_BUDGET)
    p.add_argument("--cap-expansion", type=int, default=EXPANSION_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdl", description="Diagram minimization, axiom generation and frame constructions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("classify", "minimize", "axioms", "eta", "rank1", "pseudoproduct", "export"):
        p = sub.add_parser(name)
        p.add_argument("diagram", help="catalog name or path to a .diag file")
        _common(p)
        if name == "minimize":
            p.add_argument("--all-orders", action="store_true", help="explore every deletion order")
    p = sub.add_parser("verify")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("diagram", nargs="?", default=None)
    _common(p)
    return parser


COMMANDS: dict[str, Callable[[Any], Outcome]] = {
    "classify": cmd_classify,
    "minimize": cmd_minimize,
    "axioms": cmd_axioms,
    "eta": cmd_eta,
    "rank1": cmd_rank1,
    "pseudoproduct": cmd_pseudoproduct,
    "export": cmd_export,
    "verify": cmd_verify,
}

_SAMPLE_DEFAULTS = {"soundness": 100, "c1": 1000, "uf3": 100}
_SIZE_DEFAULTS = {"soundness": 6, "uf3": 5, "minimize": 7}


def run_cli(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    key = getattr(args, "suite", None) or args.command
    if args.samples is None:
        args.samples = _SAMPLE_DEFAULTS.get(key, 100)
    if args.max_size is None:
        args.max_size = _SIZE_DEFAULTS.get(key, 6)
    if args.command == "pseudoproduct" and args.graph is None:
        args.graph = "complete:2"
    if getattr(args, "suite", None) == "c2" and args.graph is None:
        args.graph = "complete:2"
    try:
        if args.diagram is not None:
            args.diagram = catalog.resolve(args.diagram)
        outcome = COMMANDS[args.command](args)
        stdout.write(_emit(outcome, args.format))
    except (MdlError, ValueError, OSError) as exc:
        stderr.write(f"mdl: error: {exc}\n")
        return 2
    return 0 if outcome.ok else 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()

"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
print; without -s pytest shows them for failing tests only.
"""

import functools
import io
import json
import random
import time
from fractions import Fraction

from portsec import catalog as cat
from portsec import cli
from portsec import rules
from portsec import simulator as sim
from portsec.archmodel import parse_model
from portsec.simulator import AdversaryAction, ContainerState
from portsec.surfaces import cut_points, enumerate_paths

from conftest import corpus_path
from path_oracle import oracle_paths, oracle_reachable, random_model


def criterion(number, name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {number} ({name}): FAIL")
                raise
            print(f"ACCEPTANCE {number} ({name}): PASS")
            return result
        return wrapper
    return decorate


@criterion(1, "catalog fidelity")
def test_criterion_1_catalog_fidelity():
    started = time.perf_counter()
    catalog = cat.full_catalog()
    assert len(catalog) == 92
    counts = {}
    for spec in catalog:
        counts[spec.id.stage] = counts.get(spec.id.stage, 0) + 1
    assert [counts[i] for i in range(1, 7)] == [18, 10, 9, 22, 21, 12]
    assert cat.validate_catalog() == []
    assert time.perf_counter() - started < 1.0


@criterion(2, "benign simulation")
def test_criterion_2_benign_simulation():
    started = time.perf_counter()
    prereq = {str(s.id): {str(p) for p in cat.prerequisites(s.id)} for s in cat.full_catalog()}
    rng = random.Random(20240809)
    for _ in range(100):
        seed = rng.getrandbits(64)
        trace = sim.run(None, None, seed)
        assert len(trace.events) == 92
        assert trace.violations == ()
        assert trace.final_state is ContainerState.EMPTY_AT_DEPOT
        position = {str(e.transaction): e.seq for e in trace.events}
        for event in trace.events:
            needed = prereq[str(event.transaction)]
            assert all(position[p] < event.seq for p in needed)
    assert time.perf_counter() - started < 5.0


SCENARIO_MONITORS = {
    "scenario-forged-delivery-order.json": "M4",
    "scenario-dropped-transfer-note.json": "M1",
    "scenario-tampered-unloading-list.json": "M4",
    "scenario-dropped-dangerous-goods-report.json": "M2",
    "scenario-forged-customs-clearance.json": "M5",
    "scenario-replayed-acceptance-order.json": "M6",
}


@criterion(3, "adversary detection")
def test_criterion_3_adversary_detection():
    assert len(SCENARIO_MONITORS) >= 6
    detected = 0
    for name, monitor in SCENARIO_MONITORS.items():
        data = json.loads(corpus_path(name).read_text())
        actions = [AdversaryAction.from_dict(a) for a in data["adversaries"]]
        trace = sim.run(data["stages"], actions, data["seed"])
        if any(v.monitor == monitor for v in trace.violations):
            detected += 1
    assert detected == len(SCENARIO_MONITORS)  # 100% detection
    benign = json.loads(corpus_path("shipping-flow.json").read_text())
    assert sim.run(benign["stages"], [], benign["seed"]).violations == ()


@criterion(4, "path enumeration matches the brute-force oracle")
def test_criterion_4_path_oracle_equivalence():
    started = time.perf_counter()
    rng = random.Random(424242)
    for _ in range(200):
        model = random_model(rng)
        node_count = (len(model.entry_points) + len(model.components)
                      + len(model.resources))
        assert node_count <= 10
        enumeration = enumerate_paths(model, max_length=10, max_paths=1_000_000)
        assert not enumeration.truncated
        assert {p.nodes for p in enumeration.paths} == oracle_paths(model, 10)
    assert time.perf_counter() - started < 30.0


@criterion(5, "cut points verified by removal recheck")
def test_criterion_5_cut_point_recheck():
    def recheck(model):
        enumeration = enumerate_paths(model, max_length=10, max_paths=1_000_000)
        report = cut_points(model, enumeration)
        for pair in report.pairs:
            for edge in pair.cuts:
                assert not oracle_reachable(model, pair.entry, pair.resource,
                                            removed_edge=edge), \
                    f"cut edge {edge} does not disconnect ({pair.entry}, {pair.resource})"

    recheck(parse_model(corpus_path("tos-pcs-model.json").read_text()))
    rng = random.Random(555)
    for _ in range(50):
        recheck(random_model(rng))


@criterion(6, "rule soundness and completeness")
def test_criterion_6_rules(vulnerable_model, hardened_model, advisories):
    for rule_id in rules.RULE_IDS:
        model = parse_model(corpus_path(f"rule-{rule_id}.json").read_text())
        findings = rules.check(model, advisories=advisories)
        assert [f.rule for f in findings] == [rule_id]
    vulnerable = rules.check(vulnerable_model, advisories=advisories)
    assert {f.paper_class for f in vulnerable} == set(rules.PAPER_CLASSES.values())
    assert rules.check(hardened_model, advisories=advisories) == []


@criterion(7, "log erasure formula")
def test_criterion_7_log_erasure():
    assert rules.erase_time(10, 12_000, 1000).seconds == Fraction(120)
    rng = random.Random(7)
    for _ in range(1000):
        files = rng.randint(1, 10_000)
        entries = rng.randint(1, 1_000_000)
        rate = Fraction(rng.randint(1, 100_000), rng.randint(1, 1000))
        estimate = rules.erase_time(files, entries, rate)
        assert estimate.seconds == Fraction(files * entries) / rate


def _invoke(argv):
    out = io.StringIO()
    code = cli.main(argv, stdout=out, stderr=io.StringIO())
    return code, out.getvalue()


@criterion(8, "byte-identical outputs across the fixture matrix")
def test_criterion_8_determinism(tmp_path):
    benign = str(corpus_path("shipping-flow.json"))
    adversarial = str(corpus_path("scenario-forged-delivery-order.json"))
    vulnerable = str(corpus_path("tos-pcs-model.json"))
    hardened = str(corpus_path("tos-pcs-hardened.json"))
    advisories = str(corpus_path("advisories.json"))

    trace_file = tmp_path / "trace.json"
    code, _ = _invoke(["simulate", benign, "--trace", str(trace_file)])
    assert code == 0

    matrix = [
        ["simulate", benign],
        ["simulate", adversarial],
        ["check", vulnerable, "--advisories", advisories],
        ["check", hardened, "--advisories", advisories],
        ["analyze", vulnerable, "--surfaces"],
        ["analyze", vulnerable, "--paths"],
        ["analyze", vulnerable, "--cuts"],
        ["analyze", vulnerable, "--rank"],
        ["analyze", hardened, "--paths"],
        ["render", vulnerable],
        ["render", hardened],
        ["render", str(trace_file)],
        ["report", vulnerable, "--advisories", advisories],
        ["report", hardened, "--advisories", advisories],
    ]
    for argv in matrix:
        code_a, out_a = _invoke(argv)
        code_b, out_b = _invoke(argv)
        assert code_a == code_b
        assert out_a == out_b, f"output differs for {argv}"
        assert out_a  # every subcommand emits something

    # file outputs too
    for name, argv_tail in [
        ("t.json", ["simulate", benign, "--trace"]),
        ("m.dot", ["render", vulnerable, "--dot"]),
        ("r.json", ["report", vulnerable, "--advisories", advisories, "--out"]),
    ]:
        first, second = tmp_path / f"a_{name}", tmp_path / f"b_{name}"
        _invoke(argv_tail + [str(first)])
        _invoke(argv_tail + [str(second)])
        assert first.read_bytes() == second.read_bytes()

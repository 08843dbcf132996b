"""End-to-end acceptance checks.

Each test covers one release criterion and prints a single PASS/FAIL
line on the real terminal, so a plain ``pytest -v`` run shows the
seven verdicts even with output capture on.
"""
from __future__ import annotations

import json
import random
import time
import urllib.request

import pytest

import splforge as sf
from splforge import cli, derive, dsl
from splforge.metrics import (
    compare,
    compute_debt,
    detect_duplicates,
    measure_directory,
    minutes_to_days,
    package_cycles,
    read_report,
    scan_text,
    write_report,
)

from modelgen import brute_force_products, random_model, random_partial
from test_service import running

MODEL = str(dsl.reference_model_path())


def _verdict(capsys, number, name, ok, detail=""):
    stamp = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    with capsys.disabled():
        print(f"[acceptance {number}/7] {name}: {stamp}{suffix}")
    assert ok, f"{name}: {detail}"


def test_criterion_1_reference_model_counts(capsys, webspl):
    started = time.perf_counter()
    full = sf.count_products(webspl)
    v1 = sf.count_products(sf.filter_by_version(webspl, 1))
    oracle_full = len(brute_force_products(webspl))
    oracle_v1 = len(brute_force_products(sf.filter_by_version(webspl, 1)))
    elapsed = time.perf_counter() - started
    ok = (full, v1) == (18, 3) == (oracle_full, oracle_v1) and elapsed < 1.0
    _verdict(capsys, 1, "reference model counts 18 products, 3 at version 1",
             ok, f"count={full}/{v1}, oracle={oracle_full}/{oracle_v1}, {elapsed:.2f}s")


def test_criterion_2_golden_products(capsys, fixtures):
    full_cfg = str(fixtures / "webspl-full.cfg")
    minimal_cfg = str(fixtures / "webspl-minimal.cfg")
    checks = []

    code = cli.main(["validate", MODEL, full_cfg, "--version", "4"])
    checks.append(("full validates", code == 0))
    code = cli.main(["validate", MODEL, minimal_cfg, "--version", "1"])
    checks.append(("minimal validates", code == 0))
    capsys.readouterr()

    code = cli.main(["derive", MODEL, full_cfg, "--version", "4",
                     "--name", "webspl-full"])
    out = capsys.readouterr().out
    golden = (fixtures / "golden" / "webspl-full.manifest").read_text()
    checks.append(("full manifest bytes", code == 0 and out == golden))
    checks.append(("full cycle count 0", "cycles: 0\n" in out))

    code = cli.main(["derive", MODEL, minimal_cfg, "--version", "1",
                     "--name", "webspl-minimal"])
    out = capsys.readouterr().out
    golden = (fixtures / "golden" / "webspl-minimal.manifest").read_text()
    checks.append(("minimal manifest bytes", code == 0 and out == golden))
    checks.append(("minimal cycle count 0", "cycles: 0\n" in out))

    failed = [name for name, ok in checks if not ok]
    _verdict(capsys, 2, "golden configurations validate and derive byte-identical manifests",
             not failed, f"failed: {failed}" if failed else "6 checks")


def test_criterion_3_propagation_soundness_and_completeness(capsys):
    rng = random.Random(31337)
    started = time.perf_counter()
    models = 0
    literals_checked = 0
    bad: list[str] = []
    while models < 500:
        model = random_model(rng, max_features=12)
        models += 1
        partial = random_partial(rng, model)
        result = sf.propagate(model, partial)
        if len(model.features) <= 10:
            universe = brute_force_products(model)
        else:
            universe = {p.selected for p in sf.enumerate_products(model)}
        extensions = [s for s in universe
                      if partial.selected <= s and not partial.deselected & s]
        if result.conflict:
            if extensions:
                bad.append(f"{model.name}: false conflict")
            continue
        if not extensions:
            bad.append(f"{model.name}: missed conflict")
            continue
        for solution in extensions:
            config = sf.Configuration.for_model(
                model, solution, set(model.features) - solution)
            if not sf.validate(model, config).valid:
                bad.append(f"{model.name}: invalid extension")
        undecided = set(model.features) - partial.selected - partial.deselected
        for name in undecided:
            literals_checked += 1
            everywhere = all(name in s for s in extensions)
            nowhere = all(name not in s for s in extensions)
            if (name in result.forced_selected) != everywhere:
                bad.append(f"{model.name}: {name} forced-selected wrong")
            if (name in result.forced_deselected) != nowhere:
                bad.append(f"{model.name}: {name} forced-deselected wrong")
            if (name in result.open_features) != (not everywhere and not nowhere):
                bad.append(f"{model.name}: {name} open wrong")
    elapsed = time.perf_counter() - started
    ok = not bad and elapsed < 60.0
    _verdict(capsys, 3, "propagation sound and complete on 500 random models",
             ok, f"{literals_checked} literals, {elapsed:.1f}s"
             + (f", violations: {bad[:3]}" if bad else ""))


def test_criterion_4_parser_round_trip(capsys, webspl):
    rng = random.Random(271828)
    failures = 0
    for i in range(500):
        model = random_model(rng, with_assets=(i % 2 == 0))
        reparsed = dsl.parse_model(dsl.serialize_model(model))
        if not sf.structurally_equal(reparsed, model):
            failures += 1
    if not sf.structurally_equal(dsl.parse_model(dsl.serialize_model(webspl)), webspl):
        failures += 1
    _verdict(capsys, 4, "parse after serialize is the identity on 500 random models",
             failures == 0, f"{failures} failures" if failures else "501 models")


def test_criterion_5_metrics_exactness(capsys, fixtures):
    checks = []

    report, _, _ = measure_directory(fixtures / "corpus")
    golden = (fixtures / "golden" / "corpus.metrics").read_text()
    checks.append(("corpus report bytes", write_report(report) == golden))
    partition = all(
        unit.code_lines + unit.comment_lines + unit.blank_lines == unit.physical_lines
        for unit in report.files)
    checks.append(("line partition", partition))
    gnarly = next(u for u in report.files if u.path == "gnarly.gsrc")
    checks.append(("complexity 13 = 1 + 12 decisions",
                   gnarly.functions[0].complexity == 13))

    stanza_units = [scan_text(p.read_text(), p.name)
                    for p in sorted((fixtures / "dup_stanza").glob("*.gsrc"))]
    _, stanza_lines = detect_duplicates(stanza_units)
    checks.append(("stanza duplicate lines 12", stanza_lines == 12))

    pair_units = [scan_text(p.read_text(), p.name)
                  for p in sorted((fixtures / "dup_pair").glob("*.gsrc"))]
    _, pair_lines = detect_duplicates(pair_units)
    checks.append(("file-copy duplicate lines 20", pair_lines == 20))

    checks.append(("corpus package cycles 1", package_cycles(report.files)[0] == 1))
    ring_units = [scan_text(p.read_text(), p.name)
                  for p in sorted((fixtures / "ring").glob("*.gsrc"))]
    checks.append(("ring package cycles 1", package_cycles(ring_units)[0] == 1))

    _, minutes, days = compute_debt([gnarly], [])
    checks.append(("complexity-13 debt 0.1 days",
                   minutes == 30 and days == minutes_to_days(30)
                   and str(days) == "0.1"))

    failed = [name for name, ok in checks if not ok]
    _verdict(capsys, 5, "metrics reproduce every hand count exactly",
             not failed, f"failed: {failed}" if failed else f"{len(checks)} checks")


def test_criterion_6_comparison_report(capsys, fixtures):
    def load(name):
        return read_report((fixtures / "table3" / f"{name}.metrics").read_text())

    report = compare(load("cwa"), load("spl"), load("dwa"))
    rows = {row.category: row for row in report.rows}
    checks = [
        ("five categories in order",
         [r.category for r in report.rows] == [
             "Complexity", "Size", "Design", "Duplicity", "Technical Debt"]),
        ("combined complexity 503", rows["Complexity"].combined == 503),
        ("complexity delta +56", rows["Complexity"].delta == 56),
        ("combined code lines 3325 = 3324 + 1",
         rows["Size"].combined == 3325 and rows["Size"].core == 3324
         and rows["Size"].derived == 1),
        ("duplicate lines delta -86", rows["Duplicity"].delta == -86),
        ("debt delta +1.6 days", str(rows["Technical Debt"].delta) == "1.6"),
        ("package cycles all zero",
         (rows["Design"].baseline, rows["Design"].combined) == (0, 0)),
    ]
    failed = [name for name, ok in checks if not ok]
    _verdict(capsys, 6, "comparison report reproduces the published deltas",
             not failed, f"failed: {failed}" if failed else f"{len(checks)} checks")


def test_criterion_7_service_cli_equivalence(capsys, webspl, tmp_path):
    rng = random.Random(1618)
    mismatches = 0
    with running(webspl) as base_url:
        for i in range(50):
            partial = random_partial(rng, webspl)
            body = json.dumps({
                "selected": sorted(partial.selected),
                "deselected": sorted(partial.deselected),
            }).encode()
            request = urllib.request.Request(
                base_url + "/api/propagate", data=body,
                headers={"Content-Type": "application/json"}, method="POST")
            with urllib.request.urlopen(request, timeout=10) as response:
                payload = json.loads(response.read())

            cfg = tmp_path / f"c{i}.cfg"
            cfg.write_text(dsl.serialize_configuration(partial))
            code = cli.main(["propagate", MODEL, str(cfg)])
            out = capsys.readouterr().out

            if payload["conflict"]:
                expected = "conflict\n"
                agreed = code == 1 and out == expected
            else:
                lines = [f"+{n}" for n in payload["forcedSelected"]]
                lines += [f"-{n}" for n in payload["forcedDeselected"]]
                expected = "".join(f"{line}\n" for line in lines)
                agreed = code == 0 and out == expected
            if not agreed:
                mismatches += 1
    _verdict(capsys, 7, "HTTP propagate equals the command line on 50 random partials",
             mismatches == 0, f"{mismatches} mismatches" if mismatches else "50/50 agree")

"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Every criterion runs at its stated sample sizes and tolerances
(abs_tol = rel_tol = 1e-9, 1000 samples, 200 sequences).
"""

import functools
import json
import subprocess
import time

import pytest

from cstarkit import Tolerance, campaign

from conftest import FIXTURES, GOLDEN, PYTHON
from test_cli import GOLDEN_CASES, without_timestamp

TOL = Tolerance(1e-9, 1e-9)
SEED = 42
SAMPLES = 1000
SIX = ("C1", "C2", "C4", "M2", "M3", "C2+M2")


@pytest.fixture
def verdict(capsys):
    def report(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return report


@functools.lru_cache(maxsize=None)
def _suite(suite, algebras=campaign.DEFAULT_ALGEBRAS):
    """One timed run per (suite, algebras); criteria sharing a suite reuse it."""
    start = time.perf_counter()
    report = campaign.run_campaign((suite,), SEED, SAMPLES, algebras, TOL)
    return report, time.perf_counter() - start


def _select(report, names):
    return [r for r in report.records if r.check_id.split("[")[0].split(".", 1)[1] in names]


def _summary(records):
    bad = [r for r in records if not r.passed or r.violations]
    text = f"{len(records)} records, {sum(r.violations for r in records)} violations"
    if bad:
        text += f", first failure {bad[0].check_id} witness={bad[0].witness}"
    return not bad and bool(records), text


def test_criterion_1_algebra_laws(verdict):
    report, elapsed = _suite("algebra", SIX)
    laws = ("cstar-identity", "banach-star", "involution-laws", "hermitian-decomposition", "unitization-product")
    records = _select(report, laws)
    ok, text = _summary(records)
    ok = ok and len(records) == len(laws) * len(SIX) and all(r.samples == SAMPLES for r in records)
    verdict(1, "algebra laws on six algebras", ok and elapsed < 10, f"{text}, {elapsed:.1f}s < 10s")


def test_criterion_2_order_suite(verdict):
    report, elapsed = _suite("order", SIX)
    laws = ("square-root", "root-monotonicity", "order-translation", "conjugation-monotonicity", "normality")
    records = _select(report, laws)
    ok, text = _summary(records)
    ok = ok and len(records) == len(laws) * len(SIX) and all(r.samples == SAMPLES for r in records)
    verdict(2, "positivity and order suite", ok and elapsed < 20, f"{text}, {elapsed:.1f}s < 20s")


def test_criterion_3_modulus_norm(verdict):
    report, _ = _suite("order", ("C1", "C2", "C4"))
    records = _select(report, ("norm-zero-axioms", "norm-zero-fixed-point"))
    ok, text = _summary(records)
    verdict(3, "A-valued modulus norm on commutative algebras", ok and len(records) == 6, text)


def test_criterion_4_metric_checker(verdict):
    report, _ = _suite("metric")
    records = _select(report, ("scaled-modulus-axioms", "mutation-detection"))
    ok, text = _summary(records)
    mutation = next(r for r in records if r.check_id == "metric.mutation-detection")
    witnesses = mutation.details.get("witnesses", {})
    ok = ok and set(witnesses) == {"C1", "C2", "C3", "C4"} and all(witnesses.values())
    scaled = next(r for r in records if r.check_id == "metric.scaled-modulus-axioms")
    ok = ok and scaled.samples == 3 * 50
    verdict(4, "metric axiom checker and seeded mutations", ok, f"{text}, mutation witnesses {witnesses}")


def test_criterion_5_convergence_equivalence(verdict):
    report, _ = _suite("metric")
    records = _select(report, ("convergence-equivalence",))
    ok, text = _summary(records)
    ok = ok and records[0].samples >= campaign.DEFAULT_SEQUENCES
    verdict(5, "norm and cone convergence verdicts agree", ok,
            f"{text}, {records[0].samples} sequences, kinds {records[0].details.get('kinds')}")


def test_criterion_6_completion(verdict):
    report, elapsed = _suite("completion")
    records = _select(report, ("isometric-embedding", "density", "off-grid-limit", "uniqueness"))
    ok, text = _summary(records)
    limit = next(r for r in records if r.check_id == "completion.off-grid-limit")
    ok = ok and len(records) == 4 and limit.details.get("smallest_eps") <= 1e-6
    embedding = next(r for r in records if r.check_id == "completion.isometric-embedding")
    ok = ok and embedding.samples == 200 * 201 // 2
    verdict(6, "completion of the 200-point rational grid", ok and elapsed < 30, f"{text}, {elapsed:.1f}s < 30s")


def test_criterion_7_transported_structure(verdict):
    report, _ = _suite("completion")
    records = _select(report, ("transported-structure",))
    ok, text = _summary(records)
    details = records[0].details
    ok = ok and records[0].samples == 100 and all(details["axioms"].values()) and details["linear"]
    ok = ok and details["metric_matches"]
    verdict(7, "transported vector structure V1-V9 and linearity", ok, text)


def test_criterion_8_hilbert_module(verdict):
    report, _ = _suite("cauchy-schwarz")
    ok, text = _summary(report.records)
    names = {r.check_id.split("[")[0] for r in report.records}
    wanted = {"cauchy-schwarz." + n for n in ("module-axioms", "cauchy-schwarz-avalued", "cauchy-schwarz-scalar",
                                               "bridge-identity", "inner-continuity", "module-completion")}
    ok = ok and wanted <= names
    scalar_m2 = [r for r in report.records if r.check_id == "cauchy-schwarz.cauchy-schwarz-scalar[M2]"]
    ok = ok and len(scalar_m2) == 1
    verdict(8, "Hilbert module suite", ok, text)


def test_criterion_9_determinism_and_goldens(verdict, cli_env, tmp_path):
    args = ["-m", "cstarkit.cli", "campaign", "--seed", str(SEED), "--suite", "all", "--format", "json"]
    outs = [tmp_path / "first.json", tmp_path / "second.json"]
    procs = [subprocess.Popen([PYTHON, *args, "--out", str(o)], env=cli_env) for o in outs]
    codes = [p.wait() for p in procs]
    texts = [without_timestamp(o.read_text()) for o in outs]
    identical = texts[0] == texts[1] and codes == [0, 0]
    goldens = []
    for name, argv in GOLDEN_CASES:
        result = subprocess.run([PYTHON, "-m", "cstarkit.cli", *argv], cwd=FIXTURES, env=cli_env,
                                capture_output=True, text=True)
        goldens.append(without_timestamp(result.stdout) == (GOLDEN / name).read_text(encoding="utf-8"))
    records = len(json.loads(texts[0])["records"])
    ok = identical and len(goldens) >= 3 and all(goldens)
    verdict(9, "seeded campaign determinism and golden reports", ok,
            f"exit codes {codes}, {records} records identical={identical}, goldens {sum(goldens)}/{len(goldens)}")

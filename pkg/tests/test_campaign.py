import json
import re
from pathlib import Path

import numpy as np
import pytest

from cstarkit import InputError
from cstarkit import campaign
from cstarkit.report import PLUMBING
from cstarkit.schemas import validate

README = Path(__file__).resolve().parents[1] / "README.md"
SMALL = dict(samples=40, sequences=12, depth=2000)


def _run(suites=("all",), seed=7, algebras=("C2", "M2"), **kw):
    opts = {**SMALL, **kw}
    return campaign.run_campaign(suites, seed, algebras=algebras, **opts)


@pytest.fixture(scope="module")
def small_report():
    return _run()


def _strip(report):
    data = report.to_json()
    data.pop("timestamp")
    return json.dumps(data, sort_keys=True, default=str)


def test_small_campaign_passes_and_validates(small_report):
    assert small_report.passed, small_report.first_failure()
    validate(json.loads(small_report.dumps("json")), "report")


def test_determinism(small_report):
    assert _strip(_run()) == _strip(small_report)
    assert _strip(_run(seed=8)) != _strip(small_report)


def test_every_check_appears_once(small_report):
    ids = [r.check_id for r in small_report.records]
    assert len(ids) == len(set(ids))
    expected = set()
    for chk in campaign.REGISTRY:
        if not chk.per_algebra:
            expected.add(f"{chk.suite}.{chk.name}")
            continue
        for name in ("C2", "M2"):
            if chk.commutative_only and name == "M2":
                continue
            expected.add(f"{chk.suite}.{chk.name}[{name}]")
    assert set(ids) == expected


def test_records_are_sorted_in_output(small_report):
    ids = [r["check_id"] for r in small_report.to_json()["records"]]
    assert ids == sorted(ids)


def test_suite_filter():
    report = _run(("cauchy-schwarz",))
    assert report.records and all(r.check_id.startswith("cauchy-schwarz.") for r in report.records)
    assert report.config["suites"] == ["cauchy-schwarz"]
    with pytest.raises(InputError, match="unknown suite"):
        _run(("geometry",))


def test_zero_samples_is_vacuous_with_warning():
    report = _run(samples=0)
    assert report.records == [] and report.passed
    assert report.warnings == ["sample count is 0: no checks were run"]


def test_rng_stream_rule():
    a = campaign.child_rng(42, 1, 3, 0).standard_normal(4)
    ss = np.random.SeedSequence(42, spawn_key=(1, 3, 0))
    assert np.array_equal(a, np.random.Generator(np.random.PCG64(ss)).standard_normal(4))
    assert not np.array_equal(a, campaign.child_rng(42, 1, 3, 1).standard_normal(4))


def test_shards_reproduce_the_full_run(small_report):
    """A suite run alone yields the same records as inside the full campaign."""
    full = {r.check_id: r.to_json() for r in small_report.records}
    for suite in campaign.SUITES:
        for r in _run((suite,)).records:
            assert r.to_json() == full[r.check_id]


def test_unknown_algebra_is_rejected():
    with pytest.raises(ValueError):
        _run(algebras=("Q7",))


def test_verdict_comparison_helper():
    from cstarkit.metric import PointSequence, converges_cone, converges_norm, scaled_modulus_space
    seq = PointSequence(scaled_modulus_space(2.0), lambda n: 1 / n)
    assert campaign.compare_verdicts(converges_norm(seq, 0.0), converges_cone(seq, 0.0)) == []


def test_generated_sequences_cover_all_kinds():
    seqs = campaign.generate_sequences(np.random.default_rng(1), 30)
    assert len(seqs) == 30
    labels = {label for _, _, label in seqs}
    assert labels == {"convergent", "cauchy-not-convergent", "divergent"}
    assert len({seq.name for seq, _, _ in seqs if not seq.name.startswith("sqrt(")}) == 5


def test_anchors_are_documented():
    table = README.read_text(encoding="utf-8")
    documented = set(re.findall(r"^\|\s*`([a-z0-9-]+)`\s*\|", table, flags=re.M))
    anchors = {chk.anchor for chk in campaign.REGISTRY}
    assert anchors <= documented | {PLUMBING}

"""Range-theorem verification engine: verdicts, reports, determinism."""
import numpy as np
import pytest

from grassint import verify
from grassint.functions import QuadratureSpec, TransformOp
from grassint.harmonics import range_predicate
from grassint.sampling import SeededSampler
from grassint.verify import (
    Thresholds,
    classify_weight,
    radon_component_check,
    report_to_csv,
    report_to_dict,
    report_to_json,
    verify_range_theorem,
)
from grassint.weights import HighestWeight, admissible_weights


def _q(count, seed=0):
    return QuadratureSpec(count, SeededSampler(seed))


@pytest.fixture(scope="module")
def lines_report():
    # every even weight on Gr(1,3) survives, so cap 6 is an all-image sweep
    return verify_range_theorem(3, 1, 1, 6, q=_q(25000))


@pytest.fixture(scope="module")
def planes_report():
    return verify_range_theorem(4, 2, 2, 4, q=_q(6000))


def test_all_image_sweep_on_lines(lines_report):
    assert lines_report.agreement
    assert not lines_report.underpowered
    for v in lines_report.verdicts:
        assert v.predicted
        assert v.verdict == "InImage"


def test_planes_sweep_matches_prediction(planes_report):
    weights = [v.weight for v in planes_report.verdicts]
    assert weights == admissible_weights(4, 2, 4)
    assert len(weights) == 9
    assert planes_report.agreement
    resolved = [v for v in planes_report.verdicts if v.verdict != "Inconclusive"]
    assert len(resolved) >= 5
    for v in resolved:
        assert (v.verdict == "InImage") == range_predicate(4, 2, 2, v.weight)


def test_verdict_threshold_invariants(lines_report, planes_report):
    t = Thresholds()
    for rep in (lines_report, planes_report):
        for v in rep.verdicts:
            if v.verdict == "Kernel":
                assert v.measured_ratio < t.kernel
                assert v.stderr < t.kernel / 3.0
            elif v.verdict == "InImage":
                assert v.measured_ratio > t.image


def test_predicted_flag_is_the_predicate(planes_report):
    for v in planes_report.verdicts:
        assert v.predicted == range_predicate(4, 2, 2, v.weight)


def test_radon_kernel_and_image_examples():
    kern = radon_component_check(4, 2, 1, HighestWeight(4, (2, 2)), q=_q(20000))
    assert kern.verdict == "Kernel"
    img = radon_component_check(4, 2, 1, HighestWeight(4, (2, 0)), q=_q(20000))
    assert img.verdict == "InImage"
    zero = radon_component_check(3, 2, 1, HighestWeight(3, (0,)), q=_q(20000))
    assert zero.verdict == "InImage"
    assert zero.measured_ratio == 1.0


def test_cross_dimension_sweeps_respect_prediction():
    for n, i, j in [(4, 1, 2), (4, 1, 3), (5, 2, 3)]:
        rep = verify_range_theorem(n, i, j, 2, q=_q(6000))
        assert rep.agreement, (n, i, j)
        for v in rep.verdicts:
            if v.verdict != "Inconclusive":
                assert (v.verdict == "InImage") == range_predicate(n, i, j, v.weight)


def test_reports_are_deterministic():
    a = verify_range_theorem(3, 1, 1, 2, q=_q(4000, seed=7))
    b = verify_range_theorem(3, 1, 1, 2, q=_q(4000, seed=7))
    c = verify_range_theorem(3, 1, 1, 2, q=_q(4000, seed=7), threads=2)
    assert report_to_json(a) == report_to_json(b) == report_to_json(c)
    d = verify_range_theorem(3, 1, 1, 2, q=_q(4000, seed=8))
    assert report_to_json(a) != report_to_json(d)


def test_report_serialization(planes_report):
    blob = report_to_dict(planes_report)
    assert blob["wall_time"] is None
    assert blob["agreement"] is True
    assert len(blob["weights"]) == 9
    csv_text = report_to_csv(planes_report)
    lines = csv_text.strip().split("\n")
    assert lines[0] == "weight,predicted,ratio,stderr,verdict"
    assert len(lines) == 10


def test_classify_weight_errors(monkeypatch):
    op = TransformOp("cosine", 4, 1, 1)
    with pytest.raises(ValueError, match="weight absent from source"):
        classify_weight(op, HighestWeight(4, (2, 2)), q=_q(1000))
    monkeypatch.setattr(verify, "_source_polys", lambda *a, **k: [None, None, None])
    with pytest.raises(ValueError, match="all projections negligible"):
        classify_weight(op, HighestWeight(4, (2, 0)), q=_q(1000))


def test_sweep_input_validation():
    with pytest.raises(ValueError, match="need 1 <= i, j"):
        verify_range_theorem(4, 0, 1, 2, q=_q(1000))
    with pytest.raises(ValueError, match="below source"):
        verify_range_theorem(4, 1, 2, 2, q=_q(1000), kind="radon")
    with pytest.raises(ValueError, match="below source"):
        radon_component_check(4, 2, 2, HighestWeight(4, (2, 0)), q=_q(1000))


def test_thresholds_validation():
    with pytest.raises(ValueError, match="need 0 < kernel < image"):
        Thresholds(kernel=0.3, image=0.2)

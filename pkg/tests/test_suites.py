import json

import pytest

from projmed.lemma_lab import SECTIONS, IdentityReport, verify_ideal_membership, verify_lemma_suite
from projmed.lemma_lab.suites import trial_rng


def total(reports):
    return sum(r.violations for r in reports)


class TestReport:
    def test_fields(self):
        r = IdentityReport("x", 10, 1e-12, 0, 1e-9)
        assert r.passed
        assert json.loads(json.dumps(r.to_dict()))["name"] == "x"
        assert r.line().endswith("ok")
        assert IdentityReport("x", 10, 1.0, 2, 1e-9).line().endswith("FAIL")


class TestSuites:
    def test_sections(self):
        assert SECTIONS == ("S2", "S3", "S4", "S5", "S6")

    def test_s2_seed1(self):
        reps = verify_lemma_suite("S2", 1, 500)
        assert total(reps) == 0
        names = {r.name for r in reps}
        assert {"S2.triangle_inequality", "S2.triangle_equality_at_vertex",
                "S2.triangle_strict_off_vertex"} <= names

    def test_s3_seed2(self):
        reps = verify_lemma_suite("S3", 2, 500)
        assert total(reps) == 0
        assert "S3.closest_vertex_inner_product" in {r.name for r in reps}

    @pytest.mark.parametrize("section", ["S4", "S5", "S6"])
    def test_other_sections(self, section):
        reps = verify_lemma_suite(section, 3, 60)
        assert reps and total(reps) == 0
        assert all(r.trials >= 1 for r in reps)

    def test_case_insensitive(self):
        assert [r.line() for r in verify_lemma_suite("s3", 5, 5)] == \
               [r.line() for r in verify_lemma_suite("S3", 5, 5)]

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            verify_lemma_suite("S7", 1, 10)
        with pytest.raises(ValueError):
            verify_lemma_suite("S2", 1, 0)
        with pytest.raises(ValueError):
            verify_ideal_membership(1, 0)

    def test_ideal_membership(self):
        r = verify_ideal_membership(42, 1000)
        assert r.passed and r.trials == 1000 and r.max_abs_residual < 1e-9

    def test_thread_count_does_not_matter(self, monkeypatch):
        monkeypatch.setenv("PROJMED_THREADS", "1")
        serial = [r.line() for r in verify_lemma_suite("S6", 9, 12)]
        monkeypatch.setenv("PROJMED_THREADS", "4")
        threaded = [r.line() for r in verify_lemma_suite("S6", 9, 12)]
        assert serial == threaded

    def test_trial_rng_independent_streams(self):
        a = trial_rng(1, "S2", 0).random(3)
        assert (a == trial_rng(1, "S2", 0).random(3)).all()
        assert not (a == trial_rng(1, "S2", 1).random(3)).any()
        assert not (a == trial_rng(1, "S3", 0).random(3)).any()

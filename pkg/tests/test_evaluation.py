import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantaxioms.errors import EmptyInput, MixedCodeframes, NegativeEntry, NotNormalized, ParseError
from quantaxioms.evaluation import (
    MultiSampleReport,
    SampleRecord,
    aggregate,
    evaluate_samples,
    ingest,
    ingest_collect,
    ingest_text,
)
from quantaxioms.measures import EvalContext, kld

from conftest import prev

B2_CSV = "sample_id,class,true,pred\ns1,c1,0.20,0.25\ns1,c2,0.80,0.75\n"


def _record(sid, p, q, size=None):
    return SampleRecord(sid, prev(*p), prev(*q), size)


class TestAggregate:
    def test_even_length_median(self):
        assert aggregate([0.05, 0.5]) == {"mean": pytest.approx(0.275), "median": pytest.approx(0.275)}

    def test_single_value(self):
        assert aggregate([0.3]) == {"mean": 0.3, "median": 0.3}

    def test_empty(self):
        with pytest.raises(EmptyInput):
            aggregate([])


class TestEvaluateSamples:
    def test_perfect_prediction(self):
        rep = evaluate_samples([_record("a", (0.3, 0.7), (0.3, 0.7))], ["AE", "KLD", "PD"])
        for m in ("AE", "KLD", "PD"):
            assert rep.per_sample["a"][m] == 0.0
            assert rep.aggregates[m] == {"mean": 0.0, "median": 0.0}

    def test_two_records(self):
        recs = [_record("b2", (0.2, 0.8), (0.25, 0.75)), _record("b3", (0.2, 0.8), (0.7, 0.3))]
        rep = evaluate_samples(recs, ["AE"])
        assert rep.aggregates["AE"]["mean"] == pytest.approx(0.275, abs=1e-15)
        assert rep.aggregates["AE"]["median"] == pytest.approx(0.275, abs=1e-15)

    def test_mean_dominated_by_largest(self):
        recs = [_record(f"s{i}", (0.01, 0.99), (q, 1 - q), 1000) for i, q in enumerate((0.0101, 0.0110, 0.0200))]
        rep = evaluate_samples(recs, ["KLD"])
        scores = [rep.per_sample[r.sample_id]["KLD"] for r in recs]
        np.testing.assert_allclose(scores, [4.78e-07, 4.53e-05, 3.02e-03], rtol=0.02)
        assert rep.aggregates["KLD"]["mean"] == pytest.approx(1.022e-03, rel=0.01)
        assert rep.aggregates["KLD"]["median"] == scores[1]

    def test_per_record_epsilon(self):
        rec = _record("s", (0.01, 0.99), (0.02, 0.98), 1000)
        rep = evaluate_samples([rec], ["KLD"])
        assert rep.per_sample["s"]["KLD"] == kld(rec.true_prev, rec.pred_prev, EvalContext.for_sample_size(1000))

    def test_context_overrides_sample_size(self):
        rec = _record("s", (0.01, 0.99), (0.02, 0.98), 1000)
        rep = evaluate_samples([rec], ["KLD"], EvalContext())
        assert rep.per_sample["s"]["KLD"] == kld(rec.true_prev, rec.pred_prev)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            evaluate_samples([], ["AE"])

    def test_mixed_codeframes(self):
        with pytest.raises(MixedCodeframes):
            evaluate_samples([_record("a", (0.5, 0.5), (0.5, 0.5)), _record("b", (0.2, 0.3, 0.5), (0.2, 0.3, 0.5))], ["AE"])

    @given(st.permutations(range(6)))
    @settings(max_examples=30, deadline=None)
    def test_permutation_invariant(self, order):
        gen = np.random.default_rng(42)
        P = gen.dirichlet(np.ones(3), size=6)
        Q = gen.dirichlet(np.ones(3), size=6)
        recs = [SampleRecord(f"s{i}", prev(*P[i], renormalize=True), prev(*Q[i], renormalize=True)) for i in range(6)]
        base = evaluate_samples(recs, ["AE", "KLD"])
        shuffled = evaluate_samples([recs[i] for i in order], ["AE", "KLD"])
        assert shuffled.aggregates == base.aggregates
        assert shuffled.per_sample == base.per_sample

    def test_report_round_trip(self, rng):
        P = rng.dirichlet(np.ones(4), size=20)
        Q = rng.dirichlet(np.ones(4), size=20)
        recs = [SampleRecord(f"s{i:02d}", prev(*P[i], renormalize=True), prev(*Q[i], renormalize=True), 500) for i in range(20)]
        rep = evaluate_samples(recs, ["AE", "NAE", "RAE", "KLD", "NKLD", "PD"])
        again = MultiSampleReport.from_json(rep.to_json())
        assert again == rep


class TestIngestCsv:
    def test_one_sample(self):
        (rec,) = ingest_text(B2_CSV)
        assert rec.sample_id == "s1" and rec.codeframe.labels == ("c1", "c2")
        np.testing.assert_allclose(rec.pred_prev.values, [0.25, 0.75])
        assert rec.sample_size is None

    def test_counts(self):
        (rec,) = ingest_text("sample_id,class,true_count,pred_count\nx,a,10,25\nx,b,90,75\n")
        np.testing.assert_allclose(rec.true_prev.values, [0.1, 0.9])
        assert rec.sample_size == 100

    def test_size_column(self):
        (rec,) = ingest_text("sample_id,class,true,pred,size\ns,a,0.5,0.4,40\ns,b,0.5,0.6,40\n")
        assert rec.sample_size == 40

    def test_classes_follow_first_sample_order(self):
        text = "sample_id,class,true,pred\ns1,b,0.2,0.3\ns1,a,0.8,0.7\ns2,a,0.5,0.5\ns2,b,0.5,0.5\n"
        r1, r2 = ingest_text(text)
        assert r2.codeframe.labels == ("b", "a")
        np.testing.assert_allclose(r2.true_prev.values, [0.5, 0.5])

    def test_not_normalized_names_sample(self):
        text = "sample_id,class,true,pred\nbad,c1,0.2,0.25\nbad,c2,0.7,0.75\n"
        with pytest.raises(NotNormalized, match="bad"):
            ingest_text(text)

    def test_negative_count(self):
        with pytest.raises(NegativeEntry):
            ingest_text("sample_id,class,true_count,pred_count\nx,a,-1,2\nx,b,3,2\n")

    def test_parse_error_has_line(self):
        with pytest.raises(ParseError) as info:
            ingest_text("sample_id,class,true,pred\ns,c1,0.5,0.5\ns,c2,abc,0.5\n")
        assert info.value.locus == "line 3"

    def test_bad_header(self):
        with pytest.raises(ParseError):
            ingest_text("id,label,p,q\n")

    def test_empty(self):
        with pytest.raises(EmptyInput):
            ingest_text("")
        with pytest.raises(EmptyInput):
            ingest_text("sample_id,class,true,pred\n")

    def test_mixed_classes(self):
        with pytest.raises(MixedCodeframes):
            ingest_text("sample_id,class,true,pred\ns1,a,0.5,0.5\ns1,b,0.5,0.5\ns2,a,0.5,0.5\ns2,c,0.5,0.5\n")

    def test_collect_reports_every_bad_sample(self):
        text = "sample_id,class,true,pred\ns1,a,0.2,0.2\ns1,b,0.7,0.8\ns2,a,0.5,0.6\ns2,b,0.5,0.5\ns3,a,0.5,0.5\ns3,b,0.5,0.5\n"
        records, problems = ingest_collect(io.StringIO(text), "csv")
        assert [r.sample_id for r in records] == ["s3"]
        assert len(problems) == 2

    def test_path_input(self, tmp_path):
        path = tmp_path / "b2.csv"
        path.write_text(B2_CSV, encoding="utf-8")
        assert len(ingest(path)) == 1


class TestIngestJson:
    def test_records_with_size(self, tmp_path):
        data = [
            {"id": "a", "size": 1000, "true": {"x": 0.01, "y": 0.99}, "pred": {"x": 0.02, "y": 0.98}},
            {"id": "b", "true": {"x": 0.5, "y": 0.5}, "pred": {"y": 0.4, "x": 0.6}},
        ]
        path = tmp_path / "s.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        a, b = ingest(path)
        assert a.sample_size == 1000 and b.sample_size is None
        np.testing.assert_allclose(b.pred_prev.values, [0.6, 0.4])

    def test_parse_error_has_record(self):
        with pytest.raises(ParseError) as info:
            ingest_text('[{"id": "a", "true": {"x": 1.0, "y": 0.0}, "pred": {"x": 1.0, "y": 0.0}}, {"id": "b"}]', "json")
        assert info.value.locus == "record 1"

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            ingest_text("[{", "json")

    def test_empty_array(self):
        with pytest.raises(EmptyInput):
            ingest_text("[]", "json")

    def test_bad_size(self):
        with pytest.raises(ParseError):
            ingest_text('[{"id": "a", "size": 0, "true": {"x": 1.0, "y": 0.0}, "pred": {"x": 1.0, "y": 0.0}}]', "json")

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantaxioms import axioms
from quantaxioms.axioms import (
    NKLD_MAX_TOLERANCE,
    Status,
    Verdict,
    bmon_derivative,
    check_property,
    evaluate_scenario,
    grid_from_json,
    property_matrix,
    replay,
)
from quantaxioms.errors import (
    DomainError,
    HypothesisViolation,
    IncompatiblePair,
    NoFixedScenario,
    UnsupportedMeasure,
)
from quantaxioms.measures import TABLE_MEASURES, EvalContext, MeasureId, score
from quantaxioms.scenarios import PropertyId, Scenario, fixed_scenarios, parse_property

from conftest import prev


def _binary_fd(measure, a, x, h=1e-6):
    """Central difference of D((a,1-a),(x,1-x)) along the direction that grows |a - x|."""
    ctx = EvalContext()
    scale = 2.0 if measure == "PD" else 1.0  # derivative refers to the unaveraged sum

    def d(xx):
        return scale * score(measure, prev(a, 1 - a), prev(xx, 1 - xx), ctx)

    return np.sign(x - a) * (d(x + h) - d(x - h)) / (2 * h)


class TestParseProperty:
    @pytest.mark.parametrize("text, prop", [("ioi", PropertyId.IOI), ("b-mon", PropertyId.B_MON),
                                            ("B_REL", PropertyId.B_REL), ("bimp", PropertyId.B_IMP)])
    def test_spellings(self, text, prop):
        assert parse_property(text) is prop

    def test_general_form(self):
        assert PropertyId.B_ABS.general is PropertyId.ABS
        assert PropertyId.IND.general is PropertyId.IND


class TestFixedScenarios:
    def test_max(self):
        (s,) = fixed_scenarios("MAX")
        assert s.label == "B.1"
        assert len(s.true_dists) == 2
        np.testing.assert_array_equal(s.true_dists[0].values, [0.01, 0.99])
        np.testing.assert_array_equal(s.true_dists[1].values, [0.49, 0.51])
        np.testing.assert_array_equal(s.pred_dists[0].values, [1.0, 0.0])
        assert s.smoothing.epsilon == 5e-7

    def test_imp(self):
        (s,) = fixed_scenarios(PropertyId.IMP)
        np.testing.assert_array_equal(s.pred_dists[1].values, [0.15, 0.85])

    def test_rel_pair(self):
        (s,) = fixed_scenarios("REL")
        assert s.label == "B.3"
        np.testing.assert_array_equal(s.true_dists[1].values, [0.25, 0.75])
        np.testing.assert_array_equal(s.pred_dists[1].values, [0.75, 0.25])

    def test_abs_reuses_rel_pair(self):
        (rel,) = fixed_scenarios("REL")
        (abs_,) = fixed_scenarios("ABS")
        assert rel.true_dists == abs_.true_dists and rel.pred_dists == abs_.pred_dists

    def test_binary_forms(self):
        assert fixed_scenarios("B-IMP")[0].label == "B.2"

    @pytest.mark.parametrize("prop", ["IoI", "NN", "MON", "IND", "B-MON"])
    def test_none_for_other_properties(self, prop):
        with pytest.raises(NoFixedScenario):
            fixed_scenarios(prop)


class TestScenarioHypotheses:
    def test_mon_requires_matching_change(self):
        with pytest.raises(HypothesisViolation):
            Scenario(PropertyId.MON, (prev(0.3, 0.7),), (prev(0.2, 0.8), prev(0.25, 0.75)))

    def test_mon_accepts_valid(self):
        Scenario(PropertyId.MON, (prev(0.3, 0.7),), (prev(0.2, 0.8), prev(0.1, 0.9)))

    def test_imp_requires_mirror(self):
        with pytest.raises(HypothesisViolation):
            Scenario(PropertyId.IMP, (prev(0.2, 0.8),), (prev(0.25, 0.75), prev(0.1, 0.9)))

    def test_rel_requires_ordering(self):
        with pytest.raises(HypothesisViolation):
            Scenario(
                PropertyId.REL,
                (prev(0.25, 0.75), prev(0.2, 0.8)),
                (prev(0.75, 0.25), prev(0.7, 0.3)),
            )

    def test_rel_other_classes_free_but_shared(self):
        # Four-class case: c3, c4 predictions differ from the truth but agree.
        Scenario(
            PropertyId.REL,
            (prev(0.15, 0.35, 0.40, 0.10), prev(0.20, 0.30, 0.40, 0.10)),
            (prev(0.10, 0.40, 0.30, 0.20), prev(0.15, 0.35, 0.30, 0.20)),
        )
        with pytest.raises(HypothesisViolation):
            Scenario(
                PropertyId.REL,
                (prev(0.15, 0.35, 0.40, 0.10), prev(0.20, 0.30, 0.40, 0.10)),
                (prev(0.10, 0.40, 0.30, 0.20), prev(0.15, 0.35, 0.25, 0.25)),
            )

    def test_ind_needs_proper_subset(self):
        p = prev(0.2, 0.3, 0.5)
        with pytest.raises(HypothesisViolation):
            Scenario(PropertyId.IND, (p,), (p, p), subset=("c1", "c2", "c3"))

    def test_ind_dropped_classes_must_agree(self):
        p = prev(0.2, 0.3, 0.5)
        with pytest.raises(HypothesisViolation):
            Scenario(PropertyId.IND, (p,), (prev(0.3, 0.3, 0.4), prev(0.3, 0.2, 0.5)), subset=("c1", "c2"))

    def test_binary_property_needs_two_classes(self):
        p = prev(0.2, 0.3, 0.5)
        with pytest.raises(HypothesisViolation):
            Scenario(PropertyId.B_IMP, (p,), (p, p))

    def test_round_trip(self):
        (s,) = fixed_scenarios("MAX")
        again = Scenario.from_dict(json.loads(json.dumps(s.to_dict())))
        assert again == s

    @pytest.mark.parametrize("prop", list(PropertyId))
    def test_generated_scenarios_satisfy_hypothesis(self, prop):
        sizes = axioms._class_sizes(MeasureId.AE, prop, None)
        for g in axioms._block(prop, 3, 0, sizes):
            extra = {}
            if prop.general is PropertyId.MAX:
                extra = {"q1": g.arrays["p1"], "q2": g.arrays["p2"]}
            for row in range(min(20, g.index.size)):
                s = axioms._build_scenario(prop, g, row, extra, int(g.index[row]))
                assert len(s.codeframe) == g.key[0]


class TestCheckProperty:
    def test_ae_abs_unfalsified(self):
        v = check_property("AE", "ABS", 10_000, seed=0)
        assert v.status is Status.UNFALSIFIED
        assert v.trials_run == 10_000
        assert v.counterexample is None

    def test_kld_imp_fixed_counterexample(self):
        v = check_property("KLD", "IMP", 1, seed=5)
        assert v.falsified and v.counterexample.scenario.label == "B.2"
        vals = list(v.counterexample.values.values())
        assert round(vals[0], 4) == 0.0070 and round(vals[1], 4) == 0.0090

    def test_nae_abs_fixed_counterexample(self):
        v = check_property("NAE", "ABS", 1)
        assert v.counterexample.scenario.label == "B.4"
        np.testing.assert_allclose(list(v.counterexample.values.values()), [0.6250, 0.6667], atol=5e-5)

    def test_budget_zero_runs_fixed_only(self):
        v = check_property("AE", "IoI", 0)
        assert v.status is Status.UNFALSIFIED and v.trials_run == 0
        assert check_property("KLD", "IMP", 0).falsified

    def test_nn_unfalsified(self):
        assert not check_property("AE", "NN", 10_000).falsified

    @pytest.mark.parametrize("measure", ["NAS", "NSS"])
    def test_binary_measure_with_more_classes(self, measure):
        with pytest.raises(IncompatiblePair):
            check_property(measure, "IoI", 10, n_classes=3)
        with pytest.raises(IncompatiblePair):
            check_property(measure, "IND", 10)

    def test_binary_measure_on_two_classes(self):
        assert not check_property("NAS", "IoI", 200).falsified

    def test_binary_property_with_more_classes(self):
        with pytest.raises(IncompatiblePair):
            check_property("AE", "B-MON", 10, n_classes=4)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            check_property("AE", "IoI", -1)
        with pytest.raises(ValueError):
            check_property("AE", "IoI", 10, tolerance=0.0)

    def test_pinned_class_count(self):
        v = check_property("DR", "REL", 10_000, seed=1, n_classes=3)
        assert v.falsified
        assert len(v.counterexample.scenario.codeframe) == 3

    def test_deterministic(self):
        a = check_property("DR", "REL", 5000, seed=11)
        b = check_property("DR", "REL", 5000, seed=11)
        assert a == b

    def test_counterexample_independent_of_budget(self):
        full = check_property("DR", "REL", 10_000, seed=2)
        trial = full.trials_run
        short = check_property("DR", "REL", trial, seed=2)
        assert short.counterexample == full.counterexample
        assert not check_property("DR", "REL", trial - 1, seed=2).falsified

    def test_falsified_needs_counterexample(self):
        with pytest.raises(ValueError):
            Verdict(MeasureId.AE, PropertyId.IOI, Status.FALSIFIED, None, 0, 0, 0, 1e-9)


class TestReplay:
    @pytest.mark.parametrize(
        "measure, prop",
        [("KLD", "IMP"), ("AE", "MAX"), ("DR", "REL"), ("AE", "IND"), ("SE", "IND"), ("NAE", "ABS")],
    )
    def test_reproduces_violation_exactly(self, measure, prop):
        v = check_property(measure, prop, 10_000, seed=0)
        assert v.falsified
        violated, values = replay(v)
        assert violated
        assert values == v.counterexample.values

    def test_replay_after_serialization(self):
        v = check_property("RAE", "IND", 10_000, seed=0)
        data = json.loads(json.dumps(v.to_dict()))
        s = Scenario.from_dict(data["counterexample"]["scenario"])
        holds, values = evaluate_scenario("RAE", s, v.tolerance)
        assert not holds
        assert values == data["counterexample"]["values"]

    def test_nothing_to_replay(self):
        with pytest.raises(ValueError):
            replay(check_property("AE", "IoI", 10))


class TestIdentityCheck:
    def test_includes_exact_match(self):
        groups = axioms._block(PropertyId.IOI, 0, 0, axioms.CLASS_SIZES)
        for g in groups:
            values, _ = axioms._group_values(MeasureId.KLD, PropertyId.IOI, g)
            assert values["D(p,p)"].shape == g.index.shape
            assert np.all(values["D(p,p)"] == 0.0)

    def test_identical_prediction_scenario(self):
        p = prev(0.3, 0.7)
        holds, values = evaluate_scenario("AE", Scenario(PropertyId.IOI, (p,), (p,)))
        assert holds and values["D(p,q)"] == 0.0


class TestMaxTolerance:
    def test_nkld_unfalsified(self):
        assert not check_property("NKLD", "MAX", 2000).falsified

    def test_fixed_scenario_spread_exceeds_strict_band(self):
        # The two suprema differ by more than 1e-3 but less than the NKLD band.
        (s,) = fixed_scenarios("MAX")
        holds, values = evaluate_scenario("NKLD", s)
        spread = abs(values["D(p',q')"] - values["D(p'',q'')"])
        assert holds and 1e-3 < spread < NKLD_MAX_TOLERANCE

    @pytest.mark.parametrize("measure", ["NAE", "NRAE"])
    def test_normalized_measures_unfalsified(self, measure):
        assert not check_property(measure, "MAX", 2000).falsified


class TestReformulations:
    @pytest.mark.parametrize("measure", TABLE_MEASURES)
    def test_mon_general_and_binary_agree(self, measure):
        general = check_property(measure, "MON", 1000, seed=4)
        binary = check_property(measure, "B-MON", 1000, seed=4)
        assert general.status is binary.status

    @pytest.mark.parametrize("measure", TABLE_MEASURES)
    def test_rel_and_abs_exclusive_on_fixed_scenarios(self, measure):
        rel = check_property(measure, "REL", 0)
        abs_ = check_property(measure, "ABS", 0)
        assert rel.falsified or abs_.falsified


class TestBmonDerivative:
    def test_kld_example(self):
        assert bmon_derivative("KLD", 0.5, 0.3) == pytest.approx(0.952381, abs=5e-7)

    def test_pd_example(self):
        assert bmon_derivative("PD", 0.5, 0.3) == pytest.approx(2.267574, abs=5e-7)

    @pytest.mark.parametrize("a, x", [(0.0, 0.3), (0.5, 1.0), (0.4, 0.4), (-0.1, 0.2), (float("nan"), 0.5)])
    def test_domain(self, a, x):
        with pytest.raises(DomainError):
            bmon_derivative("KLD", a, x)

    def test_other_measures(self):
        with pytest.raises(UnsupportedMeasure):
            bmon_derivative("AE", 0.2, 0.3)

    @pytest.mark.parametrize("measure", ["KLD", "PD"])
    def test_matches_finite_difference(self, rng, measure):
        pts = rng.uniform(0.05, 0.95, size=(100, 2))
        for a, x in pts:
            if abs(a - x) < 1e-4:
                continue
            assert bmon_derivative(measure, a, x) == pytest.approx(_binary_fd(measure, a, x), abs=1e-5)

    @given(st.floats(0.001, 0.999), st.floats(0.001, 0.999))
    @settings(max_examples=300, deadline=None)
    def test_strictly_positive(self, a, x):
        if a == x:
            return
        assert bmon_derivative("KLD", a, x) > 0
        assert bmon_derivative("PD", a, x) > 0


class TestPropertyMatrix:
    def test_shape_and_gating(self):
        m = property_matrix(budget=300, seed=0)
        grid = m.grid()
        assert list(grid) == [str(x) for x in TABLE_MEASURES]
        assert all(len(row) == 8 for row in grid.values())
        # KLD survives IND, so MON..ABS use the binary forms.
        assert m["KLD", "IMP"].property is PropertyId.B_IMP
        assert m["AE", "IMP"].property is PropertyId.IMP
        assert grid_from_json(m.to_json()) == grid

    def test_render_is_aligned(self):
        m = property_matrix(budget=0, seed=0, measures=["AE", "NKLD"])
        lines = m.render().splitlines()
        assert len({len(line) for line in lines}) == 1

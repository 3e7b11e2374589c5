#include <doctest.h>

#include <cmath>

#include "aplr/interpret.hpp"
#include "helpers.hpp"

using namespace aplr;

namespace {

const std::vector<std::string> kNames = {"m_ta", "m_helpful", "m_boring", "m_timeManage",
                                         "mode_Pre-recorded"};

AplrModel tiny_classifier() {
    AplrModel model;
    model.task = Task::classification;
    model.class_labels = {0.0, 1.0};
    model.feature_names = kNames;

    Submodel pos;
    pos.intercept = -1.832;
    pos.terms.push_back(Term::make({3, BasisKind::linear, 0.0}, {}, 0.447));
    pos.terms.push_back(
        Term::make({0, BasisKind::hinge_neg, 0.0}, {{1, BasisKind::linear, 0.0}}, 0.374));
    pos.terms.push_back(
        Term::make({3, BasisKind::linear, 0.0}, {{2, BasisKind::hinge_pos, 0.0}}, 0.147));

    Submodel neg = pos;
    neg.intercept = -pos.intercept;
    for (auto& t : neg.terms) t.coefficient = -t.coefficient;

    model.submodels = {neg, pos};
    return model;
}

}  // namespace

TEST_CASE("terms render in the report style") {
    CHECK(render_term(Term::make({3, BasisKind::linear, 0.0}, {}), kNames) == "m_timeManage");
    CHECK(render_term(Term::make({0, BasisKind::hinge_neg, 0.0}, {}), kNames) == "min(m_ta-0,0)");
    CHECK(render_term(Term::make({0, BasisKind::hinge_neg, 0.0},
                                 {{1, BasisKind::linear, 0.0}}),
                      kNames) == "min(m_ta-0,0) * I(m_helpful!=0)");
    CHECK(render_term(Term::make({3, BasisKind::linear, 0.0},
                                 {{2, BasisKind::hinge_pos, 0.0}}),
                      kNames) == "m_timeManage * I(max(m_boring-0,0)!=0)");
    // negative splits render with a plus
    CHECK(render_term(Term::make({2, BasisKind::hinge_pos, -1.0}, {}), kNames) ==
          "max(m_boring+1,0)");
}

TEST_CASE("expression rendering round-trips") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        BasisFunction base{static_cast<int>(rng.next_below(kNames.size())),
                           static_cast<BasisKind>(rng.next_below(3)),
                           std::round((rng.next_unit() * 8 - 4) * 4) / 4};
        if (base.kind == BasisKind::linear) base.split = 0.0;
        std::vector<BasisFunction> gates;
        for (std::size_t g = 0; g < rng.next_below(3); ++g) {
            BasisFunction gate{static_cast<int>(rng.next_below(kNames.size())),
                               static_cast<BasisKind>(rng.next_below(3)),
                               std::round((rng.next_unit() * 8 - 4) * 4) / 4};
            if (gate.kind == BasisKind::linear) gate.split = 0.0;
            gates.push_back(gate);
        }
        Term t = Term::make(base, gates);
        Term back = parse_term_expression(render_term(t, kNames), kNames);
        CHECK(back == t);
    }
}

TEST_CASE("round-trip survives scientific-notation splits and dashed names") {
    Term t = Term::make({4, BasisKind::hinge_pos, 1e-5}, {{4, BasisKind::hinge_neg, -2.5e-7}});
    Term back = parse_term_expression(render_term(t, kNames), kNames);
    CHECK(back == t);
}

TEST_CASE("term_table lists the intercept then insertion order") {
    auto model = tiny_classifier();
    auto table = term_table(model, 1);
    REQUIRE(table.rows.size() == 4);
    CHECK(!table.rows[0].interaction_level.has_value());
    CHECK(table.rows[0].expression == "Intercept");
    CHECK(table.rows[0].coefficient == -1.832);
    CHECK(table.rows[1].expression == "m_timeManage");
    CHECK(table.rows[1].coefficient == 0.447);
    CHECK(table.rows[2].interaction_level == 1);
    CHECK(table.rows[2].expression == "min(m_ta-0,0) * I(m_helpful!=0)");

    auto negated = term_table(model, 0);
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        CHECK(negated.rows[i].coefficient == -table.rows[i].coefficient);

    AplrModel intercept_only;
    intercept_only.task = Task::regression;
    intercept_only.feature_names = {"a"};
    intercept_only.submodels.push_back({3.5, {}});
    CHECK(term_table(intercept_only, 0).rows.size() == 1);
}

TEST_CASE("gated terms contribute only when the gate is open") {
    auto model = tiny_classifier();
    // m_ta = -1, m_helpful = 0: P7-style term stays silent
    auto x = test::make_matrix(kNames, {{-1, 0, 0, 0, 0}, {-1, 1, 0, 0, 0}});
    auto ex0 = local_contributions(model, x, 0, 1);
    auto ex1 = local_contributions(model, x, 1, 1);
    CHECK(ex0.contributions[0].second == 0.0);
    CHECK(ex1.contributions[0].second == doctest::Approx(-0.374));
}

TEST_CASE("local contributions add up to the submodel logit") {
    Rng rng(41);
    std::vector<std::vector<double>> rows;
    Labels y{{}, LabelKind::binary};
    for (int i = 0; i < 60; ++i) {
        std::vector<double> r;
        for (int j = 0; j < 3; ++j) r.push_back(double(rng.next_below(5)) - 2);
        y.y.push_back(r[0] + r[1] > 0 ? 1.0 : 0.0);
        rows.push_back(r);
    }
    auto x = test::make_matrix({"a", "b", "c"}, rows);
    Hyperparams hp;
    hp.boosting_steps = 80;
    hp.min_observations_in_split = 5;
    hp.early_stop.mode = EarlyStop::Mode::off;
    auto model = fit(x, y, hp, Task::classification);
    auto pred = predict(model, x);

    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t cls = 0; cls < 2; ++cls) {
            auto ex = local_contributions(model, x, i, cls);
            double sum = ex.intercept;
            for (const auto& [name, c] : ex.contributions) sum += c;
            CHECK(std::abs(sum - pred.logits[cls][i]) <= 1e-12);
        }
        // default class is the prediction
        auto ex = local_contributions(model, x, i);
        CHECK(model.class_labels[ex.class_index] == pred.labels[i]);
    }

    AplrModel intercept_only;
    intercept_only.task = Task::regression;
    intercept_only.feature_names = {"a", "b", "c"};
    intercept_only.submodels.push_back({1.0, {}});
    auto ex = local_contributions(intercept_only, x, 0);
    for (const auto& [name, c] : ex.contributions) CHECK(c == 0.0);
}

TEST_CASE("local contributions require the model features") {
    auto model = tiny_classifier();
    auto x = test::make_matrix({"m_ta"}, {{1}});
    CHECK_THROWS_AS(local_contributions(model, x, 0, 1), data_error);
}

TEST_CASE("global importance: zeros for unused features, negation invariant") {
    auto model = tiny_classifier();
    Rng rng(55);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> r;
        for (std::size_t j = 0; j < kNames.size(); ++j)
            r.push_back(double(rng.next_below(5)) - 2);
        rows.push_back(r);
    }
    auto x = test::make_matrix(kNames, rows);

    auto gi = global_importance(model, x);
    REQUIRE(gi.entries.size() == kNames.size());
    double helpful = -1, pre = -1;
    for (const auto& [name, v] : gi.entries) {
        if (name == "m_helpful") helpful = v;               // gate only, never main
        if (name == "mode_Pre-recorded") pre = v;           // absent everywhere
    }
    CHECK(helpful == 0.0);
    CHECK(pre == 0.0);
    CHECK(std::is_sorted(gi.entries.begin(), gi.entries.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; }));

    // averaging over the two negated submodels equals the positive-only std
    AplrModel pos_only = model;
    pos_only.class_labels = {1.0};
    pos_only.submodels = {model.submodels[1]};
    auto gi_pos = global_importance(pos_only, x);
    for (std::size_t i = 0; i < gi.entries.size(); ++i) {
        CHECK(gi.entries[i].first == gi_pos.entries[i].first);
        CHECK(gi.entries[i].second == doctest::Approx(gi_pos.entries[i].second).epsilon(1e-12));
    }

    // permutation invariance over rows
    std::vector<std::size_t> perm(rows.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    auto gi_perm = global_importance(model, x.take_rows(perm));
    for (std::size_t i = 0; i < gi.entries.size(); ++i)
        CHECK(gi.entries[i].second == doctest::Approx(gi_perm.entries[i].second).epsilon(1e-12));
}

TEST_CASE("shape_curve reflects hinge geometry and matches ungated contributions") {
    AplrModel model;
    model.task = Task::regression;
    model.feature_names = {"a", "b"};
    Submodel sm;
    sm.intercept = 0.3;
    sm.terms.push_back(Term::make({0, BasisKind::hinge_pos, 0.0}, {}, 2.0));
    sm.terms.push_back(Term::make({0, BasisKind::linear, 0.0},
                                  {{1, BasisKind::linear, 0.0}}, 0.7));
    sm.terms.push_back(Term::make({1, BasisKind::linear, 0.0}, {}, -1.0));
    model.submodels.push_back(sm);

    std::vector<double> grid{-2, -1, 0, 1, 2};
    auto curve = shape_curve(model, "a", grid, 0);
    REQUIRE(curve.points.size() == 5);
    CHECK(curve.points[0].second == 0.0);   // below the split
    CHECK(curve.points[1].second == 0.0);
    CHECK(curve.points[2].second == 0.0);   // at the split
    CHECK(curve.points[3].second == 2.0);   // slope 2 above
    CHECK(curve.points[4].second == 4.0);
    REQUIRE(curve.gated.size() == 1);
    CHECK(curve.gated[0].first == "a * I(b!=0)");
    CHECK(curve.gated[0].second[4].second == doctest::Approx(1.4));

    // ungated part agrees with local contributions when gates are closed
    auto x = test::make_matrix({"a", "b"}, {{1.0, 0.0}});
    auto ex = local_contributions(model, x, 0);
    CHECK(ex.contributions[0].second == doctest::Approx(curve.points[3].second).epsilon(1e-12));

    CHECK_THROWS_AS(shape_curve(model, "nope", grid, 0), data_error);

    // a linear-only feature yields an affine curve
    auto curve_b = shape_curve(model, "b", grid, 0);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        double d1 = curve_b.points[i].second - curve_b.points[i - 1].second;
        double d2 = curve_b.points[i + 1].second - curve_b.points[i].second;
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-12));
    }
}

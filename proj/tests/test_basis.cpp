#include <doctest.h>

#include <algorithm>
#include <set>

#include "aplr/basis.hpp"
#include "aplr/boost.hpp"
#include "helpers.hpp"

using namespace aplr;

TEST_CASE("candidate_splits on a Likert column") {
    std::vector<double> col;
    for (int level = -2; level <= 2; ++level)
        for (int k = 0; k < 5; ++k) col.push_back(level);
    auto splits = candidate_splits(col, 3);
    std::set<double> allowed{-2, -1, 0, 1, 2};
    CHECK(!splits.empty());
    for (double v : splits) CHECK(allowed.contains(v));
    // extremes cannot keep 3 rows strictly beyond them
    CHECK(std::find(splits.begin(), splits.end(), -2.0) == splits.end());
    CHECK(std::find(splits.begin(), splits.end(), 2.0) == splits.end());
}

TEST_CASE("candidate_splits on a constant column is empty") {
    std::vector<double> col(30, 1.5);
    CHECK(candidate_splits(col, 2).empty());
}

TEST_CASE("candidate_splits keeps min_obs rows strictly on both sides") {
    Rng rng(11);
    std::vector<double> col;
    for (int i = 0; i < 100; ++i) col.push_back(rng.next_unit());
    const int min_obs = 20;
    auto splits = candidate_splits(col, min_obs);
    CHECK(!splits.empty());
    for (double v : splits) {
        // brute-force count oracle
        int below = 0, above = 0;
        for (double x : col) {
            below += x < v;
            above += x > v;
        }
        CHECK(below >= min_obs);
        CHECK(above >= min_obs);
    }
}

TEST_CASE("candidate_splits caps high-cardinality columns at 100 quantiles") {
    std::vector<double> col;
    for (int i = 0; i < 1000; ++i) col.push_back(i * 0.001);
    auto splits = candidate_splits(col, 5);
    CHECK(splits.size() <= 100);
    CHECK(std::is_sorted(splits.begin(), splits.end()));
}

TEST_CASE("eval_term matches the basis definitions") {
    auto x = test::make_matrix({"a"}, {{-2}, {0}, {1}});

    Term neg = Term::make({0, BasisKind::hinge_neg, 0.0}, {});
    CHECK(eval_term(neg, x) == std::vector<double>{-2, 0, 0});

    Term lin = Term::make({0, BasisKind::linear, 0.0}, {});
    CHECK(eval_term(lin, x) == std::vector<double>{-2, 0, 1});

    Term pos = Term::make({0, BasisKind::hinge_pos, -1.0}, {});
    CHECK(eval_term(pos, x) == std::vector<double>{0, 1, 2});
}

TEST_CASE("gated term only contributes when every gate is open") {
    // min(m_ta-0,0) * I(m_helpful!=0)
    auto x = test::make_matrix({"m_ta", "m_helpful"}, {{-1, 0}, {-1, 2}, {1, 2}, {0, 1}});
    Term t = Term::make({0, BasisKind::hinge_neg, 0.0}, {{1, BasisKind::linear, 0.0}});
    auto v = eval_term(t, x);
    CHECK(v[0] == 0.0);   // gate closed: m_helpful == 0
    CHECK(v[1] == -1.0);  // gate open, hinge active
    CHECK(v[2] == 0.0);   // hinge inactive
    CHECK(v[3] == 0.0);
}

TEST_CASE("hinges are continuous, piecewise linear and zero on the inactive side") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        double split = -2.0 + 4.0 * rng.next_unit();
        BasisFunction pos{0, BasisKind::hinge_pos, split};
        BasisFunction neg{0, BasisKind::hinge_neg, split};
        CHECK(pos(split) == 0.0);
        CHECK(neg(split) == 0.0);
        double eps = 1e-9;
        CHECK(pos(split - 1.0) == 0.0);
        CHECK(neg(split + 1.0) == 0.0);
        CHECK(pos(split + eps) == doctest::Approx(eps));
        CHECK(neg(split - eps) == doctest::Approx(-eps));
        // slope 1 on the active side
        CHECK(pos(split + 2.0) - pos(split + 1.0) == doctest::Approx(1.0));
        CHECK(neg(split - 2.0) - neg(split - 1.0) == doctest::Approx(-1.0));
    }
}

TEST_CASE("gating twice by the same parent equals gating once") {
    auto x = test::make_matrix({"a", "b"}, {{1, 2}, {0, 3}, {-1, 0}, {2, -2}});
    BasisFunction gate{1, BasisKind::linear, 0.0};
    Term once = Term::make({0, BasisKind::linear, 0.0}, {gate});
    Term twice = Term::make({0, BasisKind::linear, 0.0}, {gate, gate});
    CHECK(once == twice);
    CHECK(eval_term(once, x) == eval_term(twice, x));
    CHECK(twice.interaction_level() == 1);
}

TEST_CASE("enumerate_candidates without interactions") {
    Hyperparams hp;
    hp.max_interaction_level = 0;
    hp.min_observations_in_split = 2;

    // two Likert columns with all levels populated twice
    std::vector<std::vector<double>> rows;
    for (int level = -2; level <= 2; ++level)
        for (int k = 0; k < 2; ++k) rows.push_back({double(level), double(-level)});
    auto x = test::make_matrix({"a", "b"}, rows);

    auto set = enumerate_candidates(x, {}, hp);
    for (const auto& t : set.terms) CHECK(t.gates.empty());

    // count oracle: per column, 1 linear + 2 hinges per admissible split
    std::size_t expected = 0;
    for (std::size_t j = 0; j < 2; ++j)
        expected += 1 + 2 * candidate_splits(x.column(j), hp.min_observations_in_split).size();
    CHECK(set.terms.size() == expected);
}

TEST_CASE("enumerate_candidates adds single-gate interactions at level cap 1") {
    Hyperparams hp;
    hp.max_interaction_level = 1;
    hp.min_observations_in_split = 2;

    std::vector<std::vector<double>> rows;
    for (int level = -2; level <= 2; ++level)
        for (int k = 0; k < 2; ++k) rows.push_back({double(level), double(level * level - 2)});
    auto x = test::make_matrix({"a", "b"}, rows);

    Term parent = Term::make({0, BasisKind::linear, 0.0}, {}, 0.5);
    auto set = enumerate_candidates(x, {parent}, hp);

    std::size_t gated = 0;
    for (const auto& t : set.terms) {
        CHECK(t.interaction_level() <= 1);
        if (t.interaction_level() == 1) {
            ++gated;
            CHECK(t.gates[0] == parent.base);
        }
    }
    CHECK(gated > 0);

    // terms already in the model reappear as candidates
    bool parent_again = false;
    for (const auto& t : set.terms) parent_again = parent_again || t == parent;
    CHECK(parent_again);
}

TEST_CASE("every candidate keeps min_obs effective observations") {
    Rng rng(17);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 60; ++i)
        rows.push_back({double(rng.next_below(5)) - 2.0, double(rng.next_below(3)) - 1.0});
    auto x = test::make_matrix({"a", "b"}, rows);

    Hyperparams hp;
    hp.max_interaction_level = 1;
    hp.min_observations_in_split = 7;
    Term parent = Term::make({1, BasisKind::hinge_pos, 0.0}, {}, 1.0);
    auto set = enumerate_candidates(x, {parent}, hp);

    for (const auto& t : set.terms) {
        auto vals = eval_term(t, x);
        std::size_t n_eff = 0;
        for (double v : vals) n_eff += v != 0.0;
        CHECK(n_eff >= 7);
    }
}

TEST_CASE("parents at the level cap do not spawn deeper candidates") {
    Hyperparams hp;
    hp.max_interaction_level = 1;
    hp.min_observations_in_split = 1;
    auto x = test::make_matrix({"a", "b"}, {{1, 1}, {-1, 2}, {2, -1}, {-2, -2}});
    Term level1 = Term::make({0, BasisKind::linear, 0.0}, {{1, BasisKind::linear, 0.0}});
    auto set = enumerate_candidates(x, {level1}, hp);
    for (const auto& t : set.terms) CHECK(t.interaction_level() == 0);
}

#include <doctest.h>

#include <algorithm>

#include "aplr/metrics.hpp"
#include "helpers.hpp"

using namespace aplr;

namespace {

// O(n^2) pairwise oracle: mean of [s+ > s-] + 0.5 [s+ == s-].
double auc_bruteforce(const std::vector<double>& s, const std::vector<double>& y) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1.0) continue;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] != 0.0) continue;
            ++pairs;
            if (s[i] > s[j])
                wins += 1.0;
            else if (s[i] == s[j])
                wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("perfect predictions score 1 everywhere") {
    std::vector<double> y{1, 0, 1, 1, 0};
    auto r = classification_metrics(y, y, 1.0);
    CHECK(r.accuracy == 1.0);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
}

TEST_CASE("confusion counts match hand arithmetic on the 61-row layout") {
    // tp=35 fp=3 fn=4 tn=19
    std::vector<double> y_true, y_pred;
    auto add = [&](int n, double t, double p) {
        for (int i = 0; i < n; ++i) {
            y_true.push_back(t);
            y_pred.push_back(p);
        }
    };
    add(35, 1, 1);
    add(3, 0, 1);
    add(4, 1, 0);
    add(19, 0, 0);

    auto r = classification_metrics(y_true, y_pred, 1.0);
    CHECK(r.tp == 35);
    CHECK(r.fp == 3);
    CHECK(r.fn == 4);
    CHECK(r.tn == 19);
    CHECK(r.accuracy == doctest::Approx(54.0 / 61.0).epsilon(1e-15));
    CHECK(r.precision == doctest::Approx(35.0 / 38.0).epsilon(1e-15));
    CHECK(r.recall == doctest::Approx(35.0 / 39.0).epsilon(1e-15));
    CHECK(r.f1 == doctest::Approx(70.0 / 77.0).epsilon(1e-15));
}

TEST_CASE("degenerate predictions flag the undefined metric") {
    std::vector<double> y_true{1, 0, 1}, y_pred{0, 0, 0};
    auto r = classification_metrics(y_true, y_pred, 1.0);
    CHECK_FALSE(r.precision_defined);
    CHECK(r.precision == 0.0);
    CHECK(r.recall_defined);
    CHECK(r.recall == 0.0);
}

TEST_CASE("metrics are invariant under simultaneous permutation") {
    Rng rng(5);
    std::vector<double> y_true, y_pred;
    for (int i = 0; i < 40; ++i) {
        y_true.push_back(rng.next_below(2));
        y_pred.push_back(rng.next_below(2));
    }
    auto base = classification_metrics(y_true, y_pred, 1.0);

    std::vector<std::size_t> perm(40);
    for (std::size_t i = 0; i < 40; ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<double> t2, p2;
    for (auto i : perm) {
        t2.push_back(y_true[i]);
        p2.push_back(y_pred[i]);
    }
    auto permuted = classification_metrics(t2, p2, 1.0);
    CHECK(base.accuracy == permuted.accuracy);
    CHECK(base.precision == permuted.precision);
    CHECK(base.recall == permuted.recall);
    CHECK(base.f1 == permuted.f1);
}

TEST_CASE("auc on separated and tied scores") {
    std::vector<double> y{0, 0, 1, 1};
    CHECK(auc({{0.1, 0.2, 0.8, 0.9}}, y) == 1.0);
    CHECK(auc({{0.5, 0.5, 0.5, 0.5}}, y) == 0.5);
    CHECK(auc({{0.9, 0.8, 0.2, 0.1}}, y) == 0.0);
}

TEST_CASE("auc equals the pairwise oracle on tied random data") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 5 + rng.next_below(25);
        std::vector<double> s, y;
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            s.push_back(static_cast<double>(rng.next_below(6)) / 2.0);  // heavy ties
            double cls = static_cast<double>(rng.next_below(2));
            y.push_back(cls);
            (cls == 0.0 ? has0 : has1) = true;
        }
        if (!has0 || !has1) continue;
        CHECK(auc(s, y) == doctest::Approx(auc_bruteforce(s, y)).epsilon(1e-12));
    }
}

TEST_CASE("auc(s) + auc(-s) = 1 for tie-free scores") {
    Rng rng(7);
    std::vector<double> s, y;
    for (int i = 0; i < 30; ++i) {
        s.push_back(rng.next_unit());
        y.push_back(i % 2);
    }
    std::vector<double> neg;
    for (double v : s) neg.push_back(-v);
    CHECK(auc(s, y) + auc(neg, y) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("auc rejects single-class truth") {
    CHECK_THROWS_AS(auc({{0.1, 0.2}}, {{1, 1}}), data_error);
    CHECK_THROWS_AS(auc({{0.1}}, {{0.1, 0.2}}), data_error);
}

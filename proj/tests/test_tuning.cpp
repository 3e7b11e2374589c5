#include <doctest.h>

#include "aplr/tuning.hpp"
#include "helpers.hpp"

using namespace aplr;

namespace {

std::pair<EncodedMatrix, Labels> clf_data(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows;
    Labels y{{}, LabelKind::binary};
    for (std::size_t i = 0; i < n; ++i) {
        double a = double(rng.next_below(5)) - 2, b = double(rng.next_below(5)) - 2;
        double c = double(rng.next_below(5)) - 2;
        rows.push_back({a, b, c});
        double score = a + 0.5 * b + (rng.next_unit() - 0.5);
        y.y.push_back(score > 0.4 ? 1.0 : 0.0);
    }
    return {test::make_matrix({"a", "b", "c"}, rows), std::move(y)};
}

Hyperparams tuning_base(int steps = 120) {
    Hyperparams hp;
    hp.boosting_steps = steps;
    hp.learning_rate = 0.5;
    return hp;
}

}  // namespace

TEST_CASE("the default grid evaluates 12 cells") {
    auto [x, y] = clf_data(120, 1);
    TuneGrid grid = TuneGrid::default_grid();
    auto result = kfold_grid_search(x, y, grid, tuning_base(60), 42, Task::classification);
    CHECK(result.cells.size() == 12);
    // cell order: first axis slowest
    CHECK(result.cells[0].hp.max_interaction_level == 0);
    CHECK(result.cells[0].hp.min_observations_in_split == 20);
    CHECK(result.cells[1].hp.min_observations_in_split == 100);
    CHECK(result.cells[11].hp.max_interaction_level == 100);
    CHECK(result.cells[11].hp.min_observations_in_split == 500);
}

TEST_CASE("a single-cell grid returns that cell") {
    auto [x, y] = clf_data(80, 2);
    TuneGrid grid{{{"max_interaction_level", {1}}, {"min_observations_in_split", {10}}}, 4};
    auto result = kfold_grid_search(x, y, grid, tuning_base(40), 7, Task::classification);
    CHECK(result.cells.size() == 1);
    CHECK(result.best.max_interaction_level == 1);
    CHECK(result.best.min_observations_in_split == 10);
}

TEST_CASE("grid search is deterministic under the seed") {
    auto [x, y] = clf_data(100, 3);
    TuneGrid grid{{{"max_interaction_level", {0, 1}}, {"min_observations_in_split", {5, 15}}}, 4};
    auto a = kfold_grid_search(x, y, grid, tuning_base(60), 11, Task::classification);
    auto b = kfold_grid_search(x, y, grid, tuning_base(60), 11, Task::classification);
    CHECK(a.best == b.best);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].mean_loss == b.cells[i].mean_loss);
        CHECK(a.cells[i].mean_accuracy == b.cells[i].mean_accuracy);
    }
}

TEST_CASE("exact score ties prefer the simpler cell") {
    auto [x, y] = clf_data(90, 4);
    // duplicated values: all four cells run identical fits, so scores tie
    TuneGrid grid{{{"max_interaction_level", {2, 0}}, {"min_observations_in_split", {10, 10}}},
                  3};
    auto result = kfold_grid_search(x, y, grid, tuning_base(40), 5, Task::classification);
    bool all_equal = true;
    for (const auto& c : result.cells) all_equal &= c.mean_loss == result.cells[0].mean_loss;
    if (all_equal) CHECK(result.best.max_interaction_level == 0);
}

TEST_CASE("smote runs inside the folds without touching validation scores") {
    auto [x, y] = clf_data(110, 6);
    TuneGrid grid{{{"max_interaction_level", {0}}, {"min_observations_in_split", {8}}}, 4};
    SmoteConfig smote{3, 0, 1.0};
    auto with = kfold_grid_search(x, y, grid, tuning_base(50), 9, Task::classification, smote);
    auto without = kfold_grid_search(x, y, grid, tuning_base(50), 9, Task::classification);
    CHECK(with.cells.size() == 1);
    // balanced training data changes the fits, so scores should differ
    CHECK(with.cells[0].mean_loss != without.cells[0].mean_loss);
}

TEST_CASE("a fold with a single class is rejected") {
    Rng rng(8);
    std::vector<std::vector<double>> rows;
    Labels y{{}, LabelKind::binary};
    for (int i = 0; i < 30; ++i) {
        rows.push_back({double(rng.next_below(5)) - 2});
        y.y.push_back(i < 2 ? 1.0 : 0.0);  // 2 positives cannot reach 4 folds
    }
    auto x = test::make_matrix({"a"}, rows);
    TuneGrid grid{{{"max_interaction_level", {0}}, {"min_observations_in_split", {2}}}, 4};
    CHECK_THROWS_AS(kfold_grid_search(x, y, grid, tuning_base(10), 1, Task::classification),
                    data_error);
}

TEST_CASE("grid validation") {
    TuneGrid empty;
    empty.axes.clear();
    CHECK_THROWS_AS(empty.validate(), config_error);

    TuneGrid bad{{{"nope", {1}}}, 5};
    CHECK_THROWS_AS(bad.validate(), config_error);

    TuneGrid one_fold{{{"max_interaction_level", {1}}}, 1};
    CHECK_THROWS_AS(one_fold.validate(), config_error);
}

#include <doctest.h>

#include <json.hpp>

#include "aplr/model_io.hpp"
#include "helpers.hpp"

using namespace aplr;

TEST_CASE("save/load/predict is bit-exact") {
    Rng rng(19);
    std::vector<std::vector<double>> rows;
    Labels y{{}, LabelKind::binary};
    for (int i = 0; i < 70; ++i) {
        double a = rng.next_unit() * 4 - 2, b = double(rng.next_below(5)) - 2;
        rows.push_back({a, b});
        y.y.push_back(a + 0.3 * b > 0.2 ? 1.0 : 0.0);
    }
    auto x = test::make_matrix({"a", "b"}, rows);
    Hyperparams hp;
    hp.boosting_steps = 120;
    hp.min_observations_in_split = 6;
    hp.early_stop.mode = EarlyStop::Mode::off;
    auto model = fit(x, y, hp, Task::classification);

    test::TempDir dir("model_io");
    save_model(dir / "m.json", model);
    auto loaded = load_model(dir / "m.json");

    CHECK(loaded.feature_names == model.feature_names);
    CHECK(loaded.hyperparams == model.hyperparams);
    auto p1 = predict(model, x);
    auto p2 = predict(loaded, x);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < x.rows(); ++i) {
            CHECK(p1.logits[c][i] == p2.logits[c][i]);
            CHECK(p1.probabilities[c][i] == p2.probabilities[c][i]);
        }
    CHECK(p1.labels == p2.labels);

    // a second save of the loaded model is byte-identical
    save_model(dir / "m2.json", loaded);
    CHECK(test::read_file(dir / "m.json") == test::read_file(dir / "m2.json"));
}

TEST_CASE("doubles round-trip through the JSON document exactly") {
    Rng rng(29);
    for (int trial = 0; trial < 500; ++trial) {
        double v = (rng.next_unit() * 2 - 1) * std::pow(10.0, double(rng.next_below(37)) - 18.0);
        nlohmann::ordered_json j{{"v", v}};
        double back = nlohmann::ordered_json::parse(j.dump()).at("v").get<double>();
        CHECK(back == v);
    }
}

TEST_CASE("nested gate chains flatten to the canonical sorted form") {
    // hand-written document with a recursive chain
    std::string doc = R"({
      "version": 1, "task": "regression", "hyperparams": {},
      "classes": [], "feature_names": ["a", "b", "c"],
      "submodels": [{"intercept": 0.0, "terms": [{
        "predictor_name": "a", "kind": "linear", "split": 0.0,
        "gate_chain": [{
          "predictor_name": "c", "kind": "hinge_pos", "split": 1.0,
          "gate_chain": [{"predictor_name": "b", "kind": "linear", "split": 0.0,
                          "gate_chain": []}]
        }],
        "coefficient": 2.5}]}],
      "seed": 1})";
    auto model = model_from_json(doc);
    const auto& t = model.submodels[0].terms[0];
    CHECK(t.interaction_level() == 2);
    REQUIRE(t.gates.size() == 2);
    CHECK(t.gates[0].predictor == 1);  // b sorts before c
    CHECK(t.gates[1].predictor == 2);
    CHECK(t.coefficient == 2.5);
}

TEST_CASE("malformed documents are rejected with data errors") {
    CHECK_THROWS_AS(model_from_json("not json"), data_error);
    CHECK_THROWS_AS(model_from_json("{}"), data_error);
    CHECK_THROWS_AS(model_from_json(R"({"version": 99, "task": "regression"})"), data_error);

    std::string unknown_feature = R"({
      "version": 1, "task": "regression", "hyperparams": {}, "classes": [],
      "feature_names": ["a"],
      "submodels": [{"intercept": 0, "terms": [{"predictor_name": "zz", "kind": "linear",
                     "split": 0, "gate_chain": [], "coefficient": 1}]}],
      "seed": 1})";
    CHECK_THROWS_WITH_AS(model_from_json(unknown_feature), doctest::Contains("zz"), data_error);

    std::string bad_kind = R"({
      "version": 1, "task": "regression", "hyperparams": {}, "classes": [],
      "feature_names": ["a"],
      "submodels": [{"intercept": 0, "terms": [{"predictor_name": "a", "kind": "spline",
                     "split": 0, "gate_chain": [], "coefficient": 1}]}],
      "seed": 1})";
    CHECK_THROWS_AS(model_from_json(bad_kind), data_error);

    CHECK_THROWS_AS(load_model("/nonexistent/m.json"), data_error);
}

#include "aplr/model_io.hpp"

#include <fstream>
#include <json.hpp>

namespace aplr {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kModelVersion = 1;

const char* kind_name(BasisKind k) {
    switch (k) {
        case BasisKind::linear: return "linear";
        case BasisKind::hinge_pos: return "hinge_pos";
        case BasisKind::hinge_neg: return "hinge_neg";
    }
    return "linear";
}

BasisKind kind_from(const std::string& s) {
    if (s == "linear") return BasisKind::linear;
    if (s == "hinge_pos") return BasisKind::hinge_pos;
    if (s == "hinge_neg") return BasisKind::hinge_neg;
    throw data_error("unknown basis kind: '" + s + "'");
}

ordered_json basis_to_json(const BasisFunction& f, const std::vector<std::string>& names) {
    return {{"predictor_name", names.at(static_cast<std::size_t>(f.predictor))},
            {"kind", kind_name(f.kind)},
            {"split", f.split},
            {"gate_chain", ordered_json::array()}};
}

ordered_json term_to_json(const Term& t, const std::vector<std::string>& names) {
    ordered_json j = basis_to_json(t.base, names);
    for (const auto& g : t.gates) j["gate_chain"].push_back(basis_to_json(g, names));
    j["coefficient"] = t.coefficient;
    return j;
}

int name_index(const std::string& name, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw data_error("term references unknown feature '" + name + "'");
}

BasisFunction basis_from_json(const ordered_json& j, const std::vector<std::string>& names) {
    return {name_index(j.at("predictor_name").get<std::string>(), names),
            kind_from(j.at("kind").get<std::string>()), j.at("split").get<double>()};
}

// Nested gate chains flatten into the canonical sorted set of indicators.
void collect_gates(const ordered_json& chain, const std::vector<std::string>& names,
                   std::vector<BasisFunction>& out) {
    for (const auto& g : chain) {
        out.push_back(basis_from_json(g, names));
        if (g.contains("gate_chain")) collect_gates(g.at("gate_chain"), names, out);
    }
}

Term term_from_json(const ordered_json& j, const std::vector<std::string>& names) {
    BasisFunction base = basis_from_json(j, names);
    std::vector<BasisFunction> gates;
    if (j.contains("gate_chain")) collect_gates(j.at("gate_chain"), names, gates);
    return Term::make(base, std::move(gates), j.value("coefficient", 0.0));
}

ordered_json hyperparams_to_json(const Hyperparams& hp) {
    ordered_json j{{"boosting_steps", hp.boosting_steps},
                   {"learning_rate", hp.learning_rate},
                   {"max_interaction_level", hp.max_interaction_level},
                   {"min_observations_in_split", hp.min_observations_in_split},
                   {"seed", hp.seed}};
    if (hp.early_stop.mode == EarlyStop::Mode::off)
        j["early_stop"] = "off";
    else
        j["early_stop"] = ordered_json{{"internal_cv", hp.early_stop.folds}};
    return j;
}

Hyperparams hyperparams_from_json(const ordered_json& j) {
    Hyperparams hp;
    hp.boosting_steps = j.value("boosting_steps", hp.boosting_steps);
    hp.learning_rate = j.value("learning_rate", hp.learning_rate);
    hp.max_interaction_level = j.value("max_interaction_level", hp.max_interaction_level);
    hp.min_observations_in_split =
        j.value("min_observations_in_split", hp.min_observations_in_split);
    hp.seed = j.value("seed", hp.seed);
    if (j.contains("early_stop")) {
        const auto& es = j.at("early_stop");
        if (es.is_string() && es.get<std::string>() == "off")
            hp.early_stop = {EarlyStop::Mode::off, 5};
        else if (es.is_object() && es.contains("internal_cv"))
            hp.early_stop = {EarlyStop::Mode::internal_cv, es.at("internal_cv").get<int>()};
        else
            throw data_error("unrecognized early_stop value in model document");
    }
    return hp;
}

}  // namespace

std::string model_to_json(const AplrModel& model) {
    ordered_json j;
    j["version"] = kModelVersion;
    j["task"] = model.task == Task::regression ? "regression" : "classification";
    j["hyperparams"] = hyperparams_to_json(model.hyperparams);
    j["classes"] = model.class_labels;
    j["feature_names"] = model.feature_names;
    j["train_rows"] = model.train_rows;
    j["selected_steps"] = model.selected_steps;
    j["intercept_only_steps"] = model.intercept_only_steps;
    j["submodels"] = ordered_json::array();
    for (const auto& sm : model.submodels) {
        ordered_json terms = ordered_json::array();
        for (const auto& t : sm.terms) terms.push_back(term_to_json(t, model.feature_names));
        j["submodels"].push_back({{"intercept", sm.intercept}, {"terms", std::move(terms)}});
    }
    j["seed"] = model.hyperparams.seed;
    return j.dump(2) + "\n";
}

AplrModel model_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("model document is not valid JSON: ") + e.what());
    }
    try {
        if (j.at("version").get<int>() != kModelVersion)
            throw data_error("unsupported model version");
        AplrModel model;
        std::string task = j.at("task").get<std::string>();
        if (task == "regression")
            model.task = Task::regression;
        else if (task == "classification")
            model.task = Task::classification;
        else
            throw data_error("unknown task: '" + task + "'");
        model.hyperparams = hyperparams_from_json(j.at("hyperparams"));
        model.class_labels = j.at("classes").get<std::vector<double>>();
        model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        model.train_rows = j.value("train_rows", std::size_t{0});
        model.selected_steps = j.value("selected_steps", 0);
        model.intercept_only_steps = j.value("intercept_only_steps", 0);
        for (const auto& sj : j.at("submodels")) {
            Submodel sm;
            sm.intercept = sj.at("intercept").get<double>();
            for (const auto& tj : sj.at("terms"))
                sm.terms.push_back(term_from_json(tj, model.feature_names));
            model.submodels.push_back(std::move(sm));
        }
        if (model.submodels.empty()) throw data_error("model document has no submodels");
        if (model.task == Task::classification &&
            model.submodels.size() != model.class_labels.size())
            throw data_error("submodel count does not match class count");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const AplrModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write file: " + path.string());
    out << model_to_json(model);
}

AplrModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read file: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace aplr

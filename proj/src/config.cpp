#include "aplr/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace aplr {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot read config file: " + path.string());
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(path.string() + " is not valid JSON: " + e.what());
    }
}

EncodingSchema schema_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("columns"))
        throw config_error("encoding schema needs a 'columns' object");
    EncodingSchema schema;
    for (const auto& [name, rule] : j.at("columns").items()) {
        ColumnEncoding enc;
        if (rule.is_string()) {
            std::string r = rule.get<std::string>();
            if (r == "likert5")
                enc.rule = EncodingRule::likert5;
            else if (r == "yes_no")
                enc.rule = EncodingRule::yes_no;
            else if (r == "already_numeric")
                enc.rule = EncodingRule::already_numeric;
            else
                throw config_error("column '" + name + "': unknown encoding rule '" + r + "'");
        } else if (rule.is_object() && rule.contains("one_of_n")) {
            enc.rule = EncodingRule::one_of_n;
            enc.categories = rule.at("one_of_n").get<std::vector<std::string>>();
        } else {
            throw config_error("column '" + name + "': unrecognized encoding rule");
        }
        schema.columns.emplace_back(name, std::move(enc));
    }
    schema.validate();
    return schema;
}

TargetSpec target_from_json(const ordered_json& j) {
    if (j.is_string() && j.get<std::string>() == "default")
        return TargetSpec::default_satisfaction();
    TargetSpec spec;
    spec.components.clear();
    for (const auto& c : j.at("components")) {
        std::string pol = c.at("polarity").get<std::string>();
        if (pol != "positive" && pol != "negative")
            throw config_error("target polarity must be 'positive' or 'negative'");
        spec.components.emplace_back(c.at("column").get<std::string>(),
                                     pol == "positive" ? Polarity::positive
                                                       : Polarity::negative);
    }
    spec.threshold = j.value("threshold", 4);
    spec.validate();
    return spec;
}

TuneGrid grid_from_json(const ordered_json& j) {
    TuneGrid grid;
    grid.axes.clear();
    const ordered_json& axes = j.contains("grid") ? j.at("grid") : j;
    for (const auto& [name, values] : axes.items()) {
        if (name == "folds") continue;
        grid.axes.emplace_back(name, values.get<std::vector<double>>());
    }
    grid.folds = j.value("folds", 5);
    grid.validate();
    return grid;
}

Hyperparams hyperparams_from_json(const ordered_json& j) {
    Hyperparams hp;
    hp.boosting_steps = j.value("boosting_steps", hp.boosting_steps);
    hp.learning_rate = j.value("learning_rate", hp.learning_rate);
    hp.max_interaction_level = j.value("max_interaction_level", hp.max_interaction_level);
    hp.min_observations_in_split =
        j.value("min_observations_in_split", hp.min_observations_in_split);
    if (j.contains("early_stop")) {
        const auto& es = j.at("early_stop");
        if (es.is_string() && es.get<std::string>() == "off")
            hp.early_stop = {EarlyStop::Mode::off, 5};
        else if (es.is_object() && es.contains("internal_cv"))
            hp.early_stop = {EarlyStop::Mode::internal_cv, es.at("internal_cv").get<int>()};
        else
            throw config_error("early_stop must be \"off\" or {\"internal_cv\": k}");
    }
    hp.validate();
    return hp;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    ordered_json j = parse_file(path);
    try {
        RunConfig cfg;
        cfg.data = j.at("data").get<std::string>();
        // Paths are taken relative to the config file's directory.
        if (cfg.data.is_relative()) cfg.data = path.parent_path() / cfg.data;
        cfg.schema = schema_from_json(j.at("encoding"));
        if (j.contains("target") && j.at("target").is_object() &&
            j.at("target").contains("label_column")) {
            cfg.target_label_column = j.at("target").at("label_column").get<std::string>();
        } else {
            cfg.target = j.contains("target") ? target_from_json(j.at("target"))
                                              : TargetSpec::default_satisfaction();
        }
        if (j.contains("split")) cfg.test_fraction = j.at("split").value("test_fraction", 0.2);
        if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
            throw config_error("split.test_fraction must lie in (0, 1)");
        if (j.contains("smote")) {
            const auto& s = j.at("smote");
            cfg.smote_enabled = s.value("enabled", true);
            cfg.smote.k_neighbors = s.value("k_neighbors", 5);
            cfg.smote.target_ratio = s.value("target_ratio", 1.0);
            cfg.smote.validate();
        }
        if (j.contains("tune")) cfg.tune = grid_from_json(j.at("tune"));
        if (j.contains("hyperparams")) cfg.hyperparams = hyperparams_from_json(j.at("hyperparams"));
        cfg.seed = j.value("seed", std::uint64_t{42});
        cfg.hyperparams.seed = cfg.seed;  // stage commands re-derive from this root
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(path.string() + ": " + e.what());
    }
}

EncodingSchema load_schema(const std::filesystem::path& config_path) {
    ordered_json j = parse_file(config_path);
    try {
        return schema_from_json(j.contains("encoding") ? j.at("encoding") : j);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(config_path.string() + ": " + e.what());
    }
}

std::pair<EncodingSchema, TargetSpec> load_schema_and_target(
    const std::filesystem::path& config_path) {
    ordered_json j = parse_file(config_path);
    try {
        EncodingSchema schema = schema_from_json(j.contains("encoding") ? j.at("encoding") : j);
        TargetSpec target = j.contains("target") ? target_from_json(j.at("target"))
                                                 : TargetSpec::default_satisfaction();
        return {std::move(schema), std::move(target)};
    } catch (const nlohmann::json::exception& e) {
        throw config_error(config_path.string() + ": " + e.what());
    }
}

TuneGrid load_grid(const std::filesystem::path& path) {
    ordered_json j = parse_file(path);
    try {
        return grid_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(path.string() + ": " + e.what());
    }
}

std::string config_fingerprint(const std::filesystem::path& path) {
    return fnv1a64_hex(parse_file(path).dump());
}

std::string file_fingerprint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot read file: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a64_hex(bytes);
}

}  // namespace aplr

// aplr: piecewise linear regression models for tabular data, plus the
// survey-study pipeline (encode -> split -> smote -> tune -> fit -> evaluate
// -> explain) behind one-verb subcommands. Exit codes: 0 ok, 2 config error,
// 3 data error, 4 numeric failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "aplr/config.hpp"
#include "aplr/csv.hpp"
#include "aplr/dataset.hpp"
#include "aplr/interpret.hpp"
#include "aplr/metrics.hpp"
#include "aplr/model_io.hpp"
#include "aplr/smote.hpp"
#include "aplr/tuning.hpp"

#ifndef APLR_VERSION
#define APLR_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kDefaultLabel = "target";

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw aplr::data_error("cannot write file: " + path.string());
    out << text;
}

void write_json(const fs::path& path, const ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

aplr::Labels require_labels(const aplr::EncodedFrame& frame, const std::string& label,
                            const fs::path& path) {
    if (!frame.y)
        throw aplr::data_error(path.string() + ": label column '" + label + "' not found");
    return *frame.y;
}

aplr::Task task_for(const std::string& requested, const aplr::Labels& y) {
    if (requested == "classification") return aplr::Task::classification;
    if (requested == "regression") return aplr::Task::regression;
    return y.kind == aplr::LabelKind::binary ? aplr::Task::classification
                                             : aplr::Task::regression;
}

ordered_json metrics_to_json(const aplr::MetricsReport& r) {
    ordered_json j{{"accuracy", r.accuracy}, {"f1", r.f1},     {"precision", r.precision},
                   {"recall", r.recall},     {"auc", nullptr}, {"confusion",
                                                                {{"tp", r.tp},
                                                                 {"fp", r.fp},
                                                                 {"tn", r.tn},
                                                                 {"fn", r.fn}}},
                   {"positive_label", r.positive_label}};
    if (r.auc) j["auc"] = *r.auc;
    if (!r.precision_defined || !r.recall_defined || !r.f1_defined) {
        ordered_json undef = ordered_json::array();
        if (!r.precision_defined) undef.push_back("precision");
        if (!r.recall_defined) undef.push_back("recall");
        if (!r.f1_defined) undef.push_back("f1");
        j["undefined"] = undef;
    }
    return j;
}

ordered_json hyperparams_to_json(const aplr::Hyperparams& hp) {
    ordered_json j{{"boosting_steps", hp.boosting_steps},
                   {"learning_rate", hp.learning_rate},
                   {"max_interaction_level", hp.max_interaction_level},
                   {"min_observations_in_split", hp.min_observations_in_split},
                   {"seed", hp.seed}};
    j["early_stop"] = hp.early_stop.mode == aplr::EarlyStop::Mode::off
                          ? ordered_json("off")
                          : ordered_json{{"internal_cv", hp.early_stop.folds}};
    return j;
}

void write_terms_csv(const fs::path& path, const aplr::TermTable& table) {
    aplr::CsvTable csv;
    csv.header = {"interaction_level", "term", "coefficient"};
    for (const auto& row : table.rows)
        csv.rows.push_back({row.interaction_level ? std::to_string(*row.interaction_level)
                                                  : "null",
                            row.expression, aplr::format_double(row.coefficient)});
    aplr::write_csv(path, csv);
}

void write_importance_csv(const fs::path& path, const aplr::GlobalImportance& gi) {
    aplr::CsvTable csv;
    csv.header = {"feature", "importance"};
    for (const auto& [name, value] : gi.entries)
        csv.rows.push_back({name, aplr::format_double(value)});
    aplr::write_csv(path, csv);
}

void write_cells_csv(const fs::path& path, const aplr::TuneResult& result) {
    aplr::CsvTable csv;
    csv.header = {"max_interaction_level", "min_observations_in_split", "boosting_steps",
                  "learning_rate",         "mean_loss",                 "std_loss",
                  "mean_accuracy",         "std_accuracy"};
    for (const auto& c : result.cells)
        csv.rows.push_back({std::to_string(c.hp.max_interaction_level),
                            std::to_string(c.hp.min_observations_in_split),
                            std::to_string(c.hp.boosting_steps),
                            aplr::format_double(c.hp.learning_rate),
                            aplr::format_double(c.mean_loss), aplr::format_double(c.std_loss),
                            aplr::format_double(c.mean_accuracy),
                            aplr::format_double(c.std_accuracy)});
    aplr::write_csv(path, csv);
}

aplr::MetricsReport evaluate_model(const aplr::AplrModel& model, const aplr::EncodedMatrix& x,
                                   const aplr::Labels& y) {
    if (model.task != aplr::Task::classification)
        throw aplr::data_error("evaluate requires a classification model");
    auto pred = aplr::predict(model, x);
    auto report = aplr::classification_metrics(y.y, pred.labels, 1.0);
    std::size_t pos_index = model.class_index(1.0);
    report.auc = aplr::auc(pred.probabilities[pos_index], y.y);
    return report;
}

// ---------------------------------------------------------------------- cmds

struct EncodeArgs {
    std::string config, in, out;
    std::string label = kDefaultLabel;
};

void cmd_encode(const EncodeArgs& a) {
    auto [schema, target] = aplr::load_schema_and_target(a.config);
    auto raw = aplr::load_survey(a.in, schema);
    auto x = aplr::encode_predictors(raw, schema);
    auto y = aplr::build_target(raw, target);
    aplr::write_encoded_csv(a.out, x, &y, a.label);
    std::cerr << "encoded " << x.rows() << " rows, " << x.cols() << " predictors -> " << a.out
              << "\n";
}

struct SplitArgs {
    std::string in, out_train, out_test, indices;
    std::string label = kDefaultLabel;
    double test_fraction = 0.2;
    std::uint64_t seed = 42;
};

void cmd_split(const SplitArgs& a) {
    auto frame = aplr::read_encoded_csv(a.in, a.label);
    auto y = require_labels(frame, a.label, a.in);
    auto split = aplr::stratified_split(frame.x, y, a.test_fraction,
                                        aplr::derive_seed(a.seed, "split"));
    aplr::write_encoded_csv(a.out_train, split.train_x, &split.train_y, a.label);
    aplr::write_encoded_csv(a.out_test, split.test_x, &split.test_y, a.label);
    if (!a.indices.empty()) {
        ordered_json j{{"seed", a.seed},
                       {"test_fraction", a.test_fraction},
                       {"train", split.train_idx},
                       {"test", split.test_idx}};
        write_json(a.indices, j);
    }
    std::cerr << "split " << frame.x.rows() << " rows -> " << split.train_idx.size() << " train / "
              << split.test_idx.size() << " test\n";
}

struct SmoteArgs {
    std::string in, out;
    std::string label = kDefaultLabel;
    int k = 5;
    double ratio = 1.0;
    std::uint64_t seed = 42;
};

void cmd_smote(const SmoteArgs& a) {
    auto frame = aplr::read_encoded_csv(a.in, a.label);
    auto y = require_labels(frame, a.label, a.in);
    aplr::SmoteConfig cfg{a.k, aplr::derive_seed(a.seed, "smote"), a.ratio};
    auto result = aplr::oversample(frame.x, y, cfg);
    aplr::write_encoded_csv(a.out, result.x, &result.y, a.label);
    std::cerr << "smote: " << frame.x.rows() << " -> " << result.x.rows() << " rows ("
              << result.synthetic.size() << " synthetic)\n";
}

struct TuneArgs {
    std::string grid, data, out, cells;
    std::string label = kDefaultLabel;
    std::string task = "auto";
    std::uint64_t seed = 42;
    bool no_smote = false;
    int smote_k = 5;
    double smote_ratio = 1.0;
};

void cmd_tune(const TuneArgs& a) {
    auto grid = aplr::load_grid(a.grid);
    auto frame = aplr::read_encoded_csv(a.data, a.label);
    auto y = require_labels(frame, a.label, a.data);
    aplr::Task task = task_for(a.task, y);

    std::optional<aplr::SmoteConfig> smote;
    if (!a.no_smote && task == aplr::Task::classification)
        smote = aplr::SmoteConfig{a.smote_k, 0, a.smote_ratio};  // fold seeds derived inside

    aplr::Hyperparams base;
    base.seed = a.seed;
    auto result = aplr::kfold_grid_search(frame.x, y, grid, base,
                                          aplr::derive_seed(a.seed, "tune"), task, smote);

    ordered_json j{{"best", hyperparams_to_json(result.best)},
                   {"best_mean_loss", result.best_loss},
                   {"cells_evaluated", result.cells.size()}};
    write_json(a.out, j);
    if (!a.cells.empty()) write_cells_csv(a.cells, result);
    std::cerr << "tune: " << result.cells.size() << " cells, best max_interaction_level="
              << result.best.max_interaction_level
              << " min_observations_in_split=" << result.best.min_observations_in_split << "\n";
}

struct FitArgs {
    std::string data, out, best;
    std::string label = kDefaultLabel;
    std::string task = "auto";
    std::uint64_t seed = 42;
    aplr::Hyperparams hp;
    bool early_stop_off = false;
};

void cmd_fit(const FitArgs& a) {
    auto frame = aplr::read_encoded_csv(a.data, a.label);
    auto y = require_labels(frame, a.label, a.data);
    aplr::Task task = task_for(a.task, y);

    aplr::Hyperparams hp = a.hp;
    if (!a.best.empty()) {
        std::ifstream in(a.best, std::ios::binary);
        if (!in) throw aplr::config_error("cannot read file: " + a.best);
        ordered_json j;
        try {
            j = ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw aplr::config_error(a.best + " is not valid JSON: " + e.what());
        }
        const auto& b = j.contains("best") ? j.at("best") : j;
        hp.max_interaction_level = b.value("max_interaction_level", hp.max_interaction_level);
        hp.min_observations_in_split =
            b.value("min_observations_in_split", hp.min_observations_in_split);
        hp.boosting_steps = b.value("boosting_steps", hp.boosting_steps);
        hp.learning_rate = b.value("learning_rate", hp.learning_rate);
    }
    if (a.early_stop_off) hp.early_stop.mode = aplr::EarlyStop::Mode::off;
    hp.seed = aplr::derive_seed(a.seed, "fit");

    auto model = aplr::fit(frame.x, y, hp, task);
    aplr::save_model(a.out, model);
    std::cerr << "fit: " << model.submodels.back().terms.size() << " terms, "
              << model.selected_steps << " steps -> " << a.out << "\n";
}

struct PredictArgs {
    std::string model, data, out;
    std::string label = kDefaultLabel;
};

void cmd_predict(const PredictArgs& a) {
    auto model = aplr::load_model(a.model);
    auto frame = aplr::read_encoded_csv(a.data, a.label);
    auto pred = aplr::predict(model, frame.x);

    aplr::CsvTable csv;
    if (model.task == aplr::Task::regression) {
        csv.header = {"row", "prediction"};
        for (std::size_t i = 0; i < pred.values.size(); ++i)
            csv.rows.push_back({std::to_string(i), aplr::format_double(pred.values[i])});
    } else {
        csv.header = {"row"};
        for (double c : model.class_labels)
            csv.header.push_back("logit_" + aplr::format_double(c));
        for (double c : model.class_labels)
            csv.header.push_back("prob_" + aplr::format_double(c));
        csv.header.push_back("predicted");
        for (std::size_t i = 0; i < pred.labels.size(); ++i) {
            std::vector<std::string> row{std::to_string(i)};
            for (std::size_t c = 0; c < model.class_labels.size(); ++c)
                row.push_back(aplr::format_double(pred.logits[c][i]));
            for (std::size_t c = 0; c < model.class_labels.size(); ++c)
                row.push_back(aplr::format_double(pred.probabilities[c][i]));
            row.push_back(aplr::format_double(pred.labels[i]));
            csv.rows.push_back(std::move(row));
        }
    }
    aplr::write_csv(a.out, csv);
    std::cerr << "predict: " << frame.x.rows() << " rows -> " << a.out << "\n";
}

struct EvaluateArgs {
    std::string model, data, out;
    std::string label = kDefaultLabel;
};

void cmd_evaluate(const EvaluateArgs& a) {
    auto model = aplr::load_model(a.model);
    auto frame = aplr::read_encoded_csv(a.data, a.label);
    auto y = require_labels(frame, a.label, a.data);
    auto report = evaluate_model(model, frame.x, y);
    write_json(a.out, metrics_to_json(report));
    std::cerr << "evaluate: accuracy " << report.accuracy << ", auc " << *report.auc << "\n";
}

struct ExplainGlobalArgs {
    std::string model, train, out;
    std::string label = kDefaultLabel;
};

void cmd_explain_global(const ExplainGlobalArgs& a) {
    auto model = aplr::load_model(a.model);
    auto frame = aplr::read_encoded_csv(a.train, a.label);
    auto gi = aplr::global_importance(model, frame.x);
    write_importance_csv(a.out, gi);
    std::cerr << "explain global: " << gi.entries.size() << " features -> " << a.out << "\n";
}

struct ExplainLocalArgs {
    std::string model, data, out;
    std::string label = kDefaultLabel;
    std::size_t row = 0;
    int class_index = -1;
};

void cmd_explain_local(const ExplainLocalArgs& a) {
    auto model = aplr::load_model(a.model);
    auto frame = aplr::read_encoded_csv(a.data, a.label);
    std::optional<std::size_t> cls;
    if (a.class_index >= 0) cls = static_cast<std::size_t>(a.class_index);
    auto ex = aplr::local_contributions(model, frame.x, a.row, cls);

    aplr::EncodedMatrix aligned = frame.x.reorder_columns(model.feature_names);
    if (fs::path(a.out).extension() == ".csv") {
        aplr::CsvTable csv;
        csv.header = {"feature", "value", "contribution"};
        for (std::size_t j = 0; j < ex.contributions.size(); ++j)
            csv.rows.push_back({ex.contributions[j].first,
                                aplr::format_double(aligned(ex.row, j)),
                                aplr::format_double(ex.contributions[j].second)});
        aplr::write_csv(a.out, csv);
    } else {
        ordered_json contrib = ordered_json::object();
        ordered_json values = ordered_json::object();
        for (std::size_t j = 0; j < ex.contributions.size(); ++j) {
            contrib[ex.contributions[j].first] = ex.contributions[j].second;
            values[ex.contributions[j].first] = aligned(ex.row, j);
        }
        ordered_json j{{"row", ex.row},
                       {"class_index", ex.class_index},
                       {"predicted_label", ex.predicted_label},
                       {"probability", ex.probability},
                       {"intercept", ex.intercept},
                       {"values", std::move(values)},
                       {"contributions", std::move(contrib)}};
        write_json(a.out, j);
    }
    std::cerr << "explain local: row " << a.row << " -> " << a.out << "\n";
}

struct PipelineArgs {
    std::string config, out;
};

void cmd_pipeline(const PipelineArgs& a) {
    auto run_stage = [](const char* stage, auto&& fn) {
        try {
            fn();
        } catch (const aplr::config_error& e) {
            throw aplr::config_error(std::string("stage ") + stage + ": " + e.what());
        } catch (const aplr::data_error& e) {
            throw aplr::data_error(std::string("stage ") + stage + ": " + e.what());
        } catch (const aplr::numeric_error& e) {
            throw aplr::numeric_error(std::string("stage ") + stage + ": " + e.what());
        }
    };

    aplr::RunConfig cfg;
    run_stage("config", [&] { cfg = aplr::load_run_config(a.config); });

    fs::path dir(a.out);
    if (fs::exists(dir) && !fs::is_empty(dir))
        throw aplr::config_error("run directory already exists and is not empty: " +
                                 dir.string() + " (runs are append-only)");
    fs::create_directories(dir);

    aplr::RawSurveyTable raw;
    aplr::EncodedMatrix x;
    aplr::Labels y;
    run_stage("load", [&] { raw = aplr::load_survey(cfg.data, cfg.schema); });
    run_stage("encode", [&] {
        x = aplr::encode_predictors(raw, cfg.schema);
        if (cfg.target_label_column) {
            auto it = std::find(raw.column_names.begin(), raw.column_names.end(),
                                *cfg.target_label_column);
            if (it == raw.column_names.end())
                throw aplr::data_error("label column '" + *cfg.target_label_column +
                                       "' absent from table");
            std::size_t col = static_cast<std::size_t>(it - raw.column_names.begin());
            y.kind = aplr::LabelKind::binary;
            for (const auto& row : raw.rows) {
                if (row[col] != "0" && row[col] != "1")
                    throw aplr::data_error("label column must contain 0/1, saw '" + row[col] +
                                           "'");
                y.y.push_back(row[col] == "1" ? 1.0 : 0.0);
            }
        } else {
            y = aplr::build_target(raw, cfg.target);
        }
        aplr::write_encoded_csv(dir / "encoded.csv", x, &y, kDefaultLabel);
    });

    aplr::SplitResult split;
    run_stage("split", [&] {
        split = aplr::stratified_split(x, y, cfg.test_fraction,
                                       aplr::derive_seed(cfg.seed, "split"));
        aplr::write_encoded_csv(dir / "train.csv", split.train_x, &split.train_y, kDefaultLabel);
        aplr::write_encoded_csv(dir / "test.csv", split.test_x, &split.test_y, kDefaultLabel);
        write_json(dir / "split_indices.json", ordered_json{{"seed", cfg.seed},
                                                            {"test_fraction", cfg.test_fraction},
                                                            {"train", split.train_idx},
                                                            {"test", split.test_idx}});
    });

    aplr::EncodedMatrix train_x = split.train_x;
    aplr::Labels train_y = split.train_y;
    run_stage("smote", [&] {
        if (!cfg.smote_enabled) return;
        aplr::SmoteConfig sc = cfg.smote;
        sc.seed = aplr::derive_seed(cfg.seed, "smote");
        auto balanced = aplr::oversample(split.train_x, split.train_y, sc);
        train_x = std::move(balanced.x);
        train_y = std::move(balanced.y);
        aplr::write_encoded_csv(dir / "train_balanced.csv", train_x, &train_y, kDefaultLabel);
    });

    aplr::Hyperparams hp = cfg.hyperparams;
    run_stage("tune", [&] {
        if (!cfg.tune) return;
        std::optional<aplr::SmoteConfig> smote;
        if (cfg.smote_enabled) smote = cfg.smote;
        auto result = aplr::kfold_grid_search(split.train_x, split.train_y, *cfg.tune,
                                              cfg.hyperparams,
                                              aplr::derive_seed(cfg.seed, "tune"),
                                              aplr::Task::classification, smote);
        hp.max_interaction_level = result.best.max_interaction_level;
        hp.min_observations_in_split = result.best.min_observations_in_split;
        write_json(dir / "best.json", ordered_json{{"best", hyperparams_to_json(result.best)},
                                                   {"best_mean_loss", result.best_loss},
                                                   {"cells_evaluated", result.cells.size()}});
        write_cells_csv(dir / "tuning_cells.csv", result);
    });

    aplr::AplrModel model;
    run_stage("fit", [&] {
        hp.seed = aplr::derive_seed(cfg.seed, "fit");
        model = aplr::fit(train_x, train_y, hp, aplr::Task::classification);
        aplr::save_model(dir / "model.json", model);
    });

    run_stage("evaluate", [&] {
        auto report = evaluate_model(model, split.test_x, split.test_y);
        write_json(dir / "metrics.json", metrics_to_json(report));
    });

    run_stage("explain", [&] {
        write_terms_csv(dir / "terms.csv", aplr::term_table(model, model.class_index(1.0)));
        write_importance_csv(dir / "importance.csv", aplr::global_importance(model, train_x));
    });

    run_stage("manifest", [&] {
        ordered_json artifacts = ordered_json::object();
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(dir))
            files.push_back(entry.path().filename().string());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) artifacts[f] = aplr::file_fingerprint(dir / f);
        write_json(dir / "manifest.json",
                   ordered_json{{"config_hash", aplr::config_fingerprint(a.config)},
                                {"seed", cfg.seed},
                                {"version", APLR_VERSION},
                                {"artifacts", std::move(artifacts)}});
    });

    std::cout << "run complete: " << dir.string() << "\n";
}

struct ReportArgs {
    std::string run, out;
};

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void cmd_report(const ReportArgs& a) {
    fs::path dir(a.run);
    for (const char* f : {"metrics.json", "terms.csv", "importance.csv"})
        if (!fs::exists(dir / f))
            throw aplr::data_error("missing artifact: " + (dir / f).string());

    std::ifstream min(dir / "metrics.json");
    ordered_json metrics = ordered_json::parse(min);
    auto terms = aplr::read_csv(dir / "terms.csv");
    auto importance = aplr::read_csv(dir / "importance.csv");

    std::ostringstream md;
    md << "# APLR run report\n\n";
    md << "## Test metrics\n\n";
    md << "| Accuracy | F1 | Precision | Recall | AUC |\n";
    md << "|---|---|---|---|---|\n";
    md << "| " << fmt3(metrics.at("accuracy").get<double>()) << " | "
       << fmt3(metrics.at("f1").get<double>()) << " | "
       << fmt3(metrics.at("precision").get<double>()) << " | "
       << fmt3(metrics.at("recall").get<double>()) << " | "
       << (metrics.at("auc").is_null() ? std::string("-")
                                       : fmt3(metrics.at("auc").get<double>()))
       << " |\n\n";

    md << "## Model terms (positive class)\n\n";
    md << "| Interaction level | Term | Coefficient |\n";
    md << "|---|---|---|\n";
    for (const auto& row : terms.rows)
        md << "| " << row[0] << " | " << row[1] << " | "
           << fmt3(std::stod(row[2])) << " |\n";
    md << "\n";

    md << "## Global feature importance (top 15)\n\n";
    md << "| Feature | Importance |\n";
    md << "|---|---|\n";
    std::size_t shown = 0;
    for (const auto& row : importance.rows) {
        if (shown++ == 15) break;
        md << "| " << row[0] << " | " << fmt3(std::stod(row[1])) << " |\n";
    }
    md << "\n";

    if (a.out.empty())
        std::cout << md.str();
    else
        write_text(a.out, md.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piecewise linear regression models with a survey-study pipeline"};
    app.set_version_flag("--version", APLR_VERSION);
    app.require_subcommand(1);

    EncodeArgs encode_args;
    auto* encode = app.add_subcommand("encode", "Encode raw survey responses to numeric CSV");
    encode->add_option("--config", encode_args.config, "config JSON (encoding + target)")
        ->required();
    encode->add_option("--in", encode_args.in, "raw survey CSV")->required();
    encode->add_option("--out", encode_args.out, "encoded CSV")->required();
    encode->add_option("--label", encode_args.label, "label column name");

    SplitArgs split_args;
    auto* split = app.add_subcommand("split", "Seeded stratified train/test split");
    split->add_option("--in", split_args.in, "encoded CSV")->required();
    split->add_option("--out-train", split_args.out_train)->required();
    split->add_option("--out-test", split_args.out_test)->required();
    split->add_option("--indices", split_args.indices, "write row indices JSON");
    split->add_option("--label", split_args.label);
    split->add_option("--test-fraction", split_args.test_fraction);
    split->add_option("--seed", split_args.seed);

    SmoteArgs smote_args;
    auto* smote = app.add_subcommand("smote", "Balance a binary training set");
    smote->add_option("--in", smote_args.in)->required();
    smote->add_option("--out", smote_args.out)->required();
    smote->add_option("--label", smote_args.label);
    smote->add_option("--k", smote_args.k, "nearest minority neighbours");
    smote->add_option("--ratio", smote_args.ratio, "minority/majority ratio after balancing");
    smote->add_option("--seed", smote_args.seed);

    TuneArgs tune_args;
    auto* tune = app.add_subcommand("tune", "K-fold grid search over hyperparameters");
    tune->add_option("--grid", tune_args.grid, "grid JSON")->required();
    tune->add_option("--data", tune_args.data, "training CSV (unbalanced)")->required();
    tune->add_option("--out", tune_args.out, "best-cell JSON")->required();
    tune->add_option("--cells", tune_args.cells, "per-cell CSV");
    tune->add_option("--label", tune_args.label);
    tune->add_option("--task", tune_args.task)->check(CLI::IsMember({"auto", "classification",
                                                                     "regression"}));
    tune->add_option("--seed", tune_args.seed);
    tune->add_flag("--no-smote", tune_args.no_smote, "skip in-fold oversampling");
    tune->add_option("--smote-k", tune_args.smote_k);
    tune->add_option("--smote-ratio", tune_args.smote_ratio);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Fit a model");
    fit->add_option("--data", fit_args.data, "training CSV")->required();
    fit->add_option("--out", fit_args.out, "model JSON")->required();
    fit->add_option("--from-best", fit_args.best, "hyperparameters from tune output");
    fit->add_option("--label", fit_args.label);
    fit->add_option("--task", fit_args.task)->check(CLI::IsMember({"auto", "classification",
                                                                   "regression"}));
    fit->add_option("--seed", fit_args.seed);
    fit->add_option("--steps", fit_args.hp.boosting_steps, "boosting steps (M)");
    fit->add_option("--learning-rate", fit_args.hp.learning_rate);
    fit->add_option("--max-interaction-level", fit_args.hp.max_interaction_level);
    fit->add_option("--min-observations", fit_args.hp.min_observations_in_split);
    fit->add_flag("--no-early-stop", fit_args.early_stop_off);

    PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "Predict with a saved model");
    predict->add_option("--model", predict_args.model)->required();
    predict->add_option("--data", predict_args.data)->required();
    predict->add_option("--out", predict_args.out)->required();
    predict->add_option("--label", predict_args.label);

    EvaluateArgs evaluate_args;
    auto* evaluate = app.add_subcommand("evaluate", "Classification metrics on labeled data");
    evaluate->add_option("--model", evaluate_args.model)->required();
    evaluate->add_option("--data", evaluate_args.data)->required();
    evaluate->add_option("--out", evaluate_args.out)->required();
    evaluate->add_option("--label", evaluate_args.label);

    auto* explain = app.add_subcommand("explain", "Model interpretation artifacts");
    explain->require_subcommand(1);

    ExplainGlobalArgs global_args;
    auto* global = explain->add_subcommand("global", "Global feature importance CSV");
    global->add_option("--model", global_args.model)->required();
    global->add_option("--train", global_args.train, "training CSV")->required();
    global->add_option("--out", global_args.out)->required();
    global->add_option("--label", global_args.label);

    ExplainLocalArgs local_args;
    auto* local = explain->add_subcommand("local", "Per-row feature contributions");
    local->add_option("--model", local_args.model)->required();
    local->add_option("--data", local_args.data)->required();
    local->add_option("--row", local_args.row)->required();
    local->add_option("--out", local_args.out, ".json or .csv")->required();
    local->add_option("--class", local_args.class_index, "submodel index (default: predicted)");
    local->add_option("--label", local_args.label);

    PipelineArgs pipeline_args;
    auto* pipeline = app.add_subcommand("pipeline", "Run the full study pipeline");
    pipeline->add_option("--config", pipeline_args.config)->required();
    pipeline->add_option("--out", pipeline_args.out, "run directory (must not exist)")
        ->required();

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Render a markdown report from run artifacts");
    report->add_option("--run", report_args.run, "run directory")->required();
    report->add_option("--out", report_args.out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*encode) cmd_encode(encode_args);
        if (*split) cmd_split(split_args);
        if (*smote) cmd_smote(smote_args);
        if (*tune) cmd_tune(tune_args);
        if (*fit) cmd_fit(fit_args);
        if (*predict) cmd_predict(predict_args);
        if (*global) cmd_explain_global(global_args);
        if (*local) cmd_explain_local(local_args);
        if (*evaluate) cmd_evaluate(evaluate_args);
        if (*pipeline) cmd_pipeline(pipeline_args);
        if (*report) cmd_report(report_args);
    } catch (const aplr::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const aplr::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const aplr::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

#include "aplr/interpret.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "aplr/csv.hpp"

namespace aplr {

std::string render_basis(const BasisFunction& f, const std::vector<std::string>& names) {
    const std::string& name = names.at(static_cast<std::size_t>(f.predictor));
    if (f.kind == BasisKind::linear) return name;
    std::string arg = name + (f.split < 0.0 ? "+" + format_double(-f.split)
                                            : "-" + format_double(f.split));
    return (f.kind == BasisKind::hinge_pos ? "max(" : "min(") + arg + ",0)";
}

std::string render_term(const Term& t, const std::vector<std::string>& names) {
    std::string out = render_basis(t.base, names);
    for (const auto& g : t.gates) out += " * I(" + render_basis(g, names) + "!=0)";
    return out;
}

namespace {

int feature_index(const std::string& name, const std::vector<std::string>& names) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw data_error("unknown feature in expression: '" + name + "'");
    return static_cast<int>(it - names.begin());
}

BasisFunction parse_basis(const std::string& s, const std::vector<std::string>& names) {
    if (s.starts_with("max(") || s.starts_with("min(")) {
        if (!s.ends_with(",0)")) throw data_error("malformed hinge expression: '" + s + "'");
        BasisKind kind = s.starts_with("max(") ? BasisKind::hinge_pos : BasisKind::hinge_neg;
        std::string inner = s.substr(4, s.size() - 7);  // name±split
        // Feature names may contain '-' and the split may print in scientific
        // notation, so try separators right to left until the prefix is a
        // known feature and the suffix parses completely.
        for (std::size_t sep = inner.size(); sep-- > 1;) {
            if (inner[sep] != '+' && inner[sep] != '-') continue;
            std::string name = inner.substr(0, sep);
            if (std::find(names.begin(), names.end(), name) == names.end()) continue;
            std::string num = inner.substr(sep + 1);
            double split = 0.0;
            auto res = std::from_chars(num.data(), num.data() + num.size(), split);
            if (res.ec != std::errc{} || res.ptr != num.data() + num.size()) continue;
            if (inner[sep] == '+') split = -split;
            return {feature_index(name, names), kind, split};
        }
        throw data_error("malformed hinge expression: '" + s + "'");
    }
    return {feature_index(s, names), BasisKind::linear, 0.0};
}

}  // namespace

Term parse_term_expression(const std::string& expr, const std::vector<std::string>& names) {
    // Split on " * I(" ... "!=0)" factors.
    std::vector<std::string> parts;
    std::size_t pos = 0;
    std::size_t star = expr.find(" * I(");
    parts.push_back(expr.substr(0, star));
    while (star != std::string::npos) {
        pos = star + 5;
        std::size_t close = expr.find("!=0)", pos);
        if (close == std::string::npos)
            throw data_error("malformed gate in expression: '" + expr + "'");
        parts.push_back(expr.substr(pos, close - pos));
        star = expr.find(" * I(", close);
    }
    BasisFunction base = parse_basis(parts.front(), names);
    std::vector<BasisFunction> gates;
    for (std::size_t i = 1; i < parts.size(); ++i) gates.push_back(parse_basis(parts[i], names));
    return Term::make(base, std::move(gates));
}

TermTable term_table(const AplrModel& model, std::size_t class_index) {
    if (class_index >= model.submodels.size()) throw data_error("no such class submodel");
    const Submodel& sm = model.submodels[class_index];
    TermTable t;
    t.rows.push_back({std::nullopt, "Intercept", sm.intercept});
    for (const auto& term : sm.terms)
        t.rows.push_back({term.interaction_level(), render_term(term, model.feature_names),
                          term.coefficient});
    return t;
}

namespace {

double population_std(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

GlobalImportance global_importance(const AplrModel& model, const EncodedMatrix& train_x) {
    if (train_x.rows() == 0) throw data_error("empty training matrix");
    EncodedMatrix aligned = train_x.reorder_columns(model.feature_names);
    const std::size_t p = model.feature_names.size();
    const std::size_t n = aligned.rows();

    std::vector<double> importance(p, 0.0);
    std::vector<double> contrib(n);
    for (std::size_t j = 0; j < p; ++j) {
        double acc = 0.0;
        for (const auto& sm : model.submodels) {
            std::fill(contrib.begin(), contrib.end(), 0.0);
            bool any = false;
            for (const auto& t : sm.terms) {
                if (static_cast<std::size_t>(t.base.predictor) != j) continue;
                any = true;
                for (std::size_t i = 0; i < n; ++i)
                    contrib[i] += t.coefficient * t.value_at(aligned, i);
            }
            acc += any ? population_std(contrib) : 0.0;
        }
        importance[j] = acc / static_cast<double>(model.submodels.size());
    }

    GlobalImportance out;
    for (std::size_t j = 0; j < p; ++j) out.entries.emplace_back(model.feature_names[j], importance[j]);
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

LocalExplanation local_contributions(const AplrModel& model, const EncodedMatrix& x,
                                     std::size_t row, std::optional<std::size_t> class_index) {
    if (row >= x.rows()) throw data_error("row index out of range");
    EncodedMatrix aligned = x.reorder_columns(model.feature_names);

    LocalExplanation out;
    out.row = row;
    if (model.task == Task::classification) {
        std::size_t predicted = 0;
        double best = -1.0;
        std::vector<double> probs(model.submodels.size());
        for (std::size_t c = 0; c < model.submodels.size(); ++c) {
            double z = model.submodels[c].intercept;
            for (const auto& t : model.submodels[c].terms)
                z += t.coefficient * t.value_at(aligned, row);
            probs[c] = stable_sigmoid(z);
            if (probs[c] > best) {
                best = probs[c];
                predicted = c;
            }
        }
        out.class_index = class_index.value_or(predicted);
        if (out.class_index >= model.submodels.size()) throw data_error("no such class submodel");
        out.predicted_label = model.class_labels[predicted];
        out.probability = probs[out.class_index];
    } else {
        out.class_index = 0;
        if (class_index && *class_index != 0) throw data_error("no such class submodel");
    }

    const Submodel& sm = model.submodels[out.class_index];
    out.intercept = sm.intercept;
    out.contributions.reserve(model.feature_names.size());
    for (std::size_t j = 0; j < model.feature_names.size(); ++j) {
        double c = 0.0;
        for (const auto& t : sm.terms)
            if (static_cast<std::size_t>(t.base.predictor) == j)
                c += t.coefficient * t.value_at(aligned, row);
        out.contributions.emplace_back(model.feature_names[j], c);
    }
    if (model.task == Task::regression) {
        double z = out.intercept;
        for (const auto& [name, c] : out.contributions) z += c;
        out.predicted_label = z;
    }
    return out;
}

ShapeCurve shape_curve(const AplrModel& model, const std::string& feature,
                       std::span<const double> grid, std::size_t class_index) {
    if (class_index >= model.submodels.size()) throw data_error("no such class submodel");
    auto it = std::find(model.feature_names.begin(), model.feature_names.end(), feature);
    if (it == model.feature_names.end()) throw data_error("unknown feature: '" + feature + "'");
    int j = static_cast<int>(it - model.feature_names.begin());

    const Submodel& sm = model.submodels[class_index];
    ShapeCurve out;
    out.points.reserve(grid.size());
    for (double v : grid) {
        double effect = 0.0;
        for (const auto& t : sm.terms)
            if (t.base.predictor == j && t.gates.empty()) effect += t.coefficient * t.base(v);
        out.points.emplace_back(v, effect);
    }
    for (const auto& t : sm.terms) {
        if (t.base.predictor != j || t.gates.empty()) continue;
        std::string key = render_term(t, model.feature_names);
        std::vector<std::pair<double, double>> pts;
        pts.reserve(grid.size());
        for (double v : grid) pts.emplace_back(v, t.coefficient * t.base(v));
        out.gated.emplace_back(std::move(key), std::move(pts));
    }
    return out;
}

}  // namespace aplr

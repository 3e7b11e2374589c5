#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aplr/boost.hpp"

namespace aplr {

/// Renders a term the way model reports print it: linear terms by name,
/// hinges as max/min(name-split,0), gates as trailing "* I(expr!=0)" factors.
std::string render_term(const Term& t, const std::vector<std::string>& names);
std::string render_basis(const BasisFunction& f, const std::vector<std::string>& names);

/// Inverse of render_term (coefficient excluded). Throws data_error on
/// malformed expressions or unknown feature names.
Term parse_term_expression(const std::string& expr, const std::vector<std::string>& names);

struct TermTableRow {
    std::optional<int> interaction_level;  // empty for the intercept row
    std::string expression;
    double coefficient = 0.0;
};

struct TermTable {
    std::vector<TermTableRow> rows;  // intercept first, then insertion order
};

TermTable term_table(const AplrModel& model, std::size_t class_index);

struct GlobalImportance {
    // Sorted descending; every model feature appears, unused ones with 0.
    std::vector<std::pair<std::string, double>> entries;
};

/// Per feature: population standard deviation over training rows of the
/// summed contributions of terms with that feature as main predictor,
/// averaged across class submodels.
GlobalImportance global_importance(const AplrModel& model, const EncodedMatrix& train_x);

struct LocalExplanation {
    std::size_t row = 0;
    double predicted_label = 0.0;
    double probability = 0.0;  // of the predicted class (classification only)
    std::size_t class_index = 0;
    double intercept = 0.0;
    // One entry per model feature, in model feature order.
    std::vector<std::pair<std::string, double>> contributions;
};

/// Additive share of one row's logit per feature for the chosen submodel
/// (defaults to the predicted class). intercept + sum(contributions) equals
/// the submodel output for that row.
LocalExplanation local_contributions(const AplrModel& model, const EncodedMatrix& x,
                                     std::size_t row,
                                     std::optional<std::size_t> class_index = std::nullopt);

struct ShapeCurve {
    // Partial effect of the ungated terms with the feature as main predictor.
    std::vector<std::pair<double, double>> points;
    // Gated terms reported separately, gate open: expression -> curve.
    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> gated;
};

ShapeCurve shape_curve(const AplrModel& model, const std::string& feature,
                       std::span<const double> grid, std::size_t class_index);

}  // namespace aplr

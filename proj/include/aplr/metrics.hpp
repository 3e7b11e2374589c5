#pragma once

#include <optional>
#include <span>

#include "aplr/types.hpp"

namespace aplr {

struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> auc;
    long tp = 0, fp = 0, tn = 0, fn = 0;
    double positive_label = 1.0;
    // Division-by-zero cases report 0 and clear the corresponding flag.
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;
};

/// Confusion-count metrics for 0/1 predictions (auc left unset).
MetricsReport classification_metrics(std::span<const double> y_true,
                                     std::span<const double> y_pred, double positive_label);

/// Rank-based (Mann-Whitney) AUC; tied scores credit half. Equals the mean
/// over all positive x negative pairs of [s+ > s-] + 0.5*[s+ == s-].
/// Throws data_error when only one class is present.
double auc(std::span<const double> scores, std::span<const double> y_true);

}  // namespace aplr

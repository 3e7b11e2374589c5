#include "aplr/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace aplr {

MetricsReport classification_metrics(std::span<const double> y_true,
                                     std::span<const double> y_pred, double positive_label) {
    if (y_true.size() != y_pred.size()) throw data_error("prediction/truth length mismatch");
    if (y_true.empty()) throw data_error("empty evaluation set");

    MetricsReport r;
    r.positive_label = positive_label;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        bool t = y_true[i] == positive_label;
        bool p = y_pred[i] == positive_label;
        r.tp += t && p;
        r.fp += !t && p;
        r.fn += t && !p;
        r.tn += !t && !p;
    }
    auto n = static_cast<double>(y_true.size());
    r.accuracy = static_cast<double>(r.tp + r.tn) / n;
    if (r.tp + r.fp > 0)
        r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    else
        r.precision_defined = false;
    if (r.tp + r.fn > 0)
        r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    else
        r.recall_defined = false;
    if (2 * r.tp + r.fp + r.fn > 0)
        r.f1 = static_cast<double>(2 * r.tp) / static_cast<double>(2 * r.tp + r.fp + r.fn);
    else
        r.f1_defined = false;
    return r;
}

double auc(std::span<const double> scores, std::span<const double> y_true) {
    if (scores.size() != y_true.size()) throw data_error("scores/truth length mismatch");

    std::size_t n_pos = 0;
    for (double t : y_true) n_pos += t == 1.0;
    std::size_t n_neg = y_true.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw data_error("AUC needs both classes present");

    // Midranks over the sorted scores; ties share the average rank.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (y_true[order[k]] == 1.0) rank_sum_pos += midrank;
        i = j;
    }
    double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace aplr

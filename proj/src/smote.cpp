#include "aplr/smote.hpp"

#include <algorithm>
#include <cmath>

namespace aplr {

void SmoteConfig::validate() const {
    if (k_neighbors < 1) throw config_error("smote k_neighbors must be >= 1");
    if (!(target_ratio > 0.0 && target_ratio <= 1.0))
        throw config_error("smote target_ratio must lie in (0, 1]");
}

OversampleResult oversample(const EncodedMatrix& x, const Labels& y, const SmoteConfig& cfg) {
    cfg.validate();
    if (y.kind != LabelKind::binary) throw data_error("oversample requires binary labels");
    y.validate();
    if (x.rows() != y.size()) throw data_error("matrix and labels disagree on row count");

    std::vector<std::size_t> zeros, ones;
    for (std::size_t i = 0; i < y.size(); ++i) (y.y[i] == 0.0 ? zeros : ones).push_back(i);

    OversampleResult out{x, y, {}};
    if (zeros.size() == ones.size()) return out;

    const auto& minority = zeros.size() < ones.size() ? zeros : ones;
    const auto& majority = zeros.size() < ones.size() ? ones : zeros;
    const double minority_label = zeros.size() < ones.size() ? 0.0 : 1.0;

    std::size_t quota = static_cast<std::size_t>(
        std::llround(cfg.target_ratio * static_cast<double>(majority.size())));
    if (quota <= minority.size()) return out;
    std::size_t to_make = quota - minority.size();

    std::size_t k = static_cast<std::size_t>(cfg.k_neighbors);
    if (minority.size() <= k)
        throw data_error("minority class has " + std::to_string(minority.size()) +
                         " members, need more than k_neighbors=" + std::to_string(k));

    const std::size_t p = x.cols();
    auto dist2 = [&](std::size_t a, std::size_t b) {
        double d = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            double diff = x(a, j) - x(b, j);
            d += diff * diff;
        }
        return d;
    };

    // k nearest minority neighbours per minority row; ties to lower row index.
    std::vector<std::vector<std::size_t>> neighbors(minority.size());
    for (std::size_t a = 0; a < minority.size(); ++a) {
        std::vector<std::pair<double, std::size_t>> cand;
        cand.reserve(minority.size() - 1);
        for (std::size_t b = 0; b < minority.size(); ++b)
            if (b != a) cand.emplace_back(dist2(minority[a], minority[b]), minority[b]);
        std::sort(cand.begin(), cand.end());
        neighbors[a].reserve(k);
        for (std::size_t i = 0; i < k; ++i) neighbors[a].push_back(cand[i].second);
    }

    Rng rng(cfg.seed);
    std::vector<double> row(p);
    for (std::size_t s = 0; s < to_make; ++s) {
        std::size_t a_pos = s % minority.size();
        std::size_t a = minority[a_pos];
        std::size_t b = neighbors[a_pos][rng.next_below(k)];
        double u = rng.next_unit();
        for (std::size_t j = 0; j < p; ++j) row[j] = x(a, j) + u * (x(b, j) - x(a, j));
        out.x.append_row(row, 1.0);
        out.y.y.push_back(minority_label);
        out.synthetic.push_back({a, b, u});
    }
    return out;
}

}  // namespace aplr

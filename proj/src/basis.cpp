#include "aplr/basis.hpp"

#include <algorithm>
#include <cmath>

#include "aplr/boost.hpp"

namespace aplr {

Term Term::make(BasisFunction base, std::vector<BasisFunction> gates, double coefficient) {
    std::sort(gates.begin(), gates.end());
    gates.erase(std::unique(gates.begin(), gates.end()), gates.end());
    return Term{base, std::move(gates), coefficient};
}

Term Term::gated(BasisFunction base, const Term& parent) {
    auto gates = parent.gates;
    gates.push_back(parent.base);
    return make(base, std::move(gates));
}

std::vector<double> eval_term(const Term& t, const EncodedMatrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = t.value_at(x, i);
    return out;
}

std::vector<double> candidate_splits(std::span<const double> column, int min_obs) {
    if (min_obs < 1) throw config_error("min_observations_in_split must be >= 1");
    std::vector<double> sorted(column.begin(), column.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> vals = sorted;
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.size() <= 1) return {};

    // Prefix counts over the sorted copy give rows strictly below/above each
    // unique value, i.e. the nonzero hinge_neg/hinge_pos counts.
    const std::size_t n = column.size();
    std::vector<double> out;
    for (double v : vals) {
        std::size_t below = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
        std::size_t above = n - static_cast<std::size_t>(std::upper_bound(sorted.begin(),
                                                                          sorted.end(), v) -
                                                         sorted.begin());
        if (below >= static_cast<std::size_t>(min_obs) &&
            above >= static_cast<std::size_t>(min_obs))
            out.push_back(v);
    }

    if (out.size() > 100) {
        std::vector<double> picked;
        picked.reserve(100);
        for (int q = 0; q < 100; ++q) {
            std::size_t idx = static_cast<std::size_t>(
                std::llround(static_cast<double>(q) * static_cast<double>(out.size() - 1) / 99.0));
            picked.push_back(out[idx]);
        }
        picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
        out = std::move(picked);
    }
    return out;
}

namespace {

std::size_t nonzero_count(std::span<const double> v) {
    std::size_t c = 0;
    for (double x : v) c += x != 0.0;
    return c;
}

bool has_variance(std::span<const double> v) {
    for (double x : v)
        if (x != v[0]) return true;
    return false;
}

}  // namespace

CandidateSet enumerate_candidates(const EncodedMatrix& x, const std::vector<Term>& model_terms,
                                  const Hyperparams& hp) {
    const int min_obs = hp.min_observations_in_split;
    CandidateSet set;
    set.min_observations_in_split = min_obs;

    std::vector<Term> bases;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        auto col = x.column(j);
        int pred = static_cast<int>(j);
        if (has_variance(col) && nonzero_count(col) >= static_cast<std::size_t>(min_obs))
            bases.push_back(Term::make({pred, BasisKind::linear, 0.0}, {}));
        for (double s : candidate_splits(col, min_obs)) {
            bases.push_back(Term::make({pred, BasisKind::hinge_pos, s}, {}));
            bases.push_back(Term::make({pred, BasisKind::hinge_neg, s}, {}));
        }
    }
    set.terms = bases;

    if (hp.max_interaction_level > 0) {
        // Distinct gate chains from eligible model terms.
        std::vector<std::vector<BasisFunction>> chains;
        for (const auto& t : model_terms) {
            if (t.interaction_level() >= hp.max_interaction_level) continue;
            auto chain = Term::gated({0, BasisKind::linear, 0.0}, t).gates;
            if (std::find(chains.begin(), chains.end(), chain) == chains.end())
                chains.push_back(std::move(chain));
        }
        for (const auto& chain : chains) {
            std::vector<bool> open(x.rows(), true);
            for (std::size_t i = 0; i < x.rows(); ++i)
                for (const auto& g : chain)
                    if (g(x(i, static_cast<std::size_t>(g.predictor))) == 0.0) {
                        open[i] = false;
                        break;
                    }
            for (const auto& b : bases) {
                std::size_t n_eff = 0;
                for (std::size_t i = 0; i < x.rows(); ++i)
                    if (open[i] &&
                        b.base(x(i, static_cast<std::size_t>(b.base.predictor))) != 0.0)
                        ++n_eff;
                if (n_eff >= static_cast<std::size_t>(min_obs))
                    set.terms.push_back(Term::make(b.base, chain));
            }
        }
    }
    return set;
}

}  // namespace aplr

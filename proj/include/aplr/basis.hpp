#pragma once

#include <compare>
#include <span>
#include <vector>

#include "aplr/types.hpp"

namespace aplr {

enum class BasisKind : int { linear = 0, hinge_pos = 1, hinge_neg = 2 };

/// One predictor's transform: x_j, max(x_j - split, 0) or min(x_j - split, 0).
struct BasisFunction {
    int predictor = 0;
    BasisKind kind = BasisKind::linear;
    double split = 0.0;  // ignored for linear

    double operator()(double x) const {
        switch (kind) {
            case BasisKind::linear: return x;
            case BasisKind::hinge_pos: return x - split > 0.0 ? x - split : 0.0;
            case BasisKind::hinge_neg: return x - split < 0.0 ? x - split : 0.0;
        }
        return 0.0;
    }

    // Candidate ordering and tie-breaking: predictor, kind, split.
    friend auto operator<=>(const BasisFunction&, const BasisFunction&) = default;
};

/// A basis function times indicator gates I(g(x) != 0). The gate chain is
/// kept sorted and deduplicated; indicators commute and repeating one is a
/// no-op, so the sorted chain is a canonical form. interaction level =
/// chain length.
struct Term {
    BasisFunction base;
    std::vector<BasisFunction> gates;
    double coefficient = 0.0;

    int interaction_level() const { return static_cast<int>(gates.size()); }

    double value_at(const EncodedMatrix& x, std::size_t row) const {
        for (const auto& g : gates)
            if (g(x(row, static_cast<std::size_t>(g.predictor))) == 0.0) return 0.0;
        return base(x(row, static_cast<std::size_t>(base.predictor)));
    }

    /// Gates sorted + deduplicated, coefficient ignored.
    static Term make(BasisFunction base, std::vector<BasisFunction> gates, double coefficient = 0.0);

    /// New term: `base` gated on `parent` being nonzero. The parent's own
    /// gates carry over, so the level increases by exactly one.
    static Term gated(BasisFunction base, const Term& parent);

    friend auto operator<=>(const Term& a, const Term& b) {
        if (auto c = a.base <=> b.base; c != 0) return c;
        return std::lexicographical_compare_three_way(a.gates.begin(), a.gates.end(),
                                                      b.gates.begin(), b.gates.end());
    }
    /// Structural identity (base + gates); coefficients are not compared.
    friend bool operator==(const Term& a, const Term& b) {
        return a.base == b.base && a.gates == b.gates;
    }
};

/// Term values over all rows of x, without the coefficient.
std::vector<double> eval_term(const Term& t, const EncodedMatrix& x);

/// Admissible hinge split values for one column: sorted unique observed
/// values with at least min_obs rows strictly above and strictly below, so
/// both hinge directions keep min_obs nonzero evaluations. Capped at 100
/// empirical quantiles for high-cardinality columns. Constant column -> empty.
std::vector<double> candidate_splits(std::span<const double> column, int min_obs);

struct Hyperparams;  // boost.hpp

struct CandidateSet {
    std::vector<Term> terms;
    int min_observations_in_split = 0;
};

/// All candidate terms for one boosting step: per predictor a linear
/// candidate plus both hinges at each admissible split; when interactions are
/// allowed, every such base gated by each model term below the level cap.
/// Every candidate keeps >= min_observations_in_split nonzero values on x
/// (for gated candidates the full gated product is counted). Terms already in
/// the model reappear; re-selection accumulates their coefficient.
CandidateSet enumerate_candidates(const EncodedMatrix& x, const std::vector<Term>& model_terms,
                                  const Hyperparams& hp);

}  // namespace aplr

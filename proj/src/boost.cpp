#include "aplr/boost.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "aplr/dataset.hpp"

namespace aplr {

void Hyperparams::validate() const {
    if (boosting_steps < 0) throw config_error("boosting_steps must be >= 0");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0))
        throw config_error("learning_rate must lie in (0, 1]");
    if (max_interaction_level < 0) throw config_error("max_interaction_level must be >= 0");
    if (min_observations_in_split < 1)
        throw config_error("min_observations_in_split must be >= 1");
    if (early_stop.mode == EarlyStop::Mode::internal_cv && early_stop.folds < 2)
        throw config_error("internal_cv requires at least 2 folds");
}

std::size_t AplrModel::class_index(double label) const {
    for (std::size_t i = 0; i < class_labels.size(); ++i)
        if (class_labels[i] == label) return i;
    throw data_error("unknown class label: " + std::to_string(label));
}

double stable_sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow.
double log1pexp(double z) {
    if (z > 35.0) return z;
    return std::log1p(std::exp(z));
}

double weighted_mean(std::span<const double> v, std::span<const double> w) {
    if (w.empty()) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    }
    double s = 0.0, sw = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += v[i] * w[i];
        sw += w[i];
    }
    return s / sw;
}

}  // namespace

double binomial_nll(std::span<const double> y, std::span<const double> z,
                    std::span<const double> w) {
    double s = 0.0, sw = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        // -log p(y_i): log(1+exp(z)) - y*z
        double nll = log1pexp(z[i]) - y[i] * z[i];
        double wi = w.empty() ? 1.0 : w[i];
        s += wi * nll;
        sw += wi;
    }
    return s / sw;
}

std::vector<double> negative_gradient(Task task, std::span<const double> y,
                                      std::span<const double> fhat) {
    if (y.size() != fhat.size()) throw data_error("y and fhat lengths differ");
    std::vector<double> u(y.size());
    if (task == Task::regression) {
        for (std::size_t i = 0; i < y.size(); ++i) u[i] = y[i] - fhat[i];
    } else {
        for (std::size_t i = 0; i < y.size(); ++i) u[i] = y[i] - stable_sigmoid(fhat[i]);
    }
    return u;
}

double estimate_coefficient(std::span<const double> f, std::span<const double> w,
                            std::span<const double> u, double v) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        double wi = w.empty() ? 1.0 : w[i];
        num += f[i] * wi * u[i];
        den += f[i] * f[i] * wi;
    }
    if (den == 0.0) throw numeric_error("coefficient undefined: basis column is identically zero");
    return v * num / den;
}

// ---------------------------------------------------------------------------

namespace {

/// Base candidates in canonical order, mirroring enumerate_candidates.
std::vector<BasisFunction> build_base_functions(const EncodedMatrix& x, int min_obs) {
    std::vector<BasisFunction> out;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        auto col = x.column(j);
        int pred = static_cast<int>(j);
        bool variance = false;
        std::size_t nnz = 0;
        for (double v : col) {
            variance = variance || v != col[0];
            nnz += v != 0.0;
        }
        if (variance && nnz >= static_cast<std::size_t>(min_obs))
            out.push_back({pred, BasisKind::linear, 0.0});
        for (double s : candidate_splits(col, min_obs)) {
            out.push_back({pred, BasisKind::hinge_pos, s});
            out.push_back({pred, BasisKind::hinge_neg, s});
        }
    }
    return out;
}

}  // namespace

struct BoostEngine::Impl {
    const EncodedMatrix& x;
    std::vector<double> y;
    std::span<const double> w;
    Task task;
    Hyperparams hp;

    std::vector<BasisFunction> base_fns;
    std::vector<std::vector<double>> base_vals;

    std::vector<std::vector<BasisFunction>> chains;     // canonical gate chains
    std::vector<std::vector<double>> chain_masks;       // 0/1 per row

    struct Candidate {
        int base = 0;    // index into base_fns
        int chain = -1;  // index into chains, -1 = ungated
        double den = 0.0;
    };
    std::vector<Candidate> candidates;

    FitState st;
    std::vector<double> wu;         // scratch: weighted residual
    std::vector<double> wu_masked;  // scratch: weighted residual under a gate chain

    const EncodedMatrix* xv = nullptr;
    std::vector<double> yv;
    std::vector<double> fhat_val;
    std::vector<double> val_trace;
    std::vector<double> val_acc_trace;

    Impl(const EncodedMatrix& x_, std::span<const double> y_, Task task_, const Hyperparams& hp_)
        : x(x_), y(y_.begin(), y_.end()), w(x_.weights()), task(task_), hp(hp_) {
        hp.validate();
        if (y.size() != x.rows()) throw data_error("matrix and target disagree on row count");
        if (y.empty()) throw data_error("cannot fit on an empty matrix");

        base_fns = build_base_functions(x, hp.min_observations_in_split);
        base_vals.reserve(base_fns.size());
        for (const auto& f : base_fns) {
            std::vector<double> vals(x.rows());
            auto col = x.column(static_cast<std::size_t>(f.predictor));
            for (std::size_t i = 0; i < x.rows(); ++i) vals[i] = f(col[i]);
            base_vals.push_back(std::move(vals));
        }
        candidates.reserve(base_fns.size());
        for (std::size_t b = 0; b < base_fns.size(); ++b) {
            double den = 0.0;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                double wi = w.empty() ? 1.0 : w[i];
                den += base_vals[b][i] * base_vals[b][i] * wi;
            }
            candidates.push_back({static_cast<int>(b), -1, den});
        }

        st.intercept = initial_intercept();
        st.predictions.assign(x.rows(), st.intercept);
        refresh_residuals();
        st.loss_trace.push_back(training_loss());
        wu.resize(x.rows());
        wu_masked.resize(x.rows());
    }

    double initial_intercept() const {
        double m = weighted_mean(y, w);
        if (task == Task::regression) return m;
        if (!(m > 0.0 && m < 1.0))
            throw data_error("classification target contains a single class");
        return std::log(m / (1.0 - m));
    }

    void refresh_residuals() {
        st.residuals = negative_gradient(task, y, st.predictions);
    }

    double training_loss() const {
        if (task == Task::regression) {
            double s = 0.0, sw = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                double wi = w.empty() ? 1.0 : w[i];
                double d = y[i] - st.predictions[i];
                s += wi * d * d;
                sw += wi;
            }
            return s / sw;
        }
        return binomial_nll(y, st.predictions, w);
    }

    double validation_loss() const {
        if (task == Task::regression) {
            double s = 0.0;
            for (std::size_t i = 0; i < yv.size(); ++i) {
                double d = yv[i] - fhat_val[i];
                s += d * d;
            }
            return s / static_cast<double>(yv.size());
        }
        return binomial_nll(yv, fhat_val, {});
    }

    double validation_accuracy() const {
        if (task == Task::regression) return 0.0;
        double correct = 0.0;
        for (std::size_t i = 0; i < yv.size(); ++i)
            correct += (fhat_val[i] > 0.0 ? 1.0 : 0.0) == yv[i];
        return correct / static_cast<double>(yv.size());
    }

    Term candidate_term(const Candidate& c) const {
        return Term{base_fns[static_cast<std::size_t>(c.base)],
                    c.chain < 0 ? std::vector<BasisFunction>{}
                                : chains[static_cast<std::size_t>(c.chain)],
                    0.0};
    }

    // Canonical candidate order: base, then gate chain.
    bool candidate_less(const Candidate& a, const Candidate& b) const {
        const auto& fa = base_fns[static_cast<std::size_t>(a.base)];
        const auto& fb = base_fns[static_cast<std::size_t>(b.base)];
        if (auto c = fa <=> fb; c != 0) return c < 0;
        static const std::vector<BasisFunction> empty;
        const auto& ga = a.chain < 0 ? empty : chains[static_cast<std::size_t>(a.chain)];
        const auto& gb = b.chain < 0 ? empty : chains[static_cast<std::size_t>(b.chain)];
        return std::lexicographical_compare_three_way(ga.begin(), ga.end(), gb.begin(),
                                                      gb.end()) < 0;
    }

    void register_chain_for(const Term& parent) {
        if (parent.interaction_level() >= hp.max_interaction_level) return;
        auto chain = Term::gated({0, BasisKind::linear, 0.0}, parent).gates;
        if (std::find(chains.begin(), chains.end(), chain) != chains.end()) return;

        std::vector<double> mask(x.rows(), 1.0);
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (const auto& g : chain)
                if (g(x(i, static_cast<std::size_t>(g.predictor))) == 0.0) {
                    mask[i] = 0.0;
                    break;
                }
        chains.push_back(std::move(chain));
        const auto& m = chain_masks.emplace_back(std::move(mask));
        int chain_idx = static_cast<int>(chains.size()) - 1;

        for (std::size_t b = 0; b < base_fns.size(); ++b) {
            double den = 0.0;
            std::size_t n_eff = 0;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                double v = base_vals[b][i] * m[i];
                if (v != 0.0) ++n_eff;
                double wi = w.empty() ? 1.0 : w[i];
                den += v * v * wi;
            }
            if (n_eff >= static_cast<std::size_t>(hp.min_observations_in_split))
                candidates.push_back({static_cast<int>(b), chain_idx, den});
        }
    }

    void apply_to_validation_intercept(double delta) {
        for (auto& v : fhat_val) v += delta;
    }

    void apply_to_validation_term(const Term& t, double beta) {
        for (std::size_t i = 0; i < fhat_val.size(); ++i)
            fhat_val[i] += beta * t.value_at(*xv, i);
    }

    void step() {
        const double v = hp.learning_rate;

        // Intercept moves by the learning-rate-scaled weighted mean residual,
        // then the gradient is recomputed.
        double delta = v * weighted_mean(st.residuals, w);
        st.intercept += delta;
        for (auto& f : st.predictions) f += delta;
        refresh_residuals();
        if (xv) apply_to_validation_intercept(delta);

        for (std::size_t i = 0; i < x.rows(); ++i)
            wu[i] = w.empty() ? st.residuals[i] : w[i] * st.residuals[i];

        // Score every candidate: gain = (sum f*w*u)^2 / sum f^2*w. The winner
        // maximizes gain; exact ties go to the lower candidate key.
        // Candidates sit grouped by gate chain, so the masked residual is
        // built once per group (masks are exactly 0/1, the product is exact).
        std::ptrdiff_t best = -1;
        double best_gain = 0.0, best_num = 0.0;
        int current_chain = -1;
        const double* resid = wu.data();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            const auto& cand = candidates[c];
            if (cand.chain != current_chain) {
                current_chain = cand.chain;
                if (current_chain < 0) {
                    resid = wu.data();
                } else {
                    const double* m =
                        chain_masks[static_cast<std::size_t>(current_chain)].data();
                    for (std::size_t i = 0; i < wu.size(); ++i) wu_masked[i] = m[i] * wu[i];
                    resid = wu_masked.data();
                }
            }
            const double* f = base_vals[static_cast<std::size_t>(cand.base)].data();
            double num = 0.0;
            for (std::size_t i = 0; i < wu.size(); ++i) num += f[i] * resid[i];
            double gain = num * num / cand.den;
            bool better =
                gain > best_gain ||
                (best >= 0 && gain == best_gain &&
                 candidate_less(cand, candidates[static_cast<std::size_t>(best)]));
            if (best < 0 ? gain > 0.0 : better) {
                best = static_cast<std::ptrdiff_t>(c);
                best_gain = gain;
                best_num = num;
            }
        }

        if (best < 0) {
            // No candidate reduces the loss: intercept-only step.
            ++st.intercept_only_steps;
        } else {
            // By value: register_chain_for below may grow the candidate list.
            const Candidate cand = candidates[static_cast<std::size_t>(best)];
            double beta = v * best_num / cand.den;
            Term winner = candidate_term(cand);

            auto existing = std::find(st.terms.begin(), st.terms.end(), winner);
            if (existing != st.terms.end()) {
                existing->coefficient += beta;
            } else {
                winner.coefficient = beta;
                st.terms.push_back(winner);
                register_chain_for(winner);
            }

            const double* f = base_vals[static_cast<std::size_t>(cand.base)].data();
            if (cand.chain < 0) {
                for (std::size_t i = 0; i < x.rows(); ++i) st.predictions[i] += beta * f[i];
            } else {
                const double* m = chain_masks[static_cast<std::size_t>(cand.chain)].data();
                for (std::size_t i = 0; i < x.rows(); ++i)
                    st.predictions[i] += beta * f[i] * m[i];
            }
            refresh_residuals();
            if (xv) apply_to_validation_term(winner, beta);
        }

        ++st.step;
        st.loss_trace.push_back(training_loss());
        if (xv) {
            val_trace.push_back(validation_loss());
            val_acc_trace.push_back(validation_accuracy());
        }
    }
};

BoostEngine::BoostEngine(const EncodedMatrix& x, std::span<const double> y, Task task,
                         const Hyperparams& hp)
    : impl_(std::make_unique<Impl>(x, y, task, hp)) {}

BoostEngine::~BoostEngine() = default;
BoostEngine::BoostEngine(BoostEngine&&) noexcept = default;

void BoostEngine::attach_validation(const EncodedMatrix& xv, std::span<const double> yv) {
    if (xv.rows() != yv.size()) throw data_error("validation matrix and target disagree");
    impl_->xv = &xv;
    impl_->yv.assign(yv.begin(), yv.end());
    impl_->fhat_val.assign(xv.rows(), impl_->st.intercept);
    impl_->val_trace.clear();
    impl_->val_trace.push_back(impl_->validation_loss());
    impl_->val_acc_trace.clear();
    impl_->val_acc_trace.push_back(impl_->validation_accuracy());
}

void BoostEngine::step() { impl_->step(); }

void BoostEngine::run(int steps) {
    for (int m = 0; m < steps; ++m) impl_->step();
}

const FitState& BoostEngine::state() const { return impl_->st; }

const std::vector<double>& BoostEngine::validation_trace() const { return impl_->val_trace; }

const std::vector<double>& BoostEngine::validation_accuracy_trace() const {
    return impl_->val_acc_trace;
}

std::vector<Term> BoostEngine::candidate_terms() const {
    std::vector<Term> out;
    out.reserve(impl_->candidates.size());
    for (const auto& c : impl_->candidates) out.push_back(impl_->candidate_term(c));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_finite(const EncodedMatrix& x, std::span<const double> y) {
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (double v : x.column(j))
            if (!std::isfinite(v))
                throw numeric_error("non-finite value in column '" + x.column_names()[j] + "'");
    for (double v : y)
        if (!std::isfinite(v)) throw numeric_error("non-finite target value");
}

struct RunResult {
    double intercept;
    std::vector<Term> terms;
    std::vector<double> loss_trace;
    int intercept_only_steps;
};

RunResult run_full(const EncodedMatrix& x, std::span<const double> y, Task task,
                   const Hyperparams& hp, int steps) {
    BoostEngine eng(x, y, task, hp);
    eng.run(steps);
    const auto& st = eng.state();
    return {st.intercept, st.terms, st.loss_trace, st.intercept_only_steps};
}

/// Validation-loss trace of one fold run (length steps+1).
std::vector<double> run_fold(const EncodedMatrix& x, std::span<const double> y,
                             const std::vector<int>& fold, int fold_id, Task task,
                             const Hyperparams& hp) {
    std::vector<std::size_t> tr, va;
    for (std::size_t i = 0; i < y.size(); ++i)
        (fold[i] == fold_id ? va : tr).push_back(i);
    if (tr.empty() || va.empty()) throw data_error("internal CV fold is empty");

    EncodedMatrix xtr = x.take_rows(tr);
    EncodedMatrix xva = x.take_rows(va);
    std::vector<double> ytr, yva;
    for (auto i : tr) ytr.push_back(y[i]);
    for (auto i : va) yva.push_back(y[i]);

    BoostEngine eng(xtr, ytr, task, hp);
    eng.attach_validation(xva, yva);
    eng.run(hp.boosting_steps);
    return eng.validation_trace();
}

/// One boosting run with internal k-fold selection of the step count.
RunResult run_with_early_stop(const EncodedMatrix& x, std::span<const double> y, Task task,
                              const Hyperparams& hp, int* selected_steps) {
    if (hp.early_stop.mode == EarlyStop::Mode::off || hp.boosting_steps == 0) {
        *selected_steps = hp.boosting_steps;
        return run_full(x, y, task, hp, hp.boosting_steps);
    }

    const int k = hp.early_stop.folds;
    Labels ly{std::vector<double>(y.begin(), y.end()),
              task == Task::classification ? LabelKind::binary : LabelKind::real};
    std::vector<int> fold =
        task == Task::classification
            ? stratified_fold_assignment(ly, k, derive_seed(hp.seed, "internal-cv"))
            : fold_assignment(y.size(), k, derive_seed(hp.seed, "internal-cv"));

    // Folds are independent; run them across the worker pool.
    std::vector<std::future<std::vector<double>>> futs;
    unsigned workers = std::min<unsigned>(worker_threads(), static_cast<unsigned>(k));
    for (int f = 0; f < k; ++f)
        futs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                  [&, f] { return run_fold(x, y, fold, f, task, hp); }));
    std::vector<std::vector<double>> traces;
    for (auto& fut : futs) traces.push_back(fut.get());

    std::size_t len = traces[0].size();
    int best_m = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < len; ++m) {
        double mean = 0.0;
        for (const auto& t : traces) mean += t[m];
        mean /= static_cast<double>(traces.size());
        if (mean < best_loss) {
            best_loss = mean;
            best_m = static_cast<int>(m);
        }
    }
    *selected_steps = best_m;
    return run_full(x, y, task, hp, best_m);
}

}  // namespace

AplrModel fit(const EncodedMatrix& x, const Labels& y, const Hyperparams& hp, Task task) {
    hp.validate();
    if (x.rows() != y.size()) throw data_error("matrix and labels disagree on row count");
    if (x.rows() < 2 * static_cast<std::size_t>(hp.min_observations_in_split))
        throw data_error("need at least 2*min_observations_in_split rows");
    check_finite(x, y.y);

    AplrModel model;
    model.task = task;
    model.feature_names = x.column_names();
    model.hyperparams = hp;
    model.train_rows = x.rows();

    if (task == Task::regression) {
        int m_star = 0;
        auto run = run_with_early_stop(x, y.y, task, hp, &m_star);
        model.submodels.push_back({run.intercept, std::move(run.terms)});
        model.loss_trace = std::move(run.loss_trace);
        model.selected_steps = m_star;
        model.intercept_only_steps = run.intercept_only_steps;
        return model;
    }

    if (y.kind != LabelKind::binary)
        throw data_error("classification requires binary labels");
    y.validate();
    std::size_t pos = 0;
    for (double v : y.y) pos += v == 1.0;
    if (pos == 0 || pos == y.size())
        throw data_error("classification requires both classes present");

    // Binary: boost the positive class once; the negative submodel is the
    // exact negation, so the symmetry holds coefficient by coefficient.
    int m_star = 0;
    auto run = run_with_early_stop(x, y.y, task, hp, &m_star);
    Submodel positive{run.intercept, run.terms};
    Submodel negative{-run.intercept, run.terms};
    for (auto& t : negative.terms) t.coefficient = -t.coefficient;

    model.class_labels = {0.0, 1.0};
    model.submodels.push_back(std::move(negative));
    model.submodels.push_back(std::move(positive));
    model.loss_trace = std::move(run.loss_trace);
    model.selected_steps = m_star;
    model.intercept_only_steps = run.intercept_only_steps;
    return model;
}

std::vector<double> submodel_logits(const Submodel& sm, const EncodedMatrix& x) {
    std::vector<double> out(x.rows(), sm.intercept);
    for (const auto& t : sm.terms)
        for (std::size_t i = 0; i < x.rows(); ++i)
            out[i] += t.coefficient * t.value_at(x, i);
    return out;
}

Prediction predict(const AplrModel& model, const EncodedMatrix& x) {
    EncodedMatrix aligned = x.reorder_columns(model.feature_names);

    Prediction pred;
    if (model.task == Task::regression) {
        pred.values = submodel_logits(model.submodels.front(), aligned);
        return pred;
    }

    for (const auto& sm : model.submodels) {
        auto z = submodel_logits(sm, aligned);
        std::vector<double> p(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) p[i] = stable_sigmoid(z[i]);
        pred.logits.push_back(std::move(z));
        pred.probabilities.push_back(std::move(p));
    }
    pred.labels.resize(aligned.rows());
    for (std::size_t i = 0; i < aligned.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < model.class_labels.size(); ++c)
            if (pred.probabilities[c][i] > pred.probabilities[best][i]) best = c;
        pred.labels[i] = model.class_labels[best];
    }
    return pred;
}

}  // namespace aplr

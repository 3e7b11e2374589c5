#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aplr/basis.hpp"
#include "aplr/types.hpp"

namespace aplr {

struct EarlyStop {
    enum class Mode { off, internal_cv };
    Mode mode = Mode::internal_cv;
    int folds = 5;

    friend bool operator==(const EarlyStop&, const EarlyStop&) = default;
};

struct Hyperparams {
    int boosting_steps = 3000;        // M
    double learning_rate = 0.5;       // v
    int max_interaction_level = 1;
    int min_observations_in_split = 20;
    std::uint64_t seed = 42;
    EarlyStop early_stop = {};

    void validate() const;
    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

enum class Task { regression, classification };

struct Submodel {
    double intercept = 0.0;
    std::vector<Term> terms;  // insertion order
};

struct AplrModel {
    Task task = Task::regression;
    std::vector<double> class_labels;  // classification only, ascending
    std::vector<Submodel> submodels;   // one per class label; regression: exactly one
    std::vector<std::string> feature_names;
    Hyperparams hyperparams;
    std::size_t train_rows = 0;
    int selected_steps = 0;            // boosting steps of the final run
    int intercept_only_steps = 0;
    std::vector<double> loss_trace;    // training loss per step of the final run; [0] = before boosting

    std::size_t class_index(double label) const;
};

/// Negative gradient of the loss at the current predictions: y - f for
/// squared error, y - sigmoid(f) for the binomial log-likelihood.
std::vector<double> negative_gradient(Task task, std::span<const double> y,
                                      std::span<const double> fhat);

/// Learning-rate-scaled weighted least-squares coefficient of a basis column
/// against the residual: v * sum(f w u) / sum(f^2 w). Pass an empty span for
/// unweighted data. Throws numeric_error when f is identically zero.
double estimate_coefficient(std::span<const double> f, std::span<const double> w,
                            std::span<const double> u, double v);

/// Mutable state of one boosting run, exposed for inspection.
struct FitState {
    int step = 0;
    double intercept = 0.0;
    std::vector<double> predictions;  // fhat (link scale)
    std::vector<double> residuals;    // u_m, recomputed after every update
    std::vector<Term> terms;          // C_m, insertion order, never shrinks
    std::vector<double> loss_trace;   // [0] = before boosting
    int intercept_only_steps = 0;
};

/// One componentwise boosting run in gradient space. Each step updates the
/// intercept by the learning-rate-scaled weighted mean residual, scores every
/// candidate term by its squared-error fit to the residual, and applies the
/// single best coefficient increment (ties to the lowest candidate key).
/// Candidate values are cached; interaction candidates appear as soon as
/// their parent term enters the model.
class BoostEngine {
public:
    /// `y` is the regression target or the one-vs-rest class indicator.
    /// The matrix must outlive the engine.
    BoostEngine(const EncodedMatrix& x, std::span<const double> y, Task task,
                const Hyperparams& hp);
    ~BoostEngine();
    BoostEngine(BoostEngine&&) noexcept;

    /// Tracks loss on held-out rows after every step (index m of the trace
    /// corresponds to the model after m steps).
    void attach_validation(const EncodedMatrix& xv, std::span<const double> yv);

    void step();
    void run(int steps);

    const FitState& state() const;
    const std::vector<double>& validation_trace() const;
    /// Classification only: fraction of held-out rows classified correctly
    /// after each step (sign of the logit against the 0/1 indicator).
    const std::vector<double>& validation_accuracy_trace() const;

    /// Current candidate set as terms (for cross-checking against
    /// enumerate_candidates).
    std::vector<Term> candidate_terms() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Fits an APLR model. Classification requires binary labels; the positive
/// submodel is boosted on the one-vs-rest gradient and the negative submodel
/// is its exact negation. With internal_cv early stopping, the step count m*
/// minimizing mean validation loss across k folds is chosen, then the model
/// is refit on all rows for m* steps.
AplrModel fit(const EncodedMatrix& x, const Labels& y, const Hyperparams& hp, Task task);

struct Prediction {
    std::vector<double> values;                    // regression only
    std::vector<std::vector<double>> logits;       // [class][row]
    std::vector<std::vector<double>> probabilities;
    std::vector<double> labels;                    // winning class label per row
};

/// Columns are matched to the training features by name; extra columns are
/// ignored, missing ones raise data_error. Class ties go to the lower label.
Prediction predict(const AplrModel& model, const EncodedMatrix& x);

/// Link-scale prediction of one submodel on a matrix already in model
/// feature order.
std::vector<double> submodel_logits(const Submodel& sm, const EncodedMatrix& x_model_order);

double stable_sigmoid(double z);

/// Mean weighted binomial negative log-likelihood of logits z against 0/1
/// targets.
double binomial_nll(std::span<const double> y, std::span<const double> z,
                    std::span<const double> w);

}  // namespace aplr

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "aplr/boost.hpp"
#include "aplr/interpret.hpp"
#include "aplr/metrics.hpp"
#include "aplr/model_io.hpp"
#include "aplr/smote.hpp"
#include "aplr/tuning.hpp"

namespace py = pybind11;

namespace {

aplr::EncodedMatrix matrix_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> X,
                                      std::vector<std::string> names) {
    if (X.ndim() != 2) throw aplr::data_error("X must be a 2-d array");
    auto n = static_cast<std::size_t>(X.shape(0));
    auto p = static_cast<std::size_t>(X.shape(1));
    if (names.empty())
        for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    if (names.size() != p) throw aplr::data_error("feature_names length must match X columns");
    aplr::EncodedMatrix m(n, std::move(names));
    auto r = X.unchecked<2>();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) m(i, j) = r(i, j);
    return m;
}

std::vector<double> vector_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> y) {
    if (y.ndim() != 1) throw aplr::data_error("y must be a 1-d array");
    auto r = y.unchecked<1>();
    std::vector<double> out(static_cast<std::size_t>(y.shape(0)));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = r(i);
    return out;
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
    py::array_t<double> out({static_cast<py::ssize_t>(v.size())});
    std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(double));
    return out;
}

aplr::Hyperparams hyperparams_from_kwargs(int steps, double learning_rate,
                                          int max_interaction_level,
                                          int min_observations_in_split, std::uint64_t seed,
                                          std::optional<int> cv_folds) {
    aplr::Hyperparams hp;
    hp.boosting_steps = steps;
    hp.learning_rate = learning_rate;
    hp.max_interaction_level = max_interaction_level;
    hp.min_observations_in_split = min_observations_in_split;
    hp.seed = seed;
    if (cv_folds)
        hp.early_stop = {aplr::EarlyStop::Mode::internal_cv, *cv_folds};
    else
        hp.early_stop = {aplr::EarlyStop::Mode::off, 5};
    return hp;
}

aplr::Labels labels_for(const std::vector<double>& y, aplr::Task task) {
    aplr::Labels labels{y, aplr::LabelKind::real};
    if (task == aplr::Task::classification) {
        labels.kind = aplr::LabelKind::binary;
        labels.validate();
    }
    return labels;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Piecewise linear regression models via componentwise gradient boosting";

    py::register_exception<aplr::config_error>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<aplr::data_error>(m, "DataError", PyExc_ValueError);
    py::register_exception<aplr::numeric_error>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<aplr::AplrModel>(m, "Model")
        .def_property_readonly("task",
                               [](const aplr::AplrModel& self) {
                                   return self.task == aplr::Task::regression ? "regression"
                                                                              : "classification";
                               })
        .def_property_readonly("feature_names",
                               [](const aplr::AplrModel& self) { return self.feature_names; })
        .def_property_readonly("selected_steps",
                               [](const aplr::AplrModel& self) { return self.selected_steps; })
        .def_property_readonly(
            "intercepts",
            [](const aplr::AplrModel& self) {
                std::vector<double> v;
                for (const auto& sm : self.submodels) v.push_back(sm.intercept);
                return v;
            })
        .def("predict",
             [](const aplr::AplrModel& self, py::array_t<double> X,
                std::vector<std::string> names) {
                 auto x = matrix_from_numpy(X, std::move(names));
                 auto pred = aplr::predict(self, x);
                 if (self.task == aplr::Task::regression) return to_numpy(pred.values);
                 return to_numpy(pred.labels);
             },
             py::arg("X"), py::arg("feature_names") = std::vector<std::string>{})
        .def("predict_proba",
             [](const aplr::AplrModel& self, py::array_t<double> X,
                std::vector<std::string> names) {
                 if (self.task != aplr::Task::classification)
                     throw aplr::data_error("predict_proba requires a classification model");
                 auto x = matrix_from_numpy(X, std::move(names));
                 auto pred = aplr::predict(self, x);
                 py::array_t<double> out({x.rows(), self.class_labels.size()});
                 auto r = out.mutable_unchecked<2>();
                 for (std::size_t i = 0; i < x.rows(); ++i)
                     for (std::size_t c = 0; c < self.class_labels.size(); ++c)
                         r(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(c)) =
                             pred.probabilities[c][i];
                 return out;
             },
             py::arg("X"), py::arg("feature_names") = std::vector<std::string>{})
        .def("terms",
             [](const aplr::AplrModel& self, std::size_t class_index) {
                 auto table = aplr::term_table(self, class_index);
                 py::list rows;
                 for (const auto& row : table.rows) {
                     py::dict d;
                     d["interaction_level"] = row.interaction_level
                                                  ? py::object(py::int_(*row.interaction_level))
                                                  : py::none();
                     d["term"] = row.expression;
                     d["coefficient"] = row.coefficient;
                     rows.append(std::move(d));
                 }
                 return rows;
             },
             py::arg("class_index") = 0)
        .def("global_importance",
             [](const aplr::AplrModel& self, py::array_t<double> X,
                std::vector<std::string> names) {
                 auto x = matrix_from_numpy(X, std::move(names));
                 auto gi = aplr::global_importance(self, x);
                 return gi.entries;
             },
             py::arg("X"), py::arg("feature_names") = std::vector<std::string>{})
        .def("local_contributions",
             [](const aplr::AplrModel& self, py::array_t<double> X, std::size_t row,
                std::optional<std::size_t> class_index, std::vector<std::string> names) {
                 auto x = matrix_from_numpy(X, std::move(names));
                 auto ex = aplr::local_contributions(self, x, row, class_index);
                 py::dict d;
                 d["row"] = ex.row;
                 d["class_index"] = ex.class_index;
                 d["predicted_label"] = ex.predicted_label;
                 d["probability"] = ex.probability;
                 d["intercept"] = ex.intercept;
                 py::dict contrib;
                 for (const auto& [name, c] : ex.contributions) contrib[name.c_str()] = c;
                 d["contributions"] = std::move(contrib);
                 return d;
             },
             py::arg("X"), py::arg("row"), py::arg("class_index") = std::nullopt,
             py::arg("feature_names") = std::vector<std::string>{})
        .def("to_json", [](const aplr::AplrModel& self) { return aplr::model_to_json(self); })
        .def("save", [](const aplr::AplrModel& self, const std::string& path) {
            aplr::save_model(path, self);
        });

    m.def("load_model", [](const std::string& path) { return aplr::load_model(path); });
    m.def("model_from_json",
          [](const std::string& text) { return aplr::model_from_json(text); });

    m.def(
        "fit",
        [](py::array_t<double> X, py::array_t<double> y, std::string task,
           std::vector<std::string> names, int steps, double learning_rate,
           int max_interaction_level, int min_observations_in_split, std::uint64_t seed,
           std::optional<int> cv_folds) {
            auto x = matrix_from_numpy(X, std::move(names));
            auto yy = vector_from_numpy(y);
            aplr::Task t = task == "regression" ? aplr::Task::regression
                                                : aplr::Task::classification;
            auto hp = hyperparams_from_kwargs(steps, learning_rate, max_interaction_level,
                                              min_observations_in_split, seed, cv_folds);
            return aplr::fit(x, labels_for(yy, t), hp, t);
        },
        py::arg("X"), py::arg("y"), py::arg("task") = "classification",
        py::arg("feature_names") = std::vector<std::string>{}, py::arg("steps") = 3000,
        py::arg("learning_rate") = 0.5, py::arg("max_interaction_level") = 1,
        py::arg("min_observations_in_split") = 20, py::arg("seed") = 42,
        py::arg("cv_folds") = std::optional<int>(5),
        "Fit an APLR model; cv_folds=None disables early stopping.");

    m.def(
        "oversample",
        [](py::array_t<double> X, py::array_t<double> y, int k, std::uint64_t seed,
           double ratio) {
            auto x = matrix_from_numpy(X, {});
            aplr::Labels labels{vector_from_numpy(y), aplr::LabelKind::binary};
            labels.validate();
            auto res = aplr::oversample(x, labels, {k, seed, ratio});
            py::array_t<double> xo({res.x.rows(), res.x.cols()});
            auto r = xo.mutable_unchecked<2>();
            for (std::size_t i = 0; i < res.x.rows(); ++i)
                for (std::size_t j = 0; j < res.x.cols(); ++j)
                    r(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = res.x(i, j);
            return py::make_tuple(xo, to_numpy(res.y.y));
        },
        py::arg("X"), py::arg("y"), py::arg("k") = 5, py::arg("seed") = 42,
        py::arg("ratio") = 1.0, "SMOTE oversampling of the minority class.");

    m.def(
        "classification_metrics",
        [](py::array_t<double> y_true, py::array_t<double> y_pred, double positive_label) {
            auto t = vector_from_numpy(y_true);
            auto p = vector_from_numpy(y_pred);
            auto r = aplr::classification_metrics(t, p, positive_label);
            py::dict d;
            d["accuracy"] = r.accuracy;
            d["precision"] = r.precision;
            d["recall"] = r.recall;
            d["f1"] = r.f1;
            d["tp"] = r.tp;
            d["fp"] = r.fp;
            d["tn"] = r.tn;
            d["fn"] = r.fn;
            return d;
        },
        py::arg("y_true"), py::arg("y_pred"), py::arg("positive_label") = 1.0);

    m.def("auc", [](py::array_t<double> scores, py::array_t<double> y_true) {
        return aplr::auc(vector_from_numpy(scores), vector_from_numpy(y_true));
    });

#ifdef APLR_VERSION
    m.attr("__version__") = APLR_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}

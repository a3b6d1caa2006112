#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfnn/dataset.hpp"
#include "rfnn/errors.hpp"
#include "rfnn/evaluation.hpp"
#include "rfnn/model_io.hpp"
#include "rfnn/network.hpp"
#include "rfnn/rules.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regularized fuzzy neural network classifier";

  py::register_exception<rfnn::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<rfnn::TrainError>(m, "TrainError", PyExc_RuntimeError);

  py::enum_<rfnn::NeuronKind>(m, "NeuronKind")
      .value("UNI", rfnn::NeuronKind::Uni)
      .value("AND", rfnn::NeuronKind::And)
      .value("OR", rfnn::NeuronKind::Or);

  py::enum_<rfnn::BoundaryMode>(m, "BoundaryMode")
      .value("MAX", rfnn::BoundaryMode::Max)
      .value("MIN", rfnn::BoundaryMode::Min);

  py::class_<rfnn::StandardizationStats>(m, "StandardizationStats")
      .def_readonly("means", &rfnn::StandardizationStats::means)
      .def_readonly("stddevs", &rfnn::StandardizationStats::stddevs);

  py::class_<rfnn::Dataset>(m, "Dataset")
      .def(py::init([](const Eigen::MatrixXd& features, const std::vector<int>& labels,
                       const std::vector<std::string>& feature_names) {
             rfnn::Dataset data;
             data.features = features;
             data.labels = labels;
             data.feature_names = feature_names;
             if (data.features.rows() != static_cast<Eigen::Index>(data.labels.size())) {
               throw rfnn::DataError("dataset: one label per feature row required");
             }
             if (data.features.cols() != static_cast<Eigen::Index>(data.feature_names.size())) {
               throw rfnn::DataError("dataset: one name per feature column required");
             }
             for (int y : data.labels) {
               if (y != 1 && y != -1) throw rfnn::DataError("dataset: labels must be -1 or +1");
             }
             return data;
           }),
           py::arg("features"), py::arg("labels"), py::arg("feature_names"))
      .def_readonly("features", &rfnn::Dataset::features)
      .def_readonly("labels", &rfnn::Dataset::labels)
      .def_readonly("feature_names", &rfnn::Dataset::feature_names)
      .def_property_readonly("num_samples", &rfnn::Dataset::num_samples)
      .def_property_readonly("num_features", &rfnn::Dataset::num_features);

  py::class_<rfnn::ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("num_mfs", &rfnn::ModelConfig::num_mfs)
      .def_readwrite("candidate_cap", &rfnn::ModelConfig::candidate_cap)
      .def_readwrite("bootstrap_reps", &rfnn::ModelConfig::bootstrap_reps)
      .def_readwrite("consensus_rho", &rfnn::ModelConfig::consensus_rho)
      .def_readwrite("leaky_alpha", &rfnn::ModelConfig::leaky_alpha)
      .def_readwrite("neuron_kind", &rfnn::ModelConfig::neuron_kind)
      .def_readwrite("boundary_mode", &rfnn::ModelConfig::boundary_mode)
      .def_readwrite("cv_folds", &rfnn::ModelConfig::cv_folds)
      .def_readwrite("seed", &rfnn::ModelConfig::seed);

  py::class_<rfnn::TrainingReport>(m, "TrainingReport")
      .def_readonly("candidates", &rfnn::TrainingReport::candidates)
      .def_readonly("screened", &rfnn::TrainingReport::screened)
      .def_readonly("selected", &rfnn::TrainingReport::selected)
      .def_readonly("bias_only", &rfnn::TrainingReport::bias_only)
      .def_readonly("lambdas", &rfnn::TrainingReport::lambdas)
      .def_readonly("degenerate_replications", &rfnn::TrainingReport::degenerate_replications)
      .def_readonly("train_seconds", &rfnn::TrainingReport::train_seconds);

  py::class_<rfnn::TrainedModel>(m, "TrainedModel")
      .def_readonly("config", &rfnn::TrainedModel::config)
      .def_readonly("output_weights", &rfnn::TrainedModel::output_weights)
      .def_readonly("feature_names", &rfnn::TrainedModel::feature_names)
      .def_readonly("report", &rfnn::TrainedModel::report)
      .def("score", [](const rfnn::TrainedModel& model,
                       const Eigen::VectorXd& x) { return rfnn::score(model, x); },
           py::arg("x"))
      .def("predict", [](const rfnn::TrainedModel& model,
                         const Eigen::VectorXd& x) { return rfnn::predict(model, x); },
           py::arg("x"))
      .def("score_batch",
           [](const rfnn::TrainedModel& model, const Eigen::MatrixXd& rows) {
             return rfnn::score_batch(model, rows);
           },
           py::arg("rows"))
      .def("predict_batch",
           [](const rfnn::TrainedModel& model, const Eigen::MatrixXd& rows) {
             return rfnn::predict_batch(model, rows);
           },
           py::arg("rows"))
      .def("to_json", &rfnn::model_to_json);

  py::class_<rfnn::RuleAntecedent>(m, "RuleAntecedent")
      .def_readonly("feature", &rfnn::RuleAntecedent::feature)
      .def_readonly("set_label", &rfnn::RuleAntecedent::set_label)
      .def_readonly("weight", &rfnn::RuleAntecedent::weight);

  py::class_<rfnn::FuzzyRule>(m, "FuzzyRule")
      .def_readonly("antecedents", &rfnn::FuzzyRule::antecedents)
      .def_readonly("certainty", &rfnn::FuzzyRule::certainty)
      .def_readonly("consequent", &rfnn::FuzzyRule::consequent)
      .def_readonly("connective", &rfnn::FuzzyRule::connective);

  py::class_<rfnn::Confusion>(m, "Confusion")
      .def_readonly("tp", &rfnn::Confusion::tp)
      .def_readonly("fp", &rfnn::Confusion::fp)
      .def_readonly("tn", &rfnn::Confusion::tn)
      .def_readonly("fn", &rfnn::Confusion::fn);

  py::class_<rfnn::Metrics>(m, "Metrics")
      .def_readonly("accuracy", &rfnn::Metrics::accuracy)
      .def_readonly("auc", &rfnn::Metrics::auc)
      .def_readonly("sensitivity", &rfnn::Metrics::sensitivity)
      .def_readonly("confusion", &rfnn::Metrics::confusion);

  m.def("load_csv", &rfnn::load_csv, py::arg("path"), py::arg("label_column") = "Class");
  m.def("train", &rfnn::train, py::arg("data"), py::arg("config") = rfnn::ModelConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("save_model", &rfnn::save_model, py::arg("model"), py::arg("path"));
  m.def("load_model", &rfnn::load_model, py::arg("path"));
  m.def("model_from_json", &rfnn::model_from_json, py::arg("text"));
  m.def("extract_rules",
        [](const rfnn::TrainedModel& model) { return rfnn::extract_rules(model); },
        py::arg("model"));
  m.def("render_rule", &rfnn::render_rule, py::arg("rule"), py::arg("index"),
        py::arg("decimals") = 4);
  m.def("featurize_sql",
        [](const std::vector<std::string>& statements) {
          const rfnn::SqlFeatures features = rfnn::featurize_sql(statements);
          return py::make_tuple(features.columns, features.values);
        },
        py::arg("statements"));
  m.def("compute_metrics",
        [](const std::vector<int>& labels, const std::vector<int>& predictions,
           const Eigen::VectorXd& scores) {
          return rfnn::compute_metrics(labels, predictions, scores);
        },
        py::arg("labels"), py::arg("predictions"), py::arg("scores"));
  m.def("auc_rank", &rfnn::auc_rank, py::arg("labels"), py::arg("scores"));
}

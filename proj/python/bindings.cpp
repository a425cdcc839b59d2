#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rda/baselines.hpp"
#include "rda/classifiers.hpp"
#include "rda/g_estimators.hpp"
#include "rda/harness.hpp"
#include "rda/libsvm.hpp"
#include "rda/model.hpp"
#include "rda/rmt.hpp"
#include "rda/tuning.hpp"

namespace py = pybind11;
using namespace rda;

namespace {

Priors as_priors(const std::pair<double, double>& priors) {
  return {priors.first, priors.second};
}

py::dict report_dict(const ErrorReport& report) {
  py::dict out;
  out["per_class"] = std::vector<double>{report.per_class[0], report.per_class[1]};
  out["total"] = report.total;
  out["method"] = method_name(report.method);
  out["classifier"] = classifier_name(report.kind);
  return out;
}

Classifier kind_from_name(const std::string& name) {
  if (name == "rlda") return Classifier::RLDA;
  if (name == "rqda") return Classifier::RQDA;
  throw DomainError("classifier must be 'rlda' or 'rqda'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "regularized discriminant analysis: classifiers, deterministic "
            "error equivalents, consistent error estimators, tuning";

  py::register_exception<Error>(m, "RdaError");

  py::class_<GaussianClassSpec>(m, "GaussianClassSpec")
      .def(py::init([](Eigen::VectorXd mean, Eigen::MatrixXd covariance, double prior) {
             return GaussianClassSpec{std::move(mean), std::move(covariance), prior};
           }),
           py::arg("mean"), py::arg("covariance"), py::arg("prior") = 0.5)
      .def_readonly("mean", &GaussianClassSpec::mean)
      .def_readonly("covariance", &GaussianClassSpec::covariance)
      .def_readonly("prior", &GaussianClassSpec::prior);

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def(py::init(&make_instance), py::arg("class0"), py::arg("class1"))
      .def_property_readonly("dim", [](const ProblemInstance& x) { return x.dim; })
      .def_property_readonly("class0", [](const ProblemInstance& x) { return x.cls[0]; })
      .def_property_readonly("class1", [](const ProblemInstance& x) { return x.cls[1]; })
      .def("mean_diff", &ProblemInstance::mean_diff);

  py::class_<TrainingSet>(m, "TrainingSet")
      .def(py::init([](Eigen::MatrixXd samples, std::vector<int> labels) {
             return make_training_set(std::move(samples), std::move(labels));
           }),
           py::arg("samples"), py::arg("labels"))
      .def_readonly("samples", &TrainingSet::samples)
      .def_readonly("labels", &TrainingSet::labels)
      .def_property_readonly("counts", [](const TrainingSet& t) {
        return std::pair<int, int>{t.counts[0], t.counts[1]};
      });

  py::class_<FittedDA>(m, "FittedDA")
      .def_property_readonly("mu_hat0", [](const FittedDA& f) { return f.mu_hat[0]; })
      .def_property_readonly("mu_hat1", [](const FittedDA& f) { return f.mu_hat[1]; })
      .def_property_readonly("sigma_hat0", [](const FittedDA& f) { return f.sigma_hat[0]; })
      .def_property_readonly("sigma_hat1", [](const FittedDA& f) { return f.sigma_hat[1]; })
      .def_readonly("sigma_pooled", &FittedDA::sigma_pooled)
      .def_readonly("gamma", &FittedDA::gamma)
      .def_readonly("H", &FittedDA::H)
      .def_property_readonly("H0", [](const FittedDA& f) { return f.H_class[0]; })
      .def_property_readonly("H1", [](const FittedDA& f) { return f.H_class[1]; })
      .def_property_readonly("priors", [](const FittedDA& f) {
        return std::pair<double, double>{f.priors[0], f.priors[1]};
      });

  m.def("sample_class", &sample_class, py::arg("spec"), py::arg("count"),
        py::arg("seed"));
  m.def("sample_training_set", &sample_training_set, py::arg("instance"),
        py::arg("n0"), py::arg("n1"), py::arg("seed"));
  m.def(
      "fit_statistics",
      [](const TrainingSet& train, double gamma,
         std::optional<std::pair<double, double>> priors) {
        return fit_statistics(train, gamma,
                              priors ? std::optional<Priors>(as_priors(*priors))
                                     : std::nullopt);
      },
      py::arg("train"), py::arg("gamma"), py::arg("priors") = py::none());

  m.def(
      "score",
      [](const FittedDA& fit, const std::string& kind, const Eigen::MatrixXd& x) {
        return score_batch(fit, kind_from_name(kind), x, fit.priors);
      },
      py::arg("fit"), py::arg("classifier"), py::arg("x"),
      "discriminant scores of the columns of x; positive means class 0");

  m.def(
      "empirical_error",
      [](const FittedDA& fit, const std::string& kind, const TrainingSet& test) {
        return report_dict(empirical_error(fit, kind_from_name(kind), test, fit.priors));
      },
      py::arg("fit"), py::arg("classifier"), py::arg("test"));

  m.def(
      "exact_error_rlda",
      [](const FittedDA& fit, const ProblemInstance& truth) {
        return report_dict(exact_error_rlda(fit, truth, fit.priors));
      },
      py::arg("fit"), py::arg("truth"));

  m.def(
      "lda_deterministic_error",
      [](const ProblemInstance& truth, int n0, int n1, double gamma,
         std::pair<double, double> priors) {
        const LdaEquivalents eq =
            lda_deterministic_error(truth, n0, n1, gamma, as_priors(priors));
        py::dict out;
        out["per_class"] = std::vector<double>{eq.eps[0], eq.eps[1]};
        out["total"] = eq.eps_total;
        out["G_bar"] = std::vector<double>{eq.G_bar[0], eq.G_bar[1]};
        out["D_bar"] = std::vector<double>{eq.D_bar[0], eq.D_bar[1]};
        return out;
      },
      py::arg("truth"), py::arg("n0"), py::arg("n1"), py::arg("gamma"),
      py::arg("priors") = std::pair<double, double>{0.5, 0.5});

  m.def(
      "qda_deterministic_error",
      [](const ProblemInstance& truth, int n0, int n1, double gamma,
         std::pair<double, double> priors) {
        const QdaEquivalents eq =
            qda_deterministic_error(truth, n0, n1, gamma, as_priors(priors));
        py::dict out;
        out["per_class"] = std::vector<double>{eq.eps[0], eq.eps[1]};
        out["total"] = eq.eps_total;
        out["delta"] = std::vector<double>{eq.delta[0], eq.delta[1]};
        out["xi_bar"] = std::vector<double>{eq.xi_bar[0], eq.xi_bar[1]};
        out["b_bar"] = std::vector<double>{eq.b_bar[0], eq.b_bar[1]};
        out["B_bar"] = std::vector<double>{eq.B_bar[0], eq.B_bar[1]};
        out["contraction"] = eq.contraction;
        return out;
      },
      py::arg("truth"), py::arg("n0"), py::arg("n1"), py::arg("gamma"),
      py::arg("priors") = std::pair<double, double>{0.5, 0.5});

  m.def(
      "g_estimate",
      [](const FittedDA& fit, const std::string& kind) {
        return report_dict(g_estimate(fit, kind_from_name(kind), fit.priors));
      },
      py::arg("fit"), py::arg("classifier"),
      "training-data-only estimate of the conditional misclassification error");

  m.def(
      "cv_error",
      [](const TrainingSet& train, double gamma, const std::string& kind, int folds,
         int repetitions, std::uint64_t seed) {
        BaselineConfig cfg;
        cfg.folds = folds;
        cfg.repetitions = repetitions;
        return report_dict(cv_error(train, gamma, kind_from_name(kind), cfg, seed));
      },
      py::arg("train"), py::arg("gamma"), py::arg("classifier"),
      py::arg("folds") = 5, py::arg("repetitions") = 5, py::arg("seed") = 0);

  m.def(
      "bootstrap_error",
      [](const TrainingSet& train, double gamma, const std::string& kind,
         int resamples, std::uint64_t seed) {
        BaselineConfig cfg;
        cfg.bootstrap_samples = resamples;
        const BootstrapResult out =
            bootstrap_error(train, gamma, kind_from_name(kind), cfg, seed);
        py::dict d;
        d["b632"] = out.b632.total;
        d["b632plus"] = out.b632plus.total;
        d["err_resub"] = out.err_resub;
        d["err_oob"] = out.err_oob;
        return d;
      },
      py::arg("train"), py::arg("gamma"), py::arg("classifier"),
      py::arg("resamples") = 100, py::arg("seed") = 0);

  m.def(
      "plugin_error",
      [](const FittedDA& fit, const std::string& kind) {
        return report_dict(plugin_error(fit, kind_from_name(kind), fit.priors));
      },
      py::arg("fit"), py::arg("classifier"));

  m.def(
      "two_stage_tune",
      [](const TrainingSet& train, const std::string& kind, const TrainingSet& holdout,
         double lo, double hi, int grid) {
        TuningResult stage1;
        const TuningResult result =
            two_stage_optimize(train, kind_from_name(kind), ValidationSpec{holdout},
                               lo, hi, grid, &stage1);
        py::dict out;
        out["gamma_star"] = result.gamma_star;
        out["objective"] = result.objective_at_star;
        out["interval"] = result.search_interval;
        out["stage1_gamma"] = stage1.gamma_star;
        return out;
      },
      py::arg("train"), py::arg("classifier"), py::arg("holdout"),
      py::arg("lo") = 1e-2, py::arg("hi") = 1e2, py::arg("grid") = 50);

  py::class_<SyntheticGeometry>(m, "SyntheticGeometry")
      .def(py::init([](int p, int n0, int n1, double toeplitz_ratio,
                       double spike_scale, double mean_shift, double prior0) {
             return SyntheticGeometry{p, n0, n1, toeplitz_ratio, spike_scale,
                                      mean_shift, prior0};
           }),
           py::arg("p") = 100, py::arg("n0") = 100, py::arg("n1") = 100,
           py::arg("toeplitz_ratio") = 0.6, py::arg("spike_scale") = 3.0,
           py::arg("mean_shift") = 0.8, py::arg("prior0") = 0.5)
      .def_readonly("p", &SyntheticGeometry::p)
      .def_readonly("n0", &SyntheticGeometry::n0)
      .def_readonly("n1", &SyntheticGeometry::n1);

  m.def("build_synthetic", &build_synthetic, py::arg("geometry"));

  m.def(
      "load_libsvm",
      [](const std::string& path, double label0, double label1, int min_features) {
        int skipped = 0;
        TrainingSet train = load_libsvm(path, label0, label1, min_features, &skipped);
        return std::make_pair(std::move(train), skipped);
      },
      py::arg("path"), py::arg("label0"), py::arg("label1"),
      py::arg("min_features") = 0);
  m.def("write_libsvm", &write_libsvm_file, py::arg("path"), py::arg("features"),
        py::arg("labels"));
}

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "tsms/criteria.hpp"
#include "tsms/dgp.hpp"
#include "tsms/errors.hpp"
#include "tsms/experiments.hpp"
#include "tsms/firststage.hpp"
#include "tsms/io.hpp"
#include "tsms/optimizer.hpp"
#include "tsms/rates.hpp"

namespace py = pybind11;
using namespace tsms;

namespace {

Dataset to_dataset(const std::vector<double>& y, const RowMatrix& X) {
    Dataset d{y, X};
    d.validate();
    return d;
}

MultiDataset to_multi(const std::vector<double>& y, const RowMatrix& X, std::size_t J) {
    MultiDataset m{y, X, J};
    m.validate();
    return m;
}

ErrorSpec error_spec(const std::string& family, double scale) {
    if (family == "logistic") return ErrorSpec::logistic(scale);
    if (family == "gaussian") return ErrorSpec::gaussian(scale);
    throw ValidationError("unknown error family '" + family + "'");
}

py::dict result_dict(const OptResult& r) {
    py::dict out;
    out["theta"] = r.argmax.coords();
    out["value"] = r.value;
    out["evaluations"] = r.evaluations;
    out["method"] = to_string(r.method);
    return out;
}

OptimizerConfig config(std::size_t resolution, std::size_t rounds, std::size_t multistart, std::size_t probes) {
    OptimizerConfig c;
    c.resolution = resolution;
    c.rounds = rounds;
    c.multistart = multistart;
    c.probes = probes;
    return c;
}

}  // namespace

PYBIND11_MODULE(_tsms, m) {
    m.doc() = "Two-stage maximum score estimation";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

    m.def(
        "simulate_binary",
        [](std::size_t n, const Vector& theta0, const std::string& error, double scale, std::uint64_t seed) {
            Rng rng(seed);
            const Dataset d = simulate_binary(n, static_cast<std::size_t>(theta0.size()),
                                              Direction::normalized(theta0), error_spec(error, scale), rng);
            return py::make_tuple(d.y, d.X);
        },
        py::arg("n"), py::arg("theta0"), py::arg("error") = "logistic", py::arg("scale") = 1.0, py::arg("seed") = 1);

    m.def(
        "simulate_multi_index",
        [](std::size_t n, std::size_t J, const Vector& theta0, double noise_sd, std::uint64_t seed) {
            Rng rng(seed);
            const MultiDataset d = simulate_multi_index(n, J, static_cast<std::size_t>(theta0.size()),
                                                        Direction::normalized(theta0), LinkSpec{}, noise_sd, rng);
            return py::make_tuple(d.y, d.X);
        },
        py::arg("n"), py::arg("J"), py::arg("theta0"), py::arg("noise_sd") = 0.25, py::arg("seed") = 1);

    m.def(
        "ms_criterion",
        [](const std::vector<double>& y, const RowMatrix& X, const Vector& theta) {
            return ms_criterion(to_dataset(y, X), Direction::normalized(theta));
        },
        py::arg("y"), py::arg("X"), py::arg("theta"));

    m.def(
        "sms_criterion",
        [](const std::vector<double>& y, const RowMatrix& X, const Vector& theta, double bandwidth) {
            return sms_criterion(to_dataset(y, X), Direction::normalized(theta), bandwidth);
        },
        py::arg("y"), py::arg("X"), py::arg("theta"), py::arg("bandwidth"));

    m.def(
        "tsms_criterion",
        [](const std::vector<double>& y, const RowMatrix& X, const Vector& theta, double bandwidth) {
            const Dataset d = to_dataset(y, X);
            return tsms_criterion(d, FirstStageFit::binary(d, bandwidth), Direction::normalized(theta));
        },
        py::arg("y"), py::arg("X"), py::arg("theta"), py::arg("bandwidth"));

    m.def(
        "first_stage",
        [](const std::vector<double>& y, const RowMatrix& X, double bandwidth, const RowMatrix& points,
           bool estimated_density) {
            const Dataset d = to_dataset(y, X);
            const FirstStageFit fit =
                FirstStageFit::binary(d, bandwidth, estimated_density ? DensityMode::Estimated : DensityMode::Known);
            if (points.cols() != X.cols()) throw DimensionError("points must have the dimension of X");
            std::vector<double> out(static_cast<std::size_t>(points.rows()));
            for (Eigen::Index i = 0; i < points.rows(); ++i)
                out[static_cast<std::size_t>(i)] = fit({points.row(i).data(), static_cast<std::size_t>(points.cols())});
            return out;
        },
        py::arg("y"), py::arg("X"), py::arg("bandwidth"), py::arg("points"), py::arg("estimated_density") = false);

    m.def(
        "estimate",
        [](const std::vector<double>& y, const RowMatrix& X, const std::string& estimator, double bandwidth,
           std::size_t J, std::uint64_t seed, std::size_t resolution, std::size_t rounds, std::size_t multistart,
           std::size_t probes) {
            const EstimatorKind kind = estimator_from_string(estimator);
            const OptimizerConfig cfg = config(resolution, rounds, multistart, probes);
            Rng rng(seed);
            const bool needs_bandwidth = kind != EstimatorKind::MaximumScore;
            if (needs_bandwidth && !(bandwidth > 0.0)) throw ValidationError("bandwidth must be positive");
            if (kind == EstimatorKind::MultiIndex) {
                const MultiDataset d = to_multi(y, X, J);
                return result_dict(estimate(d, CriterionSpec::multi_index(FirstStageFit::multi_index(d, bandwidth)), cfg, rng));
            }
            const Dataset d = to_dataset(y, X);
            switch (kind) {
                case EstimatorKind::Smoothed:
                    return result_dict(estimate(d, CriterionSpec::smoothed(bandwidth), cfg, rng));
                case EstimatorKind::TwoStage:
                    return result_dict(estimate(d, CriterionSpec::two_stage(FirstStageFit::binary(d, bandwidth)), cfg, rng));
                default:
                    return result_dict(estimate(d, CriterionSpec::maximum_score(), cfg, rng));
            }
        },
        py::arg("y"), py::arg("X"), py::arg("estimator") = "ms", py::arg("bandwidth") = 0.0, py::arg("J") = 2,
        py::arg("seed") = 1, py::arg("resolution") = 0, py::arg("rounds") = 8, py::arg("multistart") = 8,
        py::arg("probes") = 0);

    m.def(
        "exact_argmax_2d",
        [](const RowMatrix& X, const std::vector<double>& weights) {
            return result_dict(exact_argmax_2d(IndicatorCriterion(X, weights)));
        },
        py::arg("X"), py::arg("weights"));

    m.def(
        "population_identity_check",
        [](const std::vector<double>& y, const RowMatrix& X, double bandwidth, const Vector& theta) {
            const IdentityCheck c = population_identity_check(to_dataset(y, X), bandwidth, Direction::normalized(theta));
            return py::make_tuple(c.lhs, c.rhs);
        },
        py::arg("y"), py::arg("X"), py::arg("bandwidth"), py::arg("theta"));

    m.def(
        "theoretical_rate",
        [](int d, int p) {
            const auto [rate, regime] = theoretical_rate(d, p);
            py::dict out;
            out["regime"] = to_string(regime);
            out["alpha"] = py::make_tuple(rate.alpha.numerator(), rate.alpha.denominator());
            out["beta"] = py::make_tuple(rate.beta.numerator(), rate.beta.denominator());
            return out;
        },
        py::arg("d"), py::arg("p") = 2);

    m.def("optimal_bandwidth", &optimal_bandwidth, py::arg("d"), py::arg("n"), py::arg("p") = 2);

    m.def(
        "fit_loglog_slope",
        [](const std::vector<double>& n, const std::vector<double>& error) {
            if (n.size() != error.size()) throw DimensionError("n and error lengths differ");
            std::vector<std::pair<double, double>> pts;
            for (std::size_t k = 0; k < n.size(); ++k) pts.emplace_back(n[k], error[k]);
            const SlopeFit f = fit_loglog_slope(pts);
            return py::make_tuple(f.slope, f.stderr_);
        },
        py::arg("n"), py::arg("error"));

    m.def(
        "run_experiment",
        [](const std::map<std::string, std::string>& config) {
            const ExperimentSpec spec = experiment_spec_from_config(config);
            const ExperimentResult result = [&] {
                py::gil_scoped_release release;
                return run_rate_experiment(spec);
            }();
            return experiment_result_json(spec, result);
        },
        py::arg("config"), "Runs a rate experiment from config keys and returns the JSON result.");
}

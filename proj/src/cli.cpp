#include "tsms/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsms/errors.hpp"
#include "tsms/experiments.hpp"
#include "tsms/io.hpp"
#include "tsms/optimizer.hpp"
#include "tsms/rates.hpp"

namespace tsms {

namespace {

using json = nlohmann::ordered_json;

std::string one_line(std::string text) {
    for (auto& c : text) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

json to_json(const Vector& v) {
    auto out = json::array();
    for (double x : v) out.push_back(x);
    return out;
}

Vector vector_from(const std::vector<double>& values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) v[static_cast<Eigen::Index>(k)] = values[k];
    return v;
}

ErrorSpec error_from(const std::string& family, double scale, const std::string& slope, std::size_t d) {
    if (family == "logistic") return ErrorSpec::logistic(scale);
    if (family == "gaussian") return ErrorSpec::gaussian(scale);
    if (family == "hetero") {
        const Vector s = slope.empty() ? Vector(Vector::Zero(static_cast<Eigen::Index>(d)))
                                       : vector_from(parse_number_list(slope));
        return ErrorSpec::heteroskedastic_logistic(scale, s);
    }
    throw ValidationError("unknown error family '" + family + "' (expected logistic, gaussian, hetero)");
}

Direction theta_from(const std::string& text, std::size_t d) {
    if (text.empty()) return Direction::normalized(Vector::Ones(static_cast<Eigen::Index>(d)));
    const Vector v = vector_from(parse_number_list(text));
    if (static_cast<std::size_t>(v.size()) != d) throw DimensionError("--theta must have d entries");
    return Direction::normalized(v);
}

struct SimulateArgs {
    std::size_t n = 100;
    std::size_t d = 2;
    std::size_t J = 0;
    std::uint64_t seed = 1;
    std::string error = "logistic";
    double scale = 1.0;
    std::string slope;
    std::string theta;
    double noise_sd = 0.25;
    double link_scale = 1.0;
    std::string out;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    if (a.n < 1) throw ValidationError("--n must be >= 1");
    if (a.d < 2) throw DimensionError("--d must be >= 2");
    const Direction theta0 = theta_from(a.theta, a.d);
    Rng rng(a.seed);
    std::ostringstream csv;
    if (a.J >= 2) {
        write_dataset_csv(csv, simulate_multi_index(a.n, a.J, a.d, theta0, LinkSpec{a.link_scale}, a.noise_sd, rng));
    } else if (a.J == 1) {
        throw ValidationError("--J must be >= 2 for multi-index data (omit it for binary data)");
    } else {
        write_dataset_csv(csv, simulate_binary(a.n, a.d, theta0, error_from(a.error, a.scale, a.slope, a.d), rng));
    }
    if (a.out.empty() || a.out == "-") {
        out << csv.str();
    } else {
        std::ofstream file(a.out);
        if (!file) throw ComputationError("cannot write '" + a.out + "'");
        file << csv.str();
    }
    return 0;
}

struct EstimateArgs {
    std::string data;
    std::string estimator = "ms";
    std::string bandwidth;
    std::string density = "known";
    std::uint64_t seed = 1;
    OptimizerConfig optimizer;
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
    const AnyDataset any = load_dataset_csv(a.data);
    const EstimatorKind kind = estimator_from_string(a.estimator);
    if (a.density != "known" && a.density != "estimated") throw ValidationError("--density must be known or estimated");
    Rng rng(a.seed);

    json j;
    j["estimator"] = to_string(kind);
    OptResult result = std::visit(
        [&](const auto& data) -> OptResult {
            using T = std::decay_t<decltype(data)>;
            const double n = static_cast<double>(data.n());
            j["n"] = data.n();
            j["d"] = data.d();
            std::size_t first_stage_dim = data.d();
            if constexpr (std::is_same_v<T, MultiDataset>) {
                j["J"] = data.J;
                first_stage_dim = data.J * data.d();
            }
            const std::string rule = a.bandwidth.empty()
                                         ? (kind == EstimatorKind::MultiIndex ? "first-stage" : "theorem1")
                                         : a.bandwidth;
            const double b = BandwidthChoice::parse(rule).evaluate(n, data.d(), first_stage_dim);
            if constexpr (std::is_same_v<T, MultiDataset>) {
                if (kind != EstimatorKind::MultiIndex) {
                    throw ValidationError("multi-index data needs --estimator tsms-mmi");
                }
                j["bandwidth"] = b;
                return estimate(data, CriterionSpec::multi_index(FirstStageFit::multi_index(data, b)), a.optimizer, rng);
            } else {
                switch (kind) {
                    case EstimatorKind::MaximumScore:
                        j["bandwidth"] = nullptr;
                        return estimate(data, CriterionSpec::maximum_score(), a.optimizer, rng);
                    case EstimatorKind::Smoothed:
                        j["bandwidth"] = b;
                        return estimate(data, CriterionSpec::smoothed(b), a.optimizer, rng);
                    case EstimatorKind::TwoStage: {
                        j["bandwidth"] = b;
                        const DensityMode mode = a.density == "known" ? DensityMode::Known : DensityMode::Estimated;
                        return estimate(data, CriterionSpec::two_stage(FirstStageFit::binary(data, b, mode)),
                                        a.optimizer, rng);
                    }
                    case EstimatorKind::MultiIndex:
                        break;
                }
                throw ValidationError("tsms-mmi needs a multi-index dataset");
            }
        },
        any);
    j["theta"] = to_json(result.argmax.coords());
    j["value"] = result.value;
    j["method"] = to_string(result.method);
    j["evaluations"] = result.evaluations;
    out << std::setprecision(17) << j.dump(2) << '\n';
    return 0;
}

struct ExperimentArgs {
    std::string config;
    std::string json_path;
    std::string csv_path;
    std::size_t threads = 0;
};

int run_experiment(const ExperimentArgs& a, std::ostream& out) {
    std::ifstream in(a.config);
    if (!in) throw ValidationError("cannot open config '" + a.config + "'");
    ExperimentSpec spec = experiment_spec_from_config(parse_key_values(in));
    if (a.threads > 0) spec.threads = a.threads;
    const ExperimentResult result = run_rate_experiment(spec);
    const std::string body = experiment_result_json(spec, result);
    const std::string table = experiment_summary_csv(result);
    auto write = [](const std::string& path, const std::string& text) {
        std::ofstream file(path);
        if (!file) throw ComputationError("cannot write '" + path + "'");
        file << text;
    };
    if (!a.json_path.empty()) write(a.json_path, body + "\n");
    if (!a.csv_path.empty()) write(a.csv_path, table);
    out << table;
    out << "slope=" << std::setprecision(6) << result.slope << " stderr=" << result.slope_stderr
        << " failures=" << result.failures << '\n';
    return 0;
}

struct RatesArgs {
    int d = 2;
    int p = 2;
    double n = 10000;
};

int run_rates(const RatesArgs& a, std::ostream& out) {
    if (!(a.n >= 2.0)) throw ValidationError("--n must be >= 2");
    const auto [rate, regime] = theoretical_rate(a.d, a.p);
    out << "regime=" << to_string(regime) << '\n';
    out << "alpha=" << to_string(rate.alpha) << '\n';
    out << "beta=" << to_string(rate.beta) << '\n';
    out << "thresholds=" << a.p + 2 << ',' << 3 * a.p << '\n';
    out << std::setprecision(10);
    if (a.p == 2) {
        const BandwidthExponent b = optimal_bandwidth_exponent(a.d, a.p);
        out << "bandwidth_rule=n^(-" << to_string(b.n_power) << ")";
        if (b.log_power != Fraction(0)) out << " (log n)^(" << to_string(b.log_power) << ")";
        out << '\n';
        out << "b=" << b.evaluate(a.n) << '\n';
        const Rate an = first_stage_rate(a.d, b);
        out << "first_stage_rate=" << an.to_string() << '\n';
    }
    out << "rate_at_n=" << rate.evaluate(a.n) << '\n';
    out << "# regime table for p=" << a.p << '\n';
    out << "# d regime alpha beta\n";
    for (int d = 2; d <= std::max(a.d, 3 * a.p + 1); ++d) {
        const auto [r, g] = theoretical_rate(d, a.p);
        out << "# " << d << ' ' << to_string(g) << ' ' << to_string(r.alpha) << ' ' << to_string(r.beta) << '\n';
    }
    return 0;
}

struct ProbeArgs {
    std::string kind = "envelope";
    std::size_t d = 2;
    std::string error = "logistic";
    double scale = 1.0;
    std::string theta;
    std::string deltas = "0.2,0.1,0.05,0.025";
    std::size_t m = 200000;
    std::size_t n = 2000;
    std::size_t reps = 100;
    std::string weight = "h0";
    std::size_t oracle_draws = 1000000;
    std::uint64_t seed = 1;
};

int run_probe(const ProbeArgs& a, std::ostream& out) {
    const Direction theta0 = theta_from(a.theta, a.d);
    const ErrorSpec err = error_from(a.error, a.scale, "", a.d);
    const std::vector<double> deltas = parse_number_list(a.deltas);
    Rng rng(a.seed);
    json j;
    j["kind"] = a.kind;
    if (a.kind == "envelope") {
        const double bound = sup_gradient_bound(theta0, err, 10000);
        j["gradient_bound"] = bound;
        auto rows = json::array();
        std::vector<std::pair<double, double>> points;
        for (const auto& r : smoothing_envelope_probe(theta0, err, deltas, a.m, rng)) {
            rows.push_back(json{{"delta", r.delta},
                                {"max_abs_h0", r.max_abs_h0},
                                {"bound", bound * r.delta},
                                {"mean_weighted_sq", r.mean_weighted_sq},
                                {"disagreements", r.disagreements},
                                {"empty", r.empty}});
            if (!r.empty && r.delta > 0.0) points.emplace_back(r.delta, r.mean_weighted_sq);
        }
        j["rows"] = rows;
        if (points.size() >= 3) j["exponent"] = fit_loglog_slope(points).slope;
    } else if (a.kind == "process") {
        ProcessProbeOptions options;
        if (a.weight == "h0") {
            options.weight = ProcessWeight::H0;
        } else if (a.weight == "unit") {
            options.weight = ProcessWeight::Unit;
        } else {
            throw ValidationError("--weight must be h0 or unit");
        }
        options.oracle_draws = a.oracle_draws;
        const ProcessProbeResult result = empirical_process_probe(theta0, err, a.n, deltas, a.reps, rng, options);
        auto rows = json::array();
        for (const auto& r : result.rows) rows.push_back(json{{"delta", r.delta}, {"mean_sup", r.mean_sup}});
        j["weight"] = a.weight;
        j["rows"] = rows;
        j["exponent"] = result.exponent.slope;
        j["exponent_stderr"] = result.exponent.stderr_;
    } else {
        throw ValidationError("--kind must be envelope or process");
    }
    out << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-stage maximum score estimation toolkit", "tsms"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a dataset and write it as CSV");
    simulate->add_option("--n", sim.n, "Sample size");
    simulate->add_option("--d", sim.d, "Covariate dimension");
    simulate->add_option("--J", sim.J, "Index count (>= 2 simulates multi-index data)");
    simulate->add_option("--seed", sim.seed, "Random seed");
    simulate->add_option("--error", sim.error, "Error family: logistic, gaussian, hetero");
    simulate->add_option("--scale", sim.scale, "Error scale");
    simulate->add_option("--slope", sim.slope, "Heteroskedastic slope vector (comma list)");
    simulate->add_option("--theta", sim.theta, "True direction (comma list, normalized)");
    simulate->add_option("--noise-sd", sim.noise_sd, "Multi-index outcome noise sd");
    simulate->add_option("--link-scale", sim.link_scale, "Multi-index link scale");
    simulate->add_option("--out", sim.out, "Output CSV path (stdout if omitted)");

    EstimateArgs est;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate the direction from a CSV dataset");
    estimate_cmd->add_option("--data", est.data, "Input CSV")->required();
    estimate_cmd->add_option("--estimator", est.estimator, "ms, sms, tsms or tsms-mmi");
    estimate_cmd->add_option("--bandwidth", est.bandwidth, "theorem1, first-stage or a positive number");
    estimate_cmd->add_option("--density", est.density, "First-stage density: known or estimated");
    estimate_cmd->add_option("--seed", est.seed, "Seed for the pattern search");
    estimate_cmd->add_option("--resolution", est.optimizer.resolution, "Grid resolution (0 = default)");
    estimate_cmd->add_option("--rounds", est.optimizer.rounds, "Refinement rounds");
    estimate_cmd->add_option("--multistart", est.optimizer.multistart, "Refinement starts");
    estimate_cmd->add_option("--probes", est.optimizer.probes, "Probes per start per round (0 = default)");

    ExperimentArgs exp;
    auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo rate experiment from a config file");
    experiment->add_option("--config", exp.config, "key = value config file")->required();
    experiment->add_option("--json", exp.json_path, "Full JSON result path");
    experiment->add_option("--csv", exp.csv_path, "Per-n summary CSV path");
    experiment->add_option("--threads", exp.threads, "Worker threads (overrides TSMS_THREADS)");

    RatesArgs rat;
    auto* rates = app.add_subcommand("rates", "Print convergence regimes, rates and bandwidths");
    rates->add_option("--d", rat.d, "Covariate dimension");
    rates->add_option("--p", rat.p, "Kernel order");
    rates->add_option("--n", rat.n, "Sample size");

    ProbeArgs prb;
    auto* probe = app.add_subcommand("probe", "Empirical probes of the smoothing mechanism");
    probe->add_option("--kind", prb.kind, "envelope or process");
    probe->add_option("--d", prb.d, "Covariate dimension");
    probe->add_option("--error", prb.error, "Error family: logistic, gaussian");
    probe->add_option("--scale", prb.scale, "Error scale");
    probe->add_option("--theta", prb.theta, "True direction");
    probe->add_option("--deltas", prb.deltas, "Comma list of distances");
    probe->add_option("--m", prb.m, "Draws per delta (envelope)");
    probe->add_option("--n", prb.n, "Sample size (process)");
    probe->add_option("--reps", prb.reps, "Replications (process)");
    probe->add_option("--weight", prb.weight, "h0 or unit (process)");
    probe->add_option("--oracle-draws", prb.oracle_draws, "Population oracle sample size (process)");
    probe->add_option("--seed", prb.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << one_line(e.what()) << '\n';
        err << app.help();
        return 2;
    }

    try {
        if (*simulate) return run_simulate(sim, out);
        if (*estimate_cmd) return run_estimate(est, out);
        if (*experiment) return run_experiment(exp, out);
        if (*rates) return run_rates(rat, out);
        if (*probe) return run_probe(prb, out);
    } catch (const ValidationError& e) {
        err << "error: validation: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: runtime: " << one_line(e.what()) << '\n';
        return 1;
    }
    return 2;
}

}  // namespace tsms

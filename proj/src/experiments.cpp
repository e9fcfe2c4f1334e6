#include "tsms/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tsms/errors.hpp"
#include "tsms/firststage.hpp"
#include "tsms/parallel.hpp"
#include "tsms/rates.hpp"

namespace tsms {

double BandwidthChoice::evaluate(double n, std::size_t d, std::size_t first_stage_dim) const {
    switch (rule) {
        case BandwidthRule::Theorem1Optimal:
            return optimal_bandwidth(static_cast<int>(d), n, 2);
        case BandwidthRule::FirstStageOptimal:
            return std::pow(n, -1.0 / (static_cast<double>(first_stage_dim) + 4.0));
        case BandwidthRule::Fixed:
            return fixed;
    }
    return fixed;
}

std::string BandwidthChoice::to_string() const {
    switch (rule) {
        case BandwidthRule::Theorem1Optimal:
            return "theorem1";
        case BandwidthRule::FirstStageOptimal:
            return "first-stage";
        case BandwidthRule::Fixed: {
            std::ostringstream out;
            out << std::setprecision(17) << fixed;
            return out.str();
        }
    }
    return "unknown";
}

BandwidthChoice BandwidthChoice::parse(const std::string& text) {
    if (text == "theorem1" || text == "theorem1-optimal") return {BandwidthRule::Theorem1Optimal, 0.0};
    if (text == "first-stage" || text == "first-stage-optimal") return {BandwidthRule::FirstStageOptimal, 0.0};
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(value > 0.0) || !std::isfinite(value)) {
        throw ValidationError("bandwidth must be theorem1, first-stage or a positive number, got '" + text + "'");
    }
    return {BandwidthRule::Fixed, value};
}

void ExperimentSpec::validate() const {
    if (n_grid.size() < 4) throw ValidationError("experiment n-grid needs at least 4 sample sizes");
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        if (n_grid[k] < 2) throw ValidationError("experiment sample sizes must be >= 2");
        if (k > 0 && n_grid[k] <= n_grid[k - 1]) throw ValidationError("experiment n-grid must be strictly increasing");
    }
    if (replications < 50) throw ValidationError("experiment needs at least 50 replications");
    if (d < 2) throw DimensionError("experiment needs d >= 2");
    if (theta0.dim() != d) throw DimensionError("theta0 dimension differs from d");
    if (p < 2 || p % 2 != 0) throw ValidationError("kernel order p must be an even integer >= 2");
    error.validate(d);
    if (estimator == EstimatorKind::MultiIndex && J < 2) throw ValidationError("multi-index experiment needs J >= 2");
    if (bandwidth.rule == BandwidthRule::Fixed && !(bandwidth.fixed > 0.0)) {
        throw ValidationError("fixed bandwidth must be positive");
    }
    if (split_sample && oracle_first_stage) throw ValidationError("split-sample and oracle first stage are exclusive");
    (void)optimizer.resolved(d);
}

namespace {

Dataset select_rows(const Dataset& data, std::size_t parity) {
    Dataset out;
    const std::size_t count = (data.n() + 1 - parity) / 2;
    out.X.resize(static_cast<Eigen::Index>(count), data.X.cols());
    out.y.reserve(count);
    std::size_t k = 0;
    for (std::size_t i = parity; i < data.n(); i += 2, ++k) {
        out.X.row(static_cast<Eigen::Index>(k)) = data.X.row(static_cast<Eigen::Index>(i));
        out.y.push_back(data.y[i]);
    }
    return out;
}

}  // namespace

ReplicationRecord run_replication(const ExperimentSpec& spec, std::size_t n, std::size_t replication) {
    ReplicationRecord record;
    record.n = n;
    record.replication = replication;
    record.seed = derive_seed(spec.base_seed, n, replication);
    Rng rng(record.seed);
    const double size = static_cast<double>(n);

    try {
        OptResult result = [&]() -> OptResult {
            if (spec.estimator == EstimatorKind::MultiIndex) {
                const MultiDataset data =
                    simulate_multi_index(n, spec.J, spec.d, spec.theta0, spec.link, spec.noise_sd, rng);
                record.bandwidth = spec.bandwidth.evaluate(size, spec.d, spec.J * spec.d);
                std::vector<double> weights(n);
                if (spec.oracle_first_stage) {
                    for (std::size_t i = 0; i < n; ++i) {
                        weights[i] = true_h0_multi(data.point(i), spec.J, spec.theta0, spec.link);
                    }
                } else {
                    weights = FirstStageFit::multi_index(data, record.bandwidth).at_sample();
                }
                return estimate(data, CriterionSpec::multi_index(std::move(weights)), spec.optimizer, rng);
            }

            const Dataset data = simulate_binary(n, spec.d, spec.theta0, spec.error, rng);
            record.bandwidth = spec.bandwidth.evaluate(size, spec.d, spec.d);
            switch (spec.estimator) {
                case EstimatorKind::MaximumScore:
                    record.bandwidth = 0.0;
                    return estimate(data, CriterionSpec::maximum_score(), spec.optimizer, rng);
                case EstimatorKind::Smoothed:
                    return estimate(data, CriterionSpec::smoothed(record.bandwidth), spec.optimizer, rng);
                case EstimatorKind::TwoStage: {
                    if (spec.oracle_first_stage) {
                        std::vector<double> weights(n);
                        for (std::size_t i = 0; i < n; ++i) weights[i] = true_h0(data.point(i), spec.theta0, spec.error);
                        return estimate(data, CriterionSpec::two_stage(std::move(weights)), spec.optimizer, rng);
                    }
                    if (spec.split_sample) {
                        const Dataset train = select_rows(data, 1);
                        const Dataset target = select_rows(data, 0);
                        const FirstStageFit fit = FirstStageFit::binary(train, record.bandwidth);
                        std::vector<double> weights(target.n());
                        for (std::size_t i = 0; i < target.n(); ++i) weights[i] = fit(target.point(i));
                        return estimate(target, CriterionSpec::two_stage(std::move(weights)), spec.optimizer, rng);
                    }
                    const FirstStageFit fit = FirstStageFit::binary(data, record.bandwidth);
                    return estimate(data, CriterionSpec::two_stage(fit.at_sample()), spec.optimizer, rng);
                }
                case EstimatorKind::MultiIndex:
                    break;
            }
            throw ValidationError("unsupported estimator");
        }();

        record.tangent_error = tangent_project(spec.theta0, result.argmax);
        record.tangent_norm = record.tangent_error.norm();
        record.raw_norm = (result.argmax.coords() - spec.theta0.coords()).norm();
        record.value = result.value;
        record.ok = std::isfinite(record.tangent_norm);
        if (!record.ok) record.failure = "non-finite estimate";
    } catch (const std::exception& e) {
        record.ok = false;
        record.failure = e.what();
    }
    return record;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw ValidationError("quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw ValidationError("slope fit needs at least 3 points");
    std::vector<double> lx, ly;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw ValidationError("slope fit needs positive values");
        lx.push_back(std::log(x));
        ly.push_back(std::log(y));
    }
    const double m = static_cast<double>(points.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxx += (lx[k] - mx) * (lx[k] - mx);
        sxy += (lx[k] - mx) * (ly[k] - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("slope fit needs at least two distinct x values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        const double r = ly[k] - fit.intercept - fit.slope * lx[k];
        ssr += r * r;
    }
    fit.stderr_ = std::sqrt(ssr / (m - 2.0) / sxx);
    return fit;
}

ExperimentResult run_rate_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const std::size_t R = spec.replications;
    const std::size_t total = R * spec.n_grid.size();

    ExperimentResult result;
    result.records.resize(total);
    parallel_for(
        total,
        [&](std::size_t task) {
            result.records[task] = run_replication(spec, spec.n_grid[task / R], task % R);
        },
        spec.threads);

    std::vector<std::pair<double, double>> medians;
    for (std::size_t k = 0; k < spec.n_grid.size(); ++k) {
        CellSummary cell;
        cell.n = spec.n_grid[k];
        std::vector<double> errors;
        for (std::size_t r = 0; r < R; ++r) {
            const auto& rec = result.records[k * R + r];
            if (rec.ok) {
                errors.push_back(rec.tangent_norm);
            } else {
                ++cell.failures;
            }
        }
        cell.successes = errors.size();
        result.failures += cell.failures;
        if (!errors.empty()) {
            std::sort(errors.begin(), errors.end());
            cell.median = quantile_sorted(errors, 0.5);
            cell.q25 = quantile_sorted(errors, 0.25);
            cell.q75 = quantile_sorted(errors, 0.75);
            cell.mean = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
            medians.emplace_back(static_cast<double>(cell.n), cell.median);
        }
        result.cells.push_back(cell);
    }
    if (static_cast<double>(result.failures) > 0.05 * static_cast<double>(total)) {
        std::string reason;
        for (const auto& rec : result.records) {
            if (!rec.ok) {
                reason = rec.failure;
                break;
            }
        }
        throw ComputationError("experiment failed: " + std::to_string(result.failures) + " of " +
                               std::to_string(total) + " replications failed (first: " + reason + ")");
    }
    bool positive = medians.size() >= 3;
    for (const auto& [n, m] : medians) positive = positive && m > 0.0;
    if (positive) {
        const SlopeFit fit = fit_loglog_slope(medians);
        result.slope = fit.slope;
        result.slope_stderr = fit.stderr_;
    } else {
        result.slope = std::nan("");
        result.slope_stderr = std::nan("");
    }
    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<Vector> ExperimentResult::tangent_errors(std::size_t n) const {
    std::vector<Vector> out;
    for (const auto& rec : records) {
        if (rec.n == n && rec.ok) out.push_back(rec.tangent_error);
    }
    return out;
}

SupNormExperimentResult run_sup_norm_experiment(const SupNormExperimentSpec& spec) {
    if (spec.n_grid.size() < 3) throw ValidationError("sup-norm experiment needs at least 3 sample sizes");
    if (spec.replications < 1) throw ValidationError("sup-norm experiment needs replications >= 1");
    if (spec.theta0.dim() != spec.d) throw DimensionError("theta0 dimension differs from d");
    if (!(spec.grid_radius > 0.0 && spec.grid_radius < 1.0)) {
        throw ValidationError("evaluation grid radius must lie in (0, 1)");
    }
    const RowMatrix grid = ball_lattice(spec.d, spec.grid_radius, spec.grid_per_axis);
    const ScalarField h0 = [&](std::span<const double> x) { return true_h0(x, spec.theta0, spec.error); };

    const std::size_t R = spec.replications;
    SupNormExperimentResult out;
    out.n_grid = spec.n_grid;
    out.errors.assign(spec.n_grid.size(), std::vector<double>(R));
    parallel_for(
        spec.n_grid.size() * R,
        [&](std::size_t task) {
            const std::size_t k = task / R;
            const std::size_t r = task % R;
            const std::size_t n = spec.n_grid[k];
            Rng rng(derive_seed(spec.base_seed, n, r));
            const Dataset data = simulate_binary(n, spec.d, spec.theta0, spec.error, rng);
            const double b = std::pow(static_cast<double>(n), -spec.bandwidth_exponent);
            const FirstStageFit fit = FirstStageFit::binary(data, b, DensityMode::Known);
            out.errors[k][r] = sup_norm_error(fit, h0, grid);
        },
        spec.threads);

    std::vector<std::pair<double, double>> points;
    for (std::size_t k = 0; k < spec.n_grid.size(); ++k) {
        std::vector<double> sorted = out.errors[k];
        std::sort(sorted.begin(), sorted.end());
        out.median_error.push_back(quantile_sorted(sorted, 0.5));
        points.emplace_back(static_cast<double>(spec.n_grid[k]), out.median_error.back());
    }
    out.slope = fit_loglog_slope(points);
    return out;
}

std::vector<EnvelopeRow> smoothing_envelope_probe(const Direction& theta0, const ErrorSpec& err,
                                                  const std::vector<double>& deltas, std::size_t m, Rng& rng) {
    if (m < 10000) throw ValidationError("smoothing envelope probe needs m >= 10000");
    const std::size_t d = theta0.dim();
    err.validate(d);
    std::vector<EnvelopeRow> rows;
    for (double delta : deltas) {
        if (!(delta >= 0.0 && delta <= 0.5)) throw ValidationError("envelope deltas must lie in [0, 1/2]");
        EnvelopeRow row;
        row.delta = delta;
        double sum_sq = 0.0;
        for (std::size_t s = 0; s < m; ++s) {
            const Direction theta = rotate_towards(theta0, random_tangent(theta0, rng), delta);
            const RowMatrix x = sample_covariates_ball(1, d, rng);
            const std::span<const double> point(x.data(), d);
            const bool now = theta.dot(x.data()) >= 0.0;
            const bool truth = theta0.dot(x.data()) >= 0.0;
            if (now == truth) continue;
            const double h = true_h0(point, theta0, err);
            ++row.disagreements;
            row.max_abs_h0 = std::max(row.max_abs_h0, std::abs(h));
            sum_sq += h * h;
        }
        row.mean_weighted_sq = sum_sq / static_cast<double>(m);
        row.empty = row.disagreements == 0;
        rows.push_back(row);
    }
    return rows;
}

ProcessProbeResult empirical_process_probe(const Direction& theta0, const ErrorSpec& err, std::size_t n,
                                           const std::vector<double>& deltas, std::size_t reps, Rng& rng,
                                           const ProcessProbeOptions& options) {
    if (reps < 100) throw ValidationError("empirical process probe needs reps >= 100");
    if (n < 1) throw ValidationError("empirical process probe needs n >= 1");
    if (options.theta_grid < 2) throw ValidationError("empirical process probe needs a theta grid of >= 2 points");
    const std::size_t d = theta0.dim();
    err.validate(d);

    auto weight = [&](std::span<const double> x) {
        return options.weight == ProcessWeight::H0 ? true_h0(x, theta0, err) : 1.0;
    };

    // theta grid per delta: the closed delta-ball around theta0, boundary included.
    std::vector<std::vector<Direction>> thetas;
    for (double delta : deltas) {
        if (!(delta >= 0.0 && delta <= 2.0)) throw ValidationError("process deltas must lie in [0, 2]");
        std::vector<Direction> ball;
        const std::size_t K = options.theta_grid;
        if (d == 2) {
            const Vector tangent = change_basis(theta0).columns.col(1);
            for (std::size_t k = 0; k < K; ++k) {
                const double t = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(K - 1);
                ball.push_back(rotate_towards(theta0, t >= 0.0 ? tangent : Vector(-tangent), std::abs(t) * delta));
            }
        } else {
            for (std::size_t k = 0; k < K; ++k) {
                const double r = delta * static_cast<double>(k + 1) / static_cast<double>(K);
                ball.push_back(rotate_towards(theta0, random_tangent(theta0, rng), r));
            }
        }
        thetas.push_back(std::move(ball));
    }

    // Population differences P(g_theta - g_theta0), one shared oracle sample.
    std::vector<std::vector<double>> population(deltas.size());
    {
        const RowMatrix big = sample_covariates_ball(options.oracle_draws, d, rng);
        for (std::size_t a = 0; a < deltas.size(); ++a) {
            population[a].assign(thetas[a].size(), 0.0);
        }
        for (Eigen::Index i = 0; i < big.rows(); ++i) {
            const double* x = big.data() + i * big.cols();
            const double w = weight({x, d});
            const bool base = theta0.dot(x) >= 0.0;
            for (std::size_t a = 0; a < deltas.size(); ++a) {
                for (std::size_t k = 0; k < thetas[a].size(); ++k) {
                    const bool on = thetas[a][k].dot(x) >= 0.0;
                    if (on != base) population[a][k] += on ? w : -w;
                }
            }
        }
        for (auto& row : population) {
            for (auto& v : row) v /= static_cast<double>(options.oracle_draws);
        }
    }

    std::vector<double> sup_sum(deltas.size(), 0.0);
    std::vector<double> empirical;
    const double root_n = std::sqrt(static_cast<double>(n));
    for (std::size_t rep = 0; rep < reps; ++rep) {
        const RowMatrix X = sample_covariates_ball(n, d, rng);
        std::vector<double> w(n);
        std::vector<char> base(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = X.data() + i * d;
            w[i] = weight({x, d});
            base[i] = theta0.dot(x) >= 0.0;
        }
        for (std::size_t a = 0; a < deltas.size(); ++a) {
            double sup = 0.0;
            for (std::size_t k = 0; k < thetas[a].size(); ++k) {
                double diff = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const bool on = thetas[a][k].dot(X.data() + i * d) >= 0.0;
                    if (on != static_cast<bool>(base[i])) diff += on ? w[i] : -w[i];
                }
                const double g = root_n * (diff / static_cast<double>(n) - population[a][k]);
                sup = std::max(sup, std::abs(g));
            }
            sup_sum[a] += sup;
        }
    }

    ProcessProbeResult out;
    std::vector<std::pair<double, double>> points;
    for (std::size_t a = 0; a < deltas.size(); ++a) {
        out.rows.push_back({deltas[a], sup_sum[a] / static_cast<double>(reps)});
        if (deltas[a] > 0.0 && out.rows.back().mean_sup > 0.0) points.emplace_back(deltas[a], out.rows.back().mean_sup);
    }
    if (points.size() >= 3) out.exponent = fit_loglog_slope(points);
    return out;
}

double ks_critical_value(double alpha, std::size_t count) {
    if (!(alpha > 0.0 && alpha < 1.0) || count == 0) throw ValidationError("ks_critical_value: bad arguments");
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(count));
}

std::vector<Vector> tangent_coordinates(const std::vector<Vector>& errors, const Direction& theta0) {
    const Matrix frame = change_basis(theta0).columns;
    const auto d = static_cast<Eigen::Index>(theta0.dim());
    std::vector<Vector> out;
    out.reserve(errors.size());
    for (const auto& e : errors) {
        if (e.size() != d) throw DimensionError("tangent_coordinates: dimension mismatch");
        out.emplace_back(frame.rightCols(d - 1).transpose() * e);
    }
    return out;
}

NormalityReport normality_diagnostic(const std::vector<Vector>& samples, const NormalityOptions& options) {
    if (samples.size() < options.min_samples) {
        throw ValidationError("normality diagnostic needs at least " + std::to_string(options.min_samples) +
                              " samples");
    }
    const auto dims = samples.front().size();
    for (const auto& s : samples) {
        if (s.size() != dims) throw DimensionError("normality diagnostic: samples differ in dimension");
    }
    const double count = static_cast<double>(samples.size());
    NormalityReport report;
    report.ks_critical = ks_critical_value(options.ks_alpha, samples.size());
    report.pass = true;
    for (Eigen::Index c = 0; c < dims; ++c) {
        CoordinateReport coord;
        std::vector<double> v;
        v.reserve(samples.size());
        for (const auto& s : samples) v.push_back(s[c]);
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / count;
        double m2 = 0.0, m3 = 0.0, m4 = 0.0, scale = 0.0;
        for (double x : v) {
            const double z = x - mean;
            m2 += z * z;
            m3 += z * z * z;
            m4 += z * z * z * z;
            scale = std::max(scale, std::abs(x));
        }
        m2 /= count;
        m3 /= count;
        m4 /= count;
        if (!(m2 > 0.0) || std::sqrt(m2) <= 1e-14 * std::max(scale, 1e-300)) {
            coord.degenerate = true;
            report.degenerate = true;
            report.pass = false;
            report.coordinates.push_back(coord);
            continue;
        }
        coord.skewness = m3 / std::pow(m2, 1.5);
        coord.excess_kurtosis = m4 / (m2 * m2) - 3.0;
        // Sample sd (n - 1) for standardization.
        const double sd = std::sqrt(m2 * count / (count - 1.0));
        std::vector<double> z(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) z[i] = (v[i] - mean) / sd;
        std::sort(z.begin(), z.end());
        double ks = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double F = normal_cdf(z[i]);
            ks = std::max({ks, static_cast<double>(i + 1) / count - F, F - static_cast<double>(i) / count});
        }
        coord.ks_distance = ks;
        report.pass = report.pass && ks <= report.ks_critical && std::abs(coord.skewness) < options.skew_limit;
        report.coordinates.push_back(coord);
    }
    return report;
}

namespace {

nlohmann::ordered_json vector_json(const Vector& v) {
    auto out = nlohmann::ordered_json::array();
    for (double x : v) out.push_back(x);
    return out;
}

std::string error_family_name(ErrorSpec::Family family) {
    switch (family) {
        case ErrorSpec::Family::Logistic:
            return "logistic";
        case ErrorSpec::Family::Gaussian:
            return "gaussian";
        case ErrorSpec::Family::HeteroskedasticLogistic:
            return "hetero";
        case ErrorSpec::Family::Degenerate:
            return "degenerate";
    }
    return "unknown";
}

}  // namespace

std::string experiment_result_json(const ExperimentSpec& spec, const ExperimentResult& result) {
    nlohmann::ordered_json out;
    nlohmann::ordered_json s;
    s["estimator"] = to_string(spec.estimator);
    s["d"] = spec.d;
    s["J"] = spec.J;
    s["p"] = spec.p;
    s["theta0"] = vector_json(spec.theta0.coords());
    s["error"] = error_family_name(spec.error.family);
    s["error_scale"] = spec.error.scale;
    s["n_grid"] = spec.n_grid;
    s["replications"] = spec.replications;
    s["bandwidth"] = spec.bandwidth.to_string();
    s["seed"] = spec.base_seed;
    s["oracle_first_stage"] = spec.oracle_first_stage;
    s["split_sample"] = spec.split_sample;
    out["spec"] = s;

    out["slope"] = result.slope;
    out["slope_stderr"] = result.slope_stderr;
    out["failures"] = result.failures;
    out["elapsed_seconds"] = result.elapsed_seconds;
    auto cells = nlohmann::ordered_json::array();
    for (const auto& c : result.cells) {
        nlohmann::ordered_json j;
        j["n"] = c.n;
        j["median"] = c.median;
        j["q25"] = c.q25;
        j["q75"] = c.q75;
        j["mean"] = c.mean;
        j["successes"] = c.successes;
        j["failures"] = c.failures;
        cells.push_back(j);
    }
    out["cells"] = cells;
    auto records = nlohmann::ordered_json::array();
    for (const auto& r : result.records) {
        nlohmann::ordered_json j;
        j["n"] = r.n;
        j["replication"] = r.replication;
        j["seed"] = r.seed;
        j["ok"] = r.ok;
        if (r.ok) {
            j["tangent_norm"] = r.tangent_norm;
            j["raw_norm"] = r.raw_norm;
            j["tangent_error"] = vector_json(r.tangent_error);
            j["bandwidth"] = r.bandwidth;
            j["value"] = r.value;
        } else {
            j["failure"] = r.failure;
        }
        records.push_back(j);
    }
    out["records"] = records;
    return out.dump(2);
}

std::string experiment_summary_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "n,median,q25,q75,mean\n";
    for (const auto& c : result.cells) {
        out << c.n << ',' << c.median << ',' << c.q25 << ',' << c.q75 << ',' << c.mean << '\n';
    }
    return out.str();
}

}  // namespace tsms

#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "tsms/dgp.hpp"
#include "tsms/geometry.hpp"
#include "tsms/optimizer.hpp"

namespace tsms {

// ---------------------------------------------------------------------------
// Rate-recovery experiments

enum class BandwidthRule { Theorem1Optimal, FirstStageOptimal, Fixed };

struct BandwidthChoice {
    BandwidthRule rule = BandwidthRule::Theorem1Optimal;
    double fixed = 0.0;

    /// theorem1-optimal uses the estimator dimension d; first-stage-optimal
    /// uses n^{-1/(D+4)} with D the first-stage dimension (J*d for multi-index).
    double evaluate(double n, std::size_t d, std::size_t first_stage_dim) const;
    std::string to_string() const;
    static BandwidthChoice parse(const std::string& text);
};

struct ExperimentSpec {
    EstimatorKind estimator = EstimatorKind::MaximumScore;
    std::size_t d = 2;
    std::size_t J = 2;  // multi-index only
    int p = 2;
    Direction theta0 = Direction::from_angle(std::numbers::pi / 4);
    ErrorSpec error = ErrorSpec::logistic(1.0);
    LinkSpec link{};
    double noise_sd = 0.25;  // multi-index only
    std::vector<std::size_t> n_grid{250, 500, 1000, 2000};
    std::size_t replications = 50;
    BandwidthChoice bandwidth{};
    std::uint64_t base_seed = 1;
    bool oracle_first_stage = false;  // use the analytic h0 in place of hhat
    bool split_sample = false;        // fit hhat on odd rows, criterion on even rows
    OptimizerConfig optimizer{};
    std::size_t threads = 0;  // 0 selects worker_count()

    void validate() const;
};

struct ReplicationRecord {
    std::size_t n = 0;
    std::size_t replication = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string failure;
    Vector tangent_error;       // (I - theta0 theta0') (theta_hat - theta0)
    double tangent_norm = 0.0;
    double raw_norm = 0.0;      // |theta_hat - theta0|
    double bandwidth = 0.0;
    double value = 0.0;
};

struct CellSummary {
    std::size_t n = 0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double mean = 0.0;
};

struct ExperimentResult {
    std::vector<CellSummary> cells;
    std::vector<ReplicationRecord> records;  // ordered by (n, replication)
    double slope = 0.0;
    double slope_stderr = 0.0;
    std::size_t failures = 0;
    double elapsed_seconds = 0.0;

    /// Successful tangent-projected errors for one sample size.
    std::vector<Vector> tangent_errors(std::size_t n) const;
};

/// Simulates, fits and estimates every (n, replication) cell. Replications
/// run in parallel with seeds derive_seed(base, n, r); aggregation is ordered
/// and independent of scheduling. Throws ComputationError when more than 5%
/// of replications fail.
ExperimentResult run_rate_experiment(const ExperimentSpec& spec);

/// One replication, exposed for tests and the CLI.
ReplicationRecord run_replication(const ExperimentSpec& spec, std::size_t n, std::size_t replication);

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
};

/// OLS of log(error) on log(n).
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Type-7 (linear interpolation) sample quantile of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double q);

// ---------------------------------------------------------------------------
// First-stage sup-norm rate

struct SupNormExperimentSpec {
    std::size_t d = 2;
    Direction theta0 = Direction::from_angle(std::numbers::pi / 4);
    ErrorSpec error = ErrorSpec::logistic(1.0);
    std::vector<std::size_t> n_grid{500, 1000, 2000, 4000, 8000, 16000, 32000};
    std::size_t replications = 50;
    double bandwidth_exponent = 1.0 / 6.0;  // b = n^{-exponent}
    double grid_radius = 0.5;              // evaluation lattice inside this ball
    std::size_t grid_per_axis = 21;
    std::uint64_t base_seed = 1;
    std::size_t threads = 0;
};

struct SupNormExperimentResult {
    std::vector<std::size_t> n_grid;
    std::vector<double> median_error;
    std::vector<std::vector<double>> errors;  // [n index][replication]
    SlopeFit slope;
};

SupNormExperimentResult run_sup_norm_experiment(const SupNormExperimentSpec& spec);

// ---------------------------------------------------------------------------
// Probes of the smoothing mechanism

struct EnvelopeRow {
    double delta = 0.0;
    double max_abs_h0 = 0.0;        // over draws where the two indicators disagree
    double mean_weighted_sq = 0.0;  // mean of h0(x)^2 |1{x'theta>=0} - 1{x'theta0>=0}|
    std::size_t disagreements = 0;
    bool empty = false;
};

/// For each delta, m draws of (theta at distance delta from theta0, x uniform
/// on the ball); reports the envelope of |h0| on the disagreement set.
std::vector<EnvelopeRow> smoothing_envelope_probe(const Direction& theta0, const ErrorSpec& err,
                                                  const std::vector<double>& deltas, std::size_t m, Rng& rng);

enum class ProcessWeight { H0, Unit };

struct ProcessProbeRow {
    double delta = 0.0;
    double mean_sup = 0.0;
};

struct ProcessProbeResult {
    std::vector<ProcessProbeRow> rows;
    SlopeFit exponent;  // log mean_sup against log delta
};

struct ProcessProbeOptions {
    ProcessWeight weight = ProcessWeight::H0;
    std::size_t theta_grid = 33;        // directions per delta-ball
    std::size_t oracle_draws = 1000000; // population term by brute-force average
};

/// Mean over replications of sup_theta |G_n(g_theta - g_theta0)| with
/// g_theta(x) = w(x) 1{x'theta >= 0}, w = h0 or 1, over a theta grid in each
/// delta-ball around theta0.
ProcessProbeResult empirical_process_probe(const Direction& theta0, const ErrorSpec& err, std::size_t n,
                                           const std::vector<double>& deltas, std::size_t reps, Rng& rng,
                                           const ProcessProbeOptions& options = {});

// ---------------------------------------------------------------------------
// Normality diagnostic

struct CoordinateReport {
    double ks_distance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    bool degenerate = false;
};

struct NormalityReport {
    std::vector<CoordinateReport> coordinates;
    double ks_critical = 0.0;
    bool pass = false;
    bool degenerate = false;
};

struct NormalityOptions {
    double ks_alpha = 0.01;
    double skew_limit = 0.35;
    std::size_t min_samples = 200;
};

/// Kolmogorov critical value sqrt(-log(alpha/2) / 2) / sqrt(count).
double ks_critical_value(double alpha, std::size_t count);

/// Coordinates of tangent vectors in the frame change_basis(theta0),
/// dropping the theta0 axis (d - 1 coordinates each).
std::vector<Vector> tangent_coordinates(const std::vector<Vector>& errors, const Direction& theta0);

/// Standardizes each coordinate and compares it with N(0, 1).
NormalityReport normality_diagnostic(const std::vector<Vector>& samples, const NormalityOptions& options = {});

// ---------------------------------------------------------------------------
// Serialization

std::string experiment_result_json(const ExperimentSpec& spec, const ExperimentResult& result);
std::string experiment_summary_csv(const ExperimentResult& result);

}  // namespace tsms

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tsms/criteria.hpp"
#include "tsms/dgp.hpp"
#include "tsms/firststage.hpp"
#include "tsms/geometry.hpp"

namespace tsms {

using Objective = std::function<double(const Direction&)>;

struct OptimizerConfig {
    std::size_t resolution = 0;  // 0 selects the per-dimension default
    std::size_t rounds = 8;
    double shrink = 0.5;
    std::size_t multistart = 8;
    std::size_t probes = 0;  // per candidate per round; 0 selects 8 * (d - 1)

    /// Resolves zero fields for dimension d and checks ranges.
    OptimizerConfig resolved(std::size_t d) const;
    void validate() const;
    std::size_t refinement_budget() const { return rounds * multistart * probes; }
};

enum class OptMethod { Exact2d, GridRefine };
std::string to_string(OptMethod method);

struct OptResult {
    Direction argmax;
    double value = 0.0;
    std::size_t evaluations = 0;
    OptMethod method = OptMethod::GridRefine;
    std::vector<double> round_best;  // grid best followed by best after each refinement round
};

/// Exact global maximizer of a weighted indicator criterion in d = 2.
/// Sweeps the sorted breakpoints once, then re-evaluates the near-best arcs
/// directly so the reported value is bit-identical to criterion(argmax).
/// Ties go to the smallest angle in [0, 2 pi).
OptResult exact_argmax_2d(const IndicatorCriterion& criterion);

/// Same candidate set (every breakpoint and arc midpoint of `rows`) for an
/// arbitrary criterion that only changes where some row' theta changes sign.
/// Costs one criterion evaluation per candidate.
OptResult exact_argmax_2d(const Objective& criterion, const RowMatrix& rows);

/// Grid evaluation on sphere_grid(d, resolution), then `rounds` rounds of
/// tangent-space pattern search around the best `multistart` grid points with
/// radius shrinking by `shrink` per round. Ties go to the lexicographically
/// smallest coordinates.
OptResult maximize_on_sphere(const Objective& criterion, std::size_t d, const OptimizerConfig& cfg, Rng& rng);

enum class EstimatorKind { MaximumScore, Smoothed, TwoStage, MultiIndex };
std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);

struct CriterionSpec {
    EstimatorKind kind = EstimatorKind::MaximumScore;
    double sms_bandwidth = 0.0;
    std::optional<FirstStageFit> first_stage;
    /// When nonempty, replaces the first-stage values at the sample points
    /// (oracle injection or a cache computed elsewhere).
    std::vector<double> first_stage_values;

    static CriterionSpec maximum_score();
    static CriterionSpec smoothed(double bandwidth);
    static CriterionSpec two_stage(FirstStageFit fit);
    static CriterionSpec two_stage(std::vector<double> hhat_values);
    static CriterionSpec multi_index(FirstStageFit fit);
    static CriterionSpec multi_index(std::vector<double> hhat_values);
};

/// argmax of the sample criterion named by `spec`. Piecewise-constant
/// criteria in d = 2 go to the exact solver; everything else to the grid.
OptResult estimate(const Dataset& data, const CriterionSpec& spec, const OptimizerConfig& cfg, Rng& rng);
OptResult estimate(const MultiDataset& data, const CriterionSpec& spec, const OptimizerConfig& cfg, Rng& rng);

}  // namespace tsms

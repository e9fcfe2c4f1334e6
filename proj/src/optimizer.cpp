#include "tsms/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tsms/errors.hpp"

namespace tsms {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

bool lexicographically_less(const Direction& a, const Direction& b) {
    for (std::size_t k = 0; k < a.dim(); ++k) {
        if (a[k] != b[k]) return a[k] < b[k];
    }
    return false;
}

// True when (va, a) beats (vb, b) under "larger value, then lexicographic-min".
bool better(double va, const Direction& a, double vb, const Direction& b) {
    if (va != vb) return va > vb;
    return lexicographically_less(a, b);
}

struct Event {
    double angle;
    double weight;
    bool enters;  // row enters the closed half-circle {x'theta >= 0} at this angle
};

// Breakpoint angles of each nonzero row: theta'x = 0 at phi +- pi/2.
std::vector<Event> breakpoint_events(const RowMatrix& rows, const std::vector<double>* weights) {
    if (rows.cols() != 2) throw DimensionError("exact_argmax_2d needs d = 2");
    std::vector<Event> events;
    events.reserve(2 * static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        if (rows(i, 0) == 0.0 && rows(i, 1) == 0.0) continue;
        const double phi = std::atan2(rows(i, 1), rows(i, 0));
        const double w = weights ? (*weights)[static_cast<std::size_t>(i)] : 0.0;
        events.push_back({wrap_angle(phi - std::numbers::pi / 2), w, true});
        events.push_back({wrap_angle(phi + std::numbers::pi / 2), w, false});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.angle < b.angle; });
    return events;
}

std::vector<double> distinct_angles(const std::vector<Event>& events) {
    std::vector<double> angles;
    for (const auto& e : events) {
        if (angles.empty() || e.angle != angles.back()) angles.push_back(e.angle);
    }
    return angles;
}

double arc_midpoint(const std::vector<double>& angles, std::size_t k) {
    const std::size_t m = angles.size();
    const double lo = angles[k];
    const double hi = k + 1 < m ? angles[k + 1] : angles[0] + kTwoPi;
    return wrap_angle(0.5 * (lo + hi));
}

OptResult pick_smallest_angle(const Objective& criterion, std::vector<double> candidates, std::size_t evaluations) {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::optional<Direction> best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (double a : candidates) {
        Direction theta = Direction::from_angle(a);
        const double v = criterion(theta);
        ++evaluations;
        if (!best || v > best_value) {
            best = theta;
            best_value = v;
        }
    }
    return OptResult{*best, best_value, evaluations, OptMethod::Exact2d, {best_value}};
}

}  // namespace

OptimizerConfig OptimizerConfig::resolved(std::size_t d) const {
    if (d < 2) throw DimensionError("optimizer needs d >= 2");
    OptimizerConfig out = *this;
    if (out.resolution == 0) out.resolution = d == 2 ? 720 : (d == 3 ? 4096 : 8192 * d);
    if (out.probes == 0) out.probes = 8 * (d - 1);
    out.validate();
    return out;
}

void OptimizerConfig::validate() const {
    if (resolution < 8) throw ValidationError("optimizer resolution must be >= 8");
    if (!(shrink > 0.0 && shrink < 1.0)) throw ValidationError("optimizer shrink must lie in (0, 1)");
    if (multistart < 1) throw ValidationError("optimizer multistart must be >= 1");
    if (probes < 1) throw ValidationError("optimizer probes must be >= 1");
}

std::string to_string(OptMethod method) { return method == OptMethod::Exact2d ? "exact2d" : "grid-refine"; }

OptResult exact_argmax_2d(const IndicatorCriterion& criterion) {
    const std::vector<Event> events = breakpoint_events(criterion.rows(), &criterion.weights());
    const std::vector<double> angles = distinct_angles(events);
    if (angles.empty()) return pick_smallest_angle(criterion, {0.0}, 0);

    const std::size_t m = angles.size();
    const double inv_n = 1.0 / static_cast<double>(criterion.weights().size());

    // Incremental values: arc k spans (angles[k], angles[k+1]); the breakpoint
    // itself is closed, so its value is the preceding arc plus entering rows.
    std::vector<double> arc_value(m), point_value(m);
    double value = criterion(Direction::from_angle(arc_midpoint(angles, m - 1))) * static_cast<double>(
        criterion.weights().size());
    std::size_t e = 0;
    for (std::size_t k = 0; k < m; ++k) {
        double entering = 0.0;
        double net = 0.0;
        for (; e < events.size() && events[e].angle == angles[k]; ++e) {
            if (events[e].enters) {
                entering += events[e].weight;
                net += events[e].weight;
            } else {
                net -= events[e].weight;
            }
        }
        point_value[k] = (value + entering) * inv_n;
        value += net;
        arc_value[k] = value * inv_n;
    }

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) best = std::max({best, arc_value[k], point_value[k]});
    double scale = 0.0;
    for (double w : criterion.weights()) scale += std::abs(w);
    const double slack = 1e-9 * (scale * inv_n) + 1e-300;

    std::vector<double> candidates;
    for (std::size_t k = 0; k < m; ++k) {
        if (point_value[k] >= best - slack) candidates.push_back(angles[k]);
        if (arc_value[k] >= best - slack) candidates.push_back(arc_midpoint(angles, k));
    }
    return pick_smallest_angle(criterion, std::move(candidates), 1);
}

OptResult exact_argmax_2d(const Objective& criterion, const RowMatrix& rows) {
    const std::vector<double> angles = distinct_angles(breakpoint_events(rows, nullptr));
    if (angles.empty()) return pick_smallest_angle(criterion, {0.0}, 0);
    std::vector<double> candidates(angles);
    for (std::size_t k = 0; k < angles.size(); ++k) candidates.push_back(arc_midpoint(angles, k));
    return pick_smallest_angle(criterion, std::move(candidates), 0);
}

OptResult maximize_on_sphere(const Objective& criterion, std::size_t d, const OptimizerConfig& config, Rng& rng) {
    const OptimizerConfig cfg = config.resolved(d);
    const std::vector<Direction> grid = sphere_grid(d, cfg.resolution);
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = criterion(grid[k]);
    std::size_t evaluations = grid.size();

    // Typical spacing of the grid: (surface area / points)^(1/(d-1)).
    const double dm1 = static_cast<double>(d - 1);
    const double area = 2.0 * std::pow(std::numbers::pi, 0.5 * static_cast<double>(d)) /
                        std::tgamma(0.5 * static_cast<double>(d));
    const double spacing = std::pow(area / static_cast<double>(cfg.resolution), 1.0 / dm1);
    double radius = spacing;

    std::vector<std::size_t> order(grid.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t top = std::min(cfg.multistart, grid.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](std::size_t a, std::size_t b) { return better(values[a], grid[a], values[b], grid[b]); });

    std::vector<Direction> current;
    std::vector<double> current_value;
    for (std::size_t k = 0; k < top; ++k) {
        current.push_back(grid[order[k]]);
        current_value.push_back(values[order[k]]);
    }
    const std::size_t starts = current.size();

    std::vector<double> round_best{current_value.front()};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t round = 0; round < cfg.rounds; ++round) {
        for (std::size_t s = 0; s < starts; ++s) {
            std::optional<Direction> move;
            double move_value = current_value[s];
            // Antithetic pairs (u, -u); pair q draws its step from the q-th of
            // `strata` equal slices of (0, radius].
            const std::size_t strata = (cfg.probes + 1) / 2;
            Vector u;
            double step = 0.0;
            for (std::size_t p = 0; p < cfg.probes; ++p) {
                if (p % 2 == 0) {
                    u = random_tangent(current[s], rng);
                    const double q = static_cast<double>(p / 2);
                    step = radius * (q + 1.0 - unit(rng)) / static_cast<double>(strata);
                } else {
                    u = -u;
                }
                Direction probe = Direction::normalized(current[s].coords() + step * u);
                const double v = criterion(probe);
                ++evaluations;
                if (v > move_value || (move && v == move_value && lexicographically_less(probe, *move))) {
                    move = std::move(probe);
                    move_value = v;
                }
            }
            if (move) {
                current[s] = std::move(*move);
                current_value[s] = move_value;
            }
        }
        round_best.push_back(*std::max_element(current_value.begin(), current_value.end()));
        radius *= cfg.shrink;
    }

    std::size_t best = 0;
    for (std::size_t s = 1; s < starts; ++s) {
        if (better(current_value[s], current[s], current_value[best], current[best])) best = s;
    }
    return OptResult{current[best], current_value[best], evaluations, OptMethod::GridRefine, std::move(round_best)};
}

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::MaximumScore:
            return "ms";
        case EstimatorKind::Smoothed:
            return "sms";
        case EstimatorKind::TwoStage:
            return "tsms";
        case EstimatorKind::MultiIndex:
            return "tsms-mmi";
    }
    return "unknown";
}

EstimatorKind estimator_from_string(const std::string& name) {
    if (name == "ms") return EstimatorKind::MaximumScore;
    if (name == "sms") return EstimatorKind::Smoothed;
    if (name == "tsms") return EstimatorKind::TwoStage;
    if (name == "tsms-mmi") return EstimatorKind::MultiIndex;
    throw ValidationError("unknown estimator '" + name + "' (expected ms, sms, tsms, tsms-mmi)");
}

CriterionSpec CriterionSpec::maximum_score() { return CriterionSpec{}; }

CriterionSpec CriterionSpec::smoothed(double bandwidth) {
    CriterionSpec spec;
    spec.kind = EstimatorKind::Smoothed;
    spec.sms_bandwidth = bandwidth;
    return spec;
}

CriterionSpec CriterionSpec::two_stage(FirstStageFit fit) {
    CriterionSpec spec;
    spec.kind = EstimatorKind::TwoStage;
    spec.first_stage = std::move(fit);
    return spec;
}

CriterionSpec CriterionSpec::two_stage(std::vector<double> hhat_values) {
    CriterionSpec spec;
    spec.kind = EstimatorKind::TwoStage;
    spec.first_stage_values = std::move(hhat_values);
    return spec;
}

CriterionSpec CriterionSpec::multi_index(FirstStageFit fit) {
    CriterionSpec spec;
    spec.kind = EstimatorKind::MultiIndex;
    spec.first_stage = std::move(fit);
    return spec;
}

CriterionSpec CriterionSpec::multi_index(std::vector<double> hhat_values) {
    CriterionSpec spec;
    spec.kind = EstimatorKind::MultiIndex;
    spec.first_stage_values = std::move(hhat_values);
    return spec;
}

namespace {

std::vector<double> first_stage_values(const CriterionSpec& spec, std::size_t n) {
    if (!spec.first_stage_values.empty()) {
        if (spec.first_stage_values.size() != n) throw DimensionError("one first-stage value per observation");
        return spec.first_stage_values;
    }
    if (!spec.first_stage) throw ValidationError("two-stage criterion needs a first-stage fit");
    return spec.first_stage->at_sample();
}

}  // namespace

OptResult estimate(const Dataset& data, const CriterionSpec& spec, const OptimizerConfig& cfg, Rng& rng) {
    data.validate();
    const std::size_t d = data.d();
    switch (spec.kind) {
        case EstimatorKind::MaximumScore:
        case EstimatorKind::TwoStage: {
            IndicatorCriterion criterion =
                spec.kind == EstimatorKind::MaximumScore
                    ? IndicatorCriterion::maximum_score(data)
                    : IndicatorCriterion::two_stage(data, first_stage_values(spec, data.n()));
            if (d == 2) return exact_argmax_2d(criterion);
            return maximize_on_sphere(std::cref(criterion), d, cfg, rng);
        }
        case EstimatorKind::Smoothed: {
            const SmoothedCriterion criterion(data, spec.sms_bandwidth);
            return maximize_on_sphere(std::cref(criterion), d, cfg, rng);
        }
        case EstimatorKind::MultiIndex:
            throw ValidationError("multi-index estimator needs a multi-index dataset");
    }
    throw ValidationError("unknown estimator kind");
}

OptResult estimate(const MultiDataset& data, const CriterionSpec& spec, const OptimizerConfig& cfg, Rng& rng) {
    data.validate();
    if (spec.kind != EstimatorKind::MultiIndex) {
        throw ValidationError("multi-index datasets only support the tsms-mmi estimator");
    }
    const MultiIndexCriterion criterion(data, first_stage_values(spec, data.n()));
    return maximize_on_sphere(std::cref(criterion), data.d(), cfg, rng);
}

}  // namespace tsms

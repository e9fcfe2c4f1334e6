#include "tsms/rates.hpp"

#include <cmath>

#include "tsms/errors.hpp"

namespace tsms {

std::string to_string(const Fraction& f) {
    if (f.denominator() == 1) return std::to_string(f.numerator());
    return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

bool Rate::faster_than(const Rate& other) const {
    if (alpha != other.alpha) return alpha > other.alpha;
    return beta < other.beta;
}

bool Rate::vanishes() const {
    const Fraction zero(0);
    return alpha > zero || (alpha == zero && beta < zero);
}

double Rate::evaluate(double n) const {
    return constant * std::pow(n, -boost::rational_cast<double>(alpha)) *
           std::pow(std::log(n), boost::rational_cast<double>(beta));
}

std::string Rate::to_string() const {
    std::string out = "n^(-" + tsms::to_string(alpha) + ")";
    if (beta != Fraction(0)) out += " (log n)^(" + tsms::to_string(beta) + ")";
    return out;
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::LowDim:
            return "low-dim";
        case Regime::MidDim:
            return "mid-dim";
        case Regime::HighDim:
            return "high-dim";
    }
    return "unknown";
}

Regime classify_regime(int d, int p) {
    if (d < 2) throw DimensionError("rates need d >= 2");
    if (p < 2 || p % 2 != 0) throw ValidationError("kernel order p must be an even integer >= 2");
    if (d < p + 2) return Regime::LowDim;
    if (d < 3 * p) return Regime::MidDim;
    return Regime::HighDim;
}

std::pair<Rate, Regime> theoretical_rate(int d, int p) {
    const Regime regime = classify_regime(d, p);
    Rate rate;
    switch (regime) {
        case Regime::LowDim:
            rate.alpha = Fraction(p, 2 * p + 1);
            break;
        case Regime::MidDim:
            rate.alpha = Fraction(2 * p, 3 * p + d);
            rate.beta = Fraction(1, 3);
            break;
        case Regime::HighDim:
            rate.alpha = Fraction(p, d);
            rate.beta = Fraction(2 * p, d);
            break;
    }
    return {rate, regime};
}

double BandwidthExponent::evaluate(double n) const {
    return std::pow(n, -boost::rational_cast<double>(n_power)) *
           std::pow(std::log(n), boost::rational_cast<double>(log_power));
}

BandwidthExponent optimal_bandwidth_exponent(int d, int p) {
    if (p != 2) throw ValidationError("optimal bandwidth is only available for p = 2");
    switch (classify_regime(d, p)) {
        case Regime::LowDim:
            return {Fraction(1, 5), Fraction(0)};
        case Regime::MidDim:
            return {Fraction(2, d + 6), Fraction(0)};
        case Regime::HighDim:
            return {Fraction(1, d), Fraction(2, d)};
    }
    return {};
}

double optimal_bandwidth(int d, double n, int p) {
    if (!(n >= 2.0)) throw ValidationError("optimal bandwidth needs n >= 2");
    return optimal_bandwidth_exponent(d, p).evaluate(n);
}

Rate first_stage_rate(int d, const BandwidthExponent& b) {
    if (d < 1) throw DimensionError("first_stage_rate needs d >= 1");
    if (b.n_power <= Fraction(0)) throw ValidationError("bandwidth must shrink: exponent must be positive");
    // (n b^d / log n)^{-1/2} = n^{-(1 - gamma d)/2} (log n)^{(1 - kappa d)/2}
    Rate variance{(1 - b.n_power * d) / 2, (1 - b.log_power * d) / 2};
    if (!variance.vanishes()) {
        throw ValidationError("first stage is inconsistent: n b^d / log n does not diverge");
    }
    Rate bias{2 * b.n_power, 2 * b.log_power};
    return variance.faster_than(bias) ? bias : variance;
}

Rate first_stage_rate(int d, const Fraction& bandwidth_exponent) {
    return first_stage_rate(d, BandwidthExponent{bandwidth_exponent, Fraction(0)});
}

Rate cube_root_term(const Rate& a_n) {
    return Rate{Fraction(1, 3) + a_n.alpha * 2 / 3, a_n.beta * 2 / 3,
                std::pow(a_n.constant, 2.0 / 3.0)};
}

Rate combine_rates(const Rate& a_n, const Rate& u_n, const Rate& v_n) {
    Rate slowest = cube_root_term(a_n);
    if (u_n.slower_than(slowest)) slowest = u_n;
    if (v_n.slower_than(slowest)) slowest = v_n;
    return slowest;
}

}  // namespace tsms

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <boost/rational.hpp>

namespace tsms {

using Fraction = boost::rational<std::int64_t>;

std::string to_string(const Fraction& f);

/// c * n^{-alpha} (log n)^{beta}.
struct Rate {
    Fraction alpha{0};
    Fraction beta{0};
    double constant = 1.0;

    /// Asymptotically smaller: alpha larger, or equal alpha and smaller beta.
    bool faster_than(const Rate& other) const;
    bool slower_than(const Rate& other) const { return other.faster_than(*this); }
    /// Same (alpha, beta); the constant is ignored.
    bool same_order(const Rate& other) const { return alpha == other.alpha && beta == other.beta; }
    /// Converges to zero: alpha > 0, or alpha == 0 and beta < 0.
    bool vanishes() const;
    double evaluate(double n) const;
    std::string to_string() const;
};

enum class Regime { LowDim, MidDim, HighDim };
std::string to_string(Regime regime);

/// low iff d < p + 2; mid iff p + 2 <= d < 3p; high iff d >= 3p.
Regime classify_regime(int d, int p);

/// Optimal estimator rate for a kernel of order p in dimension d.
std::pair<Rate, Regime> theoretical_rate(int d, int p);

/// Bandwidth b = n^{-n_power} (log n)^{log_power}.
struct BandwidthExponent {
    Fraction n_power{0};
    Fraction log_power{0};
    double evaluate(double n) const;
};

/// Rate-optimal bandwidth exponents for the Gaussian (p = 2) kernel:
/// n^{-1/5} for d < 4, n^{-2/(d+6)} for 4 <= d < 6, (n / log^2 n)^{-1/d} for d >= 6.
BandwidthExponent optimal_bandwidth_exponent(int d, int p = 2);
double optimal_bandwidth(int d, double n, int p = 2);

/// Sup-norm rate of the kernel first stage, the slower of
/// (n b^d / log n)^{-1/2} and b^2.
Rate first_stage_rate(int d, const BandwidthExponent& bandwidth);
Rate first_stage_rate(int d, const Fraction& bandwidth_exponent);

/// n^{-1/3} a_n^{2/3}.
Rate cube_root_term(const Rate& a_n);

/// Slowest of n^{-1/3} a_n^{2/3}, u_n and v_n.
Rate combine_rates(const Rate& a_n, const Rate& u_n, const Rate& v_n);

}  // namespace tsms

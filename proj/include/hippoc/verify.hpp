#pragma once

// Desk-scale checks of the quantitative claims: fourth-moment identities,
// Chebyshev tails, exact measures of truncated tests, and Monte Carlo rates.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "hippoc/exactnum.hpp"

namespace hippoc {

struct MomentReport {
    std::string quantity;  // "E[S_n^4]", "K_p", "chebyshev_tail"
    std::uint64_t n = 0;
    Rational p;
    std::optional<std::uint64_t> k;  // Chebyshev multiplier
    Rational formula_value;
    std::optional<Rational> brute_force_value;
    std::optional<Rational> bound_value;
    std::optional<bool> satisfied;
};

/// K_p = E[(Y - p)^4] = p(1-p)((1-p)^3 + p^3).
Rational fourth_central_moment(const Rational& p);

/// E[S_n^4] for S_n = sum (Y_i - p) via n K_p + 3n(n-1)(p(1-p))^2; also reports
/// the brute-force value for n <= 14 and the bound (3n^2 - 2n) K_p.
MomentReport moment_s4(std::uint64_t n, const Rational& p);

/// Sum over all 2^n outcomes of (sum (y_i - p))^4 p^{#1}(1-p)^{#0}. n <= 14.
Rational brute_force_s4(std::uint64_t n, const Rational& p);

/// K_p by the closed form, by direct two-outcome expectation, against 1/2.
MomentReport kp_check(const Rational& p);

/// Exact P(|avg_n - p| >= k sigma / sqrt(n)) against 1/k^2.
MomentReport chebyshev_check(std::uint64_t n, const Rational& p, std::uint64_t k);

struct MeasureEstimate {
    std::string method;  // "exact-dp" or "monte-carlo"
    std::string test;
    std::string p;
    std::map<std::string, std::int64_t> resolution;
    std::optional<Rational> value;  // exact-dp
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t prefix_len = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double ci_halfwidth = 0.0;
    std::string ci_method;
    Rational bound;
    bool satisfied = false;
};

/// Exact mu_p of the union over b in [d, b_max] of {|avg_N(b) - p| >= 2^{-b}}.
MeasureEstimate exact_union_measure(const Rational& p, int d, int b_max);

struct OracleSpec {
    int d;
    int b_max;
};
struct CauchySpec {
    int d;
    int b_max;
};
struct SllnSpec {
    Rational q1;
    Rational q2;
    std::uint64_t N;
    std::uint64_t n_max;
};
struct DiagonalSpec {
    int n;
    std::size_t k_max;
    int b_max;
};
using TestSpec = std::variant<OracleSpec, CauchySpec, SllnSpec, DiagonalSpec>;

std::string describe(const TestSpec& spec);
std::uint64_t required_length(const TestSpec& spec);
Rational declared_bound(const TestSpec& spec, const RealParam& p);

struct WilsonInterval {
    double low;
    double high;
};

/// Two-sided 99% Wilson score interval for hits/trials.
WilsonInterval wilson99(std::uint64_t hits, std::uint64_t trials);

/// Rate of FAIL (or IN) verdicts over `trials` seeded mu_p streams. Trial i
/// draws its stream from substream_seed(seed, i).
MeasureEstimate mc_estimate(const TestSpec& spec, const RealParam& p, std::uint64_t trials, std::uint64_t prefix_len, std::uint64_t seed);

}  // namespace hippoc

#pragma once

// Certified recovery of the binary digits of the bias from a bitstream.
//
// Digit n is read off the expansion .y0 y1 ... of a checkpoint average once
// the run region y_{n+1} ... y_{b-1} is neither all ones nor all zeros. If the
// average is within 2^{-b} of the parameter, the digit y_n is then correct.
// psi consults the average at N(b); theta consults N(b+1).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hippoc/bitstream.hpp"
#include "hippoc/exactnum.hpp"
#include "hippoc/randomness_tests.hpp"

namespace hippoc {

enum class Functional { Psi, Theta };

std::string_view to_string(Functional f);
Functional parse_functional(std::string_view name);

/// Checkpoint level whose average certifies at level b.
inline int consulted_level(Functional f, int b) { return f == Functional::Theta ? b + 1 : b; }

struct BitCertificate {
    std::size_t position = 0;
    int bit = 0;
    int level = 0;            // certifying b
    int consulted_level = 0;  // b or b+1
    Rational average;
    DyadicExpansion expansion;
    std::string run_region;  // digits n+1 .. b-1
    /// Another certifying level in the budget that disagrees on the digit.
    std::optional<int> conflicting_level;
};

struct ExtractionReport {
    Functional functional = Functional::Theta;
    int d = 1;
    std::size_t n_target = 0;
    int b_budget = 1;
    std::vector<BitCertificate> certificates;
    std::optional<std::size_t> first_undecided;
    /// Highest checkpoint level whose average was inspected (0 if none).
    int highest_level_consulted = 0;

    DyadicExpansion certified_prefix() const;
};

/// Certificate for digit n from the smallest certifying b in
/// [max(n+2, d), b_budget], or nullopt when none certifies.
std::optional<BitCertificate> extract_bit(const BitPrefix& y, int d, std::size_t n, int b_budget, Functional functional);

ExtractionReport extract_prefix(const BitPrefix& y, int d, std::size_t n_target, int b_budget, Functional functional);

/// Prefix length needed to run extraction up to `b_budget`.
std::uint64_t extraction_required_bits(int b_budget, Functional functional);

}  // namespace hippoc

#pragma once

// Oracle-free test built from an oracle test family: run the family with the
// digits the bitstream itself certifies standing in for the oracle.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "hippoc/bitstream.hpp"
#include "hippoc/exactnum.hpp"
#include "hippoc/extract.hpp"
#include "hippoc/randomness_tests.hpp"

namespace hippoc {

struct FamilyMembership {
    bool in = false;
    std::optional<int> level;  // level that fired, if the family reports one
};

/// A test family that may consult the parameter, but only through the
/// closed interval named by an oracle prefix. Implementations must be
/// prefix-monotone: IN at a prefix stays IN for every extension of the
/// prefix and of y.
class OracleTestFamily {
public:
    virtual ~OracleTestFamily() = default;

    virtual std::string name() const = 0;
    virtual FamilyMembership member(const DyadicExpansion& oracle_prefix, int level, const BitPrefix& y, int resolution) const = 0;
    /// Declared measure bound mu_p(level) <= 2^{-level} for every p.
    virtual Rational declared_bound(int level) const { return Rational::pow2_neg(static_cast<unsigned>(level)); }
};

/// The checkpoint-deviation family truncated at `resolution`: IN iff some
/// b in [level, resolution] has |avg_N(b) - p'| >= 2^{-b} for every p' in the
/// oracle interval.
class TruncatedUFamily final : public OracleTestFamily {
public:
    std::string name() const override { return "truncated-U"; }
    FamilyMembership member(const DyadicExpansion& oracle_prefix, int level, const BitPrefix& y, int resolution) const override;
};

enum class Membership { In, NotYet };

std::string_view to_string(Membership m);

struct DiagonalVerdict {
    Membership outcome = Membership::NotYet;
    std::optional<std::size_t> k;        // smallest oracle-prefix length that fired
    DyadicExpansion prefix;              // extracted prefix used (length k when IN)
    std::optional<int> family_level;     // level reported by the family
    std::size_t certified_bits = 0;      // bits the extractor certified (<= k_max)
    std::string family;
    std::map<std::string, std::int64_t> resolution;
};

/// IN iff theta-extraction at level d certifies k <= k_max bits sigma and the
/// family reports IN for sigma; reports the smallest such k. The extractor's
/// budget is resolution - 1, so everything reads the first N(resolution) bits.
DiagonalVerdict diagonal_member(const BitPrefix& y, const OracleTestFamily& family, int d, int n, std::size_t k_max, int resolution);

/// The diagonal d = n. The verdict records the declared bound 2^{-(n-1)}.
TestVerdict diagonal_test(const BitPrefix& y, const OracleTestFamily& family, int n, std::size_t k_max, int resolution);

}  // namespace hippoc

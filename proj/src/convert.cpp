#include "hippoc/convert.hpp"

#include <algorithm>

#include "hippoc/error.hpp"

namespace hippoc {

FamilyMembership TruncatedUFamily::member(const DyadicExpansion& oracle_prefix, int level, const BitPrefix& y, int resolution) const {
    if (level > resolution) return {};
    const RealParam interval(oracle_prefix);
    const CheckpointSummary summary = checkpoints(y, level, resolution);
    for (int b = level; b <= resolution; ++b) {
        // Only GEQ decided over the whole interval counts; UNDECIDED is not IN.
        if (compare_deviation(summary.average(b), interval, Rational::pow2_neg(static_cast<unsigned>(b))) == Deviation::GEQ) {
            return {true, b};
        }
    }
    return {};
}

std::string_view to_string(Membership m) { return m == Membership::In ? "IN" : "NOT-YET"; }

DiagonalVerdict diagonal_member(const BitPrefix& y, const OracleTestFamily& family, int d, int n, std::size_t k_max, int resolution) {
    if (n < 1 || d < 1 || resolution < 2) throw Error(ErrorCode::InvalidArgument, "need n >= 1, d >= 1, resolution >= 2");
    const std::uint64_t required = checkpoint_size(resolution);
    if (y.size() < required) throw PrefixTooShort(required, y.size());

    DiagonalVerdict verdict{.family = family.name(),
                            .resolution = {{"d", d}, {"n", n}, {"k_max", static_cast<std::int64_t>(k_max)}, {"b_max", resolution}}};
    const ExtractionReport extraction = extract_prefix(y, d, k_max, resolution - 1, Functional::Theta);
    const DyadicExpansion certified = extraction.certified_prefix();
    verdict.certified_bits = certified.size();
    for (std::size_t k = 0; k <= std::min(k_max, certified.size()); ++k) {
        const DyadicExpansion sigma = certified.prefix(k);
        const FamilyMembership m = family.member(sigma, n, y, resolution);
        if (m.in) {
            verdict.outcome = Membership::In;
            verdict.k = k;
            verdict.prefix = sigma;
            verdict.family_level = m.level;
            return verdict;
        }
    }
    verdict.prefix = certified;
    return verdict;
}

TestVerdict diagonal_test(const BitPrefix& y, const OracleTestFamily& family, int n, std::size_t k_max, int resolution) {
    const DiagonalVerdict dv = diagonal_member(y, family, n, n, k_max, resolution);
    TestVerdict v{.family = "diagonal", .resolution = dv.resolution};
    v.exact_values.emplace("declared_bound", Rational::pow2_neg(static_cast<unsigned>(n - 1)));
    v.exact_values.emplace("certified_bits", Rational(static_cast<long>(dv.certified_bits)));
    if (dv.outcome == Membership::In) {
        v.outcome = Outcome::Fail;
        v.witness = PrefixWitness{*dv.k, dv.prefix, dv.family_level};
    } else {
        v.outcome = Outcome::PassUpToTruncation;
    }
    return v;
}

}  // namespace hippoc

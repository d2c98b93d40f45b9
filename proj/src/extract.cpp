#include "hippoc/extract.hpp"

#include <algorithm>

#include "hippoc/error.hpp"

namespace hippoc {

std::string_view to_string(Functional f) { return f == Functional::Theta ? "theta" : "psi"; }

Functional parse_functional(std::string_view name) {
    if (name == "theta") return Functional::Theta;
    if (name == "psi") return Functional::Psi;
    throw Error(ErrorCode::InvalidArgument, "unknown functional '" + std::string(name) + "'");
}

DyadicExpansion ExtractionReport::certified_prefix() const {
    std::vector<std::uint8_t> bits;
    bits.reserve(certificates.size());
    for (const auto& c : certificates) bits.push_back(static_cast<std::uint8_t>(c.bit));
    return DyadicExpansion(std::move(bits));
}

std::uint64_t extraction_required_bits(int b_budget, Functional functional) {
    return checkpoint_size(consulted_level(functional, b_budget));
}

namespace {

// Averages at every consulted level, with their expansions. An average of 1
// reads as .111... and has no finite expansion.
struct ConsultedAverages {
    const CheckpointSummary& summary;
    std::vector<std::optional<DyadicExpansion>> expansions;

    explicit ConsultedAverages(const CheckpointSummary& s)
        : summary(s), expansions(static_cast<std::size_t>(s.last_level() + 1)) {}

    int digit(int level, std::size_t position) {
        const Rational avg = summary.average(level);
        if (avg == Rational(1)) return 1;
        return expansion(level).bit(position);
    }

    const DyadicExpansion& expansion(int level) {
        auto& slot = expansions[static_cast<std::size_t>(level)];
        if (!slot) slot = expansion_of(summary.average(level));
        return *slot;
    }
};

struct Scan {
    std::optional<BitCertificate> certificate;
    int highest_level = 0;
};

Scan scan_bit(ConsultedAverages& averages, int d, std::size_t n, int b_budget, Functional functional) {
    Scan scan;
    const long start = std::max<long>(static_cast<long>(n) + 2, d);
    for (long b = start; b <= b_budget; ++b) {
        const int level = consulted_level(functional, static_cast<int>(b));
        scan.highest_level = std::max(scan.highest_level, level);
        if (averages.summary.average(level) == Rational(1)) continue;  // run region all ones
        bool has_one = false;
        bool has_zero = false;
        std::string region;
        for (long i = static_cast<long>(n) + 1; i <= b - 1; ++i) {
            const int digit = averages.digit(level, static_cast<std::size_t>(i));
            region.push_back(static_cast<char>('0' + digit));
            (digit ? has_one : has_zero) = true;
        }
        if (!(has_one && has_zero)) continue;
        const int bit = averages.digit(level, n);
        if (!scan.certificate) {
            scan.certificate = BitCertificate{.position = n,
                                              .bit = bit,
                                              .level = static_cast<int>(b),
                                              .consulted_level = level,
                                              .average = averages.summary.average(level),
                                              .expansion = averages.expansion(level),
                                              .run_region = std::move(region)};
        } else if (bit != scan.certificate->bit) {
            scan.certificate->conflicting_level = static_cast<int>(b);
            break;
        }
    }
    return scan;
}

CheckpointSummary consulted_summary(const BitPrefix& y, int b_budget, Functional functional) {
    if (b_budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
    const int top = consulted_level(functional, b_budget);
    const std::uint64_t required = checkpoint_size(top);
    if (y.size() < required) throw PrefixTooShort(required, y.size());
    return checkpoints(y, 1, top);
}

}  // namespace

std::optional<BitCertificate> extract_bit(const BitPrefix& y, int d, std::size_t n, int b_budget, Functional functional) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "level d must be >= 1");
    const CheckpointSummary summary = consulted_summary(y, b_budget, functional);
    ConsultedAverages averages(summary);
    return scan_bit(averages, d, n, b_budget, functional).certificate;
}

ExtractionReport extract_prefix(const BitPrefix& y, int d, std::size_t n_target, int b_budget, Functional functional) {
    if (d < 1) throw Error(ErrorCode::InvalidArgument, "level d must be >= 1");
    const CheckpointSummary summary = consulted_summary(y, b_budget, functional);
    ConsultedAverages averages(summary);
    ExtractionReport report{.functional = functional, .d = d, .n_target = n_target, .b_budget = b_budget};
    for (std::size_t n = 0; n < n_target; ++n) {
        Scan scan = scan_bit(averages, d, n, b_budget, functional);
        report.highest_level_consulted = std::max(report.highest_level_consulted, scan.highest_level);
        if (!scan.certificate) {
            report.first_undecided = n;
            break;
        }
        report.certificates.push_back(std::move(*scan.certificate));
    }
    return report;
}

}  // namespace hippoc

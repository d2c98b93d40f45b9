#include "hippoc/randomness_tests.hpp"

#include "hippoc/error.hpp"

namespace hippoc {

std::uint64_t checkpoint_size(int level) {
    if (level < 1 || level > kMaxLevel) {
        throw Error(ErrorCode::OutOfRange, "checkpoint level " + std::to_string(level) + " outside [1, 21]");
    }
    return std::uint64_t{1} << (3 * level - 1);
}

CheckpointSummary::CheckpointSummary(int first_level, int last_level, std::vector<std::uint64_t> counts)
    : first_(first_level), last_(last_level), counts_(std::move(counts)) {
    if (first_ < 1 || first_ > last_ || counts_.size() != static_cast<std::size_t>(last_ - first_ + 1)) {
        throw Error(ErrorCode::InvalidArgument, "malformed checkpoint summary");
    }
}

std::uint64_t CheckpointSummary::count(int level) const {
    if (!covers(level)) throw Error(ErrorCode::OutOfRange, "level " + std::to_string(level) + " not in summary");
    return counts_[static_cast<std::size_t>(level - first_)];
}

Rational CheckpointSummary::average(int level) const {
    return Rational(mpz_class(static_cast<unsigned long>(count(level))), mpz_class(static_cast<unsigned long>(checkpoint_size(level))));
}

CheckpointSummary checkpoints(const BitPrefix& y, int d, int b_max) {
    if (d < 1 || d > b_max) {
        throw Error(ErrorCode::InvalidArgument, "need 1 <= d <= b_max, got d=" + std::to_string(d) + ", b_max=" + std::to_string(b_max));
    }
    const std::uint64_t required = checkpoint_size(b_max);
    if (y.size() < required) throw PrefixTooShort(required, y.size());
    std::vector<std::uint64_t> counts;
    counts.reserve(static_cast<std::size_t>(b_max - d + 1));
    std::uint64_t running = y.count_ones(checkpoint_size(d));
    counts.push_back(running);
    for (int b = d + 1; b <= b_max; ++b) {
        running += y.count_ones(checkpoint_size(b - 1), checkpoint_size(b));
        counts.push_back(running);
    }
    return CheckpointSummary(d, b_max, std::move(counts));
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Fail: return "FAIL";
        case Outcome::PassUpToTruncation: return "PASS-UP-TO-TRUNCATION";
        case Outcome::Undecided: return "UNDECIDED";
    }
    return "UNDECIDED";
}

namespace {

std::string avg_key(int level) { return "avg_N" + std::to_string(level); }

void check_levels(const CheckpointSummary& summary, int d, int b_max) {
    if (d < 1 || d > b_max) throw Error(ErrorCode::InvalidArgument, "need 1 <= d <= b_max");
    if (!summary.covers(d) || !summary.covers(b_max)) throw Error(ErrorCode::InvalidArgument, "summary does not cover [d, b_max]");
}

}  // namespace

TestVerdict oracle_test(const CheckpointSummary& summary, const RealParam& p, int d, int b_max) {
    check_levels(summary, d, b_max);
    TestVerdict v{.family = "oracle", .resolution = {{"d", d}, {"b_max", b_max}}};
    bool undecided = false;
    for (int b = d; b <= b_max; ++b) {
        const Rational avg = summary.average(b);
        v.exact_values.emplace(avg_key(b), avg);
        const Rational eps = Rational::pow2_neg(static_cast<unsigned>(b));
        const Deviation dev = compare_deviation(avg, p, eps);
        if (dev == Deviation::GEQ) {
            v.outcome = Outcome::Fail;
            v.witness = LevelWitness{b, avg, eps};
            return v;
        }
        if (dev == Deviation::UNDECIDED && !undecided) {
            undecided = true;
            v.exact_values.emplace("first_undecided_level", Rational(b));
        }
    }
    v.outcome = undecided ? Outcome::Undecided : Outcome::PassUpToTruncation;
    return v;
}

TestVerdict oracle_test(const BitPrefix& y, const RealParam& p, int d, int b_max) {
    return oracle_test(checkpoints(y, d, b_max), p, d, b_max);
}

TestVerdict cauchy_test(const CheckpointSummary& summary, int d, int b_max) {
    check_levels(summary, d, b_max);
    TestVerdict v{.family = "cauchy", .resolution = {{"d", d}, {"b_max", b_max}}};
    std::vector<Rational> averages;
    for (int b = d; b <= b_max; ++b) {
        averages.push_back(summary.average(b));
        v.exact_values.emplace(avg_key(b), averages.back());
    }
    for (int a = d; a <= b_max; ++a) {
        for (int b = a + 1; b <= b_max; ++b) {
            const Rational& ya = averages[static_cast<std::size_t>(a - d)];
            const Rational& yb = averages[static_cast<std::size_t>(b - d)];
            const Rational deviation = abs(ya - yb);
            const Rational threshold = Rational::pow2_neg(static_cast<unsigned>(a)) + Rational::pow2_neg(static_cast<unsigned>(b));
            if (deviation >= threshold) {
                v.outcome = Outcome::Fail;
                v.witness = PairWitness{a, b, ya, yb, deviation, threshold};
                return v;
            }
        }
    }
    v.outcome = Outcome::PassUpToTruncation;
    return v;
}

TestVerdict cauchy_test(const BitPrefix& y, int d, int b_max) { return cauchy_test(checkpoints(y, d, b_max), d, b_max); }

namespace {

bool fits_i64(const mpz_class& v) { return v.fits_slong_p(); }

}  // namespace

TestVerdict slln_test(const BitPrefix& y, const Rational& q1, const Rational& q2, std::uint64_t N, std::uint64_t n_max) {
    if (q1 >= q2) throw Error(ErrorCode::InvalidInterval, "need q1 < q2, got " + q1.str() + " and " + q2.str());
    if (q1.sign() < 0 || q2 > Rational(1)) throw Error(ErrorCode::InvalidInterval, "need 0 <= q1 < q2 <= 1");
    if (N < 1 || N > n_max) throw Error(ErrorCode::InvalidArgument, "need 1 <= N <= n_max");
    if (n_max > y.size()) throw PrefixTooShort(n_max, y.size());

    TestVerdict v{.family = "slln",
                  .resolution = {{"N", static_cast<std::int64_t>(N)}, {"n_max", static_cast<std::int64_t>(n_max)}},
                  .exact_values = {{"q1", q1}, {"q2", q2}}};
    auto fail_at = [&](std::uint64_t n, std::uint64_t count, bool below) {
        const Rational avg(mpz_class(static_cast<unsigned long>(count)), mpz_class(static_cast<unsigned long>(n)));
        v.outcome = Outcome::Fail;
        v.witness = IndexWitness{n, avg, below ? q1 : q2, below};
    };

    std::uint64_t count = y.count_ones(N - 1);
    const bool small = fits_i64(q1.numerator()) && fits_i64(q1.denominator()) && fits_i64(q2.numerator()) &&
                       fits_i64(q2.denominator()) && n_max < (std::uint64_t{1} << 62);
    if (small) {
        // count/n <= a/b  <=>  count*b <= a*n, in 128-bit integers.
        const __int128 a1 = q1.numerator().get_si(), b1 = q1.denominator().get_si();
        const __int128 a2 = q2.numerator().get_si(), b2 = q2.denominator().get_si();
        for (std::uint64_t n = N; n <= n_max; ++n) {
            count += static_cast<std::uint64_t>(y.bit(n - 1));
            const __int128 c = static_cast<__int128>(count);
            const __int128 m = static_cast<__int128>(n);
            if (c * b1 <= a1 * m) {
                fail_at(n, count, true);
                return v;
            }
            if (c * b2 >= a2 * m) {
                fail_at(n, count, false);
                return v;
            }
        }
    } else {
        for (std::uint64_t n = N; n <= n_max; ++n) {
            count += static_cast<std::uint64_t>(y.bit(n - 1));
            const Rational avg(mpz_class(static_cast<unsigned long>(count)), mpz_class(static_cast<unsigned long>(n)));
            if (avg <= q1 || avg >= q2) {
                fail_at(n, count, avg <= q1);
                return v;
            }
        }
    }
    v.outcome = Outcome::PassUpToTruncation;
    v.exact_values.emplace("final_average", Rational(mpz_class(static_cast<unsigned long>(count)), mpz_class(static_cast<unsigned long>(n_max))));
    return v;
}

Rational slln_bound(const Rational& p, const Rational& q1, const Rational& q2, std::uint64_t N) {
    if (!(q1 < p && p < q2)) throw Error(ErrorCode::InvalidInterval, "need q1 < p < q2");
    if (N < 2) throw Error(ErrorCode::DivisionByZero, "bound needs N >= 2");
    const Rational n_minus_1(mpz_class(static_cast<unsigned long>(N - 1)), mpz_class(1));
    const Rational three_halves(3, 2);
    return three_halves / (pow(p - q1, 4) * n_minus_1) + three_halves / (pow(q2 - p, 4) * n_minus_1);
}

}  // namespace hippoc

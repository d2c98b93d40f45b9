#include "hippoc/verify.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "hippoc/bitstream.hpp"
#include "hippoc/convert.hpp"
#include "hippoc/error.hpp"
#include "hippoc/parallel.hpp"
#include "hippoc/randomness_tests.hpp"

namespace hippoc {

namespace {

void require_unit(const Rational& p) {
    if (p.sign() < 0 || p > Rational(1)) throw Error(ErrorCode::OutOfRange, "p = " + p.str() + " is not in [0,1]");
}

mpz_class mpz_of(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

mpz_class mpz_pow(const mpz_class& base, std::uint64_t e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

// Integer binomial weights C(m, j) a^j (q-a)^{m-j}, j = 0..m; their sum is q^m.
std::vector<mpz_class> binomial_weights(std::uint64_t m, const mpz_class& a, const mpz_class& q) {
    const mpz_class b = q - a;
    std::vector<mpz_class> w(static_cast<std::size_t>(m + 1), 0);
    if (a == 0) {
        w[0] = mpz_pow(b, m);
        return w;
    }
    if (b == 0) {
        w[static_cast<std::size_t>(m)] = mpz_pow(a, m);
        return w;
    }
    w[0] = mpz_pow(b, m);
    for (std::uint64_t j = 0; j < m; ++j) {
        // w[j+1] = w[j] (m-j) a / ((j+1) b), exact at every step.
        mpz_class next = w[static_cast<std::size_t>(j)] * mpz_of(m - j) * a;
        mpz_divexact(next.get_mpz_t(), next.get_mpz_t(), mpz_class(mpz_of(j + 1) * b).get_mpz_t());
        w[static_cast<std::size_t>(j + 1)] = std::move(next);
    }
    return w;
}

}  // namespace

Rational fourth_central_moment(const Rational& p) {
    require_unit(p);
    const Rational q = Rational(1) - p;
    return p * q * (pow(q, 3) + pow(p, 3));
}

Rational brute_force_s4(std::uint64_t n, const Rational& p) {
    require_unit(p);
    if (n > 14) throw Error(ErrorCode::TooLarge, "brute force enumerates 2^n outcomes, n <= 14");
    const Rational q = Rational(1) - p;
    std::vector<Rational> p_pow{Rational(1)}, q_pow{Rational(1)};
    for (std::uint64_t i = 0; i < n; ++i) {
        p_pow.push_back(p_pow.back() * p);
        q_pow.push_back(q_pow.back() * q);
    }
    Rational total(0);
    for (std::uint64_t outcome = 0; outcome < (std::uint64_t{1} << n); ++outcome) {
        Rational s(0);
        for (std::uint64_t i = 0; i < n; ++i) s = s + (Rational(static_cast<long>((outcome >> i) & 1u)) - p);
        const auto ones = static_cast<std::size_t>(std::popcount(outcome));
        total = total + pow(s, 4) * p_pow[ones] * q_pow[static_cast<std::size_t>(n) - ones];
    }
    return total;
}

MomentReport moment_s4(std::uint64_t n, const Rational& p) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    const Rational kp = fourth_central_moment(p);
    const Rational nn(static_cast<long>(n));
    const Rational variance = p * (Rational(1) - p);
    MomentReport r{.quantity = "E[S_n^4]", .n = n, .p = p};
    r.formula_value = nn * kp + Rational(3) * nn * (nn - Rational(1)) * variance * variance;
    if (n <= 14) r.brute_force_value = brute_force_s4(n, p);
    r.bound_value = (Rational(3) * nn * nn - Rational(2) * nn) * kp;
    r.satisfied = r.formula_value <= *r.bound_value && (!r.brute_force_value || *r.brute_force_value == r.formula_value);
    return r;
}

MomentReport kp_check(const Rational& p) {
    const Rational q = Rational(1) - p;
    MomentReport r{.quantity = "K_p", .n = 1, .p = p};
    r.formula_value = fourth_central_moment(p);
    // E[(Y - p)^4] over Y in {0, 1}.
    r.brute_force_value = pow(Rational(0) - p, 4) * q + pow(Rational(1) - p, 4) * p;
    r.bound_value = Rational(1, 2);
    r.satisfied = r.formula_value <= *r.bound_value && *r.brute_force_value == r.formula_value;
    return r;
}

MomentReport chebyshev_check(std::uint64_t n, const Rational& p, std::uint64_t k) {
    require_unit(p);
    if (p.sign() == 0 || p == Rational(1)) throw Error(ErrorCode::DegenerateP, "sigma = 0 at p = " + p.str());
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    if (n > 1000000) throw Error(ErrorCode::TooLarge, "exact binomial tail limited to n <= 10^6");
    const mpz_class a = p.numerator();
    const mpz_class q = p.denominator();
    // |c/n - p| >= k sigma / sqrt(n)  <=>  (c q - n a)^2 >= k^2 n a (q - a)
    const mpz_class rhs = mpz_of(k) * mpz_of(k) * mpz_of(n) * a * (q - a);
    const auto weights = binomial_weights(n, a, q);
    mpz_class tail = 0;
    for (std::uint64_t c = 0; c <= n; ++c) {
        const mpz_class gap = mpz_of(c) * q - mpz_of(n) * a;
        if (gap * gap >= rhs) tail += weights[static_cast<std::size_t>(c)];
    }
    MomentReport r{.quantity = "chebyshev_tail", .n = n, .p = p, .k = k};
    r.formula_value = Rational(tail, mpz_pow(q, n));
    r.bound_value = Rational(mpz_class(1), mpz_of(k) * mpz_of(k));
    r.satisfied = r.formula_value <= *r.bound_value;
    return r;
}

MeasureEstimate exact_union_measure(const Rational& p, int d, int b_max) {
    require_unit(p);
    if (d < 1 || d > b_max) throw Error(ErrorCode::InvalidArgument, "need 1 <= d <= b_max");
    if (b_max > 5) throw Error(ErrorCode::TooLarge, "exact DP limited to b_max <= 5");
    const mpz_class a = p.numerator();
    const mpz_class q = p.denominator();

    // fires(c, b): |c/N - p| >= 2^{-b}  <=>  |c q - a N| 2^b >= q N
    auto fires = [&](std::uint64_t c, int b) {
        const std::uint64_t N = checkpoint_size(b);
        mpz_class gap = abs(mpz_class(mpz_of(c) * q - a * mpz_of(N)));
        mpz_mul_2exp(gap.get_mpz_t(), gap.get_mpz_t(), static_cast<mp_bitcnt_t>(b));
        return gap >= q * mpz_of(N);
    };

    // Surviving states (count, weight) at the current level; weights are
    // scaled by q^{N(level)}.
    struct State {
        std::uint64_t count;
        mpz_class weight;
    };
    std::vector<State> survivors;
    Rational fired(0);

    {
        const std::uint64_t N = checkpoint_size(d);
        const auto w = binomial_weights(N, a, q);
        mpz_class lost = 0;
        for (std::uint64_t c = 0; c <= N; ++c) {
            if (w[static_cast<std::size_t>(c)] == 0) continue;
            if (fires(c, d)) {
                lost += w[static_cast<std::size_t>(c)];
            } else {
                survivors.push_back({c, w[static_cast<std::size_t>(c)]});
            }
        }
        fired = fired + Rational(lost, mpz_pow(q, N));
    }

    for (int b = d + 1; b <= b_max && !survivors.empty(); ++b) {
        const std::uint64_t N = checkpoint_size(b);
        const std::uint64_t step = N - checkpoint_size(b - 1);
        const auto inc = binomial_weights(step, a, q);
        // Non-firing window at level b is a contiguous range of counts.
        std::uint64_t lo = N + 1, hi = 0;
        for (std::uint64_t c = 0; c <= N; ++c) {
            if (!fires(c, b)) {
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
        }
        mpz_class propagated = 0;
        for (const auto& s : survivors) propagated += s.weight;
        propagated *= mpz_pow(q, step);

        std::vector<State> next;
        mpz_class kept = 0;
        if (lo <= hi) {
            next.reserve(static_cast<std::size_t>(hi - lo + 1));
            for (std::uint64_t c = lo; c <= hi; ++c) {
                mpz_class w = 0;
                for (const auto& s : survivors) {
                    if (s.count > c || c - s.count > step) continue;
                    w += s.weight * inc[static_cast<std::size_t>(c - s.count)];
                }
                if (w != 0) {
                    kept += w;
                    next.push_back({c, std::move(w)});
                }
            }
        }
        fired = fired + Rational(mpz_class(propagated - kept), mpz_pow(q, N));
        survivors = std::move(next);
    }

    MeasureEstimate m{.method = "exact-dp",
                      .test = "oracle",
                      .p = p.str(),
                      .resolution = {{"d", d}, {"b_max", b_max}}};
    m.value = fired;
    m.bound = Rational::pow2_neg(static_cast<unsigned>(d));
    m.satisfied = fired <= m.bound;
    return m;
}

std::string describe(const TestSpec& spec) {
    struct {
        std::string operator()(const OracleSpec&) const { return "oracle"; }
        std::string operator()(const CauchySpec&) const { return "cauchy"; }
        std::string operator()(const SllnSpec&) const { return "slln"; }
        std::string operator()(const DiagonalSpec&) const { return "diagonal"; }
    } visitor;
    return std::visit(visitor, spec);
}

std::uint64_t required_length(const TestSpec& spec) {
    if (const auto* o = std::get_if<OracleSpec>(&spec)) return checkpoint_size(o->b_max);
    if (const auto* c = std::get_if<CauchySpec>(&spec)) return checkpoint_size(c->b_max);
    if (const auto* s = std::get_if<SllnSpec>(&spec)) return s->n_max;
    return checkpoint_size(std::get<DiagonalSpec>(spec).b_max);
}

Rational declared_bound(const TestSpec& spec, const RealParam& p) {
    if (const auto* o = std::get_if<OracleSpec>(&spec)) return Rational::pow2_neg(static_cast<unsigned>(o->d));
    if (const auto* c = std::get_if<CauchySpec>(&spec)) return Rational::pow2_neg(static_cast<unsigned>(c->d));
    if (const auto* s = std::get_if<SllnSpec>(&spec)) return slln_bound(p.exact(), s->q1, s->q2, s->N);
    return Rational::pow2_neg(static_cast<unsigned>(std::get<DiagonalSpec>(spec).n - 1));
}

WilsonInterval wilson99(std::uint64_t hits, std::uint64_t trials) {
    constexpr double z = 2.5758293035489004;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / n;
    const double denom = 1.0 + z * z / n;
    const double center = (phat + z * z / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

std::map<std::string, std::int64_t> resolution_of(const TestSpec& spec) {
    if (const auto* o = std::get_if<OracleSpec>(&spec)) return {{"d", o->d}, {"b_max", o->b_max}};
    if (const auto* c = std::get_if<CauchySpec>(&spec)) return {{"d", c->d}, {"b_max", c->b_max}};
    if (const auto* s = std::get_if<SllnSpec>(&spec)) {
        return {{"N", static_cast<std::int64_t>(s->N)}, {"n_max", static_cast<std::int64_t>(s->n_max)}};
    }
    const auto& g = std::get<DiagonalSpec>(spec);
    return {{"n", g.n}, {"k_max", static_cast<std::int64_t>(g.k_max)}, {"b_max", g.b_max}};
}

bool fires_once(const TestSpec& spec, const BitPrefix& y, const RealParam& p) {
    if (const auto* o = std::get_if<OracleSpec>(&spec)) return oracle_test(y, p, o->d, o->b_max).failed();
    if (const auto* c = std::get_if<CauchySpec>(&spec)) return cauchy_test(y, c->d, c->b_max).failed();
    if (const auto* s = std::get_if<SllnSpec>(&spec)) return slln_test(y, s->q1, s->q2, s->N, s->n_max).failed();
    const auto& g = std::get<DiagonalSpec>(spec);
    return diagonal_test(y, TruncatedUFamily{}, g.n, g.k_max, g.b_max).failed();
}

}  // namespace

MeasureEstimate mc_estimate(const TestSpec& spec, const RealParam& p, std::uint64_t trials, std::uint64_t prefix_len, std::uint64_t seed) {
    if (trials == 0) throw Error(ErrorCode::ZeroTrials, "need at least one trial");
    const std::uint64_t required = required_length(spec);
    if (prefix_len < required) throw PrefixTooShort(required, prefix_len);

    constexpr std::size_t grain = 256;
    std::vector<std::uint64_t> chunk_hits((trials + grain - 1) / grain, 0);
    parallel_chunks(trials, grain, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        std::uint64_t hits = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const BernoulliSampler sampler(p, substream_seed(seed, i));
            if (fires_once(spec, sampler.generate(prefix_len), p)) ++hits;
        }
        chunk_hits[chunk] = hits;
    });
    std::uint64_t hits = 0;
    for (auto h : chunk_hits) hits += h;

    const WilsonInterval ci = wilson99(hits, trials);
    MeasureEstimate m{.method = "monte-carlo",
                      .test = describe(spec),
                      .p = p.str(),
                      .resolution = resolution_of(spec),
                      .hits = hits,
                      .trials = trials,
                      .seed = seed,
                      .prefix_len = prefix_len,
                      .ci_low = ci.low,
                      .ci_high = ci.high,
                      .ci_halfwidth = (ci.high - ci.low) / 2.0,
                      .ci_method = "wilson-score-99"};
    m.bound = declared_bound(spec, p);
    const double rate = static_cast<double>(hits) / static_cast<double>(trials);
    m.satisfied = rate <= m.bound.to_double() + m.ci_halfwidth;
    return m;
}

}  // namespace hippoc

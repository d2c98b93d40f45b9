#include "hippoc/pipeline.hpp"

#include "hippoc/error.hpp"
#include "hippoc/extract.hpp"
#include "hippoc/randomness_tests.hpp"

namespace hippoc {

json pipeline_result(const BitPrefix& y, const std::optional<Rational>& known_p, const PipelineOptions& options) {
    const int budget = options.b_budget;
    const int b_max = budget + 1;
    const int d_limit = options.d_limit.value_or(budget);
    if (budget < 1 || d_limit < 1 || d_limit > budget) throw Error(ErrorCode::InvalidArgument, "need 1 <= d_limit <= budget");
    const CheckpointSummary summary = checkpoints(y, 1, b_max);

    json cauchy = json::array();
    std::optional<int> passing;
    for (int d = 1; d <= d_limit; ++d) {
        const TestVerdict v = cauchy_test(summary, d, b_max);
        cauchy.push_back(to_json(v));
        if (!v.failed()) {
            passing = d;
            break;
        }
    }
    if (!passing) {
        const TestVerdict first = cauchy_test(summary, 1, b_max);
        const auto& w = std::get<PairWitness>(*first.witness);
        throw Error(ErrorCode::NoPassingLevel, "cauchy test fails at every d in [1, " + std::to_string(d_limit) +
                                                   "]; witness pair at d = 1: (" + std::to_string(w.a) + ", " +
                                                   std::to_string(w.b) + "), |" + w.average_a.str() + " - " +
                                                   w.average_b.str() + "| >= " + w.threshold.str());
    }

    const ExtractionReport extraction = extract_prefix(y, *passing, options.n_target, budget, Functional::Theta);
    json result = {{"cauchy", cauchy},
                   {"passing_level", *passing},
                   {"b_max", b_max},
                   {"extraction", to_json(extraction)},
                   {"undecided_extraction", extraction.certificates.empty()}};

    if (!known_p) {
        result["harness"] = nullptr;
        return result;
    }
    const Rational& p = *known_p;
    json harness = {{"p", to_json(p)}, {"oracle", to_json(oracle_test(summary, RealParam(p), *passing, b_max))}};
    if (p.sign() == 0 || p == Rational(1)) {
        harness["slln"] = nullptr;
    } else {
        const Rational q1 = p / Rational(2);
        const Rational q2 = (Rational(1) + p) / Rational(2);
        harness["slln"] = to_json(slln_test(y, q1, q2, checkpoint_size(*passing), checkpoint_size(b_max)));
    }
    std::string true_digits;
    json mismatches = json::array();
    for (const auto& c : extraction.certificates) {
        const int truth = binary_digit(p, c.position);
        true_digits.push_back(static_cast<char>('0' + truth));
        if (truth != c.bit) mismatches.push_back(c.position);
    }
    harness["true_digits"] = true_digits;
    harness["mismatched_positions"] = mismatches;
    harness["all_certified_match"] = mismatches.empty();
    result["harness"] = harness;
    return result;
}

RunReport run_pipeline(const SourceSpec& source, const PipelineOptions& options) {
    const std::uint64_t length = checkpoint_size(options.b_budget + 1);
    const BitPrefix y = materialize(source, length);
    std::optional<Rational> known_p;
    RunReport report{.command = "pipeline"};
    if (const auto* b = std::get_if<BernoulliSource>(&source)) {
        if (b->p.is_exact()) known_p = b->p.exact();
        report.seeds.push_back(b->seed);
    }
    report.params = {{"budget", std::to_string(options.b_budget)},
                     {"bits", std::to_string(options.n_target)},
                     {"dlimit", std::to_string(options.d_limit.value_or(options.b_budget))},
                     {"length", std::to_string(length)}};
    report.results.push_back(pipeline_result(y, known_p, options));
    return report;
}

}  // namespace hippoc

#include "hippoc/cli.hpp"

#include <chrono>
#include <ostream>
#include <regex>

#include <CLI11.hpp>

#include "hippoc/bitstream.hpp"
#include "hippoc/convert.hpp"
#include "hippoc/error.hpp"
#include "hippoc/extract.hpp"
#include "hippoc/pipeline.hpp"
#include "hippoc/randomness_tests.hpp"
#include "hippoc/report.hpp"
#include "hippoc/verify.hpp"

namespace hippoc {

namespace {

struct Flags {
    // shared
    std::string p;
    std::uint64_t seed = 0;
    std::string in;
    std::string informat = "text01";
    int d = 1;
    int b_max = 1;
    // gen
    std::uint64_t n_bits = 0;
    std::string source = "bernoulli";
    std::string p0 = "0";
    std::string p1 = "1";
    std::string format = "text01";
    std::string out;
    // test / mc
    std::string family;
    std::string q1;
    std::string q2;
    std::uint64_t N = 0;
    std::uint64_t n_max = 0;
    // extract
    std::string functional = "theta";
    std::size_t bits = 16;
    int budget = 8;
    // convert / diagonal
    int level = 1;
    std::size_t k_max = 8;
    std::optional<int> conv_d;
    // verify
    std::string claim;
    std::uint64_t n = 1;
    std::uint64_t k = 1;
    std::uint64_t trials = 1;
    std::uint64_t len = 0;
    // pipeline
    std::optional<int> d_limit;
    // output
    bool text = false;
    bool json_flag = false;
    bool timing = false;
};

SourceSpec source_from(const Flags& f) {
    if (f.source == "bernoulli") {
        if (f.p.empty()) throw Error(ErrorCode::InvalidArgument, "--p is required for a bernoulli source");
        return BernoulliSource{RealParam::parse(f.p), f.seed};
    }
    if (f.source == "file") {
        if (f.in.empty()) throw Error(ErrorCode::InvalidArgument, "--in is required for a file source");
        return FileSource{f.in, parse_format(f.informat)};
    }
    // "drifting-bias(1/8,7/8)" is accepted as shorthand for --p0/--p1.
    static const std::regex with_args(R"(([a-z-]+)\(([^,()]+),([^,()]+)\))");
    std::smatch m;
    if (std::regex_match(f.source, m, with_args)) {
        return AdversarialSpec{m[1].str(), Rational::parse(m[2].str()), Rational::parse(m[3].str())};
    }
    return AdversarialSpec{f.source, Rational::parse(f.p0), Rational::parse(f.p1)};
}

BitPrefix input_bits(const Flags& f) {
    if (f.in.empty()) throw Error(ErrorCode::InvalidArgument, "--in is required");
    return read_bits(std::filesystem::path(f.in), parse_format(f.informat));
}

TestSpec test_spec_from(const Flags& f) {
    if (f.family == "oracle") return OracleSpec{f.d, f.b_max};
    if (f.family == "cauchy") return CauchySpec{f.d, f.b_max};
    if (f.family == "slln") return SllnSpec{Rational::parse(f.q1), Rational::parse(f.q2), f.N, f.n_max};
    if (f.family == "diagonal") return DiagonalSpec{f.level, f.k_max, f.b_max};
    throw Error(ErrorCode::InvalidArgument, "unknown test family '" + f.family + "'");
}

RunReport cmd_gen(const Flags& f) {
    const SourceSpec source = source_from(f);
    const BitPrefix y = materialize(source, f.n_bits);
    const BitFormat format = parse_format(f.format);
    write_bits(std::filesystem::path(f.out), y, format);
    RunReport r{.command = "gen",
                .params = {{"source", f.source}, {"n", std::to_string(f.n_bits)}, {"format", f.format}, {"out", f.out}}};
    if (f.source == "bernoulli") {
        r.params["p"] = RealParam::parse(f.p).str();
        r.seeds.push_back(f.seed);
    }
    r.results.push_back({{"n", y.size()}, {"ones", y.count_ones(y.size())}, {"out", f.out}, {"format", f.format}});
    return r;
}

RunReport cmd_test(const Flags& f) {
    const BitPrefix y = input_bits(f);
    RunReport r{.command = "test", .params = {{"family", f.family}, {"in", f.in}}};
    TestVerdict v;
    if (f.family == "oracle") {
        if (f.p.empty()) throw Error(ErrorCode::InvalidArgument, "--p is required for the oracle family");
        const RealParam p = RealParam::parse(f.p);
        r.params.insert({{"p", p.str()}, {"d", std::to_string(f.d)}, {"bmax", std::to_string(f.b_max)}});
        v = oracle_test(y, p, f.d, f.b_max);
    } else if (f.family == "cauchy") {
        r.params.insert({{"d", std::to_string(f.d)}, {"bmax", std::to_string(f.b_max)}});
        v = cauchy_test(y, f.d, f.b_max);
    } else if (f.family == "slln") {
        const Rational q1 = Rational::parse(f.q1), q2 = Rational::parse(f.q2);
        r.params.insert({{"q1", q1.str()}, {"q2", q2.str()}, {"N", std::to_string(f.N)}, {"nmax", std::to_string(f.n_max)}});
        v = slln_test(y, q1, q2, f.N, f.n_max);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown test family '" + f.family + "'");
    }
    r.results.push_back(to_json(v));
    return r;
}

RunReport cmd_extract(const Flags& f) {
    const BitPrefix y = input_bits(f);
    RunReport r{.command = "extract",
                .params = {{"functional", f.functional},
                           {"d", std::to_string(f.d)},
                           {"bits", std::to_string(f.bits)},
                           {"budget", std::to_string(f.budget)},
                           {"in", f.in}}};
    r.results.push_back(to_json(extract_prefix(y, f.d, f.bits, f.budget, parse_functional(f.functional))));
    return r;
}

RunReport cmd_convert(const Flags& f) {
    const BitPrefix y = input_bits(f);
    const int d = f.conv_d.value_or(f.level);
    RunReport r{.command = "convert",
                .params = {{"n", std::to_string(f.level)},
                           {"d", std::to_string(d)},
                           {"kmax", std::to_string(f.k_max)},
                           {"bmax", std::to_string(f.b_max)},
                           {"in", f.in}}};
    const TruncatedUFamily family;
    json j = to_json(diagonal_member(y, family, d, f.level, f.k_max, f.b_max));
    j["declared_bound"] = to_json(d == f.level ? Rational::pow2_neg(static_cast<unsigned>(f.level - 1))
                                               : family.declared_bound(f.level) + Rational::pow2_neg(static_cast<unsigned>(d)));
    r.results.push_back(j);
    return r;
}

RunReport cmd_verify(const Flags& f) {
    RunReport r{.command = "verify", .params = {{"claim", f.claim}}};
    if (f.claim == "moments") {
        const Rational p = Rational::parse(f.p);
        r.params.insert({{"n", std::to_string(f.n)}, {"p", p.str()}});
        r.results.push_back(to_json(moment_s4(f.n, p)));
        r.results.push_back(to_json(kp_check(p)));
    } else if (f.claim == "chebyshev") {
        const Rational p = Rational::parse(f.p);
        r.params.insert({{"n", std::to_string(f.n)}, {"p", p.str()}, {"k", std::to_string(f.k)}});
        r.results.push_back(to_json(chebyshev_check(f.n, p, f.k)));
    } else if (f.claim == "exact-union") {
        const Rational p = Rational::parse(f.p);
        r.params.insert({{"p", p.str()}, {"d", std::to_string(f.d)}, {"bmax", std::to_string(f.b_max)}});
        r.results.push_back(to_json(exact_union_measure(p, f.d, f.b_max)));
    } else if (f.claim == "mc") {
        const RealParam p = RealParam::parse(f.p);
        const TestSpec spec = test_spec_from(f);
        const std::uint64_t len = f.len == 0 ? required_length(spec) : f.len;
        r.params.insert({{"family", f.family}, {"p", p.str()}, {"trials", std::to_string(f.trials)}, {"len", std::to_string(len)}});
        const json estimate = to_json(mc_estimate(spec, p, f.trials, len, f.seed));
        for (const auto& [key, value] : estimate["resolution"].items()) r.params[key] = value.dump();
        r.seeds.push_back(f.seed);
        r.results.push_back(estimate);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown claim '" + f.claim + "'");
    }
    return r;
}

RunReport cmd_bound(const Flags& f) {
    if (f.family != "slln") throw Error(ErrorCode::InvalidArgument, "only --family slln has a closed-form bound");
    const Rational p = Rational::parse(f.p), q1 = Rational::parse(f.q1), q2 = Rational::parse(f.q2);
    const Rational bound = slln_bound(p, q1, q2, f.N);
    RunReport r{.command = "bound",
                .params = {{"family", "slln"}, {"p", p.str()}, {"q1", q1.str()}, {"q2", q2.str()}, {"N", std::to_string(f.N)}}};
    r.results.push_back({{"family", "slln"}, {"bound", to_json(bound)}, {"clamped", to_json(std::min(bound, Rational(1)))}});
    return r;
}

RunReport cmd_pipeline(const Flags& f) {
    const SourceSpec source = source_from(f);
    RunReport r = run_pipeline(source, PipelineOptions{f.budget, f.bits, f.d_limit});
    r.params["source"] = f.source;
    if (f.source == "bernoulli") r.params["p"] = RealParam::parse(f.p).str();
    if (f.source == "file") r.params["in"] = f.in;
    return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bernoulli randomness tests, certified parameter extraction and bound verification", "hippoc"};
    app.require_subcommand(1);
    Flags f;

    auto add_output = [&](CLI::App* sub) {
        sub->add_flag("--json", f.json_flag, "Emit JSON (default)");
        sub->add_flag("--text", f.text, "Emit flattened key = value text");
        sub->add_flag("--timing", f.timing, "Print wall time to stderr");
    };
    auto add_input = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--in", f.in, "Input bit file");
        if (required) opt->required();
        sub->add_option("--informat", f.informat, "Input format")->check(CLI::IsMember({"text01", "packed"}));
    };
    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--source", f.source,
                        "bernoulli | file | all-zeros | all-ones | alternating | drifting-bias | champernowne-like");
        sub->add_option("--p", f.p, "Bias as a/b or a binary prefix 0.bbb");
        sub->add_option("--seed", f.seed, "Generator seed");
        sub->add_option("--p0", f.p0, "drifting-bias start");
        sub->add_option("--p1", f.p1, "drifting-bias end");
    };

    auto* gen = app.add_subcommand("gen", "Generate a bitstream");
    add_source(gen);
    gen->add_option("--n", f.n_bits, "Number of bits")->required();
    gen->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text01", "packed"}));
    gen->add_option("--out", f.out, "Output path")->required();
    add_output(gen);

    auto* test = app.add_subcommand("test", "Run one test family on a bitstream");
    test->add_option("--family", f.family)->required()->check(CLI::IsMember({"oracle", "cauchy", "slln"}));
    test->add_option("--d", f.d);
    test->add_option("--bmax", f.b_max);
    test->add_option("--p", f.p);
    test->add_option("--q1", f.q1);
    test->add_option("--q2", f.q2);
    test->add_option("--N", f.N);
    test->add_option("--nmax", f.n_max);
    add_input(test, true);
    add_output(test);

    auto* extract = app.add_subcommand("extract", "Extract certified digits of the bias");
    extract->add_option("--functional", f.functional)->check(CLI::IsMember({"psi", "theta"}));
    extract->add_option("--d", f.d);
    extract->add_option("--bits", f.bits, "Number of digits to attempt");
    extract->add_option("--budget", f.budget, "Highest certifying level");
    add_input(extract, true);
    add_output(extract);

    auto* convert = app.add_subcommand("convert", "Diagonal oracle-free test membership");
    convert->add_option("--n", f.level, "Test level")->required();
    convert->add_option("--kmax", f.k_max, "Largest oracle prefix length");
    convert->add_option("--bmax", f.b_max, "Resolution (checkpoint level)")->required();
    convert->add_option("--d", f.conv_d, "Extraction level (default: n)");
    add_input(convert, true);
    add_output(convert);

    auto* verify = app.add_subcommand("verify", "Check a quantitative claim");
    verify->add_option("--claim", f.claim)->required()->check(CLI::IsMember({"moments", "chebyshev", "exact-union", "mc"}));
    verify->add_option("--p", f.p)->required();
    verify->add_option("--n", f.n);
    verify->add_option("--k", f.k);
    verify->add_option("--d", f.d);
    verify->add_option("--bmax", f.b_max);
    verify->add_option("--family", f.family)->check(CLI::IsMember({"oracle", "cauchy", "slln", "diagonal"}));
    verify->add_option("--trials", f.trials);
    verify->add_option("--len", f.len, "Prefix length per trial (default: what the test needs)");
    verify->add_option("--seed", f.seed);
    verify->add_option("--q1", f.q1);
    verify->add_option("--q2", f.q2);
    verify->add_option("--N", f.N);
    verify->add_option("--nmax", f.n_max);
    verify->add_option("--level", f.level, "Diagonal level n");
    verify->add_option("--kmax", f.k_max);
    add_output(verify);

    auto* bound = app.add_subcommand("bound", "Exact closed-form measure bound");
    bound->add_option("--family", f.family)->required();
    bound->add_option("--p", f.p)->required();
    bound->add_option("--q1", f.q1)->required();
    bound->add_option("--q2", f.q2)->required();
    bound->add_option("--N", f.N)->required();
    add_output(bound);

    auto* pipeline = app.add_subcommand("pipeline", "Cauchy test, then certified extraction");
    add_source(pipeline);
    add_input(pipeline, false);
    pipeline->add_option("--budget", f.budget);
    pipeline->add_option("--bits", f.bits);
    pipeline->add_option("--dlimit", f.d_limit);
    add_output(pipeline);

    std::vector<const char*> argv{"hippoc"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        RunReport report;
        if (*gen) report = cmd_gen(f);
        else if (*test) report = cmd_test(f);
        else if (*extract) report = cmd_extract(f);
        else if (*convert) report = cmd_convert(f);
        else if (*verify) report = cmd_verify(f);
        else if (*bound) report = cmd_bound(f);
        else report = cmd_pipeline(f);
        out << emit_report(report, f.text ? ReportFormat::Text : ReportFormat::Json);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    if (f.timing) {
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        err << "wall_time_s: " << elapsed.count() << '\n';
    }
    return 0;
}

}  // namespace hippoc

#include "hippoc/report.hpp"

#include <sstream>

#include "hippoc/error.hpp"

namespace hippoc {

json to_json(const Rational& x) { return x.str(); }

namespace {

json rational_map(const std::map<std::string, Rational>& values) {
    json j = json::object();
    for (const auto& [k, v] : values) j[k] = to_json(v);
    return j;
}

json witness_json(const Witness& w) {
    struct {
        json operator()(const LevelWitness& l) const {
            return {{"kind", "level"}, {"level", l.level}, {"average", to_json(l.average)}, {"threshold", to_json(l.threshold)}};
        }
        json operator()(const PairWitness& p) const {
            return {{"kind", "pair"},
                    {"pair", {p.a, p.b}},
                    {"average_a", to_json(p.average_a)},
                    {"average_b", to_json(p.average_b)},
                    {"deviation", to_json(p.deviation)},
                    {"threshold", to_json(p.threshold)}};
        }
        json operator()(const IndexWitness& i) const {
            return {{"kind", "index"},
                    {"index", i.index},
                    {"average", to_json(i.average)},
                    {"bound", to_json(i.bound)},
                    {"side", i.below ? "low" : "high"}};
        }
        json operator()(const PrefixWitness& p) const {
            json j = {{"kind", "oracle_prefix"}, {"k", p.k}, {"prefix", p.prefix.str()}};
            j["family_level"] = p.level ? json(*p.level) : json(nullptr);
            return j;
        }
    } visitor;
    return std::visit(visitor, w);
}

}  // namespace

json to_json(const CheckpointSummary& summary) {
    json levels = json::array();
    for (int b = summary.first_level(); b <= summary.last_level(); ++b) {
        levels.push_back({{"level", b},
                          {"N", checkpoint_size(b)},
                          {"count", summary.count(b)},
                          {"average", to_json(summary.average(b))}});
    }
    return {{"first_level", summary.first_level()}, {"last_level", summary.last_level()}, {"checkpoints", levels}};
}

json to_json(const TestVerdict& verdict) {
    json j = {{"family", verdict.family},
              {"outcome", std::string(to_string(verdict.outcome))},
              {"resolution", verdict.resolution},
              {"exact_values", rational_map(verdict.exact_values)}};
    j["witness"] = verdict.witness ? witness_json(*verdict.witness) : json(nullptr);
    return j;
}

json to_json(const BitCertificate& c) {
    json j = {{"position", c.position},
              {"bit", c.bit},
              {"level", c.level},
              {"consulted_level", c.consulted_level},
              {"consulted_N", checkpoint_size(c.consulted_level)},
              {"average", to_json(c.average)},
              {"expansion", c.expansion.str()},
              {"run_region", c.run_region}};
    j["conflicting_level"] = c.conflicting_level ? json(*c.conflicting_level) : json(nullptr);
    return j;
}

json to_json(const ExtractionReport& report) {
    json certs = json::array();
    for (const auto& c : report.certificates) certs.push_back(to_json(c));
    json j = {{"functional", std::string(to_string(report.functional))},
              {"d", report.d},
              {"n_target", report.n_target},
              {"b_budget", report.b_budget},
              {"certified_bits", report.certificates.size()},
              {"certified_prefix", report.certified_prefix().str()},
              {"certificates", certs},
              {"highest_level_consulted", report.highest_level_consulted}};
    j["first_undecided"] = report.first_undecided ? json(*report.first_undecided) : json(nullptr);
    j["highest_checkpoint_consulted"] =
        report.highest_level_consulted > 0 ? json(checkpoint_size(report.highest_level_consulted)) : json(nullptr);
    return j;
}

json to_json(const DiagonalVerdict& v) {
    json j = {{"outcome", std::string(to_string(v.outcome))},
              {"family", v.family},
              {"prefix", v.prefix.str()},
              {"certified_bits", v.certified_bits},
              {"resolution", v.resolution}};
    j["k"] = v.k ? json(*v.k) : json(nullptr);
    j["family_level"] = v.family_level ? json(*v.family_level) : json(nullptr);
    return j;
}

json to_json(const MomentReport& r) {
    json j = {{"quantity", r.quantity}, {"n", r.n}, {"p", to_json(r.p)}, {"formula_value", to_json(r.formula_value)}};
    j["k"] = r.k ? json(*r.k) : json(nullptr);
    j["brute_force_value"] = r.brute_force_value ? to_json(*r.brute_force_value) : json(nullptr);
    j["bound_value"] = r.bound_value ? to_json(*r.bound_value) : json(nullptr);
    j["satisfied"] = r.satisfied ? json(*r.satisfied) : json(nullptr);
    return j;
}

json to_json(const MeasureEstimate& m) {
    json j = {{"method", m.method},
              {"test", m.test},
              {"p", m.p},
              {"resolution", m.resolution},
              {"bound", to_json(m.bound)},
              {"satisfied", m.satisfied}};
    if (m.value) {
        j["value"] = to_json(*m.value);
    } else {
        j["hits"] = m.hits;
        j["trials"] = m.trials;
        j["rate"] = to_json(Rational(mpz_class(static_cast<unsigned long>(m.hits)), mpz_class(static_cast<unsigned long>(m.trials))));
        j["seed"] = m.seed;
        j["prefix_len"] = m.prefix_len;
        j["ci"] = {{"method", m.ci_method}, {"low", m.ci_low}, {"high", m.ci_high}, {"halfwidth", m.ci_halfwidth}};
    }
    return j;
}

json to_json(const RunReport& report) {
    return {{"schema", kReportSchema},
            {"command", report.command},
            {"params", report.params},
            {"seeds", report.seeds},
            {"results", report.results},
            {"version", report.version}};
}

RunReport run_report_from_json(const json& j) {
    if (!j.is_object() || j.value("schema", "") != kReportSchema) {
        throw Error(ErrorCode::ParseError, "not a " + std::string(kReportSchema) + " document");
    }
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.params = j.at("params").get<std::map<std::string, std::string>>();
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.results = j.at("results");
    r.version = j.at("version").get<std::string>();
    return r;
}

namespace {

void flatten(const json& j, const std::string& path, std::ostringstream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
    } else if (j.is_array()) {
        if (j.empty()) out << path << " = []\n";
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        out << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

}  // namespace

std::string emit_report(const RunReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json(report).dump(2) + "\n";
    std::ostringstream out;
    flatten(to_json(report), "", out);
    return out.str();
}

}  // namespace hippoc

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hippoc/cli.hpp"
#include "hippoc/convert.hpp"
#include "hippoc/error.hpp"
#include "hippoc/extract.hpp"
#include "hippoc/pipeline.hpp"
#include "hippoc/randomness_tests.hpp"
#include "hippoc/report.hpp"
#include "hippoc/verify.hpp"

namespace py = pybind11;
using namespace hippoc;

namespace {

BitPrefix bits_of(const std::string& s) { return BitPrefix::from_string(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of hippoc; results are JSON strings decoded by the package.";

    py::register_exception<Error>(m, "HippocError");

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
    m.def("gen_bernoulli", [](const std::string& p, std::uint64_t n, std::uint64_t seed) {
        return gen_bernoulli(RealParam::parse(p), n, seed).to_string();
    });
    m.def("gen_adversarial", [](const std::string& name, std::uint64_t n, const std::string& p0, const std::string& p1) {
        return gen_adversarial({name, Rational::parse(p0), Rational::parse(p1)}, n).to_string();
    }, py::arg("name"), py::arg("n"), py::arg("p0") = "0", py::arg("p1") = "1");
    m.def("oracle_test", [](const std::string& y, const std::string& p, int d, int b_max) {
        return to_json(oracle_test(bits_of(y), RealParam::parse(p), d, b_max)).dump();
    });
    m.def("cauchy_test", [](const std::string& y, int d, int b_max) { return to_json(cauchy_test(bits_of(y), d, b_max)).dump(); });
    m.def("slln_test", [](const std::string& y, const std::string& q1, const std::string& q2, std::uint64_t N, std::uint64_t n_max) {
        return to_json(slln_test(bits_of(y), Rational::parse(q1), Rational::parse(q2), N, n_max)).dump();
    });
    m.def("slln_bound", [](const std::string& p, const std::string& q1, const std::string& q2, std::uint64_t N) {
        return slln_bound(Rational::parse(p), Rational::parse(q1), Rational::parse(q2), N).str();
    });
    m.def("extract_prefix", [](const std::string& y, int d, std::size_t n_target, int budget, const std::string& functional) {
        return to_json(extract_prefix(bits_of(y), d, n_target, budget, parse_functional(functional))).dump();
    });
    m.def("diagonal_test", [](const std::string& y, int n, std::size_t k_max, int resolution) {
        return to_json(diagonal_test(bits_of(y), TruncatedUFamily{}, n, k_max, resolution)).dump();
    });
    m.def("moment_s4", [](std::uint64_t n, const std::string& p) { return to_json(moment_s4(n, Rational::parse(p))).dump(); });
    m.def("exact_union_measure", [](const std::string& p, int d, int b_max) {
        return to_json(exact_union_measure(Rational::parse(p), d, b_max)).dump();
    });
}

#pragma once

#include <cstddef>
#include <optional>

#include "hippoc/bitstream.hpp"
#include "hippoc/report.hpp"

namespace hippoc {

struct PipelineOptions {
    int b_budget = 8;
    std::size_t n_target = 16;
    /// Highest Cauchy level tried; defaults to b_budget.
    std::optional<int> d_limit;
};

/// Find the first level d at which the Cauchy test passes (b_max = budget+1),
/// then extract digits with theta at that level. For a Bernoulli source with
/// an exact p, also run the oracle and strong-law tests and compare the
/// certified digits with the true ones. Throws NoPassingLevel when no level
/// up to the limit passes.
RunReport run_pipeline(const SourceSpec& source, const PipelineOptions& options);

/// The same, on an already materialized stream; `known_p` enables the cross-checks.
json pipeline_result(const BitPrefix& y, const std::optional<Rational>& known_p, const PipelineOptions& options);

}  // namespace hippoc

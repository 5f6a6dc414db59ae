#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spingp/config.hpp"

namespace spingp {

struct RunResult {
    bool passed = true;
    std::string report_json;           // summary report (also written to disk)
    std::vector<std::string> files;    // artifacts written
};

/// Dispatches the configured scenario, writing CSV/JSON/SVG artifacts into
/// cfg.out_dir. Deterministic given the seed. Failures carry scenario
/// context; partial results already written stay on disk.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Executable property suites (lemma31, lemma32, lemma33, lemma41, lemma51).
/// The report lists every case with measured residuals/constants; `passed`
/// is false on any residual breach.
RunResult run_suite(const std::string& suite, std::uint64_t seed = 1,
                    const std::string& out_dir = "");

}  // namespace spingp

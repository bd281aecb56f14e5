#pragma once

// Experiment orchestration: run configurations, reproducible run
// artifacts, report emission, and the command-line entry point.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/domain.hpp"
#include "fpp/vec.hpp"

namespace fpp {

// A run that is well formed but mathematically infeasible (for example the
// flow constant vanishes in the requested regime); the CLI maps this to
// exit code 3 rather than 2.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string kind;  // flow-sample | estimate-nu | phi-tilde |
                       // cutset-verify | ldp-rate | sum-tail
    std::string domain_preset = "unit-box";  // or "inline"
    std::size_t d = 2;
    std::string domain_json;  // used when domain_preset == "inline"
    CapacityLaw law = CapacityLaw::exponential(1.0);
    std::vector<int> meshes = {8};
    std::size_t trials = 100;
    // Shared experiment constants; each kind reads the ones it needs.
    double zeta = 4.0, h = 0.25, eta = 0.25, l = 0.9, eps = 0.1;
    double s = 400.0, lambda = 1.0, theta = 0.0;
    double alpha = 1.0, beta = 2.0;  // sum-tail
    std::size_t npow = 100;          // sum-tail: the n^{d-1} scale
    std::vector<Vec> directions;     // estimate-nu; axis directions when empty
    std::string nu_table_path;       // phi-tilde input table
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "runs";

    ContinuousDomain domain() const;
    void validate() const;  // throws std::invalid_argument naming the violation
    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
    static RunConfig load(const std::string& path);
    std::string hash() const;  // 16 hex chars over the canonical JSON
};

struct RunArtifact {
    std::string config_json;
    std::string config_hash;
    std::string started, finished;  // wall clock; kept out of to_json()
    std::string environment;        // toolchain fingerprint
    std::string outputs_json;       // per-operation outputs
    std::vector<std::string> verdicts;

    std::string to_json() const;  // timestamp-free, byte-reproducible
    static RunArtifact from_json(const std::string& text);
};

// Dispatches the configured experiment. Module errors surface as
// std::invalid_argument prefixed with the module name; infeasible regimes
// raise InfeasibleError.
RunArtifact run(const RunConfig& config);

struct ReportFile {
    std::string name, contents;
};

// Deterministic report set: summary.txt plus experiment CSV/JSON files.
// Identical artifacts produce byte-identical reports.
std::vector<ReportFile> report(const RunArtifact& artifact);

// Writes config.json, artifact.json, timestamps.json, and the reports into
// out_dir/run-<hash>; returns the directory path.
std::string write_run(const RunConfig& config, const RunArtifact& artifact);

// Command-line entry point (shared with the tests): 0 = success,
// 2 = precondition violation, 3 = infeasibility.
int cli_main(const std::vector<std::string>& args);

}  // namespace fpp

#pragma once

// Named verification experiments.  Each experiment runs a fixed scenario with
// tolerances pinned in code, returns one CheckRow per assertion (tagged with
// the acceptance-criterion number it belongs to, 0 for auxiliary
// diagnostics), and optionally writes CSV/snapshot artifacts.

#include <filesystem>
#include <string>
#include <vector>

#include "cmclab/config.hpp"

namespace cmclab {

struct RunOptions {
    std::filesystem::path out_dir;  // artifact directory (may be empty)
    int grid_l_max = 0;             // 0 = per-experiment default
    bool write_csv = false;         // emit CSV tables for named experiments
};

struct CheckRow {
    int criterion = 0;  // acceptance criterion 1..11, 0 = auxiliary
    std::string label;
    bool pass = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ExperimentResult {
    std::string name;
    std::vector<CheckRow> checks;
    double elapsed_seconds = 0.0;
    std::vector<std::filesystem::path> artifacts;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// The closed registry of experiment names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

ExperimentResult run_experiment(const std::string& name, const Config& cfg,
                                const RunOptions& opt);

}  // namespace cmclab

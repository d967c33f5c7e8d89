// Acceptance gate: runs every named experiment and prints one verdict line
// per numbered criterion (plus one for the auxiliary checks).  Exits nonzero
// if anything fails.

#include <fmt/format.h>

#include <map>
#include <string>
#include <vector>

#include "cmclab/config.hpp"
#include "cmclab/experiments.hpp"

int main() {
    using namespace cmclab;

    static const std::map<int, std::string> titles = {
        {1, "boundary jets of the symmetric slices match the closed forms"},
        {2, "scalar curvature of the symmetric slices"},
        {3, "cubic coefficient of the normalized boundary profile"},
        {4, "exact hyperboloids pass through the geometry engine"},
        {5, "cubic mean-curvature drift of jet barriers"},
        {6, "compatibility residual on degree <= 1 boundary data"},
        {7, "decay rates of the trace-free curvature"},
        {8, "deviation decay from the reference hyperboloid"},
        {9, "boundary slope of the horizon-crossing slice"},
        {10, "frame pairings on approach to the horizon"},
        {11, "identity suite: series, traces, rotations, round-trips"},
    };

    const Config cfg;
    RunOptions opt;  // defaults: no artifacts, built-in grids

    std::map<int, std::vector<CheckRow>> by_criterion;
    double total = 0.0;
    bool run_error = false;

    for (const auto& name : experiment_names()) {
        if (name == "custom") continue;  // config-driven, not a criterion
        try {
            const ExperimentResult res = run_experiment(name, cfg, opt);
            total += res.elapsed_seconds;
            fmt::print("ran {:<18} ({:5.1f} s, {} checks)\n", res.name,
                       res.elapsed_seconds, res.checks.size());
            for (const auto& row : res.checks)
                by_criterion[row.criterion].push_back(row);
        } catch (const std::exception& e) {
            fmt::print("experiment {} raised: {}\n", name, e.what());
            run_error = true;
        }
    }
    fmt::print("total runtime {:.1f} s\n\n", total);

    int failures = run_error ? 1 : 0;
    for (const auto& [criterion, title] : titles) {
        const auto it = by_criterion.find(criterion);
        if (it == by_criterion.end()) {
            fmt::print("[FAIL] criterion {:2d}: {} (no checks ran)\n",
                       criterion, title);
            ++failures;
            continue;
        }
        int bad = 0;
        for (const auto& row : it->second)
            if (!row.pass) ++bad;
        fmt::print("[{}] criterion {:2d}: {} ({} checks)\n",
                   bad == 0 ? "PASS" : "FAIL", criterion, title,
                   it->second.size());
        for (const auto& row : it->second)
            if (!row.pass) {
                fmt::print("       failed: {} (value {:.6g}, threshold "
                           "{:.6g}{}{})\n",
                           row.label, row.value, row.threshold,
                           row.detail.empty() ? "" : "; ", row.detail);
                ++failures;
            }
    }

    int aux_bad = 0;
    const auto aux = by_criterion.find(0);
    if (aux != by_criterion.end()) {
        for (const auto& row : aux->second)
            if (!row.pass) ++aux_bad;
        fmt::print("[{}] auxiliary checks ({} checks)\n",
                   aux_bad == 0 ? "PASS" : "FAIL", aux->second.size());
        for (const auto& row : aux->second)
            if (!row.pass)
                fmt::print("       failed: {} (value {:.6g}, threshold "
                           "{:.6g})\n",
                           row.label, row.value, row.threshold);
        failures += aux_bad;
    }

    return failures == 0 ? 0 : 1;
}

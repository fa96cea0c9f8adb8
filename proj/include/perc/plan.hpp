#ifndef PERC_PLAN_HPP
#define PERC_PLAN_HPP

#include <map>

#include "perc/experiments.hpp"

namespace perc {

// A reproducible run plan: base configuration, experiment selection, and
// per-experiment overrides. Unknown keys are rejected.
struct RunPlan {
    RunConfig base;
    std::vector<std::string> experiments;  // registry order when "all"
    std::map<std::string, std::map<std::string, std::string>> overrides;
    std::string outdir = "out";
    bool snapshots = false;
};

// parse, collecting every error rather than stopping at the first
RunPlan parse_plan(const std::string& path);
RunPlan parse_plan_text(const std::string& text);

// CSV of all result rows, with a versioned header
std::string results_csv(const std::vector<ExperimentResult>& results);
std::string results_summary(const std::vector<ExperimentResult>& results);

// run everything, write results.csv / summary.txt / optional snapshots;
// returns 0 if every verdict passed, 1 if any failed, 2 on execution errors
int execute(const RunPlan& plan);

// executed results without touching the filesystem (testing hook)
std::vector<ExperimentResult> execute_plan_results(const RunPlan& plan);

std::string list_registry();

}  // namespace perc

#endif

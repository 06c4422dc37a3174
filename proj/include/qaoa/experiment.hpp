#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qaoa/graph.hpp"
#include "qaoa/optimize.hpp"
#include "qaoa/shots.hpp"

namespace qaoa {

// One optimization method entry in an experiment: which optimizer/estimator
// pair to run, at which precisions, under which label in the outputs. Exact
// mode replaces every stochastic estimate by the emulator value at zero cost.
struct MethodSpec {
    PrecisionConfig precision;
    bool exact = false;
    std::string label;

    static MethodSpec with_defaults(Method method);
};

struct ExperimentConfig {
    int num_nodes = 10;
    std::vector<int> depths = {1};
    int num_instances = 1;  // graphs drawn
    int num_runs = 1;       // restarts per (instance, depth)
    std::vector<MethodSpec> methods;
    std::uint64_t master_seed = 1;
    StoppingConfig stopping;  // nm threshold and bfgs delta are set per method
};

// Trace entry annotated with the emulator-exact value and ratio at its point.
struct TracePoint {
    int eval_index = 0;
    int iteration = 0;
    std::string event;
    std::vector<double> params;
    double estimate = 0.0;
    std::uint64_t cum_repetitions = 0;
    double exact_value = 0.0;
    double ratio = 0.0;
};

struct RunRecord {
    int instance_id = 0;
    std::string method_label;
    std::string method_tag;
    int depth = 0;
    int run = 0;
    bool exact_mode = false;
    double epsilon = 0.0;
    double delta = 0.0;
    double epsilon_ag = 0.0;
    double max_value = 0.0;
    double final_estimate = 0.0;  // optimizer's best stochastic estimate
    double final_exact = 0.0;     // emulator value at the returned point
    double final_ratio = 0.0;
    double best_exact = 0.0;  // best emulator value over the trace
    double best_ratio = 0.0;
    std::uint64_t objective_repetitions = 0;
    std::uint64_t fd_gradient_repetitions = 0;
    std::uint64_t ag_gradient_repetitions = 0;
    std::uint64_t total_repetitions = 0;
    std::string stop_reason;
    std::vector<TracePoint> trace;
};

struct ExperimentResult {
    std::vector<MaxCutInstance> instances;
    std::vector<RunRecord> runs;
};

// Aggregate over one (method label, precisions, depth) group: statistics of
// the per-instance best ratios (each the maximum over that instance's runs)
// and the repetition cost of producing them.
struct SummaryRow {
    std::string method_label;
    double epsilon = 0.0;
    double delta = 0.0;
    double epsilon_ag = 0.0;
    int depth = 0;
    int num_instances = 0;
    double avg_best_ratio = 0.0;
    double stddev_best_ratio = 0.0;  // population convention
    double median_best_ratio = 0.0;
    std::uint64_t total_cost = 0;
    double mean_cost = 0.0;  // total divided by the group's run count
};

double compute_ratio(double value, double max_value);

// The instance pool of an experiment: graph i is drawn from a seed derived
// from the master seed and i, so pools regenerate identically.
std::vector<MaxCutInstance> draw_instances(int num_nodes, int count, std::uint64_t master_seed);

// Runs every (instance, depth, run, method) cell. Instances are drawn from
// seeds derived from the master seed; all methods of a cell share the same
// start point and simplex; estimator noise streams are keyed by the method
// label so methods never perturb each other.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs);

// Serialized forms used by the writers, the command-line tool, and the tests.
std::string run_record_to_json_line(const RunRecord& record);
RunRecord run_record_from_json_line(const std::string& line);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

// Cost-quality envelope of one (instance, method, depth) group: all runs'
// trace points merged, sorted by cumulative repetitions, ratio accumulated as
// a running maximum.
struct CurvePoint {
    std::uint64_t cum_repetitions = 0;
    double best_ratio = 0.0;
};

std::vector<CurvePoint> cost_curve(const std::vector<const RunRecord*>& group);

// Writes one p<depth>/<NNNN>_<label>.csv per (depth, instance, method) group
// under the given directory. Returns the number of files written.
int write_cost_curves(const std::vector<RunRecord>& runs, const std::string& curves_dir);

// Writes instances/NNNN.json, runs.jsonl, summary.csv, and
// curves/p<depth>/<NNNN>_<label>.csv under the output directory.
void write_outputs(const ExperimentResult& result, const std::string& output_dir);

}  // namespace qaoa

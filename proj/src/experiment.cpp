#include "qaoa/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "qaoa/circuits.hpp"

namespace qaoa {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal form, shared by every text output.
std::string number(double value) { return nlohmann::json(value).dump(); }

std::string zero_padded(int value) {
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "%04d", value);
    return buffer;
}

void validate_label(const std::string& label) {
    if (label.empty()) throw std::invalid_argument("empty method label");
    for (char c : label) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok) throw std::invalid_argument("method label must be filename-safe: " + label);
    }
}

struct GroupKey {
    std::string label;
    double epsilon;
    double delta;
    double epsilon_ag;
    int depth;

    bool operator==(const GroupKey& other) const {
        return label == other.label && epsilon == other.epsilon && delta == other.delta &&
               epsilon_ag == other.epsilon_ag && depth == other.depth;
    }
};

GroupKey key_of(const RunRecord& record) {
    return {record.method_label, record.epsilon, record.delta, record.epsilon_ag, record.depth};
}

}  // namespace

MethodSpec MethodSpec::with_defaults(Method method) {
    MethodSpec spec;
    spec.precision.method = method;
    spec.label = method_tag(method);
    return spec;
}

double compute_ratio(double value, double max_value) {
    if (!(max_value > 0.0)) throw std::invalid_argument("maximum must be positive");
    return value / max_value;
}

std::vector<MaxCutInstance> draw_instances(int num_nodes, int count, std::uint64_t master_seed) {
    std::vector<MaxCutInstance> instances;
    instances.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed =
            derive_seed(master_seed, {hash_label("instance"), static_cast<std::uint64_t>(i)});
        MaxCutInstance instance = generate_random_3regular(num_nodes, seed);
        instance.instance_id = i;
        instances.push_back(std::move(instance));
    }
    return instances;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.num_instances < 1) throw std::invalid_argument("need at least one instance");
    if (config.num_runs < 1) throw std::invalid_argument("need at least one run");
    if (config.depths.empty()) throw std::invalid_argument("need at least one depth");
    for (int depth : config.depths)
        if (depth < 1) throw std::invalid_argument("depths must be positive");
    if (config.methods.empty()) throw std::invalid_argument("need at least one method");
    for (std::size_t a = 0; a < config.methods.size(); ++a) {
        validate_label(config.methods[a].label);
        for (std::size_t b = a + 1; b < config.methods.size(); ++b)
            if (config.methods[a].label == config.methods[b].label)
                throw std::invalid_argument("duplicate method label: " + config.methods[a].label);
    }

    ExperimentResult result;
    result.instances = draw_instances(config.num_nodes, config.num_instances, config.master_seed);
    std::vector<Problem> problems;
    problems.reserve(result.instances.size());
    for (const MaxCutInstance& instance : result.instances) problems.emplace_back(instance);

    for (int i = 0; i < config.num_instances; ++i) {
        const Problem& problem = problems[static_cast<std::size_t>(i)];
        for (int depth : config.depths) {
            for (int run = 0; run < config.num_runs; ++run) {
                const std::uint64_t init_seed = derive_seed(
                    config.master_seed, {hash_label("init"), static_cast<std::uint64_t>(i),
                                         static_cast<std::uint64_t>(depth),
                                         static_cast<std::uint64_t>(run)});
                Rng init_rng(init_seed);
                const InitialConditions init = initial_points(depth, init_rng);

                for (const MethodSpec& spec : config.methods) {
                    const std::uint64_t noise_seed = derive_seed(
                        config.master_seed,
                        {hash_label("noise"), hash_label(spec.label),
                         static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(depth),
                         static_cast<std::uint64_t>(run)});
                    Rng rng(noise_seed);
                    CostLedger ledger;

                    StoppingConfig stopping = config.stopping;
                    const PrecisionConfig& precision = spec.precision;
                    OptimResult opt;
                    switch (precision.method) {
                        case Method::NelderMead: {
                            stopping.nm_improvement_threshold = precision.epsilon / 2.0;
                            const EstimateFn estimate =
                                spec.exact
                                    ? EstimateFn([&](const std::vector<double>& x) {
                                          return objective(problem, ParameterVector(x));
                                      })
                                    : EstimateFn([&](const std::vector<double>& x) {
                                          return estimate_objective(problem, ParameterVector(x),
                                                                    precision.epsilon, ledger, rng);
                                      });
                            opt = nelder_mead_maximize(estimate, init.simplex, stopping, &ledger);
                            break;
                        }
                        case Method::FiniteDifference:
                        case Method::AnalyticCircuit: {
                            const bool fd = precision.method == Method::FiniteDifference;
                            stopping.bfgs_delta = fd ? precision.delta : 0.0;
                            const EstimateFn estimate =
                                spec.exact
                                    ? EstimateFn([&](const std::vector<double>& x) {
                                          return objective(problem, ParameterVector(x));
                                      })
                                    : EstimateFn([&](const std::vector<double>& x) {
                                          return estimate_objective(problem, ParameterVector(x),
                                                                    precision.epsilon, ledger, rng);
                                      });
                            GradientFn gradient;
                            if (spec.exact && fd) {
                                gradient = [&](const std::vector<double>& x) {
                                    return finite_difference_gradient(
                                        [&](const ParameterVector& p) {
                                            return objective(problem, p);
                                        },
                                        ParameterVector(x), precision.delta);
                                };
                            } else if (spec.exact) {
                                // The interference circuits reproduce the adjoint
                                // gradient exactly, so the cheap form stands in.
                                gradient = [&](const std::vector<double>& x) {
                                    return analytic_gradient(problem, ParameterVector(x));
                                };
                            } else if (fd) {
                                gradient = [&](const std::vector<double>& x) {
                                    return estimate_fd_gradient(problem, ParameterVector(x),
                                                                precision, ledger, rng);
                                };
                            } else {
                                gradient = [&](const std::vector<double>& x) {
                                    return estimate_ag_gradient(problem, ParameterVector(x),
                                                                precision, ledger, rng);
                                };
                            }
                            opt = bfgs_maximize(estimate, gradient, init.start, stopping, &ledger);
                            break;
                        }
                    }

                    RunRecord record;
                    record.instance_id = i;
                    record.method_label = spec.label;
                    record.method_tag = method_tag(precision.method);
                    record.depth = depth;
                    record.run = run;
                    record.exact_mode = spec.exact;
                    record.epsilon = precision.epsilon;
                    record.delta = precision.delta;
                    record.epsilon_ag = precision.epsilon_ag;
                    record.max_value = problem.max_value;
                    record.final_estimate = opt.best_estimate;
                    record.final_exact = objective(problem, ParameterVector(opt.best_point));
                    record.final_ratio = compute_ratio(record.final_exact, problem.max_value);
                    record.objective_repetitions = ledger.objective();
                    record.fd_gradient_repetitions = ledger.fd_gradient();
                    record.ag_gradient_repetitions = ledger.ag_gradient();
                    record.total_repetitions = ledger.total();
                    record.stop_reason = stop_reason_tag(opt.trace.stop_reason);

                    record.best_exact = record.final_exact;
                    record.best_ratio = record.final_ratio;
                    record.trace.reserve(opt.trace.entries.size());
                    for (const TraceEntry& entry : opt.trace.entries) {
                        TracePoint point;
                        point.eval_index = entry.eval_index;
                        point.iteration = entry.iteration;
                        point.event = trace_event_tag(entry.event);
                        point.params = entry.params;
                        point.estimate = entry.estimate;
                        point.cum_repetitions = entry.cum_repetitions;
                        point.exact_value = objective(problem, ParameterVector(entry.params));
                        point.ratio = compute_ratio(point.exact_value, problem.max_value);
                        if (point.exact_value > record.best_exact) {
                            record.best_exact = point.exact_value;
                            record.best_ratio = point.ratio;
                        }
                        record.trace.push_back(std::move(point));
                    }

                    result.runs.push_back(std::move(record));
                }
            }
        }
    }
    return result;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs) {
    std::vector<GroupKey> keys;
    for (const RunRecord& record : runs) {
        const GroupKey key = key_of(record);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }

    std::vector<SummaryRow> rows;
    rows.reserve(keys.size());
    for (const GroupKey& key : keys) {
        std::map<int, double> best_by_instance;
        std::uint64_t total_cost = 0;
        std::uint64_t run_count = 0;
        for (const RunRecord& record : runs) {
            if (!(key_of(record) == key)) continue;
            auto [it, inserted] = best_by_instance.try_emplace(record.instance_id,
                                                               record.best_ratio);
            if (!inserted) it->second = std::max(it->second, record.best_ratio);
            total_cost += record.total_repetitions;
            ++run_count;
        }

        std::vector<double> values;
        values.reserve(best_by_instance.size());
        for (const auto& [instance_id, value] : best_by_instance) values.push_back(value);

        const double n = static_cast<double>(values.size());
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= n;
        double variance = 0.0;
        for (double v : values) variance += (v - mean) * (v - mean);
        variance /= n;

        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        const std::size_t half = sorted.size() / 2;
        const double median = sorted.size() % 2 == 1
                                  ? sorted[half]
                                  : 0.5 * (sorted[half - 1] + sorted[half]);

        SummaryRow row;
        row.method_label = key.label;
        row.epsilon = key.epsilon;
        row.delta = key.delta;
        row.epsilon_ag = key.epsilon_ag;
        row.depth = key.depth;
        row.num_instances = static_cast<int>(values.size());
        row.avg_best_ratio = mean;
        row.stddev_best_ratio = std::sqrt(variance);
        row.median_best_ratio = median;
        row.total_cost = total_cost;
        row.mean_cost = static_cast<double>(total_cost) / static_cast<double>(run_count);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string run_record_to_json_line(const RunRecord& record) {
    ordered_json j;
    j["instance"] = record.instance_id;
    j["method"] = record.method_label;
    j["method_tag"] = record.method_tag;
    j["depth"] = record.depth;
    j["run"] = record.run;
    j["exact"] = record.exact_mode;
    j["epsilon"] = record.epsilon;
    j["delta"] = record.delta;
    j["epsilon_ag"] = record.epsilon_ag;
    j["max_value"] = record.max_value;
    j["final_estimate"] = record.final_estimate;
    j["final_exact"] = record.final_exact;
    j["final_ratio"] = record.final_ratio;
    j["best_exact"] = record.best_exact;
    j["best_ratio"] = record.best_ratio;
    j["repetitions"] = ordered_json{{"objective", record.objective_repetitions},
                                    {"fd_gradient", record.fd_gradient_repetitions},
                                    {"ag_gradient", record.ag_gradient_repetitions},
                                    {"total", record.total_repetitions}};
    j["stop_reason"] = record.stop_reason;
    ordered_json trace = ordered_json::array();
    for (const TracePoint& point : record.trace) {
        ordered_json entry;
        entry["eval"] = point.eval_index;
        entry["iter"] = point.iteration;
        entry["event"] = point.event;
        entry["params"] = point.params;
        entry["estimate"] = point.estimate;
        entry["cum_repetitions"] = point.cum_repetitions;
        entry["exact"] = point.exact_value;
        entry["ratio"] = point.ratio;
        trace.push_back(std::move(entry));
    }
    j["trace"] = std::move(trace);
    return j.dump();
}

RunRecord run_record_from_json_line(const std::string& line) {
    const ordered_json j = ordered_json::parse(line);
    RunRecord record;
    record.instance_id = j.at("instance").get<int>();
    record.method_label = j.at("method").get<std::string>();
    record.method_tag = j.at("method_tag").get<std::string>();
    record.depth = j.at("depth").get<int>();
    record.run = j.at("run").get<int>();
    record.exact_mode = j.at("exact").get<bool>();
    record.epsilon = j.at("epsilon").get<double>();
    record.delta = j.at("delta").get<double>();
    record.epsilon_ag = j.at("epsilon_ag").get<double>();
    record.max_value = j.at("max_value").get<double>();
    record.final_estimate = j.at("final_estimate").get<double>();
    record.final_exact = j.at("final_exact").get<double>();
    record.final_ratio = j.at("final_ratio").get<double>();
    record.best_exact = j.at("best_exact").get<double>();
    record.best_ratio = j.at("best_ratio").get<double>();
    const ordered_json& reps = j.at("repetitions");
    record.objective_repetitions = reps.at("objective").get<std::uint64_t>();
    record.fd_gradient_repetitions = reps.at("fd_gradient").get<std::uint64_t>();
    record.ag_gradient_repetitions = reps.at("ag_gradient").get<std::uint64_t>();
    record.total_repetitions = reps.at("total").get<std::uint64_t>();
    record.stop_reason = j.at("stop_reason").get<std::string>();
    for (const ordered_json& entry : j.at("trace")) {
        TracePoint point;
        point.eval_index = entry.at("eval").get<int>();
        point.iteration = entry.at("iter").get<int>();
        point.event = entry.at("event").get<std::string>();
        point.params = entry.at("params").get<std::vector<double>>();
        point.estimate = entry.at("estimate").get<double>();
        point.cum_repetitions = entry.at("cum_repetitions").get<std::uint64_t>();
        point.exact_value = entry.at("exact").get<double>();
        point.ratio = entry.at("ratio").get<double>();
        record.trace.push_back(std::move(point));
    }
    return record;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "method,epsilon,delta,epsilon_ag,depth,avg,stddev,median,total_cost,mean_cost\n";
    for (const SummaryRow& row : rows) {
        out += row.method_label;
        out += ',' + number(row.epsilon);
        out += ',' + number(row.delta);
        out += ',' + number(row.epsilon_ag);
        out += ',' + std::to_string(row.depth);
        out += ',' + number(row.avg_best_ratio);
        out += ',' + number(row.stddev_best_ratio);
        out += ',' + number(row.median_best_ratio);
        out += ',' + std::to_string(row.total_cost);
        out += ',' + number(row.mean_cost);
        out += '\n';
    }
    return out;
}

std::vector<CurvePoint> cost_curve(const std::vector<const RunRecord*>& group) {
    std::vector<CurvePoint> points;
    for (const RunRecord* record : group) {
        double best = -std::numeric_limits<double>::infinity();
        for (const TracePoint& point : record->trace) {
            best = std::max(best, point.ratio);
            points.push_back({point.cum_repetitions, best});
        }
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const CurvePoint& a, const CurvePoint& b) {
                         return a.cum_repetitions < b.cum_repetitions;
                     });

    std::vector<CurvePoint> curve;
    double running = -std::numeric_limits<double>::infinity();
    for (const CurvePoint& point : points) {
        running = std::max(running, point.best_ratio);
        if (!curve.empty() && curve.back().cum_repetitions == point.cum_repetitions)
            curve.back().best_ratio = running;
        else
            curve.push_back({point.cum_repetitions, running});
    }
    return curve;
}

int write_cost_curves(const std::vector<RunRecord>& runs, const std::string& curves_dir) {
    namespace fs = std::filesystem;
    struct CurveKey {
        int depth;
        int instance;
        std::string label;
        bool operator==(const CurveKey& other) const {
            return depth == other.depth && instance == other.instance && label == other.label;
        }
    };
    std::vector<CurveKey> keys;
    for (const RunRecord& record : runs) {
        const CurveKey key{record.depth, record.instance_id, record.method_label};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const CurveKey& key : keys) {
        std::vector<const RunRecord*> group;
        for (const RunRecord& record : runs)
            if (record.depth == key.depth && record.instance_id == key.instance &&
                record.method_label == key.label)
                group.push_back(&record);
        const auto curve = cost_curve(group);

        const fs::path dir = fs::path(curves_dir) / ("p" + std::to_string(key.depth));
        fs::create_directories(dir);
        std::ofstream out(dir / (zero_padded(key.instance) + "_" + key.label + ".csv"),
                          std::ios::binary);
        if (!out) throw std::runtime_error("cannot write cost curve");
        out << "cum_repetitions,best_ratio\n";
        for (const CurvePoint& point : curve)
            out << point.cum_repetitions << ',' << number(point.best_ratio) << '\n';
    }
    return static_cast<int>(keys.size());
}

void write_outputs(const ExperimentResult& result, const std::string& output_dir) {
    namespace fs = std::filesystem;
    if (output_dir.empty()) throw std::invalid_argument("empty output directory");
    const fs::path root(output_dir);
    fs::create_directories(root / "instances");

    for (const MaxCutInstance& instance : result.instances)
        write_instance_file(instance, (root / "instances" / (zero_padded(instance.instance_id) + ".json")).string());

    {
        std::ofstream out(root / "runs.jsonl", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write runs.jsonl");
        for (const RunRecord& record : result.runs) out << run_record_to_json_line(record) << '\n';
    }

    {
        std::ofstream out(root / "summary.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write summary.csv");
        out << summary_to_csv(summarize(result.runs));
    }

    write_cost_curves(result.runs, (root / "curves").string());
}

}  // namespace qaoa

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qaoa/rng.hpp"
#include "qaoa/shots.hpp"

namespace qaoa {

enum class StopReason {
    NmPlateau,        // best vertex unchanged for dim * alpha updates
    NmMaxUpdates,     // simplex update budget exhausted
    GradientFloor,    // gradient norm under sqrt(dim) * max(scale, delta^2)
    ImprovementFloor, // consecutive line searches improved too little
    MaxLineSearches,  // line search budget exhausted
};

std::string stop_reason_tag(StopReason reason);

enum class TraceEvent { VertexUpdate, LineSearchStart, LineSearchEnd, Stop };

std::string trace_event_tag(TraceEvent event);

struct TraceEntry {
    int eval_index = 0;   // estimator calls so far
    int iteration = 0;    // simplex updates or line searches completed
    TraceEvent event = TraceEvent::VertexUpdate;
    std::vector<double> params;
    double estimate = 0.0;
    std::uint64_t cum_repetitions = 0;
};

// Event log of one optimization run. Ends with exactly one Stop entry placed
// at the best point seen.
struct OptimizerTrace {
    std::vector<TraceEntry> entries;
    StopReason stop_reason = StopReason::MaxLineSearches;
};

struct StoppingConfig {
    // Simplex rules: stop after dim * alpha updates without a new best vertex,
    // where alpha drops to the halved value once a best-vertex improvement
    // falls below the threshold (0 disables halving). Hard cap on updates.
    int nm_alpha = 20;
    int nm_alpha_halved = 10;
    double nm_improvement_threshold = 0.0;
    int nm_max_updates = 8000;

    // Gradient rules: stop when the gradient two-norm falls below
    // sqrt(dim) * max(gradient_floor_scale, delta^2); stop when a line search
    // improves the running value by less than improvement_tol after at least
    // min_directions searches (0 means the dimension); hard cap on searches.
    double bfgs_gradient_floor_scale = 1e-3;
    double bfgs_delta = 0.0;
    double bfgs_improvement_tol = 1e-4;
    int bfgs_min_directions = 0;
    int bfgs_max_line_searches = 300;

    // Backtracking line search.
    double armijo_c1 = 1e-4;
    double backtrack_factor = 0.5;
    double initial_step = 1.0;
    int max_backtracks = 40;
};

struct OptimResult {
    std::vector<double> best_point;
    double best_estimate = 0.0;
    OptimizerTrace trace;
};

using EstimateFn = std::function<double(const std::vector<double>&)>;
using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

// Maximizes with reflection 1, expansion 2, contraction 0.5, shrink 0.5.
// Every vertex is estimated exactly once; stored values are never refreshed.
// The ledger, when given, is only read to timestamp trace entries.
OptimResult nelder_mead_maximize(const EstimateFn& estimate,
                                 const std::vector<std::vector<double>>& initial_simplex,
                                 const StoppingConfig& config,
                                 const CostLedger* ledger = nullptr);

// Maximizes with an identity-initialized inverse Hessian, Armijo backtracking
// from unit step, and curvature-guarded updates (skipped when s.y <= 0).
OptimResult bfgs_maximize(const EstimateFn& estimate, const GradientFn& gradient,
                          const std::vector<double>& start, const StoppingConfig& config,
                          const CostLedger* ledger = nullptr);

// Start point plus the extra simplex vertices for a depth-p run: phase angles
// uniform on [0, 2 pi), mixing angles uniform on [0, pi), interleaved.
// simplex[0] is the start, followed by 2p independent draws.
struct InitialConditions {
    std::vector<double> start;
    std::vector<std::vector<double>> simplex;
};

InitialConditions initial_points(int depth, Rng& rng);

}  // namespace qaoa

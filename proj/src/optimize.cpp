#include "qaoa/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qaoa {

std::string stop_reason_tag(StopReason reason) {
    switch (reason) {
        case StopReason::NmPlateau: return "nm_plateau";
        case StopReason::NmMaxUpdates: return "nm_max_updates";
        case StopReason::GradientFloor: return "gradient_floor";
        case StopReason::ImprovementFloor: return "improvement_floor";
        case StopReason::MaxLineSearches: return "max_line_searches";
    }
    throw std::logic_error("unknown stop reason");
}

std::string trace_event_tag(TraceEvent event) {
    switch (event) {
        case TraceEvent::VertexUpdate: return "vertex_update";
        case TraceEvent::LineSearchStart: return "line_search_start";
        case TraceEvent::LineSearchEnd: return "line_search_end";
        case TraceEvent::Stop: return "stop";
    }
    throw std::logic_error("unknown trace event");
}

namespace {

std::uint64_t ledger_total(const CostLedger* ledger) {
    return ledger != nullptr ? ledger->total() : 0;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

struct Vertex {
    std::vector<double> point;
    double value = 0.0;
};

}  // namespace

OptimResult nelder_mead_maximize(const EstimateFn& estimate,
                                 const std::vector<std::vector<double>>& initial_simplex,
                                 const StoppingConfig& config,
                                 const CostLedger* ledger) {
    if (initial_simplex.empty()) throw std::invalid_argument("empty initial simplex");
    const std::size_t dim = initial_simplex.front().size();
    if (dim == 0) throw std::invalid_argument("zero-dimensional simplex");
    if (initial_simplex.size() != dim + 1)
        throw std::invalid_argument("simplex needs dimension + 1 vertices");
    for (const auto& point : initial_simplex)
        if (point.size() != dim) throw std::invalid_argument("ragged initial simplex");

    OptimResult result;
    int eval_count = 0;
    int updates = 0;
    const auto evaluate = [&](const std::vector<double>& point) {
        ++eval_count;
        return estimate(point);
    };
    const auto record = [&](TraceEvent event, const std::vector<double>& params,
                            double value) {
        result.trace.entries.push_back(
            {eval_count, updates, event, params, value, ledger_total(ledger)});
    };

    std::vector<Vertex> simplex;
    simplex.reserve(dim + 1);
    double best_value = -std::numeric_limits<double>::infinity();
    for (const auto& point : initial_simplex) {
        const double value = evaluate(point);
        simplex.push_back({point, value});
        if (value > best_value) {
            best_value = value;
            result.best_point = point;
            result.best_estimate = value;
            record(TraceEvent::VertexUpdate, point, value);
        }
    }

    int alpha = config.nm_alpha;
    int plateau = 0;

    const auto replace_worst = [&](std::vector<double> point, double value) {
        simplex.back() = {std::move(point), value};
    };

    StopReason reason = StopReason::NmMaxUpdates;
    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.value > b.value; });

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v < dim; ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].point[i];
        for (double& c : centroid) c /= static_cast<double>(dim);

        const Vertex& worst = simplex.back();
        std::vector<double> reflected(dim);
        for (std::size_t i = 0; i < dim; ++i)
            reflected[i] = centroid[i] + (centroid[i] - worst.point[i]);
        const double f_reflected = evaluate(reflected);

        if (f_reflected > simplex.front().value) {
            std::vector<double> expanded(dim);
            for (std::size_t i = 0; i < dim; ++i)
                expanded[i] = centroid[i] + 2.0 * (centroid[i] - worst.point[i]);
            const double f_expanded = evaluate(expanded);
            if (f_expanded > f_reflected)
                replace_worst(std::move(expanded), f_expanded);
            else
                replace_worst(std::move(reflected), f_reflected);
        } else if (f_reflected > simplex[dim - 1].value) {
            replace_worst(std::move(reflected), f_reflected);
        } else if (f_reflected > worst.value) {
            std::vector<double> contracted(dim);
            for (std::size_t i = 0; i < dim; ++i)
                contracted[i] = centroid[i] + 0.5 * (reflected[i] - centroid[i]);
            const double f_contracted = evaluate(contracted);
            if (f_contracted >= f_reflected) {
                replace_worst(std::move(contracted), f_contracted);
            } else {
                for (std::size_t v = 1; v <= dim; ++v) {
                    for (std::size_t i = 0; i < dim; ++i)
                        simplex[v].point[i] =
                            simplex[0].point[i] + 0.5 * (simplex[v].point[i] - simplex[0].point[i]);
                    simplex[v].value = evaluate(simplex[v].point);
                }
            }
        } else {
            std::vector<double> contracted(dim);
            for (std::size_t i = 0; i < dim; ++i)
                contracted[i] = centroid[i] - 0.5 * (centroid[i] - worst.point[i]);
            const double f_contracted = evaluate(contracted);
            if (f_contracted > worst.value) {
                replace_worst(std::move(contracted), f_contracted);
            } else {
                for (std::size_t v = 1; v <= dim; ++v) {
                    for (std::size_t i = 0; i < dim; ++i)
                        simplex[v].point[i] =
                            simplex[0].point[i] + 0.5 * (simplex[v].point[i] - simplex[0].point[i]);
                    simplex[v].value = evaluate(simplex[v].point);
                }
            }
        }

        ++updates;

        double round_best = -std::numeric_limits<double>::infinity();
        std::size_t round_best_index = 0;
        for (std::size_t v = 0; v < simplex.size(); ++v) {
            if (simplex[v].value > round_best) {
                round_best = simplex[v].value;
                round_best_index = v;
            }
        }
        if (round_best > best_value) {
            const double improvement = round_best - best_value;
            if (config.nm_improvement_threshold > 0.0 &&
                improvement < config.nm_improvement_threshold)
                alpha = config.nm_alpha_halved;
            best_value = round_best;
            result.best_point = simplex[round_best_index].point;
            result.best_estimate = round_best;
            plateau = 0;
            record(TraceEvent::VertexUpdate, result.best_point, round_best);
        } else {
            ++plateau;
        }

        if (plateau >= static_cast<int>(dim) * alpha) {
            reason = StopReason::NmPlateau;
            break;
        }
        if (updates >= config.nm_max_updates) {
            reason = StopReason::NmMaxUpdates;
            break;
        }
    }

    result.trace.stop_reason = reason;
    record(TraceEvent::Stop, result.best_point, result.best_estimate);
    return result;
}

OptimResult bfgs_maximize(const EstimateFn& estimate, const GradientFn& gradient,
                          const std::vector<double>& start, const StoppingConfig& config,
                          const CostLedger* ledger) {
    const std::size_t dim = start.size();
    if (dim == 0) throw std::invalid_argument("empty start point");

    OptimResult result;
    int eval_count = 0;
    int searches = 0;
    const auto evaluate = [&](const std::vector<double>& point) {
        ++eval_count;
        return estimate(point);
    };
    const auto record = [&](TraceEvent event, const std::vector<double>& params,
                            double value) {
        result.trace.entries.push_back(
            {eval_count, searches, event, params, value, ledger_total(ledger)});
    };

    std::vector<double> x = start;
    double f = evaluate(x);
    std::vector<double> g = gradient(x);
    if (g.size() != dim) throw std::invalid_argument("gradient dimension mismatch");

    result.best_point = x;
    result.best_estimate = f;

    // Inverse Hessian approximation of the equivalent minimization problem,
    // stored row-major.
    std::vector<double> hess(dim * dim, 0.0);
    const auto reset_hessian = [&] {
        std::fill(hess.begin(), hess.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) hess[i * dim + i] = 1.0;
    };
    reset_hessian();

    const double floor = std::sqrt(static_cast<double>(dim)) *
                         std::max(config.bfgs_gradient_floor_scale,
                                  config.bfgs_delta * config.bfgs_delta);
    const int min_directions =
        config.bfgs_min_directions > 0 ? config.bfgs_min_directions : static_cast<int>(dim);

    double value_after_previous = f;
    StopReason reason = StopReason::MaxLineSearches;
    while (true) {
        if (norm2(g) < floor) {
            reason = StopReason::GradientFloor;
            break;
        }
        if (searches >= config.bfgs_max_line_searches) {
            reason = StopReason::MaxLineSearches;
            break;
        }

        std::vector<double> direction(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) direction[i] += hess[i * dim + j] * g[j];
        double slope = dot(g, direction);
        if (slope <= 0.0) {
            reset_hessian();
            direction = g;
            slope = dot(g, g);
        }

        record(TraceEvent::LineSearchStart, x, f);

        double step = config.initial_step;
        bool accepted = false;
        std::vector<double> trial(dim);
        double f_trial = 0.0;
        for (int attempt = 0; attempt <= config.max_backtracks; ++attempt) {
            for (std::size_t i = 0; i < dim; ++i) trial[i] = x[i] + step * direction[i];
            f_trial = evaluate(trial);
            if (f_trial >= f + config.armijo_c1 * step * slope) {
                accepted = true;
                break;
            }
            step *= config.backtrack_factor;
        }

        ++searches;

        if (accepted) {
            std::vector<double> g_new = gradient(trial);
            std::vector<double> s(dim), y(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                s[i] = trial[i] - x[i];
                y[i] = g[i] - g_new[i];  // minimization-side secant difference
            }
            const double sy = dot(s, y);
            if (sy > 0.0) {
                const double rho = 1.0 / sy;
                std::vector<double> hy(dim, 0.0);
                for (std::size_t i = 0; i < dim; ++i)
                    for (std::size_t j = 0; j < dim; ++j) hy[i] += hess[i * dim + j] * y[j];
                const double yhy = dot(y, hy);
                for (std::size_t i = 0; i < dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j) {
                        hess[i * dim + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] -
                                                    hy[i] * s[j] - s[i] * hy[j]);
                    }
                }
            }
            x = trial;
            f = f_trial;
            g = std::move(g_new);
            if (f > result.best_estimate) {
                result.best_estimate = f;
                result.best_point = x;
            }
        }

        record(TraceEvent::LineSearchEnd, x, f);

        const double improvement = f - value_after_previous;
        value_after_previous = f;
        if (searches >= min_directions && improvement < config.bfgs_improvement_tol) {
            reason = StopReason::ImprovementFloor;
            break;
        }
    }

    result.trace.stop_reason = reason;
    record(TraceEvent::Stop, result.best_point, result.best_estimate);
    return result;
}

InitialConditions initial_points(int depth, Rng& rng) {
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    const auto draw_point = [&] {
        std::vector<double> point;
        point.reserve(2 * static_cast<std::size_t>(depth));
        for (int k = 0; k < depth; ++k) {
            point.push_back(rng.uniform(0.0, 2.0 * M_PI));
            point.push_back(rng.uniform(0.0, M_PI));
        }
        return point;
    };

    InitialConditions out;
    out.start = draw_point();
    out.simplex.push_back(out.start);
    for (int v = 0; v < 2 * depth; ++v) out.simplex.push_back(draw_point());
    return out;
}

}  // namespace qaoa

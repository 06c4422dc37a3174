#include <doctest.h>

#include <cmath>
#include <vector>

#include "qaoa/circuits.hpp"
#include "qaoa/graph.hpp"
#include "qaoa/optimize.hpp"
#include "qaoa/rng.hpp"
#include "qaoa/shots.hpp"

using namespace qaoa;

namespace {

int count_events(const OptimizerTrace& trace, TraceEvent event) {
    int n = 0;
    for (const auto& entry : trace.entries)
        if (entry.event == event) ++n;
    return n;
}

const TraceEntry& last_entry(const OptimizerTrace& trace) {
    REQUIRE(!trace.entries.empty());
    return trace.entries.back();
}

std::vector<std::vector<double>> unit_simplex_2d() {
    return {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
}

MaxCutInstance k4_instance() {
    return MaxCutInstance::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, 0, 0);
}

}  // namespace

TEST_CASE("nelder-mead maximizes a smooth quadratic to its peak") {
    const auto f = [](const std::vector<double>& x) {
        return -(x[0] - 1.0) * (x[0] - 1.0) - (x[1] + 2.0) * (x[1] + 2.0);
    };
    StoppingConfig config;
    const auto result = nelder_mead_maximize(f, unit_simplex_2d(), config);

    CHECK(result.trace.stop_reason == StopReason::NmPlateau);
    CHECK(result.best_estimate > -1e-10);
    CHECK(std::abs(result.best_point[0] - 1.0) < 1e-4);
    CHECK(std::abs(result.best_point[1] + 2.0) < 1e-4);
}

TEST_CASE("nelder-mead plateau rule fires after exactly dim * alpha barren updates") {
    int calls = 0;
    const auto constant = [&](const std::vector<double>&) {
        ++calls;
        return 1.5;
    };
    StoppingConfig config;
    const auto result = nelder_mead_maximize(constant, unit_simplex_2d(), config);

    CHECK(result.trace.stop_reason == StopReason::NmPlateau);
    const auto& stop = last_entry(result.trace);
    CHECK(stop.event == TraceEvent::Stop);
    CHECK(stop.iteration == 2 * config.nm_alpha);  // dim = 2
    CHECK(count_events(result.trace, TraceEvent::Stop) == 1);

    // Constant objective: every update runs reflect, inside-contract, then a
    // two-point shrink, and stored vertices are never refreshed.
    CHECK(calls == 3 + 40 * 4);
}

TEST_CASE("nelder-mead update cap stops the run when the plateau never fills") {
    const auto constant = [](const std::vector<double>&) { return 0.0; };
    StoppingConfig config;
    config.nm_alpha = 1000000;
    config.nm_max_updates = 57;
    const auto result = nelder_mead_maximize(constant, unit_simplex_2d(), config);

    CHECK(result.trace.stop_reason == StopReason::NmMaxUpdates);
    CHECK(last_entry(result.trace).iteration == 57);
}

TEST_CASE("nelder-mead plateau counter resets on a best-vertex improvement") {
    // Flat landscape except one trial point scores higher; the run must last
    // until that improvement plus a fresh plateau.
    int calls = 0;
    const auto bumped = [&](const std::vector<double>&) {
        ++calls;
        return calls == 9 ? 1.0 : 0.0;
    };
    StoppingConfig config;
    config.nm_improvement_threshold = 0.005;  // improvement of 1.0 keeps alpha
    const auto result = nelder_mead_maximize(bumped, unit_simplex_2d(), config);

    CHECK(result.trace.stop_reason == StopReason::NmPlateau);
    CHECK(result.best_estimate == 1.0);

    int improvement_iteration = -1;
    for (const auto& entry : result.trace.entries)
        if (entry.event == TraceEvent::VertexUpdate && entry.estimate == 1.0)
            improvement_iteration = entry.iteration;
    REQUIRE(improvement_iteration > 0);
    CHECK(last_entry(result.trace).iteration == improvement_iteration + 2 * config.nm_alpha);
}

TEST_CASE("nelder-mead halves alpha after a sub-threshold improvement") {
    int calls = 0;
    const auto bumped = [&](const std::vector<double>&) {
        ++calls;
        return calls == 9 ? 0.001 : 0.0;  // below the threshold
    };
    StoppingConfig config;
    config.nm_improvement_threshold = 0.005;
    const auto result = nelder_mead_maximize(bumped, unit_simplex_2d(), config);

    CHECK(result.trace.stop_reason == StopReason::NmPlateau);
    int improvement_iteration = -1;
    for (const auto& entry : result.trace.entries)
        if (entry.event == TraceEvent::VertexUpdate && entry.estimate == 0.001)
            improvement_iteration = entry.iteration;
    REQUIRE(improvement_iteration > 0);
    CHECK(last_entry(result.trace).iteration ==
          improvement_iteration + 2 * config.nm_alpha_halved);
}

TEST_CASE("nelder-mead trace is deterministic for a seeded noisy objective") {
    const auto run_once = [] {
        Rng rng(derive_seed(7, {1, 2, 3}));
        const auto noisy = [&rng](const std::vector<double>& x) {
            const double exact = -(x[0] - 1.0) * (x[0] - 1.0) - (x[1] + 2.0) * (x[1] + 2.0);
            return noisy_value(exact, 0.05, rng);
        };
        StoppingConfig config;
        config.nm_max_updates = 200;
        return nelder_mead_maximize(noisy, unit_simplex_2d(), config);
    };
    const auto a = run_once();
    const auto b = run_once();

    REQUIRE(a.trace.entries.size() == b.trace.entries.size());
    for (std::size_t i = 0; i < a.trace.entries.size(); ++i) {
        CHECK(a.trace.entries[i].eval_index == b.trace.entries[i].eval_index);
        CHECK(a.trace.entries[i].iteration == b.trace.entries[i].iteration);
        CHECK(a.trace.entries[i].event == b.trace.entries[i].event);
        CHECK(a.trace.entries[i].estimate == b.trace.entries[i].estimate);
        CHECK(a.trace.entries[i].params == b.trace.entries[i].params);
    }
    CHECK(a.best_estimate == b.best_estimate);
}

TEST_CASE("bfgs maximizes an isotropic quadratic in one line search") {
    const auto f = [](const std::vector<double>& x) {
        return -(x[0] * x[0] + x[1] * x[1]);
    };
    const auto grad = [](const std::vector<double>& x) {
        return std::vector<double>{-2.0 * x[0], -2.0 * x[1]};
    };
    StoppingConfig config;
    const auto result = bfgs_maximize(f, grad, {3.0, -4.0}, config);

    CHECK(result.trace.stop_reason == StopReason::GradientFloor);
    CHECK(result.best_estimate > -1e-12);
    CHECK(count_events(result.trace, TraceEvent::LineSearchStart) == 1);
}

TEST_CASE("bfgs maximizes an anisotropic quadratic") {
    const auto f = [](const std::vector<double>& x) {
        return -(x[0] - 1.0) * (x[0] - 1.0) - 4.0 * (x[1] + 2.0) * (x[1] + 2.0);
    };
    const auto grad = [](const std::vector<double>& x) {
        return std::vector<double>{-2.0 * (x[0] - 1.0), -8.0 * (x[1] + 2.0)};
    };
    StoppingConfig config;
    const auto result = bfgs_maximize(f, grad, {3.0, 1.0}, config);

    CHECK((result.trace.stop_reason == StopReason::GradientFloor ||
           result.trace.stop_reason == StopReason::ImprovementFloor));
    CHECK(result.best_estimate > -1e-3);
    CHECK(std::abs(result.best_point[0] - 1.0) < 0.05);
    CHECK(std::abs(result.best_point[1] + 2.0) < 0.05);
}

TEST_CASE("bfgs stops on the gradient floor before any line search") {
    const auto f = [](const std::vector<double>&) { return 2.0; };
    const auto grad = [](const std::vector<double>& x) {
        return std::vector<double>(x.size(), 0.0);
    };
    StoppingConfig config;
    const auto result = bfgs_maximize(f, grad, {0.4, 0.5, 0.6}, config);

    CHECK(result.trace.stop_reason == StopReason::GradientFloor);
    CHECK(count_events(result.trace, TraceEvent::LineSearchStart) == 0);
    CHECK(count_events(result.trace, TraceEvent::Stop) == 1);
    CHECK(last_entry(result.trace).iteration == 0);
}

TEST_CASE("bfgs gradient floor scales with the difference step") {
    // With delta = 0.3 the floor is sqrt(2) * 0.09, which a gradient of norm
    // ~0.0707 sits under even though it clears the bare 1e-3 scale.
    const auto f = [](const std::vector<double>&) { return 0.0; };
    const auto grad = [](const std::vector<double>&) {
        return std::vector<double>{0.05, 0.05};
    };
    StoppingConfig config;
    config.bfgs_delta = 0.3;
    const auto floored = bfgs_maximize(f, grad, {0.0, 0.0}, config);
    CHECK(floored.trace.stop_reason == StopReason::GradientFloor);
    CHECK(count_events(floored.trace, TraceEvent::LineSearchStart) == 0);

    config.bfgs_delta = 0.0;
    const auto searching = bfgs_maximize(f, grad, {0.0, 0.0}, config);
    CHECK(count_events(searching.trace, TraceEvent::LineSearchStart) > 0);
}

TEST_CASE("bfgs improvement floor waits for the direction quota") {
    // Constant estimates with a fat fake gradient: every line search fails,
    // improvement is zero, and the stop may only fire once dim directions
    // have been explored.
    const auto f = [](const std::vector<double>&) { return 5.0; };
    const auto grad = [](const std::vector<double>& x) {
        return std::vector<double>(x.size(), 1.0);
    };
    StoppingConfig config;
    const auto result = bfgs_maximize(f, grad, std::vector<double>(4, 0.0), config);

    CHECK(result.trace.stop_reason == StopReason::ImprovementFloor);
    CHECK(count_events(result.trace, TraceEvent::LineSearchStart) == 4);
    CHECK(count_events(result.trace, TraceEvent::LineSearchEnd) == 4);
    CHECK(last_entry(result.trace).iteration == 4);
}

TEST_CASE("bfgs line-search cap stops an endlessly improving run") {
    const auto f = [](const std::vector<double>& x) { return x[0]; };
    const auto grad = [](const std::vector<double>& x) {
        return std::vector<double>{1.0, 0.0 * x[1]};
    };
    StoppingConfig config;
    config.bfgs_max_line_searches = 20;
    const auto result = bfgs_maximize(f, grad, {0.0, 0.0}, config);

    CHECK(result.trace.stop_reason == StopReason::MaxLineSearches);
    CHECK(count_events(result.trace, TraceEvent::LineSearchStart) == 20);
    CHECK(result.best_estimate == 20.0);  // unit step accepted every time
}

TEST_CASE("bfgs reaches the depth-one optimum of the complete four-node graph") {
    const Problem problem(k4_instance());
    const auto f = [&](const std::vector<double>& x) {
        return objective(problem, ParameterVector(x));
    };
    const auto grad = [&](const std::vector<double>& x) {
        return analytic_gradient(problem, ParameterVector(x));
    };
    StoppingConfig config;
    const auto result = bfgs_maximize(f, grad, {2.6, 0.3}, config);

    CHECK((result.trace.stop_reason == StopReason::GradientFloor ||
           result.trace.stop_reason == StopReason::ImprovementFloor));
    CHECK(result.best_estimate > 3.6965);
}

TEST_CASE("trace entries carry the ledger's running repetition count") {
    const Problem problem(k4_instance());
    CostLedger ledger;
    Rng rng(derive_seed(11, {4}));
    const auto noisy = [&](const std::vector<double>& x) {
        return estimate_objective(problem, ParameterVector(x), 0.05, ledger, rng);
    };
    StoppingConfig config;
    config.nm_max_updates = 30;
    InitialConditions init;
    {
        Rng start_rng(derive_seed(11, {5}));
        init = initial_points(1, start_rng);
    }
    const auto result = nelder_mead_maximize(noisy, init.simplex, config, &ledger);

    std::uint64_t previous = 0;
    for (const auto& entry : result.trace.entries) {
        CHECK(entry.cum_repetitions >= previous);
        previous = entry.cum_repetitions;
    }
    CHECK(last_entry(result.trace).cum_repetitions == ledger.total());
    CHECK(ledger.total() > 0);
}

TEST_CASE("initial points land in the parameter box and share the start") {
    Rng rng(derive_seed(3, {9}));
    const auto init = initial_points(3, rng);

    CHECK(init.start.size() == 6);
    REQUIRE(init.simplex.size() == 7);
    CHECK(init.simplex[0] == init.start);
    for (const auto& point : init.simplex) {
        REQUIRE(point.size() == 6);
        for (int k = 0; k < 3; ++k) {
            CHECK(point[2 * k] >= 0.0);
            CHECK(point[2 * k] < 2.0 * M_PI);
            CHECK(point[2 * k + 1] >= 0.0);
            CHECK(point[2 * k + 1] < M_PI);
        }
    }
    for (std::size_t a = 0; a < init.simplex.size(); ++a)
        for (std::size_t b = a + 1; b < init.simplex.size(); ++b)
            CHECK(init.simplex[a] != init.simplex[b]);

    Rng replay(derive_seed(3, {9}));
    const auto again = initial_points(3, replay);
    CHECK(again.start == init.start);
    CHECK(again.simplex == init.simplex);

    CHECK_THROWS_AS(initial_points(0, rng), std::invalid_argument);
}

TEST_CASE("optimizers validate their inputs") {
    const auto f = [](const std::vector<double>&) { return 0.0; };
    const auto grad = [](const std::vector<double>& x) {
        return std::vector<double>(x.size(), 0.0);
    };
    StoppingConfig config;
    CHECK_THROWS_AS(nelder_mead_maximize(f, {}, config), std::invalid_argument);
    CHECK_THROWS_AS(nelder_mead_maximize(f, {{1.0, 2.0}, {3.0, 4.0}}, config),
                    std::invalid_argument);
    CHECK_THROWS_AS(nelder_mead_maximize(f, {{1.0, 2.0}, {3.0}, {4.0, 5.0}}, config),
                    std::invalid_argument);
    CHECK_THROWS_AS(bfgs_maximize(f, grad, {}, config), std::invalid_argument);
}

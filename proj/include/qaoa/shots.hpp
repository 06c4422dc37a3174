#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qaoa/circuits.hpp"
#include "qaoa/rng.hpp"

namespace qaoa {

enum class Method { NelderMead, FiniteDifference, AnalyticCircuit };

std::string method_tag(Method method);
Method method_from_tag(const std::string& tag);

// Precision targets for one optimization configuration. epsilon applies to
// objective estimates, delta is the finite-difference step, epsilon_ag the
// accuracy target of circuit-based gradient components.
struct PrecisionConfig {
    Method method = Method::NelderMead;
    double epsilon = 0.01;
    double delta = 0.1;
    double epsilon_ag = 0.1;
};

enum class CostKind { Objective, FdGradient, AgGradient };

// Monotone repetition counter with a per-category breakdown.
class CostLedger {
public:
    void charge(CostKind kind, std::uint64_t repetitions);

    std::uint64_t total() const { return objective_ + fd_gradient_ + ag_gradient_; }
    std::uint64_t objective() const { return objective_; }
    std::uint64_t fd_gradient() const { return fd_gradient_; }
    std::uint64_t ag_gradient() const { return ag_gradient_; }

private:
    std::uint64_t objective_ = 0;
    std::uint64_t fd_gradient_ = 0;
    std::uint64_t ag_gradient_ = 0;
};

// Stochastic estimate of an expectation value measured to the given accuracy:
// the exact value plus a uniform draw from [-precision, +precision).
// precision 0 returns the exact value and consumes no randomness.
double noisy_value(double exact, double precision, Rng& rng);

// Repetitions needed to reach accuracy epsilon on an observable with the
// given variance: variance / epsilon^2 before rounding.
double repetitions_raw(double variance, double epsilon);

// Ceiling of the raw count with a floor of one repetition per estimated
// quantity. epsilon 0 charges the floor only (exact evaluations are free).
std::uint64_t repetitions_required(double variance, double epsilon);

// Objective estimate: evaluates the state once, charges
// max(1, ceil(Var/epsilon^2)) repetitions, perturbs the exact expectation.
double estimate_objective(const Problem& problem, const ParameterVector& params, double epsilon,
                          CostLedger& ledger, Rng& rng);

// Accuracy target for the two objective evaluations inside one
// finite-difference component:
//   max( delta^3, epsilon/10, min(epsilon, delta/sqrt(2) * |dF/dtheta|) ).
double fd_precision(double epsilon, double delta, double gradient_component);

// Central-difference gradient with stochastic endpoint estimates. Component n
// evaluates F at +-delta/2 shifts, perturbs each endpoint at the accuracy
// fd_precision(epsilon, delta, g_n) (g_n taken from the emulator-exact
// gradient), and charges each endpoint's repetitions separately.
// precision_override forces the endpoint accuracy, 0 meaning exact.
std::vector<double> estimate_fd_gradient(const Problem& problem, const ParameterVector& params,
                                         const PrecisionConfig& config, CostLedger& ledger,
                                         Rng& rng,
                                         std::optional<double> precision_override = {});

// One gradient component estimated from ancilla interference circuits: for
// each generator term, the circuit expectation < C (x) Z_a > is perturbed at
// the equal-split accuracy epsilon_ag / sqrt(#terms) and charged
// max(1, ceil(4/epsilon_ag^2 * weight^2 * Var)) repetitions, with Var the
// variance of the measured observable on that circuit's output state.
double estimate_ag_component(const Problem& problem, const ParameterVector& params, int layer,
                             GeneratorKind kind, const std::vector<GeneratorTerm>& terms,
                             double epsilon_ag, CostLedger& ledger, Rng& rng);

// Full gradient over the interleaved (gamma, beta) components.
std::vector<double> estimate_ag_gradient(const Problem& problem, const ParameterVector& params,
                                         const PrecisionConfig& config, CostLedger& ledger,
                                         Rng& rng);

// Shot split for measuring a k-term decomposition term by term at overall
// accuracy epsilon, each term measured to epsilon/sqrt(k):
//   M_nu = max(1, ceil(k * c_nu^2 * Var_nu / epsilon^2)).
std::vector<std::uint64_t> allocate_per_term_shots(const std::vector<double>& weights,
                                                   const std::vector<double>& variances,
                                                   double epsilon);

}  // namespace qaoa

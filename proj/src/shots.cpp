#include "qaoa/shots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qaoa {

std::string method_tag(Method method) {
    switch (method) {
        case Method::NelderMead: return "nm";
        case Method::FiniteDifference: return "fd";
        case Method::AnalyticCircuit: return "ag";
    }
    throw std::logic_error("unknown method");
}

Method method_from_tag(const std::string& tag) {
    if (tag == "nm") return Method::NelderMead;
    if (tag == "fd") return Method::FiniteDifference;
    if (tag == "ag") return Method::AnalyticCircuit;
    throw std::invalid_argument("unknown method tag: " + tag);
}

void CostLedger::charge(CostKind kind, std::uint64_t repetitions) {
    switch (kind) {
        case CostKind::Objective: objective_ += repetitions; break;
        case CostKind::FdGradient: fd_gradient_ += repetitions; break;
        case CostKind::AgGradient: ag_gradient_ += repetitions; break;
    }
}

double noisy_value(double exact, double precision, Rng& rng) {
    if (!(precision >= 0.0))
        throw std::invalid_argument("precision must be non-negative");
    if (precision == 0.0)
        return exact;
    return exact + precision * (2.0 * rng.uniform() - 1.0);
}

double repetitions_raw(double variance, double epsilon) {
    if (!(variance >= 0.0))
        throw std::invalid_argument("variance must be non-negative");
    if (!(epsilon >= 0.0))
        throw std::invalid_argument("epsilon must be non-negative");
    if (epsilon == 0.0)
        return 0.0;
    return variance / (epsilon * epsilon);
}

std::uint64_t repetitions_required(double variance, double epsilon) {
    const double raw = repetitions_raw(variance, epsilon);
    if (raw >= 9.0e18)
        throw std::runtime_error("repetition count overflow");
    const double up = std::ceil(raw);
    return up < 1.0 ? 1 : static_cast<std::uint64_t>(up);
}

double estimate_objective(const Problem& problem, const ParameterVector& params, double epsilon,
                          CostLedger& ledger, Rng& rng) {
    const StateVector psi = prepare_state(problem, params);
    const double value = expectation_diagonal(psi, problem.cost);
    const double variance = variance_diagonal(psi, problem.cost);
    ledger.charge(CostKind::Objective, repetitions_required(variance, epsilon));
    return noisy_value(value, epsilon, rng);
}

double fd_precision(double epsilon, double delta, double gradient_component) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    if (!(delta > 0.0))
        throw std::invalid_argument("delta must be positive");
    const double gradient_cap =
        std::min(epsilon, delta / std::sqrt(2.0) * std::abs(gradient_component));
    return std::max(delta * delta * delta, std::max(epsilon / 10.0, gradient_cap));
}

std::vector<double> estimate_fd_gradient(const Problem& problem, const ParameterVector& params,
                                         const PrecisionConfig& config, CostLedger& ledger,
                                         Rng& rng, std::optional<double> precision_override) {
    const double delta = config.delta;
    if (!(delta > 0.0))
        throw std::invalid_argument("delta must be positive");
    const std::vector<double> exact_grad = analytic_gradient(problem, params);
    std::vector<double> flat = params.flat();
    std::vector<double> grad(flat.size(), 0.0);

    for (std::size_t n = 0; n < flat.size(); ++n) {
        const double accuracy = precision_override
                                    ? *precision_override
                                    : fd_precision(config.epsilon, delta, exact_grad[n]);
        const double center = flat[n];

        flat[n] = center + delta / 2.0;
        const StateVector plus = prepare_state(problem, ParameterVector(flat));
        const double f_plus = expectation_diagonal(plus, problem.cost);
        ledger.charge(CostKind::FdGradient,
                      repetitions_required(variance_diagonal(plus, problem.cost), accuracy));

        flat[n] = center - delta / 2.0;
        const StateVector minus = prepare_state(problem, ParameterVector(flat));
        const double f_minus = expectation_diagonal(minus, problem.cost);
        ledger.charge(CostKind::FdGradient,
                      repetitions_required(variance_diagonal(minus, problem.cost), accuracy));

        flat[n] = center;
        grad[n] = (noisy_value(f_plus, accuracy, rng) - noisy_value(f_minus, accuracy, rng)) /
                  delta;
    }
    return grad;
}

double estimate_ag_component(const Problem& problem, const ParameterVector& params, int layer,
                             GeneratorKind kind, const std::vector<GeneratorTerm>& terms,
                             double epsilon_ag, CostLedger& ledger, Rng& rng) {
    if (!(epsilon_ag > 0.0))
        throw std::invalid_argument("epsilon_ag must be positive");
    if (terms.empty())
        throw std::invalid_argument("generator must have at least one term");
    const std::vector<double> measured = extend_diagonal_ancilla_z(problem.cost);
    const double term_accuracy = epsilon_ag / std::sqrt(static_cast<double>(terms.size()));
    const double scale = 4.0 / (epsilon_ag * epsilon_ag);

    double component = 0.0;
    for (const auto& t : terms) {
        const StateVector psi = build_gradient_circuit_state(problem, params, layer, t.op, kind);
        const double expectation = expectation_diagonal(psi, measured);
        const double variance = variance_diagonal(psi, measured);
        const double raw = scale * t.weight * t.weight * variance;
        const double up = std::ceil(raw);
        ledger.charge(CostKind::AgGradient,
                      up < 1.0 ? 1 : static_cast<std::uint64_t>(up));
        component += t.weight * noisy_value(expectation, term_accuracy, rng);
    }
    return 2.0 * component;
}

std::vector<double> estimate_ag_gradient(const Problem& problem, const ParameterVector& params,
                                         const PrecisionConfig& config, CostLedger& ledger,
                                         Rng& rng) {
    const GeneratorDecomposition gamma_gen = cost_generator(problem.instance);
    const GeneratorDecomposition beta_gen = mixer_generator(problem.instance.num_nodes);
    const int p = params.depth();
    std::vector<double> grad(2 * p, 0.0);
    for (int layer = 1; layer <= p; ++layer) {
        grad[2 * (layer - 1)] =
            estimate_ag_component(problem, params, layer, GeneratorKind::Gamma,
                                  gamma_gen.terms, config.epsilon_ag, ledger, rng);
        grad[2 * (layer - 1) + 1] =
            estimate_ag_component(problem, params, layer, GeneratorKind::Beta,
                                  beta_gen.terms, config.epsilon_ag, ledger, rng);
    }
    return grad;
}

std::vector<std::uint64_t> allocate_per_term_shots(const std::vector<double>& weights,
                                                   const std::vector<double>& variances,
                                                   double epsilon) {
    if (weights.size() != variances.size() || weights.empty())
        throw std::invalid_argument("weights and variances must have equal positive length");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
    const double k = static_cast<double>(weights.size());
    std::vector<std::uint64_t> shots(weights.size());
    for (std::size_t nu = 0; nu < weights.size(); ++nu) {
        if (!(variances[nu] >= 0.0))
            throw std::invalid_argument("variances must be non-negative");
        const double raw = k * weights[nu] * weights[nu] * variances[nu] / (epsilon * epsilon);
        const double up = std::ceil(raw);
        shots[nu] = up < 1.0 ? 1 : static_cast<std::uint64_t>(up);
    }
    return shots;
}

}  // namespace qaoa

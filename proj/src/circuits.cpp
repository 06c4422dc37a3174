#include "qaoa/circuits.hpp"

#include <cmath>
#include <stdexcept>

namespace qaoa {

namespace {

double wrap_into(double value, double period) {
    double w = std::fmod(value, period);
    if (w < 0.0)
        w += period;
    return w;
}

void check_finite(const std::vector<double>& values) {
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("parameters must be finite");
}

}  // namespace

ParameterVector::ParameterVector(std::vector<double> flat) {
    if (flat.empty() || flat.size() % 2 != 0)
        throw std::invalid_argument("flat parameter vector must have even positive length");
    check_finite(flat);
    const std::size_t p = flat.size() / 2;
    gammas_.resize(p);
    betas_.resize(p);
    for (std::size_t k = 0; k < p; ++k) {
        gammas_[k] = flat[2 * k];
        betas_[k] = flat[2 * k + 1];
    }
}

ParameterVector::ParameterVector(std::vector<double> gammas, std::vector<double> betas)
    : gammas_(std::move(gammas)), betas_(std::move(betas)) {
    if (gammas_.empty() || gammas_.size() != betas_.size())
        throw std::invalid_argument("gamma and beta lists must have equal positive length");
    check_finite(gammas_);
    check_finite(betas_);
}

std::vector<double> ParameterVector::flat() const {
    std::vector<double> out(2 * gammas_.size());
    for (std::size_t k = 0; k < gammas_.size(); ++k) {
        out[2 * k] = gammas_[k];
        out[2 * k + 1] = betas_[k];
    }
    return out;
}

ParameterVector ParameterVector::canonical() const {
    std::vector<double> g(gammas_.size()), b(betas_.size());
    for (std::size_t k = 0; k < gammas_.size(); ++k) {
        g[k] = wrap_into(gammas_[k], 2.0 * M_PI);
        b[k] = wrap_into(betas_[k], M_PI);
    }
    return ParameterVector(std::move(g), std::move(b));
}

Problem::Problem(MaxCutInstance inst)
    : instance(std::move(inst)),
      cost(instance),
      max_value(brute_force_maximum(instance).max_value) {}

StateVector prepare_state(const Problem& problem, const ParameterVector& params) {
    StateVector psi = init_plus_state(problem.instance.num_nodes);
    for (int k = 1; k <= params.depth(); ++k) {
        apply_cost_phase(psi, problem.cost, params.gamma(k));
        apply_mixer(psi, params.beta(k));
    }
    return psi;
}

double objective(const Problem& problem, const ParameterVector& params) {
    return expectation_diagonal(prepare_state(problem, params), problem.cost);
}

namespace {

// Applies the cost observable itself (not its exponential).
StateVector apply_cost(const StateVector& psi, const DiagonalCostOperator& cost) {
    StateVector out = psi;
    auto& amps = out.amplitudes();
    for (std::size_t b = 0; b < amps.size(); ++b)
        amps[b] *= cost[b];
    return out;
}

// Im <phi| C |chi> for the diagonal cost observable.
double im_cost_overlap(const StateVector& phi, const StateVector& chi,
                       const DiagonalCostOperator& cost) {
    Amplitude s = 0.0;
    for (std::size_t b = 0; b < phi.dimension(); ++b)
        s += std::conj(phi[b]) * cost[b] * chi[b];
    return s.imag();
}

// Im <phi| B |chi> with B the sum of X over all qubits.
double im_mixer_overlap(const StateVector& phi, const StateVector& chi) {
    Amplitude s = 0.0;
    const int n = phi.num_qubits();
    for (int q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t b = 0; b < phi.dimension(); ++b)
            s += std::conj(phi[b]) * chi[b ^ bit];
    }
    return s.imag();
}

}  // namespace

std::vector<double> analytic_gradient(const Problem& problem, const ParameterVector& params) {
    const int p = params.depth();
    StateVector chi = prepare_state(problem, params);
    StateVector phi = apply_cost(chi, problem.cost);

    // Unwind the circuit from the last layer. With both vectors rolled back to
    // just after layer n, the beta component reads off the mixing generator;
    // after removing the mixing rotation, the gamma component reads off the
    // cost generator (which commutes with its own phase layer).
    std::vector<double> grad(2 * p, 0.0);
    for (int n = p; n >= 1; --n) {
        grad[2 * (n - 1) + 1] = 2.0 * im_mixer_overlap(phi, chi);
        apply_mixer(phi, -params.beta(n));
        apply_mixer(chi, -params.beta(n));
        grad[2 * (n - 1)] = 2.0 * im_cost_overlap(phi, chi, problem.cost);
        apply_cost_phase(phi, problem.cost, -params.gamma(n));
        apply_cost_phase(chi, problem.cost, -params.gamma(n));
    }
    return grad;
}

std::vector<double> finite_difference_gradient(
    const std::function<double(const ParameterVector&)>& evaluate,
    const ParameterVector& params, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("finite difference step must be positive");
    std::vector<double> flat = params.flat();
    std::vector<double> grad(flat.size(), 0.0);
    for (std::size_t n = 0; n < flat.size(); ++n) {
        const double center = flat[n];
        flat[n] = center + delta / 2.0;
        const double fplus = evaluate(ParameterVector(flat));
        flat[n] = center - delta / 2.0;
        const double fminus = evaluate(ParameterVector(flat));
        flat[n] = center;
        grad[n] = (fplus - fminus) / delta;
    }
    return grad;
}

GeneratorDecomposition GeneratorDecomposition::validated(std::vector<GeneratorTerm> terms) {
    if (terms.empty())
        throw std::invalid_argument("generator decomposition must have at least one term");
    for (const auto& t : terms)
        if (!(t.weight > 0.0))
            throw std::invalid_argument("generator weights must be strictly positive");
    GeneratorDecomposition d;
    d.terms = std::move(terms);
    return d;
}

GeneratorDecomposition cost_generator(const MaxCutInstance& instance) {
    std::vector<GeneratorTerm> terms;
    terms.reserve(instance.edges.size());
    for (const auto& [u, v] : instance.edges)
        terms.push_back({0.5, {-1, {{u, PauliAxis::Z}, {v, PauliAxis::Z}}}});
    return GeneratorDecomposition::validated(std::move(terms));
}

GeneratorDecomposition mixer_generator(int num_nodes) {
    std::vector<GeneratorTerm> terms;
    terms.reserve(num_nodes);
    for (int q = 0; q < num_nodes; ++q)
        terms.push_back({1.0, {1, {{q, PauliAxis::X}}}});
    return GeneratorDecomposition::validated(std::move(terms));
}

std::vector<double> extend_diagonal_identity(const DiagonalCostOperator& cost) {
    const std::size_t dim = cost.values().size();
    std::vector<double> out(2 * dim);
    for (std::size_t b = 0; b < dim; ++b) {
        out[b] = cost[b];
        out[b + dim] = cost[b];
    }
    return out;
}

std::vector<double> extend_diagonal_ancilla_z(const DiagonalCostOperator& cost) {
    const std::size_t dim = cost.values().size();
    std::vector<double> out(2 * dim);
    for (std::size_t b = 0; b < dim; ++b) {
        out[b] = cost[b];
        out[b + dim] = -cost[b];
    }
    return out;
}

StateVector build_gradient_circuit_state(const Problem& problem, const ParameterVector& params,
                                         int layer, const PauliProduct& term,
                                         GeneratorKind kind) {
    const int p = params.depth();
    if (layer < 1 || layer > p)
        throw std::invalid_argument("layer index out of range");
    const int n = problem.instance.num_nodes;
    if (n + 1 > StateVector::kMaxQubits)
        throw std::invalid_argument("register too large for an ancilla");

    // Register in |s>, ancilla (top qubit) in |0>, then split the ancilla.
    StateVector psi(n + 1, 0.0);
    const double amp = std::pow(2.0, -0.5 * n);
    const std::size_t reg_dim = std::size_t{1} << n;
    for (std::size_t b = 0; b < reg_dim; ++b)
        psi[b] = amp;
    apply_hadamard(psi, n);

    const std::vector<double> phase_diag = extend_diagonal_identity(problem.cost);
    for (int k = 1; k < layer; ++k) {
        apply_diagonal_phase(psi, phase_diag, params.gamma(k));
        apply_mixer(psi, params.beta(k), n);
    }
    if (kind == GeneratorKind::Gamma) {
        apply_anticontrolled_pauli_product(psi, n, term);
        apply_diagonal_phase(psi, phase_diag, params.gamma(layer));
        apply_mixer(psi, params.beta(layer), n);
    } else {
        apply_diagonal_phase(psi, phase_diag, params.gamma(layer));
        apply_anticontrolled_pauli_product(psi, n, term);
        apply_mixer(psi, params.beta(layer), n);
    }
    for (int k = layer + 1; k <= p; ++k) {
        apply_diagonal_phase(psi, phase_diag, params.gamma(k));
        apply_mixer(psi, params.beta(k), n);
    }

    apply_phase_s(psi, n);
    apply_hadamard(psi, n);
    return psi;
}

std::vector<double> circuit_gradient(const Problem& problem, const ParameterVector& params) {
    const int p = params.depth();
    const GeneratorDecomposition gamma_gen = cost_generator(problem.instance);
    const GeneratorDecomposition beta_gen = mixer_generator(problem.instance.num_nodes);
    const std::vector<double> measured = extend_diagonal_ancilla_z(problem.cost);

    std::vector<double> grad(2 * p, 0.0);
    for (int layer = 1; layer <= p; ++layer) {
        double g = 0.0;
        for (const auto& t : gamma_gen.terms) {
            auto psi = build_gradient_circuit_state(problem, params, layer, t.op,
                                                    GeneratorKind::Gamma);
            g += t.weight * expectation_diagonal(psi, measured);
        }
        grad[2 * (layer - 1)] = 2.0 * g;

        double b = 0.0;
        for (const auto& t : beta_gen.terms) {
            auto psi = build_gradient_circuit_state(problem, params, layer, t.op,
                                                    GeneratorKind::Beta);
            b += t.weight * expectation_diagonal(psi, measured);
        }
        grad[2 * (layer - 1) + 1] = 2.0 * b;
    }
    return grad;
}

}  // namespace qaoa

#pragma once

#include <functional>
#include <vector>

#include "qaoa/graph.hpp"
#include "qaoa/state.hpp"

namespace qaoa {

// Circuit angles for depth p. Flat layout interleaves the layers as
// (gamma_1, beta_1, gamma_2, beta_2, ...), which is also the gradient
// component order. Phase angles live on [0, 2 pi), mixing angles on [0, pi);
// canonical() wraps into those ranges for reporting.
class ParameterVector {
public:
    explicit ParameterVector(std::vector<double> flat);
    ParameterVector(std::vector<double> gammas, std::vector<double> betas);

    int depth() const { return static_cast<int>(gammas_.size()); }
    double gamma(int layer) const { return gammas_[layer - 1]; }  // 1-based
    double beta(int layer) const { return betas_[layer - 1]; }

    const std::vector<double>& gammas() const { return gammas_; }
    const std::vector<double>& betas() const { return betas_; }

    std::vector<double> flat() const;
    ParameterVector canonical() const;

private:
    std::vector<double> gammas_;
    std::vector<double> betas_;
};

// Problem bundle: the graph, its diagonal cost observable, and the exhaustive
// optimum used for approximation ratios.
struct Problem {
    MaxCutInstance instance;
    DiagonalCostOperator cost;
    double max_value;

    explicit Problem(MaxCutInstance inst);
};

// Applies the full depth-p circuit to |s>.
StateVector prepare_state(const Problem& problem, const ParameterVector& params);

// Expectation of the cost observable on the prepared state.
double objective(const Problem& problem, const ParameterVector& params);

// All 2p partial derivatives, computed on the emulator by preparing the state
// once, applying the cost observable, and unwinding the layers while
// accumulating overlap terms.
std::vector<double> analytic_gradient(const Problem& problem, const ParameterVector& params);

// Central differences (F(x + d/2 e_n) - F(x - d/2 e_n)) / d per component,
// with a caller-supplied evaluator. delta must be positive.
std::vector<double> finite_difference_gradient(
    const std::function<double(const ParameterVector&)>& evaluate,
    const ParameterVector& params, double delta);

// Hermitian-unitary decomposition of a layer generator: positive weights on
// signed Pauli products.
struct GeneratorTerm {
    double weight;
    PauliProduct op;
};

struct GeneratorDecomposition {
    std::vector<GeneratorTerm> terms;

    static GeneratorDecomposition validated(std::vector<GeneratorTerm> terms);
};

// Generator of the phase layer: weight 1/2 on -Z Z per edge.
GeneratorDecomposition cost_generator(const MaxCutInstance& instance);
// Generator of the mixing layer: weight 1 on X per qubit.
GeneratorDecomposition mixer_generator(int num_nodes);

enum class GeneratorKind { Gamma, Beta };

// Ancilla interference circuit on N + 1 qubits. The register follows the
// depth-p circuit; the ancilla (top qubit) is taken through
// H ... anticontrolled term ... S, H so that for any register Pauli sigma
//   < sigma (x) Z_a >  =  -Im < state | suffix term suffix^dag sigma | state >
// where the insertion point of the term is before the phase layer for
// gamma-type generators and between the phase and mixing layers for
// beta-type generators.
StateVector build_gradient_circuit_state(const Problem& problem, const ParameterVector& params,
                                         int layer, const PauliProduct& term,
                                         GeneratorKind kind);

// Cost observable extended to the ancilla register: C (x) I and C (x) Z_a.
std::vector<double> extend_diagonal_identity(const DiagonalCostOperator& cost);
std::vector<double> extend_diagonal_ancilla_z(const DiagonalCostOperator& cost);

// Gradient assembled from ancilla-circuit expectation values: component n is
// 2 sum_mu g_mu < C (x) Z_a > measured on the circuit for term mu. The cost
// observable is measured directly, so no decomposition of C is needed on the
// measurement side.
std::vector<double> circuit_gradient(const Problem& problem, const ParameterVector& params);

}  // namespace qaoa

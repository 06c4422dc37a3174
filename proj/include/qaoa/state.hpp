#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qaoa/graph.hpp"

namespace qaoa {

using Amplitude = std::complex<double>;

// Dense state vector over num_qubits qubits. Basis index b encodes qubit i in
// bit i (bit 0 is qubit 0); bit value 0 corresponds to spin z_i = +1 and bit
// value 1 to z_i = -1. Capacity is capped at 25 qubits (24 for the problem
// register, one more for an ancilla).
class StateVector {
public:
    static constexpr int kMaxRegisterQubits = 24;
    static constexpr int kMaxQubits = 25;

    StateVector(int num_qubits, Amplitude fill);

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }

    Amplitude& operator[](std::size_t b) { return amplitudes_[b]; }
    const Amplitude& operator[](std::size_t b) const { return amplitudes_[b]; }

    std::vector<Amplitude>& amplitudes() { return amplitudes_; }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }

    double norm() const;

private:
    int num_qubits_;
    std::vector<Amplitude> amplitudes_;
};

// Uniform superposition |s> over num_qubits <= 24 qubits.
StateVector init_plus_state(int num_qubits);

// Cost observable evaluated on every computational basis state: the number of
// cut edges for the assignment encoded by the basis index.
class DiagonalCostOperator {
public:
    explicit DiagonalCostOperator(const MaxCutInstance& instance);

    int num_qubits() const { return num_qubits_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t b) const { return values_[b]; }

private:
    int num_qubits_;
    std::vector<double> values_;
};

// exp(-i gamma C) on the full register. The diagonal must cover exactly the
// state's qubit count.
void apply_cost_phase(StateVector& state, const DiagonalCostOperator& cost, double gamma);

// Same phase applied from a raw diagonal; used for operators extended with an
// ancilla identity.
void apply_diagonal_phase(StateVector& state, const std::vector<double>& diagonal, double gamma);

// exp(-i beta X) on one qubit: (a0, a1) -> (cos(beta) a0 - i sin(beta) a1,
//                                           -i sin(beta) a0 + cos(beta) a1).
void apply_x_rotation(StateVector& state, int qubit, double beta);

// exp(-i beta B) with B the sum of X over the lowest num_register qubits.
void apply_mixer(StateVector& state, double beta, int num_register);
void apply_mixer(StateVector& state, double beta);

void apply_single_qubit_x(StateVector& state, int qubit);
void apply_hadamard(StateVector& state, int qubit);
// S gate: |1> picks up a factor i.
void apply_phase_s(StateVector& state, int qubit);

enum class PauliAxis { X, Y, Z };

struct PauliFactor {
    int qubit;
    PauliAxis axis;
};

// Product of single-qubit Paulis on distinct qubits, with an overall sign so
// that terms like -Z Z stay Hermitian and unitary.
struct PauliProduct {
    int sign = 1;  // +1 or -1
    std::vector<PauliFactor> factors;
};

void apply_pauli_product(StateVector& state, const PauliProduct& product);

// Applies the product to the components whose control bit is 0 and leaves the
// rest untouched (control on |0>, the empty-circle convention).
void apply_anticontrolled_pauli_product(StateVector& state, int control_qubit,
                                        const PauliProduct& product);

double expectation_diagonal(const StateVector& state, const DiagonalCostOperator& cost);
double expectation_diagonal(const StateVector& state, const std::vector<double>& diagonal);
double variance_diagonal(const StateVector& state, const DiagonalCostOperator& cost);
double variance_diagonal(const StateVector& state, const std::vector<double>& diagonal);

double expectation_pauli_product(const StateVector& state, const PauliProduct& product);

Amplitude inner_product(const StateVector& bra, const StateVector& ket);

}  // namespace qaoa

#include "qaoa/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qaoa {

StateVector::StateVector(int num_qubits, Amplitude fill) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("qubit count out of supported range");
    amplitudes_.assign(std::size_t{1} << num_qubits, fill);
}

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes_)
        s += std::norm(a);
    return std::sqrt(s);
}

StateVector init_plus_state(int num_qubits) {
    if (num_qubits < 1 || num_qubits > StateVector::kMaxRegisterQubits)
        throw std::invalid_argument("plus state is limited to 24 qubits");
    const double amp = std::pow(2.0, -0.5 * num_qubits);
    return StateVector(num_qubits, Amplitude(amp, 0.0));
}

DiagonalCostOperator::DiagonalCostOperator(const MaxCutInstance& instance)
    : num_qubits_(instance.num_nodes) {
    if (num_qubits_ > StateVector::kMaxRegisterQubits)
        throw std::invalid_argument("cost operator is limited to 24 qubits");
    const std::size_t dim = std::size_t{1} << num_qubits_;
    values_.assign(dim, 0.0);
    for (std::size_t b = 0; b < dim; ++b) {
        int cut = 0;
        for (const auto& [u, v] : instance.edges)
            cut += static_cast<int>(((b >> u) ^ (b >> v)) & 1u);
        values_[b] = static_cast<double>(cut);
    }
}

void apply_diagonal_phase(StateVector& state, const std::vector<double>& diagonal, double gamma) {
    if (diagonal.size() != state.dimension())
        throw std::invalid_argument("diagonal dimension mismatch");
    auto& amps = state.amplitudes();
    for (std::size_t b = 0; b < amps.size(); ++b)
        amps[b] *= std::polar(1.0, -gamma * diagonal[b]);
}

void apply_cost_phase(StateVector& state, const DiagonalCostOperator& cost, double gamma) {
    if (cost.num_qubits() != state.num_qubits())
        throw std::invalid_argument("cost operator qubit count mismatch");
    apply_diagonal_phase(state, cost.values(), gamma);
}

void apply_x_rotation(StateVector& state, int qubit, double beta) {
    if (qubit < 0 || qubit >= state.num_qubits())
        throw std::invalid_argument("qubit index out of range");
    const double c = std::cos(beta);
    const Amplitude mis(0.0, -std::sin(beta));
    auto& amps = state.amplitudes();
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t b = 0; b < amps.size(); ++b) {
        if (b & bit)
            continue;
        const Amplitude a0 = amps[b];
        const Amplitude a1 = amps[b | bit];
        amps[b] = c * a0 + mis * a1;
        amps[b | bit] = mis * a0 + c * a1;
    }
}

void apply_mixer(StateVector& state, double beta, int num_register) {
    if (num_register < 1 || num_register > state.num_qubits())
        throw std::invalid_argument("register size out of range");
    for (int q = 0; q < num_register; ++q)
        apply_x_rotation(state, q, beta);
}

void apply_mixer(StateVector& state, double beta) {
    apply_mixer(state, beta, state.num_qubits());
}

void apply_single_qubit_x(StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits())
        throw std::invalid_argument("qubit index out of range");
    auto& amps = state.amplitudes();
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t b = 0; b < amps.size(); ++b)
        if (!(b & bit))
            std::swap(amps[b], amps[b | bit]);
}

void apply_hadamard(StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits())
        throw std::invalid_argument("qubit index out of range");
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    auto& amps = state.amplitudes();
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t b = 0; b < amps.size(); ++b) {
        if (b & bit)
            continue;
        const Amplitude a0 = amps[b];
        const Amplitude a1 = amps[b | bit];
        amps[b] = inv_sqrt2 * (a0 + a1);
        amps[b | bit] = inv_sqrt2 * (a0 - a1);
    }
}

void apply_phase_s(StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits())
        throw std::invalid_argument("qubit index out of range");
    auto& amps = state.amplitudes();
    const std::size_t bit = std::size_t{1} << qubit;
    for (std::size_t b = 0; b < amps.size(); ++b)
        if (b & bit)
            amps[b] *= Amplitude(0.0, 1.0);
}

namespace {

struct PauliAction {
    std::size_t flip_mask = 0;   // bits toggled by X and Y factors
    std::size_t z_mask = 0;      // bits contributing (-1)^bit from Z and Y factors
    Amplitude prefactor = 1.0;   // overall sign times i per Y factor
};

PauliAction compile_pauli(const PauliProduct& product, int num_qubits) {
    if (product.sign != 1 && product.sign != -1)
        throw std::invalid_argument("pauli product sign must be +1 or -1");
    PauliAction act;
    act.prefactor = static_cast<double>(product.sign);
    std::size_t seen = 0;
    for (const auto& f : product.factors) {
        if (f.qubit < 0 || f.qubit >= num_qubits)
            throw std::invalid_argument("pauli factor qubit out of range");
        const std::size_t bit = std::size_t{1} << f.qubit;
        if (seen & bit)
            throw std::invalid_argument("duplicate qubit in pauli product");
        seen |= bit;
        switch (f.axis) {
            case PauliAxis::X:
                act.flip_mask |= bit;
                break;
            case PauliAxis::Y:
                act.flip_mask |= bit;
                act.z_mask |= bit;
                act.prefactor *= Amplitude(0.0, 1.0);
                break;
            case PauliAxis::Z:
                act.z_mask |= bit;
                break;
        }
    }
    return act;
}

inline int parity(std::size_t x) {
    return static_cast<int>(__builtin_parityll(x));
}

// Phase of P|b>: prefactor times (-1)^(parity of input bits under z_mask).
inline Amplitude pauli_phase(const PauliAction& act, std::size_t b) {
    return parity(b & act.z_mask) ? -act.prefactor : act.prefactor;
}

}  // namespace

void apply_pauli_product(StateVector& state, const PauliProduct& product) {
    const PauliAction act = compile_pauli(product, state.num_qubits());
    auto& amps = state.amplitudes();
    if (act.flip_mask == 0) {
        for (std::size_t b = 0; b < amps.size(); ++b)
            amps[b] *= pauli_phase(act, b);
        return;
    }
    for (std::size_t b = 0; b < amps.size(); ++b) {
        const std::size_t bp = b ^ act.flip_mask;
        if (b > bp)
            continue;
        const Amplitude ab = amps[b];
        const Amplitude abp = amps[bp];
        amps[bp] = pauli_phase(act, b) * ab;
        amps[b] = pauli_phase(act, bp) * abp;
    }
}

void apply_anticontrolled_pauli_product(StateVector& state, int control_qubit,
                                        const PauliProduct& product) {
    if (control_qubit < 0 || control_qubit >= state.num_qubits())
        throw std::invalid_argument("control qubit out of range");
    const std::size_t control_bit = std::size_t{1} << control_qubit;
    const PauliAction act = compile_pauli(product, state.num_qubits());
    if (act.flip_mask & control_bit)
        throw std::invalid_argument("pauli product must not act on the control qubit");
    if (act.z_mask & control_bit)
        throw std::invalid_argument("pauli product must not act on the control qubit");

    auto& amps = state.amplitudes();
    if (act.flip_mask == 0) {
        for (std::size_t b = 0; b < amps.size(); ++b)
            if (!(b & control_bit))
                amps[b] *= pauli_phase(act, b);
        return;
    }
    for (std::size_t b = 0; b < amps.size(); ++b) {
        if (b & control_bit)
            continue;
        const std::size_t bp = b ^ act.flip_mask;
        if (b > bp)
            continue;
        const Amplitude ab = amps[b];
        const Amplitude abp = amps[bp];
        amps[bp] = pauli_phase(act, b) * ab;
        amps[b] = pauli_phase(act, bp) * abp;
    }
}

double expectation_diagonal(const StateVector& state, const std::vector<double>& diagonal) {
    if (diagonal.size() != state.dimension())
        throw std::invalid_argument("diagonal dimension mismatch");
    double s = 0.0;
    const auto& amps = state.amplitudes();
    for (std::size_t b = 0; b < amps.size(); ++b)
        s += std::norm(amps[b]) * diagonal[b];
    return s;
}

double expectation_diagonal(const StateVector& state, const DiagonalCostOperator& cost) {
    if (cost.num_qubits() != state.num_qubits())
        throw std::invalid_argument("cost operator qubit count mismatch");
    return expectation_diagonal(state, cost.values());
}

double variance_diagonal(const StateVector& state, const std::vector<double>& diagonal) {
    if (diagonal.size() != state.dimension())
        throw std::invalid_argument("diagonal dimension mismatch");
    double mean = 0.0;
    double second = 0.0;
    const auto& amps = state.amplitudes();
    for (std::size_t b = 0; b < amps.size(); ++b) {
        const double p = std::norm(amps[b]);
        mean += p * diagonal[b];
        second += p * diagonal[b] * diagonal[b];
    }
    return second - mean * mean;
}

double variance_diagonal(const StateVector& state, const DiagonalCostOperator& cost) {
    if (cost.num_qubits() != state.num_qubits())
        throw std::invalid_argument("cost operator qubit count mismatch");
    return variance_diagonal(state, cost.values());
}

double expectation_pauli_product(const StateVector& state, const PauliProduct& product) {
    const PauliAction act = compile_pauli(product, state.num_qubits());
    const auto& amps = state.amplitudes();
    Amplitude s = 0.0;
    for (std::size_t b = 0; b < amps.size(); ++b) {
        const std::size_t bp = b ^ act.flip_mask;
        s += std::conj(amps[bp]) * pauli_phase(act, b) * amps[b];
    }
    return s.real();
}

Amplitude inner_product(const StateVector& bra, const StateVector& ket) {
    if (bra.dimension() != ket.dimension())
        throw std::invalid_argument("state dimension mismatch");
    Amplitude s = 0.0;
    for (std::size_t b = 0; b < bra.dimension(); ++b)
        s += std::conj(bra[b]) * ket[b];
    return s;
}

}  // namespace qaoa

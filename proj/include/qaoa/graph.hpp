#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qaoa {

using Edge = std::pair<int, int>;

// Undirected 3-regular graph defining a MAX-CUT problem. Edges are stored
// with first < second, sorted lexicographically, no self-loops or duplicates.
struct MaxCutInstance {
    int num_nodes = 0;
    std::vector<Edge> edges;
    int instance_id = 0;
    std::uint64_t seed = 0;

    // Validates 3-regularity and edge normalization; throws std::invalid_argument.
    static MaxCutInstance from_edges(int num_nodes, std::vector<Edge> edges,
                                     int instance_id, std::uint64_t seed);
};

// Spin assignment, one value in {+1, -1} per node.
using Assignment = std::vector<int>;

// Samples a random 3-regular graph via stub pairing: three stubs per node, a
// uniformly random perfect matching of the stubs, rejecting and redrawing the
// whole matching whenever it produces a self-loop or parallel edge.
// Deterministic for fixed (num_nodes, seed). num_nodes must be even and >= 4.
MaxCutInstance generate_random_3regular(int num_nodes, std::uint64_t seed);

// Number of cut edges: sum over edges of (1 - z_u * z_v) / 2.
double classical_objective(const MaxCutInstance& instance, const Assignment& assignment);

struct BruteForceResult {
    double max_value = 0.0;
    Assignment best_assignment;
};

// Exhaustive maximum over all 2^N assignments. Ties broken by the lowest
// binary encoding (bit i of the encoding is 0 for z_i = +1, 1 for z_i = -1).
// Guarded to num_nodes <= 30.
BruteForceResult brute_force_maximum(const MaxCutInstance& instance);

// JSON serialization, stable field order and edge order.
std::string instance_to_json(const MaxCutInstance& instance);
MaxCutInstance instance_from_json(const std::string& text);

void write_instance_file(const MaxCutInstance& instance, const std::string& path);
MaxCutInstance read_instance_file(const std::string& path);

}  // namespace qaoa

#include "qaoa/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qaoa/rng.hpp"

namespace qaoa {

MaxCutInstance MaxCutInstance::from_edges(int num_nodes, std::vector<Edge> edges,
                                          int instance_id, std::uint64_t seed) {
    if (num_nodes < 4 || num_nodes % 2 != 0)
        throw std::invalid_argument("num_nodes must be even and >= 4");
    if (edges.size() != static_cast<std::size_t>(3 * num_nodes / 2))
        throw std::invalid_argument("a 3-regular graph needs exactly 3N/2 edges");

    for (auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
            throw std::invalid_argument("edge endpoint out of range");
        if (a == b)
            throw std::invalid_argument("self-loops are not allowed");
        if (a > b)
            std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("parallel edges are not allowed");

    std::vector<int> degree(num_nodes, 0);
    for (const auto& [a, b] : edges) {
        ++degree[a];
        ++degree[b];
    }
    for (int d : degree)
        if (d != 3)
            throw std::invalid_argument("every node must have degree 3");

    MaxCutInstance inst;
    inst.num_nodes = num_nodes;
    inst.edges = std::move(edges);
    inst.instance_id = instance_id;
    inst.seed = seed;
    return inst;
}

MaxCutInstance generate_random_3regular(int num_nodes, std::uint64_t seed) {
    if (num_nodes < 4 || num_nodes % 2 != 0)
        throw std::invalid_argument("num_nodes must be even and >= 4");

    Rng rng(seed);
    std::vector<int> stubs(static_cast<std::size_t>(3 * num_nodes));
    for (int v = 0; v < num_nodes; ++v)
        stubs[3 * v] = stubs[3 * v + 1] = stubs[3 * v + 2] = v;

    std::vector<Edge> edges;
    for (;;) {
        // Fisher-Yates shuffle, then pair consecutive stubs.
        for (std::size_t i = stubs.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(stubs[i], stubs[j]);
        }
        edges.clear();
        bool valid = true;
        std::set<Edge> seen;
        for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
            int a = stubs[k], b = stubs[k + 1];
            if (a == b) {
                valid = false;
                break;
            }
            Edge e{std::min(a, b), std::max(a, b)};
            if (!seen.insert(e).second) {
                valid = false;
                break;
            }
            edges.push_back(e);
        }
        if (valid)
            break;
    }
    std::sort(edges.begin(), edges.end());
    MaxCutInstance inst;
    inst.num_nodes = num_nodes;
    inst.edges = std::move(edges);
    inst.instance_id = 0;
    inst.seed = seed;
    return inst;
}

double classical_objective(const MaxCutInstance& instance, const Assignment& assignment) {
    if (assignment.size() != static_cast<std::size_t>(instance.num_nodes))
        throw std::invalid_argument("assignment length must equal num_nodes");
    for (int z : assignment)
        if (z != 1 && z != -1)
            throw std::invalid_argument("assignment values must be +1 or -1");

    double total = 0.0;
    for (const auto& [a, b] : instance.edges)
        total += (1.0 - assignment[a] * assignment[b]) / 2.0;
    return total;
}

BruteForceResult brute_force_maximum(const MaxCutInstance& instance) {
    if (instance.num_nodes > 30)
        throw std::invalid_argument("brute force enumeration is limited to 30 nodes");

    const int n = instance.num_nodes;
    const std::uint32_t count = 1u << n;
    std::uint32_t best_code = 0;
    int best_cut = -1;
    for (std::uint32_t code = 0; code < count; ++code) {
        int cut = 0;
        for (const auto& [a, b] : instance.edges)
            cut += static_cast<int>(((code >> a) ^ (code >> b)) & 1u);
        if (cut > best_cut) {
            best_cut = cut;
            best_code = code;
        }
    }
    BruteForceResult result;
    result.max_value = static_cast<double>(best_cut);
    result.best_assignment.resize(n);
    for (int v = 0; v < n; ++v)
        result.best_assignment[v] = ((best_code >> v) & 1u) ? -1 : 1;
    return result;
}

namespace {

nlohmann::ordered_json instance_json(const MaxCutInstance& instance) {
    nlohmann::ordered_json j;
    j["num_nodes"] = instance.num_nodes;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : instance.edges)
        edges.push_back({a, b});
    j["edges"] = std::move(edges);
    j["instance_id"] = instance.instance_id;
    j["seed"] = instance.seed;
    return j;
}

}  // namespace

std::string instance_to_json(const MaxCutInstance& instance) {
    return instance_json(instance).dump(2) + "\n";
}

MaxCutInstance instance_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return MaxCutInstance::from_edges(j.at("num_nodes").get<int>(), std::move(edges),
                                      j.at("instance_id").get<int>(),
                                      j.at("seed").get<std::uint64_t>());
}

void write_instance_file(const MaxCutInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << instance_to_json(instance);
}

MaxCutInstance read_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return instance_from_json(text);
}

}  // namespace qaoa

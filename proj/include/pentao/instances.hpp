#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pentao/ising.hpp"
#include "pentao/rng.hpp"

namespace pentao {

/// Simple undirected graph, edges stored as (i, j) with i < j.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    friend bool operator==(const Graph &, const Graph &) = default;
};

/// Throws InputError if `g` has a loop, a repeated edge or an index outside [0, n).
void validate_graph(const Graph &g);
std::vector<int> degrees(const Graph &g);

namespace weights {
struct Unit {};
struct Poisson {
    double lambda = 1.0;
};
struct Normal {
    double mean = 0.0;
    double stddev = 1.0;
};
struct PlusMinusOne {};
} // namespace weights

using WeightDistribution =
    std::variant<weights::Unit, weights::Poisson, weights::Normal, weights::PlusMinusOne>;

std::string describe(const WeightDistribution &dist);

inline constexpr int kDefaultRegularRetries = 1000;

/// Random d-regular graph by the configuration (pairing) model, rejecting
/// pairings that produce loops or multi-edges.
Graph gen_regular(int n, int d, Seed seed, int max_attempts = kDefaultRegularRetries);

/// rows x cols lattice with 4-neighbour edges. Site (r, c) is vertex r*cols + c.
Graph grid_graph(int rows, int cols);

Graph complete_graph(int n);

IsingInstance assign_weights(const Graph &g, const WeightDistribution &dist, Seed seed);

/// Sherrington-Kirkpatrick couplings w_ij = +-1 on the complete graph with a
/// homogeneous field h0 on every spin.
IsingInstance gen_sk(int n, double h0, Seed seed);

/// Short-form graph6 (n <= 62). A trailing newline is tolerated; the
/// optional ">>graph6<<" header is accepted.
Graph parse_graph6(std::string_view text);
std::string encode_graph6(const Graph &g);
/// One graph per non-empty line.
std::vector<Graph> parse_graph6_lines(std::string_view text);

/// Lines "i j w" (coupling) or "i i w" (field); '#' starts a comment.
/// An optional "n <count>" line declares the qubit count, otherwise it is
/// one more than the largest index seen.
IsingInstance parse_edge_list(std::string_view text);

/// Field-free instance with weight `w` on every edge.
IsingInstance to_instance(const Graph &g, double w = 1.0, std::string label = {});

} // namespace pentao

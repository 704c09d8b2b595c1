#pragma once

#include <random>
#include <string>
#include <vector>

#include "gca/graph.hpp"

namespace gca_test {

inline gca::Graph make_graph(
    const std::vector<std::string>& vertices,
    const std::vector<std::array<std::string, 3>>& edges) {
  gca::GraphDescription d;
  d.vertices = vertices;
  d.edges = edges;
  return gca::Graph::validate(d);
}

// Vertices 1,2,3 with loops at 1 and 2 and edges 1->3, 2->3. The running
// small example: four-element ideal lattice, two circle tails, K0 = Z^2.
inline gca::Graph remark_graph() {
  return make_graph({"1", "2", "3"}, {{"a", "1", "1"},
                                      {"b", "2", "2"},
                                      {"c", "1", "3"},
                                      {"d", "2", "3"}});
}

// One vertex carrying n loops (the O_n pattern).
inline gca::Graph loops_graph(int n) {
  std::vector<std::array<std::string, 3>> edges;
  for (int i = 0; i < n; ++i)
    edges.push_back({"e" + std::to_string(i), "v", "v"});
  return make_graph({"v"}, edges);
}

// Seeded random multigraph on up to max_vertices vertices.
inline gca::Graph random_graph(std::mt19937_64& rng, int max_vertices,
                               int max_edges) {
  std::uniform_int_distribution<int> nv(1, max_vertices);
  int n = nv(rng);
  std::uniform_int_distribution<int> ne(0, max_edges);
  int m = ne(rng);
  std::vector<std::string> vertices;
  for (int i = 0; i < n; ++i) vertices.push_back("v" + std::to_string(i));
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<std::array<std::string, 3>> edges;
  for (int i = 0; i < m; ++i)
    edges.push_back({"e" + std::to_string(i), vertices[pick(rng)],
                     vertices[pick(rng)]});
  return make_graph(vertices, edges);
}

}  // namespace gca_test

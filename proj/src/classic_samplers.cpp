// Heat Bath and the cluster samplers (Swendsen-Wang, Wolff).

#include <cmath>
#include <vector>

#include "agpotts/samplers.hpp"

namespace agpotts {

double bond_probability(double beta, double coupling, BondConvention convention) {
  if (coupling <= 0.0) return 0.0;
  const double factor = convention == BondConvention::Indicator ? 1.0 : 2.0;
  return -std::expm1(-factor * beta * coupling);
}

void heat_bath_sweep(const PottsModel& model, Spins& x, RngStream& stream) {
  const Eigen::Index n = model.n();
  if (x.size() != n) throw DimensionMismatch("heat_bath_sweep: configuration size mismatch");
  const Eigen::MatrixXd& a = model.coupling.entries;
  const int q = model.q;
  // field(i, l) = sum_j A(i, j) 1{x_j = l}, refreshed once per sweep and kept
  // current through rank-one column updates.
  Eigen::MatrixXd field(n, q);
  field.noalias() = a * one_hot_matrix(x, q);
  Eigen::VectorXd logits(q);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int old_state = x(i);
    logits = model.beta * field.row(i).transpose();
    // The conditional excludes the j = i term.
    logits(old_state) -= model.beta * a(i, i);
    const int new_state = static_cast<int>(categorical_from_logweights(stream, logits));
    if (new_state != old_state) {
      field.col(old_state) -= a.col(i);
      field.col(new_state) += a.col(i);
      x(i) = new_state;
    }
  }
}

ClusterGraph make_cluster_graph(const PottsModel& model, BondConvention convention) {
  check_compatibility(SamplerKind::SwendsenWang, model);
  const Eigen::Index n = model.n();
  const Eigen::MatrixXd& a = model.coupling.entries;
  ClusterGraph graph;
  graph.q = model.q;
  graph.neighbors.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && a(i, j) > 0.0) {
        graph.neighbors[i].push_back(
            {static_cast<int>(j), bond_probability(model.beta, a(i, j), convention)});
      }
    }
  }
  return graph;
}

void swendsen_wang_step(const ClusterGraph& graph, Spins& x, RngStream& stream) {
  const auto n = static_cast<Eigen::Index>(graph.neighbors.size());
  if (x.size() != n) throw DimensionMismatch("swendsen_wang_step: configuration size mismatch");
  std::vector<char> assigned(n, 0);
  std::vector<int> stack;
  for (Eigen::Index root = 0; root < n; ++root) {
    if (assigned[root]) continue;
    // Bonds are tested lazily while the cluster grows; each edge is examined
    // at most once, which matches independent bond percolation. Unassigned
    // sites still carry their old state, so the in-place update is safe.
    const int old_state = x(root);
    const int new_state = static_cast<int>(stream.uniform_index(graph.q));
    assigned[root] = 1;
    x(root) = new_state;
    stack.assign(1, static_cast<int>(root));
    while (!stack.empty()) {
      const int site = stack.back();
      stack.pop_back();
      for (const auto& edge : graph.neighbors[site]) {
        if (assigned[edge.to] || x(edge.to) != old_state) continue;
        if (stream.uniform() < edge.p_bond) {
          assigned[edge.to] = 1;
          x(edge.to) = new_state;
          stack.push_back(edge.to);
        }
      }
    }
  }
}

void swendsen_wang_step(const PottsModel& model, Spins& x, RngStream& stream,
                        BondConvention convention) {
  swendsen_wang_step(make_cluster_graph(model, convention), x, stream);
}

std::size_t wolff_step(const ClusterGraph& graph, Spins& x, RngStream& stream) {
  const auto n = static_cast<Eigen::Index>(graph.neighbors.size());
  if (x.size() != n) throw DimensionMismatch("wolff_step: configuration size mismatch");
  const auto seed = static_cast<int>(stream.uniform_index(n));
  const int old_state = x(seed);
  const int new_state =
      graph.q == 2 ? 1 - old_state
                   : (old_state + 1 + static_cast<int>(stream.uniform_index(graph.q - 1))) % graph.q;
  // Sites join by taking new_state, so "still in old_state" doubles as the
  // not-yet-in-cluster test.
  x(seed) = new_state;
  std::size_t size = 1;
  std::vector<int> stack{seed};
  while (!stack.empty()) {
    const int site = stack.back();
    stack.pop_back();
    for (const auto& edge : graph.neighbors[site]) {
      if (x(edge.to) != old_state) continue;
      if (stream.uniform() < edge.p_bond) {
        x(edge.to) = new_state;
        stack.push_back(edge.to);
        ++size;
      }
    }
  }
  return size;
}

std::size_t wolff_step(const PottsModel& model, Spins& x, RngStream& stream,
                       BondConvention convention) {
  return wolff_step(make_cluster_graph(model, convention), x, stream);
}

}  // namespace agpotts

#pragma once

// End-to-end capacities by classical routing over per-edge channel values.
//
// Single-path: the widest route (maximal bottleneck edge) carries the value,
// equal to the minimum single-edge cut. Computed with a modified Dijkstra;
// cross-checkable against a maximum spanning tree (Kruskal) and against the
// brute-force cut oracle. Multipath: maximum flow from source to sink,
// equal to the minimum multi-edge cut. Computed with breadth-first shortest
// augmenting paths, whose augmentation count is bounded independently of the
// (real-valued) capacities.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qnetcap/network.hpp"

namespace qnetcap {

// Residual capacities at or below this are treated as saturated, so no
// infinitesimal augmenting paths are chased.
inline constexpr double kResidualTolerance = 1e-12;

struct Route {
  std::vector<std::string> points;  // simple path, source first
  int bottleneck_edge = -1;         // edge id realizing the minimum weight
};

struct WidestPathResult {
  CapacityValue capacity;
  Route route;
};

namespace detail {

struct WeightedArc {
  int to;
  int edge_pos;  // position in Network::edges()
  double weight;
};

inline std::vector<std::vector<WeightedArc>> weighted_adjacency(const Network& net,
                                                                const std::vector<double>& w) {
  std::vector<std::vector<WeightedArc>> adj(net.points().size());
  for (std::size_t k = 0; k < net.edges().size(); ++k) {
    const Edge& e = net.edges()[k];
    const int ui = net.point_index(e.u);
    const int vi = net.point_index(e.v);
    adj[ui].push_back({vi, static_cast<int>(k), w[k]});
    adj[vi].push_back({ui, static_cast<int>(k), w[k]});
  }
  return adj;
}

inline std::vector<double> edge_weights(const Network& net) {
  std::vector<double> w;
  w.reserve(net.edges().size());
  for (const Edge& e : net.edges()) {
    w.push_back(two_way_capacity(e.channel).bits);
  }
  return w;
}

inline Exactness network_exactness(const Network& net) {
  return net.all_edges_distillable() ? Exactness::Exact : Exactness::UpperBoundOnly;
}

}  // namespace detail

// Widest a-b path: maximizes the minimum edge weight along the route. Ties
// are broken toward fewer hops, then lexicographically smaller point
// sequences, so the witness is deterministic. Disconnected end-points give
// capacity 0 and an empty route.
inline WidestPathResult widest_path(const Network& net, const std::string& a,
                                    const std::string& b) {
  const int src = net.point_index(a);
  const int dst = net.point_index(b);
  if (src == dst) {
    throw std::invalid_argument("widest_path: end-points must differ");
  }
  const std::vector<double> weights = detail::edge_weights(net);
  const auto adj = detail::weighted_adjacency(net, weights);
  const std::size_t n = net.points().size();

  struct Label {
    double bottleneck;
    int hops;
    std::vector<int> path;
  };
  auto lex_less = [&](const std::vector<int>& x, const std::vector<int>& y) {
    return std::lexicographical_compare(
        x.begin(), x.end(), y.begin(), y.end(),
        [&](int p, int q) { return net.points()[p] < net.points()[q]; });
  };
  auto better = [&](const Label& x, const Label& y) {
    if (x.bottleneck != y.bottleneck) {
      return x.bottleneck > y.bottleneck;
    }
    if (x.hops != y.hops) {
      return x.hops < y.hops;
    }
    return lex_less(x.path, y.path);
  };

  std::vector<std::optional<Label>> best(n);
  std::vector<char> done(n, 0);
  best[src] = Label{kInfiniteBits, 0, {src}};
  while (true) {
    int u = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && best[i] && (u < 0 || better(*best[i], *best[u]))) {
        u = static_cast<int>(i);
      }
    }
    if (u < 0 || u == dst) {
      break;
    }
    done[u] = 1;
    for (const auto& arc : adj[u]) {
      if (done[arc.to]) {
        continue;
      }
      Label cand{std::min(best[u]->bottleneck, arc.weight), best[u]->hops + 1, best[u]->path};
      cand.path.push_back(arc.to);
      if (!best[arc.to] || better(cand, *best[arc.to])) {
        best[arc.to] = std::move(cand);
      }
    }
  }

  WidestPathResult result;
  result.capacity = {0.0, detail::network_exactness(net)};
  if (!best[dst]) {
    return result;  // disconnected
  }
  result.capacity.bits = best[dst]->bottleneck;

  // Realize the route: across parallel edges take the widest (smallest id on
  // ties); the bottleneck edge is the first of minimum weight along the path.
  const std::vector<int>& path = best[dst]->path;
  double min_w = kInfiniteBits;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    int chosen = -1;
    double chosen_w = -1.0;
    for (const auto& arc : adj[path[i]]) {
      if (arc.to != path[i + 1]) {
        continue;
      }
      const int id = net.edges()[arc.edge_pos].id;
      if (chosen < 0 || arc.weight > chosen_w || (arc.weight == chosen_w && id < chosen)) {
        chosen = id;
        chosen_w = arc.weight;
      }
    }
    if (chosen_w < min_w) {
      min_w = chosen_w;
      result.route.bottleneck_edge = chosen;
    }
  }
  for (int p : path) {
    result.route.points.push_back(net.points()[p]);
  }
  return result;
}

// Maximum-weight spanning tree (forest on disconnected networks) by Kruskal
// over (weight descending, id ascending). Returns edge ids, ascending.
inline std::vector<int> maximum_spanning_tree(const Network& net) {
  const std::vector<double> weights = detail::edge_weights(net);
  std::vector<std::size_t> order(net.edges().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (weights[x] != weights[y]) {
      return weights[x] > weights[y];
    }
    return net.edges()[x].id < net.edges()[y].id;
  });

  std::vector<int> parent(net.points().size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };

  std::vector<int> tree;
  for (std::size_t k : order) {
    const Edge& e = net.edges()[k];
    const int ru = root(net.point_index(e.u));
    const int rv = root(net.point_index(e.v));
    if (ru != rv) {
      parent[ru] = rv;
      tree.push_back(e.id);
    }
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

struct FlowAssignment {
  double value = 0.0;
  // Signed effective rate per edge, aligned with Network::edges(); positive
  // means flow from u to v.
  std::vector<double> edge_rates;
  // side_a = points reachable from the source in the final residual graph.
  Cut min_cut;
};

// Maximum flow from a to b with per-edge capacities from two_way_capacity.
// Undirected edges carry capacity in both directions; infinite capacities are
// run with a finite surrogate and the value is reported as +infinity exactly
// when the resulting minimum cut crosses an infinite edge.
inline FlowAssignment max_flow(const Network& net, const std::string& a, const std::string& b) {
  const int src = net.point_index(a);
  const int dst = net.point_index(b);
  if (src == dst) {
    throw std::invalid_argument("max_flow: end-points must differ");
  }
  const std::size_t n = net.points().size();
  const std::size_t m = net.edges().size();
  const std::vector<double> weights = detail::edge_weights(net);

  double finite_sum = 0.0;
  for (double w : weights) {
    if (std::isfinite(w)) {
      finite_sum += w;
    }
  }
  const double surrogate = 1.0 + finite_sum;

  // Arc 2k is u->v of edge k, arc 2k+1 its reverse; both start at the edge
  // capacity, so the net edge rate is (residual[2k+1] - residual[2k]) / 2.
  std::vector<double> residual(2 * m);
  std::vector<int> head(2 * m);
  std::vector<std::vector<int>> arcs_at(n);
  for (std::size_t k = 0; k < m; ++k) {
    const Edge& e = net.edges()[k];
    const int ui = net.point_index(e.u);
    const int vi = net.point_index(e.v);
    const double cap = std::isfinite(weights[k]) ? weights[k] : surrogate;
    head[2 * k] = vi;
    head[2 * k + 1] = ui;
    residual[2 * k] = cap;
    residual[2 * k + 1] = cap;
    arcs_at[ui].push_back(static_cast<int>(2 * k));
    arcs_at[vi].push_back(static_cast<int>(2 * k + 1));
  }

  std::vector<int> prev_arc(n);
  auto bfs = [&]() {
    std::fill(prev_arc.begin(), prev_arc.end(), -1);
    prev_arc[src] = -2;
    std::deque<int> queue{src};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int arc : arcs_at[u]) {
        if (residual[arc] > kResidualTolerance && prev_arc[head[arc]] == -1) {
          prev_arc[head[arc]] = arc;
          if (head[arc] == dst) {
            return true;
          }
          queue.push_back(head[arc]);
        }
      }
    }
    return false;
  };

  double value = 0.0;
  while (bfs()) {
    double push = kInfiniteBits;
    for (int v = dst; v != src;) {
      const int arc = prev_arc[v];
      push = std::min(push, residual[arc]);
      v = head[arc ^ 1];
    }
    for (int v = dst; v != src;) {
      const int arc = prev_arc[v];
      residual[arc] -= push;
      residual[arc ^ 1] += push;
      v = head[arc ^ 1];
    }
    value += push;
  }

  // Residual-reachable side of the minimum cut.
  std::vector<char> in_a(n, 0);
  in_a[src] = 1;
  std::deque<int> queue{src};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int arc : arcs_at[u]) {
      if (residual[arc] > kResidualTolerance && !in_a[head[arc]]) {
        in_a[head[arc]] = 1;
        queue.push_back(head[arc]);
      }
    }
  }

  FlowAssignment out;
  out.edge_rates.resize(m);
  bool crosses_infinite = false;
  for (std::size_t k = 0; k < m; ++k) {
    const double rate = (residual[2 * k + 1] - residual[2 * k]) / 2.0;
    out.edge_rates[k] = std::abs(rate) <= kResidualTolerance ? 0.0 : rate;
    const int ui = net.point_index(net.edges()[k].u);
    const int vi = net.point_index(net.edges()[k].v);
    if (in_a[ui] != in_a[vi] && !std::isfinite(weights[k])) {
      crosses_infinite = true;
    }
  }
  out.value = crosses_infinite ? kInfiniteBits : value;
  for (std::size_t i = 0; i < n; ++i) {
    (in_a[i] ? out.min_cut.side_a : out.min_cut.side_b).push_back(net.points()[i]);
  }
  std::sort(out.min_cut.side_a.begin(), out.min_cut.side_a.end());
  std::sort(out.min_cut.side_b.begin(), out.min_cut.side_b.end());
  return out;
}

enum class CutMode { SingleEdge, MultiEdge };

struct MinCutResult {
  CapacityValue value;
  Cut witness;
  std::uint64_t index = 0;  // position in the deterministic enumeration
};

// Exact minimum over all enumerated cuts of the selected functional. Ties are
// resolved by enumeration order. Subject to the free-point cap.
inline MinCutResult min_cut_bruteforce(const Network& net,
                                       const std::vector<std::string>& sources,
                                       const std::vector<std::string>& sinks, CutMode mode) {
  const CutEnumeration cuts(net, sources, sinks);
  const std::vector<double> weights = detail::edge_weights(net);
  std::vector<std::pair<int, int>> ends;
  ends.reserve(net.edges().size());
  for (const Edge& e : net.edges()) {
    ends.emplace_back(net.point_index(e.u), net.point_index(e.v));
  }

  double best = kInfiniteBits;
  std::uint64_t best_index = 0;
  bool found = false;
  for (std::uint64_t idx = 0; idx < cuts.count(); ++idx) {
    const std::vector<char> in_a = cuts.side_flags(idx);
    double value = 0.0;
    for (std::size_t k = 0; k < ends.size(); ++k) {
      if (in_a[ends[k].first] != in_a[ends[k].second]) {
        value = mode == CutMode::MultiEdge ? value + weights[k] : std::max(value, weights[k]);
      }
    }
    if (!found || value < best) {
      best = value;
      best_index = idx;
      found = true;
    }
  }

  MinCutResult result;
  result.witness = cuts.at(best_index);
  result.index = best_index;
  result.value = mode == CutMode::MultiEdge ? cut_capacity_multi_edge(net, result.witness)
                                            : cut_capacity_single_edge(net, result.witness);
  return result;
}

struct UnicastReport {
  CapacityValue value;
  std::optional<Route> route;          // single-path witness, exact networks only
  std::optional<FlowAssignment> flow;  // multipath witness, exact networks only
  Cut witness_cut;
};

namespace detail {

// Cut achieving the widest-path value: the source side is everything
// reachable through edges strictly wider than the path bottleneck.
inline Cut widest_path_witness_cut(const Network& net, const std::string& a, double bottleneck) {
  const std::vector<double> weights = edge_weights(net);
  const auto adj = weighted_adjacency(net, weights);
  std::vector<char> in_a(net.points().size(), 0);
  in_a[net.point_index(a)] = 1;
  std::deque<int> queue{net.point_index(a)};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (const auto& arc : adj[u]) {
      if (arc.weight > bottleneck && !in_a[arc.to]) {
        in_a[arc.to] = 1;
        queue.push_back(arc.to);
      }
    }
  }
  Cut cut;
  for (std::size_t i = 0; i < in_a.size(); ++i) {
    (in_a[i] ? cut.side_a : cut.side_b).push_back(net.points()[i]);
  }
  std::sort(cut.side_a.begin(), cut.side_a.end());
  std::sort(cut.side_b.begin(), cut.side_b.end());
  return cut;
}

}  // namespace detail

// Single-path value with witnesses: equals both the widest-path bottleneck
// and the minimum single-edge cut. The route witness is reported only when
// the value is an exact capacity.
inline UnicastReport single_path_capacity(const Network& net, const std::string& a,
                                          const std::string& b) {
  WidestPathResult wp = widest_path(net, a, b);
  UnicastReport report;
  report.value = wp.capacity;
  report.witness_cut = detail::widest_path_witness_cut(net, a, wp.capacity.bits);
  if (is_exact(report.value) && !wp.route.points.empty()) {
    report.route = std::move(wp.route);
  }
  return report;
}

// Multipath value with witnesses: the maximum flow, equal to the minimum
// multi-edge cut. The flow witness is reported only when exact.
inline UnicastReport multipath_capacity(const Network& net, const std::string& a,
                                        const std::string& b) {
  FlowAssignment flow = max_flow(net, a, b);
  UnicastReport report;
  report.value = {flow.value, detail::network_exactness(net)};
  report.witness_cut = flow.min_cut;
  if (is_exact(report.value)) {
    report.flow = std::move(flow);
  }
  return report;
}

}  // namespace qnetcap

#pragma once

// Outer bounds for simultaneous end-to-end communication: multiple unicast
// sessions, one-to-many multicast, and many-to-many multicast. Each bound is
// the minimum of a cut functional over the cuts separating the constrained
// end-points; results are rate-region constraints, not capacities. The
// single-key multicast lower bound is the one achievability statement, valid
// on fully distillable networks.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnetcap/network.hpp"
#include "qnetcap/routing.hpp"

namespace qnetcap {

enum class RoutingMode { SinglePath, MultiPath };

struct RateConstraint {
  std::vector<int> sessions;  // ascending session indices; sum of their rates is bounded
  CapacityValue bound;
  Cut witness;
};

struct RateRegionBounds {
  std::vector<RateConstraint> constraints;  // ordered by subset bitmask
};

// All 2^M - 1 nonempty subsets are reported for M <= 6 sessions; beyond that
// the caller must pass an explicit subset list.
inline constexpr int kMaxImplicitSubsetSessions = 6;

namespace detail {

inline std::vector<std::vector<int>> all_nonempty_subsets(int m) {
  std::vector<std::vector<int>> subsets;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        subset.push_back(i);
      }
    }
    subsets.push_back(std::move(subset));
  }
  return subsets;
}

inline void require_distinct_points(const Network& net, const std::vector<std::string>& names,
                                    const std::string& what) {
  std::set<std::string> seen;
  for (const auto& name : names) {
    net.point_index(name);
    if (!seen.insert(name).second) {
      throw std::invalid_argument(what + ": point '" + name + "' appears more than once");
    }
  }
}

}  // namespace detail

inline RateRegionBounds multi_unicast_bounds(
    const Network& net, const std::vector<std::pair<std::string, std::string>>& pairs,
    RoutingMode routing, std::optional<std::vector<std::vector<int>>> subsets = std::nullopt) {
  if (pairs.empty()) {
    throw std::invalid_argument("multi_unicast: at least one sender-receiver pair is required");
  }
  std::vector<std::string> endpoints;
  for (const auto& [a, b] : pairs) {
    endpoints.push_back(a);
    endpoints.push_back(b);
  }
  detail::require_distinct_points(net, endpoints, "multi_unicast");
  if (!subsets) {
    if (pairs.size() > kMaxImplicitSubsetSessions) {
      throw std::invalid_argument(
          "multi_unicast: more than " + std::to_string(kMaxImplicitSubsetSessions) +
          " sessions; pass an explicit subset list");
    }
    subsets = detail::all_nonempty_subsets(static_cast<int>(pairs.size()));
  }

  const CutMode mode = routing == RoutingMode::SinglePath ? CutMode::SingleEdge : CutMode::MultiEdge;
  RateRegionBounds region;
  for (const auto& subset : *subsets) {
    std::vector<std::string> sources;
    std::vector<std::string> sinks;
    for (int i : subset) {
      if (i < 0 || i >= static_cast<int>(pairs.size())) {
        throw std::invalid_argument("multi_unicast: session index out of range");
      }
      sources.push_back(pairs[i].first);
      sinks.push_back(pairs[i].second);
    }
    MinCutResult cut = min_cut_bruteforce(net, sources, sinks, mode);
    region.constraints.push_back({subset, cut.value, std::move(cut.witness)});
  }
  return region;
}

struct MulticastReport {
  RateRegionBounds region;
  // min over receivers of the unicast multipath value; the symmetric rate
  // achievable toward every receiver at once cannot exceed it.
  CapacityValue symmetric_bound;
};

inline MulticastReport multicast_bounds(
    const Network& net, const std::string& source, const std::vector<std::string>& receivers,
    std::optional<std::vector<std::vector<int>>> subsets = std::nullopt) {
  if (receivers.empty()) {
    throw std::invalid_argument("multicast: at least one receiver is required");
  }
  std::vector<std::string> endpoints = receivers;
  endpoints.push_back(source);
  detail::require_distinct_points(net, endpoints, "multicast");
  if (!subsets) {
    if (static_cast<int>(receivers.size()) > kMaxImplicitSubsetSessions) {
      throw std::invalid_argument(
          "multicast: more than " + std::to_string(kMaxImplicitSubsetSessions) +
          " receivers; pass an explicit subset list");
    }
    subsets = detail::all_nonempty_subsets(static_cast<int>(receivers.size()));
  }

  MulticastReport report;
  for (const auto& subset : *subsets) {
    std::vector<std::string> sinks;
    for (int i : subset) {
      if (i < 0 || i >= static_cast<int>(receivers.size())) {
        throw std::invalid_argument("multicast: receiver index out of range");
      }
      sinks.push_back(receivers[i]);
    }
    MinCutResult cut = min_cut_bruteforce(net, {source}, sinks, CutMode::MultiEdge);
    report.region.constraints.push_back({subset, cut.value, std::move(cut.witness)});
  }

  report.symmetric_bound = {kInfiniteBits, detail::network_exactness(net)};
  for (const auto& r : receivers) {
    report.symmetric_bound.bits = std::min(report.symmetric_bound.bits, max_flow(net, source, r).value);
  }
  return report;
}

// Sum-rate bounds over sender subsets; the receiver constraint is
// existential, so bipartitions of the non-pinned points are enumerated and
// filtered for having at least one receiver on side B.
inline RateRegionBounds multiple_multicast_bounds(
    const Network& net, const std::vector<std::string>& senders,
    const std::vector<std::string>& receivers,
    std::optional<std::vector<std::vector<int>>> subsets = std::nullopt) {
  if (senders.empty() || receivers.empty()) {
    throw std::invalid_argument("multi_multicast: senders and receivers must be non-empty");
  }
  std::vector<std::string> endpoints = senders;
  endpoints.insert(endpoints.end(), receivers.begin(), receivers.end());
  detail::require_distinct_points(net, endpoints, "multi_multicast");
  if (!subsets) {
    if (static_cast<int>(senders.size()) > kMaxImplicitSubsetSessions) {
      throw std::invalid_argument(
          "multi_multicast: more than " + std::to_string(kMaxImplicitSubsetSessions) +
          " senders; pass an explicit subset list");
    }
    subsets = detail::all_nonempty_subsets(static_cast<int>(senders.size()));
  }

  std::vector<int> receiver_idx;
  for (const auto& r : receivers) {
    receiver_idx.push_back(net.point_index(r));
  }
  const std::vector<double> weights = detail::edge_weights(net);
  std::vector<std::pair<int, int>> ends;
  for (const Edge& e : net.edges()) {
    ends.emplace_back(net.point_index(e.u), net.point_index(e.v));
  }

  RateRegionBounds region;
  for (const auto& subset : *subsets) {
    std::vector<std::string> pinned;
    for (int i : subset) {
      if (i < 0 || i >= static_cast<int>(senders.size())) {
        throw std::invalid_argument("multi_multicast: sender index out of range");
      }
      pinned.push_back(senders[i]);
    }
    const CutEnumeration cuts(net, pinned, {});
    double best = kInfiniteBits;
    std::optional<std::uint64_t> best_index;
    for (std::uint64_t idx = 0; idx < cuts.count(); ++idx) {
      const std::vector<char> in_a = cuts.side_flags(idx);
      bool receiver_in_b = false;
      for (int r : receiver_idx) {
        if (!in_a[r]) {
          receiver_in_b = true;
          break;
        }
      }
      if (!receiver_in_b) {
        continue;
      }
      double value = 0.0;
      for (std::size_t k = 0; k < ends.size(); ++k) {
        if (in_a[ends[k].first] != in_a[ends[k].second]) {
          value += weights[k];
        }
      }
      if (!best_index || value < best) {
        best = value;
        best_index = idx;
      }
    }
    if (!best_index) {
      throw std::invalid_argument("multi_multicast: no cut satisfies the receiver constraint");
    }
    Cut witness = cuts.at(*best_index);
    region.constraints.push_back({subset, cut_capacity_multi_edge(net, witness), std::move(witness)});
  }
  return region;
}

// Rate at which one sender can share a single common key with every receiver,
// achievable by composing per-edge exact capacities with linear network
// coding. Requires every edge to be distillable.
inline CapacityValue single_key_multicast_lower_bound(const Network& net,
                                                      const std::string& source,
                                                      const std::vector<std::string>& receivers) {
  if (receivers.empty()) {
    throw std::invalid_argument("single_key: at least one receiver is required");
  }
  std::vector<std::string> endpoints = receivers;
  endpoints.push_back(source);
  detail::require_distinct_points(net, endpoints, "single_key");
  if (!net.all_edges_distillable()) {
    throw std::domain_error(
        "single_key: achievability needs exact per-edge capacities, but the network has "
        "non-distillable edges");
  }
  CapacityValue bound{kInfiniteBits, Exactness::Exact};
  for (const auto& r : receivers) {
    bound.bits = std::min(bound.bits, max_flow(net, source, r).value);
  }
  return bound;
}

}  // namespace qnetcap

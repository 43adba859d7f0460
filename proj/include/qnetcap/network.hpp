#pragma once

// Undirected multigraph of named points with channel-labelled edges, JSON
// ingestion, entanglement-cut enumeration and per-cut capacity functionals.
//
// A cut bipartitions the points into side A (holding the designated sources)
// and side B (holding the sinks). Its single-edge capacity is the maximum
// per-edge value over the crossing edges; its multi-edge capacity is their
// sum. Per-edge values come from two_way_capacity, so they are exact for
// distillable edges and REE upper bounds otherwise.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qnetcap/channel.hpp"

namespace qnetcap {

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct enumeration_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  std::string u;
  std::string v;
  Channel channel;
  int id = -1;  // negative on input = assign the list position
};

class Network {
 public:
  Network(std::vector<std::string> points, std::vector<Edge> edges)
      : points_(std::move(points)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].empty()) {
        throw std::invalid_argument("network: point names must be non-empty");
      }
      if (!index_.emplace(points_[i], static_cast<int>(i)).second) {
        throw std::invalid_argument("network: duplicate point name '" + points_[i] + "'");
      }
    }
    std::set<int> ids;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      Edge& e = edges_[i];
      if (e.u == e.v) {
        throw std::invalid_argument("network: self-loop at point '" + e.u + "'");
      }
      if (!index_.count(e.u)) {
        throw std::invalid_argument("network: edge references unknown point '" + e.u + "'");
      }
      if (!index_.count(e.v)) {
        throw std::invalid_argument("network: edge references unknown point '" + e.v + "'");
      }
      if (e.id < 0) {
        e.id = static_cast<int>(i);
      }
      if (!ids.insert(e.id).second) {
        throw std::invalid_argument("network: duplicate edge id " + std::to_string(e.id));
      }
    }
  }

  const std::vector<std::string>& points() const { return points_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_point(const std::string& name) const { return index_.count(name) != 0; }

  int point_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) {
      throw std::invalid_argument("network: unknown point '" + name + "'");
    }
    return it->second;
  }

  const Edge& edge_by_id(int id) const {
    for (const Edge& e : edges_) {
      if (e.id == id) {
        return e;
      }
    }
    throw std::invalid_argument("network: unknown edge id " + std::to_string(id));
  }

  bool all_edges_distillable() const {
    for (const Edge& e : edges_) {
      if (!is_distillable(e.channel)) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<std::string> points_;
  std::vector<Edge> edges_;
  std::map<std::string, int> index_;
};

// --- JSON ingestion ---------------------------------------------------------

inline Channel channel_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw parse_error(where + ": channel must be an object with a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  auto num = [&](const char* field) -> double {
    if (!j.contains(field) || !j.at(field).is_number()) {
      throw parse_error(where + ": channel kind '" + kind + "' needs numeric field '" + field +
                        "'");
    }
    return j.at(field).get<double>();
  };
  try {
    if (kind == "lossy") {
      return Channel::lossy(num("eta"));
    }
    if (kind == "amplifier") {
      return Channel::amplifier(num("g"));
    }
    if (kind == "thermal_loss") {
      return Channel::thermal_loss(num("eta"), num("nbar"));
    }
    if (kind == "noisy_amplifier") {
      return Channel::noisy_amplifier(num("g"), num("nbar"));
    }
    if (kind == "additive_noise") {
      return Channel::additive_noise(num("xi"));
    }
    if (kind == "dephasing") {
      if (!j.contains("probs") || !j.at("probs").is_array()) {
        throw parse_error(where + ": dephasing needs array field 'probs'");
      }
      return Channel::dephasing(j.at("probs").get<std::vector<double>>());
    }
    if (kind == "erasure") {
      const int d = j.contains("d") ? j.at("d").get<int>() : 2;
      return Channel::erasure(num("p"), d);
    }
    if (kind == "pauli") {
      if (!j.contains("probs") || !j.at("probs").is_array() || j.at("probs").size() != 4) {
        throw parse_error(where + ": pauli needs a 4-entry array field 'probs'");
      }
      const auto v = j.at("probs").get<std::vector<double>>();
      return Channel::pauli({v[0], v[1], v[2], v[3]});
    }
    if (kind == "multiband") {
      if (!j.contains("inner")) {
        throw parse_error(where + ": multiband needs field 'inner'");
      }
      const int bands = j.contains("bands") ? j.at("bands").get<int>() : 1;
      return Channel::multiband(bands, channel_from_json(j.at("inner"), where + ".inner"));
    }
  } catch (const std::domain_error& e) {
    throw parse_error(where + ": " + e.what());
  }
  throw parse_error(where + ": unknown channel kind '" + kind + "'");
}

inline nlohmann::json channel_to_json(const Channel& c) {
  using nlohmann::json;
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LossyChannel>) {
          return {{"kind", "lossy"}, {"eta", m.eta}};
        } else if constexpr (std::is_same_v<T, QLimAmplifierChannel>) {
          return {{"kind", "amplifier"}, {"g", m.gain}};
        } else if constexpr (std::is_same_v<T, ThermalLossChannel>) {
          return {{"kind", "thermal_loss"}, {"eta", m.eta}, {"nbar", m.nbar}};
        } else if constexpr (std::is_same_v<T, NoisyAmplifierChannel>) {
          return {{"kind", "noisy_amplifier"}, {"g", m.gain}, {"nbar", m.nbar}};
        } else if constexpr (std::is_same_v<T, AdditiveNoiseChannel>) {
          return {{"kind", "additive_noise"}, {"xi", m.xi}};
        } else if constexpr (std::is_same_v<T, DephasingChannel>) {
          return {{"kind", "dephasing"}, {"probs", m.probs}};
        } else if constexpr (std::is_same_v<T, ErasureChannel>) {
          return {{"kind", "erasure"}, {"p", m.p}, {"d", m.dim}};
        } else if constexpr (std::is_same_v<T, PauliQubitChannel>) {
          return {{"kind", "pauli"},
                  {"probs", std::vector<double>(m.probs.begin(), m.probs.end())}};
        } else {
          static_assert(std::is_same_v<T, MultibandChannel>);
          return {{"kind", "multiband"}, {"bands", m.bands}, {"inner", channel_to_json(*m.inner)}};
        }
      },
      c.model());
}

inline Network parse_network(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    throw parse_error("network: top-level JSON value must be an object");
  }
  if (!doc.contains("points") || !doc.at("points").is_array()) {
    throw parse_error("network: missing array field 'points'");
  }
  std::vector<std::string> points;
  for (std::size_t i = 0; i < doc.at("points").size(); ++i) {
    const auto& p = doc.at("points")[i];
    if (!p.is_string()) {
      throw parse_error("network: points[" + std::to_string(i) + "] must be a string");
    }
    points.push_back(p.get<std::string>());
  }
  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    if (!doc.at("edges").is_array()) {
      throw parse_error("network: 'edges' must be an array");
    }
    for (std::size_t i = 0; i < doc.at("edges").size(); ++i) {
      const auto& je = doc.at("edges")[i];
      const std::string where = "network: edges[" + std::to_string(i) + "]";
      if (!je.is_object() || !je.contains("u") || !je.contains("v") || !je.contains("channel")) {
        throw parse_error(where + " must be an object with 'u', 'v' and 'channel'");
      }
      Edge e{je.at("u").get<std::string>(), je.at("v").get<std::string>(),
             channel_from_json(je.at("channel"), where + ".channel"),
             je.contains("id") ? je.at("id").get<int>() : -1};
      edges.push_back(std::move(e));
    }
  }
  try {
    return Network(std::move(points), std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
}

inline Network parse_network(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("network: invalid JSON: ") + e.what());
  }
  return parse_network(doc);
}

// --- Cuts -------------------------------------------------------------------

struct Cut {
  std::vector<std::string> side_a;  // sorted; holds the sources
  std::vector<std::string> side_b;  // sorted; holds the sinks
};

struct CutSet {
  std::vector<int> edge_ids;  // crossing edges, in network edge order
};

namespace detail {

// Per-point side flags for a cut; true = side A. Throws if the cut is not a
// bipartition of the network's points.
inline std::vector<char> side_flags(const Network& net, const Cut& cut) {
  std::vector<char> in_a(net.points().size(), 0);
  std::vector<char> seen(net.points().size(), 0);
  for (const auto& name : cut.side_a) {
    const int i = net.point_index(name);
    in_a[i] = 1;
    seen[i] = 1;
  }
  for (const auto& name : cut.side_b) {
    const int i = net.point_index(name);
    if (seen[i]) {
      throw std::invalid_argument("cut: point '" + name + "' appears on both sides");
    }
    seen[i] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw std::invalid_argument("cut: point '" + net.points()[i] + "' missing from both sides");
    }
  }
  return in_a;
}

}  // namespace detail

inline CutSet cut_set(const Network& net, const Cut& cut) {
  const std::vector<char> in_a = detail::side_flags(net, cut);
  CutSet cs;
  for (const Edge& e : net.edges()) {
    if (in_a[net.point_index(e.u)] != in_a[net.point_index(e.v)]) {
      cs.edge_ids.push_back(e.id);
    }
  }
  return cs;
}

namespace detail {

inline CapacityValue cut_capacity(const Network& net, const Cut& cut, bool sum) {
  const std::vector<char> in_a = side_flags(net, cut);
  double value = 0.0;
  bool exact = true;
  for (const Edge& e : net.edges()) {
    if (in_a[net.point_index(e.u)] == in_a[net.point_index(e.v)]) {
      continue;
    }
    const double w = two_way_capacity(e.channel).bits;
    value = sum ? value + w : std::max(value, w);
    exact = exact && is_distillable(e.channel);
  }
  return {value, exact ? Exactness::Exact : Exactness::UpperBoundOnly};
}

}  // namespace detail

// max over crossing edges; an empty cut-set (disconnected end-points) gives 0.
inline CapacityValue cut_capacity_single_edge(const Network& net, const Cut& cut) {
  return detail::cut_capacity(net, cut, /*sum=*/false);
}

// sum over crossing edges.
inline CapacityValue cut_capacity_multi_edge(const Network& net, const Cut& cut) {
  return detail::cut_capacity(net, cut, /*sum=*/true);
}

// Deterministic enumeration of the cuts separating `sources` from `sinks`:
// free points (all others, in lexicographic name order) are assigned by binary
// counting, bit j of the index sending free point j to side B. Restartable
// from any index.
class CutEnumeration {
 public:
  static constexpr std::size_t kMaxFreePoints = 22;

  CutEnumeration(const Network& net, const std::vector<std::string>& sources,
                 const std::vector<std::string>& sinks)
      : net_(&net), base_in_a_(net.points().size(), 0), pinned_(net.points().size(), 0) {
    for (const auto& s : sources) {
      const int i = net.point_index(s);
      base_in_a_[i] = 1;
      pinned_[i] = 1;
    }
    for (const auto& t : sinks) {
      const int i = net.point_index(t);
      if (pinned_[i] && base_in_a_[i]) {
        throw std::invalid_argument("enumerate_cuts: point '" + t +
                                    "' is both a source and a sink");
      }
      pinned_[i] = 1;
    }
    std::vector<std::string> free_names;
    for (std::size_t i = 0; i < net.points().size(); ++i) {
      if (!pinned_[i]) {
        free_names.push_back(net.points()[i]);
      }
    }
    std::sort(free_names.begin(), free_names.end());
    if (free_names.size() > kMaxFreePoints) {
      throw enumeration_limit_error(
          "enumerate_cuts: " + std::to_string(free_names.size()) +
          " free points exceed the enumeration cap of " + std::to_string(kMaxFreePoints) +
          "; use the algorithmic routines (widest path / max flow) instead");
    }
    for (const auto& name : free_names) {
      free_.push_back(net.point_index(name));
    }
  }

  std::uint64_t count() const { return std::uint64_t{1} << free_.size(); }

  // Side flags (true = side A) for the cut at `index`.
  std::vector<char> side_flags(std::uint64_t index) const {
    std::vector<char> in_a = base_in_a_;
    for (std::size_t j = 0; j < free_.size(); ++j) {
      if (!((index >> j) & 1u)) {
        in_a[free_[j]] = 1;
      }
    }
    return in_a;
  }

  Cut at(std::uint64_t index) const {
    if (index >= count()) {
      throw std::out_of_range("enumerate_cuts: cut index out of range");
    }
    const std::vector<char> in_a = side_flags(index);
    Cut cut;
    for (std::size_t i = 0; i < in_a.size(); ++i) {
      (in_a[i] ? cut.side_a : cut.side_b).push_back(net_->points()[i]);
    }
    std::sort(cut.side_a.begin(), cut.side_a.end());
    std::sort(cut.side_b.begin(), cut.side_b.end());
    return cut;
  }

  const Network& network() const { return *net_; }
  std::size_t free_point_count() const { return free_.size(); }

 private:
  const Network* net_;
  std::vector<char> base_in_a_;
  std::vector<char> pinned_;
  std::vector<int> free_;  // point indices in lexicographic name order
};

inline CutEnumeration enumerate_cuts(const Network& net, const std::vector<std::string>& sources,
                                     const std::vector<std::string>& sinks) {
  return CutEnumeration(net, sources, sinks);
}

}  // namespace qnetcap

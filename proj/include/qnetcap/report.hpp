#pragma once

// Deterministic report construction and serialization. Floating values are
// printed with 12 significant digits, infinities render as "inf" (a JSON
// string, never a non-standard literal), object keys are sorted, and witness
// tie-breaking upstream is deterministic, so identical inputs produce
// byte-identical reports. Unit conversion to nats happens here and only here.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qnetcap/chain.hpp"
#include "qnetcap/multiuser.hpp"
#include "qnetcap/network.hpp"
#include "qnetcap/routing.hpp"

namespace qnetcap {

enum class Units { Bits, Nats };

inline double unit_scale(Units u) { return u == Units::Bits ? 1.0 : std::numbers::ln2; }

inline std::string units_name(Units u) { return u == Units::Bits ? "bits" : "nats"; }

inline std::string format_value(double v) {
  if (std::isinf(v)) {
    return "inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string exactness_name(Exactness e) {
  return e == Exactness::Exact ? "exact" : "upper_bound";
}

// --- JSON writer -------------------------------------------------------------

namespace detail {

inline void write_json(std::ostream& os, const nlohmann::json& j, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) {
          os << ",\n";
        }
        first = false;
        os << pad_in << nlohmann::json(it.key()).dump() << ": ";
        write_json(os, it.value(), depth + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad_in;
        write_json(os, j[i], depth + 1);
        if (i + 1 < j.size()) {
          os << ",";
        }
        os << "\n";
      }
      os << pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isinf(v)) {
        os << "\"inf\"";
      } else {
        os << format_value(v);
      }
      return;
    }
    default:
      os << j.dump();
      return;
  }
}

}  // namespace detail

inline std::string dump_json_report(const nlohmann::json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 0);
  os << "\n";
  return os.str();
}

// --- Report fragments ---------------------------------------------------------

inline nlohmann::json capacity_to_json(const CapacityValue& v, Units units) {
  return {{"value", v.bits * unit_scale(units)}, {"exactness", exactness_name(v.exactness)}};
}

inline nlohmann::json cut_to_json(const Network& net, const Cut& cut) {
  return {{"side_a", cut.side_a},
          {"side_b", cut.side_b},
          {"cut_set", cut_set(net, cut).edge_ids}};
}

inline nlohmann::json route_to_json(const Route& route) {
  return {{"points", route.points}, {"bottleneck_edge", route.bottleneck_edge}};
}

inline nlohmann::json flow_to_json(const Network& net, const FlowAssignment& flow, Units units) {
  nlohmann::json rates = nlohmann::json::array();
  for (std::size_t k = 0; k < net.edges().size(); ++k) {
    const Edge& e = net.edges()[k];
    const double r = flow.edge_rates[k] * unit_scale(units);
    nlohmann::json entry{{"edge", e.id}, {"u", e.u}, {"v", e.v}, {"rate", r}};
    if (r > 0.0) {
      entry["orientation"] = e.u + "->" + e.v;
    } else if (r < 0.0) {
      entry["orientation"] = e.v + "->" + e.u;
    }
    rates.push_back(std::move(entry));
  }
  return {{"value", flow.value * unit_scale(units)}, {"edge_rates", std::move(rates)}};
}

inline nlohmann::json provenance_json(const Network& net) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Edge& e : net.edges()) {
    entries.push_back({{"edge", e.id}, {"formula", formula_id(e.channel)}});
  }
  return entries;
}

inline nlohmann::json provenance_json(const Chain& chain) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    entries.push_back({{"link", i}, {"formula", formula_id(chain.links[i])}});
  }
  return entries;
}

inline nlohmann::json region_to_json(const Network& net, const RateRegionBounds& region,
                                     Units units) {
  nlohmann::json constraints = nlohmann::json::array();
  for (const RateConstraint& c : region.constraints) {
    constraints.push_back({{"sessions", c.sessions},
                           {"bound", c.bound.bits * unit_scale(units)},
                           {"exactness", exactness_name(c.bound.exactness)},
                           {"cut", cut_to_json(net, c.witness)}});
  }
  return constraints;
}

// --- Sweeps -------------------------------------------------------------------

struct SweepSpec {
  std::string variable;  // "loss_db" or "distance_km"
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
};

// Parses "var=start:stop:step".
inline SweepSpec parse_sweep_spec(const std::string& text) {
  const auto eq = text.find('=');
  const auto c1 = text.find(':', eq == std::string::npos ? 0 : eq);
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos) {
    throw std::invalid_argument("sweep: expected 'var=start:stop:step', got '" + text + "'");
  }
  SweepSpec spec;
  spec.variable = text.substr(0, eq);
  try {
    spec.start = std::stod(text.substr(eq + 1, c1 - eq - 1));
    spec.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    spec.step = std::stod(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep: non-numeric bound in '" + text + "'");
  }
  if (spec.variable != "loss_db" && spec.variable != "distance_km") {
    throw std::invalid_argument("sweep: unknown variable '" + spec.variable +
                                "' (expected loss_db or distance_km)");
  }
  if (!(spec.step > 0.0) || spec.stop < spec.start) {
    throw std::invalid_argument("sweep: empty range");
  }
  return spec;
}

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Curve data over total loss (or distance at a given fiber rate): one column
// per requested equidistant-repeater count N and per multiband width M.
inline SweepTable sweep_chain_curves(const SweepSpec& spec, const std::vector<int>& repeaters,
                                     const std::vector<int>& bands,
                                     double db_per_km = kDefaultFiberLossDbPerKm) {
  SweepTable table;
  table.header.push_back(spec.variable);
  for (int n : repeaters) {
    table.header.push_back("N=" + std::to_string(n));
  }
  for (int m : bands) {
    table.header.push_back("M=" + std::to_string(m));
  }
  const auto samples =
      static_cast<std::size_t>(std::floor((spec.stop - spec.start) / spec.step + 1e-9)) + 1;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = spec.start + static_cast<double>(i) * spec.step;
    const double loss_db = spec.variable == "distance_km" ? x * db_per_km : x;
    const double eta = loss_db_to_eta(loss_db);
    std::vector<double> row{x};
    for (int n : repeaters) {
      row.push_back(equidistant_lossy_chain(eta, n).bits);
    }
    for (int m : bands) {
      row.push_back(multiband_point_to_point(eta, m).bits);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline std::string sweep_to_csv(const SweepTable& table, Units units) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    os << (i ? "," : "") << table.header[i];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      // first column is the swept variable, not a capacity
      const double v = i == 0 ? row[i] : row[i] * unit_scale(units);
      os << (i ? "," : "") << format_value(v);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace qnetcap

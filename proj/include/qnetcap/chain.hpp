#pragma once

// Capacities of linear repeater chains: the end-to-end value is the minimum
// per-link value, and for a lossy line the optimal placement of N repeaters
// is equidistant, giving C(eta, N) = -log2(1 - eta^(1/(N+1))).

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "qnetcap/channel.hpp"
#include "qnetcap/network.hpp"

namespace qnetcap {

// Standard fiber attenuation, dB per km. The CLI takes this as a flag.
inline constexpr double kDefaultFiberLossDbPerKm = 0.2;

struct Chain {
  std::vector<Channel> links;  // N+1 channels for N repeaters
};

inline CapacityValue chain_capacity(const Chain& chain) {
  if (chain.links.empty()) {
    throw std::invalid_argument("chain: at least one link is required");
  }
  double bits = kInfiniteBits;
  bool exact = true;
  for (const Channel& link : chain.links) {
    bits = std::min(bits, two_way_capacity(link).bits);
    exact = exact && is_distillable(link);
  }
  return {bits, exact ? Exactness::Exact : Exactness::UpperBoundOnly};
}

// Best capacity of a lossy line of total transmissivity eta_total split by
// n_repeaters equidistant repeaters.
inline CapacityValue equidistant_lossy_chain(double eta_total, int n_repeaters) {
  if (!(eta_total >= 0.0 && eta_total <= 1.0)) {
    throw std::domain_error("equidistant_lossy_chain: eta must be in [0,1]");
  }
  if (n_repeaters < 0) {
    throw std::domain_error("equidistant_lossy_chain: repeater count must be >= 0");
  }
  const double per_link = std::pow(eta_total, 1.0 / (n_repeaters + 1));
  return {detail::neg_log2_one_minus(per_link), Exactness::Exact};
}

struct ChainAsymptotics {
  double repeater_dominant;  // log2(N) - log2(ln(1/eta)), many repeaters
  double loss_dominant;      // eta^(1/(N+1)) / ln 2, very lossy links
};

// Diagnostic approximations only; never a substitute for the exact formula.
inline ChainAsymptotics chain_asymptotics(double eta_total, int n_repeaters) {
  if (!(eta_total > 0.0 && eta_total < 1.0)) {
    throw std::domain_error("chain_asymptotics: eta must be in (0,1)");
  }
  if (n_repeaters < 1) {
    throw std::domain_error("chain_asymptotics: repeater count must be >= 1");
  }
  const double n = static_cast<double>(n_repeaters);
  return {std::log2(n) - std::log2(std::log(1.0 / eta_total)),
          std::pow(eta_total, 1.0 / (n + 1.0)) / std::numbers::ln2};
}

struct MultibandLink {
  double eta;
  int bands;
};

// Chain of multiband lossy links: C = -log2 max_i (1-eta_i)^{M_i}.
inline CapacityValue multiband_chain_capacity(const std::vector<MultibandLink>& links) {
  if (links.empty()) {
    throw std::invalid_argument("multiband chain: at least one link is required");
  }
  double theta_max = 0.0;
  for (const MultibandLink& link : links) {
    if (!(link.eta >= 0.0 && link.eta <= 1.0)) {
      throw std::domain_error("multiband chain: eta must be in [0,1]");
    }
    if (link.bands < 1) {
      throw std::domain_error("multiband chain: band count must be >= 1");
    }
    theta_max = std::max(theta_max, std::pow(1.0 - link.eta, link.bands));
  }
  const double bits = theta_max == 0.0 ? kInfiniteBits : -std::log2(theta_max);
  return {std::max(0.0, bits), Exactness::Exact};
}

inline CapacityValue multiband_point_to_point(double eta, int bands) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("multiband: eta must be in [0,1]");
  }
  if (bands < 1) {
    throw std::domain_error("multiband: band count must be >= 1");
  }
  return {static_cast<double>(bands) * detail::neg_log2_one_minus(eta), Exactness::Exact};
}

inline double loss_db_to_eta(double loss_db) {
  if (!(loss_db >= 0.0)) {
    throw std::domain_error("loss_db_to_eta: loss must be >= 0 dB");
  }
  return std::pow(10.0, -loss_db / 10.0);
}

inline double eta_to_loss_db(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::domain_error("eta_to_loss_db: eta must be in (0,1]");
  }
  return -10.0 * std::log10(eta);
}

inline Chain parse_chain(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("links") || !doc.at("links").is_array()) {
    throw parse_error("chain: expected an object with array field 'links'");
  }
  Chain chain;
  for (std::size_t i = 0; i < doc.at("links").size(); ++i) {
    chain.links.push_back(
        channel_from_json(doc.at("links")[i], "chain: links[" + std::to_string(i) + "]"));
  }
  if (chain.links.empty()) {
    throw parse_error("chain: 'links' must not be empty");
  }
  return chain;
}

inline Chain parse_chain(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("chain: invalid JSON: ") + e.what());
  }
  return parse_chain(doc);
}

}  // namespace qnetcap

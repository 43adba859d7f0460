#pragma once

// Point-to-point channel models and their two-way assisted capacities.
//
// The distillable models (lossy, quantum-limited amplifier, dephasing,
// erasure, and multiband stacks of these) have exactly known capacities:
//
//   lossy(eta)        C = -log2(1 - eta)
//   amplifier(g)      C = -log2(1 - 1/g)
//   dephasing({P_i})  C = log2(d) - H({P_i})
//   erasure(p, d)     C = (1 - p) log2(d)
//   multiband(M, E)   C = M * C(E)
//
// The remaining models carry a relative-entropy-of-entanglement upper
// bound instead of an exact capacity:
//
//   thermal_loss(eta, nbar)   -log2[(1-eta) eta^nbar] - h(nbar)  for nbar < eta/(1-eta), else 0
//   noisy_amplifier(g, nbar)  log2[g^(nbar+1)/(g-1)] - h(nbar)   for nbar < 1/(g-1),     else 0
//   additive_noise(xi)        (xi-1)/ln2 - log2(xi)              for xi < 1,             else 0
//   pauli(p0..p3)             1 - H2(p_max)                      for p_max >= 1/2,       else 0
//
// with h(x) = (x+1) log2(x+1) - x log2(x). All values are bits per channel
// use, logs base 2 throughout. eta = 1 (or a route of such links) yields an
// explicit +infinity, never NaN.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qnetcap {

inline constexpr double kInfiniteBits = std::numeric_limits<double>::infinity();

// Absolute tolerance on the sum of a probability vector.
inline constexpr double kProbabilitySumTolerance = 1e-12;

enum class Exactness { Exact, UpperBoundOnly };

// A nonnegative rate in bits per use. `Exact` only when every contributing
// channel is distillable; otherwise the value is an upper bound.
struct CapacityValue {
  double bits = 0.0;
  Exactness exactness = Exactness::Exact;
};

inline bool is_exact(const CapacityValue& v) {
  return v.exactness == Exactness::Exact;
}

inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binary_entropy: probability must be in [0,1], got " +
                            std::to_string(p));
  }
  if (p == 0.0 || p == 1.0) {
    return 0.0;
  }
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// h(x) = (x+1) log2(x+1) - x log2(x), entropy of a thermal state with mean
// photon number x; h(0) = 0 by the 0 log 0 convention.
inline double thermal_entropy(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("thermal_entropy: mean photon number must be >= 0, got " +
                            std::to_string(x));
  }
  if (x == 0.0) {
    return 0.0;
  }
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

inline double shannon_entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) {
      h -= p * std::log2(p);
    }
  }
  return h;
}

struct LossyChannel {
  double eta;  // transmissivity in [0,1]
};

struct QLimAmplifierChannel {
  double gain;  // g > 1
};

struct ThermalLossChannel {
  double eta;   // transmissivity in (0,1)
  double nbar;  // mean thermal photons >= 0
};

struct NoisyAmplifierChannel {
  double gain;  // g > 1
  double nbar;  // mean thermal photons >= 0
};

struct AdditiveNoiseChannel {
  double xi;  // noise variance >= 0
};

struct DephasingChannel {
  std::vector<double> probs;  // probability of i phase flips, d = probs.size() >= 2
};

struct ErasureChannel {
  double p;  // erasure probability in [0,1]
  int dim;   // d >= 2
};

struct PauliQubitChannel {
  std::array<double, 4> probs;  // I, X, Y, Z probabilities
};

class Channel;

struct MultibandChannel {
  int bands;  // M >= 1
  std::shared_ptr<const Channel> inner;  // never itself multiband
};

class Channel {
 public:
  using Model = std::variant<LossyChannel, QLimAmplifierChannel, ThermalLossChannel,
                             NoisyAmplifierChannel, AdditiveNoiseChannel, DephasingChannel,
                             ErasureChannel, PauliQubitChannel, MultibandChannel>;

  explicit Channel(Model model) : model_(std::move(model)) { validate(); }

  static Channel lossy(double eta) { return Channel(LossyChannel{eta}); }
  static Channel amplifier(double gain) { return Channel(QLimAmplifierChannel{gain}); }
  static Channel thermal_loss(double eta, double nbar) {
    return Channel(ThermalLossChannel{eta, nbar});
  }
  static Channel noisy_amplifier(double gain, double nbar) {
    return Channel(NoisyAmplifierChannel{gain, nbar});
  }
  static Channel additive_noise(double xi) { return Channel(AdditiveNoiseChannel{xi}); }
  static Channel dephasing(std::vector<double> probs) {
    return Channel(DephasingChannel{std::move(probs)});
  }
  static Channel erasure(double p, int dim = 2) { return Channel(ErasureChannel{p, dim}); }
  static Channel pauli(std::array<double, 4> probs) {
    return Channel(PauliQubitChannel{probs});
  }
  static Channel multiband(int bands, Channel inner) {
    return Channel(MultibandChannel{bands, std::make_shared<const Channel>(std::move(inner))});
  }

  const Model& model() const { return model_; }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(model_);
  }

  template <class T>
  const T& as() const {
    return std::get<T>(model_);
  }

 private:
  void validate() const;

  Model model_;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) {
    throw std::domain_error(what);
  }
}

inline void validate_probability_vector(const std::vector<double>& probs,
                                        const std::string& where) {
  double sum = 0.0;
  for (double p : probs) {
    require(p >= 0.0, where + ": probability entries must be nonnegative");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= kProbabilitySumTolerance,
          where + ": probabilities must sum to 1, got " + std::to_string(sum));
}

// -log2(1 - x), evaluated via log1p for small x.
inline double neg_log2_one_minus(double x) {
  if (x >= 1.0) {
    return kInfiniteBits;
  }
  return -std::log1p(-x) / std::numbers::ln2;
}

}  // namespace detail

inline void Channel::validate() const {
  using detail::require;
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LossyChannel>) {
          require(m.eta >= 0.0 && m.eta <= 1.0, "lossy: eta must be in [0,1]");
        } else if constexpr (std::is_same_v<T, QLimAmplifierChannel>) {
          require(m.gain > 1.0, "amplifier: gain must be > 1");
        } else if constexpr (std::is_same_v<T, ThermalLossChannel>) {
          require(m.eta > 0.0 && m.eta < 1.0, "thermal_loss: eta must be in (0,1)");
          require(m.nbar >= 0.0, "thermal_loss: nbar must be >= 0");
        } else if constexpr (std::is_same_v<T, NoisyAmplifierChannel>) {
          require(m.gain > 1.0, "noisy_amplifier: gain must be > 1");
          require(m.nbar >= 0.0, "noisy_amplifier: nbar must be >= 0");
        } else if constexpr (std::is_same_v<T, AdditiveNoiseChannel>) {
          require(m.xi >= 0.0, "additive_noise: xi must be >= 0");
        } else if constexpr (std::is_same_v<T, DephasingChannel>) {
          require(m.probs.size() >= 2, "dephasing: need a probability per phase flip, d >= 2");
          detail::validate_probability_vector(m.probs, "dephasing");
        } else if constexpr (std::is_same_v<T, ErasureChannel>) {
          require(m.p >= 0.0 && m.p <= 1.0, "erasure: p must be in [0,1]");
          require(m.dim >= 2, "erasure: dimension must be >= 2");
        } else if constexpr (std::is_same_v<T, PauliQubitChannel>) {
          detail::validate_probability_vector({m.probs.begin(), m.probs.end()}, "pauli");
        } else if constexpr (std::is_same_v<T, MultibandChannel>) {
          require(m.bands >= 1, "multiband: band count must be >= 1");
          require(m.inner != nullptr, "multiband: missing inner channel");
          require(!std::holds_alternative<MultibandChannel>(m.inner->model()),
                  "multiband: inner channel must not be multiband");
        }
      },
      model_);
}

inline bool is_distillable(const Channel& c) {
  return std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LossyChannel> || std::is_same_v<T, QLimAmplifierChannel> ||
                      std::is_same_v<T, DephasingChannel> || std::is_same_v<T, ErasureChannel>) {
          return true;
        } else if constexpr (std::is_same_v<T, MultibandChannel>) {
          return is_distillable(*m.inner);
        } else {
          return false;
        }
      },
      c.model());
}

// REE upper bounds for the non-distillable models. Each is zero at and beyond
// its threshold; tiny negative rounding residues inside the threshold are
// clamped to zero.
namespace detail {

inline double thermal_loss_bound(double eta, double nbar) {
  if (nbar >= eta / (1.0 - eta)) {
    return 0.0;
  }
  const double v = neg_log2_one_minus(eta) - nbar * std::log2(eta) - thermal_entropy(nbar);
  return std::max(0.0, v);
}

inline double noisy_amplifier_bound(double gain, double nbar) {
  if (nbar >= 1.0 / (gain - 1.0)) {
    return 0.0;
  }
  const double v = (nbar + 1.0) * std::log2(gain) - std::log2(gain - 1.0) - thermal_entropy(nbar);
  return std::max(0.0, v);
}

inline double additive_noise_bound(double xi) {
  if (xi >= 1.0) {
    return 0.0;
  }
  if (xi == 0.0) {
    return kInfiniteBits;
  }
  return std::max(0.0, (xi - 1.0) / std::numbers::ln2 - std::log2(xi));
}

inline double pauli_qubit_bound(const std::array<double, 4>& probs) {
  const double pmax = *std::max_element(probs.begin(), probs.end());
  if (pmax < 0.5) {
    return 0.0;
  }
  return std::max(0.0, 1.0 - binary_entropy(std::min(pmax, 1.0)));
}

}  // namespace detail

// Two-way assisted capacity (qubits, ebits, or secret bits per use).
// Distillable channels return the exact value; the others return their REE
// upper bound tagged UpperBoundOnly.
inline CapacityValue two_way_capacity(const Channel& c) {
  return std::visit(
      [](const auto& m) -> CapacityValue {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LossyChannel>) {
          return {detail::neg_log2_one_minus(m.eta), Exactness::Exact};
        } else if constexpr (std::is_same_v<T, QLimAmplifierChannel>) {
          return {detail::neg_log2_one_minus(1.0 / m.gain), Exactness::Exact};
        } else if constexpr (std::is_same_v<T, DephasingChannel>) {
          const double d = static_cast<double>(m.probs.size());
          return {std::max(0.0, std::log2(d) - shannon_entropy(m.probs)), Exactness::Exact};
        } else if constexpr (std::is_same_v<T, ErasureChannel>) {
          return {(1.0 - m.p) * std::log2(static_cast<double>(m.dim)), Exactness::Exact};
        } else if constexpr (std::is_same_v<T, MultibandChannel>) {
          const CapacityValue inner = two_way_capacity(*m.inner);
          return {static_cast<double>(m.bands) * inner.bits, inner.exactness};
        } else if constexpr (std::is_same_v<T, ThermalLossChannel>) {
          return {detail::thermal_loss_bound(m.eta, m.nbar), Exactness::UpperBoundOnly};
        } else if constexpr (std::is_same_v<T, NoisyAmplifierChannel>) {
          return {detail::noisy_amplifier_bound(m.gain, m.nbar), Exactness::UpperBoundOnly};
        } else if constexpr (std::is_same_v<T, AdditiveNoiseChannel>) {
          return {detail::additive_noise_bound(m.xi), Exactness::UpperBoundOnly};
        } else {
          static_assert(std::is_same_v<T, PauliQubitChannel>);
          return {detail::pauli_qubit_bound(m.probs), Exactness::UpperBoundOnly};
        }
      },
      c.model());
}

// REE upper bound on the two-way capacity. Coincides with two_way_capacity
// for distillable channels (same code path).
inline double ree_upper_bound(const Channel& c) {
  return two_way_capacity(c).bits;
}

// Short identifier of the closed form backing a channel's value, for report
// provenance.
inline std::string formula_id(const Channel& c) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LossyChannel>) {
          return "lossy: C=-log2(1-eta)";
        } else if constexpr (std::is_same_v<T, QLimAmplifierChannel>) {
          return "amplifier: C=-log2(1-1/g)";
        } else if constexpr (std::is_same_v<T, DephasingChannel>) {
          return "dephasing: C=log2(d)-H(probs)";
        } else if constexpr (std::is_same_v<T, ErasureChannel>) {
          return "erasure: C=(1-p)*log2(d)";
        } else if constexpr (std::is_same_v<T, MultibandChannel>) {
          return "multiband: C=M*[" + formula_id(*m.inner) + "]";
        } else if constexpr (std::is_same_v<T, ThermalLossChannel>) {
          return "thermal_loss: REE=-log2((1-eta)*eta^nbar)-h(nbar) if nbar<eta/(1-eta) else 0";
        } else if constexpr (std::is_same_v<T, NoisyAmplifierChannel>) {
          return "noisy_amplifier: REE=log2(g^(nbar+1)/(g-1))-h(nbar) if nbar<1/(g-1) else 0";
        } else if constexpr (std::is_same_v<T, AdditiveNoiseChannel>) {
          return "additive_noise: REE=(xi-1)/ln2-log2(xi) if xi<1 else 0";
        } else {
          static_assert(std::is_same_v<T, PauliQubitChannel>);
          return "pauli: REE=1-H2(pmax) if pmax>=1/2 else 0";
        }
      },
      c.model());
}

}  // namespace qnetcap

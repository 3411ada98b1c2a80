#pragma once

// Deviation points. Protocol code asks its Hooks object at each named step what
// to do; with no deviation installed every call returns the honest behaviour.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bellcrypt/bell_algebra.hpp"
#include "bellcrypt/randomness.hpp"
#include "bellcrypt/state.hpp"

namespace bellcrypt {

enum class DeviationKind { SubstitutePauli, SubstituteQubit, SkipMeasurement, FlipBits, Withhold };

inline std::string_view deviation_name(DeviationKind k) {
  switch (k) {
    case DeviationKind::SubstitutePauli: return "substitute-pauli";
    case DeviationKind::SubstituteQubit: return "substitute-qubit";
    case DeviationKind::SkipMeasurement: return "skip-measurement";
    case DeviationKind::FlipBits: return "flip-bits";
    case DeviationKind::Withhold: return "withhold";
  }
  return "?";
}

/// One deviation and its alternatives. The alternative is drawn once per run, the
/// first time the point is reached, as a uniform strategy choice.
///   SubstitutePauli: Pauli label to apply instead of the honest one
///   SubstituteQubit: 2 * label + bit, sending sigma_label |bit> instead
///   FlipBits:        XOR mask applied to the honest value
///   SkipMeasurement, Withhold: a single alternative (value ignored)
struct Deviation {
  DeviationKind kind;
  std::vector<std::uint64_t> variants{0};
};

using HookSet = std::map<std::string, Deviation>;

struct HookPoint {
  std::string name;
  DeviationKind kind;
};

class HookError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejects unknown points and kind mismatches against a protocol's declared points.
inline void validate_hooks(const HookSet& hooks, const std::vector<HookPoint>& points, std::string_view protocol) {
  for (const auto& [name, dev] : hooks) {
    const HookPoint* match = nullptr;
    for (const auto& p : points)
      if (p.name == name) match = &p;
    if (!match) throw HookError("protocol " + std::string(protocol) + " has no step '" + name + "'");
    if (match->kind != dev.kind)
      throw HookError("step '" + name + "' takes " + std::string(deviation_name(match->kind)) + ", not " +
                      std::string(deviation_name(dev.kind)));
    if (dev.variants.empty()) throw HookError("step '" + name + "' has no deviation variants");
  }
}

class Hooks {
 public:
  Hooks() = default;
  Hooks(const HookSet* set, Randomness* rnd) : set_(set), rnd_(rnd) {}

  std::uint64_t flip(std::string_view point, std::uint64_t honest) {
    const auto v = variant(point, DeviationKind::FlipBits);
    return v ? honest ^ *v : honest;
  }
  bool flip_bit(std::string_view point, bool honest) { return (flip(point, honest ? 1 : 0) & 1) != 0; }
  TwoBits flip_bits(std::string_view point, TwoBits honest) {
    return TwoBits::from_index(static_cast<int>(flip(point, static_cast<std::uint64_t>(honest.index())) & 3));
  }

  PauliLabel pauli(std::string_view point, PauliLabel honest) {
    const auto v = variant(point, DeviationKind::SubstitutePauli);
    return v ? PauliLabel{static_cast<int>(*v & 3)} : honest;
  }

  /// Replacement qubit sigma_label |bit>, if this point substitutes one.
  std::optional<StateVector> substitute_qubit(std::string_view point) {
    const auto v = variant(point, DeviationKind::SubstituteQubit);
    if (!v) return std::nullopt;
    const auto s = apply_pauli(StateVector::computational((*v & 1) != 0), PauliLabel{static_cast<int>((*v >> 1) & 3)}, 0);
    return StateVector(1, s.amplitudes());
  }

  bool skip(std::string_view point) { return variant(point, DeviationKind::SkipMeasurement).has_value(); }
  bool withhold(std::string_view point) { return variant(point, DeviationKind::Withhold).has_value(); }

  bool active() const { return set_ && !set_->empty(); }

 private:
  std::optional<std::uint64_t> variant(std::string_view point, DeviationKind kind) {
    if (!set_) return std::nullopt;
    const auto it = set_->find(std::string(point));
    if (it == set_->end()) return std::nullopt;
    if (it->second.kind != kind)
      throw HookError("step '" + std::string(point) + "' does not take " + std::string(deviation_name(kind)));
    auto cached = chosen_.find(it->first);
    if (cached == chosen_.end()) {
      const auto& vs = it->second.variants;
      const int idx = vs.size() == 1 ? 0 : rnd_->choose_uniform(ChoiceKind::Strategy, static_cast<int>(vs.size()), "adversary");
      cached = chosen_.emplace(it->first, vs[static_cast<std::size_t>(idx)]).first;
    }
    return cached->second;
  }

  const HookSet* set_ = nullptr;
  Randomness* rnd_ = nullptr;
  std::map<std::string, std::uint64_t> chosen_;
};

}  // namespace bellcrypt

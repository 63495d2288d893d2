#pragma once

// Combinatorial construction of reference spectator states, independent of
// the protocol pipeline.  A target is described layer by layer (polarization
// and spatial): each party is either ground, carries its own uniform W
// excitation, or belongs to one coherently merged group whose single
// excitation is spread uniformly over every member register.

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "state.hpp"

namespace hyperfuse {

struct LayerSpec {
  std::set<Party> own_w;   // one uniform W excitation per listed party
  std::set<Party> merged;  // one shared excitation across all listed parties
};

struct TargetSpec {
  std::map<Party, int> spectators;  // register sizes (photons held back)
  LayerSpec pol;
  LayerSpec spat;
};

namespace detail {

struct LayerComponent {
  std::array<std::uint64_t, 3> masks{0, 0, 0};
  double amp = 1.0;
};

inline std::vector<LayerComponent> expand_layer(
    const std::map<Party, int>& sizes, const LayerSpec& layer) {
  for (Party party : layer.own_w)
    if (layer.merged.count(party))
      throw std::invalid_argument(
          "build_target_state: party both merged and own-W");

  std::vector<LayerComponent> components{LayerComponent{}};

  auto excite = [&](const std::vector<std::pair<Party, int>>& slots,
                    double weight) {
    std::vector<LayerComponent> next;
    next.reserve(components.size() * slots.size());
    for (const LayerComponent& base : components) {
      for (const auto& [party, index] : slots) {
        LayerComponent c = base;
        c.masks[static_cast<int>(party)] |= std::uint64_t{1} << index;
        c.amp *= weight;
        next.push_back(c);
      }
    }
    components = std::move(next);
  };

  for (Party party : layer.own_w) {
    auto it = sizes.find(party);
    if (it == sizes.end() || it->second < 1)
      throw std::invalid_argument("build_target_state: missing register");
    std::vector<std::pair<Party, int>> slots;
    for (int i = 0; i < it->second; ++i) slots.emplace_back(party, i);
    excite(slots, 1.0 / std::sqrt(static_cast<double>(it->second)));
  }
  if (!layer.merged.empty()) {
    std::vector<std::pair<Party, int>> slots;
    for (Party party : layer.merged) {
      auto it = sizes.find(party);
      if (it == sizes.end() || it->second < 1)
        throw std::invalid_argument("build_target_state: missing register");
      for (int i = 0; i < it->second; ++i) slots.emplace_back(party, i);
    }
    excite(slots, 1.0 / std::sqrt(static_cast<double>(slots.size())));
  }
  return components;
}

}  // namespace detail

inline State build_target_state(const TargetSpec& spec) {
  for (const auto& [party, size] : spec.spectators)
    if (size < 0 || size > 63)
      throw std::invalid_argument("build_target_state: bad register size");

  const auto pol = detail::expand_layer(spec.spectators, spec.pol);
  const auto spat = detail::expand_layer(spec.spectators, spec.spat);

  State out;
  for (const auto& pc : pol) {
    for (const auto& sc : spat) {
      BasisKet ket;
      for (const auto& [party, size] : spec.spectators) {
        const int pi = static_cast<int>(party);
        ket.banks[pi] = SpectatorBank{size, pc.masks[pi], sc.masks[pi]};
      }
      out.add(ket, Amp{pc.amp * sc.amp, 0.0});
    }
  }
  return out;
}

// Convenience wrappers for the two globally named outcomes.

inline State build_failure_target(const std::map<Party, int>& spectators) {
  return build_target_state({spectators, {}, {}});
}

inline State build_success_target(const std::map<Party, int>& spectators) {
  std::set<Party> everyone;
  for (const auto& [party, size] : spectators) everyone.insert(party);
  return build_target_state({spectators, {{}, everyone}, {{}, everyone}});
}

}  // namespace hyperfuse

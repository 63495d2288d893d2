#pragma once

// Shared helpers for the test suites: deterministic random sparse states and
// small comparison utilities.

#include <hyperfuse/state.hpp>

#include <random>

namespace testutil {

// A random normalized state spread over the given ports, with random
// spectator registers, occupations and probe indices.
inline hyperfuse::State random_sparse_state(
    std::mt19937& rng, const std::vector<hyperfuse::Port>& ports,
    int terms = 8, int max_photons_per_mode = 2) {
  using namespace hyperfuse;
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  State s;
  for (int i = 0; i < terms; ++i) {
    BasisKet ket;
    ket.bank(Party::alice) =
        SpectatorBank{3, rng() & 0x7, rng() & 0x7};
    ket.bank(Party::bob) = SpectatorBank{2, rng() & 0x3, rng() & 0x3};
    const int nmodes = 1 + static_cast<int>(rng() % 2);
    for (int j = 0; j < nmodes; ++j) {
      const Port port = ports[rng() % ports.size()];
      const Pol pol = (rng() & 1) ? Pol::v : Pol::h;
      const int cnt = 1 + static_cast<int>(rng() % max_photons_per_mode);
      ket = ket.with_occupation(make_mode(port, pol), cnt);
    }
    ket.probe = {static_cast<int>(rng() % 5) - 2,
                 static_cast<int>(rng() % 5) - 2, 0};
    s.add(ket, Amp{coeff(rng), coeff(rng)});
  }
  return normalized(s);
}

inline bool photon_count_is(const hyperfuse::State& s, int expected) {
  for (const auto& [ket, amp] : s.terms())
    if (ket.total_photons() != expected) return false;
  return true;
}

}  // namespace testutil

#pragma once

// Cross-Kerr probe bookkeeping and the homodyne measurement model.
//
// A tap couples one probe beam to a set of (port, pol) cells: every photon in
// a coupled cell advances the probe's integer phase index by `delta`.  Phase
// indices live inside the basis kets and change nowhere else.
//
// Homodyne detection of a probe groups the superposition by the measured
// phase index.  The measured value is folded to |k| (an X-quadrature
// measurement cannot tell e^{ik theta} from e^{-ik theta}) after adding a
// fixed reference offset (the local-oscillator phase the apparatus is
// calibrated to, a measurement-side constant).  Optionally a window can merge
// several folded values into one outcome when the discrimination bins
// overlap by design.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "state.hpp"

namespace hyperfuse {

struct KerrTap {
  int probe = 0;            // probe beam index, 0..2
  int delta = 0;            // phase index shift per coupled photon
  std::vector<Mode> modes;  // coupled (port, pol) cells
};

inline State apply_kerr_tap(const State& s, const KerrTap& tap) {
  if (tap.probe < 0 || tap.probe > 2)
    throw std::invalid_argument("apply_kerr_tap: bad probe index");
  State out;
  for (const auto& [ket, amp] : s.terms()) {
    int coupled = 0;
    for (Mode mode : tap.modes) coupled += ket.photons_in(mode);
    BasisKet ket2 = ket;
    ket2.probe[tap.probe] += tap.delta * coupled;
    out.add(ket2, amp);
  }
  return out;
}

struct HomodyneBranch {
  State state;        // normalized conditional state, probe index cleared
  double prob = 0.0;  // branch weight relative to the input norm
};

// Projects the state onto the outcome classes of one probe.  Returns a map
// from folded phase index (plus reference, then |.|, then window-merged to
// the smallest member) to the conditional branch.
inline std::map<int, HomodyneBranch> homodyne_project(
    const State& s, int probe, int reference = 0,
    const std::vector<std::vector<int>>& windows = {}) {
  if (probe < 0 || probe > 2)
    throw std::invalid_argument("homodyne_project: bad probe index");
  std::map<int, int> window_of;  // folded value -> canonical key
  for (const auto& window : windows) {
    if (window.empty())
      throw std::invalid_argument("homodyne_project: empty window");
    int rep = window[0];
    for (int v : window) rep = std::min(rep, v);
    for (int v : window) {
      if (v < 0)
        throw std::invalid_argument("homodyne_project: negative window value");
      if (window_of.count(v) && window_of[v] != rep)
        throw std::invalid_argument("homodyne_project: overlapping windows");
      window_of[v] = rep;
    }
  }

  std::map<int, State> groups;
  for (const auto& [ket, amp] : s.terms()) {
    int key = std::abs(ket.probe[probe] + reference);
    if (auto it = window_of.find(key); it != window_of.end()) key = it->second;
    BasisKet ket2 = ket;
    ket2.probe[probe] = 0;
    groups[key].add(ket2, amp);
  }

  std::map<int, HomodyneBranch> out;
  for (auto& [key, grouped] : groups) {
    const double n = norm(grouped);
    if (n <= kPruneTol) continue;
    HomodyneBranch branch;
    branch.prob = n * n;
    grouped.scale(Amp{1.0 / n, 0.0});
    branch.state = std::move(grouped);
    out.emplace(key, std::move(branch));
  }
  return out;
}

// ---- measured-signal model ----

// X-quadrature amplitude of a probe coherent state that picked up phase
// k*theta: a unit-variance Gaussian centered at 2*alpha*cos(k*theta).
inline double gaussian_curve(double x, double alpha, int k, double theta) {
  const double center = 2.0 * alpha * std::cos(static_cast<double>(k) * theta);
  const double d = x - center;
  return std::pow(2.0 * M_PI, -0.25) * std::exp(-0.25 * d * d);
}

// Probability of confusing the phase-index bins k1 and k2: the tail weight
// beyond the midpoint of two unit-variance Gaussians at distance d.
inline double discrimination_error(double alpha, double theta, int k1,
                                   int k2) {
  const double d = 2.0 * alpha *
                   std::abs(std::cos(static_cast<double>(k1) * theta) -
                            std::cos(static_cast<double>(k2) * theta));
  return 0.5 * std::erfc(d / (2.0 * std::sqrt(2.0)));
}

// Success probability of telling the no-shift bin from the first shifted bin
// with probe amplitude alpha, phase step theta and photon loss exponent
// gamma*t, for one probe or for three independent probes.
inline double homodyne_success_prob(double alpha, double theta, double gammat,
                                    int probes = 1) {
  if (alpha < 0.0)
    throw std::invalid_argument("homodyne_success_prob: negative alpha");
  if (gammat < 0.0)
    throw std::invalid_argument("homodyne_success_prob: negative gammat");
  if (probes != 1 && probes != 3)
    throw std::invalid_argument("homodyne_success_prob: probes must be 1 or 3");
  const double distance =
      std::exp(-0.5 * gammat) * alpha * (1.0 - std::cos(theta));
  const double single = 1.0 - 0.5 * std::erfc(distance / std::sqrt(2.0));
  return probes == 1 ? single : single * single * single;
}

}  // namespace hyperfuse

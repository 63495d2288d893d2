#pragma once

// Linear-optical elements acting on the sparse state: polarizing beam
// splitters, balanced (and imbalanced) beam splitters, and half-wave plates.
//
// Every element is a single-photon unitary lifted to bosonic Fock space.  A
// term with occupations {n_i} is treated as the monomial
// prod_i (a_i^dag)^{n_i} / sqrt(n_i!) acting on vacuum; the element
// substitutes each creation operator with its image, the polynomial is
// expanded, and output monomials pick up sqrt(m_j!) when converted back to
// number states.  This reproduces the bunching amplitudes (e.g. the sqrt(2)
// enhancement when two photons pile into one mode) exactly.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "state.hpp"

namespace hyperfuse {

// Image of one creation operator under an element.
using ModeImage = std::vector<std::pair<Mode, Amp>>;
using ModeMap = std::map<Mode, ModeImage>;

inline double sqrt_factorial(int n) {
  static constexpr double table[] = {1.0,
                                     1.0,
                                     1.4142135623730951,
                                     2.449489742783178,
                                     4.898979485566356,
                                     10.954451150103322};
  if (n < 0) throw std::invalid_argument("sqrt_factorial: negative");
  if (n < static_cast<int>(std::size(table))) return table[n];
  return std::sqrt(std::tgamma(static_cast<double>(n) + 1.0));
}

// Applies a single-photon mode map to every term.  Modes absent from the map
// pass through unchanged.
inline State apply_mode_map(const State& s, const ModeMap& map) {
  State out;
  using Monomial = std::vector<std::pair<Mode, int>>;  // sorted
  for (const auto& [ket, amp] : s.terms()) {
    Monomial untouched;
    std::vector<std::pair<const ModeImage*, int>> touched;
    Amp coeff = amp;
    for (const auto& [mode, cnt] : ket.occ) {
      coeff /= sqrt_factorial(cnt);
      auto it = map.find(mode);
      if (it == map.end())
        untouched.emplace_back(mode, cnt);
      else
        touched.emplace_back(&it->second, cnt);
    }
    // Expand prod (sum_j U_j a_j^dag)^{cnt} over the touched modes.
    std::vector<std::pair<Monomial, Amp>> poly{{untouched, coeff}};
    for (const auto& [image, cnt] : touched) {
      for (int photon = 0; photon < cnt; ++photon) {
        std::vector<std::pair<Monomial, Amp>> next;
        next.reserve(poly.size() * image->size());
        for (const auto& [mono, c] : poly) {
          for (const auto& [mode, u] : *image) {
            if (std::abs(u) == 0.0) continue;
            Monomial m2 = mono;
            auto it = std::find_if(m2.begin(), m2.end(), [mode](const auto& e) {
              return e.first == mode;
            });
            if (it != m2.end())
              ++it->second;
            else
              m2.emplace_back(mode, 1);
            next.emplace_back(std::move(m2), c * u);
          }
        }
        poly = std::move(next);
      }
    }
    for (auto& [mono, c] : poly) {
      std::sort(mono.begin(), mono.end());
      BasisKet ket2 = ket;
      ket2.occ = std::move(mono);
      for (const auto& [mode, cnt] : ket2.occ) c *= sqrt_factorial(cnt);
      out.add(ket2, c);
    }
  }
  out.prune();
  return out;
}

// Polarizing beam splitter imperfection: a small polarization rotation by
// `theta` mixed with a cross-polarization leak of intensity ratio `r`,
// applied at the element before the ideal routing.  The single-photon
// polarization matrix (columns are images of H and V) is
//
//   [  c  s ]           c = (cos(theta) - sqrt(r) sin(theta)) / sqrt(1+r)
//   [ -s  c ]           s = (sin(theta) + sqrt(r) cos(theta)) / sqrt(1+r)
//
// which is exactly unitary for real r >= 0.
struct PbsParams {
  double theta = 0.0;
  double r = 0.0;
};

struct BsParams {
  double eps = 0.0;  // reflectivity/transmissivity imbalance
};

inline std::pair<double, double> pbs_rotation(const PbsParams& params) {
  if (params.r < 0.0)
    throw std::invalid_argument("pbs_rotation: r must be non-negative");
  const double root = std::sqrt(params.r);
  const double denom = std::sqrt(1.0 + params.r);
  const double c = (std::cos(params.theta) - root * std::sin(params.theta)) / denom;
  const double s = (std::sin(params.theta) + root * std::cos(params.theta)) / denom;
  return {c, s};
}

// Ideal routing rule: H entering in1 exits out1, V entering in1 exits out2,
// H entering in2 exits out2, V entering in2 exits out1.  Polarization is
// kept; only the path changes.
inline State apply_pbs(const State& s, Port in1, Port in2, Port out1, Port out2,
                       const PbsParams& params = {}) {
  const auto [c, sn] = pbs_rotation(params);
  ModeMap map;
  auto route = [&](Port in, Port h_out, Port v_out) {
    map[make_mode(in, Pol::h)] = {{make_mode(h_out, Pol::h), Amp{c, 0.0}},
                                  {make_mode(v_out, Pol::v), Amp{-sn, 0.0}}};
    map[make_mode(in, Pol::v)] = {{make_mode(h_out, Pol::h), Amp{sn, 0.0}},
                                  {make_mode(v_out, Pol::v), Amp{c, 0.0}}};
  };
  route(in1, out1, out2);
  route(in2, out2, out1);
  return apply_mode_map(s, map);
}

// Spatial mixer.  Ideal action: in_plus -> (out1 + out2)/sqrt(2),
// in_minus -> (out1 - out2)/sqrt(2), polarization untouched.  The imbalance
// eps deforms the split to (1+eps) : 1 with normalization sqrt((1+eps)^2+1).
inline State apply_bs(const State& s, Port in_plus, Port in_minus, Port out1,
                      Port out2, const BsParams& params = {}) {
  const double g = 1.0 + params.eps;
  const double denom = std::sqrt(g * g + 1.0);
  ModeMap map;
  for (Pol pol : {Pol::h, Pol::v}) {
    map[make_mode(in_plus, pol)] = {
        {make_mode(out1, pol), Amp{g / denom, 0.0}},
        {make_mode(out2, pol), Amp{1.0 / denom, 0.0}}};
    map[make_mode(in_minus, pol)] = {
        {make_mode(out1, pol), Amp{1.0 / denom, 0.0}},
        {make_mode(out2, pol), Amp{-g / denom, 0.0}}};
  }
  return apply_mode_map(s, map);
}

// Half-wave plate at 22.5 degrees: H -> (H+V)/sqrt(2), V -> (H-V)/sqrt(2).
inline State apply_hwp(const State& s, Port port) {
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  ModeMap map;
  map[make_mode(port, Pol::h)] = {
      {make_mode(port, Pol::h), Amp{inv_sqrt2, 0.0}},
      {make_mode(port, Pol::v), Amp{inv_sqrt2, 0.0}}};
  map[make_mode(port, Pol::v)] = {
      {make_mode(port, Pol::h), Amp{inv_sqrt2, 0.0}},
      {make_mode(port, Pol::v), Amp{-inv_sqrt2, 0.0}}};
  return apply_mode_map(s, map);
}

// Largest entry of |U^dag U - I| for the element's single-photon matrix.
inline double unitarity_defect(const PbsParams& params) {
  const auto [c, s] = pbs_rotation(params);
  const double d00 = std::abs(c * c + s * s - 1.0);
  const double d01 = std::abs(c * s - s * c);
  return std::max(d00, d01);
}

inline double unitarity_defect(const BsParams& params) {
  const double g = 1.0 + params.eps;
  const double n2 = g * g + 1.0;
  const double d00 = std::abs((g * g + 1.0) / n2 - 1.0);
  const double d01 = std::abs((g * 1.0 - 1.0 * g) / n2);
  return std::max(d00, d01);
}

}  // namespace hyperfuse

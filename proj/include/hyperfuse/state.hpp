#pragma once

// Sparse state-vector core for the hyperentangled fusion simulator.
//
// A basis ket tracks three things:
//   * per-party spectator registers: every spectator photon carries one
//     polarization bit and one spatial bit, stored explicitly as bit masks;
//   * bosonic occupation numbers of the apparatus rails the fusion photons
//     travel through (polarization-resolved, so a mode is a (port, pol) pair);
//   * the integer phase indices accumulated by up to three Kerr probe beams.
//
// Amplitudes are complex doubles; states are sparse maps from ket to
// amplitude with a fixed pruning tolerance.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hyperfuse {

using Amp = std::complex<double>;

inline constexpr double kPruneTol = 1e-14;

enum class Party : int { alice = 0, bob = 1, charlie = 2 };
enum class Dof : int { pol = 0, spat = 1 };
enum class Pol : int { h = 0, v = 1 };

// Photon-carrying rails between optical elements.  a0/a1 (and b*, c*) are the
// per-party input rails; p,q,r,s are the pairwise-mixer outputs of the
// two-party scheme; uX/vX are the per-party mixer outputs of the three-party
// scheme.
enum class Port : int {
  a0 = 0, a1, b0, b1, c0, c1,
  p, q, r, s,
  uA, vA, uB, vB, uC, vC,
  count
};

inline constexpr int kPortCount = static_cast<int>(Port::count);

inline const char* port_name(Port port) {
  static constexpr const char* names[kPortCount] = {
      "a0", "a1", "b0", "b1", "c0", "c1",
      "p",  "q",  "r",  "s",
      "uA", "vA", "uB", "vB", "uC", "vC"};
  const int i = static_cast<int>(port);
  if (i < 0 || i >= kPortCount) throw std::out_of_range("port_name: bad port");
  return names[i];
}

inline const char* party_name(Party party) {
  switch (party) {
    case Party::alice:   return "Alice";
    case Party::bob:     return "Bob";
    case Party::charlie: return "Charlie";
  }
  throw std::out_of_range("party_name: bad party");
}

// A polarization-resolved mode identifier: (port, pol) packed into one int.
using Mode = int;

inline constexpr Mode make_mode(Port port, Pol pol) {
  return static_cast<int>(port) * 2 + static_cast<int>(pol);
}
inline constexpr Port mode_port(Mode m) { return static_cast<Port>(m / 2); }
inline constexpr Pol mode_pol(Mode m) { return static_cast<Pol>(m % 2); }

inline std::string mode_name(Mode m) {
  return std::string(port_name(mode_port(m))) +
         (mode_pol(m) == Pol::h ? 'H' : 'V');
}

// The two input rails belonging to one party, indexed by the spatial bit of
// the fusion photon (rail 0 carries the spatial-W branch, rail 1 the ground
// branch).
inline Port party_rail(Party party, int rail) {
  if (rail != 0 && rail != 1) throw std::out_of_range("party_rail: bad rail");
  switch (party) {
    case Party::alice:   return rail ? Port::a1 : Port::a0;
    case Party::bob:     return rail ? Port::b1 : Port::b0;
    case Party::charlie: return rail ? Port::c1 : Port::c0;
  }
  throw std::out_of_range("party_rail: bad party");
}

// Explicit spectator register of one party: `count` photons, each with a
// polarization bit (set = V) and a spatial bit (set = displaced mode).
struct SpectatorBank {
  int count = 0;
  std::uint64_t pol_v = 0;
  std::uint64_t spat = 0;

  auto operator<=>(const SpectatorBank&) const = default;
  bool operator==(const SpectatorBank&) const = default;
};

struct BasisKet {
  std::array<SpectatorBank, 3> banks{};            // Alice, Bob, Charlie
  std::vector<std::pair<Mode, int>> occ;           // sorted (mode, photons>0)
  std::array<int, 3> probe{0, 0, 0};               // Kerr phase indices

  auto operator<=>(const BasisKet&) const = default;
  bool operator==(const BasisKet&) const = default;

  SpectatorBank& bank(Party party) { return banks[static_cast<int>(party)]; }
  const SpectatorBank& bank(Party party) const {
    return banks[static_cast<int>(party)];
  }

  int photons_in(Mode m) const {
    for (const auto& [mode, cnt] : occ)
      if (mode == m) return cnt;
    return 0;
  }

  int total_photons() const {
    int total = 0;
    for (const auto& [mode, cnt] : occ) total += cnt;
    return total;
  }

  // Returns a copy with `m` set to `cnt` photons (erased when cnt == 0),
  // keeping the occupation list sorted.
  BasisKet with_occupation(Mode m, int cnt) const {
    if (cnt < 0) throw std::invalid_argument("with_occupation: negative count");
    BasisKet out = *this;
    auto it = std::find_if(out.occ.begin(), out.occ.end(),
                           [m](const auto& e) { return e.first == m; });
    if (it != out.occ.end()) {
      if (cnt == 0) {
        out.occ.erase(it);
      } else {
        it->second = cnt;
      }
    } else if (cnt > 0) {
      out.occ.emplace_back(m, cnt);
      std::sort(out.occ.begin(), out.occ.end());
    }
    return out;
  }
};

inline std::string ket_to_string(const BasisKet& ket) {
  std::ostringstream os;
  static constexpr char letters[3] = {'A', 'B', 'C'};
  bool first = true;
  for (int pi = 0; pi < 3; ++pi) {
    const SpectatorBank& bank = ket.banks[pi];
    if (bank.count == 0) continue;
    if (!first) os << ' ';
    first = false;
    os << letters[pi] << '=';
    for (int i = 0; i < bank.count; ++i)
      os << ((bank.pol_v >> i) & 1 ? 'V' : 'H');
    os << '/';
    for (int i = 0; i < bank.count; ++i) os << ((bank.spat >> i) & 1 ? '1' : '0');
  }
  for (const auto& [mode, cnt] : ket.occ) {
    if (!first) os << ' ';
    first = false;
    os << '@' << mode_name(mode) << ':' << cnt;
  }
  if (!first) os << ' ';
  os << "k=" << ket.probe[0] << ',' << ket.probe[1] << ',' << ket.probe[2];
  return os.str();
}

inline BasisKet ket_from_string(const std::string& text) {
  BasisKet ket;
  std::istringstream is(text);
  std::string token;
  bool saw_probe = false;
  while (is >> token) {
    if (token.size() >= 2 && token[1] == '=' &&
        (token[0] == 'A' || token[0] == 'B' || token[0] == 'C')) {
      const int pi = token[0] - 'A';
      const auto slash = token.find('/');
      if (slash == std::string::npos)
        throw std::invalid_argument("ket_from_string: bad bank token");
      const std::string pols = token.substr(2, slash - 2);
      const std::string spats = token.substr(slash + 1);
      if (pols.size() != spats.size() || pols.size() > 63)
        throw std::invalid_argument("ket_from_string: bad bank size");
      SpectatorBank bank;
      bank.count = static_cast<int>(pols.size());
      for (std::size_t i = 0; i < pols.size(); ++i) {
        if (pols[i] == 'V')
          bank.pol_v |= std::uint64_t{1} << i;
        else if (pols[i] != 'H')
          throw std::invalid_argument("ket_from_string: bad pol bit");
        if (spats[i] == '1')
          bank.spat |= std::uint64_t{1} << i;
        else if (spats[i] != '0')
          throw std::invalid_argument("ket_from_string: bad spat bit");
      }
      ket.banks[pi] = bank;
    } else if (token[0] == '@') {
      const auto colon = token.rfind(':');
      if (colon == std::string::npos || colon < 2)
        throw std::invalid_argument("ket_from_string: bad mode token");
      const std::string name = token.substr(1, colon - 1);
      const int cnt = std::stoi(token.substr(colon + 1));
      Mode mode = -1;
      for (int p = 0; p < kPortCount; ++p) {
        const std::string pn = port_name(static_cast<Port>(p));
        if (name.size() == pn.size() + 1 && name.compare(0, pn.size(), pn) == 0) {
          const char pc = name.back();
          if (pc == 'H')
            mode = make_mode(static_cast<Port>(p), Pol::h);
          else if (pc == 'V')
            mode = make_mode(static_cast<Port>(p), Pol::v);
        }
      }
      if (mode < 0 || cnt <= 0)
        throw std::invalid_argument("ket_from_string: unknown mode " + name);
      ket.occ.emplace_back(mode, cnt);
    } else if (token.rfind("k=", 0) == 0) {
      std::istringstream ks(token.substr(2));
      char comma;
      if (!(ks >> ket.probe[0] >> comma >> ket.probe[1] >> comma >>
            ket.probe[2]))
        throw std::invalid_argument("ket_from_string: bad probe token");
      saw_probe = true;
    } else {
      throw std::invalid_argument("ket_from_string: bad token " + token);
    }
  }
  if (!saw_probe)
    throw std::invalid_argument("ket_from_string: missing probe token");
  std::sort(ket.occ.begin(), ket.occ.end());
  return ket;
}

// Sparse complex superposition over basis kets.
class State {
 public:
  State() = default;

  const std::map<BasisKet, Amp>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const BasisKet& ket, Amp amp) {
    auto [it, inserted] = terms_.try_emplace(ket, amp);
    if (!inserted) it->second += amp;
  }

  Amp amplitude(const BasisKet& ket) const {
    auto it = terms_.find(ket);
    return it == terms_.end() ? Amp{0.0, 0.0} : it->second;
  }

  void scale(Amp factor) {
    for (auto& [ket, amp] : terms_) amp *= factor;
  }

  void accumulate(const State& other, Amp factor = Amp{1.0, 0.0}) {
    for (const auto& [ket, amp] : other.terms_) add(ket, factor * amp);
  }

  void prune(double tol = kPruneTol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) <= tol)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

 private:
  std::map<BasisKet, Amp> terms_;
};

inline Amp inner_product(const State& a, const State& b) {
  // Conjugate-linear in the first argument.
  Amp acc{0.0, 0.0};
  const auto& lhs = a.terms();
  const auto& rhs = b.terms();
  if (lhs.size() <= rhs.size()) {
    for (const auto& [ket, amp] : lhs) {
      auto it = rhs.find(ket);
      if (it != rhs.end()) acc += std::conj(amp) * it->second;
    }
  } else {
    for (const auto& [ket, amp] : rhs) {
      auto it = lhs.find(ket);
      if (it != lhs.end()) acc += std::conj(it->second) * amp;
    }
  }
  return acc;
}

inline double norm(const State& s) {
  double n2 = 0.0;
  for (const auto& [ket, amp] : s.terms()) n2 += std::norm(amp);
  return std::sqrt(n2);
}

inline State normalized(const State& s) {
  const double n = norm(s);
  if (n <= kPruneTol)
    throw std::invalid_argument("normalized: cannot normalize a null state");
  State out = s;
  out.scale(Amp{1.0 / n, 0.0});
  return out;
}

// Global-phase- and scale-invariant overlap magnitude |<a|b>| / (|a||b|).
inline double fidelity(const State& a, const State& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na <= kPruneTol || nb <= kPruneTol)
    throw std::invalid_argument("fidelity: null state");
  return std::abs(inner_product(a, b)) / (na * nb);
}

// Applies Z to every spectator qubit of `party` in the given degree of
// freedom: each excited bit contributes a factor -1.
inline State apply_spectator_z(const State& s, Party party, Dof dof) {
  State out;
  for (const auto& [ket, amp] : s.terms()) {
    const SpectatorBank& bank = ket.bank(party);
    const std::uint64_t mask = (dof == Dof::pol) ? bank.pol_v : bank.spat;
    const int parity = std::popcount(mask) & 1;
    out.add(ket, parity ? -amp : amp);
  }
  return out;
}

// Tensor product.  Party registers and apparatus modes must not overlap;
// probe indices add.
inline State tensor(const State& a, const State& b) {
  State out;
  for (const auto& [ka, va] : a.terms()) {
    for (const auto& [kb, vb] : b.terms()) {
      BasisKet ket;
      for (int pi = 0; pi < 3; ++pi) {
        const SpectatorBank& ba = ka.banks[pi];
        const SpectatorBank& bb = kb.banks[pi];
        if (ba.count > 0 && bb.count > 0)
          throw std::invalid_argument("tensor: party register collision");
        ket.banks[pi] = (ba.count > 0) ? ba : bb;
      }
      ket.occ = ka.occ;
      for (const auto& [mode, cnt] : kb.occ) {
        if (ka.photons_in(mode) > 0)
          throw std::invalid_argument("tensor: mode collision on " +
                                      mode_name(mode));
        ket.occ.emplace_back(mode, cnt);
      }
      std::sort(ket.occ.begin(), ket.occ.end());
      for (int i = 0; i < 3; ++i) ket.probe[i] = ka.probe[i] + kb.probe[i];
      out.add(ket, va * vb);
    }
  }
  out.prune();
  return out;
}

// The hyperentangled multipartite input state of one party holding n photons:
// one fusion photon sent through the apparatus and n-1 spectators.  Both the
// polarization layer and the spatial layer are W-type superpositions:
//
//   (1/sqrt(n)) [ |all spectators H> |fusion V>  +  sum_i |spectator i V> |fusion H> ]
//   (1/sqrt(n)) [ |all spectators 0> |fusion rail 1> + sum_i |spectator i 1> |fusion rail 0> ]
//
// which expands into exactly n^2 basis terms of amplitude 1/n.
inline State make_hyper_w(int n, Party party) {
  if (n < 2) throw std::invalid_argument("make_hyper_w: need n >= 2");
  if (n > 64) throw std::invalid_argument("make_hyper_w: n too large");
  State out;
  const double amp = 1.0 / static_cast<double>(n);
  for (int pb = 0; pb < n; ++pb) {      // polarization branch
    for (int sb = 0; sb < n; ++sb) {    // spatial branch
      BasisKet ket;
      SpectatorBank& bank = ket.bank(party);
      bank.count = n - 1;
      const Pol fusion_pol = (pb == 0) ? Pol::v : Pol::h;
      if (pb > 0) bank.pol_v = std::uint64_t{1} << (pb - 1);
      const int fusion_rail = (sb == 0) ? 1 : 0;
      if (sb > 0) bank.spat = std::uint64_t{1} << (sb - 1);
      ket.occ.emplace_back(make_mode(party_rail(party, fusion_rail), fusion_pol),
                           1);
      out.add(ket, Amp{amp, 0.0});
    }
  }
  return out;
}

// ---- serialization ----

inline nlohmann::json state_to_json(const State& s) {
  std::vector<std::pair<std::string, Amp>> rows;
  rows.reserve(s.size());
  for (const auto& [ket, amp] : s.terms())
    rows.emplace_back(ket_to_string(ket), amp);
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [text, amp] : rows) {
    terms.push_back({{"ket", text}, {"re", amp.real()}, {"im", amp.imag()}});
  }
  return {{"terms", terms}};
}

inline State state_from_json(const nlohmann::json& j) {
  State out;
  for (const auto& row : j.at("terms")) {
    out.add(ket_from_string(row.at("ket").get<std::string>()),
            Amp{row.at("re").get<double>(), row.at("im").get<double>()});
  }
  return out;
}

}  // namespace hyperfuse

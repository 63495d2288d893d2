#pragma once

// The two fusion protocols end to end: input preparation, routing, Kerr
// probe taps, homodyne classification, coincidence detection, feed-forward
// lookup and reporting.
//
// Calibration constants (tap tables, mixer orientations, detector labels)
// are frozen here; the test suites verify them against independently
// constructed outcome tables.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerr.hpp"
#include "optics.hpp"
#include "state.hpp"

namespace hyperfuse {

// ---------------------------------------------------------------------------
// feed-forward corrections

struct Correction {
  Party party;
  Dof dof;
  auto operator<=>(const Correction&) const = default;
};

inline std::string correction_name(const Correction& c) {
  return std::string("Z:") + party_name(c.party) + ':' +
         (c.dof == Dof::pol ? "pol" : "spat");
}

inline State apply_corrections(const State& s,
                               const std::vector<Correction>& ops) {
  State out = s;
  for (const Correction& c : ops) out = apply_spectator_z(out, c.party, c.dof);
  return out;
}

struct FeedForward {
  std::vector<Correction> ops;  // sorted for presentation
  State corrected;
  double fid = 0.0;
};

// Finds the smallest set of spectator Z layers turning `branch` into `target`
// (up to global phase).  Candidates are ranked by subset size, then
// lexicographically by (party priority, pol before spat); the first candidate
// reaching the acceptance fidelity wins.  If none does (imperfect optics),
// the best-scoring candidate is returned.
inline FeedForward lookup_feedforward(const State& branch, const State& target,
                                      const std::vector<Party>& party_priority,
                                      double accept_tol = 1e-10) {
  std::vector<Correction> elems;
  for (Party p : party_priority) {
    elems.push_back({p, Dof::pol});
    elems.push_back({p, Dof::spat});
  }
  const int k = static_cast<int>(elems.size());

  std::vector<std::vector<int>> subsets;
  subsets.reserve(std::size_t{1} << k);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    subsets.push_back(std::move(subset));
  }
  std::sort(subsets.begin(), subsets.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  FeedForward best;
  best.fid = -1.0;
  for (const std::vector<int>& subset : subsets) {
    std::vector<Correction> ops;
    ops.reserve(subset.size());
    for (int i : subset) ops.push_back(elems[i]);
    State corrected = apply_corrections(branch, ops);
    const double f = fidelity(corrected, target);
    if (f > best.fid + 1e-12) {
      std::sort(ops.begin(), ops.end());
      best.ops = std::move(ops);
      best.corrected = std::move(corrected);
      best.fid = f;
    }
    if (best.fid >= 1.0 - accept_tol) return best;
  }
  return best;
}

// ---------------------------------------------------------------------------
// calibrated constants

// Probe taps of the two-party scheme (probe 0).  First pass: arm-level taps
// on the Alice-side rails.  Second pass: polarization-selective taps, with a
// triple-strength coupling on the Bob-side rails.  Taps act on post-routing
// rails (a PBS keeps V on its own rail and hands H to the partner rail, and
// the rail labels travel onward with the paths).
inline const std::vector<KerrTap>& two_fusion_taps() {
  static const std::vector<KerrTap> taps = {
      {0, +1, {make_mode(Port::a0, Pol::h), make_mode(Port::a0, Pol::v)}},
      {0, -1, {make_mode(Port::a1, Pol::h), make_mode(Port::a1, Pol::v)}},
      {0, +1, {make_mode(Port::a0, Pol::v)}},
      {0, -1, {make_mode(Port::a1, Pol::h)}},
      {0, +3, {make_mode(Port::b0, Pol::h)}},
      {0, -3, {make_mode(Port::b1, Pol::v)}},
  };
  return taps;
}

// Two-party homodyne reference: the probe's local oscillator is offset so
// the nine outcome classes read 0..8 (raw photon-number sums span -4..+4).
inline constexpr int kTwoFusionReference = 4;

// Probe taps of the three-party scheme.  Each party taps its own two rails;
// nothing crosses parties.  Probe 0: rail-0 tap (+3) plus a V tap (+2).
// Probe 1: rail-1 tap (+1) plus a V tap (+1).  Probe 2: polarization- and
// rail-selective cells on Alice and Bob, and a flat +1 arm tap on Charlie
// that anchors the sign of the folded readout.
inline const std::vector<KerrTap>& three_fusion_taps() {
  static const std::vector<KerrTap> taps = [] {
    std::vector<KerrTap> out;
    for (Party party : {Party::alice, Party::bob, Party::charlie}) {
      const Port r0 = party_rail(party, 0);
      const Port r1 = party_rail(party, 1);
      out.push_back({0, +3, {make_mode(r0, Pol::h), make_mode(r0, Pol::v)}});
      out.push_back({0, +2, {make_mode(r0, Pol::v), make_mode(r1, Pol::v)}});
      out.push_back({1, +1, {make_mode(r1, Pol::h), make_mode(r1, Pol::v)}});
      out.push_back({1, +1, {make_mode(r0, Pol::v), make_mode(r1, Pol::v)}});
      if (party == Party::charlie) {
        out.push_back({2, +1,
                       {make_mode(r0, Pol::h), make_mode(r0, Pol::v),
                        make_mode(r1, Pol::h), make_mode(r1, Pol::v)}});
      } else {
        out.push_back({2, -1, {make_mode(r0, Pol::v)}});
        out.push_back({2, -2, {make_mode(r1, Pol::h)}});
        out.push_back({2, +1, {make_mode(r0, Pol::h)}});
      }
    }
    return out;
  }();
  return taps;
}

// The three-party success family spreads over folded probe-2 readouts
// {0,1,2}; its bins are merged into one outcome window.
inline const std::vector<int>& success_window() {
  static const std::vector<int> window = {0, 1, 2};
  return window;
}

struct Detector {
  int id = 0;
  const char* name = "";
};

inline const std::map<Mode, Detector>& two_fusion_detectors() {
  static const std::map<Mode, Detector> table = {
      {make_mode(Port::p, Pol::h), {11, "D11"}},
      {make_mode(Port::p, Pol::v), {12, "D12"}},
      {make_mode(Port::q, Pol::v), {13, "D13"}},
      {make_mode(Port::q, Pol::h), {14, "D14"}},
      {make_mode(Port::s, Pol::h), {21, "D21"}},
      {make_mode(Port::s, Pol::v), {22, "D22"}},
      {make_mode(Port::r, Pol::v), {23, "D23"}},
      {make_mode(Port::r, Pol::h), {24, "D24"}},
  };
  return table;
}

inline const std::map<Mode, Detector>& three_fusion_detectors() {
  static const std::map<Mode, Detector> table = {
      {make_mode(Port::uA, Pol::h), {1, "D1"}},
      {make_mode(Port::uA, Pol::v), {2, "D2"}},
      {make_mode(Port::vA, Pol::v), {3, "D3"}},
      {make_mode(Port::vA, Pol::h), {4, "D4"}},
      {make_mode(Port::uB, Pol::h), {5, "D5"}},
      {make_mode(Port::uB, Pol::v), {6, "D6"}},
      {make_mode(Port::vB, Pol::v), {7, "D7"}},
      {make_mode(Port::vB, Pol::h), {8, "D8"}},
      {make_mode(Port::uC, Pol::h), {9, "D9"}},
      {make_mode(Port::uC, Pol::v), {10, "D10"}},
      {make_mode(Port::vC, Pol::v), {11, "D11"}},
      {make_mode(Port::vC, Pol::h), {12, "D12"}},
  };
  return table;
}

// ---------------------------------------------------------------------------
// detection

using DetectorPattern = std::vector<std::string>;  // canonical: sorted by id

struct DetectionBranch {
  State state;        // spectator state, occupations consumed
  double prob = 0.0;  // relative to the input class state
};

// Splits a class state by which detectors fire.  Every photon must sit on a
// mapped mode; occupations convert to a detector multiset and are consumed.
inline std::map<DetectorPattern, DetectionBranch> detector_expand(
    const State& s, const std::map<Mode, Detector>& table) {
  std::map<std::vector<int>, std::pair<DetectorPattern, State>> groups;
  for (const auto& [ket, amp] : s.terms()) {
    std::vector<std::pair<int, std::string>> fired;
    for (const auto& [mode, cnt] : ket.occ) {
      auto it = table.find(mode);
      if (it == table.end())
        throw std::out_of_range("detector_expand: unmapped mode " +
                                mode_name(mode));
      for (int i = 0; i < cnt; ++i)
        fired.emplace_back(it->second.id, it->second.name);
    }
    std::sort(fired.begin(), fired.end());
    std::vector<int> ids;
    DetectorPattern names;
    for (const auto& [id, name] : fired) {
      ids.push_back(id);
      names.push_back(name);
    }
    BasisKet stripped = ket;
    stripped.occ.clear();
    auto [it, inserted] = groups.try_emplace(ids);
    if (inserted) it->second.first = std::move(names);
    it->second.second.add(stripped, amp);
  }

  std::map<DetectorPattern, DetectionBranch> out;
  for (auto& [ids, entry] : groups) {
    auto& [names, grouped] = entry;
    grouped.prune();
    const double nrm = norm(grouped);
    if (nrm <= kPruneTol) continue;
    DetectionBranch branch;
    branch.prob = nrm * nrm;
    grouped.scale(Amp{1.0 / nrm, 0.0});
    branch.state = std::move(grouped);
    out.emplace(names, std::move(branch));
  }
  return out;
}

// ---------------------------------------------------------------------------
// structural classification

struct StructuralInfo {
  // Per degree of freedom, per party: 'g' ground, 'W' own W excitation,
  // 'M' member of a coherently merged W group, '-' party absent.
  std::array<std::string, 2> symbols;
  std::string label;
};

inline StructuralInfo classify_outcome(const State& class_state,
                                       int parties) {
  if (parties != 2 && parties != 3)
    throw std::invalid_argument("classify_outcome: parties must be 2 or 3");
  StructuralInfo info;
  bool all_ground = true;
  bool all_merged = true;
  for (int d = 0; d < 2; ++d) {
    std::string symbols;
    for (int pi = 0; pi < parties; ++pi) {
      bool saw_ground = false;
      bool saw_excited = false;
      for (const auto& [ket, amp] : class_state.terms()) {
        const SpectatorBank& bank = ket.banks[pi];
        const std::uint64_t mask = (d == 0) ? bank.pol_v : bank.spat;
        (std::popcount(mask) == 0 ? saw_ground : saw_excited) = true;
      }
      char sym = 'g';
      if (saw_ground && saw_excited)
        sym = 'M';
      else if (saw_excited)
        sym = 'W';
      symbols.push_back(sym);
      if (sym != 'g') all_ground = false;
      if (sym != 'M') all_merged = false;
    }
    info.symbols[d] = symbols;
  }
  if (all_ground)
    info.label = "failure";
  else if (all_merged)
    info.label = "success";
  else
    info.label = "pol:" + info.symbols[0] + " spat:" + info.symbols[1];
  return info;
}

// The canonical post-correction state of a class: its pre-detection
// conditional with photon positions traced out.  In the ideal circuit every
// amplitude is a positive real, so the marginal is the natural all-plus
// reference the feed-forward steers to.
inline State canonical_class_target(const State& class_state,
                                    double guard_tol = 1e-12) {
  State out;
  for (const auto& [ket, amp] : class_state.terms()) {
    if (std::abs(amp.imag()) > guard_tol || amp.real() <= 0.0)
      throw std::runtime_error(
          "canonical_class_target: class state is not positive");
    BasisKet stripped = ket;
    stripped.occ.clear();
    out.add(stripped, amp);
  }
  return normalized(out);
}

// ---------------------------------------------------------------------------
// closed-form outcome probabilities

enum class OutcomeKind { success, failure, residual };

inline double closed_form_probability(int scheme, OutcomeKind kind, int n,
                                      int m, int t = 0) {
  if (n < 2 || m < 2)
    throw std::invalid_argument("closed_form_probability: need n, m >= 2");
  const double nm = static_cast<double>(n) * m;
  if (scheme == 2) {
    const double denom = nm * nm;
    switch (kind) {
      case OutcomeKind::success: {
        const double w = n + m - 2.0;
        return w * w / denom;
      }
      case OutcomeKind::failure:
        return 1.0 / denom;
      case OutcomeKind::residual:
        return 1.0 -
               closed_form_probability(2, OutcomeKind::success, n, m) -
               closed_form_probability(2, OutcomeKind::failure, n, m);
    }
  } else if (scheme == 3) {
    if (t < 2)
      throw std::invalid_argument("closed_form_probability: need t >= 2");
    const double denom = nm * t * nm * t;
    switch (kind) {
      case OutcomeKind::success: {
        const double w = n + m + t - 3.0;
        return w * w / denom;
      }
      case OutcomeKind::failure:
        return 1.0 / denom;
      case OutcomeKind::residual:
        return 1.0 -
               closed_form_probability(3, OutcomeKind::success, n, m, t) -
               closed_form_probability(3, OutcomeKind::failure, n, m, t);
    }
  }
  throw std::invalid_argument("closed_form_probability: scheme must be 2 or 3");
}

inline double success_probability(int scheme, int n, int m, int t = 0) {
  return closed_form_probability(scheme, OutcomeKind::success, n, m, t);
}
inline double failure_probability(int scheme, int n, int m, int t = 0) {
  return closed_form_probability(scheme, OutcomeKind::failure, n, m, t);
}
inline double residual_probability(int scheme, int n, int m, int t = 0) {
  return closed_form_probability(scheme, OutcomeKind::residual, n, m, t);
}

// ---------------------------------------------------------------------------
// protocol runs

struct RunOptions {
  PbsParams pbs{};
  BsParams bs{};
  double guard_tol = 1e-12;  // internal invariant guard (ideal runs)
};

inline bool is_ideal(const RunOptions& opts) {
  return opts.pbs.theta == 0.0 && opts.pbs.r == 0.0 && opts.bs.eps == 0.0;
}

struct ClassSummary {
  std::vector<int> class_key;
  std::string label;
  double probability = 0.0;
  State state;   // normalized conditional state before detection
  State target;  // canonical post-correction reference
};

struct FusionReport {
  std::vector<int> class_key;
  DetectorPattern pattern;
  std::vector<std::string> feedforward;
  std::string label;
  double probability = 0.0;
  double fidelity = 0.0;
  State corrected;
};

struct FusionRun {
  int scheme = 2;
  int n = 0, m = 0, t = 0;
  std::vector<ClassSummary> classes;
  std::vector<FusionReport> reports;
  double total_probability = 0.0;
};

// Correction search order: the merged two-party class on the Bob-side rails
// (outcome 5) resolves ties toward Bob; everything else toward Alice.
inline std::vector<Party> correction_priority(int scheme,
                                              const std::vector<int>& key) {
  if (scheme == 2 && key == std::vector<int>{5})
    return {Party::bob, Party::alice};
  if (scheme == 2) return {Party::alice, Party::bob};
  return {Party::alice, Party::bob, Party::charlie};
}

// Pre-detection stage of the two-party protocol: routing, taps, homodyne.
inline std::map<int, HomodyneBranch> two_fusion_classes(
    int n, int m, const PbsParams& pbs = {}) {
  State s = tensor(make_hyper_w(n, Party::alice), make_hyper_w(m, Party::bob));
  s = apply_pbs(s, Port::a0, Port::b0, Port::b0, Port::a0, pbs);
  s = apply_pbs(s, Port::a1, Port::b1, Port::b1, Port::a1, pbs);
  for (const KerrTap& tap : two_fusion_taps()) s = apply_kerr_tap(s, tap);
  return homodyne_project(s, 0, kTwoFusionReference);
}

inline std::map<DetectorPattern, DetectionBranch> two_fusion_detect(
    const State& class_state, const BsParams& bs = {}) {
  State s = apply_bs(class_state, Port::a0, Port::b0, Port::p, Port::q, bs);
  s = apply_bs(s, Port::a1, Port::b1, Port::r, Port::s, bs);
  for (Port port : {Port::p, Port::q, Port::r, Port::s})
    s = apply_hwp(s, port);
  return detector_expand(s, two_fusion_detectors());
}

// Pre-detection stage of the three-party protocol.
inline std::map<std::vector<int>, HomodyneBranch> three_fusion_classes(
    int n, int m, int t) {
  State s = tensor(
      tensor(make_hyper_w(n, Party::alice), make_hyper_w(m, Party::bob)),
      make_hyper_w(t, Party::charlie));
  for (const KerrTap& tap : three_fusion_taps()) s = apply_kerr_tap(s, tap);

  std::map<std::vector<int>, HomodyneBranch> out;
  for (auto& [k1, b1] : homodyne_project(s, 0)) {
    for (auto& [k2, b2] : homodyne_project(b1.state, 1)) {
      const std::vector<std::vector<int>> windows =
          (k1 == 7 && k2 == 4) ? std::vector<std::vector<int>>{success_window()}
                               : std::vector<std::vector<int>>{};
      for (auto& [k3, b3] : homodyne_project(b2.state, 2, 0, windows)) {
        HomodyneBranch branch;
        branch.prob = b1.prob * b2.prob * b3.prob;
        branch.state = std::move(b3.state);
        out.emplace(std::vector<int>{k1, k2, k3}, std::move(branch));
      }
    }
  }
  return out;
}

inline std::map<DetectorPattern, DetectionBranch> three_fusion_detect(
    const State& class_state, const BsParams& bs = {}) {
  State s = class_state;
  const Port station_out[3][2] = {{Port::uA, Port::vA},
                                  {Port::uB, Port::vB},
                                  {Port::uC, Port::vC}};
  for (Party party : {Party::alice, Party::bob, Party::charlie}) {
    const Port r0 = party_rail(party, 0);
    const Port r1 = party_rail(party, 1);
    s = apply_hwp(s, r0);
    s = apply_hwp(s, r1);
    const auto& outs = station_out[static_cast<int>(party)];
    s = apply_bs(s, r0, r1, outs[0], outs[1], bs);
  }
  return detector_expand(s, three_fusion_detectors());
}

namespace detail {

template <typename Key>
void run_protocol(FusionRun& run, std::map<Key, HomodyneBranch>&& classes,
                  const std::map<Key, HomodyneBranch>& ideal_classes,
                  const RunOptions& opts, bool ideal, int parties,
                  const BsParams& bs,
                  const std::function<std::map<DetectorPattern, DetectionBranch>(
                      const State&, const BsParams&)>& detect) {
  for (auto& [key, branch] : classes) {
    std::vector<int> class_key;
    if constexpr (std::is_same_v<Key, int>)
      class_key = {key};
    else
      class_key = key;

    ClassSummary summary;
    summary.class_key = class_key;
    summary.probability = branch.prob;
    summary.state = branch.state;

    const HomodyneBranch* reference = &branch;
    if (!ideal) {
      auto it = ideal_classes.find(key);
      if (it == ideal_classes.end())
        throw std::runtime_error("run_protocol: outcome class " +
                                 std::to_string(class_key[0]) +
                                 " has no ideal counterpart");
      reference = &it->second;
    }
    summary.label = classify_outcome(reference->state, parties).label;
    summary.target = canonical_class_target(reference->state, opts.guard_tol);

    double pattern_total = 0.0;
    for (auto& [pattern, det] : detect(branch.state, bs)) {
      FeedForward ff =
          lookup_feedforward(det.state, summary.target,
                             correction_priority(parties, class_key));
      FusionReport report;
      report.class_key = class_key;
      report.pattern = pattern;
      for (const Correction& c : ff.ops)
        report.feedforward.push_back(correction_name(c));
      report.label = summary.label;
      report.probability = branch.prob * det.prob;
      report.fidelity = ff.fid;
      report.corrected = std::move(ff.corrected);
      if (ideal && report.fidelity < 1.0 - opts.guard_tol)
        throw std::runtime_error(
            "run_protocol: feed-forward missed the class target");
      pattern_total += det.prob;
      run.reports.push_back(std::move(report));
    }
    if (std::abs(pattern_total - 1.0) > 1e-9)
      throw std::runtime_error("run_protocol: detection lost probability");

    run.total_probability += summary.probability;
    run.classes.push_back(std::move(summary));
  }
  if (ideal && std::abs(run.total_probability - 1.0) > opts.guard_tol)
    throw std::runtime_error("run_protocol: outcome classes lost probability");
}

}  // namespace detail

inline FusionRun run_two_fusion(int n, int m, const RunOptions& opts = {}) {
  if (n < 2 || m < 2)
    throw std::invalid_argument("run_two_fusion: need n, m >= 2");
  FusionRun run;
  run.scheme = 2;
  run.n = n;
  run.m = m;
  const bool ideal = is_ideal(opts);
  auto classes = two_fusion_classes(n, m, opts.pbs);
  std::map<int, HomodyneBranch> ideal_classes;
  if (!ideal) ideal_classes = two_fusion_classes(n, m);
  detail::run_protocol<int>(run, std::move(classes), ideal_classes, opts,
                            ideal, 2, opts.bs,
                            [](const State& s, const BsParams& bs) {
                              return two_fusion_detect(s, bs);
                            });
  return run;
}

inline FusionRun run_three_fusion(int n, int m, int t,
                                  const RunOptions& opts = {}) {
  if (n < 2 || m < 2 || t < 2)
    throw std::invalid_argument("run_three_fusion: need n, m, t >= 2");
  if (opts.pbs.theta != 0.0 || opts.pbs.r != 0.0)
    throw std::invalid_argument(
        "run_three_fusion: no polarizing splitter in this scheme");
  FusionRun run;
  run.scheme = 3;
  run.n = n;
  run.m = m;
  run.t = t;
  const bool ideal = opts.bs.eps == 0.0;
  auto classes = three_fusion_classes(n, m, t);
  std::map<std::vector<int>, HomodyneBranch> ideal_classes;
  if (!ideal) ideal_classes = three_fusion_classes(n, m, t);
  detail::run_protocol<std::vector<int>>(
      run, std::move(classes), ideal_classes, opts, ideal, 3, opts.bs,
      [](const State& s, const BsParams& bs) {
        return three_fusion_detect(s, bs);
      });
  return run;
}

// ---------------------------------------------------------------------------
// imperfection analysis

struct ImperfectionReport {
  double success_prob = 0.0;
  double fidelity = 0.0;  // squared overlap with the ideal corrected state
  // per-class probability-weighted mean of the squared corrected fidelity
  std::map<std::vector<int>, double> class_fidelity;
};

inline ImperfectionReport fidelity_under_imperfection(int n, int m,
                                                      const PbsParams& pbs,
                                                      const BsParams& bs) {
  RunOptions opts;
  opts.pbs = pbs;
  opts.bs = bs;
  const FusionRun run = run_two_fusion(n, m, opts);
  const std::vector<int> success_key = {4};
  ImperfectionReport report;
  std::map<std::vector<int>, double> mass;
  for (const FusionReport& rep : run.reports) {
    mass[rep.class_key] += rep.probability;
    report.class_fidelity[rep.class_key] +=
        rep.probability * rep.fidelity * rep.fidelity;
    if (rep.class_key == success_key) report.success_prob += rep.probability;
  }
  if (report.success_prob <= 0.0)
    throw std::runtime_error(
        "fidelity_under_imperfection: success class vanished");
  for (auto& [key, value] : report.class_fidelity) value /= mass.at(key);
  report.fidelity = report.class_fidelity.at(success_key);
  return report;
}

// ---------------------------------------------------------------------------
// serialization

inline nlohmann::json run_to_json(const FusionRun& run,
                                  bool include_states = false) {
  nlohmann::json j;
  j["scheme"] = run.scheme;
  j["n"] = run.n;
  j["m"] = run.m;
  if (run.scheme == 3) j["t"] = run.t;
  j["total_probability"] = run.total_probability;
  nlohmann::json classes = nlohmann::json::array();
  for (const ClassSummary& cs : run.classes) {
    nlohmann::json row;
    row["class"] = cs.class_key;
    row["label"] = cs.label;
    row["probability"] = cs.probability;
    if (include_states) row["state"] = state_to_json(cs.state);
    classes.push_back(std::move(row));
  }
  j["classes"] = std::move(classes);
  nlohmann::json reports = nlohmann::json::array();
  for (const FusionReport& rep : run.reports) {
    nlohmann::json row;
    row["class"] = rep.class_key;
    row["pattern"] = rep.pattern;
    row["feedforward"] = rep.feedforward;
    row["label"] = rep.label;
    row["probability"] = rep.probability;
    row["fidelity"] = rep.fidelity;
    if (include_states) row["corrected"] = state_to_json(rep.corrected);
    reports.push_back(std::move(row));
  }
  j["reports"] = std::move(reports);
  return j;
}

}  // namespace hyperfuse

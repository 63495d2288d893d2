// Command-line front end: runs the fusion pipelines, sweeps the closed-form
// probability surfaces, emits homodyne-discrimination data and runs the
// built-in acceptance suite.
//
// Exit codes: 0 success, 1 failed run or failed criterion, 2 bad invocation.
// Every error path prints a single machine-parsable line
//   error: <code>: <message>
// to standard error.  CSV output uses CRLF line endings and 12 significant
// digits so files are byte-stable across runs.

#include <hyperfuse/kerr.hpp>
#include <hyperfuse/protocol.hpp>
#include <hyperfuse/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hyperfuse;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Writes CSV rows with CRLF endings to a file or standard output.
class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::out | std::ios::binary);
      if (!file_)
        throw std::runtime_error("io: cannot open output file " + path);
    }
  }
  void row(const std::vector<std::string>& cells) {
    std::ostream& out = file_.is_open() ? file_ : std::cout;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << "\r\n";
  }

 private:
  std::ofstream file_;
};

struct Range {
  int lo = 2;
  int hi = 10;
};

Range parse_range(const std::string& text) {
  Range r;
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      r.lo = r.hi = std::stoi(text);
    } else {
      r.lo = std::stoi(text.substr(0, colon));
      r.hi = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("bad-range: expected LO:HI, got " + text);
  }
  if (r.lo < 2 || r.hi > 64 || r.lo > r.hi)
    throw std::invalid_argument("bad-range: bounds must satisfy 2 <= LO <= HI <= 64");
  return r;
}

double env_guard_tol() {
  const char* raw = std::getenv("HYPERFUSE_TOL");
  if (raw == nullptr || *raw == '\0') return 1e-12;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0))
    throw std::invalid_argument("bad-env: HYPERFUSE_TOL must be a positive real");
  return v;
}

// ---------------------------------------------------------------------------
// fuse

struct FuseArgs {
  int scheme = 2;
  int n = 0, m = 0, t = 0;
  double eps = 0.0, rdev = 0.0, thetadev = 0.0;
  double alpha = -1.0, theta = 0.01, gammat = 0.0;
  std::string out;
};

int cmd_fuse(const FuseArgs& args) {
  if (args.scheme == 3 && args.t < 2)
    throw std::invalid_argument("bad-flag: --t is required for --scheme 3");
  RunOptions opts;
  opts.pbs = PbsParams{args.thetadev, args.rdev};
  opts.bs = BsParams{args.eps};
  opts.guard_tol = env_guard_tol();
  const FusionRun run = args.scheme == 2
                            ? run_two_fusion(args.n, args.m, opts)
                            : run_three_fusion(args.n, args.m, args.t, opts);

  // per-class summary: probability-weighted mean fidelity over its patterns
  std::map<std::vector<int>, std::pair<double, double>> fid_mass;
  for (const FusionReport& rep : run.reports) {
    auto& [mass, fid] = fid_mass[rep.class_key];
    mass += rep.probability;
    fid += rep.probability * rep.fidelity;
  }
  std::cout << "scheme " << run.scheme << "  n=" << run.n << " m=" << run.m;
  if (run.scheme == 3) std::cout << " t=" << run.t;
  std::cout << "  total probability " << fmt12(run.total_probability) << "\n";
  std::printf("%-12s %-12s %-10s %s\n", "class", "probability", "fidelity",
              "label");
  for (const ClassSummary& cls : run.classes) {
    std::string key;
    for (std::size_t i = 0; i < cls.class_key.size(); ++i)
      key += (i ? "," : "") + std::to_string(cls.class_key[i]);
    const auto& [mass, fid] = fid_mass.at(cls.class_key);
    std::printf("%-12s %-12.4f %-10.4f %s\n", key.c_str(), cls.probability,
                mass > 0.0 ? fid / mass : 0.0, cls.label.c_str());
  }

  nlohmann::json j = run_to_json(run);
  if (args.alpha >= 0.0) {
    const int probes = args.scheme == 2 ? 1 : 3;
    j["homodyne"] = {
        {"alpha", args.alpha},
        {"theta", args.theta},
        {"gammat", args.gammat},
        {"p_success", homodyne_success_prob(args.alpha, args.theta,
                                            args.gammat, probes)}};
    std::cout << "homodyne window success probability "
              << fmt12(j["homodyne"]["p_success"].get<double>()) << "\n";
  }
  if (!args.out.empty()) {
    std::ofstream file(args.out, std::ios::out | std::ios::binary);
    if (!file)
      throw std::runtime_error("io: cannot open output file " + args.out);
    file << j.dump(2) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  int scheme = 2;
  std::string quantity = "S";
  std::string n_range = "2:10", m_range = "2:10", t_range = "2:10";
  std::string out;
};

int cmd_sweep(const SweepArgs& args) {
  OutcomeKind kind;
  if (args.quantity == "S")
    kind = OutcomeKind::success;
  else if (args.quantity == "F")
    kind = OutcomeKind::failure;
  else if (args.quantity == "PS_PR")
    kind = OutcomeKind::residual;
  else
    throw std::invalid_argument("bad-flag: --quantity must be S, F or PS_PR");

  const Range n = parse_range(args.n_range);
  const Range m = parse_range(args.m_range);
  const Range t = parse_range(args.t_range);
  CsvSink csv(args.out);
  if (args.scheme == 2) {
    csv.row({"n", "m", "value"});
    for (int i = n.lo; i <= n.hi; ++i)
      for (int j = m.lo; j <= m.hi; ++j)
        csv.row({std::to_string(i), std::to_string(j),
                 fmt12(closed_form_probability(2, kind, i, j))});
  } else {
    csv.row({"n", "m", "t", "value"});
    for (int i = n.lo; i <= n.hi; ++i)
      for (int j = m.lo; j <= m.hi; ++j)
        for (int k = t.lo; k <= t.hi; ++k)
          csv.row({std::to_string(i), std::to_string(j), std::to_string(k),
                   fmt12(closed_form_probability(3, kind, i, j, k))});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// homodyne

struct HomodyneArgs {
  double alpha = -1.0;
  std::string alpha_range;
  double theta = 0.01;
  double gammat = 0.0;
  int probes = 1;
  std::string curves;
  int samples = 241;
  std::string out;
};

int cmd_homodyne(const HomodyneArgs& args) {
  if (!args.curves.empty()) {
    // sampled discrimination curves per phase class
    if (args.alpha < 0.0)
      throw std::invalid_argument("bad-flag: --curves requires --alpha");
    std::vector<int> ks;
    std::istringstream in(args.curves);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        ks.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad-flag: --curves expects integers");
      }
      if (ks.back() < 0 || ks.back() > 8)
        throw std::invalid_argument("bad-flag: curve index must be in 0..8");
    }
    if (args.samples < 2)
      throw std::invalid_argument("bad-flag: --samples must be at least 2");
    double lo = 1e300, hi = -1e300;
    for (int k : ks) {
      const double center = 2.0 * args.alpha * std::cos(k * args.theta);
      lo = std::min(lo, center - 6.0);
      hi = std::max(hi, center + 6.0);
    }
    CsvSink csv(args.out);
    std::vector<std::string> header = {"x"};
    for (int k : ks) header.push_back("k" + std::to_string(k));
    csv.row(header);
    for (int i = 0; i < args.samples; ++i) {
      const double x = lo + (hi - lo) * i / (args.samples - 1);
      std::vector<std::string> cells = {fmt12(x)};
      for (int k : ks)
        cells.push_back(fmt12(gaussian_curve(x, args.alpha, k, args.theta)));
      csv.row(cells);
    }
    return 0;
  }

  // success probability over an amplitude grid
  double lo = args.alpha, hi = args.alpha;
  int steps = 1;
  if (!args.alpha_range.empty()) {
    int fields = 0;
    std::istringstream in(args.alpha_range);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(in, tok, ':')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("bad-range: --alpha-range expects LO:HI:STEPS");
      }
      ++fields;
    }
    if (fields != 3)
      throw std::invalid_argument("bad-range: --alpha-range expects LO:HI:STEPS");
    lo = vals[0];
    hi = vals[1];
    steps = static_cast<int>(vals[2]);
    if (steps < 2 || lo < 0.0 || hi < lo)
      throw std::invalid_argument(
          "bad-range: need 0 <= LO <= HI and at least 2 steps");
  } else if (args.alpha < 0.0) {
    throw std::invalid_argument("bad-flag: provide --alpha or --alpha-range");
  }
  CsvSink csv(args.out);
  csv.row({"alpha", "p_success"});
  for (int i = 0; i < steps; ++i) {
    const double alpha =
        steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    csv.row({fmt12(alpha), fmt12(homodyne_success_prob(alpha, args.theta,
                                                       args.gammat,
                                                       args.probes))});
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string only;
  bool corrupt_feedforward = false;
};

int cmd_verify(const VerifyArgs& args) {
  verify::VerifyOptions opts;
  opts.only = args.only;
  opts.corrupt_feedforward = args.corrupt_feedforward;
  const auto results = verify::run_all(opts);
  if (results.empty())
    throw std::invalid_argument("bad-flag: --only matches no criterion");
  for (const auto& result : results)
    std::cout << verify::format_line(result) << "\n";
  return verify::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperentangled W-state fusion simulator and verifier"};
  app.require_subcommand(1);

  FuseArgs fuse_args;
  CLI::App* fuse = app.add_subcommand(
      "fuse", "run one fusion pipeline and print its outcome classes");
  fuse->add_option("--scheme", fuse_args.scheme, "2 or 3 input states")
      ->check(CLI::Range(2, 3));
  fuse->add_option("--n", fuse_args.n, "size of the first input state")
      ->required()
      ->check(CLI::Range(2, 64));
  fuse->add_option("--m", fuse_args.m, "size of the second input state")
      ->required()
      ->check(CLI::Range(2, 64));
  fuse->add_option("--t", fuse_args.t, "size of the third input state")
      ->check(CLI::Range(2, 64));
  fuse->add_option("--eps", fuse_args.eps, "mixer imbalance");
  fuse->add_option("--rdev", fuse_args.rdev, "routing cross-leak intensity");
  fuse->add_option("--thetadev", fuse_args.thetadev,
                   "routing rotation error (radians)");
  fuse->add_option("--alpha", fuse_args.alpha, "probe amplitude");
  fuse->add_option("--theta", fuse_args.theta, "probe phase step");
  fuse->add_option("--gammat", fuse_args.gammat, "probe loss exponent");
  fuse->add_option("--out", fuse_args.out, "write the full report as JSON");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "tabulate a closed-form probability surface as CSV");
  sweep->add_option("--scheme", sweep_args.scheme, "2 or 3 input states")
      ->check(CLI::Range(2, 3));
  sweep->add_option("--quantity", sweep_args.quantity, "S, F or PS_PR");
  sweep->add_option("--n-range", sweep_args.n_range, "first size range LO:HI");
  sweep->add_option("--m-range", sweep_args.m_range, "second size range LO:HI");
  sweep->add_option("--t-range", sweep_args.t_range, "third size range LO:HI");
  sweep->add_option("--out", sweep_args.out, "output CSV path (default stdout)");

  HomodyneArgs homodyne_args;
  CLI::App* homodyne = app.add_subcommand(
      "homodyne", "emit discrimination success probabilities or curves");
  homodyne->add_option("--alpha", homodyne_args.alpha, "probe amplitude");
  homodyne->add_option("--alpha-range", homodyne_args.alpha_range,
                       "amplitude grid LO:HI:STEPS");
  homodyne->add_option("--theta", homodyne_args.theta, "probe phase step");
  homodyne->add_option("--gammat", homodyne_args.gammat,
                       "probe loss exponent");
  homodyne->add_option("--probes", homodyne_args.probes, "1 or 3 probes")
      ->check(CLI::IsMember({1, 3}));
  homodyne->add_option("--curves", homodyne_args.curves,
                       "comma-separated phase classes to sample, 0..8");
  homodyne->add_option("--samples", homodyne_args.samples,
                       "points per sampled curve");
  homodyne->add_option("--out", homodyne_args.out,
                       "output CSV path (default stdout)");

  VerifyArgs verify_args;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "run the built-in acceptance suite");
  verify_cmd->add_option("--only", verify_args.only,
                         "run only criteria whose name contains this text");
  verify_cmd
      ->add_flag("--corrupt-feedforward", verify_args.corrupt_feedforward,
                 "inject a wrong feed-forward entry (self-test of the suite)")
      ->group("");  // hidden: fault-injection hook for the test suite

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n";
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*fuse) return cmd_fuse(fuse_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*homodyne) return cmd_homodyne(homodyne_args);
    if (*verify_cmd) return cmd_verify(verify_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

// Command-line front end: instance generation, Hausdorff computation, PAC
// experiment sweeps, bound evaluation, property verification, and scaling
// studies. Emits CSV for sweeps and JSON for reports.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "irlab/analysis.hpp"
#include "irlab/geometry.hpp"
#include "irlab/instances.hpp"
#include "irlab/mdp.hpp"
#include "irlab/rng.hpp"
#include "irlab/sampling.hpp"
#include "irlab/us_irl.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace irlab;

namespace {

constexpr int kOk = 0;
constexpr int kSuiteFailure = 1;
constexpr int kUsageError = 2;
constexpr int kNumericalFailure = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::invalid_argument("cannot write " + out);
  f << text;
}

// ---- random problem generation for sweeps -----------------------------------

MdpR random_mdp(int S, int A, int H, SplitMix64& rng) {
  MdpR m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.p.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        double total = 0.0;
        std::vector<double> w(S);
        for (int sp = 0; sp < S; ++sp) {
          w[sp] = -std::log(1.0 - rng.uniform());
          total += w[sp];
        }
        for (int sp = 0; sp < S; ++sp) m.at(h, s, a, sp) = w[sp] / total;
      }
  return m;
}

PolicyTable random_deterministic_policy(int S, int A, int H, SplitMix64& rng) {
  PolicyTable pi;
  pi.S = S;
  pi.A = A;
  pi.H = H;
  pi.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) pi.at(h, s, static_cast<int>(rng.below(A))) = 1.0;
  return pi;
}

// ---- instance subcommand -----------------------------------------------------

struct InstanceOptions {
  std::string name;
  double eps = 0.2;
  int H = 2;
  int S_bar = 1;
  int A_bar = 1;
  int H_bar = 0;  // 0: pick H/2
  double eps_prime = 0.1;
  double pi_min = 0.3;
  std::vector<int> target;  // s,a,h (gadgets); empty for the base instance
  std::vector<int> signs;   // balanced sign vector for the fan-out gadget
  std::string out;
};

InstanceBundle make_bundle(const InstanceOptions& o) {
  const int hb = o.H_bar > 0 ? o.H_bar : std::max(1, o.H / 2);
  if (o.name == "example_state_only") return example_state_only(o.eps);
  if (o.name == "example_time_homogeneous") return example_time_homogeneous(o.eps);
  if (o.name == "example_beta_margin") return example_beta_margin(o.eps, o.H);
  if (o.name == "fact_large_reward") return fact_large_reward();
  if (o.name == "lb_small_delta") {
    std::optional<TargetTriple> t;
    if (!o.target.empty()) {
      if (o.target.size() != 3) throw std::invalid_argument("--target wants s,a,h");
      t = TargetTriple{o.target[0], o.target[1], o.target[2]};
    }
    return lb_small_delta(o.S_bar, o.A_bar, o.H, hb, o.eps_prime, t);
  }
  if (o.name == "lb_large_delta") {
    std::vector<SignPerturbation> assignment;
    if (!o.target.empty()) {
      if (o.target.size() != 3) throw std::invalid_argument("--target wants s,a,h");
      if (o.signs.empty()) throw std::invalid_argument("--signs required with --target");
      assignment.push_back({TargetTriple{o.target[0], o.target[1], o.target[2]}, o.signs});
    }
    return lb_large_delta(o.S_bar, o.A_bar, o.H, hb, o.eps_prime, assignment);
  }
  if (o.name == "lb_policy") {
    std::optional<PolicyTarget> t;
    if (!o.target.empty()) {
      if (o.target.size() != 2) throw std::invalid_argument("--target wants s,h");
      t = PolicyTarget{o.target[0], o.target[1]};
    }
    return lb_policy(o.S_bar, o.H, hb, o.pi_min, t);
  }
  throw std::invalid_argument("unknown instance name: " + o.name);
}

int cmd_instance(const InstanceOptions& o) {
  InstanceBundle b = make_bundle(o);
  b.validate();
  write_output(o.out, instance_to_json(b.m, b.pi));
  return kOk;
}

// ---- hausdorff subcommand ----------------------------------------------------

struct HausdorffOptions {
  std::string file_a, file_b;
  std::string restriction = "none";
  std::string method = "exact";
  int samples = 64;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_hausdorff(const HausdorffOptions& o) {
  auto [ma, pa] = instance_from_json(read_file(o.file_a));
  auto [mb, pb] = instance_from_json(read_file(o.file_b));
  if (ma.S != mb.S || ma.A != mb.A || ma.H != mb.H)
    throw std::invalid_argument("instances have different shapes");
  Restriction r = restriction_from_name(o.restriction);
  RewardPolytope p = build_polytope(ma, pa, r);
  RewardPolytope q = build_polytope(mb, pb, r);
  HausdorffMethod method;
  if (o.method == "exact")
    method = HausdorffMethod::exact;
  else if (o.method == "randomized")
    method = HausdorffMethod::randomized;
  else
    throw std::invalid_argument("method must be exact or randomized");
  HausdorffResult res = hausdorff(p, q, method, o.samples, o.seed);
  write_output(o.out, res.to_json());
  return kOk;
}

// ---- bounds subcommand -------------------------------------------------------

int cmd_bounds(int S, int A, int H, double eps, double delta, double pi_min,
               const std::string& out) {
  json j;
  j["S"] = S;
  j["A"] = A;
  j["H"] = H;
  j["epsilon"] = eps;
  j["delta"] = delta;
  std::vector<Variant> variants{Variant::inhomogeneous_known, Variant::homogeneous_known};
  if (pi_min > 0.0) {
    j["pi_min"] = pi_min;
    variants.push_back(Variant::inhomogeneous_unknown);
    variants.push_back(Variant::homogeneous_unknown);
  }
  for (Variant v : variants) {
    json entry;
    entry["upper"] = upper_bound_tau(S, A, H, eps, delta, v, pi_min);
    LowerBound lb = lower_bound_tau(S, A, H, eps, delta, v, pi_min);
    entry["lower"] = lb.value;
    entry["lower_in_range"] = lb.in_range;
    if (!lb.in_range)
      entry["warning"] = "parameters are outside the lower bound's validity range";
    j["bounds"][variant_name(v)] = entry;
  }
  write_output(out, j.dump(2));
  return kOk;
}

// ---- verify subcommand -------------------------------------------------------

struct SuiteReport {
  int checked = 0;
  int failed = 0;
};

SuiteReport verify_metrics(std::uint64_t seed) {
  SuiteReport rep;
  SplitMix64 rng(seed);
  for (int trial = 0; trial < 200; ++trial) {
    const int S = 2 + static_cast<int>(rng.below(3));
    const int A = 2 + static_cast<int>(rng.below(2));
    const int H = 2 + static_cast<int>(rng.below(3));
    MdpR m = random_mdp(S, A, H, rng);
    RewardTable r, r2;
    r.S = r2.S = S;
    r.A = r2.A = A;
    r.H = r2.H = H;
    r.r.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    r2.r = r.r;
    for (double& v : r.r) v = rng.uniform(-1.0, 1.0);
    for (double& v : r2.r) v = rng.uniform(-1.0, 1.0);
    const double dg = d_g(r, r2);
    const double dq = d_qstar(r, r2, m);
    const double dv = d_vstar(r, r2, m);
    ++rep.checked;
    if (!(dq <= H * dg + 1e-8 && dv <= 2.0 * H * dg + 1e-8 && dv <= 2.0 * H * dq + 1e-8))
      ++rep.failed;
  }
  return rep;
}

SuiteReport verify_lipschitz(std::uint64_t seed) {
  SuiteReport rep;
  SplitMix64 rng(seed);
  for (int trial = 0; trial < 100; ++trial) {
    const int S = 2, A = 2, H = 2;
    MdpR m = random_mdp(S, A, H, rng);
    PolicyTable pi = random_deterministic_policy(S, A, H, rng);
    MdpR m2 = m;
    int h = static_cast<int>(rng.below(H));
    int s = static_cast<int>(rng.below(S));
    int a = static_cast<int>(rng.below(A));
    double total = 0.0;
    for (int sp = 0; sp < S; ++sp) {
      double v = std::max(1e-6, m2.at(h, s, a, sp) + rng.uniform(-0.05, 0.05));
      m2.at(h, s, a, sp) = v;
      total += v;
    }
    for (int sp = 0; sp < S; ++sp) m2.at(h, s, a, sp) /= total;
    RewardPolytope p = build_polytope(m, pi, Restriction::none);
    RewardPolytope q = build_polytope(m2, pi, Restriction::none);
    HausdorffResult hd = hausdorff(p, q, HausdorffMethod::exact);
    double rho = rho_g(m, pi, m2, pi).rho;
    ++rep.checked;
    if (!(hd.value <= 2.0 * rho / (1.0 + rho) + 1e-6)) ++rep.failed;
  }
  return rep;
}

SuiteReport verify_concentration(std::uint64_t seed) {
  SuiteReport rep;
  // Quadratic KL bound for balanced perturbations, exhaustively.
  for (int D : {2, 4, 8}) {
    std::vector<double> uniform(D, 1.0 / D);
    for (unsigned mask = 0; mask < (1u << D); ++mask) {
      if (__builtin_popcount(mask) != D / 2) continue;
      for (double eps : {0.1, 0.25, 0.5}) {
        std::vector<double> row(D);
        for (int i = 0; i < D; ++i)
          row[i] = (1.0 + ((mask >> i) & 1 ? eps : -eps)) / D;
        ++rep.checked;
        if (!(kl_categorical(row, uniform) <= 2.0 * eps * eps + 1e-12)) ++rep.failed;
      }
    }
  }
  // Anytime concentration event, Monte Carlo.
  std::vector<double> p{0.2, 0.3, 0.5};
  ++rep.checked;
  if (!(good_event_check(p, 50, 0.1, 2000, seed) <= 0.1)) ++rep.failed;
  // Pinsker on random pairs.
  SplitMix64 rng(mix_seed(seed, 1));
  for (int trial = 0; trial < 1000; ++trial) {
    const int D = 2 + static_cast<int>(rng.below(4));
    std::vector<double> a(D), b(D);
    double sa = 0.0, sb = 0.0;
    for (int i = 0; i < D; ++i) {
      a[i] = rng.uniform() + 1e-3;
      b[i] = rng.uniform() + 1e-3;
      sa += a[i];
      sb += b[i];
    }
    double tv = 0.0;
    for (int i = 0; i < D; ++i) {
      a[i] /= sa;
      b[i] /= sb;
      tv += std::abs(a[i] - b[i]);
    }
    tv *= 0.5;
    ++rep.checked;
    if (!(2.0 * tv * tv <= kl_categorical(a, b) + 1e-12)) ++rep.failed;
  }
  return rep;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<std::pair<std::string, SuiteReport>> reports;
  if (suite == "metrics" || suite == "all")
    reports.emplace_back("metrics", verify_metrics(seed));
  if (suite == "lipschitz" || suite == "all")
    reports.emplace_back("lipschitz", verify_lipschitz(seed));
  if (suite == "concentration" || suite == "all")
    reports.emplace_back("concentration", verify_concentration(seed));
  if (reports.empty())
    throw std::invalid_argument("unknown suite: " + suite +
                                " (metrics, lipschitz, concentration, all)");
  bool ok = true;
  for (const auto& [name, rep] : reports) {
    bool pass = rep.failed == 0;
    ok = ok && pass;
    std::cout << name << ": " << (pass ? "PASS" : "FAIL") << " (" << rep.checked - rep.failed
              << "/" << rep.checked << " checks)\n";
  }
  return ok ? kOk : kSuiteFailure;
}

// ---- run / scaling subcommands -----------------------------------------------

json default_config() {
  json c;
  c["S"] = json::array({4});
  c["A"] = json::array({3});
  c["H"] = json::array({3});
  c["epsilon"] = json::array({0.5});
  c["delta"] = json::array({0.1});
  c["variant"] = json::array({"inhomogeneous-known-policy"});
  c["pi_min"] = json::array({0.0});
  c["seeds"] = 10;
  c["max_samples"] = 10000000;
  c["instance"] = {{"source", "random"}};
  c["out"] = "runs.csv";
  return c;
}

struct RunCell {
  int S, A, H;
  double epsilon, delta, pi_min;
  Variant variant;
};

struct RunRow {
  RunCell cell;
  std::uint64_t seed = 0;
  long long tau = 0;
  double eps_tau = 0.0;
  bool hausdorff_exact = false;
  double hausdorff_value = std::numeric_limits<double>::quiet_NaN();
  double upper = 0.0, lower = 0.0;
  bool failed = false;
  std::string error;
};

const char* kCsvHeader =
    "S,A,H,epsilon,delta,variant,seed,tau,eps_tau,hausdorff_exact,hausdorff_value,"
    "upper_bound,lower_bound";

std::string row_to_csv(const RunRow& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << r.cell.S << ',' << r.cell.A << ',' << r.cell.H << ',' << r.cell.epsilon << ','
     << r.cell.delta << ',' << variant_name(r.cell.variant) << ',' << r.seed << ','
     << r.tau << ',' << r.eps_tau << ',' << (r.hausdorff_exact ? 1 : 0) << ',';
  if (r.hausdorff_exact) os << r.hausdorff_value;
  os << ',' << r.upper << ',' << r.lower;
  return os.str();
}

// One seeded PAC run on a problem drawn from the configured source.
RunRow execute_run(const RunCell& cell, std::uint64_t run_seed, const json& source,
                   bool exact_hausdorff, long long max_samples) {
  RunRow row;
  row.cell = cell;
  row.seed = run_seed;
  row.upper =
      upper_bound_tau(cell.S, cell.A, cell.H, cell.epsilon, cell.delta, cell.variant,
                      cell.pi_min);
  row.lower =
      lower_bound_tau(cell.S, cell.A, cell.H, cell.epsilon, cell.delta, cell.variant,
                      cell.pi_min)
          .value;
  try {
    MdpR m;
    PolicyTable pi;
    const std::string src = source.value("source", "random");
    if (src == "random") {
      SplitMix64 rng(mix_seed(run_seed, 0xA5));
      m = random_mdp(cell.S, cell.A, cell.H, rng);
      pi = random_deterministic_policy(cell.S, cell.A, cell.H, rng);
    } else if (src == "file") {
      std::tie(m, pi) = instance_from_json(read_file(source.at("path").get<std::string>()));
    } else if (src == "library") {
      InstanceOptions o;
      o.name = source.at("name").get<std::string>();
      const json params = source.value("params", json::object());
      o.eps = params.value("eps", o.eps);
      o.H = params.value("H", o.H);
      o.S_bar = params.value("S_bar", o.S_bar);
      o.A_bar = params.value("A_bar", o.A_bar);
      o.H_bar = params.value("H_bar", o.H_bar);
      o.eps_prime = params.value("eps_prime", o.eps_prime);
      o.pi_min = params.value("pi_min", o.pi_min);
      InstanceBundle b = make_bundle(o);
      m = b.m;
      pi = b.pi;
    } else {
      throw std::invalid_argument("instance source must be random, file, or library");
    }
    row.cell.S = m.S;
    row.cell.A = m.A;
    row.cell.H = m.H;

    ConfidenceConfig cfg;
    cfg.epsilon = cell.epsilon;
    cfg.delta = cell.delta;
    cfg.variant = cell.variant;
    cfg.pi_min = cell.pi_min;
    cfg.max_samples = max_samples;
    cfg.validate(m.S, m.A, m.H);

    GenerativeOracle oracle(m, pi, run_seed);
    RunTrace trace = run_us_irl(oracle, cfg);
    row.tau = trace.tau;
    row.eps_tau = trace.eps_history.empty() ? std::numeric_limits<double>::infinity()
                                            : trace.eps_history.back();

    if (exact_hausdorff && m.S * m.H <= kDefaultDimCap) {
      RewardPolytope truth = build_polytope(m, pi, Restriction::state_only);
      RewardPolytope est =
          build_polytope(trace.empirical_m, trace.empirical_pi, Restriction::state_only);
      HausdorffResult hd = hausdorff(truth, est, HausdorffMethod::exact);
      row.hausdorff_exact = hd.exact;
      row.hausdorff_value = hd.value;
    }
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
    row.eps_tau = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

std::vector<RunRow> sweep(const json& cfg, std::uint64_t base_seed, int workers,
                          bool exact_hausdorff) {
  std::vector<RunCell> cells;
  for (int S : cfg.at("S").get<std::vector<int>>())
    for (int A : cfg.at("A").get<std::vector<int>>())
      for (int H : cfg.at("H").get<std::vector<int>>())
        for (double eps : cfg.at("epsilon").get<std::vector<double>>())
          for (double delta : cfg.at("delta").get<std::vector<double>>())
            for (const std::string& vn : cfg.at("variant").get<std::vector<std::string>>())
              for (double pm : cfg.at("pi_min").get<std::vector<double>>())
                cells.push_back({S, A, H, eps, delta, pm, variant_from_name(vn)});
  const int seeds = cfg.at("seeds").get<int>();
  if (cells.empty() || seeds < 1) throw std::invalid_argument("empty sweep grid");
  const long long max_samples = cfg.value("max_samples", 10000000LL);
  const json source = cfg.value("instance", json{{"source", "random"}});
  if (source.value("source", "random") == "file") read_file(source.at("path"));

  std::vector<RunRow> rows(cells.size() * seeds);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) break;
      const RunCell& cell = cells[i / seeds];
      const std::uint64_t run_seed = mix_seed(base_seed, i);
      rows[i] = execute_run(cell, run_seed, source, exact_hausdorff, max_samples);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

void write_rows(const std::string& path, const std::vector<RunRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& r : rows) os << row_to_csv(r) << "\n";
  write_output(path, os.str());
}

void print_cell_summaries(const std::vector<RunRow>& rows) {
  // One summary line per (cell) in first-seen order.
  std::vector<std::string> keys;
  std::vector<std::pair<int, int>> stats;  // (runs, pac failures)
  std::vector<int> with_h;
  for (const auto& r : rows) {
    std::ostringstream k;
    k << r.cell.S << ',' << r.cell.A << ',' << r.cell.H << ',' << r.cell.epsilon << ','
      << r.cell.delta << ',' << variant_name(r.cell.variant);
    auto it = std::find(keys.begin(), keys.end(), k.str());
    std::size_t idx;
    if (it == keys.end()) {
      keys.push_back(k.str());
      stats.emplace_back(0, 0);
      with_h.push_back(0);
      idx = keys.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - keys.begin());
    }
    stats[idx].first += 1;
    if (r.hausdorff_exact) {
      with_h[idx] += 1;
      if (r.hausdorff_value > r.cell.epsilon) stats[idx].second += 1;
    }
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::cout << "cell " << keys[i] << ": runs=" << stats[i].first;
    if (with_h[i] > 0)
      std::cout << " pac_success="
                << 1.0 - stats[i].second / static_cast<double>(with_h[i]) << " ("
                << with_h[i] << " with exact hausdorff)";
    std::cout << "\n";
  }
}

int cmd_run(const std::string& config_path, std::uint64_t seed, int workers,
            const std::string& out_override, bool exact_hausdorff, bool print_config) {
  json cfg = default_config();
  if (print_config) {
    std::cout << cfg.dump(2) << "\n";
    return kOk;
  }
  if (config_path.empty()) throw std::invalid_argument("--config is required");
  cfg.update(json::parse(read_file(config_path)));
  std::vector<RunRow> rows = sweep(cfg, seed, workers, exact_hausdorff);
  const std::string out = out_override.empty() ? cfg.at("out").get<std::string>() : out_override;
  write_rows(out, rows);
  print_cell_summaries(rows);
  for (const auto& r : rows)
    if (r.failed) std::cerr << "run seed " << r.seed << " failed: " << r.error << "\n";
  return kOk;
}

json default_scaling_config(const std::string& axis) {
  json c = default_config();
  c["seeds"] = 20;
  c["pi_min"] = json::array({0.0});
  if (axis == "H") {
    c["S"] = json::array({2});
    c["A"] = json::array({2});
    c["H"] = json::array({4, 6, 8, 12});
  } else if (axis == "A") {
    c["S"] = json::array({2});
    c["A"] = json::array({2, 3, 4, 6});
    c["H"] = json::array({3});
  } else if (axis == "S") {
    c["S"] = json::array({2, 3, 4, 6});
    c["A"] = json::array({2});
    c["H"] = json::array({3});
  } else {
    throw std::invalid_argument("axis must be H, S, or A");
  }
  c["out"] = "scaling_" + axis + ".csv";
  return c;
}

int cmd_scaling(const std::string& axis, const std::string& config_path,
                std::uint64_t seed, int workers, const std::string& out_override,
                bool print_config) {
  json cfg = default_scaling_config(axis);
  if (print_config) {
    std::cout << cfg.dump(2) << "\n";
    return kOk;
  }
  if (!config_path.empty()) cfg.update(json::parse(read_file(config_path)));
  if (cfg.at(axis).size() < 4)
    throw std::invalid_argument("need at least 4 grid points on the " + axis + " axis");

  std::vector<RunRow> rows = sweep(cfg, seed, workers, /*exact_hausdorff=*/false);
  const std::string out = out_override.empty() ? cfg.at("out").get<std::string>() : out_override;
  write_rows(out, rows);

  // Mean tau per axis value, then a least-squares line through the log-log points.
  std::vector<int> grid = cfg.at(axis).get<std::vector<int>>();
  json points = json::array();
  std::vector<double> xs, ys;
  for (int g : grid) {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : rows) {
      const int v = axis == "H" ? r.cell.H : axis == "S" ? r.cell.S : r.cell.A;
      if (v == g && !r.failed) {
        sum += static_cast<double>(r.tau);
        ++n;
      }
    }
    if (n == 0) throw std::runtime_error("no successful runs at axis value " + std::to_string(g));
    const double mean = sum / n;
    xs.push_back(std::log(static_cast<double>(g)));
    ys.push_back(std::log(mean));
    points.push_back({{"value", g}, {"mean_tau", mean}, {"runs", n}});
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  json report;
  report["axis"] = axis;
  report["slope"] = slope;
  report["points"] = points;
  report["csv"] = out;
  std::cout << report.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feasible-set geometry and uniform-sampling IRL experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  app.add_option("--seed", seed, "base seed for all randomized work");
  app.add_option("--workers", workers, "worker threads for sweeps");
  app.add_option("--out", out, "output path (default: per-command)");

  InstanceOptions io;
  auto* inst = app.add_subcommand("instance", "generate a library instance as JSON");
  inst->add_option("--name", io.name, "generator name")->required();
  inst->add_option("--eps", io.eps, "kernel gap for the counterexample pairs");
  inst->add_option("--horizon", io.H, "horizon H");
  inst->add_option("--s-bar", io.S_bar, "middle-state count");
  inst->add_option("--a-bar", io.A_bar, "non-expert action count");
  inst->add_option("--h-bar", io.H_bar, "funnel depth (0 picks H/2)");
  inst->add_option("--eps-prime", io.eps_prime, "gadget perturbation size");
  inst->add_option("--pi-min", io.pi_min, "minimum play probability");
  inst->add_option("--target", io.target, "perturbed triple s,a,h (s,h for lb_policy)");
  inst->add_option("--signs", io.signs, "balanced sign vector for lb_large_delta");

  HausdorffOptions ho;
  auto* hd = app.add_subcommand("hausdorff", "distance between two feasible sets");
  hd->add_option("file_a", ho.file_a, "first instance JSON")->required();
  hd->add_option("file_b", ho.file_b, "second instance JSON")->required();
  hd->add_option("--restriction", ho.restriction, "none|state-only|time-homogeneous");
  hd->add_option("--method", ho.method, "exact|randomized");
  hd->add_option("--samples", ho.samples, "probes per side (randomized)");

  int bS = 4, bA = 3, bH = 3;
  double bEps = 0.5, bDelta = 0.1, bPiMin = 0.0;
  auto* bd = app.add_subcommand("bounds", "closed-form sample-size bounds");
  bd->add_option("--S", bS)->required();
  bd->add_option("--A", bA)->required();
  bd->add_option("--H", bH)->required();
  bd->add_option("--epsilon", bEps);
  bd->add_option("--delta", bDelta);
  bd->add_option("--pi-min", bPiMin, "include unknown-policy bounds when > 0");

  std::string suite = "all";
  auto* vf = app.add_subcommand("verify", "run a property-verification suite");
  vf->add_option("suite", suite, "metrics|lipschitz|concentration|all");

  std::string run_config;
  bool exact_hausdorff = false;
  bool print_config = false;
  auto* rn = app.add_subcommand("run", "PAC experiment sweep from a JSON config");
  rn->add_option("--config", run_config, "sweep configuration file");
  rn->add_flag("--exact-hausdorff", exact_hausdorff,
               "compute the exact restricted Hausdorff per run (slow)");
  rn->add_flag("--print-config", print_config, "print the default config and exit");

  std::string axis = "H";
  std::string scaling_config;
  auto* sc = app.add_subcommand("scaling", "fit the sample-complexity scaling on one axis");
  sc->add_option("axis", axis, "H|S|A");
  sc->add_option("--config", scaling_config, "sweep configuration file");
  sc->add_flag("--print-config", print_config, "print the default config and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (inst->parsed()) {
      io.out = out;
      return cmd_instance(io);
    }
    if (hd->parsed()) {
      ho.seed = seed;
      ho.out = out;
      return cmd_hausdorff(ho);
    }
    if (bd->parsed()) return cmd_bounds(bS, bA, bH, bEps, bDelta, bPiMin, out);
    if (vf->parsed()) return cmd_verify(suite, seed);
    if (rn->parsed()) return cmd_run(run_config, seed, workers, out, exact_hausdorff, print_config);
    if (sc->parsed()) return cmd_scaling(axis, scaling_config, seed, workers, out, print_config);
  } catch (const EnumerationCapError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kUsageError;
}

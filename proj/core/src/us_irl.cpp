#include "irlab/us_irl.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "irlab/rng.hpp"

namespace irlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kE = std::exp(1.0);

bool unknown_policy(Variant v) {
  return v == Variant::inhomogeneous_unknown || v == Variant::homogeneous_unknown;
}

bool homogeneous(Variant v) {
  return v == Variant::homogeneous_known || v == Variant::homogeneous_unknown;
}

// Stage-merged counts for the homogeneous confidence functions.
long long merged_sa(const SampleDataset& d, int s, int a) {
  long long n = 0;
  for (int h = 0; h < d.H; ++h) n += d.count_sa(h, s, a);
  return n;
}

long long merged_s(const SampleDataset& d, int s) {
  long long n = 0;
  for (int h = 0; h < d.H; ++h) n += d.count_s(h, s);
  return n;
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::inhomogeneous_known: return "inhomogeneous-known-policy";
    case Variant::homogeneous_known: return "homogeneous-known-policy";
    case Variant::inhomogeneous_unknown: return "inhomogeneous-unknown-policy";
    case Variant::homogeneous_unknown: return "homogeneous-unknown-policy";
  }
  throw std::logic_error("variant_name: bad enum");
}

Variant variant_from_name(const std::string& name) {
  if (name == "inhomogeneous-known-policy") return Variant::inhomogeneous_known;
  if (name == "homogeneous-known-policy") return Variant::homogeneous_known;
  if (name == "inhomogeneous-unknown-policy") return Variant::inhomogeneous_unknown;
  if (name == "homogeneous-unknown-policy") return Variant::homogeneous_unknown;
  throw std::invalid_argument("unknown variant: " + name);
}

void ConfidenceConfig::validate(int S, int A, int H) const {
  (void)S;
  (void)A;
  (void)H;
  if (!(epsilon > 0.0 && epsilon < 2.0))
    throw std::invalid_argument("epsilon must be in (0,2)");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must be in (0,1)");
  if (unknown_policy(variant) && !(pi_min > 0.0 && pi_min <= 1.0))
    throw std::invalid_argument("unknown-policy variants need pi_min in (0,1]");
  if (max_samples <= 0) throw std::invalid_argument("max_samples must be positive");
}

double beta(long long n, double delta, int S, int A, int H) {
  if (n < 1) throw std::invalid_argument("beta: n must be >= 1");
  double out = std::log(static_cast<double>(S) * A * H / delta);
  if (S > 1)
    out += (S - 1) * std::log(kE * (1.0 + static_cast<double>(n) / (S - 1)));
  return out;
}

double beta_tilde(long long n, double delta, int S, int A) {
  if (n < 1) throw std::invalid_argument("beta_tilde: n must be >= 1");
  double out = std::log(static_cast<double>(S) * A / delta);
  if (S > 1)
    out += (S - 1) * std::log(kE * (1.0 + static_cast<double>(n) / (S - 1)));
  return out;
}

double xi(long long n, double delta, int S, int A, int H, double pi_min) {
  if (!(pi_min > 0.0 && pi_min <= 1.0))
    throw std::invalid_argument("xi: pi_min must be in (0,1]");
  if (pi_min == 1.0) return 0.0;
  const double num =
      std::log(2.0 * S * A * H * static_cast<double>(n) * n / delta);
  return num / std::log(1.0 / (1.0 - pi_min));
}

double xi_tilde(long long n, double delta, int S, int A, double pi_min) {
  if (!(pi_min > 0.0 && pi_min <= 1.0))
    throw std::invalid_argument("xi_tilde: pi_min must be in (0,1]");
  if (pi_min == 1.0) return 0.0;
  const double num = std::log(2.0 * S * A * static_cast<double>(n) * n / delta);
  return num / std::log(1.0 / (1.0 - pi_min));
}

double confidence(const SampleDataset& d, int s, int a, int h,
                  const ConfidenceConfig& cfg) {
  const int S = d.S, A = d.A, H = d.H;
  if (s < 0 || s >= S || a < 0 || a >= A || h < 0 || h >= H)
    throw std::out_of_range("confidence: index out of range");
  const double horizon = H - h;  // (H - h + 1) with 1-based stages

  switch (cfg.variant) {
    case Variant::inhomogeneous_known: {
      const long long n = d.count_sa(h, s, a);
      if (n == 0) return kInf;
      return 2.0 * std::sqrt(2.0) * horizon *
             std::sqrt(2.0 * beta(n, cfg.delta, S, A, H) / n);
    }
    case Variant::homogeneous_known: {
      const long long n = merged_sa(d, s, a);
      if (n == 0) return kInf;
      return 2.0 * std::sqrt(2.0) * horizon *
             std::sqrt(2.0 * beta_tilde(n, cfg.delta, S, A) / n);
    }
    case Variant::inhomogeneous_unknown: {
      const long long n = d.count_sa(h, s, a);
      if (n == 0) return kInf;
      const long long ns = d.count_s(h, s);
      const double threshold =
          std::max(1.0, xi(ns, cfg.delta / 2, S, A, H, cfg.pi_min));
      const double ind = static_cast<double>(ns) < threshold ? 1.0 : 0.0;
      return 2.0 * horizon *
             (ind + std::sqrt(2.0 * beta(n, cfg.delta / 2, S, A, H) / n));
    }
    case Variant::homogeneous_unknown: {
      const long long n = merged_sa(d, s, a);
      if (n == 0) return kInf;
      const long long ns = merged_s(d, s);
      const double threshold =
          std::max(1.0, xi_tilde(ns, cfg.delta / 2, S, A, cfg.pi_min));
      const double ind = static_cast<double>(ns) < threshold ? 1.0 : 0.0;
      return 2.0 * horizon *
             (ind + std::sqrt(2.0 * beta_tilde(n, cfg.delta / 2, S, A) / n));
    }
  }
  throw std::logic_error("confidence: bad variant");
}

RunTrace run_us_irl(GenerativeOracle& oracle, const ConfidenceConfig& cfg) {
  const MdpR& m = oracle.model();
  const int S = m.S, A = m.A, H = m.H;
  cfg.validate(S, A, H);

  RunTrace trace;
  trace.cfg = cfg;
  trace.seed = oracle.seed();
  SampleDataset d(S, A, H);

  const long long per_round = static_cast<long long>(S) * A * H;
  const long long max_rounds = cfg.max_samples / per_round;

  while (trace.rounds < max_rounds) {
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
          auto [sp, ae] = oracle.query(s, a, h);
          d.add(s, a, h, sp, ae);
        }
    ++trace.rounds;
    double worst = 0.0;
    for (int h = 0; h < H && worst <= cfg.epsilon; ++h)
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
          worst = std::max(worst, confidence(d, s, a, h, cfg));
    trace.eps_history.push_back(worst);
    if (worst <= cfg.epsilon) {
      trace.completed = true;
      break;
    }
  }
  trace.tau = static_cast<long long>(trace.rounds) * per_round;
  auto [em, epi] = build_empirical(d, S, A, H, homogeneous(cfg.variant));
  trace.empirical_m = std::move(em);
  trace.empirical_pi = std::move(epi);
  return trace;
}

double upper_bound_tau(int S, int A, int H, double epsilon, double delta,
                       Variant variant, double pi_min) {
  const double S_ = S, A_ = A, H_ = H;
  const double eps2 = epsilon * epsilon;
  const double sm1 = S > 1 ? S_ - 1.0 : 1.0;  // (S-1) factors vanish at S = 1

  auto known_term = [&](double log_arg_num, double lead) {
    // lead * ( log(log_arg_num/delta) + (S-1) C ) with
    // C = log( e/(S-1) + 8 e H^2 / ((S-1) eps^2) * (log(log_arg_num/delta) + 4e) )
    const double logall = std::log(log_arg_num / delta);
    double inner = 0.0;
    if (S > 1)
      inner = (S_ - 1.0) *
              std::log(kE / sm1 + 8.0 * kE * H_ * H_ / (sm1 * eps2) * (logall + 4.0 * kE));
    return lead * (logall + inner);
  };

  switch (variant) {
    case Variant::inhomogeneous_known:
      return known_term(S_ * A_ * H_, 8.0 * H_ * H_ * H_ * S_ * A_ / eps2);
    case Variant::homogeneous_known:
      return known_term(S_ * A_, 8.0 * H_ * H_ * S_ * A_ / eps2);
    case Variant::inhomogeneous_unknown: {
      if (!(pi_min > 0.0 && pi_min < 1.0))
        throw std::invalid_argument("upper_bound_tau: pi_min must be in (0,1)");
      const double logpi = std::log(1.0 / (1.0 - pi_min));
      const double log2all = std::log(2.0 * S_ * A_ * H_ / delta);
      double c1 = 0.0;
      if (S > 1)
        c1 = (S_ - 1.0) *
             std::log(kE / sm1 + 8.0 * kE * H_ * H_ / (sm1 * eps2) * (log2all + 4.0 * kE));
      const double log4all = std::log(4.0 * S_ * A_ * H_ / delta);
      const double c2 = 2.0 * std::log((log4all + 2.0) / logpi);
      return 8.0 * H_ * H_ * H_ * S_ * A_ / eps2 *
                 (std::log(S_ * A_ * H_ / delta) + c1) +
             S_ * H_ + S_ * H_ / logpi * (log4all + c2);
    }
    case Variant::homogeneous_unknown: {
      if (!(pi_min > 0.0 && pi_min < 1.0))
        throw std::invalid_argument("upper_bound_tau: pi_min must be in (0,1)");
      const double logpi = std::log(1.0 / (1.0 - pi_min));
      const double log2all = std::log(2.0 * S_ * A_ / delta);
      double c1 = 0.0;
      if (S > 1)
        c1 = (S_ - 1.0) *
             std::log(kE / sm1 + 8.0 * kE * H_ * H_ / (sm1 * eps2) * (log2all + 4.0 * kE));
      const double log4all = std::log(4.0 * S_ * A_ / delta);
      const double c2 = 2.0 * std::log((log4all + 2.0) / logpi);
      return 8.0 * H_ * H_ * S_ * A_ / eps2 * (std::log(S_ * A_ / delta) + c1) +
             S_ * H_ + S_ / logpi * (log4all + c2);
    }
  }
  throw std::logic_error("upper_bound_tau: bad variant");
}

LowerBound lower_bound_tau(int S, int A, int H, double epsilon, double delta,
                           Variant variant, double pi_min) {
  const double S_ = S, A_ = A, H_ = H;
  LowerBound out;
  switch (variant) {
    case Variant::inhomogeneous_known:
      out.in_range = delta <= 1.0 / 32 && S >= 9 && A >= 2 && H >= 12;
      out.value = H_ * H_ * H_ * S_ * A_ / (1024.0 * epsilon * epsilon) *
                  (0.5 * std::log(1.0 / delta) + S_ / 5.0);
      return out;
    case Variant::homogeneous_known:
      out.in_range = delta <= 1.0 / 32 && S >= 9 && A >= 2 && H >= 12;
      out.value = H_ * H_ * S_ * A_ / (512.0 * epsilon * epsilon) *
                  (0.5 * std::log(1.0 / delta) + S_ / 5.0);
      return out;
    case Variant::inhomogeneous_unknown:
      if (!(pi_min > 0.0 && pi_min < 1.0))
        throw std::invalid_argument("lower_bound_tau: pi_min must be in (0,1)");
      out.in_range = epsilon <= 0.5 && delta < 1.0 / 16 && S >= 7 && A >= 2 && H >= 3;
      out.value =
          S_ * H_ / (8.0 * std::log(1.0 / (1.0 - pi_min))) * std::log(1.0 / delta);
      return out;
    case Variant::homogeneous_unknown:
      if (!(pi_min > 0.0 && pi_min < 1.0))
        throw std::invalid_argument("lower_bound_tau: pi_min must be in (0,1)");
      out.in_range = epsilon <= 0.5 && delta < 1.0 / 16 && S >= 7 && A >= 2 && H >= 3;
      out.value =
          S_ / (4.0 * std::log(1.0 / (1.0 - pi_min))) * std::log(1.0 / delta);
      return out;
  }
  throw std::logic_error("lower_bound_tau: bad variant");
}

double kl_categorical(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("kl_categorical: dimension mismatch");
  double out = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    out += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(0.0, out);
}

double good_event_check(const std::vector<double>& p, long long n, double delta,
                        int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("good_event_check: trials >= 1");
  if (n < 1) throw std::invalid_argument("good_event_check: n >= 1");
  const int D = static_cast<int>(p.size());
  double threshold = std::log(1.0 / delta);
  if (D > 1)
    threshold += (D - 1) * std::log(kE * (1.0 + static_cast<double>(n) / (D - 1)));

  SplitMix64 rng(seed);
  int failures = 0;
  std::vector<double> emp(D);
  for (int t = 0; t < trials; ++t) {
    std::fill(emp.begin(), emp.end(), 0.0);
    for (long long i = 0; i < n; ++i) emp[categorical(rng, p.data(), D)] += 1.0;
    for (double& v : emp) v /= static_cast<double>(n);
    if (static_cast<double>(n) * kl_categorical(emp, p) > threshold) ++failures;
  }
  return static_cast<double>(failures) / trials;
}

bool support_detection_bound(long long n, double pi_min, double delta) {
  if (!(pi_min > 0.0 && pi_min <= 1.0))
    throw std::invalid_argument("support_detection_bound: pi_min in (0,1]");
  if (delta >= 1.0) return true;
  if (pi_min == 1.0) return n >= 1;
  const double threshold =
      std::max(1.0, std::log(1.0 / delta) / std::log(1.0 / (1.0 - pi_min)));
  return static_cast<double>(n) >= threshold;
}

std::string RunTrace::to_json() const {
  nlohmann::json j;
  j["config"] = {{"epsilon", cfg.epsilon},
                 {"delta", cfg.delta},
                 {"variant", variant_name(cfg.variant)},
                 {"pi_min", cfg.pi_min},
                 {"max_samples", cfg.max_samples}};
  j["seed"] = seed;
  j["eps_history"] = eps_history;
  j["tau"] = tau;
  j["rounds"] = rounds;
  j["completed"] = completed;
  j["empirical"] = nlohmann::json::parse(instance_to_json(empirical_m, empirical_pi));
  return j.dump(2);
}

}  // namespace irlab

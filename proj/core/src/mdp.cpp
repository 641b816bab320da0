#include "irlab/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "json.hpp"

namespace irlab {

using nlohmann::json;

static void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void MdpR::validate() const {
  require(S >= 1 && A >= 1 && H >= 1, "MdpR: S, A, H must all be >= 1");
  require(p.size() == static_cast<std::size_t>(H) * S * A * S,
          "MdpR: kernel size does not match S*A*H*S");
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        double sum = 0.0;
        for (int sp = 0; sp < S; ++sp) {
          double v = at(h, s, a, sp);
          require(v >= -kStochasticTol,
                  "MdpR: negative probability at stage " + std::to_string(h + 1));
          sum += v;
        }
        require(std::abs(sum - 1.0) <= kStochasticTol,
                "MdpR: kernel row does not sum to 1 at stage " + std::to_string(h + 1));
      }
  if (homogeneous) {
    const std::size_t block = static_cast<std::size_t>(S) * A * S;
    for (int h = 1; h < H; ++h)
      for (std::size_t i = 0; i < block; ++i)
        require(p[h * block + i] == p[i],
                "MdpR: homogeneous flag set but kernels differ across stages");
  }
}

bool PolicyTable::is_deterministic() const {
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        double v = at(h, s, a);
        if (v > kStochasticTol && v < 1.0 - kStochasticTol) return false;
      }
  return true;
}

int PolicyTable::action(int h, int s) const {
  int best = 0;
  double bp = at(h, s, 0);
  for (int a = 1; a < A; ++a)
    if (at(h, s, a) > bp) {
      bp = at(h, s, a);
      best = a;
    }
  if (bp < 1.0 - kStochasticTol)
    throw std::logic_error("PolicyTable::action on a stochastic policy");
  return best;
}

void PolicyTable::validate() const {
  require(S >= 1 && A >= 1 && H >= 1, "PolicyTable: S, A, H must all be >= 1");
  require(pi.size() == static_cast<std::size_t>(H) * S * A,
          "PolicyTable: size does not match S*A*H");
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      double sum = 0.0;
      for (int a = 0; a < A; ++a) {
        double v = at(h, s, a);
        require(v >= -kStochasticTol, "PolicyTable: negative probability");
        sum += v;
      }
      require(std::abs(sum - 1.0) <= kStochasticTol,
              "PolicyTable: row does not sum to 1 at stage " + std::to_string(h + 1));
    }
}

std::string restriction_name(Restriction r) {
  switch (r) {
    case Restriction::none: return "none";
    case Restriction::state_only: return "state-only";
    case Restriction::time_homogeneous: return "time-homogeneous";
    case Restriction::beta_margin: return "beta-margin";
  }
  return "none";
}

Restriction restriction_from_name(const std::string& name) {
  if (name == "none") return Restriction::none;
  if (name == "state-only") return Restriction::state_only;
  if (name == "time-homogeneous") return Restriction::time_homogeneous;
  if (name == "beta-margin") return Restriction::beta_margin;
  throw std::invalid_argument("unknown restriction: " + name);
}

void RewardTable::validate() const {
  require(S >= 1 && A >= 1 && H >= 1, "RewardTable: S, A, H must all be >= 1");
  require(r.size() == static_cast<std::size_t>(H) * S * A,
          "RewardTable: size does not match S*A*H");
  for (double v : r)
    require(std::abs(v) <= 1.0 + kStochasticTol, "RewardTable: value outside [-1,1]");
  if (restriction == Restriction::state_only) {
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s)
        for (int a = 1; a < A; ++a)
          require(at(h, s, a) == at(h, s, 0), "RewardTable: state-only tag violated");
  }
  if (restriction == Restriction::time_homogeneous) {
    for (int h = 1; h < H; ++h)
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
          require(at(h, s, a) == at(0, s, a), "RewardTable: time-homogeneous tag violated");
  }
  if (restriction == Restriction::beta_margin) {
    require(beta.size() == static_cast<std::size_t>(H), "RewardTable: beta must have H entries");
    for (double b : beta) require(b >= 0.0, "RewardTable: beta margins must be >= 0");
  }
}

static void check_dims(const MdpR& m, const PolicyTable& pi, const RewardTable& r) {
  if (m.S != pi.S || m.A != pi.A || m.H != pi.H)
    throw std::invalid_argument("policy dimensions do not match the model");
  if (m.S != r.S || m.A != r.A || m.H != r.H)
    throw std::invalid_argument("reward dimensions do not match the model");
}

ValueSet evaluate_policy(const MdpR& m, const PolicyTable& pi, const RewardTable& r) {
  check_dims(m, pi, r);
  ValueSet vs;
  vs.S = m.S;
  vs.A = m.A;
  vs.H = m.H;
  vs.q.assign(static_cast<std::size_t>(m.H) * m.S * m.A, 0.0);
  vs.v.assign(static_cast<std::size_t>(m.H + 1) * m.S, 0.0);
  for (int h = m.H - 1; h >= 0; --h) {
    const double* vnext = &vs.v[static_cast<std::size_t>(h + 1) * m.S];
    for (int s = 0; s < m.S; ++s) {
      double vsum = 0.0;
      for (int a = 0; a < m.A; ++a) {
        const double* row = m.row(h, s, a);
        double cont = 0.0;
        for (int sp = 0; sp < m.S; ++sp) cont += row[sp] * vnext[sp];
        double q = r.at(h, s, a) + cont;
        vs.q[(static_cast<std::size_t>(h) * m.S + s) * m.A + a] = q;
        vsum += pi.at(h, s, a) * q;
      }
      vs.v[static_cast<std::size_t>(h) * m.S + s] = vsum;
    }
  }
  return vs;
}

ValueSet optimal_values(const MdpR& m, const RewardTable& r) {
  if (m.S != r.S || m.A != r.A || m.H != r.H)
    throw std::invalid_argument("reward dimensions do not match the model");
  ValueSet vs;
  vs.S = m.S;
  vs.A = m.A;
  vs.H = m.H;
  vs.q.assign(static_cast<std::size_t>(m.H) * m.S * m.A, 0.0);
  vs.v.assign(static_cast<std::size_t>(m.H + 1) * m.S, 0.0);
  for (int h = m.H - 1; h >= 0; --h) {
    const double* vnext = &vs.v[static_cast<std::size_t>(h + 1) * m.S];
    for (int s = 0; s < m.S; ++s) {
      double best = -1e300;
      for (int a = 0; a < m.A; ++a) {
        const double* row = m.row(h, s, a);
        double cont = 0.0;
        for (int sp = 0; sp < m.S; ++sp) cont += row[sp] * vnext[sp];
        double q = r.at(h, s, a) + cont;
        vs.q[(static_cast<std::size_t>(h) * m.S + s) * m.A + a] = q;
        best = std::max(best, q);
      }
      vs.v[static_cast<std::size_t>(h) * m.S + s] = best;
    }
  }
  return vs;
}

std::vector<double> advantage(const MdpR& m, const PolicyTable& pi, const RewardTable& r) {
  ValueSet vs = evaluate_policy(m, pi, r);
  std::vector<double> adv(vs.q.size());
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s)
      for (int a = 0; a < m.A; ++a)
        adv[(static_cast<std::size_t>(h) * m.S + s) * m.A + a] =
            vs.q_at(h, s, a) - vs.v_at(h, s);
  return adv;
}

Feasibility is_feasible(const MdpR& m, const PolicyTable& pi_e, const RewardTable& r,
                        double tol) {
  if (tol < 0) throw std::invalid_argument("is_feasible: tol must be >= 0");
  std::vector<double> adv = advantage(m, pi_e, r);
  Feasibility f;
  f.max_violation = 0.0;
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s)
      for (int a = 0; a < m.A; ++a) {
        std::size_t i = (static_cast<std::size_t>(h) * m.S + s) * m.A + a;
        double viol = std::max(adv[i], std::abs(r.r[i]) - 1.0);
        if (viol > f.max_violation) {
          f.max_violation = viol;
          f.h = h;
          f.s = s;
          f.a = a;
        }
      }
  f.feasible = f.max_violation <= tol;
  return f;
}

PolicyTable greedy_policy(const MdpR& m, const ValueSet& vs) {
  PolicyTable pi;
  pi.S = m.S;
  pi.A = m.A;
  pi.H = m.H;
  pi.pi.assign(static_cast<std::size_t>(m.H) * m.S * m.A, 0.0);
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s) {
      int best = 0;
      double bq = vs.q_at(h, s, 0);
      for (int a = 1; a < m.A; ++a)
        if (vs.q_at(h, s, a) > bq + 0.0) {  // strict: ties go to the lowest index
          bq = vs.q_at(h, s, a);
          best = a;
        }
      pi.at(h, s, best) = 1.0;
    }
  return pi;
}

// ---- JSON I/O ---------------------------------------------------------------

std::string instance_to_json(const MdpR& m, const PolicyTable& pi) {
  json j;
  j["S"] = m.S;
  j["A"] = m.A;
  j["H"] = m.H;
  j["homogeneous"] = m.homogeneous;
  json p = json::array();
  for (int h = 0; h < m.H; ++h) {
    json jh = json::array();
    for (int s = 0; s < m.S; ++s) {
      json js = json::array();
      for (int a = 0; a < m.A; ++a) {
        json ja = json::array();
        for (int sp = 0; sp < m.S; ++sp) ja.push_back(m.at(h, s, a, sp));
        js.push_back(std::move(ja));
      }
      jh.push_back(std::move(js));
    }
    p.push_back(std::move(jh));
  }
  j["p"] = std::move(p);
  json pol = json::array();
  for (int h = 0; h < m.H; ++h) {
    json jh = json::array();
    for (int s = 0; s < m.S; ++s) {
      json js = json::array();
      for (int a = 0; a < m.A; ++a) js.push_back(pi.at(h, s, a));
      jh.push_back(std::move(js));
    }
    pol.push_back(std::move(jh));
  }
  j["policy"] = std::move(pol);
  return j.dump(2);
}

std::pair<MdpR, PolicyTable> instance_from_json(const std::string& text) {
  json j = json::parse(text);
  MdpR m;
  m.S = j.at("S").get<int>();
  m.A = j.at("A").get<int>();
  m.H = j.at("H").get<int>();
  m.homogeneous = j.value("homogeneous", false);
  m.p.assign(static_cast<std::size_t>(m.H) * m.S * m.A * m.S, 0.0);
  const json& p = j.at("p");
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s)
      for (int a = 0; a < m.A; ++a)
        for (int sp = 0; sp < m.S; ++sp)
          m.at(h, s, a, sp) = p.at(h).at(s).at(a).at(sp).get<double>();
  PolicyTable pi;
  pi.S = m.S;
  pi.A = m.A;
  pi.H = m.H;
  pi.pi.assign(static_cast<std::size_t>(m.H) * m.S * m.A, 0.0);
  const json& pol = j.at("policy");
  for (int h = 0; h < m.H; ++h)
    for (int s = 0; s < m.S; ++s)
      for (int a = 0; a < m.A; ++a) pi.at(h, s, a) = pol.at(h).at(s).at(a).get<double>();
  m.validate();
  pi.validate();
  return {std::move(m), std::move(pi)};
}

std::string reward_to_json(const RewardTable& r) {
  json j;
  json jr = json::array();
  for (int h = 0; h < r.H; ++h) {
    json jh = json::array();
    for (int s = 0; s < r.S; ++s) {
      json js = json::array();
      for (int a = 0; a < r.A; ++a) js.push_back(r.at(h, s, a));
      jh.push_back(std::move(js));
    }
    jr.push_back(std::move(jh));
  }
  j["r"] = std::move(jr);
  j["restriction"] = restriction_name(r.restriction);
  if (!r.beta.empty()) j["beta"] = r.beta;
  return j.dump(2);
}

RewardTable reward_from_json(const std::string& text, int S, int A, int H) {
  json j = json::parse(text);
  RewardTable r;
  r.S = S;
  r.A = A;
  r.H = H;
  r.r.assign(static_cast<std::size_t>(H) * S * A, 0.0);
  const json& jr = j.at("r");
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) r.at(h, s, a) = jr.at(h).at(s).at(a).get<double>();
  r.restriction = restriction_from_name(j.value("restriction", std::string("none")));
  if (j.contains("beta")) r.beta = j.at("beta").get<std::vector<double>>();
  r.validate();
  return r;
}

}  // namespace irlab

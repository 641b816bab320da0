#include "irlab/sampling.hpp"

#include <sstream>
#include <stdexcept>

namespace irlab {

SampleDataset::SampleDataset(int S_, int A_, int H_, bool keep)
    : S(S_), A(A_), H(H_), keep_tuples(keep) {
  n_sas.assign(static_cast<std::size_t>(H) * S * A * S, 0);
  n_sa.assign(static_cast<std::size_t>(H) * S * A, 0);
  n_s.assign(static_cast<std::size_t>(H) * S, 0);
  n_e.assign(static_cast<std::size_t>(H) * S * A, 0);
}

void SampleDataset::add(int s, int a, int h, int sp, int ae) {
  if (s < 0 || s >= S || a < 0 || a >= A || h < 0 || h >= H || sp < 0 || sp >= S ||
      ae < 0 || ae >= A)
    throw std::out_of_range("SampleDataset::add: index out of range");
  ++n_sas[(((static_cast<std::size_t>(h) * S + s) * A + a) * S) + sp];
  ++n_sa[(static_cast<std::size_t>(h) * S + s) * A + a];
  ++n_s[static_cast<std::size_t>(h) * S + s];
  ++n_e[(static_cast<std::size_t>(h) * S + s) * A + ae];
  ++total;
  if (keep_tuples) tuples.push_back({s, a, h, sp, ae});
}

void SampleDataset::merge(const SampleDataset& other) {
  if (S != other.S || A != other.A || H != other.H)
    throw std::invalid_argument("SampleDataset::merge: shape mismatch");
  for (std::size_t i = 0; i < n_sas.size(); ++i) n_sas[i] += other.n_sas[i];
  for (std::size_t i = 0; i < n_sa.size(); ++i) n_sa[i] += other.n_sa[i];
  for (std::size_t i = 0; i < n_s.size(); ++i) n_s[i] += other.n_s[i];
  for (std::size_t i = 0; i < n_e.size(); ++i) n_e[i] += other.n_e[i];
  total += other.total;
  if (keep_tuples)
    tuples.insert(tuples.end(), other.tuples.begin(), other.tuples.end());
}

std::string SampleDataset::to_csv() const {
  std::ostringstream os;
  os << "kind,h,s,a,sp,count\n";
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        for (int sp = 0; sp < S; ++sp)
          if (long long c = count_sas(h, s, a, sp))
            os << "transition," << h + 1 << ',' << s << ',' << a << ',' << sp << ','
               << c << '\n';
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a)
        if (long long c = count_e(h, s, a))
          os << "expert," << h + 1 << ',' << s << ',' << a << ",," << c << '\n';
  return os.str();
}

GenerativeOracle::GenerativeOracle(MdpR m, PolicyTable pi_e, std::uint64_t seed)
    : m_(std::move(m)), pi_(std::move(pi_e)), rng_(seed), seed_(seed) {
  m_.validate();
  pi_.validate();
  if (pi_.S != m_.S || pi_.A != m_.A || pi_.H != m_.H)
    throw std::invalid_argument("GenerativeOracle: policy/kernel shape mismatch");
}

std::pair<int, int> GenerativeOracle::query(int s, int a, int h) {
  if (s < 0 || s >= m_.S || a < 0 || a >= m_.A || h < 0 || h >= m_.H)
    throw std::out_of_range("GenerativeOracle::query: index out of range");
  const int sp = categorical(rng_, m_.row(h, s, a), m_.S);
  const int ae = categorical(rng_, pi_.row(h, s), m_.A);
  ++queries_;
  return {sp, ae};
}

std::pair<MdpR, PolicyTable> build_empirical(const SampleDataset& d, int S, int A,
                                             int H, bool homogeneous) {
  MdpR m;
  m.S = S;
  m.A = A;
  m.H = H;
  m.homogeneous = homogeneous;
  m.p.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
  PolicyTable pi;
  pi.S = S;
  pi.A = A;
  pi.H = H;
  pi.homogeneous = homogeneous;
  pi.pi.assign(static_cast<std::size_t>(H) * S * A, 0.0);

  const int stages = homogeneous ? 1 : H;
  for (int h = 0; h < stages; ++h) {
    for (int s = 0; s < S; ++s) {
      long long ns = 0;
      std::vector<long long> ne(A, 0);
      for (int a = 0; a < A; ++a) {
        long long nsa = 0;
        std::vector<long long> nss(S, 0);
        for (int hh = h; hh < H; hh += homogeneous ? 1 : H) {
          nsa += d.count_sa(hh, s, a);
          for (int sp = 0; sp < S; ++sp) nss[sp] += d.count_sas(hh, s, a, sp);
          ne[a] += d.count_e(hh, s, a);
        }
        ns += nsa;
        for (int sp = 0; sp < S; ++sp)
          m.at(h, s, a, sp) = nsa > 0 ? static_cast<double>(nss[sp]) / nsa : 1.0 / S;
      }
      for (int a = 0; a < A; ++a)
        pi.at(h, s, a) = ns > 0 ? static_cast<double>(ne[a]) / ns : 1.0 / A;
    }
  }
  if (homogeneous) {
    for (int h = 1; h < H; ++h)
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a) {
          pi.at(h, s, a) = pi.at(0, s, a);
          for (int sp = 0; sp < S; ++sp) m.at(h, s, a, sp) = m.at(0, s, a, sp);
        }
  }
  return {m, pi};
}

}  // namespace irlab

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "qss/access.hpp"

namespace qss {

inline bool is_prime(unsigned q) {
  if (q < 2) return false;
  for (unsigned d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Element of the prime field F_q, value kept reduced.
class Fp {
public:
  Fp() : v_(0), q_(2) {}
  Fp(std::int64_t value, unsigned q) : q_(q) {
    if (!is_prime(q)) throw std::invalid_argument("Fp: modulus must be prime");
    std::int64_t r = value % static_cast<std::int64_t>(q);
    if (r < 0) r += q;
    v_ = static_cast<unsigned>(r);
  }

  unsigned value() const { return v_; }
  unsigned modulus() const { return q_; }

  Fp operator+(const Fp& o) const { return raw(check(o), (v_ + o.v_) % q_); }
  Fp operator-(const Fp& o) const { return raw(check(o), (v_ + q_ - o.v_) % q_); }
  Fp operator*(const Fp& o) const {
    return raw(check(o), static_cast<unsigned>(
                             (static_cast<std::uint64_t>(v_) * o.v_) % q_));
  }
  Fp operator-() const { return raw(q_, (q_ - v_) % q_); }

  Fp pow(unsigned e) const {
    Fp r = raw(q_, 1 % q_), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  Fp inv() const {
    if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
    return pow(q_ - 2);  // Fermat
  }

  bool operator==(const Fp& o) const { return v_ == o.v_ && q_ == o.q_; }
  bool operator!=(const Fp& o) const { return !(*this == o); }

private:
  // trusted-internal factory: value already reduced
  static Fp raw(unsigned q, unsigned v) {
    Fp x;
    x.q_ = q;
    x.v_ = v;
    return x;
  }
  unsigned check(const Fp& o) const {
    if (q_ != o.q_) throw std::invalid_argument("Fp: modulus mismatch");
    return q_;
  }

  unsigned v_;
  unsigned q_;
};

using FpTuple = std::vector<Fp>;

// Per-share classical digit vectors.
using ClassicalShareVector = std::map<ShareLabel, FpTuple>;

// Shamir threshold sharing: one polynomial of degree < K per secret digit,
// secret at x=0, share i at x=i. Needs q > N so the points are distinct.
// `randomness` supplies the K-1 nonconstant coefficients for each digit,
// laid out digit-major.
inline std::vector<FpTuple> shamir_share(const FpTuple& secret, unsigned K,
                                         unsigned N, unsigned q,
                                         const std::vector<Fp>& randomness) {
  if (K == 0 || K > N) throw std::invalid_argument("shamir_share: need 1 <= K <= N");
  if (q <= N) throw std::invalid_argument("shamir_share: need q > N");
  if (!is_prime(q)) throw std::invalid_argument("shamir_share: q must be prime");
  if (randomness.size() != secret.size() * (K - 1))
    throw std::invalid_argument("shamir_share: wrong randomness length");
  for (const auto& c : secret)
    if (c.modulus() != q) throw std::invalid_argument("shamir_share: modulus mismatch");
  for (const auto& c : randomness)
    if (c.modulus() != q) throw std::invalid_argument("shamir_share: modulus mismatch");

  std::vector<FpTuple> shares(N);
  for (unsigned i = 1; i <= N; ++i) {
    Fp x(i, q);
    FpTuple tuple;
    for (std::size_t d = 0; d < secret.size(); ++d) {
      Fp acc = secret[d];
      Fp xp(1, q);
      for (unsigned j = 0; j + 1 < K; ++j) {
        xp = xp * x;
        acc = acc + randomness[d * (K - 1) + j] * xp;
      }
      tuple.push_back(acc);
    }
    shares[i - 1] = std::move(tuple);
  }
  return shares;
}

// Lagrange interpolation at x=0 from at least K distinct evaluation points.
inline FpTuple shamir_reconstruct(
    const std::vector<std::pair<unsigned, FpTuple>>& shares, unsigned K,
    unsigned q) {
  if (shares.size() < K)
    throw std::invalid_argument("shamir_reconstruct: fewer than K shares");
  for (std::size_t i = 0; i < shares.size(); ++i)
    for (std::size_t j = i + 1; j < shares.size(); ++j)
      if (shares[i].first == shares[j].first)
        throw std::invalid_argument("shamir_reconstruct: duplicate points");
  std::size_t digits = shares[0].second.size();
  FpTuple secret(digits, Fp(0, q));
  for (unsigned i = 0; i < K; ++i) {
    Fp xi(shares[i].first, q);
    Fp w(1, q);
    for (unsigned j = 0; j < K; ++j) {
      if (j == i) continue;
      Fp xj(shares[j].first, q);
      w = w * xj * (xj - xi).inv();  // basis weight at x=0
    }
    for (std::size_t d = 0; d < digits; ++d)
      secret[d] = secret[d] + shares[i].second[d] * w;
  }
  return secret;
}

// Replication scheme for an arbitrary access structure: one additive piece
// r_j per maximal forbidden set F_j, with r_m closing the sum to the secret;
// piece j goes to every share outside F_j.
struct ReplicationPlan {
  std::vector<ShareSet> forbidden;  // maximal forbidden sets, canonical order
  std::map<ShareLabel, std::vector<std::size_t>> pieces_held;
};

inline ReplicationPlan replication_plan(const AccessStructure& st) {
  ReplicationPlan plan;
  plan.forbidden = maximal_forbidden_sets(st);
  for (const auto& share : st.all_shares()) {
    std::vector<std::size_t> held;
    for (std::size_t j = 0; j < plan.forbidden.size(); ++j)
      if (!plan.forbidden[j].count(share)) held.push_back(j);
    if (held.empty())
      throw std::invalid_argument(
          "replication_plan: share lies in every maximal forbidden set");
    plan.pieces_held[share] = std::move(held);
  }
  return plan;
}

// `randomness` holds m-1 tuples (m = number of maximal forbidden sets),
// each of the secret's arity. Returns each share's held pieces concatenated
// in piece order.
inline ClassicalShareVector replication_share(
    const FpTuple& secret, const AccessStructure& st,
    const std::vector<FpTuple>& randomness) {
  ReplicationPlan plan = replication_plan(st);
  std::size_t m = plan.forbidden.size();
  if (randomness.size() + 1 != m)
    throw std::invalid_argument("replication_share: need m-1 randomness tuples");
  unsigned q = secret.at(0).modulus();
  std::vector<FpTuple> pieces = randomness;
  FpTuple last = secret;
  for (const auto& r : randomness) {
    if (r.size() != secret.size())
      throw std::invalid_argument("replication_share: randomness arity mismatch");
    for (std::size_t d = 0; d < secret.size(); ++d) last[d] = last[d] - r[d];
  }
  pieces.push_back(std::move(last));

  ClassicalShareVector out;
  for (const auto& [share, held] : plan.pieces_held) {
    FpTuple digits;
    for (std::size_t j : held)
      for (const auto& x : pieces[j]) digits.push_back(x);
    out[share] = std::move(digits);
  }
  (void)q;
  return out;
}

// The F_3 two-out-of-three additive scheme for a pair secret:
// shares (g1,g2), (a+g1,b+g2), (a+2g1,b+2g2).
inline std::array<std::array<Fp, 2>, 3> additive_2of3(
    const std::array<Fp, 2>& secret, const std::array<Fp, 2>& gamma) {
  if (secret[0].modulus() != 3 || gamma[0].modulus() != 3)
    throw std::invalid_argument("additive_2of3: defined over F_3");
  Fp two(2, 3);
  return {{{gamma[0], gamma[1]},
           {secret[0] + gamma[0], secret[1] + gamma[1]},
           {secret[0] + two * gamma[0], secret[1] + two * gamma[1]}}};
}

}  // namespace qss

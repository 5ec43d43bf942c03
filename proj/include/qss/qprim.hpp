#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qss/gf.hpp"
#include "qss/qcore.hpp"

namespace qss {

// generalized shift: X|j> = |j+1 mod q>
inline CMatrix pauli_x(unsigned q) {
  if (!is_prime(q)) throw std::invalid_argument("pauli_x: q must be prime");
  CMatrix m(q, q);
  for (unsigned j = 0; j < q; ++j) m((j + 1) % q, j) = 1.0;
  return m;
}

// generalized clock: Z|j> = w^j |j>, w = exp(2 pi i / q)
inline CMatrix pauli_z(unsigned q) {
  if (!is_prime(q)) throw std::invalid_argument("pauli_z: q must be prime");
  CMatrix m(q, q);
  for (unsigned j = 0; j < q; ++j)
    m(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / q);
  return m;
}

// X^alpha Z^beta acting on one q-dimensional system
struct PauliPower {
  Fp alpha;
  Fp beta;

  PauliPower(Fp a, Fp b) : alpha(a), beta(b) {
    if (a.modulus() != b.modulus())
      throw std::invalid_argument("PauliPower: modulus mismatch");
  }
  PauliPower(unsigned a, unsigned b, unsigned q)
      : PauliPower(Fp(a, q), Fp(b, q)) {}

  unsigned q() const { return alpha.modulus(); }

  PauliPower inverse() const { return PauliPower(-alpha, -beta); }
};

// matrix of X^alpha Z^beta:  |j> -> w^{beta j} |j+alpha>
inline CMatrix pauli_power_matrix(const PauliPower& p) {
  unsigned q = p.q();
  CMatrix m(q, q);
  for (unsigned j = 0; j < q; ++j) {
    double phase = 2.0 * std::numbers::pi * (p.beta * Fp(j, q)).value() / q;
    m((j + p.alpha.value()) % q, j) = std::polar(1.0, phase);
  }
  return m;
}

inline DensityMatrix bell_pair(unsigned q, const std::string& label_a = "A",
                               const std::string& label_b = "B") {
  if (!is_prime(q)) throw std::invalid_argument("bell_pair: q must be prime");
  return bell_ket(q, label_a, label_b).to_density();
}

// conjugate one subsystem by X^alpha Z^beta
inline DensityMatrix qotp_apply(const DensityMatrix& rho,
                                const std::string& target,
                                const PauliPower& p) {
  std::size_t pos = rho.layout.index_of(target);
  if (rho.layout.parts[pos].dim != p.q())
    throw std::invalid_argument("qotp_apply: target dimension != q");
  CMatrix u = pauli_power_matrix(p);
  CMatrix full = CMatrix::identity(1);
  for (std::size_t i = 0; i < rho.layout.parts.size(); ++i)
    full = kron(full, i == pos ? u : CMatrix::identity(rho.layout.parts[i].dim));
  return DensityMatrix(rho.layout, full * rho.mat * full.adjoint());
}

inline Ket qotp_apply(const Ket& k, const std::string& target,
                      const PauliPower& p) {
  std::size_t pos = k.layout.index_of(target);
  if (k.layout.parts[pos].dim != p.q())
    throw std::invalid_argument("qotp_apply: target dimension != q");
  return k.apply_site(pauli_power_matrix(p), target);
}

// superdense coding of (alpha, beta): pi1 is the untouched half of a Bell
// pair, pi2 the half passed through X^alpha Z^beta
inline Ket superdense_encode_ket(const PauliPower& msg,
                                 const std::string& label_pi1 = "pi1",
                                 const std::string& label_pi2 = "pi2") {
  Ket bell = bell_ket(msg.q(), label_pi1, label_pi2);
  return qotp_apply(bell, label_pi2, msg);
}

inline DensityMatrix superdense_encode(unsigned alpha, unsigned beta, unsigned q,
                                       const std::string& label_pi1 = "pi1",
                                       const std::string& label_pi2 = "pi2") {
  return superdense_encode_ket(PauliPower(alpha, beta, q), label_pi1, label_pi2)
      .to_density();
}

// project onto the generalized Bell basis; fails unless the state is (within
// tolerance) one of the q^2 basis states
inline std::optional<std::pair<unsigned, unsigned>> superdense_decode(
    const DensityMatrix& state) {
  if (state.layout.parts.size() != 2 ||
      state.layout.parts[0].dim != state.layout.parts[1].dim)
    return std::nullopt;
  unsigned q = static_cast<unsigned>(state.layout.parts[0].dim);
  for (unsigned a = 0; a < q; ++a)
    for (unsigned b = 0; b < q; ++b) {
      Ket basis = superdense_encode_ket(PauliPower(a, b, q),
                                        state.layout.parts[0].label,
                                        state.layout.parts[1].label);
      cx overlap = 0;  // <basis| rho |basis>
      for (std::size_t i = 0; i < basis.amp.size(); ++i) {
        if (basis.amp[i] == cx(0, 0)) continue;
        for (std::size_t j = 0; j < basis.amp.size(); ++j)
          overlap += std::conj(basis.amp[i]) * state.mat(i, j) * basis.amp[j];
      }
      if (std::abs(overlap - cx(1, 0)) <= tol_entropy) return std::make_pair(a, b);
    }
  return std::nullopt;
}

// Polynomial ((K, 2K-1)) threshold code truncated to N shares. Basis map:
//   |s>  ->  q^{-(K-1)/2} sum_{c in F_q^{K-1}} |f(0), f(1), ..., f(2K-2)>
// with f(x) = c_0 + c_1 x + ... + c_{K-2} x^{K-2} + s x^{K-1}; the secret is
// the top coefficient so that any K evaluations determine it and any K-1
// reveal nothing. The first N evaluation points become shares, the remaining
// 2K-1-N stay behind as environment qudits.
inline CMatrix cgl_isometry(unsigned K, unsigned N, unsigned q) {
  if (!is_prime(q)) throw std::invalid_argument("cgl: q must be prime");
  if (K == 0 || K > N || 2 * K <= N)
    throw std::invalid_argument("cgl: need N/2 < K <= N");
  unsigned m = 2 * K - 1;
  if (q < m) throw std::invalid_argument("cgl: need q >= 2K-1");

  std::size_t out_dim = 1;
  for (unsigned i = 0; i < m; ++i) out_dim *= q;
  CMatrix v(out_dim, q);
  std::size_t branches = 1;
  for (unsigned i = 0; i + 1 < K; ++i) branches *= q;
  double w = 1.0 / std::sqrt(static_cast<double>(branches));

  for (unsigned s = 0; s < q; ++s) {
    for (std::size_t c = 0; c < branches; ++c) {
      // coefficients c_0..c_{K-2} from the mixed-radix digits of c
      std::vector<unsigned> coeff(K, 0);
      std::size_t rem = c;
      for (unsigned d = 0; d + 1 < K; ++d) {
        coeff[d] = rem % q;
        rem /= q;
      }
      coeff[K - 1] = s;
      std::size_t row = 0;
      for (unsigned x = 0; x < m; ++x) {
        Fp val(0, q), xp(1, q), xf(x, q);
        for (unsigned d = 0; d < K; ++d) {
          val = val + Fp(coeff[d], q) * xp;
          xp = xp * xf;
        }
        row = row * q + val.value();
      }
      v(row, s) += w;
    }
  }
  return v;
}

// Encode the q-dimensional subsystem `secret_label` of a pure state into N
// share qudits (labels `share_labels`) plus 2K-1-N environment qudits.
inline Ket cgl_encode(const Ket& state, const std::string& secret_label,
                      unsigned K, unsigned N, unsigned q,
                      const std::vector<std::string>& share_labels,
                      const std::vector<std::string>& env_labels) {
  unsigned m = 2 * K - 1;
  if (share_labels.size() != N || env_labels.size() != m - N)
    throw std::invalid_argument("cgl_encode: label count mismatch");
  std::size_t pos = state.layout.index_of(secret_label);
  if (state.layout.parts[pos].dim != q)
    throw std::invalid_argument("cgl_encode: secret dimension != q");
  std::vector<SubsystemLayout::Part> parts;
  for (const auto& l : share_labels) parts.push_back({l, q});
  for (const auto& l : env_labels) parts.push_back({l, q});
  return state.apply_isometry(cgl_isometry(K, N, q), secret_label, parts);
}

inline DensityMatrix cgl_encode(const DensityMatrix& rho,
                                const std::string& secret_label, unsigned K,
                                unsigned N, unsigned q,
                                const std::vector<std::string>& share_labels,
                                const std::vector<std::string>& env_labels) {
  unsigned m = 2 * K - 1;
  if (share_labels.size() != N || env_labels.size() != m - N)
    throw std::invalid_argument("cgl_encode: label count mismatch");
  std::size_t pos = rho.layout.index_of(secret_label);
  if (rho.layout.parts[pos].dim != q)
    throw std::invalid_argument("cgl_encode: secret dimension != q");

  CMatrix iso = cgl_isometry(K, N, q);
  CMatrix full = CMatrix::identity(1);
  for (std::size_t i = 0; i < rho.layout.parts.size(); ++i)
    full = kron(full, i == pos ? iso
                               : CMatrix::identity(rho.layout.parts[i].dim));
  SubsystemLayout lay;
  lay.base = rho.layout.base;
  for (std::size_t i = 0; i < rho.layout.parts.size(); ++i) {
    if (i == pos) {
      for (const auto& l : share_labels) lay.parts.push_back({l, q});
      for (const auto& l : env_labels) lay.parts.push_back({l, q});
    } else {
      lay.parts.push_back(rho.layout.parts[i]);
    }
  }
  return DensityMatrix(std::move(lay), full * rho.mat * full.adjoint());
}

}  // namespace qss

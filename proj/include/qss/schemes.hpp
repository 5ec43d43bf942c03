#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qss/access.hpp"
#include "qss/gf.hpp"
#include "qss/qcore.hpp"
#include "qss/qprim.hpp"
#include "qss/rational.hpp"

namespace qss {

// One realization of the classical randomness: the classical share values it
// produces and the resulting pure quantum state over R + quantum shares (+
// environment).
struct SchemeBranch {
  ClassicalShareVector classical;
  Ket state;
};

// A secret-sharing protocol for one q-dimensional secret qudit. The branch
// rule maps every assignment of the (uniform, F_q-valued) randomness
// variables to share contents; the reference system R enters maximally
// entangled with the secret.
struct Scheme {
  std::string family;
  AccessStructure structure;
  unsigned q = 2;
  std::size_t lambda0 = 1;                             // secret qudits
  std::vector<std::string> randomness;                 // variable names
  std::map<ShareLabel, std::size_t> classical_digits;  // lambda^Y_i
  std::map<ShareLabel, std::size_t> quantum_qudits;    // lambda^Q_j
  std::size_t env_qudits = 0;
  std::function<SchemeBranch(const std::vector<Fp>&)> branch_rule;

  std::size_t branch_count() const {
    std::size_t n = 1;
    for (std::size_t i = 0; i < randomness.size(); ++i) n *= q;
    return n;
  }

  std::vector<std::string> quantum_sublabels(const ShareLabel& share) const {
    std::vector<std::string> out;
    std::size_t n = quantum_qudits.at(share);
    for (std::size_t k = 1; k <= n; ++k)
      out.push_back(to_string(share) + ":" + std::to_string(k));
    return out;
  }

  std::vector<std::string> env_labels() const {
    std::vector<std::string> out;
    for (std::size_t k = 1; k <= env_qudits; ++k)
      out.push_back("E:" + std::to_string(k));
    return out;
  }

  // canonical layout of every branch state: R, quantum shares in label
  // order (each share's qudits contiguous), environment last
  SubsystemLayout quantum_layout() const {
    SubsystemLayout lay;
    lay.base = q;
    lay.parts.push_back({"R", q});
    for (unsigned j = 1; j <= structure.n2; ++j)
      for (const auto& l : quantum_sublabels(quantum_share(j)))
        lay.parts.push_back({l, q});
    for (const auto& l : env_labels()) lay.parts.push_back({l, q});
    return lay;
  }
};

struct RateTuple {
  std::vector<Rational> classical;  // R^Y_i
  std::vector<Rational> quantum;    // R^Q_j
};

inline RateTuple rates_of(const Scheme& s) {
  RateTuple r;
  Rational l0(static_cast<std::int64_t>(s.lambda0));
  for (unsigned i = 1; i <= s.structure.n1; ++i)
    r.classical.push_back(
        Rational(static_cast<std::int64_t>(s.classical_digits.at(classical_share(i)))) / l0);
  for (unsigned j = 1; j <= s.structure.n2; ++j)
    r.quantum.push_back(
        Rational(static_cast<std::int64_t>(s.quantum_qudits.at(quantum_share(j)))) / l0);
  return r;
}

inline std::string to_string(const RateTuple& r) {
  std::string out;
  for (std::size_t i = 0; i < r.classical.size(); ++i)
    out += (out.empty() ? "" : " ") + std::string("RY") + std::to_string(i + 1) +
           "=" + r.classical[i].str();
  for (std::size_t j = 0; j < r.quantum.size(); ++j)
    out += (out.empty() ? "" : " ") + std::string("RQ") + std::to_string(j + 1) +
           "=" + r.quantum[j].str();
  return out;
}

// ---------------------------------------------------------------------------
// rate regions (conjunctions of >= inequalities over RY*/RQ* coordinates)

struct LinearInequality {
  std::vector<std::pair<std::string, Rational>> terms;
  Rational rhs;

  std::string render() const {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (i) out += " + ";
      if (!(terms[i].second == Rational(1))) out += terms[i].second.str() + "*";
      out += terms[i].first;
    }
    return out + " >= " + rhs.str();
  }
};

struct RateRegion {
  std::vector<LinearInequality> ineqs;
};

inline RateRegion region_twin(unsigned n1, unsigned n2) {
  RateRegion r;
  for (unsigned i = 1; i <= n1; ++i)
    r.ineqs.push_back({{{"RY" + std::to_string(i), Rational(1)}}, Rational(2)});
  for (unsigned j = 1; j <= n2; ++j)
    r.ineqs.push_back({{{"RQ" + std::to_string(j), Rational(1)}}, Rational(1)});
  return r;
}

inline RateRegion region_t3() {
  RateRegion r;
  r.ineqs.push_back({{{"RY1", Rational(1)}}, Rational(2)});
  r.ineqs.push_back({{{"RQ1", Rational(1)}}, Rational(1)});
  r.ineqs.push_back({{{"RQ2", Rational(1)}}, Rational(1)});
  r.ineqs.push_back({{{"RQ1", Rational(1)}, {"RQ2", Rational(1)}}, Rational(3)});
  return r;
}

inline RateRegion region_t4() {
  RateRegion r;
  r.ineqs.push_back({{{"RY1", Rational(1)}}, Rational(2)});
  r.ineqs.push_back({{{"RY2", Rational(1)}}, Rational(2)});
  r.ineqs.push_back({{{"RQ1", Rational(1)}}, Rational(1)});
  r.ineqs.push_back({{{"RQ2", Rational(1)}}, Rational(1)});
  r.ineqs.push_back({{{"RQ1", Rational(1)}, {"RQ2", Rational(1)}}, Rational(3)});
  return r;
}

struct RegionMembership {
  bool inside = false;
  std::size_t tight_count = 0;  // inequalities met with equality
};

inline Rational rate_coordinate(const RateTuple& t, const std::string& name) {
  if (name.size() >= 3 && name[0] == 'R') {
    unsigned idx = std::stoul(name.substr(2));
    if (name[1] == 'Y' && idx >= 1 && idx <= t.classical.size())
      return t.classical[idx - 1];
    if (name[1] == 'Q' && idx >= 1 && idx <= t.quantum.size())
      return t.quantum[idx - 1];
  }
  throw std::invalid_argument("rate tuple has no coordinate '" + name + "'");
}

// exact rational membership test
inline RegionMembership region_membership(const RateRegion& region,
                                          const RateTuple& tuple) {
  RegionMembership m;
  m.inside = true;
  for (const auto& ineq : region.ineqs) {
    Rational lhs(0);
    for (const auto& [name, coeff] : ineq.terms)
      lhs += coeff * rate_coordinate(tuple, name);
    if (lhs < ineq.rhs) m.inside = false;
    if (lhs == ineq.rhs) ++m.tight_count;
  }
  if (!m.inside) m.tight_count = 0;
  return m;
}

inline bool in_region(const RateRegion& region, const RateTuple& tuple) {
  return region_membership(region, tuple).inside;
}

// ---------------------------------------------------------------------------
// catalog structures

inline AccessStructure twin_structure(unsigned k1, unsigned n1, unsigned k2,
                                      unsigned n2) {
  AccessStructure st;
  st.n1 = n1;
  st.n2 = n2;
  ShareSet ys, qs;
  for (unsigned i = 1; i <= n1; ++i) ys.insert(classical_share(i));
  for (unsigned j = 1; j <= n2; ++j) qs.insert(quantum_share(j));
  for (const auto& a : all_subsets(ys, true)) {
    if (a.size() != k1) continue;
    for (const auto& b : all_subsets(qs, true)) {
      if (b.size() != k2) continue;
      st.minimal.push_back(set_union(a, b));
    }
  }
  st.sort_minimal();
  st.validate();
  return st;
}

// the unique non-twin feasible structure on one classical + two quantum shares
inline AccessStructure t3_structure() {
  AccessStructure st;
  st.n1 = 1;
  st.n2 = 2;
  st.minimal = {{classical_share(1), quantum_share(1)},
                {quantum_share(1), quantum_share(2)}};
  st.sort_minimal();
  return st;
}

// the five non-twin feasible structures on two classical + two quantum shares
inline AccessStructure t4_structure(unsigned index) {
  ShareLabel y1 = classical_share(1), y2 = classical_share(2);
  ShareLabel q1 = quantum_share(1), q2 = quantum_share(2);
  AccessStructure st;
  st.n1 = 2;
  st.n2 = 2;
  switch (index) {
    case 1: st.minimal = {{y1, y2, q1}, {q1, q2}}; break;
    case 2: st.minimal = {{y1, q1}, {y2, q1, q2}}; break;
    case 3: st.minimal = {{y1, y2, q1}, {y2, q1, q2}}; break;
    case 4: st.minimal = {{y1, q1}, {y2, q1}, {q1, q2}}; break;
    case 5: st.minimal = {{y1, y2, q1}, {y1, q1, q2}, {y2, q1, q2}}; break;
    default:
      throw std::invalid_argument("t4_structure: index must be 1..5");
  }
  st.sort_minimal();
  return st;
}

// ---------------------------------------------------------------------------
// scheme builders

// quantum one-time pad: Y1 = (alpha, beta), Q1 = X^alpha Z^beta applied to
// the secret
inline Scheme build_otp(unsigned q) {
  if (!is_prime(q)) throw std::invalid_argument("build_otp: q must be prime");
  Scheme s;
  s.family = "otp";
  s.q = q;
  s.structure.n1 = 1;
  s.structure.n2 = 1;
  s.structure.minimal = {{classical_share(1), quantum_share(1)}};
  s.randomness = {"alpha", "beta"};
  s.classical_digits[classical_share(1)] = 2;
  s.quantum_qudits[quantum_share(1)] = 1;
  s.branch_rule = [q](const std::vector<Fp>& r) {
    SchemeBranch b;
    b.classical[classical_share(1)] = {r[0], r[1]};
    Ket bell = bell_ket(q, "R", "Q1:1");
    b.state = qotp_apply(bell, "Q1:1", PauliPower(r[0], r[1]));
    return b;
  };
  return s;
}

// twin threshold: Shamir(K1, N1) on the pad key, polynomial threshold code
// (K2, N2) on the padded secret
inline Scheme build_twin(unsigned k1, unsigned n1, unsigned k2, unsigned n2,
                         unsigned q) {
  if (!is_prime(q)) throw std::invalid_argument("build_twin: q must be prime");
  if (k1 == 0 || k1 > n1) throw std::invalid_argument("build_twin: need 1 <= K1 <= N1");
  if (k2 == 0 || k2 > n2 || 2 * k2 <= n2)
    throw std::invalid_argument("build_twin: need N2/2 < K2 <= N2");
  if (q < 2 * k2 - 1) throw std::invalid_argument("build_twin: need q >= 2K2-1");
  if (q <= n1) throw std::invalid_argument("build_twin: need q > N1");

  Scheme s;
  s.family = "twin";
  s.q = q;
  s.structure = twin_structure(k1, n1, k2, n2);
  s.randomness = {"alpha", "beta"};
  for (unsigned j = 1; j < k1; ++j) {
    s.randomness.push_back("a" + std::to_string(j));
    s.randomness.push_back("b" + std::to_string(j));
  }
  for (unsigned i = 1; i <= n1; ++i)
    s.classical_digits[classical_share(i)] = 2;
  for (unsigned j = 1; j <= n2; ++j) s.quantum_qudits[quantum_share(j)] = 1;
  s.env_qudits = 2 * k2 - 1 - n2;

  std::vector<std::string> share_labels, env_labels;
  for (unsigned j = 1; j <= n2; ++j)
    share_labels.push_back("Q" + std::to_string(j) + ":1");
  for (std::size_t e = 1; e <= s.env_qudits; ++e)
    env_labels.push_back("E:" + std::to_string(e));

  s.branch_rule = [=](const std::vector<Fp>& r) {
    SchemeBranch b;
    Fp alpha = r[0], beta = r[1];
    std::vector<Fp> coeffs;  // digit-major: K1-1 for alpha, then for beta
    for (unsigned j = 0; j + 1 < k1; ++j) coeffs.push_back(r[2 + 2 * j]);
    for (unsigned j = 0; j + 1 < k1; ++j) coeffs.push_back(r[3 + 2 * j]);
    auto shares = shamir_share({alpha, beta}, k1, n1, q, coeffs);
    for (unsigned i = 1; i <= n1; ++i)
      b.classical[classical_share(i)] = shares[i - 1];
    Ket bell = bell_ket(q, "R", "S");
    Ket padded = qotp_apply(bell, "S", PauliPower(alpha, beta));
    b.state = cgl_encode(padded, "S", k2, n2, q, share_labels, env_labels);
    return b;
  };
  return s;
}

namespace detail {

// shared plumbing for the two-quantum-share hybrid schemes: extreme 1 stores
// a digit pair on Q2, extreme 2 superdense-codes it into (Q1:2, Q2:1)
inline Ket hybrid_quantum_state(unsigned q, Fp alpha, Fp beta, Fp m1, Fp m2,
                                unsigned extreme) {
  Ket bell = bell_ket(q, "R", "Q1:1");
  Ket padded = qotp_apply(bell, "Q1:1", PauliPower(alpha, beta));
  if (extreme == 1) {
    SubsystemLayout digits;
    digits.base = q;
    digits.parts = {{"Q2:1", q}, {"Q2:2", q}};
    return tensor(padded, Ket::basis(digits, {m1.value(), m2.value()}));
  }
  Ket sd = superdense_encode_ket(PauliPower(m1, m2), "Q1:2", "Q2:1");
  return tensor(padded, sd);
}

}  // namespace detail

// hybrid scheme on the t3 catalog structure; extreme 1 achieves rates
// (2,1,2), extreme 2 achieves (2,2,1)
inline Scheme build_t3(unsigned extreme, unsigned q = 3) {
  if (extreme != 1 && extreme != 2)
    throw std::invalid_argument("build_t3: extreme must be 1 or 2");
  if (q != 3) throw std::invalid_argument("build_t3: q is fixed to 3");
  Scheme s;
  s.family = "t3";
  s.q = q;
  s.structure = t3_structure();
  s.randomness = {"alpha", "beta"};
  s.classical_digits[classical_share(1)] = 2;
  s.quantum_qudits[quantum_share(1)] = extreme == 1 ? 1 : 2;
  s.quantum_qudits[quantum_share(2)] = extreme == 1 ? 2 : 1;
  s.branch_rule = [q, extreme](const std::vector<Fp>& r) {
    SchemeBranch b;
    b.classical[classical_share(1)] = {r[0], r[1]};
    b.state = detail::hybrid_quantum_state(q, r[0], r[1], r[0], r[1], extreme);
    return b;
  };
  return s;
}

// hybrid schemes on the five t4 catalog structures; extreme 1 achieves
// (2,2,1,2), extreme 2 achieves (2,2,2,1)
inline Scheme build_t4(unsigned index, unsigned extreme, unsigned q = 3) {
  if (index < 1 || index > 5)
    throw std::invalid_argument("build_t4: structure index must be 1..5");
  if (extreme != 1 && extreme != 2)
    throw std::invalid_argument("build_t4: extreme must be 1 or 2");
  if (q != 3) throw std::invalid_argument("build_t4: q is fixed to 3");

  Scheme s;
  s.family = "t4";
  s.q = q;
  s.structure = t4_structure(index);
  s.randomness = index == 4 ? std::vector<std::string>{"alpha", "beta"}
                            : std::vector<std::string>{"alpha", "beta",
                                                       "gamma1", "gamma2"};
  s.classical_digits[classical_share(1)] = 2;
  s.classical_digits[classical_share(2)] = 2;
  s.quantum_qudits[quantum_share(1)] = extreme == 1 ? 1 : 2;
  s.quantum_qudits[quantum_share(2)] = extreme == 1 ? 2 : 1;

  s.branch_rule = [q, index, extreme](const std::vector<Fp>& r) {
    Fp alpha = r[0], beta = r[1];
    Fp g1 = index == 4 ? Fp(0, q) : r[2];
    Fp g2 = index == 4 ? Fp(0, q) : r[3];
    Fp two(2, q);
    SchemeBranch b;
    Fp m1 = alpha, m2 = beta;  // digit pair for Q2 / superdense message
    switch (index) {
      case 1:
        b.classical[classical_share(1)] = {g1, g2};
        b.classical[classical_share(2)] = {alpha + g1, beta + g2};
        break;
      case 2:
        b.classical[classical_share(1)] = {alpha, beta};
        b.classical[classical_share(2)] = {alpha + g1, beta + g2};
        m1 = g1;
        m2 = g2;
        break;
      case 3:
        b.classical[classical_share(1)] = {g1, g2};
        b.classical[classical_share(2)] = {alpha + g1, beta + g2};
        m1 = g1;
        m2 = g2;
        break;
      case 4:
        b.classical[classical_share(1)] = {alpha, beta};
        b.classical[classical_share(2)] = {alpha, beta};
        break;
      case 5:
        b.classical[classical_share(1)] = {g1, g2};
        b.classical[classical_share(2)] = {alpha + g1, beta + g2};
        m1 = alpha + two * g1;
        m2 = beta + two * g2;
        break;
    }
    b.state = detail::hybrid_quantum_state(q, alpha, beta, m1, m2, extreme);
    return b;
  };
  return s;
}

// Feasibility-theorem construction for an arbitrary feasible structure:
// replicate the pad key (alpha, beta) across all shares with the
// maximal-forbidden-set scheme, and encode the padded secret with the
// polynomial threshold code over the quantum substructure (which must be a
// threshold family).
inline Scheme build_general(const AccessStructure& structure, unsigned q) {
  structure.validate();
  if (!is_prime(q)) throw std::invalid_argument("build_general: q must be prime");
  if (auto w = infeasibility_witness(structure))
    throw std::invalid_argument("build_general: infeasible structure, witness " +
                                to_string(w->first) + " " + to_string(w->second));

  // minimal quantum parts of the qualified family
  std::vector<ShareSet> qparts;
  for (const auto& d : structure.minimal) {
    ShareSet qp;
    for (const auto& l : d)
      if (l.kind == ShareKind::quantum) qp.insert(l);
    qparts.push_back(std::move(qp));
  }
  std::vector<ShareSet> qmin;
  for (const auto& a : qparts) {
    bool minimal = true;
    for (const auto& b : qparts)
      if (b != a && is_subset(b, a)) {
        minimal = false;
        break;
      }
    if (minimal && std::find(qmin.begin(), qmin.end(), a) == qmin.end())
      qmin.push_back(a);
  }
  ShareSet involved;
  for (const auto& a : qmin) involved.insert(a.begin(), a.end());
  std::size_t kq = qmin[0].size();
  for (const auto& a : qmin)
    if (a.size() != kq)
      throw std::invalid_argument("build_general: unsupported quantum substructure");
  std::vector<ShareSet> expected;
  for (const auto& sset : all_subsets(involved, true))
    if (sset.size() == kq) expected.push_back(sset);
  std::sort(qmin.begin(), qmin.end());
  std::sort(expected.begin(), expected.end());
  if (qmin != expected)
    throw std::invalid_argument("build_general: unsupported quantum substructure");

  ReplicationPlan plan = replication_plan(structure);
  std::size_t m = plan.forbidden.size();

  Scheme s;
  s.family = "general";
  s.q = q;
  s.structure = structure;
  s.randomness = {"alpha", "beta"};
  for (std::size_t j = 1; j < m; ++j) {
    s.randomness.push_back("r" + std::to_string(j) + "a");
    s.randomness.push_back("r" + std::to_string(j) + "b");
  }
  for (unsigned i = 1; i <= structure.n1; ++i)
    s.classical_digits[classical_share(i)] =
        2 * plan.pieces_held.at(classical_share(i)).size();
  for (unsigned j = 1; j <= structure.n2; ++j) {
    ShareLabel lab = quantum_share(j);
    s.quantum_qudits[lab] = (involved.count(lab) ? 1 : 0) +
                            2 * plan.pieces_held.at(lab).size();
  }
  unsigned kcode = static_cast<unsigned>(kq);
  unsigned ncode = static_cast<unsigned>(involved.size());
  s.env_qudits = 2 * kcode - 1 - ncode;

  std::vector<std::string> code_labels;  // first sublabel of each involved share
  for (const auto& lab : involved)
    code_labels.push_back(to_string(lab) + ":1");

  s.branch_rule = [s_struct = structure, q, plan, m, involved, kcode, ncode,
                   code_labels](const std::vector<Fp>& r) {
    Fp alpha = r[0], beta = r[1];
    std::vector<FpTuple> rand_tuples;
    for (std::size_t j = 1; j < m; ++j)
      rand_tuples.push_back({r[2 * j], r[2 * j + 1]});
    ClassicalShareVector digits =
        replication_share({alpha, beta}, s_struct, rand_tuples);

    SchemeBranch b;
    for (unsigned i = 1; i <= s_struct.n1; ++i)
      b.classical[classical_share(i)] = digits.at(classical_share(i));

    Ket bell = bell_ket(q, "R", "S");
    Ket padded = qotp_apply(bell, "S", PauliPower(alpha, beta));
    std::vector<std::string> env_labels;
    for (std::size_t e = 1; e <= 2 * kcode - 1 - ncode; ++e)
      env_labels.push_back("E:" + std::to_string(e));
    Ket state = cgl_encode(padded, "S", kcode, ncode, q, code_labels, env_labels);

    // classical digits carried by quantum shares become computational-basis
    // qudits appended behind each share's code qudit
    std::vector<std::string> order = {"R"};
    for (unsigned j = 1; j <= s_struct.n2; ++j) {
      ShareLabel lab = quantum_share(j);
      unsigned sub = 1;
      if (involved.count(lab)) {
        order.push_back(to_string(lab) + ":1");
        sub = 2;
      }
      const FpTuple& dv = digits.at(lab);
      if (!dv.empty()) {
        SubsystemLayout dl;
        dl.base = q;
        std::vector<std::size_t> vals;
        for (const auto& d : dv) {
          std::string l = to_string(lab) + ":" + std::to_string(sub++);
          dl.parts.push_back({l, q});
          vals.push_back(d.value());
          order.push_back(l);
        }
        state = tensor(state, Ket::basis(dl, vals));
      }
    }
    for (const auto& e : env_labels) order.push_back(e);
    b.state = state.reorder(order);
    return b;
  };
  return s;
}

}  // namespace qss

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qss {

enum class ShareKind { classical, quantum };

// One share identifier: Y<i> (classical) or Q<j> (quantum), indices from 1.
struct ShareLabel {
  ShareKind kind;
  unsigned index;

  bool operator==(const ShareLabel& o) const {
    return kind == o.kind && index == o.index;
  }
  // classical shares sort before quantum shares, then by index
  bool operator<(const ShareLabel& o) const {
    if (kind != o.kind) return kind == ShareKind::classical;
    return index < o.index;
  }
};

inline ShareLabel classical_share(unsigned i) {
  return {ShareKind::classical, i};
}
inline ShareLabel quantum_share(unsigned j) { return {ShareKind::quantum, j}; }

inline std::string to_string(const ShareLabel& s) {
  return (s.kind == ShareKind::classical ? "Y" : "Q") + std::to_string(s.index);
}

using ShareSet = std::set<ShareLabel>;

inline std::string to_string(const ShareSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : s) {
    if (!first) out += ",";
    out += to_string(l);
    first = false;
  }
  return out + "}";
}

inline bool is_subset(const ShareSet& a, const ShareSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline ShareSet set_union(const ShareSet& a, const ShareSet& b) {
  ShareSet r = a;
  r.insert(b.begin(), b.end());
  return r;
}

inline ShareSet set_intersection(const ShareSet& a, const ShareSet& b) {
  ShareSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(r, r.begin()));
  return r;
}

// Monotone access structure over N1 classical and N2 quantum shares,
// given by its minimal qualified sets (an antichain covering every share).
struct AccessStructure {
  unsigned n1 = 0;
  unsigned n2 = 0;
  std::vector<ShareSet> minimal;

  ShareSet all_shares() const {
    ShareSet s;
    for (unsigned i = 1; i <= n1; ++i) s.insert(classical_share(i));
    for (unsigned j = 1; j <= n2; ++j) s.insert(quantum_share(j));
    return s;
  }

  void validate() const {
    if (minimal.empty())
      throw std::invalid_argument("access structure: no minimal qualified sets");
    ShareSet shares = all_shares();
    ShareSet covered;
    for (const auto& d : minimal) {
      if (d.empty())
        throw std::invalid_argument("access structure: empty qualified set");
      if (!is_subset(d, shares))
        throw std::invalid_argument("access structure: label out of range");
      covered.insert(d.begin(), d.end());
    }
    for (std::size_t i = 0; i < minimal.size(); ++i)
      for (std::size_t j = 0; j < minimal.size(); ++j)
        if (i != j && is_subset(minimal[i], minimal[j]))
          throw std::invalid_argument(
              "access structure: minimal sets are not an antichain");
    if (covered != shares)
      throw std::invalid_argument(
          "access structure: redundant share (appears in no minimal set)");
  }

  // canonical ordering of the minimal family: by size, then lexicographic
  void sort_minimal() {
    std::sort(minimal.begin(), minimal.end(),
              [](const ShareSet& a, const ShareSet& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
              });
    minimal.erase(std::unique(minimal.begin(), minimal.end()), minimal.end());
  }

  bool operator==(const AccessStructure& o) const {
    return n1 == o.n1 && n2 == o.n2 && minimal == o.minimal;
  }
};

inline std::string to_string(const AccessStructure& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.minimal.size(); ++i) {
    if (i) out += ",";
    out += to_string(s.minimal[i]);
  }
  return out + "}";
}

// subset contains some minimal qualified set
inline bool is_qualified(const AccessStructure& st, const ShareSet& subset) {
  if (!is_subset(subset, st.all_shares()))
    throw std::invalid_argument("is_qualified: unknown share label");
  for (const auto& d : st.minimal)
    if (is_subset(d, subset)) return true;
  return false;
}

// all subsets of `shares`, ordered by size then lexicographically
inline std::vector<ShareSet> all_subsets(const ShareSet& shares,
                                         bool include_empty = false) {
  std::vector<ShareLabel> v(shares.begin(), shares.end());
  std::vector<ShareSet> out;
  for (std::uint32_t mask = 0; mask < (1u << v.size()); ++mask) {
    if (mask == 0 && !include_empty) continue;
    ShareSet s;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (mask & (1u << i)) s.insert(v[i]);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const ShareSet& a, const ShareSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

// forbidden sets that are maximal: every strict superset is qualified
inline std::vector<ShareSet> maximal_forbidden_sets(const AccessStructure& st) {
  st.validate();
  std::vector<ShareSet> forbidden;
  for (const auto& s : all_subsets(st.all_shares(), /*include_empty=*/true))
    if (!is_qualified(st, s)) forbidden.push_back(s);
  std::vector<ShareSet> maximal;
  for (const auto& f : forbidden) {
    bool dominated = false;
    for (const auto& g : forbidden)
      if (f != g && is_subset(f, g)) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(f);
  }
  std::sort(maximal.begin(), maximal.end(),
            [](const ShareSet& a, const ShareSet& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });
  return maximal;
}

inline bool has_quantum(const ShareSet& s) {
  for (const auto& l : s)
    if (l.kind == ShareKind::quantum) return true;
  return false;
}

// Feasibility: every pair of qualified sets must share a quantum share.
// It suffices to test pairs of minimal sets (supersets only grow the
// intersection); returns a witnessing pair of minimal sets on failure.
inline std::optional<std::pair<ShareSet, ShareSet>> infeasibility_witness(
    const AccessStructure& st) {
  st.validate();
  for (std::size_t i = 0; i < st.minimal.size(); ++i)
    for (std::size_t j = i; j < st.minimal.size(); ++j) {
      ShareSet common = set_intersection(st.minimal[i], st.minimal[j]);
      if (!has_quantum(common)) return std::make_pair(st.minimal[i], st.minimal[j]);
    }
  return std::nullopt;
}

inline bool check_feasible(const AccessStructure& st) {
  return !infeasibility_witness(st).has_value();
}

// All non-redundant antichains over the fixed share set {Y1..Yn1, Q1..Qn2}.
inline std::vector<AccessStructure> enumerate_all_structures(unsigned n1,
                                                             unsigned n2) {
  unsigned n = n1 + n2;
  if (n == 0 || n > 12)
    throw std::invalid_argument("enumerate_all_structures: share count out of range");
  std::vector<ShareLabel> labels;
  for (unsigned i = 1; i <= n1; ++i) labels.push_back(classical_share(i));
  for (unsigned j = 1; j <= n2; ++j) labels.push_back(quantum_share(j));

  // nonempty subsets as bitmasks
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t m = 1; m < (1u << n); ++m) subsets.push_back(m);

  std::uint32_t full = (1u << n) - 1;
  std::vector<AccessStructure> out;
  std::vector<std::uint32_t> chosen;

  auto emit = [&]() {
    std::uint32_t covered = 0;
    for (auto m : chosen) covered |= m;
    if (covered != full) return;
    AccessStructure st;
    st.n1 = n1;
    st.n2 = n2;
    for (auto m : chosen) {
      ShareSet s;
      for (unsigned b = 0; b < n; ++b)
        if (m & (1u << b)) s.insert(labels[b]);
      st.minimal.push_back(std::move(s));
    }
    st.sort_minimal();
    out.push_back(std::move(st));
  };

  // depth-first choice of pairwise-incomparable subsets
  auto incomparable = [&](std::uint32_t m) {
    for (auto c : chosen)
      if ((c & m) == c || (c & m) == m) return false;
    return true;
  };
  std::vector<std::size_t> stack;
  // iterative DFS over start indices
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!chosen.empty()) emit();
    for (std::size_t i = from; i < subsets.size(); ++i) {
      if (!incomparable(subsets[i])) continue;
      chosen.push_back(subsets[i]);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return out;
}

namespace detail {
inline std::vector<std::vector<unsigned>> permutations_of(unsigned n) {
  std::vector<unsigned> p(n);
  std::iota(p.begin(), p.end(), 1u);
  std::vector<std::vector<unsigned>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}
}  // namespace detail

// Canonical representative under relabeling of share indices within each kind.
inline AccessStructure canonical_form(const AccessStructure& st) {
  if (st.n1 > 6 || st.n2 > 6)
    throw std::invalid_argument("canonical_form: too many shares");
  auto perms1 = detail::permutations_of(st.n1);
  auto perms2 = detail::permutations_of(st.n2);
  std::optional<AccessStructure> best;
  for (const auto& p1 : perms1.empty() ? std::vector<std::vector<unsigned>>{{}} : perms1)
    for (const auto& p2 : perms2.empty() ? std::vector<std::vector<unsigned>>{{}} : perms2) {
      AccessStructure cand;
      cand.n1 = st.n1;
      cand.n2 = st.n2;
      for (const auto& d : st.minimal) {
        ShareSet s;
        for (const auto& l : d) {
          unsigned idx = l.kind == ShareKind::classical ? p1[l.index - 1]
                                                        : p2[l.index - 1];
          s.insert({l.kind, idx});
        }
        cand.minimal.push_back(std::move(s));
      }
      cand.sort_minimal();
      if (!best || cand.minimal < best->minimal) best = std::move(cand);
    }
  return *best;
}

inline std::vector<AccessStructure> enumerate_canonical_structures(unsigned n1,
                                                                   unsigned n2) {
  std::vector<AccessStructure> canon;
  for (const auto& st : enumerate_all_structures(n1, n2)) {
    AccessStructure c = canonical_form(st);
    if (std::find(canon.begin(), canon.end(), c) == canon.end())
      canon.push_back(std::move(c));
  }
  return canon;
}

// qualified = (>= K1 classical shares) and (>= K2 quantum shares), for some
// K1 <= n1, K2 <= n2 reproducing the minimal family exactly
inline bool is_twin_threshold(const AccessStructure& st) {
  for (unsigned k1 = 0; k1 <= st.n1; ++k1)
    for (unsigned k2 = 0; k2 <= st.n2; ++k2) {
      if (k1 + k2 == 0) continue;
      std::vector<ShareSet> fam;
      std::vector<ShareSet> ysubs, qsubs;
      ShareSet ys, qs;
      for (unsigned i = 1; i <= st.n1; ++i) ys.insert(classical_share(i));
      for (unsigned j = 1; j <= st.n2; ++j) qs.insert(quantum_share(j));
      for (const auto& a : all_subsets(ys, true))
        if (a.size() == k1) ysubs.push_back(a);
      for (const auto& b : all_subsets(qs, true))
        if (b.size() == k2) qsubs.push_back(b);
      for (const auto& a : ysubs)
        for (const auto& b : qsubs) fam.push_back(set_union(a, b));
      std::sort(fam.begin(), fam.end(), [](const ShareSet& x, const ShareSet& y) {
        if (x.size() != y.size()) return x.size() < y.size();
        return x < y;
      });
      if (fam == st.minimal) return true;
    }
  return false;
}

struct AccessParseError : std::runtime_error {
  int line;
  AccessParseError(int ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

// Text format:
//   N1=<int> N2=<int>
//   minimal: Y1 Q1
//   minimal: Q1 Q2
// Blank lines and '#' comments are ignored.
inline AccessStructure parse_access_structure(std::istream& in) {
  AccessStructure st;
  bool have_header = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank
    if (!have_header) {
      unsigned n1 = 0, n2 = 0;
      std::string tok2;
      if (!(ls >> tok2) || tok.rfind("N1=", 0) != 0 || tok2.rfind("N2=", 0) != 0)
        throw AccessParseError(lineno, "expected header 'N1=<int> N2=<int>'");
      try {
        n1 = std::stoul(tok.substr(3));
        n2 = std::stoul(tok2.substr(3));
      } catch (const std::exception&) {
        throw AccessParseError(lineno, "bad share count in header");
      }
      std::string extra;
      if (ls >> extra) throw AccessParseError(lineno, "trailing text after header");
      st.n1 = n1;
      st.n2 = n2;
      have_header = true;
      continue;
    }
    if (tok != "minimal:")
      throw AccessParseError(lineno, "expected 'minimal:' line, got '" + tok + "'");
    ShareSet s;
    std::string name;
    while (ls >> name) {
      if (name.size() < 2 || (name[0] != 'Y' && name[0] != 'Q'))
        throw AccessParseError(lineno, "unknown share token '" + name + "'");
      unsigned idx = 0;
      try {
        std::size_t pos = 0;
        idx = std::stoul(name.substr(1), &pos);
        if (pos + 1 != name.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw AccessParseError(lineno, "unknown share token '" + name + "'");
      }
      ShareKind kind = name[0] == 'Y' ? ShareKind::classical : ShareKind::quantum;
      unsigned limit = kind == ShareKind::classical ? st.n1 : st.n2;
      if (idx == 0 || idx > limit)
        throw AccessParseError(lineno, "share index out of range: '" + name + "'");
      s.insert({kind, idx});
    }
    if (s.empty()) throw AccessParseError(lineno, "empty minimal set");
    st.minimal.push_back(std::move(s));
  }
  if (!have_header) throw AccessParseError(lineno, "missing 'N1= N2=' header");
  st.sort_minimal();
  try {
    st.validate();
  } catch (const std::exception& e) {
    throw AccessParseError(lineno, e.what());
  }
  return st;
}

inline AccessStructure parse_access_structure(const std::string& text) {
  std::istringstream in(text);
  return parse_access_structure(in);
}

}  // namespace qss

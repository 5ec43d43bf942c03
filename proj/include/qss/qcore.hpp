#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qss {

using cx = std::complex<double>;

// numerical tolerances used across the library
inline constexpr double tol_hermitian = 1e-9;  // Hermiticity / trace checks
inline constexpr double tol_eigen = 1e-9;      // eigenvalue clamping
inline constexpr double tol_entropy = 1e-7;    // entropic equalities

// Dense complex matrix, row-major. Rectangular shapes are allowed (isometries);
// most uses are square.
class CMatrix {
public:
  CMatrix() : rows_(0), cols_(0) {}
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, cx(0, 0)) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cx& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }
  cx* data() { return a_.data(); }
  const cx* data() const { return a_.data(); }

  CMatrix operator*(const CMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("CMatrix: shape mismatch");
    CMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        cx v = (*this)(i, k);
        if (v == cx(0, 0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }

  CMatrix operator+(const CMatrix& o) const {
    check_same_shape(o);
    CMatrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
  }

  CMatrix operator-(const CMatrix& o) const {
    check_same_shape(o);
    CMatrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
    return r;
  }

  CMatrix operator*(cx s) const {
    CMatrix r = *this;
    for (auto& v : r.a_) v *= s;
    return r;
  }

  CMatrix adjoint() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  cx trace() const {
    cx t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol)
          return false;
    return true;
  }

  bool operator==(const CMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

private:
  void check_same_shape(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("CMatrix: shape mismatch");
  }

  std::size_t rows_, cols_;
  std::vector<cx> a_;
};

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
    for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
      cx v = a(i1, j1);
      if (v == cx(0, 0)) continue;
      for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
        for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
          r(i1 * b.rows() + i2, j1 * b.cols() + j2) = v * b(i2, j2);
    }
  return r;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).max_abs();
}

namespace detail {

// One cyclic-Jacobi pass structure shared by the value-only and full solvers.
// Rotations are the complex (phase-carrying) Givens form; structurally zero
// pivots are skipped, so block-diagonal inputs cost only the in-block work.
inline void jacobi_hermitian(std::vector<cx>& a, std::size_t n,
                             std::vector<double>& eigenvalues, CMatrix* vectors) {
  if (vectors) *vectors = CMatrix::identity(n);
  auto at = [&](std::size_t i, std::size_t j) -> cx& { return a[i * n + j]; };

  double frob_sq = 0;
  for (const auto& v : a) frob_sq += std::norm(v);
  double target_sq = std::max(frob_sq, 1.0) * 1e-26;
  std::size_t pairs = n > 1 ? n * (n - 1) / 2 : 1;
  double skip_sq = target_sq / static_cast<double>(pairs);

  const int max_sweeps = 100;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    std::size_t rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        cx w = at(p, q);
        double r2 = std::norm(w);
        if (r2 <= skip_sq) continue;
        ++rotations;
        double r = std::sqrt(r2);
        cx phase = w / r;  // e^{i phi}
        double app = at(p, p).real();
        double aqq = at(q, q).real();
        double theta = (aqq - app) / (2.0 * r);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        cx ph = std::conj(phase);  // e^{-i phi}

        // columns p,q:  B = A * J
        for (std::size_t k = 0; k < n; ++k) {
          cx akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * ph * akq;
          at(k, q) = s * akp + c * ph * akq;
        }
        // rows p,q:  A' = J^dagger * B
        cx phc = phase;  // conj(e^{-i phi})
        for (std::size_t k = 0; k < n; ++k) {
          cx apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * phc * aqk;
          at(q, k) = s * apk + c * phc * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        at(p, p) = app - t * r;
        at(q, q) = aqq + t * r;

        if (vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            cx vkp = (*vectors)(k, p), vkq = (*vectors)(k, q);
            (*vectors)(k, p) = c * vkp - s * ph * vkq;
            (*vectors)(k, q) = s * vkp + c * ph * vkq;
          }
        }
      }
    }
    if (rotations == 0) break;
  }
  if (sweep == max_sweeps)
    throw std::runtime_error("jacobi_hermitian: no convergence");

  eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = at(i, i).real();
}

}  // namespace detail

// Eigenvalues of a Hermitian matrix, descending.
inline std::vector<double> eig_hermitian(const CMatrix& m) {
  if (!m.is_hermitian(tol_hermitian))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  std::size_t n = m.rows();
  std::vector<cx> a(m.data(), m.data() + n * n);
  std::vector<double> vals;
  detail::jacobi_hermitian(a, n, vals, nullptr);
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

// Eigenvalues (descending) with matching eigenvector columns.
inline std::pair<std::vector<double>, CMatrix> eig_hermitian_vectors(
    const CMatrix& m) {
  if (!m.is_hermitian(tol_hermitian))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  std::size_t n = m.rows();
  std::vector<cx> a(m.data(), m.data() + n * n);
  std::vector<double> vals;
  CMatrix vecs;
  detail::jacobi_hermitian(a, n, vals, &vecs);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return vals[x] > vals[y]; });
  std::vector<double> sorted(n);
  CMatrix v(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    sorted[c] = vals[order[c]];
    for (std::size_t r = 0; r < n; ++r) v(r, c) = vecs(r, order[c]);
  }
  return {std::move(sorted), std::move(v)};
}

// Entropy of a spectrum in base-q units; eigenvalues in [-tol_eigen, tol_eigen]
// count as zero, anything more negative is rejected.
inline double entropy_of_spectrum(const std::vector<double>& eigenvalues,
                                  unsigned base) {
  if (base < 2) throw std::invalid_argument("entropy: base must be >= 2");
  double h = 0;
  for (double lam : eigenvalues) {
    if (lam < -tol_eigen)
      throw std::runtime_error("entropy: eigenvalue below -tolerance");
    if (lam <= tol_eigen) continue;
    h -= lam * std::log(lam);
  }
  return h / std::log(static_cast<double>(base));
}

// Ordered tensor factors with unique labels; `base` is the q in which all
// entropies over this layout are measured.
struct SubsystemLayout {
  struct Part {
    std::string label;
    std::size_t dim;
    bool operator==(const Part& o) const {
      return label == o.label && dim == o.dim;
    }
  };

  unsigned base = 2;
  std::vector<Part> parts;

  std::size_t total_dim() const {
    std::size_t d = 1;
    for (const auto& p : parts) d *= p.dim;
    return d;
  }

  bool has(const std::string& label) const {
    for (const auto& p : parts)
      if (p.label == label) return true;
    return false;
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < parts.size(); ++i)
      if (parts[i].label == label) return i;
    throw std::invalid_argument("layout: unknown label '" + label + "'");
  }

  void validate() const {
    if (base < 2) throw std::invalid_argument("layout: base must be >= 2");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (parts[i].dim < 2)
        throw std::invalid_argument("layout: subsystem dimension must be >= 2");
      for (std::size_t j = i + 1; j < parts.size(); ++j)
        if (parts[i].label == parts[j].label)
          throw std::invalid_argument("layout: duplicate label '" +
                                      parts[i].label + "'");
    }
  }

  // strides of the row-major mixed-radix index (first part most significant)
  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> s(parts.size(), 1);
    for (std::size_t i = parts.size(); i-- > 1;)
      s[i - 1] = s[i] * parts[i].dim;
    return s;
  }

  bool operator==(const SubsystemLayout& o) const {
    return base == o.base && parts == o.parts;
  }
};

// Density matrix over a labeled layout; Hermitian and unit-trace within
// tol_hermitian (checked on construction), positivity enforced at entropy time.
struct DensityMatrix {
  SubsystemLayout layout;
  CMatrix mat;

  DensityMatrix() = default;
  DensityMatrix(SubsystemLayout lay, CMatrix m)
      : layout(std::move(lay)), mat(std::move(m)) {
    layout.validate();
    if (mat.rows() != mat.cols() || mat.rows() != layout.total_dim())
      throw std::invalid_argument("DensityMatrix: dimension mismatch");
    if (!mat.is_hermitian(tol_hermitian))
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(mat.trace() - cx(1, 0)) > tol_hermitian)
      throw std::invalid_argument("DensityMatrix: trace != 1");
  }
};

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  SubsystemLayout lay;
  lay.base = a.layout.base;
  if (a.layout.base != b.layout.base)
    throw std::invalid_argument("tensor: mismatched entropy bases");
  lay.parts = a.layout.parts;
  for (const auto& p : b.layout.parts) {
    if (lay.has(p.label))
      throw std::invalid_argument("tensor: label collision '" + p.label + "'");
    lay.parts.push_back(p);
  }
  return DensityMatrix(std::move(lay), kron(a.mat, b.mat));
}

namespace detail {

// per-global-index (kept, traced) coordinates for a keep-subset of parts
struct IndexSplit {
  std::size_t keep_dim = 1;
  std::size_t trace_dim = 1;
  std::vector<std::size_t> keep_index;   // size = total dim
  std::vector<std::size_t> trace_index;  // size = total dim
};

inline IndexSplit split_indices(const SubsystemLayout& layout,
                                const std::vector<std::string>& keep) {
  for (const auto& l : keep) (void)layout.index_of(l);  // unknown-label check
  std::vector<bool> kept(layout.parts.size(), false);
  for (const auto& l : keep) kept[layout.index_of(l)] = true;

  IndexSplit sp;
  std::vector<std::size_t> kstride(layout.parts.size(), 0),
      tstride(layout.parts.size(), 0);
  for (std::size_t i = layout.parts.size(); i-- > 0;) {
    if (kept[i]) {
      kstride[i] = sp.keep_dim;
      sp.keep_dim *= layout.parts[i].dim;
    } else {
      tstride[i] = sp.trace_dim;
      sp.trace_dim *= layout.parts[i].dim;
    }
  }
  std::size_t total = layout.total_dim();
  sp.keep_index.resize(total);
  sp.trace_index.resize(total);
  auto strides = layout.strides();
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t k = 0, t = 0, rem = i;
    for (std::size_t pi = 0; pi < layout.parts.size(); ++pi) {
      std::size_t digit = rem / strides[pi];
      rem %= strides[pi];
      if (kept[pi])
        k += digit * kstride[pi];
      else
        t += digit * tstride[pi];
    }
    sp.keep_index[i] = k;
    sp.trace_index[i] = t;
  }
  return sp;
}

inline SubsystemLayout restrict_layout(const SubsystemLayout& layout,
                                       const std::vector<std::string>& keep) {
  SubsystemLayout out;
  out.base = layout.base;
  for (const auto& p : layout.parts)
    if (std::find(keep.begin(), keep.end(), p.label) != keep.end())
      out.parts.push_back(p);
  if (out.parts.empty()) out.parts.push_back({"scalar", 1});
  return out;
}

}  // namespace detail

// Reduced state on `keep` (layout order preserved). Keeping nothing yields
// the 1x1 scalar trace.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<std::string>& keep) {
  auto sp = detail::split_indices(rho.layout, keep);
  std::size_t total = rho.layout.total_dim();
  CMatrix out(sp.keep_dim, sp.keep_dim);
  // group global indices by traced coordinate
  std::vector<std::vector<std::size_t>> by_trace(sp.trace_dim);
  for (std::size_t i = 0; i < total; ++i) by_trace[sp.trace_index[i]].push_back(i);
  for (const auto& grp : by_trace)
    for (std::size_t i : grp)
      for (std::size_t j : grp)
        out(sp.keep_index[i], sp.keep_index[j]) += rho.mat(i, j);

  SubsystemLayout lay = detail::restrict_layout(rho.layout, keep);
  if (lay.parts.size() == 1 && lay.parts[0].label == "scalar") {
    // trivial keep-nothing case: bypass the dim>=2 layout check
    DensityMatrix dm;
    dm.layout = lay;
    dm.mat = out;
    return dm;
  }
  return DensityMatrix(std::move(lay), std::move(out));
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_of_spectrum(eig_hermitian(rho.mat), rho.layout.base);
}

// I(A;B) = H(A) + H(B) - H(AB) over disjoint label sets
inline double mutual_information(const DensityMatrix& rho,
                                 const std::vector<std::string>& part_a,
                                 const std::vector<std::string>& part_b) {
  for (const auto& l : part_a)
    if (std::find(part_b.begin(), part_b.end(), l) != part_b.end())
      throw std::invalid_argument("mutual_information: overlapping parts");
  std::vector<std::string> both = part_a;
  both.insert(both.end(), part_b.begin(), part_b.end());
  return von_neumann_entropy(partial_trace(rho, part_a)) +
         von_neumann_entropy(partial_trace(rho, part_b)) -
         von_neumann_entropy(partial_trace(rho, both));
}

struct EntropyReport {
  std::vector<std::string> subset;
  double entropy_H = 0;
  double mutual_I_with_reference = 0;
};

inline EntropyReport entropy_report(const DensityMatrix& rho,
                                    const std::vector<std::string>& subset,
                                    const std::string& reference = "R") {
  EntropyReport rep;
  rep.subset = subset;
  rep.entropy_H = von_neumann_entropy(partial_trace(rho, subset));
  rep.mutual_I_with_reference = mutual_information(rho, {reference}, subset);
  return rep;
}

// Pure state over a labeled layout.
struct Ket {
  SubsystemLayout layout;
  std::vector<cx> amp;

  static Ket basis(SubsystemLayout lay, const std::vector<std::size_t>& digits) {
    lay.validate();
    if (digits.size() != lay.parts.size())
      throw std::invalid_argument("Ket::basis: digit count mismatch");
    Ket k;
    k.layout = std::move(lay);
    k.amp.assign(k.layout.total_dim(), cx(0, 0));
    auto strides = k.layout.strides();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] >= k.layout.parts[i].dim)
        throw std::invalid_argument("Ket::basis: digit out of range");
      idx += digits[i] * strides[i];
    }
    k.amp[idx] = 1.0;
    return k;
  }

  double norm() const {
    double n = 0;
    for (const auto& v : amp) n += std::norm(v);
    return std::sqrt(n);
  }

  DensityMatrix to_density() const {
    CMatrix m(amp.size(), amp.size());
    for (std::size_t i = 0; i < amp.size(); ++i) {
      if (amp[i] == cx(0, 0)) continue;
      for (std::size_t j = 0; j < amp.size(); ++j)
        m(i, j) = amp[i] * std::conj(amp[j]);
    }
    return DensityMatrix(layout, std::move(m));
  }

  // apply a unitary (or any square matrix) to one subsystem
  Ket apply_site(const CMatrix& u, const std::string& label) const {
    std::size_t pos = layout.index_of(label);
    std::size_t d = layout.parts[pos].dim;
    if (u.rows() != d || u.cols() != d)
      throw std::invalid_argument("apply_site: dimension mismatch");
    Ket out = *this;
    auto strides = layout.strides();
    std::size_t stride = strides[pos];
    std::size_t outer_block = stride * d;
    std::size_t total = layout.total_dim();
    std::vector<cx> col(d);
    for (std::size_t base_o = 0; base_o < total; base_o += outer_block)
      for (std::size_t inner = 0; inner < stride; ++inner) {
        for (std::size_t t = 0; t < d; ++t)
          col[t] = amp[base_o + t * stride + inner];
        for (std::size_t t = 0; t < d; ++t) {
          cx v = 0;
          for (std::size_t s = 0; s < d; ++s) v += u(t, s) * col[s];
          out.amp[base_o + t * stride + inner] = v;
        }
      }
    return out;
  }

  // replace one subsystem by the image of an isometry V (d_out x d_in);
  // the new parts take the old part's position
  Ket apply_isometry(const CMatrix& v, const std::string& label,
                     const std::vector<SubsystemLayout::Part>& new_parts) const {
    std::size_t pos = layout.index_of(label);
    std::size_t d_in = layout.parts[pos].dim;
    std::size_t d_out = 1;
    for (const auto& p : new_parts) d_out *= p.dim;
    if (v.cols() != d_in || v.rows() != d_out)
      throw std::invalid_argument("apply_isometry: dimension mismatch");

    SubsystemLayout lay;
    lay.base = layout.base;
    for (std::size_t i = 0; i < layout.parts.size(); ++i) {
      if (i == pos)
        lay.parts.insert(lay.parts.end(), new_parts.begin(), new_parts.end());
      else
        lay.parts.push_back(layout.parts[i]);
    }
    lay.validate();

    auto strides = layout.strides();
    std::size_t stride = strides[pos];
    std::size_t outer_block = stride * d_in;
    std::size_t total = layout.total_dim();

    Ket out;
    out.layout = std::move(lay);
    out.amp.assign(out.layout.total_dim(), cx(0, 0));
    // outer index o, site t, inner index k:  old = o*stride*d_in + t*stride + k
    // new = o*stride*d_out + t_out*stride + k
    for (std::size_t base_o = 0, o = 0; base_o < total;
         base_o += outer_block, ++o) {
      std::size_t new_base = o * stride * d_out;
      for (std::size_t inner = 0; inner < stride; ++inner)
        for (std::size_t t_in = 0; t_in < d_in; ++t_in) {
          cx a = amp[base_o + t_in * stride + inner];
          if (a == cx(0, 0)) continue;
          for (std::size_t t_out = 0; t_out < d_out; ++t_out) {
            cx w = v(t_out, t_in);
            if (w == cx(0, 0)) continue;
            out.amp[new_base + t_out * stride + inner] += w * a;
          }
        }
    }
    return out;
  }

  // permute subsystems into the given label order
  Ket reorder(const std::vector<std::string>& order) const {
    if (order.size() != layout.parts.size())
      throw std::invalid_argument("reorder: label count mismatch");
    SubsystemLayout lay;
    lay.base = layout.base;
    std::vector<std::size_t> src_pos;
    for (const auto& l : order) {
      std::size_t p = layout.index_of(l);
      src_pos.push_back(p);
      lay.parts.push_back(layout.parts[p]);
    }
    lay.validate();
    auto old_strides = layout.strides();
    auto new_strides = lay.strides();
    Ket out;
    out.layout = std::move(lay);
    out.amp.assign(amp.size(), cx(0, 0));
    std::size_t total = amp.size();
    for (std::size_t i = 0; i < total; ++i) {
      if (amp[i] == cx(0, 0)) continue;
      std::size_t j = 0;
      for (std::size_t np = 0; np < src_pos.size(); ++np) {
        std::size_t digit =
            (i / old_strides[src_pos[np]]) % layout.parts[src_pos[np]].dim;
        j += digit * new_strides[np];
      }
      out.amp[j] = amp[i];
    }
    return out;
  }

  DensityMatrix reduced_density(const std::vector<std::string>& keep) const;

  bool operator==(const Ket& o) const {
    return layout == o.layout && amp == o.amp;
  }
};

inline Ket tensor(const Ket& a, const Ket& b) {
  if (a.layout.base != b.layout.base)
    throw std::invalid_argument("tensor: mismatched entropy bases");
  SubsystemLayout lay;
  lay.base = a.layout.base;
  lay.parts = a.layout.parts;
  for (const auto& p : b.layout.parts) {
    if (lay.has(p.label))
      throw std::invalid_argument("tensor: label collision '" + p.label + "'");
    lay.parts.push_back(p);
  }
  Ket out;
  out.layout = std::move(lay);
  out.amp.resize(a.amp.size() * b.amp.size());
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    for (std::size_t j = 0; j < b.amp.size(); ++j)
      out.amp[i * b.amp.size() + j] = a.amp[i] * b.amp[j];
  return out;
}

// maximally entangled pair (1/sqrt(q)) sum_j |jj>
inline Ket bell_ket(unsigned q, const std::string& label_a,
                    const std::string& label_b) {
  SubsystemLayout lay;
  lay.base = q;
  lay.parts = {{label_a, q}, {label_b, q}};
  Ket k;
  k.layout = std::move(lay);
  k.amp.assign(static_cast<std::size_t>(q) * q, cx(0, 0));
  double w = 1.0 / std::sqrt(static_cast<double>(q));
  for (unsigned j = 0; j < q; ++j) k.amp[j * q + j] = w;
  return k;
}

namespace detail {

// nonzero entries of the slice vectors of a ket under a keep/trace split:
// one kept-dim vector per traced coordinate
struct SliceSet {
  std::size_t keep_dim = 1;
  // per traced coordinate: sorted (kept index, amplitude) pairs
  std::vector<std::vector<std::pair<std::size_t, cx>>> slices;
};

inline SliceSet ket_slices(const Ket& k, const std::vector<std::string>& keep) {
  auto sp = split_indices(k.layout, keep);
  SliceSet out;
  out.keep_dim = sp.keep_dim;
  out.slices.resize(sp.trace_dim);
  for (std::size_t i = 0; i < k.amp.size(); ++i) {
    if (k.amp[i] == cx(0, 0)) continue;
    out.slices[sp.trace_index[i]].emplace_back(sp.keep_index[i], k.amp[i]);
  }
  for (auto& s : out.slices)
    std::sort(s.begin(), s.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// Entropy (base-q units) of sum_i w_i Tr_traced |k_i><k_i|. Routes through
// either the kept-dimension matrix or the Gram matrix of the ensemble
// vectors, whichever is smaller; both give the same nonzero spectrum.
inline double entropy_of_pure_mixture(
    const std::vector<std::pair<double, const Ket*>>& ensemble,
    const std::vector<std::string>& keep, unsigned base) {
  if (ensemble.empty())
    throw std::invalid_argument("entropy_of_pure_mixture: empty ensemble");
  std::vector<SliceSet> sets;
  sets.reserve(ensemble.size());
  std::size_t keep_dim = 1;
  std::size_t vec_count = 0;
  for (const auto& [w, ket] : ensemble) {
    sets.push_back(ket_slices(*ket, keep));
    keep_dim = sets.back().keep_dim;
    for (const auto& s : sets.back().slices)
      if (!s.empty()) ++vec_count;
  }

  std::vector<double> vals;
  if (keep_dim <= vec_count) {
    CMatrix rho(keep_dim, keep_dim);
    for (std::size_t e = 0; e < sets.size(); ++e) {
      double w = ensemble[e].first;
      for (const auto& s : sets[e].slices)
        for (const auto& [i, ai] : s)
          for (const auto& [j, aj] : s) rho(i, j) += w * ai * std::conj(aj);
    }
    vals = eig_hermitian(rho);
  } else {
    // flatten the weighted slice vectors, then take the Gram spectrum
    struct Vec {
      double w;
      const std::vector<std::pair<std::size_t, cx>>* s;
    };
    std::vector<Vec> vecs;
    for (std::size_t e = 0; e < sets.size(); ++e)
      for (const auto& s : sets[e].slices)
        if (!s.empty()) vecs.push_back({ensemble[e].first, &s});
    CMatrix gram(vecs.size(), vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i)
      for (std::size_t j = i; j < vecs.size(); ++j) {
        cx dot = 0;  // <v_i | v_j>
        const auto& a = *vecs[i].s;
        const auto& b = *vecs[j].s;
        std::size_t x = 0, y = 0;
        while (x < a.size() && y < b.size()) {
          if (a[x].first < b[y].first)
            ++x;
          else if (a[x].first > b[y].first)
            ++y;
          else {
            dot += std::conj(a[x].second) * b[y].second;
            ++x;
            ++y;
          }
        }
        dot *= std::sqrt(vecs[i].w * vecs[j].w);
        gram(i, j) = dot;
        gram(j, i) = std::conj(dot);
      }
    vals = eig_hermitian(gram);
  }
  return entropy_of_spectrum(vals, base);
}

}  // namespace detail

inline DensityMatrix Ket::reduced_density(
    const std::vector<std::string>& keep) const {
  auto ss = detail::ket_slices(*this, keep);
  CMatrix out(ss.keep_dim, ss.keep_dim);
  for (const auto& s : ss.slices)
    for (const auto& [i, ai] : s)
      for (const auto& [j, aj] : s) out(i, j) += ai * std::conj(aj);
  SubsystemLayout lay = detail::restrict_layout(layout, keep);
  if (lay.parts.size() == 1 && lay.parts[0].label == "scalar") {
    DensityMatrix dm;
    dm.layout = lay;
    dm.mat = out;
    return dm;
  }
  return DensityMatrix(std::move(lay), std::move(out));
}

}  // namespace qss

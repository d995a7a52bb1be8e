#pragma once
// Dense complex tensors with named axes: contraction, permutation,
// (de)matricization, SVD-based pseudo-inverse and norms.  This is the kernel
// layer every other header builds on.  Tensors are immutable values by
// convention: every operation returns a fresh tensor.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace mpog {

using cplx = std::complex<double>;
using MatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VecC = Eigen::VectorXcd;

struct tensor_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Tensor {
 public:
  std::vector<std::size_t> shape;
  std::vector<std::string> labels;
  std::vector<cplx> data;  // row-major w.r.t. shape

  Tensor() = default;

  Tensor(std::vector<std::size_t> shp, std::vector<std::string> lbl)
      : shape(std::move(shp)), labels(std::move(lbl)) {
    if (shape.size() != labels.size())
      throw tensor_error("Tensor: shape/labels length mismatch");
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = i + 1; j < labels.size(); ++j)
        if (labels[i] == labels[j])
          throw tensor_error("Tensor: duplicate axis label '" + labels[i] + "'");
    data.assign(size_from(shape), cplx(0.0, 0.0));
  }

  Tensor(std::vector<std::size_t> shp, std::vector<std::string> lbl,
         std::vector<cplx> dat)
      : Tensor(std::move(shp), std::move(lbl)) {
    if (dat.size() != data.size())
      throw tensor_error("Tensor: data length does not match shape product");
    data = std::move(dat);
  }

  static std::size_t size_from(const std::vector<std::size_t>& shp) {
    std::size_t n = 1;
    for (auto e : shp) {
      if (e == 0) throw tensor_error("Tensor: zero extent");
      n *= e;
    }
    return n;
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }

  std::vector<std::size_t> strides() const {
    std::vector<std::size_t> st(shape.size(), 1);
    for (std::size_t i = shape.size(); i-- > 1;)
      st[i - 1] = st[i] * shape[i];
    return st;
  }

  std::size_t axis(const std::string& lbl) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == lbl) return i;
    throw tensor_error("Tensor: axis label not found: '" + lbl + "'");
  }

  std::size_t extent(const std::string& lbl) const { return shape[axis(lbl)]; }

  cplx& at(const std::vector<std::size_t>& idx) {
    return data[flat(idx)];
  }
  const cplx& at(const std::vector<std::size_t>& idx) const {
    return data[flat(idx)];
  }

  std::size_t flat(const std::vector<std::size_t>& idx) const {
    if (idx.size() != shape.size())
      throw tensor_error("Tensor: index rank mismatch");
    std::size_t f = 0, stride = 1;
    for (std::size_t i = shape.size(); i-- > 0;) {
      if (idx[i] >= shape[i]) throw tensor_error("Tensor: index out of range");
      f += idx[i] * stride;
      stride *= shape[i];
    }
    return f;
  }

  bool finite() const {
    for (const auto& z : data)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  // Axis reordering to a given label order (a pure data permutation).
  Tensor permuted(const std::vector<std::string>& new_order) const {
    if (new_order.size() != labels.size())
      throw tensor_error("permuted: wrong number of labels");
    std::vector<std::size_t> perm(new_order.size());
    for (std::size_t i = 0; i < new_order.size(); ++i) perm[i] = axis(new_order[i]);
    std::vector<std::size_t> new_shape(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) new_shape[i] = shape[perm[i]];
    Tensor out(new_shape, new_order);
    const auto old_st = strides();
    std::vector<std::size_t> idx(perm.size(), 0);
    for (std::size_t f = 0; f < out.data.size(); ++f) {
      std::size_t src = 0;
      for (std::size_t i = 0; i < perm.size(); ++i) src += idx[i] * old_st[perm[i]];
      out.data[f] = data[src];
      for (std::size_t i = perm.size(); i-- > 0;) {
        if (++idx[i] < new_shape[i]) break;
        idx[i] = 0;
      }
    }
    return out;
  }

  Tensor relabeled(const std::vector<std::string>& new_labels) const {
    Tensor out = *this;
    if (new_labels.size() != labels.size())
      throw tensor_error("relabeled: wrong number of labels");
    out.labels = new_labels;
    return out;
  }

  Tensor relabeled(const std::string& from, const std::string& to) const {
    Tensor out = *this;
    out.labels[axis(from)] = to;
    return out;
  }

  Tensor conjugated() const {
    Tensor out = *this;
    for (auto& z : out.data) z = std::conj(z);
    return out;
  }

  Tensor scaled(cplx s) const {
    Tensor out = *this;
    for (auto& z : out.data) z *= s;
    return out;
  }

  double norm() const {
    double s = 0;
    for (const auto& z : data) s += std::norm(z);
    return std::sqrt(s);
  }
};

inline Tensor operator+(const Tensor& a, const Tensor& b) {
  Tensor bb = b.labels == a.labels ? b : b.permuted(a.labels);
  if (bb.shape != a.shape) throw tensor_error("operator+: shape mismatch");
  Tensor out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += bb.data[i];
  return out;
}

inline Tensor operator-(const Tensor& a, const Tensor& b) {
  return a + b.scaled(cplx(-1.0, 0.0));
}

// ---------------------------------------------------------------------------
// Matricization

// Groups the axes named in row_labels (in the given order) into one axis and
// the axes in col_labels into a second one.  The two lists must partition the
// tensor's labels.
inline Tensor matricize(const Tensor& t,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const std::string& row_name = "row",
                        const std::string& col_name = "col") {
  if (row_labels.size() + col_labels.size() != t.labels.size())
    throw tensor_error("matricize: label lists do not partition the axes");
  std::vector<std::string> order = row_labels;
  order.insert(order.end(), col_labels.begin(), col_labels.end());
  Tensor p = t.permuted(order);  // throws if any label missing or repeated
  std::size_t rows = 1, cols = 1;
  for (std::size_t i = 0; i < row_labels.size(); ++i) rows *= p.shape[i];
  for (std::size_t i = row_labels.size(); i < p.shape.size(); ++i) cols *= p.shape[i];
  return Tensor({rows, cols}, {row_name, col_name}, std::move(p.data));
}

// Inverse of matricize: splits the two grouped axes back into named axes.
inline Tensor dematricize(const Tensor& m,
                          const std::vector<std::size_t>& row_shape,
                          const std::vector<std::string>& row_labels,
                          const std::vector<std::size_t>& col_shape,
                          const std::vector<std::string>& col_labels) {
  if (m.rank() != 2) throw tensor_error("dematricize: input must have 2 axes");
  std::size_t rows = 1, cols = 1;
  for (auto e : row_shape) rows *= e;
  for (auto e : col_shape) cols *= e;
  if (rows != m.shape[0] || cols != m.shape[1])
    throw tensor_error("dematricize: extents do not multiply to matrix shape");
  std::vector<std::size_t> shp = row_shape;
  shp.insert(shp.end(), col_shape.begin(), col_shape.end());
  std::vector<std::string> lbl = row_labels;
  lbl.insert(lbl.end(), col_labels.begin(), col_labels.end());
  return Tensor(shp, lbl, m.data);
}

// ---------------------------------------------------------------------------
// Eigen bridges (2-axis tensors <-> matrices)

inline MatC to_matrix(const Tensor& t) {
  if (t.rank() != 2) throw tensor_error("to_matrix: tensor must have 2 axes");
  return Eigen::Map<const MatC>(t.data.data(), static_cast<Eigen::Index>(t.shape[0]),
                                static_cast<Eigen::Index>(t.shape[1]));
}

inline Tensor from_matrix(const MatC& m, const std::string& row_name = "row",
                          const std::string& col_name = "col") {
  Tensor out({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
             {row_name, col_name});
  Eigen::Map<MatC>(out.data.data(), m.rows(), m.cols()) = m;
  return out;
}

// ---------------------------------------------------------------------------
// Contraction

using AxisPairing = std::vector<std::pair<std::string, std::string>>;

// Sums over the paired axes; the result carries the unpaired axes of `a`
// followed by the unpaired axes of `b`, in their original order.
inline Tensor contract(const Tensor& a, const Tensor& b, const AxisPairing& pairing) {
  std::vector<std::string> a_sum, b_sum;
  for (const auto& [la, lb] : pairing) {
    if (std::find(a_sum.begin(), a_sum.end(), la) != a_sum.end())
      throw tensor_error("contract: label '" + la + "' paired twice");
    if (std::find(b_sum.begin(), b_sum.end(), lb) != b_sum.end())
      throw tensor_error("contract: label '" + lb + "' paired twice");
    if (a.extent(la) != b.extent(lb))
      throw tensor_error("contract: extent mismatch on ('" + la + "','" + lb + "')");
    a_sum.push_back(la);
    b_sum.push_back(lb);
  }
  std::vector<std::string> a_keep, b_keep;
  for (const auto& l : a.labels)
    if (std::find(a_sum.begin(), a_sum.end(), l) == a_sum.end()) a_keep.push_back(l);
  for (const auto& l : b.labels)
    if (std::find(b_sum.begin(), b_sum.end(), l) == b_sum.end()) b_keep.push_back(l);

  Tensor am = matricize(a, a_keep, a_sum);
  Tensor bm = matricize(b, b_sum, b_keep);
  MatC prod = to_matrix(am) * to_matrix(bm);

  std::vector<std::size_t> out_shape;
  std::vector<std::string> out_labels;
  for (const auto& l : a_keep) { out_shape.push_back(a.extent(l)); out_labels.push_back(l); }
  for (const auto& l : b_keep) { out_shape.push_back(b.extent(l)); out_labels.push_back(l); }
  if (out_shape.empty()) {
    // Full contraction to a scalar: represent as a rank-1 tensor of extent 1.
    return Tensor({1}, {"scalar"}, {prod(0, 0)});
  }
  Tensor flat = from_matrix(prod);
  std::vector<std::size_t> row_shape, col_shape;
  std::vector<std::string> row_lbl, col_lbl;
  for (const auto& l : a_keep) { row_shape.push_back(a.extent(l)); row_lbl.push_back(l); }
  for (const auto& l : b_keep) { col_shape.push_back(b.extent(l)); col_lbl.push_back(l); }
  if (row_shape.empty()) return Tensor(col_shape, col_lbl, std::move(flat.data));
  if (col_shape.empty()) return Tensor(row_shape, row_lbl, std::move(flat.data));
  return dematricize(flat, row_shape, row_lbl, col_shape, col_lbl);
}

// Tensor (outer) product; label sets must be disjoint.
inline Tensor outer(const Tensor& a, const Tensor& b) {
  return contract(a, b, {});
}

// ---------------------------------------------------------------------------
// Linear algebra

// Moore-Penrose pseudo-inverse of a 2-axis tensor.  Singular values below
// tol * sigma_max are treated as zero.  The result's axes are the input's
// swapped, so that contract(pinv, m) pairs naturally.
inline Tensor pseudo_inverse(const Tensor& m, double tol = 1e-10) {
  if (m.rank() != 2) throw tensor_error("pseudo_inverse: input must have 2 axes");
  if (!m.finite()) throw tensor_error("pseudo_inverse: non-finite input");
  MatC a = to_matrix(m);
  Eigen::JacobiSVD<MatC> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double cut = s.size() ? tol * s(0) : 0.0;
  Eigen::VectorXd sinv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut && s(i) > 0.0) sinv(i) = 1.0 / s(i);
  MatC pinv = svd.matrixV() * sinv.asDiagonal() * svd.matrixU().adjoint();
  return from_matrix(pinv, m.labels[1], m.labels[0]);
}

// Frobenius distance after aligning b's axes with a's.
inline double distance(const Tensor& a, const Tensor& b) {
  Tensor bb = (b.labels == a.labels) ? b : b.permuted(a.labels);
  if (bb.shape != a.shape) throw tensor_error("distance: shape mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) s += std::norm(a.data[i] - bb.data[i]);
  return std::sqrt(s);
}

// Numerical rank of a 2-axis tensor (relative tolerance on sigma_max).
inline std::size_t numerical_rank(const Tensor& m, double tol = 1e-10) {
  Eigen::JacobiSVD<MatC> svd(to_matrix(m));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Small constructors

inline Tensor identity_tensor(std::size_t n, const std::string& row = "row",
                              const std::string& col = "col") {
  Tensor t({n, n}, {row, col});
  for (std::size_t i = 0; i < n; ++i) t.data[i * n + i] = 1.0;
  return t;
}

inline Tensor basis_vector(std::size_t n, std::size_t k, const std::string& lbl) {
  Tensor t({n}, {lbl});
  t.data[k] = 1.0;
  return t;
}

// Extract the single entry of a fully contracted (scalar) tensor.
inline cplx scalar_of(const Tensor& t) {
  if (t.size() != 1) throw tensor_error("scalar_of: tensor is not a scalar");
  return t.data[0];
}

}  // namespace mpog

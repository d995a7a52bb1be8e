#pragma once
// Shared test fixtures: concrete on-site representations and cocycles used
// across the suites, plus small dense oracles (Kronecker powers etc.) coded
// independently of the library's contraction path.

#include <vector>

#include "mpog/group.hpp"
#include "mpog/mpo_rep.hpp"
#include "mpog/tensor.hpp"

namespace fixtures {

using mpog::cplx;
using mpog::FiniteGroup;
using mpog::MatC;
using mpog::Tensor;

// Left-regular representation: d = |G|, u(g)|h> = |gh>.
inline std::vector<Tensor> regular_rep(const FiniteGroup& G) {
  const std::size_t n = G.order;
  std::vector<Tensor> u;
  for (std::size_t g = 0; g < n; ++g) {
    Tensor m({n, n}, {"po", "pi"});
    for (std::size_t h = 0; h < n; ++h)
      m.at({static_cast<std::size_t>(G.mul(static_cast<int>(g), static_cast<int>(h))), h}) = 1.0;
    u.push_back(std::move(m));
  }
  return u;
}

// Z2 with u(1) = diag(1,-1).
inline std::vector<Tensor> z2_diag_rep() {
  Tensor id = mpog::identity_tensor(2, "po", "pi");
  Tensor z({2, 2}, {"po", "pi"}, {cplx(1), cplx(0), cplx(0), cplx(-1)});
  return {id, z};
}

// Z2 with u(1) = X (off-diagonal flip).
inline std::vector<Tensor> z2_flip_rep() {
  Tensor id = mpog::identity_tensor(2, "po", "pi");
  Tensor x({2, 2}, {"po", "pi"}, {cplx(0), cplx(1), cplx(1), cplx(0)});
  return {id, x};
}

// Diagonal character representation of Z_n: u(g) = diag over characters? No:
// u(g) = diag(w^{g k})_k with w = exp(2 pi i / n); d = n, faithful, abelian.
inline std::vector<Tensor> zn_char_rep(std::size_t n) {
  std::vector<Tensor> u;
  for (std::size_t g = 0; g < n; ++g) {
    Tensor m({n, n}, {"po", "pi"});
    for (std::size_t k = 0; k < n; ++k) {
      double ang = 2.0 * mpog::kPi * g * k / n;
      m.at({k, k}) = cplx(std::cos(ang), std::sin(ang));
    }
    u.push_back(std::move(m));
  }
  return u;
}

// Kronecker product oracle (independent loop-nest code path).
inline MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline MatC kron_power(const MatC& a, std::size_t L) {
  MatC out = MatC::Identity(1, 1);
  for (std::size_t i = 0; i < L; ++i) out = kron(out, a);
  return out;
}

}  // namespace fixtures

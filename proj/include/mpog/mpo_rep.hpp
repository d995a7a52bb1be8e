#pragma once
// MPO representations of finite groups: one four-leg tensor T_g per group
// element, a graded virtual space with one block per element, builders for
// the on-site case (bond dimension 1) and for a cocycle-twisted left-regular
// action (the anomalous builder), plus the dense brute-force realization used
// as the oracle by every higher layer.

#include <vector>

#include "group.hpp"
#include "tensor.hpp"

namespace mpog {

struct rep_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Axis names used by every MPO tensor in this codebase:
//   "l"  left virtual, "r" right virtual, "po" physical out (row),
//   "pi" physical in (column).
class MpoGroupRep {
 public:
  FiniteGroup group;
  std::size_t phys_dim = 0;
  std::vector<Tensor> T;          // T[g]: shape {chi_g, chi_g, d, d}
  std::vector<std::size_t> chi;   // per-element block dimension

  std::size_t total_chi() const {
    std::size_t s = 0;
    for (auto c : chi) s += c;
    return s;
  }
  // Offset of block g inside the graded virtual space (element-label order).
  std::size_t offset(int g) const {
    std::size_t s = 0;
    for (int x = 0; x < g; ++x) s += chi[x];
    return s;
  }
};

// ---------------------------------------------------------------------------
// Builders

// On-site representation: every block is one-dimensional and the MPO is a
// plain tensor power of the on-site unitary u(g).
inline MpoGroupRep build_onsite_mpo(const FiniteGroup& G,
                                    const std::vector<Tensor>& u) {
  if (u.size() != G.order) throw rep_error("build_onsite_mpo: need one matrix per element");
  const std::size_t d = u[0].shape.at(0);
  for (const auto& m : u)
    if (m.rank() != 2 || m.shape[0] != d || m.shape[1] != d)
      throw rep_error("build_onsite_mpo: matrices must share a square shape");
  // Representation property u(g)u(h) == u(gh).
  for (std::size_t g = 0; g < G.order; ++g)
    for (std::size_t h = 0; h < G.order; ++h) {
      MatC prod = to_matrix(u[g]) * to_matrix(u[h]);
      MatC ref = to_matrix(u[G.mul(static_cast<int>(g), static_cast<int>(h))]);
      if ((prod - ref).norm() > 1e-10)
        throw rep_error("build_onsite_mpo: input is not a representation");
    }
  MpoGroupRep rep;
  rep.group = G;
  rep.phys_dim = d;
  rep.chi.assign(G.order, 1);
  for (std::size_t g = 0; g < G.order; ++g) {
    Tensor t({1, 1, d, d}, {"l", "r", "po", "pi"});
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        t.at({0, 0, i, j}) = u[g].at({i, j});
    rep.T.push_back(std::move(t));
  }
  return rep;
}

// Anomalous ("triple line") builder.  Each site carries a pair of group
// labels, d = |G|^2, and the bond carries one group label, chi_g = |G| for
// every block.  The tensor acts by simultaneous left multiplication with a
// nearest-neighbour cocycle phase:
//   T_g[a -> b bond; (a,b) -> (ga,gb) physical] = w(g, a, a^{-1} b),
// so densely U_g = sum_k prod_i w(g, k_i, k_i^{-1} k_{i+1})
//                  (x)_i |g k_i, g k_{i+1}> <k_i, k_{i+1}|   (PBC).
// U_e is the projector enforcing matching neighbour labels (not the
// identity), U_g U_h = U_{gh} holds exactly at every length because the
// mixed w(g,h,.) factors produced by the cocycle identity telescope around
// the ring, and the single-site fusion identity holds exactly with
//   W_{g,h}|A> = w(g,h,A)^{-1} |hA>(x)|A>,
// whose associator reproduces the input cocycle.
inline MpoGroupRep build_anomalous_mpo(const FiniteGroup& G, const Cocycle3& w) {
  if (!check_cocycle3(G, w))
    throw rep_error("build_anomalous_mpo: input fails the 3-cocycle condition");
  const int n = static_cast<int>(G.order);
  const std::size_t d = G.order * G.order;  // physical label pair (x,y) = x*n + y

  MpoGroupRep rep;
  rep.group = G;
  rep.phys_dim = d;
  rep.chi.assign(G.order, G.order);
  for (int g = 0; g < n; ++g) {
    Tensor t({G.order, G.order, d, d}, {"l", "r", "po", "pi"});
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::size_t in = static_cast<std::size_t>(a * n + b);
        std::size_t out = static_cast<std::size_t>(G.mul(g, a) * n + G.mul(g, b));
        t.at({static_cast<std::size_t>(a), static_cast<std::size_t>(b), out, in}) =
            w(g, a, G.mul(G.invert(a), b));
      }
    rep.T.push_back(std::move(t));
  }
  return rep;
}

// Closed-form fusion tensor of the triple-line builder (used as an
// independent cross-check of the fusion solver):
//   W_{g,h}: C^{chi_gh} -> C^{chi_g} (x) C^{chi_h},
//   |A> -> w(g,h,A)^{-1} |hA>(x)|A>.
inline Tensor triple_line_fusion_tensor(const FiniteGroup& G, const Cocycle3& w,
                                        int g, int h) {
  const std::size_t n = G.order;
  Tensor W({n, n, n}, {"g", "h", "gh"});
  for (int A = 0; A < static_cast<int>(n); ++A)
    W.at({static_cast<std::size_t>(G.mul(h, A)), static_cast<std::size_t>(A),
          static_cast<std::size_t>(A)}) = cplx(1.0) / w(g, h, A);
  return W;
}

// ---------------------------------------------------------------------------
// Dense realization (the oracle): O = Tr(T^{i1 j1} ... T^{iL jL}) with PBC.

inline Tensor realize_dense(const MpoGroupRep& rep, int g, std::size_t L) {
  if (L < 1) throw rep_error("realize_dense: L must be at least 1");
  const std::size_t d = rep.phys_dim;
  std::size_t dim = 1;
  for (std::size_t i = 0; i < L; ++i) {
    dim *= d;
    if (dim > 4096) throw rep_error("realize_dense: d^L exceeds the 4096 guard");
  }
  const std::size_t c = rep.chi[g];
  // Cache the chi x chi matrix slice for every physical (i,j) pair.
  std::vector<MatC> slice(d * d, MatC(c, c));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = 0; b < c; ++b)
          slice[i * d + j](a, b) = rep.T[g].at({a, b, i, j});

  Tensor out({dim, dim}, {"po", "pi"});
  std::vector<std::size_t> I(L), J(L);
  for (std::size_t fi = 0; fi < dim; ++fi) {
    std::size_t x = fi;
    for (std::size_t s = L; s-- > 0;) { I[s] = x % d; x /= d; }
    for (std::size_t fj = 0; fj < dim; ++fj) {
      std::size_t y = fj;
      for (std::size_t s = L; s-- > 0;) { J[s] = y % d; y /= d; }
      MatC prod = slice[I[0] * d + J[0]];
      for (std::size_t s = 1; s < L; ++s) prod = prod * slice[I[s] * d + J[s]];
      out.at({fi, fj}) = prod.trace();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

struct GroupLawRecord {
  int g = 0, h = 0;
  double residual = 0.0;
};

struct GroupLawReport {
  std::size_t L = 0;
  double tol = 0.0;
  double max_residual = 0.0;
  bool pass = false;
  std::vector<GroupLawRecord> records;
};

inline GroupLawReport verify_group_law(const MpoGroupRep& rep, std::size_t L,
                                       double tol = 1e-9) {
  GroupLawReport rpt;
  rpt.L = L;
  rpt.tol = tol;
  const int n = static_cast<int>(rep.group.order);
  std::vector<MatC> dense(n);
  for (int g = 0; g < n; ++g) dense[g] = to_matrix(realize_dense(rep, g, L));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      double res = (dense[g] * dense[h] - dense[rep.group.mul(g, h)]).norm();
      rpt.records.push_back({g, h, res});
      rpt.max_residual = std::max(rpt.max_residual, res);
    }
  rpt.pass = rpt.max_residual < tol;
  return rpt;
}

// Injectivity of one block: the two-site blocked tensor, viewed as a map from
// the virtual pair to the physical pair, must have rank chi_g^2.
inline bool check_block_injectivity(const MpoGroupRep& rep, int g,
                                    double tol = 1e-10) {
  const Tensor& t = rep.T[g];
  Tensor right = t.relabeled({"l2", "r2", "po2", "pi2"});
  Tensor blocked = contract(t, right, {{"r", "l2"}});
  // axes now: l, po, pi, r2, po2, pi2
  Tensor m = matricize(blocked, {"po", "pi", "po2", "pi2"}, {"l", "r2"});
  return numerical_rank(m, tol) == rep.chi[g] * rep.chi[g];
}

}  // namespace mpog

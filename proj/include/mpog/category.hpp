#pragma once
// Fusion-category symmetries as MPOs.  Objects a of a (multiplicity-free)
// fusion category are represented by MPOs O_a obeying the fusion algebra
// O_a O_b = sum_c N_ab^c O_c.  Provides
//  - validation of the raw category data (N-table symmetries, quantum
//    dimensions from the Perron root, total dimension, duals),
//  - channel fusion tensors: the stacked pair O_a O_b decomposes as a SUM
//    over channels c with isometric zipper tensors per channel,
//  - the paired associativity identity for the channel tensors,
//  - localized operators on split gauge legs realizing the fusion algebra,
//  - the weight element Lambda = sum_a (d_a / Dsq) a, its local projector,
//    and state symmetrization with eigenvalue d_a invariance,
//  - channel action tensors on block MPS families with a 0/1 action
//    multiplicity table,
//  - dense realization oracles for all of the above.

#include <optional>
#include <vector>

#include "anomaly.hpp"

namespace mpog {

struct category_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Category data.

// Multiplicity-free fusion category: objects 0..m-1 with 0 the unit,
// N_ab^c in {0,1}, duals, quantum dimensions d_a (Perron roots of the fusion
// matrices), total dimension squared Dsq = sum d_a^2.
struct FusionCategory {
  std::size_t m = 0;
  std::vector<int> N;     // index (a*m + b)*m + c
  std::vector<int> dual;  // dual[a]
  std::vector<double> d;  // quantum dimensions
  double Dsq = 0.0;

  int n(int a, int b, int c) const {
    return N[(static_cast<std::size_t>(a) * m + b) * m + c];
  }
  // Lambda weight of object a.
  double weight(int a) const { return d[a] / Dsq; }
};

// Checks every axiom on the raw tables and computes d_a and Dsq.
// Symmetries enforced: unit fusion, N_ab^c = N_{dual(a) c}^b = N_{c dual(b)}^a
// (the form the group-as-a-category case obeys), existence of duals through
// the unit channel, and the quantum-dimension sum rules.
inline FusionCategory validate_category(std::size_t m,
                                        const std::vector<int>& N,
                                        const std::vector<int>& dual) {
  FusionCategory cat;
  cat.m = m;
  cat.N = N;
  cat.dual = dual;
  if (m < 1 || N.size() != m * m * m || dual.size() != m)
    throw category_error("validate_category: table sizes");
  const int mi = static_cast<int>(m);
  for (int v : N)
    if (v != 0 && v != 1)
      throw category_error("validate_category: multiplicity outside {0,1}");
  for (int a = 0; a < mi; ++a)
    for (int b = 0; b < mi; ++b) {
      if (cat.n(0, a, b) != (a == b ? 1 : 0) ||
          cat.n(a, 0, b) != (a == b ? 1 : 0))
        throw category_error("validate_category: unit does not fuse trivially");
    }
  for (int a = 0; a < mi; ++a) {
    if (dual[a] < 0 || dual[a] >= mi || dual[dual[a]] != a)
      throw category_error("validate_category: dual table is not an involution");
    if (cat.n(a, dual[a], 0) != 1)
      throw category_error("validate_category: dual pair misses the unit "
                           "channel");
  }
  for (int a = 0; a < mi; ++a)
    for (int b = 0; b < mi; ++b)
      for (int c = 0; c < mi; ++c) {
        if (cat.n(a, b, c) != cat.n(dual[a], c, b))
          throw category_error("validate_category: Frobenius symmetry "
                               "N_ab^c = N_{a* c}^b violated");
        if (cat.n(a, b, c) != cat.n(c, dual[b], a))
          throw category_error("validate_category: Frobenius symmetry "
                               "N_ab^c = N_{c b*}^a violated");
      }
  // Quantum dimensions: Perron root and eigenvector of the fusion matrices.
  // d is the common positive eigenvector of all N_a with eigenvalue d_a.
  MatC K = MatC::Zero(m, m);
  for (int a = 0; a < mi; ++a)
    for (int b = 0; b < mi; ++b)
      for (int c = 0; c < mi; ++c) K(b, c) += cat.n(a, b, c);
  Eigen::ComplexEigenSolver<MatC> es(K);
  // Pick the eigenvector with the largest real eigenvalue (Perron).
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
  VecC vec = es.eigenvectors().col(best);
  cplx ph = vec(0);
  if (std::abs(ph) < 1e-12)
    throw category_error("validate_category: degenerate Perron vector");
  vec /= ph;  // unit has d = 1 after this scaling
  cat.d.resize(m);
  cat.Dsq = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    if (std::abs(vec(a).imag()) > 1e-10 || vec(a).real() <= 0)
      throw category_error("validate_category: quantum dimensions not "
                           "positive");
    cat.d[a] = vec(a).real();
    cat.Dsq += cat.d[a] * cat.d[a];
  }
  for (int a = 0; a < mi; ++a)
    for (int b = 0; b < mi; ++b) {
      double lhs = cat.d[a] * cat.d[b], rhs = 0.0;
      for (int c = 0; c < mi; ++c) rhs += cat.n(a, b, c) * cat.d[c];
      if (std::abs(lhs - rhs) > 1e-10)
        throw category_error("validate_category: d_a d_b != sum_c N_ab^c d_c");
    }
  for (int c = 0; c < mi; ++c) {
    double lhs = 0.0;
    for (int a = 0; a < mi; ++a)
      for (int b = 0; b < mi; ++b) lhs += cat.n(a, b, c) * cat.d[a] * cat.d[b];
    if (std::abs(lhs - cat.Dsq * cat.d[c]) > 1e-10 * cat.Dsq)
      throw category_error("validate_category: total-dimension sum rule");
  }
  return cat;
}

// Any finite group as a category: N_gh^k = delta_{gh,k}, duals are inverses.
inline FusionCategory group_as_category(const FiniteGroup& G) {
  const std::size_t m = G.order;
  std::vector<int> N(m * m * m, 0), dual(m);
  for (int a = 0; a < static_cast<int>(m); ++a) {
    dual[a] = G.invert(a);
    for (int b = 0; b < static_cast<int>(m); ++b)
      N[(static_cast<std::size_t>(a) * m + b) * m + G.mul(a, b)] = 1;
  }
  return validate_category(m, N, dual);
}

// ---------------------------------------------------------------------------
// MPO representation of a category.

struct CategoryMpoRep {
  FusionCategory cat;
  std::size_t phys_dim = 0;
  std::vector<Tensor> T;  // per object, axes ("l","r","po","pi")
  std::vector<std::size_t> chi;

  std::size_t total_chi() const {
    std::size_t s = 0;
    for (auto c : chi) s += c;
    return s;
  }
  std::size_t offset(int a) const {
    std::size_t s = 0;
    for (int x = 0; x < a; ++x) s += chi[x];
    return s;
  }
};

// Wraps a group MPO representation as a category representation.
inline CategoryMpoRep category_rep_from_group(const MpoGroupRep& rep) {
  CategoryMpoRep out;
  out.cat = group_as_category(rep.group);
  out.phys_dim = rep.phys_dim;
  out.T = rep.T;
  out.chi = rep.chi;
  return out;
}

// Dense realization oracle: O_a = Tr(T^{i1 j1} ... T^{iL jL}) with PBC.
inline MatC realize_dense_category(const CategoryMpoRep& rep, int a,
                                   std::size_t L) {
  if (L < 1) throw category_error("realize_dense_category: L >= 1 required");
  const std::size_t d = rep.phys_dim;
  std::size_t dim = 1;
  for (std::size_t i = 0; i < L; ++i) {
    dim *= d;
    if (dim > 4096)
      throw category_error("realize_dense_category: size guard");
  }
  const std::size_t c = rep.chi[a];
  std::vector<MatC> sl(d * d, MatC(c, c));
  for (std::size_t po = 0; po < d; ++po)
    for (std::size_t pi = 0; pi < d; ++pi)
      for (std::size_t x = 0; x < c; ++x)
        for (std::size_t y = 0; y < c; ++y)
          sl[po * d + pi](x, y) = rep.T[a].at({x, y, po, pi});
  MatC out(dim, dim);
  std::vector<std::size_t> ro(L), co(L);
  for (std::size_t r = 0; r < dim; ++r) {
    std::size_t x = r;
    for (std::size_t s = L; s-- > 0;) { ro[s] = x % d; x /= d; }
    for (std::size_t q = 0; q < dim; ++q) {
      std::size_t y = q;
      for (std::size_t s = L; s-- > 0;) { co[s] = y % d; y /= d; }
      MatC prod = sl[ro[0] * d + co[0]];
      for (std::size_t s = 1; s < L; ++s) prod = prod * sl[ro[s] * d + co[s]];
      out(r, q) = prod.trace();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Channel fusion tensors.

// For every pair (a,b) and every channel c with N_ab^c = 1, tensors
//   W_{ab}^c : chi_c -> chi_a (x) chi_b,  axes ("a","b","c"),
//   Winv_{ab}^c : chi_a (x) chi_b -> chi_c,  axes ("c","a","b"),
// such that the stacked pair equals sum_c W_{ab}^c T_c Winv_{ab}^c and
// Winv_{ab}^c W_{ab}^e = delta_{c,e} 1_c.
struct CategoryFusionData {
  CategoryMpoRep rep;
  std::vector<Tensor> W;     // index (a*m + b)*m + c, empty when N = 0
  std::vector<Tensor> Winv;
  Tensor v;                  // unit-block vector, axis ("e")

  const Tensor& w(int a, int b, int c) const {
    return W[(static_cast<std::size_t>(a) * rep.cat.m + b) * rep.cat.m + c];
  }
  const Tensor& winv(int a, int b, int c) const {
    return Winv[(static_cast<std::size_t>(a) * rep.cat.m + b) * rep.cat.m + c];
  }
};

namespace detail {

// Stacked two-object tensor, axes (la, lb, ra, rb, po, pi).
inline Tensor stacked_pair_category(const CategoryMpoRep& rep, int a, int b) {
  Tensor ta = rep.T[a].relabeled({"la", "ra", "po", "mid"});
  Tensor tb = rep.T[b].relabeled({"lb", "rb", "mid", "pi"});
  return contract(ta, tb, {{"mid", "mid"}}).permuted(
      {"la", "lb", "ra", "rb", "po", "pi"});
}

// Null space with an absolute scale floor: singular values are compared
// against tol * max(sigma_max, scale), so a system matrix that is tiny
// relative to the tensors it was built from (e.g. identically zero up to
// rounding) yields the full space instead of nothing.
inline std::vector<VecC> null_space_scaled(const MatC& M, double scale,
                                           double tol = 1e-8) {
  Eigen::JacobiSVD<MatC> svd(M, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double cut = tol * std::max(s.size() ? s(0) : 0.0, scale);
  if (cut <= 0) cut = tol;
  std::vector<VecC> out;
  for (Eigen::Index i = 0; i < svd.matrixV().cols(); ++i) {
    double sv = (i < s.size()) ? s(i) : 0.0;
    if (sv <= cut) out.push_back(svd.matrixV().col(i));
  }
  return out;
}

// Solves the one-sided intertwiner systems
//   S^{po,pi} W = W T_c^{po,pi}   and   Winv S^{po,pi} = T_c^{po,pi} Winv
// for one channel; returns nullopt when no intertwiner exists, throws when
// it is not unique.
inline std::optional<std::pair<MatC, MatC>> channel_intertwiners(
    const std::vector<MatC>& S, const std::vector<MatC>& Tc, std::size_t R,
    std::size_t cc) {
  const std::size_t nsl = S.size();
  double scale = 0.0;
  for (std::size_t s = 0; s < nsl; ++s)
    scale = std::max({scale, S[s].norm(), Tc[s].norm()});
  MatC MW = MatC::Zero(nsl * R * cc, R * cc);
  for (std::size_t s = 0; s < nsl; ++s)
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t j = 0; j < cc; ++j) {
        std::size_t row = (s * R + r) * cc + j;
        for (std::size_t r2 = 0; r2 < R; ++r2)
          MW(row, r2 * cc + j) += S[s](r, r2);
        for (std::size_t j2 = 0; j2 < cc; ++j2)
          MW(row, r * cc + j2) -= Tc[s](j2, j);
      }
  auto nw = detail::null_space_scaled(MW, scale);
  if (nw.empty()) return std::nullopt;
  if (nw.size() > 1)
    throw category_error("channel_intertwiners: left map not unique");
  MatC MI = MatC::Zero(nsl * cc * R, cc * R);
  for (std::size_t s = 0; s < nsl; ++s)
    for (std::size_t j = 0; j < cc; ++j)
      for (std::size_t r = 0; r < R; ++r) {
        std::size_t row = (s * cc + j) * R + r;
        for (std::size_t r2 = 0; r2 < R; ++r2)
          MI(row, j * R + r2) += S[s](r2, r);
        for (std::size_t j2 = 0; j2 < cc; ++j2)
          MI(row, j2 * R + r) -= Tc[s](j, j2);
      }
  auto ni = detail::null_space_scaled(MI, scale);
  if (ni.empty())
    throw category_error("channel_intertwiners: one-sided channel (left "
                         "exists, right does not)");
  if (ni.size() > 1)
    throw category_error("channel_intertwiners: right map not unique");
  MatC W(R, cc), Wi(cc, R);
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t j = 0; j < cc; ++j) W(r, j) = nw[0](r * cc + j);
  for (std::size_t j = 0; j < cc; ++j)
    for (std::size_t r = 0; r < R; ++r) Wi(j, r) = ni[0](j * R + r);
  return std::make_pair(W, Wi);
}

}  // namespace detail

// Solves all channel fusion tensors and verifies, per pair (a,b):
// orthogonality across channels, and completeness (the stacked pair equals
// the channel sum).  Gauge per channel: Winv W = 1 exactly, |W|^2 = chi_c,
// largest-modulus entry of W real positive.
inline CategoryFusionData solve_category_fusion(const CategoryMpoRep& rep,
                                                double tol = 1e-9) {
  const int m = static_cast<int>(rep.cat.m);
  const std::size_t d = rep.phys_dim;
  CategoryFusionData out;
  out.rep = rep;
  out.W.resize(rep.cat.m * rep.cat.m * rep.cat.m);
  out.Winv.resize(rep.cat.m * rep.cat.m * rep.cat.m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const std::size_t R = rep.chi[a] * rep.chi[b];
      Tensor st = detail::stacked_pair_category(rep, a, b);
      std::vector<MatC> S(d * d, MatC(R, R));
      for (std::size_t po = 0; po < d; ++po)
        for (std::size_t pi = 0; pi < d; ++pi)
          for (std::size_t la = 0; la < rep.chi[a]; ++la)
            for (std::size_t lb = 0; lb < rep.chi[b]; ++lb)
              for (std::size_t ra = 0; ra < rep.chi[a]; ++ra)
                for (std::size_t rb = 0; rb < rep.chi[b]; ++rb)
                  S[po * d + pi](la * rep.chi[b] + lb, ra * rep.chi[b] + rb) =
                      st.at({la, lb, ra, rb, po, pi});
      std::vector<std::pair<int, std::pair<MatC, MatC>>> chans;
      for (int c = 0; c < m; ++c) {
        if (rep.cat.n(a, b, c) == 0) continue;
        const std::size_t cc = rep.chi[c];
        std::vector<MatC> Tc(d * d, MatC(cc, cc));
        for (std::size_t po = 0; po < d; ++po)
          for (std::size_t pi = 0; pi < d; ++pi)
            for (std::size_t x = 0; x < cc; ++x)
              for (std::size_t y = 0; y < cc; ++y)
                Tc[po * d + pi](x, y) = rep.T[c].at({x, y, po, pi});
        auto iw = detail::channel_intertwiners(S, Tc, R, cc);
        if (!iw)
          throw category_error("solve_category_fusion: channel (" +
                               std::to_string(a) + "," + std::to_string(b) +
                               ")->" + std::to_string(c) +
                               " not decomposable");
        chans.emplace_back(c, *iw);
      }
      // Normalize each channel and check orthogonality + completeness.
      for (auto& [c, pairwi] : chans) {
        auto& [W, Wi] = pairwi;
        const std::size_t cc = rep.chi[c];
        cplx tr = (Wi * W).trace() / static_cast<double>(cc);
        if (std::abs(tr) < 1e-12)
          throw category_error("solve_category_fusion: degenerate channel "
                               "normalization");
        Wi /= tr;
        double mag = std::sqrt(static_cast<double>(cc)) / W.norm();
        W *= mag;
        Wi /= mag;
        // Phase: largest-modulus entry of W real positive.
        Eigen::Index bi = 0, bj = 0;
        double best = -1;
        for (Eigen::Index i = 0; i < W.rows(); ++i)
          for (Eigen::Index j = 0; j < W.cols(); ++j)
            if (std::abs(W(i, j)) > best + 1e-12) {
              best = std::abs(W(i, j));
              bi = i;
              bj = j;
            }
        cplx ph = std::conj(W(bi, bj)) / std::abs(W(bi, bj));
        W *= ph;
        Wi *= std::conj(ph);
      }
      for (auto& [c, pairwi] : chans)
        for (auto& [c2, pairwi2] : chans) {
          MatC prod = pairwi.second * pairwi2.first;
          MatC expect = (c == c2)
                            ? MatC(MatC::Identity(rep.chi[c], rep.chi[c]))
                            : MatC(MatC::Zero(rep.chi[c], rep.chi[c2]));
          if ((prod - expect).norm() > tol)
            throw category_error("solve_category_fusion: channel "
                                 "orthogonality failed");
        }
      // Completeness: || S - sum_c W_c T_c Winv_c || over all slices.
      double comp = 0.0;
      for (std::size_t s = 0; s < d * d; ++s) {
        MatC acc = MatC::Zero(R, R);
        for (auto& [c, pairwi] : chans) {
          const std::size_t cc = rep.chi[c];
          MatC Tcs(cc, cc);
          std::size_t po = s / d, pi = s % d;
          for (std::size_t x = 0; x < cc; ++x)
            for (std::size_t y = 0; y < cc; ++y)
              Tcs(x, y) = rep.T[c].at({x, y, po, pi});
          acc += pairwi.first * Tcs * pairwi.second;
        }
        comp += (acc - S[s]).squaredNorm();
      }
      if (std::sqrt(comp) > tol)
        throw category_error("solve_category_fusion: channel sum does not "
                             "reconstruct the stacked pair (residual " +
                             std::to_string(std::sqrt(comp)) + ")");
      // Store as tensors.
      for (auto& [c, pairwi] : chans) {
        const std::size_t cc = rep.chi[c];
        Tensor Wt({rep.chi[a], rep.chi[b], cc}, {"a", "b", "c"});
        Tensor Wit({cc, rep.chi[a], rep.chi[b]}, {"c", "a", "b"});
        for (std::size_t la = 0; la < rep.chi[a]; ++la)
          for (std::size_t lb = 0; lb < rep.chi[b]; ++lb)
            for (std::size_t j = 0; j < cc; ++j) {
              Wt.at({la, lb, j}) = pairwi.first(la * rep.chi[b] + lb, j);
              Wit.at({j, la, lb}) = pairwi.second(j, la * rep.chi[b] + lb);
            }
        std::size_t idx =
            (static_cast<std::size_t>(a) * rep.cat.m + b) * rep.cat.m + c;
        out.W[idx] = std::move(Wt);
        out.Winv[idx] = std::move(Wit);
      }
    }
  return out;
}

// Unit-block vector: Winv_{a,0}^a (1_a (x) v) = 1_a for every object a.
// Only the splitting-tensor (Winv) side defines the vector: the fusion
// tensors W_{a,0}^a are pseudo-inverses whose rows can carry unequal
// weights (e.g. in constrained height models), so no mirrored condition on
// W is imposed.
inline double unit_vector_residual_category(const CategoryFusionData& f,
                                            const Tensor& v) {
  const int m = static_cast<int>(f.rep.cat.m);
  double worst = 0.0;
  for (int a = 0; a < m; ++a) {
    Tensor ket = contract(f.winv(a, 0, a), v.relabeled({"e"}), {{"b", "e"}});
    worst = std::max(worst,
                     distance(ket, identity_tensor(f.rep.chi[a], "c", "a")));
  }
  return worst;
}

inline Tensor solve_unit_vector_category(CategoryFusionData& f) {
  const int m = static_cast<int>(f.rep.cat.m);
  const std::size_t ce = f.rep.chi[0];
  std::size_t rows = 0;
  for (int a = 0; a < m; ++a) rows += f.rep.chi[a] * f.rep.chi[a];
  MatC M = MatC::Zero(rows, ce);
  VecC rhs = VecC::Zero(rows);
  std::size_t r = 0;
  for (int a = 0; a < m; ++a) {
    const Tensor& Wi = f.winv(a, 0, a);  // axes ("c","a","b")
    for (std::size_t C = 0; C < f.rep.chi[a]; ++C)
      for (std::size_t x = 0; x < f.rep.chi[a]; ++x) {
        for (std::size_t s = 0; s < ce; ++s) M(r, s) = Wi.at({C, x, s});
        rhs(r) = (C == x) ? 1.0 : 0.0;
        ++r;
      }
  }
  VecC v = M.completeOrthogonalDecomposition().solve(rhs);
  Tensor vt({ce}, {"e"});
  for (std::size_t s = 0; s < ce; ++s) vt.data[s] = v(s);
  double res = unit_vector_residual_category(f, vt);
  if (res > 1e-9)
    throw category_error("solve_unit_vector_category: residual " +
                         std::to_string(res));
  f.v = vt;
  return vt;
}

// ---------------------------------------------------------------------------
// Paired associativity identity.

// For admissible labels (a, b, e, c, d) with N_ab^e = N_ec^d = 1:
//   Winv_{ec}^d (x) W_{ec}^d
//     = sum_f [Winv_{af}^d (1_a (x) Winv_{bc}^f)(W_{ab}^e (x) 1_c)]
//       (x) [(Winv_{ab}^e (x) 1_c)(1_a (x) W_{bc}^f) W_{af}^d],
// where the two tensor factors share the channel sum.  Returns the residual.
inline double associativity_residual(const CategoryFusionData& f, int a, int b,
                                     int e, int c, int d) {
  const FusionCategory& cat = f.rep.cat;
  const int m = static_cast<int>(cat.m);
  auto lmap = [&](int ff) {
    // chi_e (x) chi_c -> chi_d
    Tensor step = contract(f.w(a, b, e).relabeled({"a", "b", "e"}),
                           f.winv(b, c, ff).relabeled({"f", "b", "cc"}),
                           {{"b", "b"}});
    // axes: a, e, f, cc
    return contract(step, f.winv(a, ff, d).relabeled({"d", "a", "f"}),
                    {{"a", "a"}, {"f", "f"}})
        .permuted({"d", "e", "cc"});
  };
  auto rmap = [&](int ff) {
    // chi_d -> chi_e (x) chi_c
    Tensor step = contract(f.w(a, ff, d).relabeled({"a", "f", "d"}),
                           f.w(b, c, ff).relabeled({"b", "cc", "f"}),
                           {{"f", "f"}});
    // axes: a, d, b, cc
    return contract(step, f.winv(a, b, e).relabeled({"e", "a", "b"}),
                    {{"a", "a"}, {"b", "b"}})
        .permuted({"e", "cc", "d"});
  };
  Tensor L1 = f.winv(e, c, d).relabeled({"d", "e", "cc"}).permuted(
      {"d", "e", "cc"});
  Tensor L2 = f.w(e, c, d).relabeled({"e", "cc", "d"}).permuted(
      {"e", "cc", "d"});
  // Flatten the paired identity: compare outer products entrywise.
  const std::size_t n1 = L1.data.size(), n2 = L2.data.size();
  std::vector<cplx> lhs(n1 * n2), rhs(n1 * n2, cplx(0.0));
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) lhs[i * n2 + j] = L1.data[i] * L2.data[j];
  for (int ff = 0; ff < m; ++ff) {
    if (cat.n(b, c, ff) == 0 || cat.n(a, ff, d) == 0) continue;
    Tensor P1 = lmap(ff), P2 = rmap(ff);
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n2; ++j)
        rhs[i * n2 + j] += P1.data[i] * P2.data[j];
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    num += std::norm(lhs[i] - rhs[i]);
    den += std::norm(lhs[i]);
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

// ---------------------------------------------------------------------------
// Localized operators on split gauge legs.

// The localized operator for object a on one (left leg, site, right leg)
// triple, matrix on C^chi (x) C^d (x) C^chi:
//   sum_{b,c: N_ab^c = 1}  Winv_{ab}^c[C, s, alpha] T_a[s, t, po, pi]
//                          W_{ab}^c[t, beta, B]  |C, po, B><alpha, pi, beta|
// with alpha, beta in block b on both legs and C, B in block c.
inline MatC local_op_category(const CategoryFusionData& f, int a) {
  const FusionCategory& cat = f.rep.cat;
  const int m = static_cast<int>(cat.m);
  const std::size_t d = f.rep.phys_dim, chi = f.rep.total_chi();
  MatC out = MatC::Zero(chi * d * chi, chi * d * chi);
  for (int b = 0; b < m; ++b)
    for (int c = 0; c < m; ++c) {
      if (cat.n(a, b, c) == 0) continue;
      const std::size_t cb = f.rep.chi[b], ca = f.rep.chi[a],
                        ccc = f.rep.chi[c];
      const std::size_t ob = f.rep.offset(b), oc = f.rep.offset(c);
      const Tensor& Wi = f.winv(a, b, c);  // axes ("c","a","b")
      const Tensor& W = f.w(a, b, c);      // axes ("a","b","c")
      const Tensor& T = f.rep.T[a];
      for (std::size_t C = 0; C < ccc; ++C)
        for (std::size_t s = 0; s < ca; ++s)
          for (std::size_t al = 0; al < cb; ++al) {
            cplx left = Wi.at({C, s, al});
            if (left == cplx(0.0)) continue;
            for (std::size_t t = 0; t < ca; ++t)
              for (std::size_t po = 0; po < d; ++po)
                for (std::size_t pi = 0; pi < d; ++pi) {
                  cplx mid = T.at({s, t, po, pi});
                  if (mid == cplx(0.0)) continue;
                  for (std::size_t be = 0; be < cb; ++be)
                    for (std::size_t B = 0; B < ccc; ++B) {
                      cplx right = W.at({t, be, B});
                      if (right == cplx(0.0)) continue;
                      out(((oc + C) * d + po) * chi + (oc + B),
                          ((ob + al) * d + pi) * chi + (ob + be)) +=
                          left * mid * right;
                    }
                }
          }
    }
  return out;
}

// The Lambda element localized: (1/Dsq) sum_a d_a local_op(a); a projector
// absorbing every local_op(a) with eigenvalue d_a.
inline MatC local_lambda_op(const CategoryFusionData& f) {
  const int m = static_cast<int>(f.rep.cat.m);
  const std::size_t dim =
      f.rep.total_chi() * f.rep.phys_dim * f.rep.total_chi();
  MatC out = MatC::Zero(dim, dim);
  for (int a = 0; a < m; ++a)
    out += f.rep.cat.weight(a) * local_op_category(f, a);
  return out;
}

// ---------------------------------------------------------------------------
// Split chain and symmetrization.

struct CategorySplitChain {
  CategoryFusionData fusion;
  std::size_t L = 0;

  std::size_t d() const { return fusion.rep.phys_dim; }
  std::size_t chi() const { return fusion.rep.total_chi(); }
  std::size_t matter_dim() const {
    std::size_t m = 1;
    for (std::size_t i = 0; i < L; ++i) m *= d();
    return m;
  }
  std::size_t gauge_dim() const {
    std::size_t g = 1;
    for (std::size_t i = 0; i < 2 * L; ++i) g *= chi();
    return g;
  }
  std::size_t total_dim() const { return matter_dim() * gauge_dim(); }
  void check_guard() const {
    if (L < 1) throw category_error("CategorySplitChain: empty chain");
    if (total_dim() > kGaugeDenseGuard)
      throw category_error("CategorySplitChain: size guard exceeded");
  }
};

// Applies a local (left leg, site, right leg) operator at site i; same index
// layout as the split group chain.
inline VecC apply_category_local(const CategorySplitChain& c, const MatC& loc,
                                 std::size_t i, const VecC& x) {
  c.check_guard();
  if (i >= c.L) throw category_error("apply_category_local: site index");
  const std::size_t d = c.d(), chi = c.chi(), gd = c.gauge_dim(),
                    td = c.total_dim();
  if (static_cast<std::size_t>(x.size()) != td)
    throw category_error("apply_category_local: vector size");
  std::size_t ms = 1;
  for (std::size_t s = i + 1; s < c.L; ++s) ms *= d;
  const std::size_t pstride = ms * gd;
  std::size_t gl = 1;
  for (std::size_t s = 2 * i + 1; s < 2 * c.L; ++s) gl *= chi;
  const std::size_t gr = gl / chi;
  const std::size_t ldim = chi * d * chi;
  VecC out = VecC::Zero(td);
  for (std::size_t I = 0; I < td; ++I) {
    if (x(I) == cplx(0.0)) continue;
    const std::size_t p = (I / pstride) % d;
    const std::size_t l = (I / gl) % chi;
    const std::size_t r = (I / gr) % chi;
    const std::size_t col = (l * d + p) * chi + r;
    const std::size_t base = I - p * pstride - l * gl - r * gr;
    for (std::size_t row = 0; row < ldim; ++row) {
      cplx v = loc(row, col);
      if (v == cplx(0.0)) continue;
      const std::size_t r2 = row % chi;
      const std::size_t p2 = (row / chi) % d;
      const std::size_t l2 = row / (chi * d);
      out(base + p2 * pstride + l2 * gl + r2 * gr) += v * x(I);
    }
  }
  return out;
}

// P = prod_i local Lambda operator at every site.
inline VecC apply_lambda_projector(const CategorySplitChain& c, VecC x) {
  MatC lam = local_lambda_op(c.fusion);
  for (std::size_t i = 0; i < c.L; ++i) x = apply_category_local(c, lam, i, x);
  return x;
}

inline VecC couple_category(const CategorySplitChain& c, const VecC& psi,
                            const VecC& phi) {
  c.check_guard();
  const std::size_t md = c.matter_dim(), gd = c.gauge_dim();
  if (static_cast<std::size_t>(psi.size()) != md ||
      static_cast<std::size_t>(phi.size()) != gd)
    throw category_error("couple_category: size mismatch");
  VecC out(md * gd);
  for (std::size_t m = 0; m < md; ++m)
    for (std::size_t e = 0; e < gd; ++e) out(m * gd + e) = psi(m) * phi(e);
  return out;
}

// |V> : the unit-block vector on every gauge leg.
inline VecC product_gauge_state_category(const CategorySplitChain& c) {
  c.check_guard();
  if (c.fusion.v.size() == 0)
    throw category_error("product_gauge_state_category: unit vector not "
                         "solved");
  const std::size_t chi = c.chi(), gd = c.gauge_dim();
  VecC w = VecC::Zero(chi);
  for (std::size_t s = 0; s < c.fusion.rep.chi[0]; ++s)
    w(c.fusion.rep.offset(0) + s) = c.fusion.v.data[s];
  VecC out(gd);
  std::vector<std::size_t> dig(2 * c.L);
  for (std::size_t e = 0; e < gd; ++e) {
    std::size_t x = e;
    for (std::size_t s = 2 * c.L; s-- > 0;) { dig[s] = x % chi; x /= chi; }
    cplx amp(1.0);
    for (std::size_t s = 0; s < 2 * c.L; ++s) amp *= w(dig[s]);
    out(e) = amp;
  }
  return out;
}

// G_phi |psi> = P (|psi> (x) |phi>).
inline VecC symmetrize_category(const CategorySplitChain& c, const VecC& psi,
                                const VecC& phi) {
  return apply_lambda_projector(c, couple_category(c, psi, phi));
}

// ---------------------------------------------------------------------------
// Channel action tensors on a block MPS family.

// For every object a and block x, the decorated tensor decomposes over target
// blocks y with M_{a,x}^y in {0,1}:
//   T_a . A_x = sum_y Y_{a,x}^y A_y Yinv_{a,x}^y,
// with cross-target orthogonality Yinv_{a,x}^y Y_{a,x}^z = delta_{yz} 1_y.
struct CategoryActionSet {
  std::vector<std::vector<std::vector<int>>> M;        // [a][x][y] in {0,1}
  std::vector<std::vector<std::vector<Tensor>>> Y;     // empty when M = 0
  std::vector<std::vector<std::vector<Tensor>>> Yinv;
};

inline CategoryActionSet solve_category_actions(const std::vector<Mps>& blocks,
                                                const CategoryMpoRep& rep,
                                                double tol = 1e-9) {
  const int m = static_cast<int>(rep.cat.m);
  const std::size_t nb = blocks.size(), d = rep.phys_dim;
  for (const Mps& b : blocks)
    if (b.d() != d)
      throw category_error("solve_category_actions: physical dimension "
                           "mismatch");
  CategoryActionSet out;
  out.M.assign(m, std::vector<std::vector<int>>(nb, std::vector<int>(nb, 0)));
  out.Y.assign(m, std::vector<std::vector<Tensor>>(nb,
                                                   std::vector<Tensor>(nb)));
  out.Yinv = out.Y;
  for (int a = 0; a < m; ++a)
    for (std::size_t x = 0; x < nb; ++x) {
      const std::size_t Dx = blocks[x].D(), ca = rep.chi[a];
      const std::size_t R = ca * Dx;
      std::vector<MatC> S(d, MatC::Zero(R, R));
      for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = 0; q < d; ++q) {
          MatC aq = blocks[x].slice(q);
          for (std::size_t al = 0; al < ca; ++al)
            for (std::size_t be = 0; be < ca; ++be) {
              cplx t = rep.T[a].at({al, be, p, q});
              if (t == cplx(0.0)) continue;
              for (std::size_t i = 0; i < Dx; ++i)
                for (std::size_t j = 0; j < Dx; ++j)
                  S[p](al * Dx + i, be * Dx + j) += t * aq(i, j);
            }
        }
      }
      for (std::size_t y = 0; y < nb; ++y) {
        const std::size_t Dy = blocks[y].D();
        std::vector<MatC> Ay(d);
        for (std::size_t p = 0; p < d; ++p) Ay[p] = blocks[y].slice(p);
        auto iw = detail::channel_intertwiners(S, Ay, R, Dy);
        if (!iw) continue;
        out.M[a][x][y] = 1;
        auto& [Wm, Wim] = *iw;
        cplx tr = (Wim * Wm).trace() / static_cast<double>(Dy);
        if (std::abs(tr) < 1e-12)
          throw category_error("solve_category_actions: degenerate "
                               "normalization");
        Wim /= tr;
        double mag = std::sqrt(static_cast<double>(Dy)) / Wm.norm();
        Wm *= mag;
        Wim /= mag;
        Tensor Y({ca, Dx, Dy}, {"g", "vin", "vout"});
        Tensor Yi({Dy, ca, Dx}, {"vin", "g", "vout"});
        for (std::size_t al = 0; al < ca; ++al)
          for (std::size_t i = 0; i < Dx; ++i)
            for (std::size_t j = 0; j < Dy; ++j) {
              Y.at({al, i, j}) = Wm(al * Dx + i, j);
              Yi.at({j, al, i}) = Wim(j, al * Dx + i);
            }
        out.Y[a][x][y] = std::move(Y);
        out.Yinv[a][x][y] = std::move(Yi);
      }
      // Completeness of the target sum.
      double comp = 0.0;
      for (std::size_t p = 0; p < d; ++p) {
        MatC acc = MatC::Zero(R, R);
        for (std::size_t y = 0; y < nb; ++y) {
          if (out.M[a][x][y] == 0) continue;
          const std::size_t Dy = blocks[y].D();
          MatC Ym(R, Dy), Yim(Dy, R);
          for (std::size_t al = 0; al < ca; ++al)
            for (std::size_t i = 0; i < Dx; ++i)
              for (std::size_t j = 0; j < Dy; ++j) {
                Ym(al * Dx + i, j) = out.Y[a][x][y].at({al, i, j});
                Yim(j, al * Dx + i) = out.Yinv[a][x][y].at({j, al, i});
              }
          acc += Ym * blocks[y].slice(p) * Yim;
        }
        comp += (acc - S[p]).squaredNorm();
      }
      if (std::sqrt(comp) > tol)
        throw category_error("solve_category_actions: target sum does not "
                             "reconstruct the decorated tensor (a=" +
                             std::to_string(a) + ", x=" + std::to_string(x) +
                             ", residual " + std::to_string(std::sqrt(comp)) +
                             ")");
    }
  return out;
}

// Invariant state via the Lambda element: out = dense(O_Lambda) psi_{A_x}.
inline VecC invariant_state_via_lambda(const std::vector<Mps>& blocks,
                                       const CategoryMpoRep& rep, int x,
                                       std::size_t L) {
  VecC psi = realize_mps(blocks[x], L);
  const int m = static_cast<int>(rep.cat.m);
  VecC out = VecC::Zero(psi.size());
  for (int a = 0; a < m; ++a)
    out += rep.cat.weight(a) * (realize_dense_category(rep, a, L) * psi);
  return out;
}

}  // namespace mpog

#pragma once
// Fusion data of an MPO group representation: the fusion tensors W, W^{-1}
// (solved from the single-site zipper identity), the associativity 3-cocycle
// they define, gauge fixing into the strict gauge (cocycle == 1), the unit
// vector v on the identity block and the Z_g matrices connecting the g and
// g^{-1} blocks.
//
// Axis conventions:
//   W[g,h]    : axes ("g","h","gh"), shape (chi_g, chi_h, chi_gh)
//               -- the map C^{chi_gh} -> C^{chi_g} (x) C^{chi_h};
//   Winv[g,h] : axes ("gh","g","h"), shape (chi_gh, chi_g, chi_h)
//               -- the reverse map, normalized so Winv . W == identity.

#include <optional>
#include <vector>

#include "group.hpp"
#include "mpo_rep.hpp"
#include "tensor.hpp"

namespace mpog {

struct fusion_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown by gauge_fix_strict when the extracted cocycle class is nontrivial:
// the concrete manifestation of the gauging obstruction.
struct anomalous_error : fusion_error {
  using fusion_error::fusion_error;
};

struct FusionData {
  MpoGroupRep rep;
  std::vector<Tensor> W;     // index g * n + h
  std::vector<Tensor> Winv;  // index g * n + h
  Cocycle3 omega{1};         // extracted associator
  Cochain2 beta{1};          // applied trivializer (identity if none applied)
  bool strict = false;       // true once gauge_fix_strict succeeded
  Tensor v;                  // unit-block vector, axis ("e"), extent chi_e
  std::vector<Tensor> Z;     // Z[g]: axes ("g","gi"), shape (chi_g, chi_{g^-1})

  const Tensor& w(int g, int h) const { return W[g * rep.group.order + h]; }
  const Tensor& winv(int g, int h) const { return Winv[g * rep.group.order + h]; }
};

// ---------------------------------------------------------------------------
// Stacked two-block tensor: S = T_g (top) composed with T_h (bottom) on the
// physical leg; axes (lg, lh, rg, rh, po, pi).
inline Tensor stacked_pair(const MpoGroupRep& rep, int g, int h) {
  Tensor tg = rep.T[g].relabeled({"lg", "rg", "po", "mid"});
  Tensor th = rep.T[h].relabeled({"lh", "rh", "mid", "pi"});
  return contract(tg, th, {{"mid", "mid"}})
      .permuted({"lg", "lh", "rg", "rh", "po", "pi"});
}

// ---------------------------------------------------------------------------
// Residuals (direct dense contractions, independent of the solver path).

// || S . W  -  W . T_gh ||  with the contraction over the right virtual pair.
inline double zipper_residual(const MpoGroupRep& rep, const Tensor& W,
                              int g, int h) {
  int gh = rep.group.mul(g, h);
  Tensor S = stacked_pair(rep, g, h);
  Tensor lhs = contract(S, W, {{"rg", "g"}, {"rh", "h"}});
  // lhs axes: lg, lh, po, pi, gh
  Tensor rhs = contract(W.relabeled({"g", "h", "A"}),
                        rep.T[gh].relabeled({"A", "gh", "po", "pi"}),
                        {{"A", "A"}});
  // rhs axes: g, h, gh, po, pi -> align
  rhs = rhs.relabeled({"lg", "lh", "gh", "po", "pi"});
  double scale = std::max(1.0, lhs.norm());
  return distance(lhs, rhs) / scale;
}

// || Winv . S  -  T_gh . Winv ||  with the contraction over the left pair.
inline double zipper_residual_inv(const MpoGroupRep& rep, const Tensor& Winv,
                                  int g, int h) {
  int gh = rep.group.mul(g, h);
  Tensor S = stacked_pair(rep, g, h);
  Tensor lhs = contract(Winv, S, {{"g", "lg"}, {"h", "lh"}});
  // lhs axes: gh, rg, rh, po, pi
  Tensor rhs = contract(rep.T[gh].relabeled({"gh", "B", "po", "pi"}),
                        Winv.relabeled({"B", "g", "h"}), {{"B", "B"}});
  rhs = rhs.relabeled({"gh", "po", "pi", "rg", "rh"});
  double scale = std::max(1.0, lhs.norm());
  return distance(lhs, rhs) / scale;
}

// || Winv . W - identity ||
inline double orthogonality_residual(const Tensor& Winv, const Tensor& W) {
  Tensor prod = contract(Winv, W.relabeled({"g", "h", "gh2"}),
                         {{"g", "g"}, {"h", "h"}});
  return distance(prod, identity_tensor(prod.shape[0], "gh", "gh2"));
}

// ---------------------------------------------------------------------------
// Pair solver

namespace detail {

// Null space of a dense complex matrix via SVD; returns the right singular
// vectors whose singular value is below tol * sigma_max.
inline std::vector<VecC> null_space(const MatC& M, double tol = 1e-8) {
  Eigen::JacobiSVD<MatC> svd(M, Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  double cut = (s.size() && s(0) > 0) ? tol * s(0) : tol;
  std::vector<VecC> out;
  for (Eigen::Index i = 0; i < svd.matrixV().cols(); ++i) {
    double sv = (i < s.size()) ? s(i) : 0.0;
    if (sv <= cut) out.push_back(svd.matrixV().col(i));
  }
  // Columns of V beyond the number of singular values (wide matrices) are
  // genuine null vectors too; JacobiSVD(ThinV) already includes them when
  // rows < cols?  To be safe, handle the rank-deficient wide case explicitly.
  return out;
}

// Fix the free phase of a tensor: make its largest-modulus entry real
// positive (first such entry wins on ties within 1e-12).
inline cplx phase_fix_factor(const Tensor& t) {
  double best = -1.0;
  cplx pivot(1.0);
  for (const auto& z : t.data) {
    double a = std::abs(z);
    if (a > best + 1e-12) {
      best = a;
      pivot = z;
    }
  }
  if (best <= 0.0) return cplx(1.0);
  return std::conj(pivot) / std::abs(pivot);
}

}  // namespace detail

struct FusionPair {
  Tensor W;     // ("g","h","gh")
  Tensor Winv;  // ("gh","g","h")
};

// Solves the single-site fusion identity for the pair (g,h):
//   S . W == W . T_{gh}     and     Winv . S == T_{gh} . Winv,
// then normalizes Winv . W == identity exactly and fixes the remaining free
// phase of W (largest-modulus entry real positive).
inline FusionPair solve_fusion_tensors(const MpoGroupRep& rep, int g, int h) {
  const int gh = rep.group.mul(g, h);
  const std::size_t cg = rep.chi[g], ch = rep.chi[h], cgh = rep.chi[gh];

  FusionPair out;
  if (cg == 1 && ch == 1 && cgh == 1) {
    // On-site shortcut: the scalar fusion tensor is exactly 1.
    out.W = Tensor({1, 1, 1}, {"g", "h", "gh"}, {cplx(1.0)});
    out.Winv = Tensor({1, 1, 1}, {"gh", "g", "h"}, {cplx(1.0)});
    if (zipper_residual(rep, out.W, g, h) > 1e-9)
      throw fusion_error("solve_fusion_tensors: on-site zipper failed");
    return out;
  }

  Tensor S = stacked_pair(rep, g, h);
  const std::size_t d = rep.phys_dim;

  // --- W from  sum_{rg,rh} S[lg,lh,rg,rh,po,pi] W[rg,rh,B]
  //           - sum_A      W[lg,lh,A] T[A,B,po,pi]  == 0
  {
    const std::size_t nw = cg * ch * cgh;
    const std::size_t rows = cg * ch * d * d * cgh;
    MatC M = MatC::Zero(rows, nw);
    auto widx = [&](std::size_t a, std::size_t b, std::size_t A) {
      return (a * ch + b) * cgh + A;
    };
    for (std::size_t lg = 0; lg < cg; ++lg)
      for (std::size_t lh = 0; lh < ch; ++lh)
        for (std::size_t po = 0; po < d; ++po)
          for (std::size_t pi = 0; pi < d; ++pi)
            for (std::size_t B = 0; B < cgh; ++B) {
              std::size_t r = (((lg * ch + lh) * d + po) * d + pi) * cgh + B;
              for (std::size_t rg = 0; rg < cg; ++rg)
                for (std::size_t rh = 0; rh < ch; ++rh)
                  M(r, widx(rg, rh, B)) += S.at({lg, lh, rg, rh, po, pi});
              for (std::size_t A = 0; A < cgh; ++A)
                M(r, widx(lg, lh, A)) -= rep.T[gh].at({A, B, po, pi});
            }
    auto null = detail::null_space(M);
    if (null.empty())
      throw fusion_error("solve_fusion_tensors: no zipper solution (pair " +
                         std::to_string(g) + "," + std::to_string(h) + ")");
    if (null.size() > 1)
      throw fusion_error("solve_fusion_tensors: zipper solution not unique");
    Tensor W({cg, ch, cgh}, {"g", "h", "gh"});
    for (std::size_t i = 0; i < W.data.size(); ++i) W.data[i] = null[0](i);
    out.W = std::move(W);
  }

  // --- Winv from  sum_{lg,lh} Winv[A,lg,lh] S[lg,lh,rg,rh,po,pi]
  //              - sum_B      T[A,B,po,pi] Winv[B,rg,rh]  == 0
  {
    const std::size_t nw = cgh * cg * ch;
    const std::size_t rows = cgh * cg * ch * d * d;
    MatC M = MatC::Zero(rows, nw);
    auto widx = [&](std::size_t A, std::size_t a, std::size_t b) {
      return (A * cg + a) * ch + b;
    };
    for (std::size_t A = 0; A < cgh; ++A)
      for (std::size_t rg = 0; rg < cg; ++rg)
        for (std::size_t rh = 0; rh < ch; ++rh)
          for (std::size_t po = 0; po < d; ++po)
            for (std::size_t pi = 0; pi < d; ++pi) {
              std::size_t r = (((A * cg + rg) * ch + rh) * d + po) * d + pi;
              for (std::size_t lg = 0; lg < cg; ++lg)
                for (std::size_t lh = 0; lh < ch; ++lh)
                  M(r, widx(A, lg, lh)) += S.at({lg, lh, rg, rh, po, pi});
              for (std::size_t B = 0; B < cgh; ++B)
                M(r, widx(B, rg, rh)) -= rep.T[gh].at({A, B, po, pi});
            }
    auto null = detail::null_space(M);
    if (null.empty())
      throw fusion_error("solve_fusion_tensors: no reverse zipper solution");
    if (null.size() > 1)
      throw fusion_error("solve_fusion_tensors: reverse solution not unique");
    Tensor Winv({cgh, cg, ch}, {"gh", "g", "h"});
    for (std::size_t i = 0; i < Winv.data.size(); ++i) Winv.data[i] = null[0](i);
    out.Winv = std::move(Winv);
  }

  // --- Magnitude convention: W is an isometry, tr(W^dag W) == chi_gh.  The
  // zipper fixes W only up to a scalar; the unit-vector conditions on the
  // identity block require the isometric magnitude (the bra side uses W, the
  // ket side Winv, so the split of scale between them matters).
  {
    double n2 = out.W.norm();
    out.W = out.W.scaled(std::sqrt(static_cast<double>(cgh)) / n2);
  }

  // --- Normalize: Winv . W must be proportional to the identity; absorb the
  // scale into Winv so the product is exactly the identity.
  Tensor prod = contract(out.Winv, out.W.relabeled({"g", "h", "gh2"}),
                         {{"g", "g"}, {"h", "h"}});
  cplx tr(0.0);
  for (std::size_t i = 0; i < cgh; ++i) tr += prod.at({i, i});
  if (std::abs(tr) < 1e-12)
    throw fusion_error("solve_fusion_tensors: ill-conditioned normalization");
  cplx scale = tr / static_cast<double>(cgh);
  out.Winv = out.Winv.scaled(cplx(1.0) / scale);
  if (orthogonality_residual(out.Winv, out.W) > 1e-9)
    throw fusion_error("solve_fusion_tensors: orthogonality failed after "
                       "normalization");

  // --- Phase gauge: largest-modulus entry of W real positive.
  cplx ph = detail::phase_fix_factor(out.W);
  out.W = out.W.scaled(ph);
  out.Winv = out.Winv.scaled(std::conj(ph));
  return out;
}

// Solve all pairs.
inline FusionData solve_all_fusion(const MpoGroupRep& rep) {
  const int n = static_cast<int>(rep.group.order);
  FusionData f;
  f.rep = rep;
  f.W.resize(n * n);
  f.Winv.resize(n * n);
  f.omega = Cocycle3(rep.group.order);
  f.beta = Cochain2(rep.group.order);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      FusionPair p = solve_fusion_tensors(rep, g, h);
      f.W[g * n + h] = std::move(p.W);
      f.Winv[g * n + h] = std::move(p.Winv);
    }
  return f;
}

// ---------------------------------------------------------------------------
// 3-cocycle extraction

// The two association orders of stacked Winv's:
//   A1 = Winv_{gh,k} . (Winv_{g,h} (x) 1_k)
//   A2 = Winv_{g,hk} . (1_g (x) Winv_{h,k})
// are proportional, A1 == omega(g,h,k) A2; omega is computed as the ratio of
// Frobenius inner products with a proportionality-residual check.
inline cplx associator_scalar(const FusionData& f, int g, int h, int k,
                              double* residual = nullptr) {
  const FiniteGroup& G = f.rep.group;
  int gh = G.mul(g, h), hk = G.mul(h, k);
  // A1[ghk; g,h,k]
  Tensor A1 = contract(f.winv(gh, k).relabeled({"ghk", "B", "k"}),
                       f.winv(g, h).relabeled({"B", "g", "h"}), {{"B", "B"}});
  // axes: ghk, k, g, h
  Tensor A2 = contract(f.winv(g, hk).relabeled({"ghk", "g", "B"}),
                       f.winv(h, k).relabeled({"B", "h", "k"}), {{"B", "B"}});
  // axes: ghk, g, h, k
  A1 = A1.permuted({"ghk", "g", "h", "k"});
  A2 = A2.permuted({"ghk", "g", "h", "k"});
  cplx num(0.0), den(0.0);
  for (std::size_t i = 0; i < A1.data.size(); ++i) {
    num += std::conj(A2.data[i]) * A1.data[i];
    den += std::conj(A2.data[i]) * A2.data[i];
  }
  if (std::abs(den) < 1e-14)
    throw fusion_error("associator: zero overlap");
  cplx w = num / den;
  double res = distance(A1, A2.scaled(w)) / std::max(1.0, A1.norm());
  if (residual) *residual = res;
  if (res > 1e-8)
    throw fusion_error("associator: sides are not proportional (residual " +
                       std::to_string(res) + ")");
  return w;
}

inline Cocycle3 extract_3cocycle(FusionData& f) {
  const int n = static_cast<int>(f.rep.group.order);
  Cocycle3 w(f.rep.group.order);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        cplx s = associator_scalar(f, g, h, k);
        if (std::abs(std::abs(s) - 1.0) > 1e-8)
          throw fusion_error("extract_3cocycle: non-unimodular associator");
        w(g, h, k) = s / std::abs(s);
      }
  if (!check_cocycle3(f.rep.group, w))
    throw fusion_error("extract_3cocycle: extracted phases fail the cocycle "
                       "condition");
  f.omega = w;
  return w;
}

// ---------------------------------------------------------------------------
// Strict gauge

// Rescale W -> beta W (and Winv -> conj(beta) Winv) by the trivializer of the
// extracted cocycle, making the re-extracted cocycle identically 1.  Throws
// anomalous_error when the class is nontrivial.
inline FusionData gauge_fix_strict(const FusionData& fin) {
  FusionData f = fin;
  extract_3cocycle(f);
  auto beta = coboundary_trivialize(f.rep.group, f.omega);
  if (!beta)
    throw anomalous_error(
        "gauge_fix_strict: extracted 3-cocycle class is nontrivial "
        "(anomalous symmetry; gauging obstructed)");
  const int n = static_cast<int>(f.rep.group.order);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      f.W[g * n + h] = f.W[g * n + h].scaled((*beta)(g, h));
      f.Winv[g * n + h] = f.Winv[g * n + h].scaled(std::conj((*beta)(g, h)));
    }
  f.beta = *beta;
  Cocycle3 re = extract_3cocycle(f);
  for (const auto& z : re.values)
    if (std::abs(z - cplx(1.0)) > 1e-9)
      throw fusion_error("gauge_fix_strict: residual cocycle after fixing");
  f.strict = true;
  return f;
}

// Mixed strict identity:  Winv_{g,hk} . (1_g (x) Winv_{h,k}) . (W_{g,h} (x) 1_k)
// == Winv_{gh,k}; returns the residual.
inline double trivial3ortho_residual(const FusionData& f, int g, int h, int k) {
  const FiniteGroup& G = f.rep.group;
  int gh = G.mul(g, h), hk = G.mul(h, k);
  Tensor A2 = contract(f.winv(g, hk).relabeled({"ghk", "g", "B"}),
                       f.winv(h, k).relabeled({"B", "h", "k"}), {{"B", "B"}});
  // axes: ghk, g, h, k; now close (g,h) with W_{g,h}:
  Tensor lhs = contract(A2, f.w(g, h).relabeled({"g", "h", "ghin"}),
                        {{"g", "g"}, {"h", "h"}});
  // axes: ghk, k, ghin
  Tensor rhs = f.winv(gh, k).relabeled({"ghk", "ghin", "k"});
  return distance(lhs.permuted({"ghk", "ghin", "k"}), rhs);
}

// ---------------------------------------------------------------------------
// Unit vector

// Residual of the ket-side condition  Winv_{g,e} . (1_g (x) v) == 1_g
// and the bra-side condition  (1_g (x) <v|) . W_{g,e} == 1_g.
inline double unit_vector_residual(const FusionData& f, const Tensor& v) {
  const int n = static_cast<int>(f.rep.group.order);
  double worst = 0.0;
  for (int g = 0; g < n; ++g) {
    Tensor ket = contract(f.winv(g, 0), v.relabeled({"e"}), {{"h", "e"}});
    // axes: gh (=g out), g (in)
    worst = std::max(worst,
                     distance(ket, identity_tensor(f.rep.chi[g], "gh", "g")));
    Tensor bra = contract(f.w(g, 0), v.conjugated().relabeled({"e"}),
                          {{"h", "e"}});
    // axes: g (out), gh (in)
    worst = std::max(worst,
                     distance(bra, identity_tensor(f.rep.chi[g], "g", "gh")));
  }
  return worst;
}

// Solve the linear ket-side system for v, then verify both sides.
inline Tensor solve_unit_vector(FusionData& f) {
  const int n = static_cast<int>(f.rep.group.order);
  const std::size_t ce = f.rep.chi[0];
  // Stack equations over g: sum_s Winv_{g,e}[B, a, s] v_s = delta_{B,a}.
  std::size_t rows = 0;
  for (int g = 0; g < n; ++g) rows += f.rep.chi[g] * f.rep.chi[g];
  MatC M = MatC::Zero(rows, ce);
  VecC b = VecC::Zero(rows);
  std::size_t r = 0;
  for (int g = 0; g < n; ++g) {
    const Tensor& Wi = f.winv(g, 0);
    for (std::size_t B = 0; B < f.rep.chi[g]; ++B)
      for (std::size_t a = 0; a < f.rep.chi[g]; ++a) {
        for (std::size_t s = 0; s < ce; ++s) M(r, s) = Wi.at({B, a, s});
        b(r) = (B == a) ? 1.0 : 0.0;
        ++r;
      }
  }
  VecC v = M.completeOrthogonalDecomposition().solve(b);
  Tensor vt({ce}, {"e"});
  for (std::size_t s = 0; s < ce; ++s) vt.data[s] = v(s);
  double res = unit_vector_residual(f, vt);
  if (res > 1e-9)
    throw fusion_error("solve_unit_vector: no vector satisfies the unit-block "
                       "conditions (residual " + std::to_string(res) + ")");
  f.v = vt;
  return vt;
}

// ---------------------------------------------------------------------------
// Z matrices

// Defining form: Z_g (as a vector on chi_g (x) chi_{g^-1}) = W_{g,g^-1} . v.
inline Tensor solve_Z_matrix(const FusionData& f, int g) {
  if (f.v.size() == 0)
    throw fusion_error("solve_Z_matrix: unit vector not solved");
  int gi = f.rep.group.invert(g);
  Tensor z = contract(f.w(g, gi), f.v.relabeled({"e"}), {{"gh", "e"}});
  // axes: g, h (= g^-1 block) -> rename
  return z.relabeled({"g", "gi"});
}

// Relation residual:  W_{g,g^-1 h}[a, b; c] == sum_s Z_g[a,s] Winv_{g^-1,h}[b; s, c].
inline double Z_relation_residual(const FusionData& f, const Tensor& Zg, int g,
                                  int h) {
  const FiniteGroup& G = f.rep.group;
  int gi = G.invert(g);
  int gih = G.mul(gi, h);
  Tensor lhs = f.w(g, gih).relabeled({"a", "b", "c"});  // chi_g, chi_{g^-1 h}, chi_h
  Tensor rhs = contract(Zg.relabeled({"a", "s"}),
                        f.winv(gi, h).relabeled({"b", "s", "c"}), {{"s", "s"}});
  return distance(lhs, rhs.permuted({"a", "b", "c"}));
}

inline std::vector<Tensor> solve_Z_matrices(FusionData& f) {
  const int n = static_cast<int>(f.rep.group.order);
  std::vector<Tensor> out;
  for (int g = 0; g < n; ++g) {
    Tensor Zg = solve_Z_matrix(f, g);
    for (int h = 0; h < n; ++h) {
      double res = Z_relation_residual(f, Zg, g, h);
      if (res > 1e-9)
        throw fusion_error("solve_Z_matrices: relation fails for g=" +
                           std::to_string(g) + ", h=" + std::to_string(h) +
                           " (residual " + std::to_string(res) + ")");
    }
    out.push_back(std::move(Zg));
  }
  f.Z = out;
  return out;
}

}  // namespace mpog

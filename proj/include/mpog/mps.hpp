#pragma once
// Matrix product states with an on-ring MPO symmetry:
//  - injectivity certification by blocking,
//  - extraction of the virtual symmetry action  u_g . A = V_g A V_g^dagger
//    for on-site symmetries,
//  - action-tensor pairs (Y_g, Yinv_g) intertwining the full MPO tensor with
//    the MPS virtual space,  T_g . A = Y_g A Yinv_g,  together with the
//    scalar bond symbols L(g,h) measuring how the pairs compose through the
//    fusion tensors,
//  - the closed-form gauged MPS: an alternating chain (Atil, B) whose dense
//    realization reproduces the state-gauging map exactly.
//
// Everything dense, small, and cross-checked against the projector path.

#include <optional>
#include <vector>

#include "gauging.hpp"

namespace mpog {

struct mps_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A translation-invariant MPS on a ring: one tensor with axes
//   "l" left virtual, "r" right virtual, "p" physical.
class Mps {
 public:
  Tensor A;

  Mps() = default;
  explicit Mps(const Tensor& a) : A(a.permuted({"l", "r", "p"})) {
    if (A.shape[0] != A.shape[1])
      throw mps_error("Mps: left and right virtual extents differ");
  }

  std::size_t D() const { return A.shape[0]; }
  std::size_t d() const { return A.shape[2]; }

  // The D x D matrix slice for one physical index.
  MatC slice(std::size_t p) const {
    MatC m(D(), D());
    for (std::size_t a = 0; a < D(); ++a)
      for (std::size_t b = 0; b < D(); ++b) m(a, b) = A.at({a, b, p});
    return m;
  }
};

// Dense state vector  psi(p_0..p_{L-1}) = tr(A^{p_0} ... A^{p_{L-1}})  with
// site 0 the most significant digit (matching the chain layout everywhere
// else in this codebase).
inline VecC realize_mps(const Mps& m, std::size_t L) {
  if (L < 1) throw mps_error("realize_mps: L must be at least 1");
  const std::size_t d = m.d();
  std::size_t dim = 1;
  for (std::size_t i = 0; i < L; ++i) {
    dim *= d;
    if (dim > 4096) throw mps_error("realize_mps: d^L exceeds the 4096 guard");
  }
  std::vector<MatC> sl(d);
  for (std::size_t p = 0; p < d; ++p) sl[p] = m.slice(p);
  VecC out(dim);
  std::vector<std::size_t> dig(L);
  for (std::size_t f = 0; f < dim; ++f) {
    std::size_t x = f;
    for (std::size_t s = L; s-- > 0;) { dig[s] = x % d; x /= d; }
    MatC prod = sl[dig[0]];
    for (std::size_t s = 1; s < L; ++s) prod = prod * sl[dig[s]];
    out(f) = prod.trace();
  }
  return out;
}

// Smallest block size k <= max_block at which the blocked tensor, read as a
// map from the virtual pair to the k-site physical space, reaches full rank
// D^2 (the injectivity certificate), or nullopt if none does.
inline std::optional<std::size_t> injectivity_block(const Mps& m,
                                                    std::size_t max_block = 4) {
  const std::size_t D = m.D(), d = m.d();
  std::vector<MatC> sl(d);
  for (std::size_t p = 0; p < d; ++p) sl[p] = m.slice(p);
  std::size_t dk = 1;
  for (std::size_t k = 1; k <= max_block; ++k) {
    dk *= d;
    if (dk * D * D > (1u << 20))
      throw mps_error("injectivity_block: blocked map exceeds the size guard");
    MatC M(dk, D * D);
    std::vector<std::size_t> dig(k);
    for (std::size_t f = 0; f < dk; ++f) {
      std::size_t x = f;
      for (std::size_t s = k; s-- > 0;) { dig[s] = x % d; x /= d; }
      MatC prod = sl[dig[0]];
      for (std::size_t s = 1; s < k; ++s) prod = prod * sl[dig[s]];
      for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b) M(f, a * D + b) = prod(a, b);
    }
    Eigen::JacobiSVD<MatC> svd(M);
    const auto& s = svd.singularValues();
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(0) > 0 && s(i) > 1e-10 * s(0)) ++rank;
    if (rank == D * D) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// On-site virtual action:  u . A = V A V^dagger.

// Solves for the unitary V implementing one on-site symmetry operator on the
// virtual space.  Gauge: V is det-normalized, and the residual D-th-root-of-
// unity freedom is spent turning the largest-modulus entry as close to the
// positive real axis as possible.  Throws when the MPS is not symmetric
// under u (no intertwiner) or when the intertwiner is not unique.
inline MatC extract_onsite_symmetry(const Mps& m, const Tensor& u,
                                    double tol = 1e-9) {
  const std::size_t D = m.D(), d = m.d();
  if (u.rank() != 2 || u.shape[0] != d || u.shape[1] != d)
    throw mps_error("extract_onsite_symmetry: operator shape mismatch");
  std::vector<MatC> A(d), B(d, MatC::Zero(D, D));
  for (std::size_t p = 0; p < d; ++p) A[p] = m.slice(p);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q)
      if (u.at({p, q}) != cplx(0.0)) B[p] += u.at({p, q}) * A[q];

  // B^p V = V A^p for all p, as a linear system in vec(V).
  MatC M = MatC::Zero(d * D * D, D * D);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b) {
        std::size_t row = (p * D + a) * D + b;
        for (std::size_t mm = 0; mm < D; ++mm) {
          M(row, mm * D + b) += B[p](a, mm);
          M(row, a * D + mm) -= A[p](mm, b);
        }
      }
  auto null = detail::null_space(M);
  if (null.empty())
    throw mps_error("extract_onsite_symmetry: the MPS is not symmetric under "
                    "the given operator");
  if (null.size() > 1)
    throw mps_error("extract_onsite_symmetry: intertwiner not unique (MPS not "
                    "injective?)");
  MatC V(D, D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) V(a, b) = null[0](a * D + b);

  // Scale to a unitary; reject if the intertwiner cannot be made unitary.
  double scale = std::sqrt((V.adjoint() * V).trace().real() / D);
  if (scale <= 0) throw mps_error("extract_onsite_symmetry: zero intertwiner");
  V /= scale;
  if ((V.adjoint() * V - MatC::Identity(D, D)).norm() > 1e-8)
    throw mps_error("extract_onsite_symmetry: intertwiner is not unitary");

  // Verify the defining relation.
  double res = 0;
  for (std::size_t p = 0; p < d; ++p)
    res = std::max(res, (B[p] - V * A[p] * V.adjoint()).norm());
  if (res > tol)
    throw mps_error("extract_onsite_symmetry: residual " + std::to_string(res));

  // Gauge fixing.
  cplx det = V.determinant();
  V *= std::pow(cplx(1.0) / det, 1.0 / static_cast<double>(D));
  Eigen::Index bi = 0, bj = 0;
  double best = -1;
  for (Eigen::Index i = 0; i < V.rows(); ++i)
    for (Eigen::Index j = 0; j < V.cols(); ++j)
      if (std::abs(V(i, j)) > best + 1e-12) {
        best = std::abs(V(i, j));
        bi = i;
        bj = j;
      }
  std::size_t kbest = 0;
  double rbest = -1e300;
  for (std::size_t k = 0; k < D; ++k) {
    double ang = 2.0 * kPi * k / D;
    double re = (cplx(std::cos(ang), std::sin(ang)) * V(bi, bj)).real();
    if (re > rbest + 1e-12) { rbest = re; kbest = k; }
  }
  double ang = 2.0 * kPi * kbest / D;
  V *= cplx(std::cos(ang), std::sin(ang));
  return V;
}

// ---------------------------------------------------------------------------
// Action tensors for general MPO symmetries.

// Pair (Y_g, Yinv_g) with
//   sum_q T_g[alpha,beta,p,q] A[a,b,q]
//     = sum_{m,n} Y_g[alpha,a,m] A[m,n,p] Yinv_g[n,beta,b],
// Y axes ("g","vin","vout") shape (chi_g, D, D), Yinv axes ("vin","g","vout")
// shape (D, chi_g, D), normalized so that Yinv_g . Y_g = 1_D exactly,
// |Y_g| = sqrt(D), largest-modulus entry of Y_g real positive.
struct ActionTensorSet {
  std::vector<Tensor> Y;
  std::vector<Tensor> Yinv;
  Cochain2 L{1};  // bond symbols, index g * n + h
};

// Residual of the defining single-site relation, allowing the decorated
// source tensor to land on a different target tensor (block-permuting MPS):
//   T_g . src = Y dst Yinv.
inline double action_residual(const Mps& src, const Mps& dst,
                              const MpoGroupRep& rep, int g, const Tensor& Y,
                              const Tensor& Yinv) {
  Tensor lhs = contract(rep.T[g].relabeled({"gl", "gr", "p", "q"}),
                        src.A.relabeled({"vl", "vr", "q"}), {{"q", "q"}});
  // axes: gl, gr, p, vl, vr
  Tensor mid = contract(Y.relabeled({"gl", "vl", "m"}), dst.A.relabeled({"m", "n", "p"}),
                        {{"m", "m"}});
  // axes: gl, vl, n, p
  Tensor rhs = contract(mid, Yinv.relabeled({"n", "gr", "vr"}), {{"n", "n"}});
  // axes: gl, vl, p, gr, vr
  return distance(lhs, rhs.permuted({"gl", "gr", "p", "vl", "vr"}));
}

inline double action_residual(const Mps& m, const MpoGroupRep& rep, int g,
                              const Tensor& Y, const Tensor& Yinv) {
  return action_residual(m, m, rep, g, Y, Yinv);
}

// Deviation of Yinv . Y (contracted over the MPO leg and the middle virtual
// leg) from the identity on the virtual space.
inline double action_orthogonality_residual(const Tensor& Y, const Tensor& Yinv) {
  Tensor prod = contract(Yinv, Y, {{"g", "g"}, {"vout", "vin"}});
  // axes: vin (from Yinv), vout (from Y)
  return distance(prod, identity_tensor(Y.extent("vout"), "vin", "vout"));
}

namespace detail {

// Solve one pair by the two one-sided linear systems
//   S^p Y = Y A^p   and   Yinv S^p = A^p Yinv,
// where S^p[(alpha,a),(beta,b)] = sum_q T_g[alpha,beta,p,q] src[a,b,q] is the
// MPO-decorated source tensor and A^p are the slices of the target tensor
// (src == dst for a symmetric MPS; they differ for block-permuting actions).
// Each system is solved by a null-space computation whose solution must be
// unique up to scale.
inline std::pair<Tensor, Tensor> solve_action_pair(const Mps& src,
                                                   const Mps& dst,
                                                   const MpoGroupRep& rep,
                                                   int g) {
  if (src.D() != dst.D() || src.d() != dst.d())
    throw mps_error("solve_action_pair: source/target shape mismatch");
  const std::size_t D = src.D(), d = src.d(), c = rep.chi[g];
  const std::size_t R = c * D;
  std::vector<MatC> A(d), Asrc(d), S(d, MatC::Zero(R, R));
  for (std::size_t p = 0; p < d; ++p) {
    A[p] = dst.slice(p);
    Asrc[p] = src.slice(p);
  }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q)
      for (std::size_t al = 0; al < c; ++al)
        for (std::size_t be = 0; be < c; ++be) {
          cplx t = rep.T[g].at({al, be, p, q});
          if (t == cplx(0.0)) continue;
          for (std::size_t a = 0; a < D; ++a)
            for (std::size_t b = 0; b < D; ++b)
              S[p](al * D + a, be * D + b) += t * Asrc[q](a, b);
        }

  // Y: (c D) x D.
  MatC MY = MatC::Zero(d * R * D, R * D);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t ra = 0; ra < R; ++ra)
      for (std::size_t mm = 0; mm < D; ++mm) {
        std::size_t row = (p * R + ra) * D + mm;
        for (std::size_t rb = 0; rb < R; ++rb)
          MY(row, rb * D + mm) += S[p](ra, rb);
        for (std::size_t nn = 0; nn < D; ++nn)
          MY(row, ra * D + nn) -= A[p](nn, mm);
      }
  auto ny = detail::null_space(MY);
  if (ny.empty())
    throw mps_error("solve_action_pair: no left action tensor (element " +
                    std::to_string(g) + ")");
  if (ny.size() > 1)
    throw mps_error("solve_action_pair: left action tensor not unique");

  // Yinv: D x (c D).
  MatC MI = MatC::Zero(d * D * R, D * R);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t nn = 0; nn < D; ++nn)
      for (std::size_t rb = 0; rb < R; ++rb) {
        std::size_t row = (p * D + nn) * R + rb;
        for (std::size_t ra = 0; ra < R; ++ra)
          MI(row, nn * R + ra) += S[p](ra, rb);
        for (std::size_t mm = 0; mm < D; ++mm)
          MI(row, mm * R + rb) -= A[p](nn, mm);
      }
  auto ni = detail::null_space(MI);
  if (ni.empty())
    throw mps_error("solve_action_pair: no right action tensor (element " +
                    std::to_string(g) + ")");
  if (ni.size() > 1)
    throw mps_error("solve_action_pair: right action tensor not unique");

  Tensor Y({c, D, D}, {"g", "vin", "vout"});
  for (std::size_t al = 0; al < c; ++al)
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t mm = 0; mm < D; ++mm)
        Y.at({al, a, mm}) = ny[0]((al * D + a) * D + mm);
  Tensor Yi({D, c, D}, {"vin", "g", "vout"});
  for (std::size_t nn = 0; nn < D; ++nn)
    for (std::size_t al = 0; al < c; ++al)
      for (std::size_t b = 0; b < D; ++b)
        Yi.at({nn, al, b}) = ni[0](nn * (c * D) + al * D + b);
  return {Y, Yi};
}

// Fixes the scale and phase conventions of one pair in place:
// Yinv . Y = 1 exactly, |Y| = sqrt(D), largest-modulus entry of Y real
// positive.
inline void normalize_action_pair(Tensor& Y, Tensor& Yi) {
  const std::size_t D = Y.extent("vout");
  Tensor prod = contract(Yi, Y, {{"g", "g"}, {"vout", "vin"}});
  cplx tr(0.0);
  for (std::size_t a = 0; a < D; ++a) tr += prod.at({a, a});
  cplx scale = tr / static_cast<double>(D);
  if (std::abs(scale) < 1e-12)
    throw mps_error("normalize_action_pair: degenerate pair normalization");
  Yi = Yi.scaled(cplx(1.0) / scale);
  if (action_orthogonality_residual(Y, Yi) > 1e-9)
    throw mps_error("normalize_action_pair: orthogonality failed");
  double mag = std::sqrt(static_cast<double>(D)) / Y.norm();
  Y = Y.scaled(mag);
  Yi = Yi.scaled(1.0 / mag);
  cplx ph = detail::phase_fix_factor(Y);
  Y = Y.scaled(ph);
  Yi = Yi.scaled(std::conj(ph));
}

}  // namespace detail

// Solves the action-tensor pair for every group element and the bond symbols
//   Yinv_{gh} . Winv_{g,h} = L(g,h) . (Yinv_g then Yinv_h along the virtual
//   line),
// verifying that every L(g,h) is a pure phase.  Requires strict fusion data.
inline ActionTensorSet solve_action_tensors(const Mps& mps, const FusionData& f,
                                            double tol = 1e-9) {
  const FiniteGroup& G = f.rep.group;
  const int n = static_cast<int>(G.order);
  ActionTensorSet out;
  out.L = Cochain2(G.order);
  for (int g = 0; g < n; ++g) {
    auto [Y, Yi] = detail::solve_action_pair(mps, mps, f.rep, g);
    detail::normalize_action_pair(Y, Yi);
    double res = action_residual(mps, f.rep, g, Y, Yi);
    if (res > tol)
      throw mps_error("solve_action_tensors: relation residual " +
                      std::to_string(res));
    out.Y.push_back(std::move(Y));
    out.Yinv.push_back(std::move(Yi));
  }

  // Bond symbols.
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      int gh = G.mul(g, h);
      // lhs[vin, s, t, vout] = sum_C Yinv_gh[vin, C, vout] Winv_{g,h}[C; s, t]
      Tensor lhs = contract(out.Yinv[gh],
                            f.winv(g, h).relabeled({"gh", "s", "t"}),
                            {{"g", "gh"}});
      lhs = lhs.permuted({"vin", "s", "t", "vout"});
      // rhs[vin, s, t, vout] = sum_m Yinv_g[vin, s, m] Yinv_h[m, t, vout]
      Tensor rhs = contract(out.Yinv[g].relabeled({"vin", "s", "vmid"}),
                            out.Yinv[h].relabeled({"vmid", "t", "vout"}),
                            {{"vmid", "vmid"}});
      rhs = rhs.permuted({"vin", "s", "t", "vout"});
      cplx num(0.0), den(0.0);
      for (std::size_t i = 0; i < lhs.data.size(); ++i) {
        num += std::conj(rhs.data[i]) * lhs.data[i];
        den += std::conj(rhs.data[i]) * rhs.data[i];
      }
      if (std::abs(den) < 1e-14)
        throw mps_error("solve_action_tensors: vanishing bond-symbol reference");
      cplx L = num / den;
      double rres = distance(lhs, rhs.scaled(L)) / std::max(lhs.norm(), 1e-300);
      if (rres > 1e-8)
        throw mps_error("solve_action_tensors: bond relation not proportional "
                        "(residual " + std::to_string(rres) + ")");
      if (std::abs(std::abs(L) - 1.0) > 1e-8)
        throw mps_error("solve_action_tensors: bond symbol not unimodular");
      out.L(g, h) = L;
    }

  // Consistency of the symbols under triple products.
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        cplx lhs = out.L(g, h) * out.L(G.mul(g, h), k);
        cplx rhs = out.L(h, k) * out.L(g, G.mul(h, k));
        if (std::abs(lhs - rhs) > 1e-8)
          throw mps_error("solve_action_tensors: bond symbols violate the "
                          "pair-composition consistency");
      }
  return out;
}

// ---------------------------------------------------------------------------
// The gauged MPS in closed form.

// Bond factor between two neighbouring symmetry assignments (g at the left
// site, h at the right site): the edge carries the block q = g h^-1 and
//   K[vin, e, vout] = sum_{t,a,b} Yinv_g[vin, t, b]
//                       Winv_{q,h}[t; e, a]  Y_h[a, b, vout].
// By the bond-symbol relation this equals  L(q, h) . Yinv_q[vin, e, vout].
inline Tensor bond_factor(const FusionData& f, const ActionTensorSet& acts,
                          int g, int h) {
  const FiniteGroup& G = f.rep.group;
  int q = G.mul(g, G.invert(h));
  Tensor step = contract(acts.Yinv[g], f.winv(q, h).relabeled({"gh", "e", "a"}),
                         {{"g", "gh"}});
  // axes: vin, vout, e, a
  Tensor out = contract(step.relabeled({"vin", "vmid", "e", "a"}),
                        acts.Y[h].relabeled({"a", "vmid", "vout"}),
                        {{"a", "a"}, {"vmid", "vmid"}});
  // axes: vin, e, vout
  return out.permuted({"vin", "e", "vout"});
}

// Alternating gauged chain: the site tensor is the input MPS tensor tensored
// with an identity group register on the virtual leg, and the bond tensor
// carries the gauge-field edge.  Virtual index v = g * D + a.
struct GaugedMps {
  Tensor Atil;  // axes ("l","r","p"), virtual |G| D, physical d
  Tensor B;     // axes ("l","r","p"), virtual |G| D, physical X (edge space)
};

// Builds the closed form from the bond symbols:
//   B[(g,a),(h,b); e in block g h^-1] =
//     (1/|G|) L(g h^-1, h) Yinv_{g h^-1}[a, e, b].
// The 1/|G| per unit cell reproduces the projector normalization of the
// state-gauging map, so the dense alternating chain equals the gauged state
// with no further scaling.
inline GaugedMps gauge_mps(const Mps& mps, const FusionData& f,
                           const ActionTensorSet& acts) {
  if (!f.strict)
    throw mps_error("gauge_mps: fusion data must be in the strict gauge");
  const FiniteGroup& G = f.rep.group;
  const int n = static_cast<int>(G.order);
  const std::size_t D = mps.D(), d = mps.d();
  std::size_t X = 0;
  std::vector<std::size_t> off(n, 0);
  for (int g = 0; g < n; ++g) { off[g] = X; X += f.rep.chi[g]; }
  const std::size_t V = static_cast<std::size_t>(n) * D;

  GaugedMps out;
  out.Atil = Tensor({V, V, d}, {"l", "r", "p"});
  for (int g = 0; g < n; ++g)
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b)
        for (std::size_t p = 0; p < d; ++p)
          out.Atil.at({g * D + a, g * D + b, p}) = mps.A.at({a, b, p});

  out.B = Tensor({V, V, X}, {"l", "r", "p"});
  const double norm = 1.0 / static_cast<double>(n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      int q = G.mul(g, G.invert(h));
      const Tensor& Yi = acts.Yinv[q];
      cplx fac = acts.L(q, h) * norm;
      for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b)
          for (std::size_t e = 0; e < f.rep.chi[q]; ++e)
            out.B.at({g * D + a, h * D + b, off[q] + e}) =
                fac * Yi.at({a, e, b});
    }
  return out;
}

// Dense vector of the alternating chain at length L, laid out exactly like
// the gauged chain Hilbert space: total index m * X^L + e with matter digits
// site-0-most-significant and edge digit j between sites j and j+1.
inline VecC realize_alternating(const GaugedMps& gm, std::size_t L) {
  const std::size_t V = gm.Atil.shape[0], d = gm.Atil.shape[2],
                    X = gm.B.shape[2];
  std::size_t md = 1, gd = 1;
  for (std::size_t i = 0; i < L; ++i) { md *= d; gd *= X; }
  if (md * gd > kGaugeDenseGuard)
    throw mps_error("realize_alternating: size guard");
  std::vector<MatC> As(d, MatC(V, V)), Bs(X, MatC(V, V));
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t a = 0; a < V; ++a)
      for (std::size_t b = 0; b < V; ++b) As[p](a, b) = gm.Atil.at({a, b, p});
  for (std::size_t e = 0; e < X; ++e)
    for (std::size_t a = 0; a < V; ++a)
      for (std::size_t b = 0; b < V; ++b) Bs[e](a, b) = gm.B.at({a, b, e});
  VecC out(md * gd);
  std::vector<std::size_t> pm(L), pe(L);
  for (std::size_t m = 0; m < md; ++m) {
    std::size_t x = m;
    for (std::size_t s = L; s-- > 0;) { pm[s] = x % d; x /= d; }
    // Precompute per-site A slices once per matter index.
    for (std::size_t e = 0; e < gd; ++e) {
      std::size_t y = e;
      for (std::size_t s = L; s-- > 0;) { pe[s] = y % X; y /= X; }
      MatC prod = As[pm[0]] * Bs[pe[0]];
      for (std::size_t s = 1; s < L; ++s) prod = prod * As[pm[s]] * Bs[pe[s]];
      out(m * gd + e) = prod.trace();
    }
  }
  return out;
}

}  // namespace mpog

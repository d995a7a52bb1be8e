#pragma once
// Gauging of a non-anomalous MPO symmetry on a periodic chain:
//  - gauge-field edges carrying the graded space  X = (+)_g C^{chi_g},
//  - local symmetry operators  u_hat_g  acting on (left edge, site, right
//    edge), built from the MPO tensor and the fusion-tensor pair,
//  - commuting per-site projectors and the global projector P,
//  - the state-gauging map  G|psi> = P(|psi> (x) (x)_i |v>),
//  - the operator-gauging map  Gamma[O] = S . E_Lambda[O],
//  - subgroup gauging over a normal subgroup N and the quotient symmetry
//    operators U_hat_g realizing G/N on the gauged state,
//  - an independent brute-force construction of the gauging map that sums
//    the bond-decorated MPO expression directly over group assignments.
//
// Everything here is dense and brute-force on purpose: it is the oracle
// layer against which structural identities are checked at small L.

#include <vector>

#include "fusion.hpp"

namespace mpog {

struct gauge_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense sizes are capped: matter x gauge dimension d^L * X^L must stay below
// this guard for any operator-level construction.
inline constexpr std::size_t kGaugeDenseGuard = 1u << 16;

class GaugeChain {
 public:
  FusionData fusion;
  std::vector<int> sub;  // elements whose blocks live on the edges
  std::size_t L = 0;

  GaugeChain() = default;
  // Pass the subset of elements to gauge (must be a subgroup); an empty list
  // means the full group.
  GaugeChain(FusionData f, std::size_t length, std::vector<int> subgroup = {})
      : fusion(std::move(f)), sub(std::move(subgroup)), L(length) {
    if (L < 2) throw gauge_error("GaugeChain: need at least 2 sites");
    if (!fusion.strict)
      throw gauge_error("GaugeChain: fusion data must be in the strict gauge");
    if (fusion.v.size() == 0)
      throw gauge_error("GaugeChain: unit vector not solved");
    const int n = static_cast<int>(fusion.rep.group.order);
    if (sub.empty())
      for (int g = 0; g < n; ++g) sub.push_back(g);
    if (!is_subgroup(fusion.rep.group, sub))
      throw gauge_error("GaugeChain: edge labels must form a subgroup");
  }

  const FiniteGroup& group() const { return fusion.rep.group; }
  std::size_t d() const { return fusion.rep.phys_dim; }
  bool full_group() const { return sub.size() == group().order; }

  std::size_t edge_dim() const {
    std::size_t X = 0;
    for (int g : sub) X += fusion.rep.chi[g];
    return X;
  }
  // Offset of block g inside the edge space; g must be in sub.
  std::size_t edge_offset(int g) const {
    std::size_t off = 0;
    for (int x : sub) {
      if (x == g) return off;
      off += fusion.rep.chi[x];
    }
    throw gauge_error("edge_offset: element not on the edge");
  }
  bool on_edge(int g) const {
    for (int x : sub)
      if (x == g) return true;
    return false;
  }

  std::size_t matter_dim() const {
    std::size_t m = 1;
    for (std::size_t i = 0; i < L; ++i) m *= d();
    return m;
  }
  std::size_t gauge_dim() const {
    std::size_t m = 1;
    for (std::size_t i = 0; i < L; ++i) m *= edge_dim();
    return m;
  }
  std::size_t total_dim() const { return matter_dim() * gauge_dim(); }

  void check_guard() const {
    if (total_dim() > kGaugeDenseGuard)
      throw gauge_error("GaugeChain: d^L * X^L exceeds the dense size guard");
  }
};

// ---------------------------------------------------------------------------
// Local symmetry operators

// Local operator on  H_edge (x) H_site (x) H_edge  (dimension X*d*X):
//   u_hat_g = sum_{h,k} Winv_{h g^-1, g} (left edge, emitting the g-line)
//             . T_g (site) . W_{g, k} (right edge, absorbing the g-line).
// Block structure: (h, ., k) -> (h g^-1, ., g k).
inline MatC local_symmetry_block(const GaugeChain& c, int g) {
  const FiniteGroup& G = c.group();
  if (!c.on_edge(g))
    throw gauge_error("local_symmetry_block: element not in the gauged set");
  const std::size_t X = c.edge_dim(), d = c.d();
  const std::size_t loc = X * d * X;
  MatC M = MatC::Zero(loc, loc);
  int gi = G.invert(g);
  const std::size_t cg = c.fusion.rep.chi[g];
  for (int h : c.sub) {
    int hg = G.mul(h, gi);
    if (!c.on_edge(hg)) continue;
    const Tensor& Wi = c.fusion.winv(hg, g);  // axes (gh=h, g=hg^-1, h=g-line)
    const std::size_t ch = c.fusion.rep.chi[h], chg = c.fusion.rep.chi[hg];
    for (int k : c.sub) {
      int gk = G.mul(g, k);
      if (!c.on_edge(gk)) continue;
      const Tensor& Wr = c.fusion.w(g, k);  // axes (g=g-line, h=k, gh=gk)
      const std::size_t ck = c.fusion.rep.chi[k], cgk = c.fusion.rep.chi[gk];
      for (std::size_t al = 0; al < ch; ++al)
        for (std::size_t alp = 0; alp < chg; ++alp)
          for (std::size_t s = 0; s < cg; ++s) {
            cplx left = Wi.at({al, alp, s});
            if (left == cplx(0.0)) continue;
            for (std::size_t t = 0; t < cg; ++t)
              for (std::size_t po = 0; po < d; ++po)
                for (std::size_t pi = 0; pi < d; ++pi) {
                  cplx mid = c.fusion.rep.T[g].at({s, t, po, pi});
                  if (mid == cplx(0.0)) continue;
                  for (std::size_t ga = 0; ga < ck; ++ga)
                    for (std::size_t gap = 0; gap < cgk; ++gap) {
                      cplx right = Wr.at({t, ga, gap});
                      if (right == cplx(0.0)) continue;
                      std::size_t row =
                          ((c.edge_offset(hg) + alp) * d + po) * X +
                          c.edge_offset(gk) + gap;
                      std::size_t col =
                          ((c.edge_offset(h) + al) * d + pi) * X +
                          c.edge_offset(k) + ga;
                      M(row, col) += left * mid * right;
                    }
                }
          }
    }
  }
  return M;
}

// Embed a local (edge, site, edge) operator acting at site i into the full
// chain: total index I = m * X^L + e with matter digits m_0..m_{L-1} (site 0
// most significant) and edge digits e_0..e_{L-1} (edge j = [j]_r).
inline MatC embed_local(const GaugeChain& c, const MatC& loc, std::size_t i) {
  c.check_guard();
  const std::size_t X = c.edge_dim(), d = c.d(), L = c.L;
  const std::size_t D = c.total_dim(), Xd = X * d * X;
  const std::size_t el = (i + L - 1) % L, er = i;
  MatC M = MatC::Zero(D, D);
  std::vector<std::size_t> mdig(L), edig(L);
  for (std::size_t I = 0; I < D; ++I) {
    std::size_t m = I / c.gauge_dim(), e = I % c.gauge_dim();
    for (std::size_t j = L; j-- > 0;) { mdig[j] = m % d; m /= d; }
    for (std::size_t j = L; j-- > 0;) { edig[j] = e % X; e /= X; }
    std::size_t col_loc = (edig[el] * d + mdig[i]) * X + edig[er];
    for (std::size_t row_loc = 0; row_loc < Xd; ++row_loc) {
      cplx val = loc(row_loc, col_loc);
      if (val == cplx(0.0)) continue;
      std::size_t b = row_loc % X, rest = row_loc / X;
      std::size_t p = rest % d, a = rest / d;
      // Rebuild the total row index with digits (a, p, b) substituted.
      std::size_t mi = 0, ei = 0;
      for (std::size_t j = 0; j < L; ++j) {
        mi = mi * d + (j == i ? p : mdig[j]);
        ei = ei * X + (j == el ? a : (j == er ? b : edig[j]));
      }
      M(mi * c.gauge_dim() + ei, I) += val;
    }
  }
  return M;
}

inline MatC local_symmetry_op(const GaugeChain& c, int g, std::size_t i) {
  return embed_local(c, local_symmetry_block(c, g), i);
}

// Vector-level application of a local (edge, site, edge) operator at site i;
// avoids materializing the embedded dense matrix.
inline VecC apply_embedded(const GaugeChain& c, const MatC& loc, std::size_t i,
                           const VecC& x) {
  const std::size_t X = c.edge_dim(), d = c.d(), L = c.L;
  const std::size_t D = c.total_dim(), Xd = X * d * X;
  if (static_cast<std::size_t>(x.size()) != D)
    throw gauge_error("apply_embedded: dimension mismatch");
  const std::size_t el = (i + L - 1) % L, er = i;
  VecC out = VecC::Zero(D);
  std::vector<std::size_t> mdig(L), edig(L);
  for (std::size_t I = 0; I < D; ++I) {
    if (x(I) == cplx(0.0)) continue;
    std::size_t m = I / c.gauge_dim(), e = I % c.gauge_dim();
    for (std::size_t j = L; j-- > 0;) { mdig[j] = m % d; m /= d; }
    for (std::size_t j = L; j-- > 0;) { edig[j] = e % X; e /= X; }
    std::size_t col_loc = (edig[el] * d + mdig[i]) * X + edig[er];
    for (std::size_t row_loc = 0; row_loc < Xd; ++row_loc) {
      cplx val = loc(row_loc, col_loc);
      if (val == cplx(0.0)) continue;
      std::size_t b = row_loc % X, rest = row_loc / X;
      std::size_t p = rest % d, a = rest / d;
      std::size_t mi = 0, ei = 0;
      for (std::size_t j = 0; j < L; ++j) {
        mi = mi * d + (j == i ? p : mdig[j]);
        ei = ei * X + (j == el ? a : (j == er ? b : edig[j]));
      }
      out(mi * c.gauge_dim() + ei) += val * x(I);
    }
  }
  return out;
}

inline VecC apply_global_projector(const GaugeChain& c, VecC x) {
  std::vector<MatC> blocks;
  for (int g : c.sub) blocks.push_back(local_symmetry_block(c, g));
  for (std::size_t i = c.L; i-- > 0;) {
    VecC acc = VecC::Zero(x.size());
    for (const auto& b : blocks) acc += apply_embedded(c, b, i, x);
    x = acc / static_cast<double>(c.sub.size());
  }
  return x;
}

// ---------------------------------------------------------------------------
// Projectors and the gauging map

struct CommutationReport {
  int g = 0, gp = 0;
  std::size_t site = 0;
  double residual = 0.0;
};

inline CommutationReport check_neighbor_commutation(const GaugeChain& c, int g,
                                                    int gp, std::size_t i) {
  MatC A = local_symmetry_op(c, g, i);
  MatC B = local_symmetry_op(c, gp, (i + 1) % c.L);
  return {g, gp, i, (A * B - B * A).norm()};
}

inline MatC site_projector(const GaugeChain& c, std::size_t i) {
  MatC P = MatC::Zero(c.total_dim(), c.total_dim());
  for (int g : c.sub) P += local_symmetry_op(c, g, i);
  return P / static_cast<double>(c.sub.size());
}

// P = prod_i P^[i], assembled left to right (order-independence is asserted
// by the tests, not assumed here).
inline MatC global_projector(const GaugeChain& c) {
  c.check_guard();
  MatC P = site_projector(c, 0);
  for (std::size_t i = 1; i < c.L; ++i) P = P * site_projector(c, i);
  return P;
}

// |psi> (x) (x)_i |v>  with v embedded in the identity block of every edge.
inline VecC couple_matter(const GaugeChain& c, const VecC& psi) {
  if (static_cast<std::size_t>(psi.size()) != c.matter_dim())
    throw gauge_error("couple_matter: matter dimension mismatch");
  const std::size_t X = c.edge_dim();
  VecC edge = VecC::Zero(X);
  for (std::size_t s = 0; s < c.fusion.rep.chi[0]; ++s)
    edge(c.edge_offset(0) + s) = c.fusion.v.data[s];
  VecC gauge = VecC::Ones(1);
  for (std::size_t i = 0; i < c.L; ++i) {
    VecC next(gauge.size() * X);
    for (Eigen::Index a = 0; a < gauge.size(); ++a)
      for (std::size_t b = 0; b < X; ++b) next(a * X + b) = gauge(a) * edge(b);
    gauge = next;
  }
  VecC out(c.total_dim());
  for (std::size_t m = 0; m < c.matter_dim(); ++m)
    for (std::size_t e = 0; e < c.gauge_dim(); ++e)
      out(m * c.gauge_dim() + e) = psi(m) * gauge(e);
  return out;
}

struct GaugedState {
  VecC vec;
  bool annihilated = false;
};

inline GaugedState gauge_state(const GaugeChain& c, const VecC& psi,
                               double tol = 1e-9) {
  VecC out = global_projector(c) * couple_matter(c, psi);
  return {out, out.norm() < tol};
}

// The gauging map as a dense matrix  matter -> matter (x) gauge.
inline MatC gauging_map(const GaugeChain& c) {
  MatC C = MatC::Zero(c.total_dim(), c.matter_dim());
  for (std::size_t m = 0; m < c.matter_dim(); ++m) {
    VecC basis = VecC::Zero(c.matter_dim());
    basis(m) = 1.0;
    C.col(m) = couple_matter(c, basis);
  }
  return global_projector(c) * C;
}

// ---------------------------------------------------------------------------
// Operator gauging  Gamma[O] = S . E_Lambda[O]

// O is a full-chain matter operator (d^L x d^L) supported on the contiguous
// segment Lambda = {first, ..., first+len-1} (identity elsewhere); the
// segment determines which edges receive |v><v| and which sites are averaged.
inline MatC gauge_operator(const GaugeChain& c, const MatC& O,
                           std::size_t first, std::size_t len) {
  c.check_guard();
  if (len == 0 || len > c.L || first >= c.L)
    throw gauge_error("gauge_operator: segment out of range");
  if (static_cast<std::size_t>(O.rows()) != c.matter_dim() ||
      static_cast<std::size_t>(O.cols()) != c.matter_dim())
    throw gauge_error("gauge_operator: operator dimension mismatch");
  const std::size_t X = c.edge_dim();
  // Enlarging map: O (x) |v><v| on the edges [i]_r, i in Lambda, identity on
  // the remaining edges.
  VecC edge = VecC::Zero(X);
  for (std::size_t s = 0; s < c.fusion.rep.chi[0]; ++s)
    edge(c.edge_offset(0) + s) = c.fusion.v.data[s];
  std::vector<bool> inseg(c.L, false);
  for (std::size_t j = 0; j < len; ++j) inseg[(first + j) % c.L] = true;
  MatC rho = MatC::Zero(c.gauge_dim(), c.gauge_dim());
  std::vector<std::size_t> rd(c.L), cd(c.L);
  for (std::size_t r = 0; r < c.gauge_dim(); ++r) {
    std::size_t x = r;
    for (std::size_t j = c.L; j-- > 0;) { rd[j] = x % X; x /= X; }
    for (std::size_t q = 0; q < c.gauge_dim(); ++q) {
      std::size_t y = q;
      for (std::size_t j = c.L; j-- > 0;) { cd[j] = y % X; y /= X; }
      cplx val(1.0);
      for (std::size_t j = 0; j < c.L && val != cplx(0.0); ++j)
        val *= inseg[j] ? edge(rd[j]) * std::conj(edge(cd[j]))
                        : cplx(rd[j] == cd[j] ? 1.0 : 0.0);
      rho(r, q) = val;
    }
  }
  MatC E = MatC::Zero(c.total_dim(), c.total_dim());
  for (std::size_t mr = 0; mr < c.matter_dim(); ++mr)
    for (std::size_t mc = 0; mc < c.matter_dim(); ++mc) {
      if (O(mr, mc) == cplx(0.0)) continue;
      for (std::size_t r = 0; r < c.gauge_dim(); ++r)
        for (std::size_t q = 0; q < c.gauge_dim(); ++q) {
          if (rho(r, q) == cplx(0.0)) continue;
          E(mr * c.gauge_dim() + r, mc * c.gauge_dim() + q) +=
              O(mr, mc) * rho(r, q);
        }
    }
  // Symmetrization: per site in Lambda, sum the u_hat conjugations.  The
  // sums are not averaged: the |v><v| edge dressing already suppresses each
  // site's contribution by 1/|G|, so the unnormalized product reproduces the
  // gauged operator exactly.  When Lambda covers the whole ring every edge is
  // dressed and one global redundancy survives, compensated by a single
  // 1/|G| factor.
  for (std::size_t j = 0; j < len; ++j) {
    std::size_t i = (first + j) % c.L;
    MatC acc = MatC::Zero(c.total_dim(), c.total_dim());
    for (int g : c.sub) {
      MatC U = local_symmetry_op(c, g, i);
      MatC Ui = local_symmetry_op(c, c.group().invert(g), i);
      acc += U * E * Ui;
    }
    E = acc;
  }
  if (len == c.L) E /= static_cast<double>(c.sub.size());
  return E;
}

// ---------------------------------------------------------------------------
// Quotient symmetry operators (subgroup chains)

// U_hat_g: an MPO over super-sites (site (x) edge) with bond C^{chi_g}:
// per site, T_g acts on the matter leg and the edge label n is conjugated to
// g n g^-1 through the pair W_{g,n} / Winv_{g n g^-1, g}.
inline MatC quotient_symmetry_op(const GaugeChain& c, int g) {
  c.check_guard();
  if (!is_normal(c.group(), c.sub))
    throw gauge_error("quotient_symmetry_op: gauged set must be normal");
  const FiniteGroup& G = c.group();
  const std::size_t X = c.edge_dim(), d = c.d();
  const std::size_t cg = c.fusion.rep.chi[g];
  const std::size_t sdim = d * X;  // super-site: (phys, edge)
  int gi = G.invert(g);
  // Super-site MPO tensor B[s,t'; (po,eo),(pi,ei)].
  std::vector<MatC> slice(sdim * sdim, MatC::Zero(cg, cg));
  for (int nel : c.sub) {
    int gng = G.mul(G.mul(g, nel), gi);
    if (!c.on_edge(gng))
      throw gauge_error("quotient_symmetry_op: conjugated label left the set");
    const Tensor& Wr = c.fusion.w(g, nel);        // (g-line t, n-edge, gn-line)
    const Tensor& Wl = c.fusion.winv(gng, g);     // (gn-line, gng^-1-edge, g-line)
    const std::size_t cn = c.fusion.rep.chi[nel];
    const std::size_t cgn = c.fusion.rep.chi[G.mul(g, nel)];
    const std::size_t cc = c.fusion.rep.chi[gng];
    for (std::size_t po = 0; po < d; ++po)
      for (std::size_t pi = 0; pi < d; ++pi)
        for (std::size_t ga = 0; ga < cn; ++ga)
          for (std::size_t gap = 0; gap < cc; ++gap) {
            std::size_t ro = po * X + c.edge_offset(gng) + gap;
            std::size_t co = pi * X + c.edge_offset(nel) + ga;
            for (std::size_t s = 0; s < cg; ++s)
              for (std::size_t t = 0; t < cg; ++t) {
                cplx tg = c.fusion.rep.T[g].at({s, t, po, pi});
                if (tg == cplx(0.0)) continue;
                for (std::size_t m = 0; m < cgn; ++m) {
                  cplx val = tg * Wr.at({t, ga, m});
                  if (val == cplx(0.0)) continue;
                  for (std::size_t sp = 0; sp < cg; ++sp)
                    slice[ro * sdim + co](s, sp) += val * Wl.at({m, gap, sp});
                }
              }
          }
  }
  // Trace of the product around the ring; total index I = m * X^L + e, so the
  // super-site digit at site j is (m_j, e_j).
  const std::size_t D = c.total_dim();
  MatC M = MatC::Zero(D, D);
  std::vector<std::size_t> rm(c.L), re(c.L), cm(c.L), ce(c.L);
  for (std::size_t R = 0; R < D; ++R) {
    std::size_t m = R / c.gauge_dim(), e = R % c.gauge_dim();
    for (std::size_t j = c.L; j-- > 0;) { rm[j] = m % d; m /= d; }
    for (std::size_t j = c.L; j-- > 0;) { re[j] = e % X; e /= X; }
    for (std::size_t Q = 0; Q < D; ++Q) {
      std::size_t mm = Q / c.gauge_dim(), ee = Q % c.gauge_dim();
      for (std::size_t j = c.L; j-- > 0;) { cm[j] = mm % d; mm /= d; }
      for (std::size_t j = c.L; j-- > 0;) { ce[j] = ee % X; ee /= X; }
      MatC prod = slice[(rm[0] * X + re[0]) * sdim + cm[0] * X + ce[0]];
      bool zero = prod.isZero(0.0);
      for (std::size_t j = 1; j < c.L && !zero; ++j) {
        prod = prod * slice[(rm[j] * X + re[j]) * sdim + cm[j] * X + ce[j]];
        zero = prod.isZero(0.0);
      }
      if (!zero) M(R, Q) = prod.trace();
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Independent brute-force gauging map

// Sums the bond-decorated expression directly over the group assignments
// {g_i}: per site T_{g_i} on the matter leg, per bond the reverse fusion
// tensor Winv_{g_i g_{i+1}^-1, g_{i+1}} emitting the edge ket, traced around
// the ring, with the projector normalization 1/|G|^L.  No local operators,
// no projectors, no tensor-network machinery: plain loop nests.
inline MatC gauging_map_direct(const FusionData& f, std::size_t L) {
  const FiniteGroup& G = f.rep.group;
  const int n = static_cast<int>(G.order);
  const std::size_t d = f.rep.phys_dim;
  std::size_t X = 0;
  std::vector<std::size_t> off(n, 0);
  for (int g = 0; g < n; ++g) { off[g] = X; X += f.rep.chi[g]; }
  std::size_t md = 1, gd = 1;
  for (std::size_t i = 0; i < L; ++i) { md *= d; gd *= X; }
  if (md * gd > kGaugeDenseGuard)
    throw gauge_error("gauging_map_direct: size guard");

  MatC M = MatC::Zero(md * gd, md);
  std::vector<int> asg(L, 0);
  std::vector<std::size_t> po(L), pi(L), ed(L);
  double norm = 1.0;
  for (std::size_t i = 0; i < L; ++i) norm /= static_cast<double>(n);
  while (true) {
    // One assignment {g_i}: accumulate its contribution entry by entry.
    for (std::size_t mo = 0; mo < md; ++mo) {
      std::size_t x = mo;
      for (std::size_t j = L; j-- > 0;) { po[j] = x % d; x /= d; }
      for (std::size_t mi = 0; mi < md; ++mi) {
        std::size_t y = mi;
        for (std::size_t j = L; j-- > 0;) { pi[j] = y % d; y /= d; }
        for (std::size_t e = 0; e < gd; ++e) {
          std::size_t z = e;
          bool ok = true;
          for (std::size_t j = L; j-- > 0;) { ed[j] = z % X; z /= X; }
          // Edge j must carry the block g_j g_{j+1}^-1.
          std::vector<std::size_t> eloc(L);
          for (std::size_t j = 0; j < L && ok; ++j) {
            int blk = G.mul(asg[j], G.invert(asg[(j + 1) % L]));
            std::size_t lo = off[blk], hi = lo + f.rep.chi[blk];
            if (ed[j] < lo || ed[j] >= hi) ok = false;
            else eloc[j] = ed[j] - lo;
          }
          if (!ok) continue;
          // Trace over the virtual ring: bond index a_j (chi_{g_j}).
          // Factor per site j: T_{g_j}[a_j, t, po_j, pi_j] *
          //   Winv_{g_j g_{j+1}^-1, g_{j+1}}[t; eloc_j, a_{j+1}].
          std::vector<MatC> F(L);
          for (std::size_t j = 0; j < L; ++j) {
            int gj = asg[j], gj1 = asg[(j + 1) % L];
            int blk = G.mul(gj, G.invert(gj1));
            std::size_t cj = f.rep.chi[gj], cj1 = f.rep.chi[gj1];
            MatC fac = MatC::Zero(cj, cj1);
            const Tensor& Wi = f.winv(blk, gj1);
            for (std::size_t a = 0; a < cj; ++a)
              for (std::size_t b = 0; b < cj1; ++b) {
                cplx s(0.0);
                for (std::size_t t = 0; t < cj; ++t)
                  s += f.rep.T[gj].at({a, t, po[j], pi[j]}) *
                       Wi.at({t, eloc[j], b});
                fac(a, b) = s;
              }
            F[j] = fac;
          }
          MatC prod = F[0];
          for (std::size_t j = 1; j < L; ++j) prod = prod * F[j];
          M(mo * gd + e, mi) += norm * prod.trace();
        }
      }
    }
    // Next assignment.
    std::size_t j = 0;
    for (; j < L; ++j) {
      if (++asg[j] < n) break;
      asg[j] = 0;
    }
    if (j == L) break;
  }
  return M;
}

}  // namespace mpog

#pragma once
// Gauging with split edges.  Every lattice bond carries two independent gauge
// legs, one attached to each neighbouring site, so the localized symmetry
// operator at site i acts on its own (left leg, matter site, right leg)
// triple and operators at distinct sites have disjoint supports.  The payoff:
// the localized operators compose exactly as the group for ANY associator,
// including a nontrivial one, because the associator phases collected on the
// two legs cancel.  Provides
//  - the localized operators and their action on split-chain vectors,
//  - the symmetrization (state-gauging) map  G_phi |psi> = P(|psi> (x) |phi>)
//    together with a brute-force closed form for the product gauge state,
//  - the maximally-correlated gauge state |Omega> and its overlap identities,
//  - operator symmetrization compatible with state symmetrization,
//  - the on-site renormalization reducing a pair of neighbouring localized
//    operators to regular-representation edge actions,
//  - block MPS carrying a permutation action on the blocks and their gauged
//    closed forms (alternating bond form and supersite form).

#include <vector>

#include "mps.hpp"

namespace mpog {

struct anomaly_gauging_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// The split-edge chain.

// L matter sites on a ring.  Site i additionally owns two gauge legs, each of
// dimension chi (the total MPO bond space): leg [i]_l to its left and leg
// [i]_r to its right.  Neighbouring legs [i]_r and [i+1]_l sit on the same
// lattice bond but are NOT identified.
//
// Index layout: total = m * chi^{2L} + e with matter digits site-0-most-
// significant and gauge digits ordered ([0]_l, [0]_r, [1]_l, [1]_r, ...).
struct SplitGaugeChain {
  FusionData fusion;  // any gauge, anomalous associator allowed
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
    if (L < 1) throw anomaly_gauging_error("SplitGaugeChain: empty chain");
    if (total_dim() > kGaugeDenseGuard)
      throw anomaly_gauging_error("SplitGaugeChain: size guard exceeded");
  }
};

// ---------------------------------------------------------------------------
// Localized symmetry operators.

// The localized operator for element g on one (left leg, site, right leg)
// triple, as a matrix on C^chi (x) C^d (x) C^chi with row (l * d + p) * chi + r:
//
//   sum_h  Winv_{g,h}[C, s, alpha]  T_g[s, t, po, pi]  W_{g,h}[t, beta, B]
//     |C, po, B><alpha, pi, beta| ,
//
// where alpha, beta run over the SAME block h on both legs and C, B over the
// block gh.  Both legs of one site are rotated coherently; the left leg
// absorbs the associator phase that the right leg emits, which is why the
// composition law  u_g u_h = u_{gh}  holds exactly for any associator.
inline MatC localized_split_op(const FusionData& f, int g) {
  const FiniteGroup& G = f.rep.group;
  const int n = static_cast<int>(G.order);
  const std::size_t d = f.rep.phys_dim, chi = f.rep.total_chi();
  MatC out = MatC::Zero(chi * d * chi, chi * d * chi);
  for (int h = 0; h < n; ++h) {
    const int gh = G.mul(g, h);
    const std::size_t ch = f.rep.chi[h], cg = f.rep.chi[g],
                      cgh = f.rep.chi[gh];
    const std::size_t oh = f.rep.offset(h), ogh = f.rep.offset(gh);
    const Tensor& Wi = f.winv(g, h);  // axes ("gh","g","h")
    const Tensor& W = f.w(g, h);      // axes ("g","h","gh")
    const Tensor& T = f.rep.T[g];     // axes ("l","r","po","pi")
    for (std::size_t C = 0; C < cgh; ++C)
      for (std::size_t s = 0; s < cg; ++s)
        for (std::size_t al = 0; al < ch; ++al) {
          cplx left = Wi.at({C, s, al});
          if (left == cplx(0.0)) continue;
          for (std::size_t t = 0; t < cg; ++t)
            for (std::size_t po = 0; po < d; ++po)
              for (std::size_t pi = 0; pi < d; ++pi) {
                cplx mid = T.at({s, t, po, pi});
                if (mid == cplx(0.0)) continue;
                for (std::size_t be = 0; be < ch; ++be)
                  for (std::size_t B = 0; B < cgh; ++B) {
                    cplx right = W.at({t, be, B});
                    if (right == cplx(0.0)) continue;
                    std::size_t row = ((ogh + C) * d + po) * chi + (ogh + B);
                    std::size_t col = ((oh + al) * d + pi) * chi + (oh + be);
                    out(row, col) += left * mid * right;
                  }
              }
        }
  }
  return out;
}

// Applies a local (left leg, site, right leg) operator at site i to a dense
// split-chain vector.
inline VecC apply_split_local(const SplitGaugeChain& c, const MatC& loc,
                              std::size_t i, const VecC& x) {
  c.check_guard();
  if (i >= c.L) throw anomaly_gauging_error("apply_split_local: site index");
  const std::size_t d = c.d(), chi = c.chi(), gd = c.gauge_dim(),
                    td = c.total_dim();
  if (static_cast<std::size_t>(x.size()) != td)
    throw anomaly_gauging_error("apply_split_local: vector size");
  // Strides of the three touched digits in the total index.
  std::size_t ms = 1;
  for (std::size_t s = i + 1; s < c.L; ++s) ms *= d;
  const std::size_t pstride = ms * gd;
  std::size_t gl = 1;
  for (std::size_t s = 2 * i + 1; s < 2 * c.L; ++s) gl *= chi;
  const std::size_t gr = gl / chi;  // digit 2i+1 is one position less significant
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

// The projector P = prod_i (1/|G|) sum_g u_g^{[i]}; the site factors have
// disjoint supports and commute exactly.
inline VecC apply_split_projector(const SplitGaugeChain& c, VecC x) {
  const int n = static_cast<int>(c.fusion.rep.group.order);
  std::vector<MatC> locs(n);
  for (int g = 0; g < n; ++g) locs[g] = localized_split_op(c.fusion, g);
  for (std::size_t i = 0; i < c.L; ++i) {
    VecC acc = VecC::Zero(x.size());
    for (int g = 0; g < n; ++g) acc += apply_split_local(c, locs[g], i, x);
    x = acc / static_cast<double>(n);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Gauge states and the symmetrization map.

// psi (matter) tensored with phi (gauge): out(m * gd + e) = psi(m) phi(e).
inline VecC couple_split(const SplitGaugeChain& c, const VecC& psi,
                         const VecC& phi) {
  c.check_guard();
  const std::size_t md = c.matter_dim(), gd = c.gauge_dim();
  if (static_cast<std::size_t>(psi.size()) != md ||
      static_cast<std::size_t>(phi.size()) != gd)
    throw anomaly_gauging_error("couple_split: size mismatch");
  VecC out(md * gd);
  for (std::size_t m = 0; m < md; ++m)
    for (std::size_t e = 0; e < gd; ++e) out(m * gd + e) = psi(m) * phi(e);
  return out;
}

// The unit-block vector embedded in one full gauge leg.
inline VecC unit_leg_vector(const FusionData& f) {
  if (f.v.size() == 0)
    throw anomaly_gauging_error("unit_leg_vector: unit vector not solved");
  VecC w = VecC::Zero(f.rep.total_chi());
  const std::size_t oe = f.rep.offset(0);
  for (std::size_t s = 0; s < f.rep.chi[0]; ++s) w(oe + s) = f.v.data[s];
  return w;
}

// |V> : every gauge leg carries the unit-block vector.
inline VecC product_gauge_state(const SplitGaugeChain& c) {
  c.check_guard();
  VecC w = unit_leg_vector(c.fusion);
  const std::size_t chi = c.chi(), gd = c.gauge_dim();
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

// |Omega> : each bond pair ([i]_r, [i+1]_l) carries the maximally correlated
// state (1/sqrt(chi)) sum over equal leg values.
inline VecC omega_gauge_state(const SplitGaugeChain& c) {
  c.check_guard();
  const std::size_t chi = c.chi(), gd = c.gauge_dim();
  const double fac = std::pow(1.0 / std::sqrt(static_cast<double>(chi)),
                              static_cast<double>(c.L));
  VecC out = VecC::Zero(gd);
  std::vector<std::size_t> dig(2 * c.L);
  for (std::size_t e = 0; e < gd; ++e) {
    std::size_t x = e;
    for (std::size_t s = 2 * c.L; s-- > 0;) { dig[s] = x % chi; x /= chi; }
    bool ok = true;
    for (std::size_t i = 0; i < c.L; ++i)
      if (dig[2 * i + 1] != dig[(2 * i + 2) % (2 * c.L)]) { ok = false; break; }
    if (ok) out(e) = fac;
  }
  return out;
}

// G_phi |psi> = P(|psi> (x) |phi>).
inline VecC symmetrize_state(const SplitGaugeChain& c, const VecC& psi,
                             const VecC& phi) {
  return apply_split_projector(c, couple_split(c, psi, phi));
}

// Independent brute-force closed form for phi = |V>:
//   G_V |psi> = sum over per-site elements g_i of
//     (1/|G|)^L  prod_i (T_{g_i})_{alpha_i beta_i}  applied to psi,
// with |alpha_i> on leg [i]_l and |beta_i> on leg [i]_r, both in block g_i.
// The per-site sums are INDEPENDENT: the output is a tensor product of
// single-site maps, which is the sense in which this gauging is trivial.
inline VecC product_gauge_closed_form(const SplitGaugeChain& c,
                                      const VecC& psi) {
  c.check_guard();
  const FiniteGroup& G = c.fusion.rep.group;
  const int n = static_cast<int>(G.order);
  const std::size_t d = c.d(), chi = c.chi(), md = c.matter_dim(),
                    gd = c.gauge_dim();
  if (static_cast<std::size_t>(psi.size()) != md)
    throw anomaly_gauging_error("product_gauge_closed_form: matter size");
  const double fac =
      std::pow(1.0 / static_cast<double>(n), static_cast<double>(c.L));
  VecC out = VecC::Zero(md * gd);
  std::vector<std::size_t> dig(2 * c.L), pm(c.L), pi(c.L);
  std::vector<int> blk(c.L);
  std::vector<std::size_t> al(c.L), be(c.L);
  for (std::size_t e = 0; e < gd; ++e) {
    std::size_t x = e;
    for (std::size_t s = 2 * c.L; s-- > 0;) { dig[s] = x % chi; x /= chi; }
    // Both legs of a site must carry the same block; read off (g_i, a, b).
    bool ok = true;
    for (std::size_t i = 0; i < c.L && ok; ++i) {
      int gl = -1, gr = -1;
      for (int g = 0; g < n; ++g) {
        std::size_t o = c.fusion.rep.offset(g), w = c.fusion.rep.chi[g];
        if (dig[2 * i] >= o && dig[2 * i] < o + w) gl = g;
        if (dig[2 * i + 1] >= o && dig[2 * i + 1] < o + w) gr = g;
      }
      if (gl != gr) { ok = false; break; }
      blk[i] = gl;
      al[i] = dig[2 * i] - c.fusion.rep.offset(gl);
      be[i] = dig[2 * i + 1] - c.fusion.rep.offset(gl);
    }
    if (!ok) continue;
    for (std::size_t m = 0; m < md; ++m) {
      std::size_t y = m;
      for (std::size_t s = c.L; s-- > 0;) { pm[s] = y % d; y /= d; }
      cplx acc(0.0);
      for (std::size_t mi = 0; mi < md; ++mi) {
        if (psi(mi) == cplx(0.0)) continue;
        std::size_t z = mi;
        for (std::size_t s = c.L; s-- > 0;) { pi[s] = z % d; z /= d; }
        cplx amp(1.0);
        for (std::size_t i = 0; i < c.L && amp != cplx(0.0); ++i)
          amp *= c.fusion.rep.T[blk[i]].at({al[i], be[i], pm[i], pi[i]});
        acc += amp * psi(mi);
      }
      out(m * gd + e) = fac * acc;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Omega overlap identities.

// Contracts the gauge part of a split-chain vector with <bra| (entrywise
// conjugated), leaving a matter vector.
inline VecC project_gauge(const SplitGaugeChain& c, const VecC& bra,
                          const VecC& x) {
  const std::size_t md = c.matter_dim(), gd = c.gauge_dim();
  if (static_cast<std::size_t>(bra.size()) != gd ||
      static_cast<std::size_t>(x.size()) != md * gd)
    throw anomaly_gauging_error("project_gauge: size mismatch");
  VecC out = VecC::Zero(md);
  for (std::size_t m = 0; m < md; ++m)
    for (std::size_t e = 0; e < gd; ++e)
      out(m) += std::conj(bra(e)) * x(m * gd + e);
  return out;
}

struct OmegaOverlapReport {
  cplx scale;                       // <Omega| P |Omega> = scale * sum_g U_g
  double proportionality_residual;  // relative deviation from that multiple
};

// Verifies that sandwiching the projector between |Omega> states produces a
// multiple of the summed global symmetry operators, and reports the multiple.
inline OmegaOverlapReport check_omega_overlap(const SplitGaugeChain& c) {
  c.check_guard();
  const int n = static_cast<int>(c.fusion.rep.group.order);
  const std::size_t md = c.matter_dim(), gd = c.gauge_dim();
  VecC omega = omega_gauge_state(c);
  MatC M(md, md);
  for (std::size_t mi = 0; mi < md; ++mi) {
    VecC col = VecC::Zero(md);
    col(mi) = 1.0;
    VecC full = apply_split_projector(c, couple_split(c, col, omega));
    M.col(mi) = project_gauge(c, omega, full);
  }
  MatC S = MatC::Zero(md, md);
  for (int g = 0; g < n; ++g)
    S += to_matrix(realize_dense(c.fusion.rep, g, c.L));
  cplx num(0.0), den(0.0);
  for (std::size_t a = 0; a < md; ++a)
    for (std::size_t b = 0; b < md; ++b) {
      num += std::conj(S(a, b)) * M(a, b);
      den += std::conj(S(a, b)) * S(a, b);
    }
  if (std::abs(den) < 1e-14)
    throw anomaly_gauging_error("check_omega_overlap: vanishing reference");
  OmegaOverlapReport rpt;
  rpt.scale = num / den;
  rpt.proportionality_residual = (M - rpt.scale * S).norm() / S.norm();
  return rpt;
}

// ---------------------------------------------------------------------------
// Operator symmetrization.

// Gamma[O] applied to a split-chain vector for a matter operator O and a
// contiguous site window [first, first+len):
//   Gamma[O] = sum over per-site elements g_i, i in window, of
//     (prod u_{g_i}^{[i]}) . (O (x) prod_i |v><v| on both legs of i) .
//     (prod u_{g_i^-1}^{[i]}).
inline VecC apply_operator_symmetrization(const SplitGaugeChain& c,
                                          const MatC& O, std::size_t first,
                                          std::size_t len, const VecC& x) {
  c.check_guard();
  const FiniteGroup& G = c.fusion.rep.group;
  const int n = static_cast<int>(G.order);
  const std::size_t md = c.matter_dim(), gd = c.gauge_dim(), chi = c.chi();
  if (len < 1 || len > c.L || first >= c.L)
    throw anomaly_gauging_error("apply_operator_symmetrization: window");
  if (static_cast<std::size_t>(O.rows()) != md ||
      static_cast<std::size_t>(O.cols()) != md)
    throw anomaly_gauging_error("apply_operator_symmetrization: operator size");
  std::vector<MatC> locs(n);
  for (int g = 0; g < n; ++g) locs[g] = localized_split_op(c.fusion, g);
  VecC w = unit_leg_vector(c.fusion);

  // Leg projector |v><v| applied to one gauge digit.
  auto leg_project = [&](VecC y, std::size_t digit) {
    std::size_t stride = 1;
    for (std::size_t s = digit + 1; s < 2 * c.L; ++s) stride *= chi;
    VecC out = VecC::Zero(y.size());
    for (std::size_t I = 0; I < static_cast<std::size_t>(y.size()); ++I) {
      if (y(I) == cplx(0.0)) continue;
      const std::size_t v = (I / stride) % chi;
      if (std::conj(w(v)) == cplx(0.0)) continue;
      const std::size_t base = I - v * stride;
      const cplx amp = std::conj(w(v)) * y(I);
      for (std::size_t v2 = 0; v2 < chi; ++v2)
        if (w(v2) != cplx(0.0)) out(base + v2 * stride) += w(v2) * amp;
    }
    return out;
  };
  auto apply_matter = [&](const MatC& A, const VecC& y) {
    VecC out = VecC::Zero(y.size());
    for (std::size_t mi = 0; mi < md; ++mi)
      for (std::size_t e = 0; e < gd; ++e) {
        cplx v = y(mi * gd + e);
        if (v == cplx(0.0)) continue;
        for (std::size_t mo = 0; mo < md; ++mo)
          if (A(mo, mi) != cplx(0.0)) out(mo * gd + e) += A(mo, mi) * v;
      }
    return out;
  };

  std::size_t terms = 1;
  for (std::size_t s = 0; s < len; ++s) terms *= n;
  VecC out = VecC::Zero(x.size());
  std::vector<int> gi(len);
  for (std::size_t t = 0; t < terms; ++t) {
    std::size_t z = t;
    for (std::size_t s = 0; s < len; ++s) { gi[s] = static_cast<int>(z % n); z /= n; }
    VecC y = x;
    for (std::size_t s = 0; s < len; ++s)
      y = apply_split_local(c, locs[G.invert(gi[s])], first + s, y);
    for (std::size_t s = 0; s < len; ++s) {
      y = leg_project(y, 2 * (first + s));
      y = leg_project(y, 2 * (first + s) + 1);
    }
    y = apply_matter(O, y);
    for (std::size_t s = 0; s < len; ++s)
      y = apply_split_local(c, locs[gi[s]], first + s, y);
    out += y;
  }
  return out;
}

// ---------------------------------------------------------------------------
// On-site renormalization.

// For an on-site symmetry (every block one-dimensional), a pair of
// neighbouring localized operators reduces to independent regular-
// representation actions on the surviving edge legs once the bond pair
// between them is projected out: close both legs of the inner bond with the
// unnormalized uniform group-basis sum; the two outer legs survive as the
// renormalized edges.  The reduced operator must equal
//   L_g (x) u_g (x) u_g (x) L_g
// with L_g the left regular representation.  Returns the deviation.
inline double renormalized_pair_residual(const FusionData& f, int g) {
  const FiniteGroup& G = f.rep.group;
  const int n = static_cast<int>(G.order);
  for (auto cdim : f.rep.chi)
    if (cdim != 1)
      throw anomaly_gauging_error(
          "renormalized_pair_residual: on-site symmetry required");
  const std::size_t d = f.rep.phys_dim, chi = f.rep.total_chi();
  MatC loc = localized_split_op(f, g);  // chi d chi
  // Reduced operator on (left leg, two matter sites, right leg): contract the
  // inner legs ([0]_r of the first factor, [1]_l of the second) with the
  // uniform sum on rows and columns.
  const std::size_t rd = chi * d * d * chi;
  MatC red = MatC::Zero(rd, rd);
  for (std::size_t C = 0; C < chi; ++C)
    for (std::size_t p0 = 0; p0 < d; ++p0)
      for (std::size_t p1 = 0; p1 < d; ++p1)
        for (std::size_t B = 0; B < chi; ++B)
          for (std::size_t al = 0; al < chi; ++al)
            for (std::size_t q0 = 0; q0 < d; ++q0)
              for (std::size_t q1 = 0; q1 < d; ++q1)
                for (std::size_t be = 0; be < chi; ++be) {
                  cplx acc(0.0);
                  for (std::size_t a = 0; a < chi; ++a)
                    for (std::size_t b = 0; b < chi; ++b)
                      for (std::size_t a2 = 0; a2 < chi; ++a2)
                        for (std::size_t b2 = 0; b2 < chi; ++b2)
                          acc += loc((C * d + p0) * chi + a,
                                     (al * d + q0) * chi + b) *
                                 loc((a2 * d + p1) * chi + B,
                                     (b2 * d + q1) * chi + be);
                  red(((C * d + p0) * d + p1) * chi + B,
                      ((al * d + q0) * d + q1) * chi + be) = acc;
                }
  MatC ref = MatC::Zero(rd, rd);
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (std::size_t p0 = 0; p0 < d; ++p0)
        for (std::size_t q0 = 0; q0 < d; ++q0)
          for (std::size_t p1 = 0; p1 < d; ++p1)
            for (std::size_t q1 = 0; q1 < d; ++q1) {
              cplx v = f.rep.T[g].at({0, 0, p0, q0}) *
                       f.rep.T[g].at({0, 0, p1, q1});
              if (v == cplx(0.0)) continue;
              std::size_t ro = ((static_cast<std::size_t>(G.mul(g, h)) * d +
                                 p0) * d + p1) * chi + G.mul(g, k);
              std::size_t co =
                  ((static_cast<std::size_t>(h) * d + q0) * d + q1) * chi + k;
              ref(ro, co) += v;
            }
  return (red - ref).norm();
}

// ---------------------------------------------------------------------------
// Block MPS with a permutation symmetry action.

// A family of MPS tensors A_x (all the same D and d) such that the global
// symmetry permutes the realized states:  U_g |psi_{A_x}> = |psi_{A_{g.x}}>.
// Per pair (g, x) the action tensors intertwine block x into block g.x:
//   T_g . A_x = Y^{(g,x)} A_{g.x} Yinv^{(g,x)}.
struct BlockActionSet {
  std::vector<std::vector<Tensor>> Y;     // [g][x], axes ("g","vin","vout")
  std::vector<std::vector<Tensor>> Yinv;  // [g][x], axes ("vin","g","vout")
  std::vector<std::vector<int>> act;      // act[g][x] = g.x
};

inline BlockActionSet solve_block_actions(const std::vector<Mps>& blocks,
                                          const MpoGroupRep& rep,
                                          const std::vector<std::vector<int>>& act,
                                          double tol = 1e-9) {
  const int n = static_cast<int>(rep.group.order);
  const std::size_t nb = blocks.size();
  if (act.size() != static_cast<std::size_t>(n))
    throw anomaly_gauging_error("solve_block_actions: action table size");
  BlockActionSet out;
  out.act = act;
  out.Y.resize(n);
  out.Yinv.resize(n);
  for (int g = 0; g < n; ++g) {
    if (act[g].size() != nb)
      throw anomaly_gauging_error("solve_block_actions: action table size");
    for (std::size_t x = 0; x < nb; ++x) {
      const Mps& src = blocks[x];
      const Mps& dst = blocks[act[g][x]];
      auto [Y, Yi] = detail::solve_action_pair(src, dst, rep, g);
      detail::normalize_action_pair(Y, Yi);
      double res = action_residual(src, dst, rep, g, Y, Yi);
      if (res > tol)
        throw anomaly_gauging_error("solve_block_actions: relation residual " +
                                    std::to_string(res));
      out.Y[g].push_back(std::move(Y));
      out.Yinv[g].push_back(std::move(Yi));
    }
  }
  return out;
}

// Gauged block MPS in alternating form: site tensor with a group register on
// the virtual leg (index v = g * D + a, the site then carries A_{g.x}) and a
// bond tensor whose physical leg is the PAIR of gauge legs ([i]_r, [i+1]_l),
// index e_r * chi + e_l:
//   B[(g,a),(h,b); (off_g + beta, off_h + alpha)] =
//     (1/|G|) sum_s Yinv^{(g,x)}[a, beta, s] Y^{(h,x)}[alpha, s, b].
struct SplitGaugedMps {
  Tensor Atil;  // axes ("l","r","p"), virtual |G| D, physical d
  Tensor B;     // axes ("l","r","p"), virtual |G| D, physical chi^2
};

inline SplitGaugedMps split_gauged_mps(const std::vector<Mps>& blocks,
                                       const FusionData& f,
                                       const BlockActionSet& acts, int x) {
  const FiniteGroup& G = f.rep.group;
  const int n = static_cast<int>(G.order);
  const std::size_t D = blocks[0].D(), d = blocks[0].d(),
                    chi = f.rep.total_chi();
  const std::size_t V = static_cast<std::size_t>(n) * D;
  SplitGaugedMps out;
  out.Atil = Tensor({V, V, d}, {"l", "r", "p"});
  for (int g = 0; g < n; ++g) {
    const Tensor& A = blocks[acts.act[g][x]].A;
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b)
        for (std::size_t p = 0; p < d; ++p)
          out.Atil.at({g * D + a, g * D + b, p}) = A.at({a, b, p});
  }
  out.B = Tensor({V, V, chi * chi}, {"l", "r", "p"});
  const double norm = 1.0 / static_cast<double>(n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const Tensor& Yi = acts.Yinv[g][x];
      const Tensor& Y = acts.Y[h][x];
      const std::size_t og = f.rep.offset(g), oh = f.rep.offset(h);
      for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b)
          for (std::size_t be = 0; be < f.rep.chi[g]; ++be)
            for (std::size_t al = 0; al < f.rep.chi[h]; ++al) {
              cplx acc(0.0);
              for (std::size_t s = 0; s < D; ++s)
                acc += Yi.at({a, be, s}) * Y.at({al, s, b});
              out.B.at({g * D + a, h * D + b,
                        (og + be) * chi + (oh + al)}) = norm * acc;
            }
    }
  return out;
}

// Dense split-chain vector of the alternating form, laid out like the
// SplitGaugeChain: bond tensor i supplies gauge digits (2i+1, 2i+2 mod 2L).
inline VecC realize_split_alternating(const SplitGaugeChain& c,
                                      const SplitGaugedMps& gm) {
  c.check_guard();
  const std::size_t V = gm.Atil.shape[0], d = gm.Atil.shape[2], chi = c.chi();
  const std::size_t md = c.matter_dim(), gd = c.gauge_dim();
  if (gm.B.shape[2] != chi * chi || d != c.d())
    throw anomaly_gauging_error("realize_split_alternating: shape mismatch");
  std::vector<MatC> As(d, MatC(V, V)), Bs(chi * chi, MatC(V, V));
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t a = 0; a < V; ++a)
      for (std::size_t b = 0; b < V; ++b) As[p](a, b) = gm.Atil.at({a, b, p});
  for (std::size_t e = 0; e < chi * chi; ++e)
    for (std::size_t a = 0; a < V; ++a)
      for (std::size_t b = 0; b < V; ++b) Bs[e](a, b) = gm.B.at({a, b, e});
  VecC out(md * gd);
  std::vector<std::size_t> pm(c.L), dig(2 * c.L);
  for (std::size_t m = 0; m < md; ++m) {
    std::size_t x = m;
    for (std::size_t s = c.L; s-- > 0;) { pm[s] = x % d; x /= d; }
    for (std::size_t e = 0; e < gd; ++e) {
      std::size_t y = e;
      for (std::size_t s = 2 * c.L; s-- > 0;) { dig[s] = y % chi; y /= chi; }
      MatC prod = MatC::Identity(V, V);
      for (std::size_t i = 0; i < c.L; ++i) {
        const std::size_t er = dig[2 * i + 1];
        const std::size_t el = dig[(2 * i + 2) % (2 * c.L)];
        prod = prod * As[pm[i]] * Bs[er * chi + el];
      }
      out(m * gd + e) = prod.trace();
    }
  }
  return out;
}

// Gauged block MPS in supersite form: one tensor per site whose physical leg
// is the triple ([i]_l, matter, [i]_r), index (e_l * d + p) * chi + e_r, and
// whose virtual leg is the original block-x virtual space:
//   C[s, t; (off_g + alpha) d + p) chi + off_g + beta] =
//     (1/|G|) sum_{a,b} Y^{(g,x)}[alpha, s, a] A_{g.x}[a, b, p]
//                       Yinv^{(g,x)}[b, beta, t].
inline Tensor supersite_tensor(const std::vector<Mps>& blocks,
                               const FusionData& f, const BlockActionSet& acts,
                               int x) {
  const FiniteGroup& G = f.rep.group;
  const int n = static_cast<int>(G.order);
  const std::size_t D = blocks[0].D(), d = blocks[0].d(),
                    chi = f.rep.total_chi();
  Tensor out({D, D, chi * d * chi}, {"l", "r", "p"});
  const double norm = 1.0 / static_cast<double>(n);
  for (int g = 0; g < n; ++g) {
    const Tensor& Y = acts.Y[g][x];
    const Tensor& Yi = acts.Yinv[g][x];
    const Tensor& A = blocks[acts.act[g][x]].A;
    const std::size_t og = f.rep.offset(g);
    for (std::size_t s = 0; s < D; ++s)
      for (std::size_t t = 0; t < D; ++t)
        for (std::size_t al = 0; al < f.rep.chi[g]; ++al)
          for (std::size_t be = 0; be < f.rep.chi[g]; ++be)
            for (std::size_t p = 0; p < d; ++p) {
              cplx acc(0.0);
              for (std::size_t a = 0; a < D; ++a)
                for (std::size_t b = 0; b < D; ++b)
                  acc += Y.at({al, s, a}) * A.at({a, b, p}) * Yi.at({b, be, t});
              out.at({s, t, ((og + al) * d + p) * chi + (og + be)}) +=
                  norm * acc;
            }
  }
  return out;
}

// Dense split-chain vector of the supersite form: site i supplies matter
// digit i and gauge digits (2i, 2i+1).
inline VecC realize_supersite(const SplitGaugeChain& c, const Tensor& C) {
  c.check_guard();
  const std::size_t D = C.shape[0], d = c.d(), chi = c.chi();
  const std::size_t md = c.matter_dim(), gd = c.gauge_dim();
  if (C.shape[2] != chi * d * chi)
    throw anomaly_gauging_error("realize_supersite: shape mismatch");
  VecC out(md * gd);
  std::vector<std::size_t> pm(c.L), dig(2 * c.L);
  for (std::size_t m = 0; m < md; ++m) {
    std::size_t x = m;
    for (std::size_t s = c.L; s-- > 0;) { pm[s] = x % d; x /= d; }
    for (std::size_t e = 0; e < gd; ++e) {
      std::size_t y = e;
      for (std::size_t s = 2 * c.L; s-- > 0;) { dig[s] = y % chi; y /= chi; }
      MatC prod = MatC::Identity(D, D);
      for (std::size_t i = 0; i < c.L; ++i) {
        MatC sl(D, D);
        const std::size_t phys = (dig[2 * i] * d + pm[i]) * chi + dig[2 * i + 1];
        for (std::size_t a = 0; a < D; ++a)
          for (std::size_t b = 0; b < D; ++b) sl(a, b) = C.at({a, b, phys});
        prod = prod * sl;
      }
      out(m * gd + e) = prod.trace();
    }
  }
  return out;
}

}  // namespace mpog

// Acceptance gate: one pass/fail line per criterion, covering the full
// pipeline at desk scale.  Every dense comparison uses independently coded
// oracles (Kronecker powers, direct assignment sums, per-configuration
// closed forms) against the fusion-tensor pipeline.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mpog/anomaly.hpp"
#include "mpog/category.hpp"
#include "mpog/gauging.hpp"
#include "mpog/mps.hpp"

using namespace mpog;

namespace {

int g_failures = 0;

void run(int id, const std::string& name,
         const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  try {
    body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL",
              id, name.c_str(), secs, detail.empty() ? "" : " -- ",
              detail.c_str());
  if (!ok) ++g_failures;
}

struct check_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw check_error(msg);
}

void require_lt(double val, double tol, const std::string& msg) {
  if (!(val < tol))
    throw check_error(msg + " (residual " + std::to_string(val) +
                      " >= " + std::to_string(tol) + ")");
}

// --- Fixtures ---------------------------------------------------------------

struct OnsiteFixture {
  std::string name;
  FiniteGroup G;
  std::vector<Tensor> u;
};

std::vector<OnsiteFixture> onsite_fixtures() {
  std::vector<OnsiteFixture> out;
  out.push_back({"Z2-diag", FiniteGroup::cyclic(2), fixtures::z2_diag_rep()});
  out.push_back({"Z3-char", FiniteGroup::cyclic(3), fixtures::zn_char_rep(3)});
  {
    FiniteGroup G = FiniteGroup::cyclic(4);
    out.push_back({"Z4-regular", G, fixtures::regular_rep(G)});
  }
  {
    FiniteGroup G = FiniteGroup::symmetric3();
    out.push_back({"S3-regular", G, fixtures::regular_rep(G)});
  }
  return out;
}

MpoGroupRep anomalous_z2() {
  return build_anomalous_mpo(FiniteGroup::cyclic(2), cyclic_cocycle(2, 1));
}

FusionData strict_fusion(const MpoGroupRep& rep) {
  FusionData f = gauge_fix_strict(solve_all_fusion(rep));
  solve_unit_vector(f);
  return f;
}

MatC dense_op(const MpoGroupRep& rep, int g, std::size_t L) {
  return to_matrix(realize_dense(rep, g, L));
}

VecC random_vec(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  VecC v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = cplx(nd(gen), nd(gen));
  return v;
}

// Symmetric injective MPS via twisted group averaging (same construction as
// the MPS suite): u_g . A = V_g A V_g^dagger exactly.
Mps symmetric_mps(const FiniteGroup& G, const std::vector<Tensor>& u,
                  const std::vector<MatC>& V, unsigned seed) {
  const std::size_t d = u[0].shape[0];
  const std::size_t D = static_cast<std::size_t>(V[0].rows());
  const int n = static_cast<int>(G.order);
  for (unsigned attempt = 0; attempt < 16; ++attempt) {
    std::mt19937 rng(seed + 97 * attempt);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<MatC> A0(d, MatC(D, D));
    for (std::size_t q = 0; q < d; ++q)
      for (std::size_t a = 0; a < D; ++a)
        for (std::size_t b = 0; b < D; ++b)
          A0[q](a, b) = cplx(dist(rng), dist(rng));
    std::vector<MatC> A(d, MatC::Zero(D, D));
    for (int g = 0; g < n; ++g)
      for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q) {
          cplx c = u[g].at({p, q});
          if (c != cplx(0.0))
            A[p] +=
                (c / static_cast<double>(n)) * V[g].adjoint() * A0[q] * V[g];
        }
    double worst = 0;
    for (int g = 0; g < n; ++g)
      for (std::size_t p = 0; p < d; ++p) {
        MatC lhs = MatC::Zero(D, D);
        for (std::size_t q = 0; q < d; ++q) {
          cplx c = u[g].at({p, q});
          if (c != cplx(0.0)) lhs += c * A[q];
        }
        worst = std::max(worst, (lhs - V[g] * A[p] * V[g].adjoint()).norm());
      }
    if (worst > 1e-10) continue;
    Tensor t({D, D, d}, {"l", "r", "p"});
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b)
        for (std::size_t p = 0; p < d; ++p) t.at({a, b, p}) = A[p](a, b);
    Mps m(t);
    if (injectivity_block(m, 3)) return m;
  }
  throw check_error("symmetric_mps: no injective symmetric sample");
}

MatC pauli_x() {
  MatC m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
MatC pauli_z() {
  MatC m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
FiniteGroup z2xz2() {
  std::vector<std::vector<int>> tab(4, std::vector<int>(4));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) tab[a][b] = a ^ b;
  return FiniteGroup::from_table(tab, {"e", "x", "z", "xz"});
}
std::vector<MatC> pauli_projective() {
  return {MatC::Identity(2, 2), pauli_x(), pauli_z(), pauli_x() * pauli_z()};
}
std::vector<Tensor> pauli_pair_rep() {
  std::vector<Tensor> u;
  for (const auto& p : pauli_projective()) {
    MatC m = fixtures::kron(p, p.conjugate());
    Tensor t({4, 4}, {"po", "pi"});
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) t.at({i, j}) = m(i, j);
    u.push_back(std::move(t));
  }
  return u;
}
std::vector<MatC> shift_rep(std::size_t n) {
  std::vector<MatC> V;
  for (std::size_t g = 0; g < n; ++g) {
    MatC m = MatC::Zero(n, n);
    for (std::size_t j = 0; j < n; ++j) m((j + g) % n, j) = 1.0;
    V.push_back(std::move(m));
  }
  return V;
}

// Golden-ratio height category fixture (same as the category suite).
constexpr double kPhi = 1.6180339887498948482;

CategoryMpoRep fib_rep() {
  std::vector<int> N(8, 0);
  auto set = [&](int a, int b, int c) { N[(a * 2 + b) * 2 + c] = 1; };
  set(0, 0, 0);
  set(0, 1, 1);
  set(1, 0, 1);
  set(1, 1, 0);
  set(1, 1, 1);
  CategoryMpoRep rep;
  rep.cat = validate_category(2, N, {0, 1});
  rep.phys_dim = 2;
  rep.chi.resize(2);
  rep.T.resize(2);
  auto F = [&](int a, int b, int c, int d, int e, int f) -> double {
    if (!rep.cat.n(a, b, e) || !rep.cat.n(e, c, d) || !rep.cat.n(b, c, f) ||
        !rep.cat.n(a, f, d))
      return 0.0;
    if (a == 1 && b == 1 && c == 1 && d == 1) {
      const double m[2][2] = {{1.0 / kPhi, 1.0 / std::sqrt(kPhi)},
                              {1.0 / std::sqrt(kPhi), -1.0 / kPhi}};
      return m[e][f];
    }
    return 1.0;
  };
  for (int a = 0; a < 2; ++a) {
    std::vector<std::pair<int, int>> basis;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        if (rep.cat.n(a, x, y)) basis.emplace_back(x, y);
    const std::size_t c = basis.size();
    rep.chi[a] = c;
    Tensor T({c, c, 2, 2}, {"l", "r", "po", "pi"});
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        auto [x, y] = basis[i];
        auto [x2, y2] = basis[j];
        T.at({i, j, static_cast<std::size_t>(y),
              static_cast<std::size_t>(x)}) = F(a, x, 1, y2, y, x2);
      }
    rep.T[a] = std::move(T);
  }
  return rep;
}

// --- Criteria ---------------------------------------------------------------

void criterion1_group_law() {
  std::vector<MpoGroupRep> reps;
  for (const auto& fx : onsite_fixtures())
    reps.push_back(build_onsite_mpo(fx.G, fx.u));
  reps.push_back(anomalous_z2());
  for (const auto& rep : reps)
    for (std::size_t L : {2u, 3u}) {
      std::size_t dim = 1;
      bool skip = false;
      for (std::size_t i = 0; i < L; ++i) {
        dim *= rep.phys_dim;
        if (dim > 512) skip = true;
      }
      if (skip) continue;
      GroupLawReport r = verify_group_law(rep, L, 1e-9);
      require_lt(r.max_residual, 1e-9,
                 "group law at L=" + std::to_string(L));
    }
}

void criterion2_fusion_solve() {
  std::vector<MpoGroupRep> reps;
  for (const auto& fx : onsite_fixtures())
    reps.push_back(build_onsite_mpo(fx.G, fx.u));
  reps.push_back(anomalous_z2());
  for (const auto& rep : reps) {
    FusionData f = solve_all_fusion(rep);
    const int n = static_cast<int>(rep.group.order);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h) {
        require_lt(zipper_residual(rep, f.w(g, h), g, h), 1e-9, "zipper");
        require_lt(zipper_residual_inv(rep, f.winv(g, h), g, h), 1e-9,
                   "reverse zipper");
        require_lt(orthogonality_residual(f.winv(g, h), f.w(g, h)), 1e-9,
                   "orthogonality");
      }
  }
}

void criterion3_cocycle_pipeline() {
  // On-site fixtures extract the trivial associator.
  for (const auto& fx : onsite_fixtures()) {
    FusionData f = solve_all_fusion(build_onsite_mpo(fx.G, fx.u));
    extract_3cocycle(f);
    const int n = static_cast<int>(fx.G.order);
    FusionData fs = gauge_fix_strict(f);  // throws if class nontrivial
    double worst = 0;
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k)
          worst = std::max(worst, std::abs(fs.omega(g, h, k) - cplx(1.0)));
    require_lt(worst, 1e-9, fx.name + ": strict-gauge associator");
  }
  // Anomalous fixture: certified nontrivial.
  {
    FusionData f = solve_all_fusion(anomalous_z2());
    extract_3cocycle(f);
    require(check_cocycle3(f.rep.group, f.omega, 1e-8),
            "anomalous associator violates the cocycle condition");
    require(!coboundary_trivialize(f.rep.group, f.omega).has_value(),
            "anomalous class unexpectedly trivializes");
  }
  // Coboundary scrambling: rescaling W_{g,h} by beta(g,h) shifts the
  // extracted associator by exactly the coboundary of beta.
  {
    FiniteGroup G = FiniteGroup::cyclic(3);
    FusionData f = solve_all_fusion(build_onsite_mpo(G, fixtures::zn_char_rep(3)));
    extract_3cocycle(f);
    Cocycle3 before = f.omega;
    Cochain2 beta(3);
    std::mt19937 gen(5);
    for (int g = 0; g < 3; ++g)
      for (int h = 0; h < 3; ++h) {
        int r = static_cast<int>(gen() % 6);
        double ang = 2.0 * kPi * r / 6.0;
        beta(g, h) = cplx(std::cos(ang), std::sin(ang));
      }
    FusionData fs = f;
    for (int g = 0; g < 3; ++g)
      for (int h = 0; h < 3; ++h) {
        std::size_t idx = static_cast<std::size_t>(g) * 3 + h;
        fs.W[idx] = fs.W[idx].scaled(beta(g, h));
        fs.Winv[idx] = fs.Winv[idx].scaled(cplx(1.0) / beta(g, h));
      }
    extract_3cocycle(fs);
    Cocycle3 shift = cocycle_ratio(fs.omega, before);
    // Rescaling W by beta shifts the associator by the inverse coboundary
    // (the same orientation the strict-gauge trivializer is solved against).
    Cocycle3 expect = coboundary_of(G, beta);
    double worst = 0;
    for (std::size_t i = 0; i < shift.values.size(); ++i)
      worst = std::max(
          worst, std::abs(shift.values[i] * expect.values[i] - cplx(1.0)));
    require_lt(worst, 1e-8, "coboundary scrambling shift");
  }
}

void criterion4_local_operators() {
  for (const auto& fx : onsite_fixtures()) {
    FusionData f = strict_fusion(build_onsite_mpo(fx.G, fx.u));
    GaugeChain c(f, 2);
    const int n = static_cast<int>(fx.G.order);
    std::vector<MatC> loc(n);
    for (int g = 0; g < n; ++g) loc[g] = local_symmetry_block(c, g);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h) {
        require_lt((loc[g] * loc[h] - loc[fx.G.mul(g, h)]).norm(), 1e-9,
                   fx.name + ": local group law");
        require_lt(check_neighbor_commutation(c, g, h, 0).residual, 1e-9,
                   fx.name + ": neighbor commutation");
      }
    // On-site reduction: right-regular (x) u_g (x) left-regular.
    const std::size_t d = fx.u[0].shape[0], X = fx.G.order;
    for (int g = 0; g < n; ++g) {
      MatC ref = MatC::Zero(X * d * X, X * d * X);
      int gi = fx.G.invert(g);
      for (std::size_t a = 0; a < X; ++a)
        for (std::size_t p = 0; p < d; ++p)
          for (std::size_t pp = 0; pp < d; ++pp)
            for (std::size_t b = 0; b < X; ++b) {
              std::size_t ap = fx.G.mul(static_cast<int>(a), gi);
              std::size_t bp = fx.G.mul(g, static_cast<int>(b));
              ref((ap * d + pp) * X + bp, (a * d + p) * X + b) =
                  fx.u[g].at({pp, p});
            }
      require_lt((loc[g] - ref).norm(), 1e-10,
                 fx.name + ": regular-edge reduction");
    }
  }
}

void criterion5_gauging_map() {
  struct Case {
    FiniteGroup G;
    std::vector<Tensor> u;
  };
  std::vector<Case> cases = {
      {FiniteGroup::cyclic(2), fixtures::z2_diag_rep()},
      {FiniteGroup::cyclic(3), fixtures::zn_char_rep(3)}};
  for (const auto& cs : cases) {
    FusionData f = strict_fusion(build_onsite_mpo(cs.G, cs.u));
    GaugeChain c(f, 3);
    MatC P = global_projector(c);
    require_lt((P * P - P).norm(), 1e-9, "projector idempotent");
    // Order independence: reverse site order.
    MatC Prev = site_projector(c, c.L - 1);
    for (std::size_t i = c.L - 1; i-- > 0;) Prev = Prev * site_projector(c, i);
    require_lt((P - Prev).norm(), 1e-9, "projector order independence");
    const int n = static_cast<int>(cs.G.order);
    VecC psi = random_vec(c.matter_dim(), 31);
    // Symmetrize the input so the gauged state is nonzero.
    VecC sym = VecC::Zero(psi.size());
    for (int g = 0; g < n; ++g) sym += dense_op(f.rep, g, 3) * psi;
    GaugedState gs = gauge_state(c, sym);
    require(!gs.annihilated, "symmetric state annihilated");
    for (int g = 0; g < n; ++g)
      for (std::size_t i = 0; i < c.L; ++i)
        require_lt((local_symmetry_op(c, g, i) * gs.vec - gs.vec).norm(),
                   1e-9 * gs.vec.norm(), "local invariance of gauged state");
    MatC Gm = gauging_map(c);
    for (int g = 0; g < n; ++g)
      require_lt((Gm * dense_op(f.rep, g, 3) - Gm).norm(), 1e-9,
                 "global symmetry absorption");
    // Charged state annihilated.
    if (cs.G.order == 2) {
      MatC U1 = dense_op(f.rep, 1, 3);
      VecC charged = psi - U1 * psi;
      require(charged.norm() > 1e-8, "charged component empty");
      require_lt(gauge_state(c, charged).vec.norm(), 1e-9,
                 "charged state annihilation");
    } else {
      // Total charge 1 under the diagonal character rep.
      MatC U1 = dense_op(f.rep, 1, 3);
      cplx w = std::exp(cplx(0, 2.0 * kPi / 3.0));
      VecC charged = psi + std::conj(w) * (U1 * psi) +
                     std::conj(w * w) * (U1 * U1 * psi);
      require(charged.norm() > 1e-8, "charged component empty");
      require_lt(gauge_state(c, charged).vec.norm(), 1e-9,
                 "charged state annihilation");
    }
  }
}

void criterion6_operator_compatibility() {
  FiniteGroup G = FiniteGroup::cyclic(2);
  FusionData f = strict_fusion(build_onsite_mpo(G, fixtures::z2_diag_rep()));
  GaugeChain c(f, 3);
  MatC Gm = gauging_map(c);
  std::vector<MatC> U = {dense_op(f.rep, 0, 3), dense_op(f.rep, 1, 3)};
  std::mt19937 gen(77);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    MatC O(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) O(i, j) = cplx(nd(gen), nd(gen));
    // Commutant projection.
    MatC Oc = 0.5 * (O + U[1] * O * U[1].adjoint());
    MatC Gam = gauge_operator(c, Oc, 0, 3);
    require_lt((Gam * Gm - Gm * Oc).norm(), 1e-9,
               "two-sided operator compatibility, trial " +
                   std::to_string(trial));
  }
}

void criterion7_subgroup_gauging() {
  struct Case {
    FiniteGroup G;
    std::vector<Tensor> u;
    std::vector<int> N;
  };
  std::vector<Case> cases;
  cases.push_back({FiniteGroup::cyclic(4), fixtures::zn_char_rep(4), {0, 2}});
  {
    FiniteGroup G = FiniteGroup::symmetric3();
    cases.push_back({G, fixtures::regular_rep(G), {0, 1, 2}});
  }
  for (const auto& cs : cases) {
    FusionData f = strict_fusion(build_onsite_mpo(cs.G, cs.u));
    GaugeChain c(f, 2, cs.N);
    const int n = static_cast<int>(cs.G.order);
    std::vector<MatC> Uhat(n);
    for (int g = 0; g < n; ++g) Uhat[g] = quotient_symmetry_op(c, g);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        require_lt((Uhat[g] * Uhat[h] - Uhat[cs.G.mul(g, h)]).norm(), 1e-9,
                   "quotient operator group law");
    MatC GN = gauging_map(c);
    for (int g = 0; g < n; ++g)
      require_lt((Uhat[g] * GN - GN * dense_op(f.rep, g, 2)).norm(), 1e-9,
                 "quotient operator intertwines the gauging map");
    // Cosets act identically on gauged states, matching the quotient table.
    Quotient q = quotient(cs.G, cs.N);
    VecC psi = random_vec(c.matter_dim(), 13);
    VecC sym = VecC::Zero(psi.size());
    for (int nel : cs.N) sym += dense_op(f.rep, nel, 2) * psi;
    GaugedState gs = gauge_state(c, sym);
    require(!gs.annihilated, "subgroup-symmetric state annihilated");
    for (int g = 0; g < n; ++g) {
      int rep_el = q.coset_rep[q.coset_of[g]];
      require_lt((Uhat[g] * gs.vec - Uhat[rep_el] * gs.vec).norm(),
                 1e-9 * gs.vec.norm(),
                 "coset representatives act identically");
    }
    for (std::size_t a = 0; a < q.group.order; ++a)
      for (std::size_t b = 0; b < q.group.order; ++b) {
        int ga = q.coset_rep[a], gb = q.coset_rep[b];
        int gc = q.coset_rep[q.group.mul(static_cast<int>(a),
                                         static_cast<int>(b))];
        require_lt((Uhat[ga] * (Uhat[gb] * gs.vec) - Uhat[gc] * gs.vec).norm(),
                   1e-9 * gs.vec.norm(), "quotient table action");
      }
  }
}

void criterion8_mps_closed_form() {
  struct Case {
    FiniteGroup G;
    std::vector<Tensor> u;
    std::vector<MatC> V;
    unsigned seed;
  };
  std::vector<Case> cases;
  cases.push_back({FiniteGroup::cyclic(2), fixtures::z2_diag_rep(),
                   {MatC::Identity(2, 2), pauli_x()}, 11});
  cases.push_back({FiniteGroup::cyclic(3), fixtures::zn_char_rep(3),
                   shift_rep(3), 23});
  cases.push_back({z2xz2(), pauli_pair_rep(), pauli_projective(), 37});
  for (const auto& cs : cases) {
    Mps m = symmetric_mps(cs.G, cs.u, cs.V, cs.seed);
    FusionData f = strict_fusion(build_onsite_mpo(cs.G, cs.u));
    ActionTensorSet acts = solve_action_tensors(m, f);
    GaugedMps gm = gauge_mps(m, f, acts);
    for (std::size_t L : {2u, 3u}) {
      GaugeChain chain(f, L);
      if (chain.total_dim() > kGaugeDenseGuard) continue;
      VecC closed = realize_alternating(gm, L);
      VecC projected = apply_global_projector(
          chain, couple_matter(chain, realize_mps(m, L)));
      require(projected.norm() > 1e-8, "projected state vanished");
      require_lt((closed - projected).norm(), 1e-9 * projected.norm(),
                 "closed-form equality at L=" + std::to_string(L));
    }
  }
}

void criterion9_anomalous_localization() {
  // Split-leg operators for the anomalous fixture.
  MpoGroupRep rep = anomalous_z2();
  FusionData f = solve_all_fusion(rep);
  solve_unit_vector(f);
  const int n = 2;
  std::vector<MatC> loc(n);
  for (int g = 0; g < n; ++g) loc[g] = localized_split_op(f, g);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      require_lt((loc[g] * loc[h] - loc[f.rep.group.mul(g, h)]).norm(), 1e-9,
                 "split-leg group law (anomalous)");
  // Two-path product-gauge equality.
  SplitGaugeChain chain{f, 2};
  VecC psi = random_vec(chain.matter_dim(), 3);
  VecC a = symmetrize_state(chain, psi, product_gauge_state(chain));
  VecC b = product_gauge_closed_form(chain, psi);
  require(a.norm() > 1e-10, "symmetrized output vanished");
  require_lt((a - b).norm(), 1e-9 * a.norm(), "product-gauge two-path");
  // Maximally-entangled gauge identities.
  OmegaOverlapReport orep = check_omega_overlap(chain);
  require_lt(orep.proportionality_residual, 1e-9, "entangled-gauge sandwich");
  require(std::abs(orep.scale) > 1e-12, "entangled-gauge sandwich vanished");
  // On-site renormalization to regular edge actions.
  {
    FusionData fo =
        solve_all_fusion(build_onsite_mpo(FiniteGroup::cyclic(2),
                                          fixtures::z2_diag_rep()));
    solve_unit_vector(fo);
    for (int g = 0; g < 2; ++g)
      require_lt(renormalized_pair_residual(fo, g), 1e-10,
                 "pairwise renormalization to regular actions");
  }
  // Block-MPS closed forms (alternating bond chain and super-site chain).
  {
    FiniteGroup G = FiniteGroup::cyclic(2);
    auto u = fixtures::z2_flip_rep();
    FusionData fo = solve_all_fusion(build_onsite_mpo(G, u));
    solve_unit_vector(fo);
    std::mt19937 gen(91);
    std::normal_distribution<double> nd;
    const std::size_t D = 2, d = 2;
    Tensor A0t({D, D, d}, {"l", "r", "p"});
    for (auto& z : A0t.data) z = cplx(nd(gen), nd(gen));
    MatC Vr(2, 2);
    Vr << cplx(nd(gen), nd(gen)), cplx(nd(gen), nd(gen)),
        cplx(nd(gen), nd(gen)), cplx(nd(gen), nd(gen));
    Eigen::HouseholderQR<MatC> qr(Vr);
    MatC Q = qr.householderQ();
    Mps A0(A0t);
    Tensor A1t({D, D, d}, {"l", "r", "p"});
    for (std::size_t p = 0; p < d; ++p) {
      MatC s = MatC::Zero(D, D);
      for (std::size_t q = 0; q < d; ++q) {
        cplx cuv = u[1].at({p, q});
        if (cuv != cplx(0.0)) s += cuv * A0.slice(q);
      }
      MatC m = Q.adjoint() * s * Q;
      for (std::size_t aa = 0; aa < D; ++aa)
        for (std::size_t bb = 0; bb < D; ++bb) A1t.at({aa, bb, p}) = m(aa, bb);
    }
    std::vector<Mps> blocks = {A0, Mps(A1t)};
    std::vector<std::vector<int>> act = {{0, 1}, {1, 0}};
    BlockActionSet acts = solve_block_actions(blocks, fo.rep, act);
    SplitGaugeChain bchain{fo, 2};
    for (int x = 0; x < 2; ++x) {
      VecC ref = symmetrize_state(bchain, realize_mps(blocks[x], 2),
                                  product_gauge_state(bchain));
      SplitGaugedMps gmx = split_gauged_mps(blocks, fo, acts, x);
      VecC alt = realize_split_alternating(bchain, gmx);
      require_lt((alt - ref).norm(), 1e-9 * std::max(1.0, ref.norm()),
                 "alternating closed form, block " + std::to_string(x));
      Tensor C = supersite_tensor(blocks, fo, acts, x);
      VecC sup = realize_supersite(bchain, C);
      require_lt((sup - ref).norm(), 1e-9 * std::max(1.0, ref.norm()),
                 "super-site closed form, block " + std::to_string(x));
    }
  }
}

void criterion10_fusion_category() {
  CategoryMpoRep rep = fib_rep();
  CategoryFusionData f = solve_category_fusion(rep);
  MatC l0 = local_op_category(f, 0), l1 = local_op_category(f, 1);
  require_lt((l1 * l1 - (l0 + l1)).norm(), 1e-9, "golden-ratio local algebra");
  MatC lam = local_lambda_op(f);
  require_lt((lam * lam - lam).norm(), 1e-8 * std::max(1.0, lam.norm()),
             "weight projector idempotent");
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  require_lt((l1 * lam - golden * lam).norm() / std::max(1.0, lam.norm()),
             1e-8, "weight projector absorbs with the golden-ratio "
                   "eigenvalue");
  require_lt(std::abs(rep.cat.d[1] - golden) / golden, 1e-8,
             "quantum dimension equals the golden ratio");
  // Group-as-category reduction coincides with the split-leg operators.
  for (int q : {0, 1}) {
    MpoGroupRep grep =
        build_anomalous_mpo(FiniteGroup::cyclic(2), cyclic_cocycle(2, q));
    FusionData gf = solve_all_fusion(grep);
    CategoryFusionData cf =
        solve_category_fusion(category_rep_from_group(grep));
    for (int g = 0; g < 2; ++g)
      require_lt((local_op_category(cf, g) - localized_split_op(gf, g)).norm(),
                 1e-10, "group-as-category reduction, q=" + std::to_string(q));
  }
}

void criterion11_oracle_independence() {
  for (const auto& fx : onsite_fixtures()) {
    FusionData f = strict_fusion(build_onsite_mpo(fx.G, fx.u));
    GaugeChain c(f, 2);
    if (c.total_dim() > kGaugeDenseGuard) continue;
    MatC A = gauging_map(c);
    MatC B = gauging_map_direct(f, 2);
    require_lt((A - B).norm(), 1e-10, fx.name + ": oracle independence");
  }
  // The non-anomalous triple-line build as well.
  {
    FusionData f = strict_fusion(
        build_anomalous_mpo(FiniteGroup::cyclic(2), Cocycle3(2)));
    GaugeChain c(f, 2);
    MatC A = gauging_map(c);
    MatC B = gauging_map_direct(f, 2);
    require_lt((A - B).norm(), 1e-10, "triple-line oracle independence");
  }
}

}  // namespace

int main() {
  run(1, "group law of dense MPOs (on-site + triple-line fixtures)",
      criterion1_group_law);
  run(2, "fusion tensors: zipper and orthogonality residuals",
      criterion2_fusion_solve);
  run(3, "associator pipeline: trivial classes, certified nontrivial class, "
         "coboundary shift",
      criterion3_cocycle_pipeline);
  run(4, "edge-dressed local operators: group law, commutation, regular "
         "reduction",
      criterion4_local_operators);
  run(5, "state gauging map: projector, invariance, absorption, "
         "annihilation",
      criterion5_gauging_map);
  run(6, "operator gauging compatibility on random commutant operators",
      criterion6_operator_compatibility);
  run(7, "subgroup gauging with quotient symmetry operators",
      criterion7_subgroup_gauging);
  run(8, "gauged MPS closed form equals the projected state",
      criterion8_mps_closed_form);
  run(9, "split-leg localization of the anomalous symmetry",
      criterion9_anomalous_localization);
  run(10, "fusion-category operators: golden-ratio algebra and reduction",
      criterion10_fusion_category);
  run(11, "fusion path equals the direct assignment-sum oracle",
      criterion11_oracle_independence);
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}

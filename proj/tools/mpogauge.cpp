// Command-line front door for the MPO symmetry library: build representation
// bundles, gauge or symmetrize states, and run the verification suite with a
// machine-readable JSON report.
//
// Exit codes: 0 success; 1 verification failure; 2 invalid input or
// dimension mismatch; 3 group-law failure while building; 4 anomalous bundle
// in gauge mode; 5 dense size guard exceeded.

#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpog/anomaly.hpp"
#include "mpog/category.hpp"
#include "mpog/gauging.hpp"
#include "mpog/json_io.hpp"

using namespace mpog;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitGroupLaw = 3;
constexpr int kExitAnomalous = 4;
constexpr int kExitGuard = 5;

double base_tol() {
  if (const char* env = std::getenv("MPOGAUGE_TOL")) {
    try {
      double t = std::stod(env);
      if (t > 0) return t;
    } catch (...) {
    }
    throw io_error("MPOGAUGE_TOL must be a positive number");
  }
  return 1e-9;
}

// --- Group / representation parsing -----------------------------------------

FiniteGroup parse_group(const std::string& s) {
  if (s == "S3") return FiniteGroup::symmetric3();
  if (s.size() >= 2 && (s[0] == 'Z' || s[0] == 'D')) {
    std::size_t n = std::stoul(s.substr(1));
    return s[0] == 'Z' ? FiniteGroup::cyclic(n) : FiniteGroup::dihedral(n);
  }
  if (s.rfind("file:", 0) == 0) return group_from_json(load_json(s.substr(5)));
  throw io_error("unknown group spec '" + s +
                 "' (use Zn, Dn, S3, or file:path)");
}

std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t ipos = item.find('i');
    if (ipos != std::string::npos) {
      // form a+bi or bi
      std::size_t split = item.find_last_of("+-", ipos - 1);
      if (split == std::string::npos || split == 0) {
        std::string im = item.substr(0, ipos);
        out.emplace_back(0.0, im.empty() || im == "+" ? 1.0
                              : im == "-" ? -1.0 : std::stod(im));
      } else {
        double re = std::stod(item.substr(0, split));
        std::string im = item.substr(split, ipos - split);
        out.emplace_back(re, im == "+" ? 1.0 : im == "-" ? -1.0
                                                         : std::stod(im));
      }
    } else {
      out.emplace_back(std::stod(item), 0.0);
    }
  }
  return out;
}

// On-site unitaries from a textual spec: "regular", "diag:a,b,..." (cyclic
// groups: u(g) = diag(...)^g), or "char:n" (cyclic character diagonal).
std::vector<Tensor> parse_onsite(const FiniteGroup& G, const std::string& s) {
  const std::size_t n = G.order;
  if (s == "regular") {
    std::vector<Tensor> u;
    for (std::size_t g = 0; g < n; ++g) {
      Tensor m({n, n}, {"po", "pi"});
      for (std::size_t h = 0; h < n; ++h)
        m.at({static_cast<std::size_t>(
                  G.mul(static_cast<int>(g), static_cast<int>(h))),
              h}) = 1.0;
      u.push_back(std::move(m));
    }
    return u;
  }
  if (s.rfind("diag:", 0) == 0) {
    // Only meaningful when the group is cyclic with generator label 1.
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (G.mul(static_cast<int>(a), static_cast<int>(b)) !=
            static_cast<int>((a + b) % n))
          throw io_error("diag: requires a cyclic group in standard labels");
    std::vector<cplx> diag = parse_complex_list(s.substr(5));
    const std::size_t d = diag.size();
    std::vector<Tensor> u;
    for (std::size_t g = 0; g < n; ++g) {
      Tensor m({d, d}, {"po", "pi"});
      for (std::size_t k = 0; k < d; ++k) {
        cplx v(1.0);
        for (std::size_t p = 0; p < g; ++p) v *= diag[k];
        m.at({k, k}) = v;
      }
      u.push_back(std::move(m));
    }
    return u;
  }
  if (s == "char") {
    std::vector<Tensor> u;
    for (std::size_t g = 0; g < n; ++g) {
      Tensor m({n, n}, {"po", "pi"});
      for (std::size_t k = 0; k < n; ++k) {
        double ang = 2.0 * kPi * g * k / n;
        m.at({k, k}) = cplx(std::cos(ang), std::sin(ang));
      }
      u.push_back(std::move(m));
    }
    return u;
  }
  if (s.rfind("file:", 0) == 0) {
    json j = load_json(s.substr(5));
    std::vector<Tensor> u;
    for (const auto& t : j) u.push_back(tensor_from_json(t));
    return u;
  }
  throw io_error("unknown on-site spec '" + s + "'");
}

Cocycle3 parse_cocycle(const FiniteGroup& G, const std::string& s) {
  const std::size_t n = G.order;
  auto require_cyclic = [&] {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (G.mul(static_cast<int>(a), static_cast<int>(b)) !=
            static_cast<int>((a + b) % n))
          throw io_error("named cocycles require a cyclic group");
  };
  if (s == "trivial") return Cocycle3(n);
  if (s == "nontrivial") {
    require_cyclic();
    return cyclic_cocycle(n, 1);
  }
  if (s.rfind("q:", 0) == 0) {
    require_cyclic();
    return cyclic_cocycle(n, std::stoi(s.substr(2)));
  }
  if (s.rfind("file:", 0) == 0)
    return cocycle3_from_json(load_json(s.substr(5)), n);
  throw io_error("unknown cocycle spec '" + s + "'");
}

// --- Commands ----------------------------------------------------------------

int cmd_build_rep(const std::string& group_s, const std::string& kind,
                  const std::string& u_s, const std::string& cocycle_s,
                  const std::string& out) {
  const double tol = base_tol();
  MpoGroupRep rep;
  try {
    FiniteGroup G = parse_group(group_s);
    if (kind == "onsite") {
      rep = build_onsite_mpo(G, parse_onsite(G, u_s));
    } else if (kind == "anomalous") {
      Cocycle3 w = parse_cocycle(G, cocycle_s);
      if (!check_cocycle3(G, w))
        throw io_error("supplied 3-cochain violates the cocycle condition");
      rep = build_anomalous_mpo(G, w);
    } else {
      throw io_error("kind must be onsite or anomalous");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  // Dense group-law verification before writing the bundle.
  for (std::size_t L : {2u, 3u}) {
    std::size_t dim = 1;
    bool skip = false;
    for (std::size_t i = 0; i < L; ++i) {
      dim *= rep.phys_dim;
      if (dim > 64) skip = true;
    }
    if (skip) continue;
    GroupLawReport r = verify_group_law(rep, L, tol);
    if (!r.pass) {
      std::cerr << "group-law verification failed at L=" << L
                << " (max residual " << r.max_residual << ")\n";
      return kExitGroupLaw;
    }
  }
  save_json(out, rep_to_json(rep));
  std::cout << out << " written; group order " << rep.group.order
            << ", phys dim " << rep.phys_dim << "\n";
  return kExitOk;
}

int cmd_gauge(const std::string& rep_path, const std::string& state_path,
              std::size_t L, const std::string& subgroup_s,
              const std::string& mode, const std::string& phi_path,
              const std::string& out, const std::string& report_path) {
  const double tol = base_tol();
  VerificationReport report;
  report.meta["mode"] = mode;
  report.meta["L"] = L;
  MpoGroupRep rep;
  VecC psi;
  try {
    rep = rep_from_json(load_json(rep_path));
    psi = state_from_json(load_json(state_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  std::size_t md = 1;
  for (std::size_t i = 0; i < L; ++i) md *= rep.phys_dim;
  if (static_cast<std::size_t>(psi.size()) != md) {
    std::cerr << "error: state has dimension " << psi.size()
              << " but the chain needs " << md << "\n";
    return kExitBadInput;
  }

  try {
    FusionData f = solve_all_fusion(rep);
    if (mode == "gauge") {
      FusionData fs;
      try {
        fs = gauge_fix_strict(f);
      } catch (const anomalous_error& e) {
        std::cerr << "error: this bundle carries a nontrivial 3-cocycle "
                     "class; plain gauging requires a trivial class ("
                  << e.what() << ")\n";
        return kExitAnomalous;
      }
      solve_unit_vector(fs);
      std::vector<int> sub;
      if (!subgroup_s.empty()) {
        std::stringstream ss(subgroup_s);
        std::string item;
        while (std::getline(ss, item, ',')) sub.push_back(std::stoi(item));
      }
      GaugeChain chain(fs, L, sub);
      chain.check_guard();
      GaugedState gs = gauge_state(chain, psi, tol);
      report.meta["output_norm"] = gs.vec.norm();
      report.meta["annihilated"] = gs.annihilated;
      if (gs.annihilated)
        report.meta["note"] =
            "symmetrization annihilated the input (charged state)";
      for (int g : chain.sub) {
        double worst = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
          VecC lhs = apply_embedded(chain, local_symmetry_block(chain, g), i,
                                    gs.vec);
          worst = std::max(worst, (lhs - gs.vec).norm());
        }
        report.add("invariance.local_symmetry.g" + std::to_string(g),
                   "localized symmetry operators fix the gauged state",
                   gs.annihilated ? 0.0 : worst / std::max(1.0, gs.vec.norm()),
                   tol);
      }
      save_json(out, state_to_json(gs.vec));
      report.anomaly_class = "trivial";
    } else if (mode == "symmetrize") {
      solve_unit_vector(f);
      SplitGaugeChain chain{f, L};
      chain.check_guard();
      VecC phi = phi_path.empty() ? product_gauge_state(chain)
                                  : state_from_json(load_json(phi_path));
      if (static_cast<std::size_t>(phi.size()) != chain.gauge_dim()) {
        std::cerr << "error: gauge state has dimension " << phi.size()
                  << " but the chain needs " << chain.gauge_dim() << "\n";
        return kExitBadInput;
      }
      VecC outv = symmetrize_state(chain, psi, phi);
      report.meta["output_norm"] = outv.norm();
      report.meta["annihilated"] = outv.norm() < tol;
      const int n = static_cast<int>(rep.group.order);
      for (int g = 0; g < n; ++g) {
        MatC loc = localized_split_op(f, g);
        double worst = 0.0;
        for (std::size_t i = 0; i < L; ++i) {
          VecC lhs = apply_split_local(chain, loc, i, outv);
          worst = std::max(worst, (lhs - outv).norm());
        }
        report.add("invariance.split_local_symmetry.g" + std::to_string(g),
                   "split-leg localized operators fix the symmetrized state",
                   outv.norm() < tol ? 0.0 : worst / std::max(1.0, outv.norm()),
                   tol * 10);
      }
      save_json(out, state_to_json(outv));
    } else {
      std::cerr << "error: mode must be gauge or symmetrize\n";
      return kExitBadInput;
    }
  } catch (const gauge_error& e) {
    std::string w = e.what();
    std::cerr << "error: " << w << "\n";
    return w.find("guard") != std::string::npos ? kExitGuard : kExitBadInput;
  } catch (const anomaly_gauging_error& e) {
    std::string w = e.what();
    std::cerr << "error: " << w << "\n";
    return w.find("guard") != std::string::npos ? kExitGuard : kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (!report_path.empty()) save_json(report_path, report_to_json(report));
  std::cout << out << " written"
            << (report_path.empty() ? "" : "; report " + report_path)
            << "; all_pass=" << (report.all_pass() ? "true" : "false") << "\n";
  return report.all_pass() ? kExitOk : kExitVerifyFail;
}

// --- Verification suite -------------------------------------------------------

void verify_rep_bundle(const MpoGroupRep& rep, const std::vector<std::size_t>& Ls,
                       unsigned seed, double tol, VerificationReport& rep_out);

void verify_category_bundle(const CategoryMpoRep& crep, double tol,
                            VerificationReport& out) {
  const int m = static_cast<int>(crep.cat.m);
  // Dense fusion algebra.
  double worst = 0.0;
  std::size_t dim = crep.phys_dim * crep.phys_dim;
  if (dim <= 4096) {
    std::vector<MatC> O;
    for (int a = 0; a < m; ++a) O.push_back(realize_dense_category(crep, a, 2));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        MatC rhs = MatC::Zero(O[0].rows(), O[0].cols());
        for (int c = 0; c < m; ++c)
          if (crep.cat.n(a, b, c)) rhs += O[c];
        worst = std::max(worst, (O[a] * O[b] - rhs).norm());
      }
  }
  out.add("category.fusion_algebra",
          "dense object MPOs close under the fusion table", worst, tol);

  CategoryFusionData f = solve_category_fusion(crep, tol);
  // Local fusion algebra.
  std::vector<MatC> loc;
  for (int a = 0; a < m; ++a) loc.push_back(local_op_category(f, a));
  worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      MatC rhs = MatC::Zero(loc[0].rows(), loc[0].cols());
      for (int c = 0; c < m; ++c)
        if (crep.cat.n(a, b, c)) rhs += loc[c];
      worst = std::max(worst, (loc[a] * loc[b] - rhs).norm());
    }
  out.add("category.local_algebra",
          "split-leg localized operators close under the fusion table", worst,
          tol);

  MatC lam = local_lambda_op(f);
  double lamres = (lam * lam - lam).norm();
  for (int a = 0; a < m; ++a)
    lamres = std::max(lamres, (loc[a] * lam - crep.cat.d[a] * lam).norm() /
                                  std::max(1.0, lam.norm()));
  out.add("category.lambda_projector",
          "weighted-sum local operator is an absorbing projector", lamres,
          tol * 10);

  worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int e = 0; e < m; ++e)
        for (int c = 0; c < m; ++c)
          for (int dd = 0; dd < m; ++dd) {
            if (!crep.cat.n(a, b, e) || !crep.cat.n(e, c, dd)) continue;
            worst =
                std::max(worst, associativity_residual(f, a, b, e, c, dd));
          }
  out.add("category.associativity",
          "paired recoupling identity of the channel tensors", worst,
          tol * 10);
}

void verify_rep_bundle(const MpoGroupRep& rep,
                       const std::vector<std::size_t>& Ls, unsigned seed,
                       double tol, VerificationReport& out) {
  const FiniteGroup& G = rep.group;
  const int n = static_cast<int>(G.order);
  out.meta["group_order"] = G.order;
  out.meta["phys_dim"] = rep.phys_dim;
  out.meta["chi"] = rep.chi;

  // 1. Group law, dense.
  for (std::size_t L : Ls) {
    std::size_t dim = 1;
    bool skip = false;
    for (std::size_t i = 0; i < L; ++i) {
      dim *= rep.phys_dim;
      if (dim > 64) skip = true;
    }
    if (skip) continue;
    GroupLawReport r = verify_group_law(rep, L, tol);
    out.add("representation.group_law.L" + std::to_string(L),
            "product of dense MPOs equals the MPO of the product element",
            r.max_residual, tol);
  }

  // 2. Fusion tensors.
  FusionData f;
  try {
    f = solve_all_fusion(rep);
  } catch (const std::exception& e) {
    out.add("fusion.solve", std::string("fusion solve failed: ") + e.what(),
            1.0, tol);
    return;
  }
  double zr = 0.0, zir = 0.0, orr = 0.0;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      zr = std::max(zr, zipper_residual(rep, f.w(g, h), g, h));
      zir = std::max(zir, zipper_residual_inv(rep, f.winv(g, h), g, h));
      orr = std::max(orr, orthogonality_residual(f.winv(g, h), f.w(g, h)));
    }
  out.add("fusion.zipper", "fusion tensors intertwine the stacked pair", zr,
          tol);
  out.add("fusion.zipper_inverse",
          "reverse fusion tensors intertwine the stacked pair", zir, tol);
  out.add("fusion.orthogonality", "reverse fusion composes to the identity",
          orr, tol);

  // 3. Cocycle pipeline.
  extract_3cocycle(f);
  out.add("cocycle.pentagon", "extracted associator satisfies the 3-cocycle "
                              "condition",
          check_cocycle3(G, f.omega, 1e-8) ? 0.0 : 1.0, 0.5);
  auto beta = coboundary_trivialize(G, f.omega);
  out.anomaly_class = beta ? "trivial" : "nontrivial";
  out.meta["anomaly_class"] = out.anomaly_class;

  if (!beta) {
    // Anomalous branch: split-leg localization still works.
    FusionData fv = f;
    try {
      solve_unit_vector(fv);
    } catch (const std::exception& e) {
      out.add("split.unit_vector",
              std::string("unit-vector solve failed: ") + e.what(), 1.0, tol);
      return;
    }
    const std::size_t dloc =
        fv.rep.total_chi() * fv.rep.phys_dim * fv.rep.total_chi();
    std::vector<MatC> loc(n);
    for (int g = 0; g < n; ++g) loc[g] = localized_split_op(fv, g);
    double lg = 0.0;
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        lg = std::max(lg, (loc[g] * loc[h] - loc[G.mul(g, h)]).norm());
    out.add("split.local_group_law",
            "split-leg localized operators obey the group law", lg, tol);
    out.add("split.unit_projector",
            "identity-element split operator is a projector",
            (loc[0] * loc[0] - loc[0]).norm(), tol);
    (void)dloc;
    for (std::size_t L : Ls) {
      SplitGaugeChain chain{fv, L};
      if (chain.total_dim() > kGaugeDenseGuard) continue;
      std::mt19937 gen(seed + static_cast<unsigned>(L));
      std::normal_distribution<double> nd;
      VecC psi(chain.matter_dim());
      for (Eigen::Index i = 0; i < psi.size(); ++i)
        psi(i) = cplx(nd(gen), nd(gen));
      VecC a = symmetrize_state(chain, psi, product_gauge_state(chain));
      VecC b = product_gauge_closed_form(chain, psi);
      out.add("split.product_gauge_two_path.L" + std::to_string(L),
              "projector path equals the per-assignment closed form",
              (a - b).norm() / std::max(1.0, a.norm()), tol * 10);
      OmegaOverlapReport orep = check_omega_overlap(chain);
      out.add("split.omega_overlap.L" + std::to_string(L),
              "maximally-entangled gauge sandwich is proportional to the "
              "summed symmetry",
              orep.proportionality_residual, tol * 10);
    }
    return;
  }

  // Trivial class: strict gauge + full gauging identities.
  FusionData fs = gauge_fix_strict(f);
  double omres = 0.0;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        omres = std::max(omres, std::abs(fs.omega(g, h, k) - cplx(1.0)));
  out.add("cocycle.trivialized",
          "associator is identically one in the strict gauge", omres, 1e-8);
  double mares = 0.0;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        mares = std::max(mares, trivial3ortho_residual(fs, g, h, k));
  out.add("fusion.mixed_associativity",
          "both associativity orders agree in the strict gauge", mares, tol);
  solve_unit_vector(fs);
  out.add("fusion.unit_vector",
          "identity-block vector closes the fusion tensors",
          unit_vector_residual(fs, fs.v), tol);
  try {
    solve_Z_matrices(fs);
    double zres = 0.0;
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        zres = std::max(zres, Z_relation_residual(fs, fs.Z[g], g, h));
    out.add("fusion.z_matrix",
            "virtual intertwiners relate opposite fusion orders", zres,
            tol * 10);
  } catch (const std::exception& e) {
    out.add("fusion.z_matrix",
            std::string("virtual intertwiner solve failed: ") + e.what(), 1.0,
            tol);
  }

  for (std::size_t L : Ls) {
    if (L < 2) continue;
    GaugeChain chain(fs, L);
    if (chain.total_dim() > kGaugeDenseGuard) {
      continue;
    }
    std::string suff = ".L" + std::to_string(L);
    // Local operator group law and commutation.
    double lg = 0.0, cm = 0.0;
    std::vector<MatC> loc(n);
    for (int g = 0; g < n; ++g) loc[g] = local_symmetry_block(chain, g);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        lg = std::max(lg, (loc[g] * loc[h] - loc[G.mul(g, h)]).norm());
    out.add("gauging.local_group_law" + suff,
            "edge-dressed local operators obey the group law", lg, tol);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        cm = std::max(cm,
                      check_neighbor_commutation(chain, g, h, 0).residual);
    out.add("gauging.local_commutation" + suff,
            "neighbouring local operators commute", cm, tol);
    // Projector identities.
    MatC P = global_projector(chain);
    out.add("gauging.projector_idempotent" + suff,
            "product of site averages is a projector", (P * P - P).norm(),
            tol * 10);
    // Intertwining with the global symmetry.
    MatC Gmap = gauging_map(chain);
    double itr = 0.0;
    for (int g = 0; g < n; ++g) {
      MatC U = to_matrix(realize_dense(rep, g, L));
      itr = std::max(itr, (Gmap * U - Gmap).norm());
    }
    out.add("gauging.global_intertwine" + suff,
            "gauging map absorbs the global symmetry", itr, tol * 10);
    // Oracle independence.
    MatC Gdir = gauging_map_direct(fs, L);
    out.add("gauging.oracle_independence" + suff,
            "projector-path map equals the direct assignment sum",
            (Gmap - Gdir).norm(), 1e-10 * std::max(1.0, Gmap.norm()));
  }
}

int cmd_verify(const std::string& rep_path, const std::string& cat_path,
               const std::string& level, unsigned seed,
               const std::string& out_path) {
  const double tol = base_tol();
  VerificationReport report;
  report.meta["level"] = level;
  report.meta["seed"] = seed;
  std::vector<std::size_t> Ls =
      level == "full" ? std::vector<std::size_t>{2, 3}
                      : std::vector<std::size_t>{2};
  try {
    if (!rep_path.empty()) {
      MpoGroupRep rep = rep_from_json(load_json(rep_path));
      verify_rep_bundle(rep, Ls, seed, tol, report);
    }
    if (!cat_path.empty()) {
      CategoryMpoRep crep = category_rep_from_json(load_json(cat_path));
      verify_category_bundle(crep, tol, report);
    }
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    report.add("verify.pipeline",
               std::string("verification aborted: ") + e.what(), 1.0, tol);
  }
  if (report.records.empty()) {
    std::cerr << "error: nothing to verify (pass --rep and/or --category)\n";
    return kExitBadInput;
  }
  save_json(out_path, report_to_json(report));
  std::size_t failed = 0;
  for (const auto& r : report.records)
    if (!r.pass) ++failed;
  std::cout << out_path << " written; " << report.records.size()
            << " records, " << failed << " failing; anomaly_class="
            << report.anomaly_class << "\n";
  return failed == 0 ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MPO symmetry toolkit: build, gauge, verify"};
  app.require_subcommand(1);

  // build-rep
  auto* build = app.add_subcommand("build-rep",
                                   "Build an MPO representation bundle");
  std::string b_group, b_kind = "onsite", b_u = "regular",
              b_cocycle = "trivial", b_out = "rep.json";
  build->add_option("--group", b_group, "Zn, Dn, S3, or file:path")
      ->required();
  build->add_option("--kind", b_kind, "onsite | anomalous");
  build->add_option("--u", b_u, "regular | diag:a,b,... | char | file:path");
  build->add_option("--cocycle", b_cocycle,
                    "trivial | nontrivial | q:<int> | file:path");
  build->add_option("--out", b_out, "output bundle path");

  // gauge
  auto* gauge = app.add_subcommand("gauge", "Gauge or symmetrize a state");
  std::string g_rep, g_state, g_sub, g_mode = "gauge", g_phi,
              g_out = "gauged.json", g_report;
  std::size_t g_len = 2;
  gauge->add_option("--rep", g_rep, "rep bundle path")->required();
  gauge->add_option("--state", g_state, "matter state JSON")->required();
  gauge->add_option("--length", g_len, "number of sites")->required();
  gauge->add_option("--subgroup", g_sub, "comma-separated element labels");
  gauge->add_option("--mode", g_mode, "gauge | symmetrize");
  gauge->add_option("--phi", g_phi, "initial gauge state JSON (symmetrize)");
  gauge->add_option("--out", g_out, "output state path");
  gauge->add_option("--report", g_report, "verification report path");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  std::string v_rep, v_cat, v_level = "quick", v_out = "report.json";
  unsigned v_seed = 1;
  verify->add_option("--rep", v_rep, "rep bundle path");
  verify->add_option("--category", v_cat, "category MPO bundle path");
  verify->add_option("--level", v_level, "quick | full");
  verify->add_option("--seed", v_seed, "report determinism seed");
  verify->add_option("--out", v_out, "report path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed())
      return cmd_build_rep(b_group, b_kind, b_u, b_cocycle, b_out);
    if (gauge->parsed())
      return cmd_gauge(g_rep, g_state, g_len, g_sub, g_mode, g_phi, g_out,
                       g_report);
    if (verify->parsed())
      return cmd_verify(v_rep, v_cat, v_level, v_seed, v_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}

// Fusion-category MPO symmetries: category validation, channel fusion
// tensors, the paired associativity identity, localized fusion-algebra
// operators on split gauge legs, the Lambda projector, symmetrization with
// quantum-dimension eigenvalues, and channel action tensors on block MPS
// families.  Golden fixture: the golden-ratio height model with one
// nontrivial object (quantum dimension the golden ratio).

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mpog/anomaly.hpp"
#include "mpog/category.hpp"
#include "mpog/fusion.hpp"

using namespace mpog;

namespace {

constexpr double kPhi = 1.6180339887498948482;

// --- Golden-ratio height category: objects {0 = unit, 1 = t} with
//     t x t = 0 + t.
FusionCategory fib_category() {
  std::vector<int> N(8, 0);
  auto set = [&](int a, int b, int c) { N[(a * 2 + b) * 2 + c] = 1; };
  set(0, 0, 0);
  set(0, 1, 1);
  set(1, 0, 1);
  set(1, 1, 0);
  set(1, 1, 1);
  return validate_category(2, N, {0, 1});
}

// Recoupling coefficient of the height category; zero unless all four
// vertices are admissible, the nontrivial 2x2 block sits at a=b=c=d=t.
double fib_f(const FusionCategory& cat, int a, int b, int c, int d, int e,
             int f) {
  if (!cat.n(a, b, e) || !cat.n(e, c, d) || !cat.n(b, c, f) ||
      !cat.n(a, f, d))
    return 0.0;
  if (a == 1 && b == 1 && c == 1 && d == 1) {
    const double m[2][2] = {{1.0 / kPhi, 1.0 / std::sqrt(kPhi)},
                            {1.0 / std::sqrt(kPhi), -1.0 / kPhi}};
    return m[e][f];
  }
  return 1.0;
}

// Height-model MPO representation: physical basis = heights {0 = unit,
// 1 = t}; the virtual block of object a is spanned by admissible pairs
// (x, y) with N_{a x}^y = 1, and
//   T_a[(x,y),(x',y'); po = y, pi = x] = F(a, x, t; y'; y, x').
CategoryMpoRep fib_rep() {
  CategoryMpoRep rep;
  rep.cat = fib_category();
  rep.phys_dim = 2;
  rep.chi.resize(2);
  rep.T.resize(2);
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
              static_cast<std::size_t>(x)}) =
            fib_f(rep.cat, a, x, 1, y2, y, x2);
      }
    rep.T[a] = std::move(T);
  }
  return rep;
}

// Group MPO representations wrapped as category representations.
CategoryMpoRep cat_rep_z2_diag() {
  return category_rep_from_group(
      build_onsite_mpo(FiniteGroup::cyclic(2), fixtures::z2_diag_rep()));
}

CategoryMpoRep cat_rep_z2_pair(int q) {
  return category_rep_from_group(
      build_anomalous_mpo(FiniteGroup::cyclic(2), cyclic_cocycle(2, q)));
}

VecC random_vec(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  VecC v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = cplx(nd(gen), nd(gen));
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Category validation.

TEST(Validate, QuantumDimensionsAndTotalDimension) {
  FusionCategory fib = fib_category();
  EXPECT_NEAR(fib.d[0], 1.0, 1e-12);
  EXPECT_NEAR(fib.d[1], kPhi, 1e-12);
  EXPECT_NEAR(fib.Dsq, 1.0 + kPhi * kPhi, 1e-10);

  for (std::size_t n : {1u, 2u, 3u}) {
    FusionCategory gc = group_as_category(FiniteGroup::cyclic(n));
    for (double dq : gc.d) EXPECT_NEAR(dq, 1.0, 1e-12);
    EXPECT_NEAR(gc.Dsq, static_cast<double>(n), 1e-10);
  }
  FusionCategory s3 = group_as_category(FiniteGroup::dihedral(3));
  EXPECT_NEAR(s3.Dsq, 6.0, 1e-10);
}

TEST(Validate, BadTablesAreRejected) {
  FusionCategory fib = fib_category();
  {
    auto N = fib.N;
    N[(0 * 2 + 0) * 2 + 1] = 1;  // unit no longer fuses trivially
    EXPECT_THROW(validate_category(2, N, {0, 1}), category_error);
  }
  {
    auto N = fib.N;
    N[(1 * 2 + 1) * 2 + 0] = 0;  // dual pair loses its unit channel
    EXPECT_THROW(validate_category(2, N, {0, 1}), category_error);
  }
  {
    auto N = fib.N;
    N[(1 * 2 + 0) * 2 + 1] = 2;  // multiplicity outside {0,1}
    EXPECT_THROW(validate_category(2, N, {0, 1}), category_error);
  }
  EXPECT_THROW(validate_category(2, fib.N, {1, 0}), category_error);
  {
    // Frobenius symmetry broken on a three-object (cyclic-group) table:
    // remove one interior channel while unit rows and duals stay intact.
    FusionCategory z3 = group_as_category(FiniteGroup::cyclic(3));
    auto N = z3.N;
    N[(1 * 3 + 1) * 3 + 2] = 0;  // 1 x 1 no longer reaches 2
    EXPECT_THROW(validate_category(3, N, z3.dual), category_error);
  }
}

// ---------------------------------------------------------------------------
// The height-model MPOs satisfy the fusion algebra (dense oracle).

TEST(HeightModel, DenseOperatorsSatisfyTheFusionAlgebra) {
  CategoryMpoRep rep = fib_rep();
  for (std::size_t L : {2u, 3u, 4u}) {
    MatC O0 = realize_dense_category(rep, 0, L);
    MatC O1 = realize_dense_category(rep, 1, L);
    EXPECT_LT((O0 * O0 - O0).norm(), 1e-9) << "L=" << L;       // projector
    EXPECT_LT((O1 * O1 - (O0 + O1)).norm(), 1e-9) << "L=" << L;
    EXPECT_LT((O0 * O1 - O1).norm(), 1e-9) << "L=" << L;
    EXPECT_LT((O1 * O0 - O1).norm(), 1e-9) << "L=" << L;
  }
}

TEST(HeightModel, AlgebraClosureCoefficientsViaLeastSquares) {
  // Expand O_a O_b in the operator span of {O_c}; the least-squares
  // coefficients must reproduce the fusion table.
  CategoryMpoRep rep = fib_rep();
  const std::size_t L = 3, dim = 8;
  std::vector<VecC> basis;
  for (int c = 0; c < 2; ++c) {
    MatC O = realize_dense_category(rep, c, L);
    basis.push_back(Eigen::Map<VecC>(O.data(), dim * dim));
  }
  MatC B(dim * dim, 2);
  B.col(0) = basis[0];
  B.col(1) = basis[1];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      MatC prod = realize_dense_category(rep, a, L) *
                  realize_dense_category(rep, b, L);
      VecC target = Eigen::Map<VecC>(prod.data(), dim * dim);
      VecC coef = B.completeOrthogonalDecomposition().solve(target);
      EXPECT_LT((B * coef - target).norm(), 1e-9);
      for (int c = 0; c < 2; ++c)
        EXPECT_NEAR(std::abs(coef(c) - cplx(rep.cat.n(a, b, c))), 0.0, 1e-8)
            << a << b << c;
    }
}

// ---------------------------------------------------------------------------
// Channel fusion tensors.

TEST(Channels, TensorsAreNormalizedAndReconstructTheStackedPair) {
  // solve_category_fusion throws if orthogonality or completeness fail;
  // here we additionally check the norm convention and the tensor shapes.
  for (const CategoryMpoRep& rep :
       {fib_rep(), cat_rep_z2_diag(), cat_rep_z2_pair(1)}) {
    CategoryFusionData f = solve_category_fusion(rep);
    const int m = static_cast<int>(rep.cat.m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
          if (!rep.cat.n(a, b, c)) {
            EXPECT_EQ(f.w(a, b, c).size(), 0u);
            continue;
          }
          const Tensor& W = f.w(a, b, c);
          EXPECT_NEAR(W.norm(), std::sqrt(double(rep.chi[c])), 1e-9);
          Tensor prod = contract(f.winv(a, b, c).relabeled({"c2", "a", "b"}),
                                 W, {{"a", "a"}, {"b", "b"}});
          EXPECT_LT(distance(prod, identity_tensor(rep.chi[c], "c2", "c")),
                    1e-9);
        }
  }
}

TEST(Channels, GroupCategoryTensorsMatchTheGroupFusionSolver) {
  // For a group wrapped as a category the only channel of (g,h) is gh and
  // the channel tensor must coincide with the group fusion tensor in the
  // strict gauge (both conventions normalize and phase-fix identically for
  // one-dimensional blocks).
  MpoGroupRep grep = build_onsite_mpo(FiniteGroup::cyclic(3),
                                      fixtures::zn_char_rep(3));
  FusionData gf = gauge_fix_strict(solve_all_fusion(grep));
  CategoryFusionData cf = solve_category_fusion(category_rep_from_group(grep));
  for (int g = 0; g < 3; ++g)
    for (int h = 0; h < 3; ++h) {
      int k = (g + h) % 3;
      const Tensor& Wc = cf.w(g, h, k);
      const Tensor& Wg = gf.w(g, h);  // axes ("g","h","gh")
      ASSERT_EQ(Wc.size(), Wg.size());
      for (std::size_t i = 0; i < Wc.size(); ++i)
        EXPECT_LT(std::abs(Wc.data[i] - Wg.data[i]), 1e-10);
    }
}

TEST(Channels, PairedAssociativityIdentityHolds) {
  for (const CategoryMpoRep& rep : {fib_rep(), cat_rep_z2_pair(1)}) {
    CategoryFusionData f = solve_category_fusion(rep);
    const int m = static_cast<int>(rep.cat.m);
    int checked = 0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int e = 0; e < m; ++e)
          for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d) {
              if (!rep.cat.n(a, b, e) || !rep.cat.n(e, c, d)) continue;
              EXPECT_LT(associativity_residual(f, a, b, e, c, d), 1e-8)
                  << a << b << e << c << d;
              ++checked;
            }
    EXPECT_GT(checked, 0);
  }
}

TEST(Channels, UnitVectorReproducesIdentityOnEveryBlock) {
  for (const CategoryMpoRep& rep :
       {fib_rep(), cat_rep_z2_diag(), cat_rep_z2_pair(1)}) {
    CategoryFusionData f = solve_category_fusion(rep);
    Tensor v = solve_unit_vector_category(f);
    EXPECT_LT(unit_vector_residual_category(f, v), 1e-9);
  }
}

// ---------------------------------------------------------------------------
// Localized operators.

TEST(LocalOps, FusionAlgebraHoldsLocally) {
  for (const CategoryMpoRep& rep :
       {fib_rep(), cat_rep_z2_diag(), cat_rep_z2_pair(1)}) {
    CategoryFusionData f = solve_category_fusion(rep);
    const int m = static_cast<int>(rep.cat.m);
    std::vector<MatC> loc;
    for (int a = 0; a < m; ++a) loc.push_back(local_op_category(f, a));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        MatC rhs = MatC::Zero(loc[0].rows(), loc[0].cols());
        for (int c = 0; c < m; ++c)
          if (rep.cat.n(a, b, c)) rhs += loc[c];
        EXPECT_LT((loc[a] * loc[b] - rhs).norm(), 1e-9) << a << " " << b;
      }
  }
}

TEST(LocalOps, GoldenRatioAlgebra) {
  CategoryFusionData f = solve_category_fusion(fib_rep());
  MatC l0 = local_op_category(f, 0), l1 = local_op_category(f, 1);
  EXPECT_LT((l1 * l1 - (l0 + l1)).norm(), 1e-9);
  EXPECT_LT((l0 * l0 - l0).norm(), 1e-9);
}

TEST(LocalOps, GroupCategoryLocalOpsMatchTheSplitLegOperators) {
  // For group data the localized category operator must coincide with the
  // split-leg group operator entry for entry (the channel-scale gauge
  // cancels between the two leg tensors).
  for (int q : {0, 1}) {
    MpoGroupRep grep =
        build_anomalous_mpo(FiniteGroup::cyclic(2), cyclic_cocycle(2, q));
    FusionData gf = solve_all_fusion(grep);
    CategoryFusionData cf =
        solve_category_fusion(category_rep_from_group(grep));
    for (int g = 0; g < 2; ++g) {
      MatC a = local_op_category(cf, g);
      MatC b = localized_split_op(gf, g);
      EXPECT_LT((a - b).norm(), 1e-9) << "q=" << q << " g=" << g;
    }
  }
  MpoGroupRep orep = build_onsite_mpo(FiniteGroup::cyclic(2),
                                      fixtures::z2_diag_rep());
  FusionData of = gauge_fix_strict(solve_all_fusion(orep));
  CategoryFusionData cf = solve_category_fusion(category_rep_from_group(orep));
  for (int g = 0; g < 2; ++g)
    EXPECT_LT((local_op_category(cf, g) - localized_split_op(of, g)).norm(),
              1e-9);
}

TEST(LocalOps, LambdaIsAProjectorAndAbsorbsEveryObject) {
  for (const CategoryMpoRep& rep : {fib_rep(), cat_rep_z2_pair(1)}) {
    CategoryFusionData f = solve_category_fusion(rep);
    MatC lam = local_lambda_op(f);
    EXPECT_LT((lam * lam - lam).norm(), 1e-8 * std::max(1.0, lam.norm()));
    for (int a = 0; a < static_cast<int>(rep.cat.m); ++a) {
      MatC la = local_op_category(f, a);
      EXPECT_LT((la * lam - rep.cat.d[a] * lam).norm(),
                1e-8 * std::max(1.0, lam.norm()))
          << a;
      EXPECT_LT((lam * la - rep.cat.d[a] * lam).norm(),
                1e-8 * std::max(1.0, lam.norm()))
          << a;
    }
  }
}

// ---------------------------------------------------------------------------
// Symmetrization on the split chain.

TEST(Symmetrize, OutputCarriesQuantumDimensionEigenvalues) {
  CategoryFusionData f = solve_category_fusion(fib_rep());
  solve_unit_vector_category(f);
  CategorySplitChain chain{f, 2};
  chain.check_guard();
  VecC psi = random_vec(chain.matter_dim(), 11);
  std::vector<VecC> gauges = {product_gauge_state_category(chain),
                              random_vec(chain.gauge_dim(), 12)};
  int nonzero = 0;
  for (const VecC& phi : gauges) {
    VecC out = symmetrize_category(chain, psi, phi);
    if (out.norm() < 1e-12) continue;
    ++nonzero;
    for (int a = 0; a < 2; ++a) {
      MatC loc = local_op_category(f, a);
      for (std::size_t i = 0; i < chain.L; ++i) {
        VecC lhs = apply_category_local(chain, loc, i, out);
        EXPECT_LT((lhs - f.rep.cat.d[a] * out).norm(), 1e-8 * out.norm())
            << "a=" << a << " i=" << i;
      }
    }
  }
  EXPECT_GT(nonzero, 0);
}

TEST(Symmetrize, GroupCategoryChainMatchesTheSplitGroupChain) {
  // Symmetrizing with the group-as-category Lambda projector equals the
  // split-leg group projector path (Lambda = uniform average for groups).
  MpoGroupRep grep = build_onsite_mpo(FiniteGroup::cyclic(2),
                                      fixtures::z2_diag_rep());
  FusionData gf = gauge_fix_strict(solve_all_fusion(grep));
  solve_unit_vector(gf);
  CategoryFusionData cf = solve_category_fusion(category_rep_from_group(grep));
  solve_unit_vector_category(cf);

  SplitGaugeChain gchain{gf, 2};
  CategorySplitChain cchain{cf, 2};
  VecC psi = random_vec(gchain.matter_dim(), 21);
  VecC phi = random_vec(gchain.gauge_dim(), 22);
  VecC a = symmetrize_state(gchain, psi, phi);
  VecC b = symmetrize_category(cchain, psi, phi);
  EXPECT_LT((a - b).norm(), 1e-9 * std::max(1.0, a.norm()));
}

// ---------------------------------------------------------------------------
// Channel action tensors on block MPS families.

namespace {

// Extends an MPO representation to a doubled physical space where it acts on
// the first factor only; the MPO block tensors themselves, reshaped to the
// doubled physical index, then form an MPS family whose action table is the
// fusion table.
CategoryMpoRep extend_rep(const CategoryMpoRep& rep) {
  CategoryMpoRep out = rep;
  const std::size_t d = rep.phys_dim;
  out.phys_dim = d * d;
  for (std::size_t a = 0; a < rep.cat.m; ++a) {
    const std::size_t c = rep.chi[a];
    Tensor T({c, c, d * d, d * d}, {"l", "r", "po", "pi"});
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t po = 0; po < d; ++po)
          for (std::size_t q = 0; q < d; ++q)
            for (std::size_t sp = 0; sp < d; ++sp)
              T.at({i, j, po * d + sp, q * d + sp}) =
                  rep.T[a].at({i, j, po, q});
    out.T[a] = std::move(T);
  }
  return out;
}

std::vector<Mps> mpo_blocks_as_mps(const CategoryMpoRep& rep) {
  std::vector<Mps> blocks;
  const std::size_t d = rep.phys_dim;
  for (std::size_t a = 0; a < rep.cat.m; ++a) {
    const std::size_t c = rep.chi[a];
    Tensor A({c, c, d * d}, {"l", "r", "p"});
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t po = 0; po < d; ++po)
          for (std::size_t pi = 0; pi < d; ++pi)
            A.at({i, j, po * d + pi}) = rep.T[a].at({i, j, po, pi});
    blocks.emplace_back(std::move(A));
  }
  return blocks;
}

}  // namespace

TEST(Actions, ChannelActionTablesReproduceTheFusionTable) {
  for (const CategoryMpoRep& base : {fib_rep(), cat_rep_z2_pair(1)}) {
    CategoryMpoRep ext = extend_rep(base);
    std::vector<Mps> blocks = mpo_blocks_as_mps(base);
    CategoryActionSet acts = solve_category_actions(blocks, ext);
    const int m = static_cast<int>(base.cat.m);
    for (int a = 0; a < m; ++a)
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y)
          EXPECT_EQ(acts.M[a][x][y], base.cat.n(a, x, y))
              << a << " " << x << " " << y;
  }
}

TEST(Actions, ActionTensorsAreNormalizedIsometries) {
  CategoryMpoRep base = fib_rep();
  CategoryMpoRep ext = extend_rep(base);
  std::vector<Mps> blocks = mpo_blocks_as_mps(base);
  CategoryActionSet acts = solve_category_actions(blocks, ext);
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        if (!acts.M[a][x][y]) continue;
        const Tensor& Y = acts.Y[a][x][y];
        const Tensor& Yi = acts.Yinv[a][x][y];
        Tensor prod = contract(Yi, Y.relabeled({"g", "vout", "mid"}),
                               {{"g", "g"}, {"vout", "vout"}});
        EXPECT_LT(distance(prod,
                           identity_tensor(blocks[y].D(), "vin", "mid")),
                  1e-9);
        EXPECT_NEAR(Y.norm(), std::sqrt(double(blocks[y].D())), 1e-9);
      }
}

TEST(Actions, LambdaProjectedBlockStateIsInvariant) {
  CategoryMpoRep base = fib_rep();
  CategoryMpoRep ext = extend_rep(base);
  std::vector<Mps> blocks = mpo_blocks_as_mps(base);
  const std::size_t L = 2;
  int nonzero = 0;
  for (int x = 0; x < 2; ++x) {
    VecC out = invariant_state_via_lambda(blocks, ext, x, L);
    if (out.norm() < 1e-12) continue;
    ++nonzero;
    for (int a = 0; a < 2; ++a) {
      VecC lhs = realize_dense_category(ext, a, L) * out;
      EXPECT_LT((lhs - base.cat.d[a] * out).norm(), 1e-8 * out.norm())
          << "x=" << x << " a=" << a;
    }
  }
  EXPECT_GT(nonzero, 0);
}

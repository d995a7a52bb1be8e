#pragma once
// Finite groups as multiplication tables, subgroups / normality / quotients,
// and 2-/3-cochains valued in U(1) with cocycle verification and coboundary
// trivialization (an exact integer-linear-algebra decision procedure).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tensor.hpp"  // cplx

namespace mpog {

struct group_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------

class FiniteGroup {
 public:
  std::size_t order = 0;
  std::vector<std::vector<int>> table;  // table[g][h] = g*h
  std::vector<int> inv;
  std::vector<std::string> names;

  int mul(int g, int h) const { return table[g][h]; }
  int invert(int g) const { return inv[g]; }

  static FiniteGroup from_table(std::vector<std::vector<int>> tab,
                                std::vector<std::string> names = {}) {
    FiniteGroup G;
    G.order = tab.size();
    const int n = static_cast<int>(G.order);
    if (n == 0) throw group_error("group: empty table");
    for (const auto& row : tab)
      if (row.size() != G.order) throw group_error("group: table not square");
    for (const auto& row : tab)
      for (int v : row)
        if (v < 0 || v >= n) throw group_error("group: entry out of range");
    G.table = std::move(tab);
    // 0 must be a two-sided identity.
    for (int g = 0; g < n; ++g)
      if (G.table[0][g] != g || G.table[g][0] != g)
        throw group_error("group: label 0 is not a two-sided identity");
    // Each row and column must be a permutation (Latin square).
    for (int g = 0; g < n; ++g) {
      std::vector<bool> seen_r(G.order, false), seen_c(G.order, false);
      for (int h = 0; h < n; ++h) {
        if (seen_r[G.table[g][h]]) throw group_error("group: row not a permutation");
        seen_r[G.table[g][h]] = true;
        if (seen_c[G.table[h][g]]) throw group_error("group: column not a permutation");
        seen_c[G.table[h][g]] = true;
      }
    }
    // Associativity.
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k)
          if (G.table[G.table[g][h]][k] != G.table[g][G.table[h][k]])
            throw group_error("group: not associative");
    // Inverses.
    G.inv.assign(G.order, -1);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        if (G.table[g][h] == 0) G.inv[g] = h;
    for (int g = 0; g < n; ++g)
      if (G.inv[g] < 0 || G.table[G.inv[g]][g] != 0)
        throw group_error("group: element without two-sided inverse");
    if (names.empty()) {
      for (int g = 0; g < n; ++g) names.push_back("g" + std::to_string(g));
      names[0] = "e";
    }
    if (names.size() != G.order) throw group_error("group: names length mismatch");
    G.names = std::move(names);
    return G;
  }

  static FiniteGroup cyclic(std::size_t n) {
    if (n == 0) throw group_error("cyclic: order must be positive");
    std::vector<std::vector<int>> tab(n, std::vector<int>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        tab[a][b] = static_cast<int>((a + b) % n);
    std::vector<std::string> names;
    for (std::size_t a = 0; a < n; ++a) names.push_back("r" + std::to_string(a));
    names[0] = "e";
    return from_table(std::move(tab), std::move(names));
  }

  // Dihedral group of order 2n; element a + n*b encodes r^a s^b.
  static FiniteGroup dihedral(std::size_t n) {
    if (n == 0) throw group_error("dihedral: order must be positive");
    const int ni = static_cast<int>(n);
    auto enc = [&](int a, int b) { return a + ni * b; };
    std::vector<std::vector<int>> tab(2 * n, std::vector<int>(2 * n));
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < ni; ++c)
          for (int d = 0; d < 2; ++d) {
            int rot = ((b == 0 ? a + c : a - c) % ni + ni) % ni;
            tab[enc(a, b)][enc(c, d)] = enc(rot, (b + d) % 2);
          }
    std::vector<std::string> names(2 * n);
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < 2; ++b)
        names[enc(a, b)] = (b ? "sr" : "r") + std::to_string(a);
    names[0] = "e";
    return from_table(std::move(tab), std::move(names));
  }

  // Permutations of {0,1,2}; identity gets label 0.
  static FiniteGroup symmetric3() {
    const std::vector<std::array<int, 3>> perms = {
        {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    auto compose = [&](int p, int q) {  // (p*q)(x) = p(q(x))
      std::array<int, 3> r{};
      for (int x = 0; x < 3; ++x) r[x] = perms[p][perms[q][x]];
      for (int i = 0; i < 6; ++i)
        if (perms[i] == r) return i;
      throw group_error("symmetric3: composition not found");
    };
    std::vector<std::vector<int>> tab(6, std::vector<int>(6));
    for (int p = 0; p < 6; ++p)
      for (int q = 0; q < 6; ++q) tab[p][q] = compose(p, q);
    return from_table(std::move(tab),
                      {"e", "(012)", "(021)", "(01)", "(12)", "(02)"});
  }
};

// ---------------------------------------------------------------------------
// Cochains

struct Cochain2 {
  std::size_t order = 0;
  std::vector<cplx> values;  // index g*n + h

  explicit Cochain2(std::size_t n, cplx fill = cplx(1.0, 0.0))
      : order(n), values(n * n, fill) {}
  cplx& operator()(int g, int h) { return values[g * order + h]; }
  const cplx& operator()(int g, int h) const { return values[g * order + h]; }

  bool unit_modulus(double tol = 1e-12) const {
    for (const auto& z : values)
      if (std::abs(std::abs(z) - 1.0) > tol) return false;
    return true;
  }
};

struct Cocycle3 {
  std::size_t order = 0;
  std::vector<cplx> values;  // index (g*n + h)*n + k

  explicit Cocycle3(std::size_t n, cplx fill = cplx(1.0, 0.0))
      : order(n), values(n * n * n, fill) {}
  cplx& operator()(int g, int h, int k) {
    return values[(g * order + h) * order + k];
  }
  const cplx& operator()(int g, int h, int k) const {
    return values[(g * order + h) * order + k];
  }

  bool unit_modulus(double tol = 1e-12) const {
    for (const auto& z : values)
      if (std::abs(std::abs(z) - 1.0) > tol) return false;
    return true;
  }

  // True when every value with an identity argument equals 1.
  bool normalized(double tol = 1e-9) const {
    const int n = static_cast<int>(order);
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h) {
        if (std::abs((*this)(0, g, h) - cplx(1.0)) > tol) return false;
        if (std::abs((*this)(g, 0, h) - cplx(1.0)) > tol) return false;
        if (std::abs((*this)(g, h, 0) - cplx(1.0)) > tol) return false;
      }
    return true;
  }
};

// The cocycle condition: w(g,h,k) w(g,hk,l) w(h,k,l) == w(gh,k,l) w(g,h,kl).
inline bool check_cocycle3(const FiniteGroup& G, const Cocycle3& w,
                           double tol = 1e-10) {
  const int n = static_cast<int>(G.order);
  if (w.order != G.order) throw group_error("check_cocycle3: order mismatch");
  if (!w.unit_modulus(1e-8)) return false;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx lhs = w(g, h, k) * w(g, G.mul(h, k), l) * w(h, k, l);
          cplx rhs = w(G.mul(g, h), k, l) * w(g, h, G.mul(k, l));
          if (std::abs(lhs - rhs) > tol) return false;
        }
  return true;
}

// d(beta)(g,h,k) = beta(g,h) beta(gh,k) conj(beta(h,k)) conj(beta(g,hk)).
inline Cocycle3 coboundary_of(const FiniteGroup& G, const Cochain2& beta) {
  const int n = static_cast<int>(G.order);
  Cocycle3 w(G.order);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        w(g, h, k) = beta(g, h) * beta(G.mul(g, h), k) *
                     std::conj(beta(h, k)) * std::conj(beta(g, G.mul(h, k)));
  return w;
}

// Pointwise product and ratio of cocycles (used for class comparisons).
inline Cocycle3 cocycle_ratio(const Cocycle3& a, const Cocycle3& b) {
  if (a.order != b.order) throw group_error("cocycle_ratio: order mismatch");
  Cocycle3 r(a.order);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    r.values[i] = a.values[i] / b.values[i];
  return r;
}

// Standard representative of the class q in H^3(Z_n, U(1)) ~ Z_n:
// w(a,b,c) = exp(2*pi*i * q * a * carry(b,c) / n), carry = 1 iff b+c >= n.
inline Cocycle3 cyclic_cocycle(std::size_t n, int q) {
  Cocycle3 w(n);
  const int ni = static_cast<int>(n);
  for (int a = 0; a < ni; ++a)
    for (int b = 0; b < ni; ++b)
      for (int c = 0; c < ni; ++c) {
        int carry = (b + c >= ni) ? 1 : 0;
        double ang = 2.0 * kPi * q * a * carry / ni;
        w(a, b, c) = cplx(std::cos(ang), std::sin(ang));
      }
  return w;
}

// ---------------------------------------------------------------------------
// Exact solver for A x = t (mod m) via Smith normal form over the integers.
// Sizes here are tiny (|G| <= 6 -> at most 216 equations, 36 unknowns).

namespace detail {

struct SmithResult {
  std::vector<std::vector<std::int64_t>> D;  // diagonalized matrix (E x V)
  std::vector<std::vector<std::int64_t>> U;  // E x E unimodular
  std::vector<std::vector<std::int64_t>> V;  // V x V unimodular
};

inline SmithResult smith_normal_form(std::vector<std::vector<std::int64_t>> A) {
  const std::size_t E = A.size(), Vn = A.empty() ? 0 : A[0].size();
  auto eye = [](std::size_t n) {
    std::vector<std::vector<std::int64_t>> I(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
  };
  SmithResult res{A, eye(E), eye(Vn)};
  auto& D = res.D;
  auto& U = res.U;
  auto& V = res.V;

  auto swap_rows = [&](std::size_t a, std::size_t b) {
    std::swap(D[a], D[b]);
    std::swap(U[a], U[b]);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (auto& row : D) std::swap(row[a], row[b]);
    for (auto& row : V) std::swap(row[a], row[b]);
  };
  auto addmul_row = [&](std::size_t dst, std::size_t src, std::int64_t f) {
    for (std::size_t j = 0; j < Vn; ++j) D[dst][j] += f * D[src][j];
    for (std::size_t j = 0; j < E; ++j) U[dst][j] += f * U[src][j];
  };
  auto addmul_col = [&](std::size_t dst, std::size_t src, std::int64_t f) {
    for (std::size_t i = 0; i < E; ++i) D[i][dst] += f * D[i][src];
    for (std::size_t i = 0; i < Vn; ++i) V[i][dst] += f * V[i][src];
  };

  const std::size_t r = std::min(E, Vn);
  for (std::size_t p = 0; p < r; ++p) {
    for (;;) {
      // Find the smallest-magnitude nonzero entry in the remaining block.
      std::size_t bi = p, bj = p;
      std::int64_t best = 0;
      for (std::size_t i = p; i < E; ++i)
        for (std::size_t j = p; j < Vn; ++j)
          if (D[i][j] != 0 && (best == 0 || std::llabs(D[i][j]) < std::llabs(best))) {
            best = D[i][j];
            bi = i;
            bj = j;
          }
      if (best == 0) break;  // block is all zero; done
      if (bi != p) swap_rows(p, bi);
      if (bj != p) swap_cols(p, bj);
      bool clean = true;
      for (std::size_t i = p + 1; i < E; ++i)
        if (D[i][p] != 0) {
          addmul_row(i, p, -(D[i][p] / D[p][p]));
          if (D[i][p] != 0) clean = false;
        }
      for (std::size_t j = p + 1; j < Vn; ++j)
        if (D[p][j] != 0) {
          addmul_col(j, p, -(D[p][j] / D[p][p]));
          if (D[p][j] != 0) clean = false;
        }
      if (clean) break;
    }
  }
  return res;
}

inline std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Extended gcd: returns g and x,y with a x + b y = g.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x,
                            std::int64_t& y) {
  if (b == 0) {
    x = (a >= 0) ? 1 : -1;
    y = 0;
    return std::llabs(a);
  }
  std::int64_t x1, y1;
  std::int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// Solve A x = t (mod m).  Returns a solution vector or nullopt.
inline std::optional<std::vector<std::int64_t>> solve_mod(
    const std::vector<std::vector<std::int64_t>>& A,
    const std::vector<std::int64_t>& t, std::int64_t m) {
  const std::size_t E = A.size(), Vn = A.empty() ? 0 : A[0].size();
  SmithResult snf = smith_normal_form(A);
  // c = U t
  std::vector<std::int64_t> c(E, 0);
  for (std::size_t i = 0; i < E; ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < E; ++j) s += snf.U[i][j] * t[j];
    c[i] = mod_pos(s, m);
  }
  std::vector<std::int64_t> y(Vn, 0);
  for (std::size_t i = 0; i < E; ++i) {
    std::int64_t d = (i < Vn) ? snf.D[i][i] : 0;
    if (d == 0) {
      if (c[i] % m != 0) return std::nullopt;
      continue;
    }
    std::int64_t x, yy;
    std::int64_t g = ext_gcd(mod_pos(d, m), m, x, yy);
    if (c[i] % g != 0) return std::nullopt;
    // y_i = (c_i / g) * inverse(d/g) mod (m/g)
    std::int64_t mg = m / g;
    std::int64_t dg = mod_pos(d, m) / g;
    std::int64_t inv_dg, tmp;
    ext_gcd(dg, mg, inv_dg, tmp);
    y[i] = mod_pos((c[i] / g) % mg * mod_pos(inv_dg, mg) % mg, mg);
  }
  // x = V y
  std::vector<std::int64_t> x(Vn, 0);
  for (std::size_t i = 0; i < Vn; ++i) {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < Vn; ++j) s += snf.V[i][j] * y[j];
    x[i] = mod_pos(s, m);
  }
  return x;
}

}  // namespace detail

// ---------------------------------------------------------------------------

// Decides whether w is a 3-coboundary.  If so, returns beta with
//   w(g,h,k) == beta(g,h) beta(gh,k) conj(beta(h,k)) conj(beta(g,hk)),
// otherwise nullopt (certifying a nontrivial class at this search order).
// The search is restricted to (2|G|^2)-th roots of unity, which is exhaustive
// for the group orders supported here.
inline std::optional<Cochain2> coboundary_trivialize(const FiniteGroup& G,
                                                     const Cocycle3& w) {
  if (!check_cocycle3(G, w))
    throw group_error("coboundary_trivialize: input is not a 3-cocycle");
  const int n = static_cast<int>(G.order);
  const std::int64_t m = 2 * static_cast<std::int64_t>(n) * n;

  // Fast path: already trivial.
  bool all_one = true;
  for (const auto& z : w.values)
    if (std::abs(z - cplx(1.0)) > 1e-12) { all_one = false; break; }
  if (all_one) return Cochain2(G.order);

  // Round phases to m-th roots of unity.
  std::vector<std::int64_t> t(n * n * n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        double ang = std::arg(w(g, h, k));
        double steps = ang * m / (2.0 * kPi);
        std::int64_t r = static_cast<std::int64_t>(std::llround(steps));
        cplx root(std::cos(2.0 * kPi * r / m), std::sin(2.0 * kPi * r / m));
        if (std::abs(root - w(g, h, k)) > 1e-6)
          return std::nullopt;  // outside the root-of-unity search lattice
        t[(g * n + h) * n + k] = detail::mod_pos(r, m);
      }

  // Linear system over Z_m in the beta exponents x(g,h).
  std::vector<std::vector<std::int64_t>> A(
      n * n * n, std::vector<std::int64_t>(n * n, 0));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        auto& row = A[(g * n + h) * n + k];
        row[g * n + h] += 1;
        row[G.mul(g, h) * n + k] += 1;
        row[h * n + k] -= 1;
        row[g * n + G.mul(h, k)] -= 1;
      }
  auto sol = detail::solve_mod(A, t, m);
  if (!sol) return std::nullopt;

  Cochain2 beta(G.order);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      double ang = 2.0 * kPi * (*sol)[g * n + h] / m;
      beta(g, h) = cplx(std::cos(ang), std::sin(ang));
    }
  // Verify before returning.
  Cocycle3 db = coboundary_of(G, beta);
  for (std::size_t i = 0; i < w.values.size(); ++i)
    if (std::abs(db.values[i] - w.values[i]) > 1e-9)
      return std::nullopt;
  return beta;
}

// Decides whether a unit-modulus 2-cochain is the coboundary of a 1-cochain,
//   r(g,h) == c(g) c(h) / c(gh),
// returning c or nullopt.  As with the 3-cocycle trivializer, phases are
// rounded to (2|G|^2)-th roots of unity and the system is solved exactly
// over the integers.
inline std::optional<std::vector<cplx>> coboundary2_trivialize(
    const FiniteGroup& G, const Cochain2& r) {
  if (r.order != G.order)
    throw group_error("coboundary2_trivialize: order mismatch");
  if (!r.unit_modulus(1e-8))
    throw group_error("coboundary2_trivialize: cochain is not unit-modulus");
  const int n = static_cast<int>(G.order);
  const std::int64_t m = 2 * static_cast<std::int64_t>(n) * n;

  std::vector<std::int64_t> t(n * n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      double ang = std::arg(r(g, h));
      std::int64_t rr = static_cast<std::int64_t>(std::llround(ang * m / (2.0 * kPi)));
      cplx root(std::cos(2.0 * kPi * rr / m), std::sin(2.0 * kPi * rr / m));
      if (std::abs(root - r(g, h)) > 1e-6) return std::nullopt;
      t[g * n + h] = detail::mod_pos(rr, m);
    }

  std::vector<std::vector<std::int64_t>> A(n * n, std::vector<std::int64_t>(n, 0));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      auto& row = A[g * n + h];
      row[g] += 1;
      row[h] += 1;
      row[G.mul(g, h)] -= 1;
    }
  auto sol = detail::solve_mod(A, t, m);
  if (!sol) return std::nullopt;

  std::vector<cplx> c(n);
  for (int g = 0; g < n; ++g) {
    double ang = 2.0 * kPi * (*sol)[g] / m;
    c[g] = cplx(std::cos(ang), std::sin(ang));
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (std::abs(c[g] * c[h] / c[G.mul(g, h)] - r(g, h)) > 1e-9)
        return std::nullopt;
  return c;
}

// ---------------------------------------------------------------------------
// Subgroups and quotients

inline bool is_subgroup(const FiniteGroup& G, const std::vector<int>& N) {
  std::vector<bool> in(G.order, false);
  for (int x : N) {
    if (x < 0 || x >= static_cast<int>(G.order)) return false;
    in[x] = true;
  }
  if (!in[0]) return false;
  for (int a : N)
    for (int b : N)
      if (!in[G.mul(a, b)]) return false;
  for (int a : N)
    if (!in[G.invert(a)]) return false;
  return true;
}

inline bool is_normal(const FiniteGroup& G, const std::vector<int>& N) {
  if (!is_subgroup(G, N)) return false;
  std::vector<bool> in(G.order, false);
  for (int x : N) in[x] = true;
  for (std::size_t g = 0; g < G.order; ++g)
    for (int x : N)
      if (!in[G.mul(G.mul(static_cast<int>(g), x), G.invert(static_cast<int>(g)))])
        return false;
  return true;
}

struct Quotient {
  FiniteGroup group;            // the quotient group G/N
  std::vector<int> coset_of;    // g -> coset label (identity coset is 0)
  std::vector<int> coset_rep;   // coset label -> smallest representative in G
};

inline Quotient quotient(const FiniteGroup& G, const std::vector<int>& N) {
  if (!is_subgroup(G, N)) throw group_error("quotient: not a subgroup");
  if (!is_normal(G, N)) throw group_error("quotient: subgroup is not normal");
  const int n = static_cast<int>(G.order);
  std::vector<int> coset_of(n, -1);
  std::vector<int> reps;
  for (int g = 0; g < n; ++g) {
    if (coset_of[g] >= 0) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(g);  // g is the smallest member of its left coset
    for (int x : N) coset_of[G.mul(g, x)] = c;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<std::vector<int>> tab(q, std::vector<int>(q));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      tab[a][b] = coset_of[G.mul(reps[a], reps[b])];
  std::vector<std::string> names;
  for (int a = 0; a < q; ++a) names.push_back("[" + G.names[reps[a]] + "]");
  Quotient out{FiniteGroup::from_table(std::move(tab), std::move(names)),
               std::move(coset_of), std::move(reps)};
  return out;
}

}  // namespace mpog

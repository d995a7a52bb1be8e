#pragma once
// JSON serialization for every on-disk artifact: tensors, groups, cochains,
// MPO representation bundles, fusion-data bundles, category tables, state
// vectors, and verification reports.  Complex numbers are encoded as
// two-element arrays [re, im]; tensors are row-major.

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fusion.hpp"
#include "group.hpp"
#include "mpo_rep.hpp"
#include "category.hpp"

namespace mpog {

using json = nlohmann::json;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Complex arrays.

inline json complex_to_json(const cplx& z) {
  return json::array({z.real(), z.imag()});
}

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw io_error("complex value must be a [re, im] pair");
  return cplx(j[0].get<double>(), j[1].get<double>());
}

inline json complex_vector_to_json(const std::vector<cplx>& v) {
  json arr = json::array();
  for (const auto& z : v) arr.push_back(complex_to_json(z));
  return arr;
}

inline std::vector<cplx> complex_vector_from_json(const json& j) {
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_from_json(e));
  return out;
}

// ---------------------------------------------------------------------------
// Tensor: {"shape": [...], "labels": [...], "data": [[re, im], ...]}.

inline json tensor_to_json(const Tensor& t) {
  json j;
  j["shape"] = t.shape;
  j["labels"] = t.labels;
  j["data"] = complex_vector_to_json(t.data);
  return j;
}

inline Tensor tensor_from_json(const json& j) {
  std::vector<std::size_t> shape = j.at("shape").get<std::vector<std::size_t>>();
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  Tensor t(shape, labels);
  std::vector<cplx> data = complex_vector_from_json(j.at("data"));
  if (data.size() != t.data.size())
    throw io_error("tensor data length does not match the shape");
  t.data = std::move(data);
  return t;
}

// ---------------------------------------------------------------------------
// State vectors: stored as a rank-1 tensor.

inline json state_to_json(const VecC& v) {
  Tensor t({static_cast<std::size_t>(v.size())}, {"i"});
  for (Eigen::Index i = 0; i < v.size(); ++i) t.data[i] = v(i);
  return tensor_to_json(t);
}

inline VecC state_from_json(const json& j) {
  Tensor t = tensor_from_json(j);
  if (t.shape.size() != 1) throw io_error("state vector must be rank 1");
  VecC v(t.data.size());
  for (std::size_t i = 0; i < t.data.size(); ++i) v(i) = t.data[i];
  return v;
}

// ---------------------------------------------------------------------------
// Group: {"order": n, "table": [[...]], "names": [...]}.

inline json group_to_json(const FiniteGroup& G) {
  json j;
  j["order"] = G.order;
  j["table"] = G.table;
  j["names"] = G.names;
  return j;
}

inline FiniteGroup group_from_json(const json& j) {
  auto table = j.at("table").get<std::vector<std::vector<int>>>();
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  FiniteGroup G = FiniteGroup::from_table(std::move(table), std::move(names));
  if (j.contains("order") && j.at("order").get<std::size_t>() != G.order)
    throw io_error("group order field disagrees with the table");
  return G;
}

// ---------------------------------------------------------------------------
// Cochains: dense value arrays of [re, im] (n^2 for 2-cochains, n^3 for
// 3-cocycles).

inline json cocycle3_to_json(const Cocycle3& w) {
  return complex_vector_to_json(w.values);
}

inline Cocycle3 cocycle3_from_json(const json& j, std::size_t order) {
  Cocycle3 w(order);
  std::vector<cplx> vals = complex_vector_from_json(j);
  if (vals.size() != order * order * order)
    throw io_error("3-cocycle array has the wrong length");
  w.values = std::move(vals);
  return w;
}

inline json cochain2_to_json(const Cochain2& b) {
  return complex_vector_to_json(b.values);
}

inline Cochain2 cochain2_from_json(const json& j, std::size_t order) {
  Cochain2 b(order);
  std::vector<cplx> vals = complex_vector_from_json(j);
  if (vals.size() != order * order)
    throw io_error("2-cochain array has the wrong length");
  b.values = std::move(vals);
  return b;
}

// ---------------------------------------------------------------------------
// MPO representation bundle: group + per-element tensors + block dimensions.

inline json rep_to_json(const MpoGroupRep& rep) {
  json j;
  j["group"] = group_to_json(rep.group);
  j["phys_dim"] = rep.phys_dim;
  j["chi"] = rep.chi;
  json ts = json::array();
  for (const Tensor& t : rep.T) ts.push_back(tensor_to_json(t));
  j["tensors"] = ts;
  return j;
}

inline MpoGroupRep rep_from_json(const json& j) {
  MpoGroupRep rep;
  rep.group = group_from_json(j.at("group"));
  rep.phys_dim = j.at("phys_dim").get<std::size_t>();
  rep.chi = j.at("chi").get<std::vector<std::size_t>>();
  for (const auto& t : j.at("tensors")) rep.T.push_back(tensor_from_json(t));
  if (rep.T.size() != rep.group.order || rep.chi.size() != rep.group.order)
    throw io_error("rep bundle: one tensor and one block dimension per "
                   "element required");
  for (std::size_t g = 0; g < rep.group.order; ++g) {
    const auto& s = rep.T[g].shape;
    if (s.size() != 4 || s[0] != rep.chi[g] || s[1] != rep.chi[g] ||
        s[2] != rep.phys_dim || s[3] != rep.phys_dim)
      throw io_error("rep bundle: tensor shape mismatch for element " +
                     std::to_string(g));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Fusion bundle: rep + per-pair tensors + cocycle data + v + Z.

inline json fusion_to_json(const FusionData& f) {
  json j;
  j["rep"] = rep_to_json(f.rep);
  json W = json::array(), Wi = json::array();
  for (const Tensor& t : f.W) W.push_back(tensor_to_json(t));
  for (const Tensor& t : f.Winv) Wi.push_back(tensor_to_json(t));
  j["W"] = W;
  j["Winv"] = Wi;
  j["omega"] = cocycle3_to_json(f.omega);
  j["beta"] = cochain2_to_json(f.beta);
  j["strict"] = f.strict;
  if (f.v.size() != 0) j["v"] = tensor_to_json(f.v);
  if (!f.Z.empty()) {
    json Z = json::array();
    for (const Tensor& t : f.Z) Z.push_back(tensor_to_json(t));
    j["Z"] = Z;
  }
  return j;
}

inline FusionData fusion_from_json(const json& j) {
  FusionData f;
  f.rep = rep_from_json(j.at("rep"));
  const std::size_t n = f.rep.group.order;
  for (const auto& t : j.at("W")) f.W.push_back(tensor_from_json(t));
  for (const auto& t : j.at("Winv")) f.Winv.push_back(tensor_from_json(t));
  if (f.W.size() != n * n || f.Winv.size() != n * n)
    throw io_error("fusion bundle: need one tensor pair per element pair");
  f.omega = cocycle3_from_json(j.at("omega"), n);
  f.beta = cochain2_from_json(j.at("beta"), n);
  f.strict = j.at("strict").get<bool>();
  if (j.contains("v")) f.v = tensor_from_json(j.at("v"));
  if (j.contains("Z"))
    for (const auto& t : j.at("Z")) f.Z.push_back(tensor_from_json(t));
  return f;
}

// ---------------------------------------------------------------------------
// Category table: {"objects": m, "N": [[[...]]], "dual": [...]}; quantum
// dimensions are emitted for inspection but never read back (they are
// recomputed by validation).

inline json category_to_json(const FusionCategory& cat) {
  json j;
  j["objects"] = cat.m;
  json N = json::array();
  for (std::size_t a = 0; a < cat.m; ++a) {
    json plane = json::array();
    for (std::size_t b = 0; b < cat.m; ++b) {
      json row = json::array();
      for (std::size_t c = 0; c < cat.m; ++c)
        row.push_back(cat.N[(a * cat.m + b) * cat.m + c]);
      plane.push_back(row);
    }
    N.push_back(plane);
  }
  j["N"] = N;
  j["dual"] = cat.dual;
  j["d"] = cat.d;
  j["Dsq"] = cat.Dsq;
  return j;
}

inline FusionCategory category_from_json(const json& j) {
  const std::size_t m = j.at("objects").get<std::size_t>();
  std::vector<int> N(m * m * m);
  const json& tab = j.at("N");
  if (tab.size() != m) throw io_error("category: N table has wrong size");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        N[(a * m + b) * m + c] = tab[a][b][c].get<int>();
  return validate_category(m, N, j.at("dual").get<std::vector<int>>());
}

// Category MPO bundle: category table + per-object tensors.

inline json category_rep_to_json(const CategoryMpoRep& rep) {
  json j;
  j["category"] = category_to_json(rep.cat);
  j["phys_dim"] = rep.phys_dim;
  j["chi"] = rep.chi;
  json ts = json::array();
  for (const Tensor& t : rep.T) ts.push_back(tensor_to_json(t));
  j["tensors"] = ts;
  return j;
}

inline CategoryMpoRep category_rep_from_json(const json& j) {
  CategoryMpoRep rep;
  rep.cat = category_from_json(j.at("category"));
  rep.phys_dim = j.at("phys_dim").get<std::size_t>();
  rep.chi = j.at("chi").get<std::vector<std::size_t>>();
  for (const auto& t : j.at("tensors")) rep.T.push_back(tensor_from_json(t));
  if (rep.T.size() != rep.cat.m || rep.chi.size() != rep.cat.m)
    throw io_error("category bundle: one tensor and one block dimension per "
                   "object required");
  for (std::size_t a = 0; a < rep.cat.m; ++a) {
    const auto& s = rep.T[a].shape;
    if (s.size() != 4 || s[0] != rep.chi[a] || s[1] != rep.chi[a] ||
        s[2] != rep.phys_dim || s[3] != rep.phys_dim)
      throw io_error("category bundle: tensor shape mismatch for object " +
                     std::to_string(a));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Verification reports.

struct VerificationRecord {
  std::string identity;   // dotted identity name (sorted key)
  std::string anchor;     // which structural identity is being checked
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<VerificationRecord> records;
  json meta = json::object();
  std::string anomaly_class = "undecided";  // trivial / nontrivial / undecided

  void add(const std::string& identity, const std::string& anchor,
           double residual, double tolerance) {
    records.push_back(
        {identity, anchor, residual, tolerance, residual < tolerance});
  }
  bool all_pass() const {
    for (const auto& r : records)
      if (!r.pass) return false;
    return true;
  }
  void sort() {
    std::sort(records.begin(), records.end(),
              [](const VerificationRecord& a, const VerificationRecord& b) {
                return a.identity < b.identity;
              });
  }
};

inline json report_to_json(VerificationReport rep) {
  rep.sort();
  json j;
  j["meta"] = rep.meta;
  j["anomaly_class"] = rep.anomaly_class;
  j["all_pass"] = rep.all_pass();
  json recs = json::array();
  for (const auto& r : rep.records) {
    json e;
    e["identity"] = r.identity;
    e["anchor"] = r.anchor;
    e["residual"] = r.residual;
    e["tolerance"] = r.tolerance;
    e["pass"] = r.pass;
    recs.push_back(e);
  }
  j["records"] = recs;
  return j;
}

// ---------------------------------------------------------------------------
// File helpers.

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write " + path);
  out << j.dump(1) << "\n";
}

}  // namespace mpog

#pragma once

#include "calculus.hpp"
#include "lie.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace dgx::io {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string at_path(const std::string& file, const std::string& path) {
  return file + ": " + (path.empty() ? "<root>" : path);
}

inline const json& field(const json& j, const std::string& key, const std::string& file, const std::string& path) {
  if (!j.is_object()) throw input_error(at_path(file, path) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw input_error(at_path(file, path) + ": missing field '" + key + "'");
  return *it;
}

inline int get_int(const json& j, const std::string& file, const std::string& path) {
  if (!j.is_number_integer()) throw input_error(at_path(file, path) + ": expected an integer");
  return j.get<int>();
}

inline Q get_q(const json& j, const std::string& file, const std::string& path) {
  if (j.is_number_integer()) return Q(j.get<long>());
  if (!j.is_string()) throw input_error(at_path(file, path) + ": expected a rational string \"p/q\"");
  try {
    return parse_q(j.get<std::string>());
  } catch (const std::exception& e) {
    throw input_error(at_path(file, path) + ": " + e.what());
  }
}

}  // namespace detail

inline json parse_text(const std::string& text, const std::string& file) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    // translate the byte offset into a line number
    size_t line = 1;
    for (size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw input_error(file + ": line " + std::to_string(line) + ": " + msg);
  }
}

inline json read_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw input_error(file + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), file);
}

inline std::string q_str(const Q& q) { return str(q); }

// ---------- matrices: [[row, col, "p/q"], ...] ----------

inline json matrix_json(const SparseMatrix& m) {
  json out = json::array();
  for (auto& [r, c, q] : m.triplets()) out.push_back(json::array({r, c, q_str(q)}));
  return out;
}

inline SparseMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& file,
                                     const std::string& path) {
  if (!j.is_array()) throw input_error(detail::at_path(file, path) + ": expected an array of [row, col, value] triples");
  std::vector<Triplet> ts;
  std::set<std::pair<int, int>> seen;
  for (size_t k = 0; k < j.size(); ++k) {
    std::string p = path + "[" + std::to_string(k) + "]";
    const json& t = j[k];
    if (!t.is_array() || t.size() != 3) throw input_error(detail::at_path(file, p) + ": expected [row, col, value]");
    int r = detail::get_int(t[0], file, p + "[0]"), c = detail::get_int(t[1], file, p + "[1]");
    if (r < 0 || r >= rows || c < 0 || c >= cols)
      throw input_error(detail::at_path(file, p) + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    if (!seen.insert({r, c}).second) throw input_error(detail::at_path(file, p) + ": duplicate position");
    Q q = detail::get_q(t[2], file, p + "[2]");
    if (q != 0) ts.emplace_back(r, c, q);
  }
  return SparseMatrix::from_triplets(rows, cols, ts);
}

// ---------- Lie algebras ----------

// bracket entries give [e_i, e_j] for i != j; the opposite order is filled by antisymmetry
// unless it is listed too, in which case the two must agree
inline LieAlgebra lie_from_json(const json& j, const std::string& file = "<lie>") {
  using namespace detail;
  LieAlgebra L;
  const json& basis = field(j, "basis", file, "");
  if (!basis.is_array()) throw input_error(at_path(file, "basis") + ": expected an array of labels");
  for (size_t k = 0; k < basis.size(); ++k) {
    if (!basis[k].is_string()) throw input_error(at_path(file, "basis[" + std::to_string(k) + "]") + ": expected a string");
    L.basis.push_back(basis[k].get<std::string>());
  }
  std::set<std::string> uniq(L.basis.begin(), L.basis.end());
  if (uniq.size() != L.basis.size()) throw input_error(at_path(file, "basis") + ": labels must be unique");
  int n = L.dim();
  if (j.contains("dim") && get_int(j["dim"], file, "dim") != n)
    throw input_error(at_path(file, "dim") + ": does not match the number of basis labels");
  L.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : std::filesystem::path(file).stem().string();
  std::map<std::pair<int, int>, std::map<int, Q>> given;
  const json& br = j.contains("bracket") ? j["bracket"] : json::array();
  if (!br.is_array()) throw input_error(at_path(file, "bracket") + ": expected an array");
  for (size_t e = 0; e < br.size(); ++e) {
    std::string p = "bracket[" + std::to_string(e) + "]";
    int i = get_int(field(br[e], "i", file, p), file, p + ".i"), jj = get_int(field(br[e], "j", file, p), file, p + ".j");
    if (i < 0 || i >= n || jj < 0 || jj >= n) throw input_error(at_path(file, p) + ": index out of range");
    if (i == jj) throw input_error(at_path(file, p) + ": [e_i, e_i] must vanish, do not list it");
    if (given.count({i, jj})) throw input_error(at_path(file, p) + ": pair listed twice");
    auto& col = given[{i, jj}];
    const json& terms = field(br[e], "terms", file, p);
    if (!terms.is_array()) throw input_error(at_path(file, p + ".terms") + ": expected an array");
    for (size_t t = 0; t < terms.size(); ++t) {
      std::string pt = p + ".terms[" + std::to_string(t) + "]";
      int k = get_int(field(terms[t], "k", file, pt), file, pt + ".k");
      if (k < 0 || k >= n) throw input_error(at_path(file, pt + ".k") + ": index out of range");
      col[k] += get_q(field(terms[t], "c", file, pt), file, pt + ".c");
    }
  }
  std::vector<std::tuple<int, int, int, Q>> cs;
  for (auto& [ij, col] : given) {
    auto [a, b] = ij;
    auto opp = given.find({b, a});
    if (opp != given.end()) {
      for (int k = 0; k < n; ++k) {
        Q x = col.count(k) ? col.at(k) : Q(0), y = opp->second.count(k) ? opp->second.at(k) : Q(0);
        if (x != -y)
          throw input_error(file + ": bracket: [e" + std::to_string(a) + ",e" + std::to_string(b) +
                            "] is not minus the reversed bracket");
      }
    }
    for (auto& [k, q] : col) {
      cs.emplace_back(a, b, k, q);
      if (opp == given.end()) cs.emplace_back(b, a, k, -q);
    }
  }
  std::string nm = L.name;
  auto basis_v = L.basis;
  L = LieAlgebra::from_constants(nm, basis_v, cs);
  if (j.contains("compact_presentation")) {
    if (!j["compact_presentation"].is_boolean())
      throw input_error(at_path(file, "compact_presentation") + ": expected a boolean");
    L.compact_presentation = j["compact_presentation"].get<bool>();
  }
  return L;
}

inline json lie_json(const LieAlgebra& L) {
  json j;
  j["name"] = L.name;
  j["dim"] = L.dim();
  j["basis"] = L.basis;
  json br = json::array();
  for (int i = 0; i < L.dim(); ++i)
    for (int k = i + 1; k < L.dim(); ++k) {
      if (L.c[i][k].empty()) continue;
      json terms = json::array();
      for (auto& [l, q] : L.c[i][k]) terms.push_back({{"k", l}, {"c", q_str(q)}});
      br.push_back({{"i", i}, {"j", k}, {"terms", terms}});
    }
  j["bracket"] = br;
  j["compact_presentation"] = L.compact_presentation;
  return j;
}

inline LieAlgebra read_lie(const std::string& file) { return lie_from_json(read_file(file), file); }

// ---------- coefficient modules ----------

// Generator degrees are cochain degrees; internally a generator of cochain degree p sits in
// homological degree -p. Operator keys are Lie basis labels.
inline CalculusModule module_from_json(const json& j, const LieAlgebra& L, const std::string& file = "<module>") {
  using namespace detail;
  const json& gens = field(j, "generators", file, "");
  if (!gens.is_array()) throw input_error(at_path(file, "generators") + ": expected an array");
  std::vector<int> deg;
  std::vector<std::string> names;
  for (size_t g = 0; g < gens.size(); ++g) {
    std::string p = "generators[" + std::to_string(g) + "]";
    const json& nm = field(gens[g], "name", file, p);
    if (!nm.is_string()) throw input_error(at_path(file, p + ".name") + ": expected a string");
    names.push_back(nm.get<std::string>());
    deg.push_back(-get_int(field(gens[g], "degree", file, p), file, p + ".degree"));
  }
  // generators may be listed in any order; internally they are sorted by homological degree
  int n = (int)deg.size();
  std::vector<int> order(n), pos(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return deg[a] < deg[b]; });
  std::vector<int> sdeg;
  std::vector<std::string> snames;
  for (int k = 0; k < n; ++k) {
    pos[order[k]] = k;
    sdeg.push_back(deg[order[k]]);
    snames.push_back(names[order[k]]);
  }
  auto permuted = [&](const SparseMatrix& m) {
    std::vector<Triplet> ts;
    for (auto& [r, c, q] : m.triplets()) ts.emplace_back(pos[r], pos[c], q);
    return SparseMatrix::from_triplets(n, n, ts);
  };
  GradedVectorSpace space(sdeg, snames);
  SparseMatrix d = j.contains("d") ? matrix_from_json(j["d"], n, n, file, "d") : SparseMatrix(n, n);
  auto ops = [&](const char* key) {
    std::vector<SparseMatrix> out(L.dim(), SparseMatrix(n, n));
    if (!j.contains(key)) return out;
    const json& o = j[key];
    if (!o.is_object()) throw input_error(at_path(file, key) + ": expected an object keyed by Lie basis labels");
    for (auto& [y, m] : o.items()) {
      auto it = std::find(L.basis.begin(), L.basis.end(), y);
      if (it == L.basis.end()) throw input_error(at_path(file, std::string(key) + "." + y) + ": not a basis label of " + L.name);
      out[it - L.basis.begin()] = matrix_from_json(m, n, n, file, std::string(key) + "." + y);
    }
    return out;
  };
  auto lam = ops("lambda"), io = ops("iota");
  // degree checks (file indices): d lowers homological degree by one, λ keeps it, ι raises it
  auto check_shift = [&](const SparseMatrix& m, int shift, const std::string& what) {
    for (auto& [r, c, q] : m.triplets())
      if (deg[r] != deg[c] + shift)
        throw input_error(file + ": " + what + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                          ") has the wrong degree");
  };
  check_shift(d, -1, "d");
  for (int y = 0; y < L.dim(); ++y) {
    check_shift(lam[y], 0, "lambda." + L.basis[y]);
    check_shift(io[y], 1, "iota." + L.basis[y]);
  }
  d = permuted(d);
  for (int y = 0; y < L.dim(); ++y) {
    lam[y] = permuted(lam[y]);
    io[y] = permuted(io[y]);
  }
  return CalculusModule::finite(space, d, lam, io);
}

inline json module_json(const CalculusModule& V, const LieAlgebra& L) {
  json j;
  json gens = json::array();
  for (int i = 0; i < V.dim(); ++i) gens.push_back({{"name", V.space.label(i)}, {"degree", -V.space.degree(i)}});
  j["generators"] = gens;
  j["d"] = matrix_json(V.d);
  json lam = json::object(), io = json::object();
  for (int y = 0; y < L.dim(); ++y) {
    lam[L.basis[y]] = matrix_json(V.lambda[y]);
    io[L.basis[y]] = matrix_json(V.iota[y]);
  }
  j["lambda"] = lam;
  j["iota"] = io;
  return j;
}

inline CalculusModule read_module(const std::string& file, const LieAlgebra& L) {
  return module_from_json(read_file(file), L, file);
}

// ---------- embeddings g -> K ----------

struct Embedding {
  LieAlgebra source, target;
  SparseMatrix phi;  // dim K x dim g, column a = image of the a-th basis vector of g
};

// {"source": <lie file>, "target": <lie file>, "rows": dim K, "cols": dim g, "matrix": triples};
// file names are resolved relative to the embedding file
inline Embedding embedding_from_json(const json& j, const std::string& file, const LieAlgebra* target = nullptr) {
  using namespace detail;
  namespace fs = std::filesystem;
  fs::path dir = fs::path(file).parent_path();
  auto lie_at = [&](const char* key) {
    const json& v = field(j, key, file, "");
    if (v.is_string()) return read_lie((dir / v.get<std::string>()).string());
    return lie_from_json(v, file + ":" + key);
  };
  Embedding E;
  E.source = lie_at("source");
  E.target = target ? *target : lie_at("target");
  int rows = get_int(field(j, "rows", file, ""), file, "rows"), cols = get_int(field(j, "cols", file, ""), file, "cols");
  if (rows != E.target.dim() || cols != E.source.dim())
    throw input_error(file + ": matrix shape " + std::to_string(rows) + "x" + std::to_string(cols) + " does not match " +
                      E.target.name + " <- " + E.source.name);
  E.phi = matrix_from_json(field(j, "matrix", file, ""), rows, cols, file, "matrix");
  return E;
}

inline Embedding read_embedding(const std::string& file, const LieAlgebra* target = nullptr) {
  return embedding_from_json(read_file(file), file, target);
}

}  // namespace dgx::io

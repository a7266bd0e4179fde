#include <dgx/io.hpp>
#include <dgx/suites.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace dgx;
using io::json;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kInputError = 2, kTruncation = 3 };

struct check_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool g_json = false;

json dims_json(const std::vector<int>& v) { return json(v); }

std::vector<int> trim_zeros(std::vector<int> v) {
  while (v.size() > 1 && v.back() == 0) v.pop_back();
  return v;
}

void emit(const json& j, const std::string& table) {
  if (g_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << table;
}

std::string row(const std::string& k, const std::string& v) {
  std::string s = k;
  if (s.size() < 22) s.resize(22, ' ');
  return s + v + "\n";
}

std::string bool_str(bool b) { return b ? "yes" : "no"; }

LieAlgebra load_lie_checked(const std::string& file) {
  LieAlgebra L = io::read_lie(file);
  if (jacobi_residual(L)) throw input_error(file + ": bracket violates the Jacobi identity");
  return L;
}

// the module must satisfy the calculus relations before any model is built
CalculusModule load_module_checked(const std::string& file, const LieAlgebra& L) {
  CalculusModule V = file.empty() ? trivial_module(L.dim()) : io::read_module(file, L);
  CalculusReport rep = verify_calculus(V, L.c);
  for (auto& r : rep.rows)
    if (r.entries)
      throw check_failure((file.empty() ? std::string("trivial") : file) + ": calculus relation '" + r.relation +
                          "' fails (" + std::to_string(r.entries) + " entries, " + r.witness + ")");
  return V;
}

void require_window(int max_degree) {
  if (max_degree < 2) throw input_error("--max-degree must be at least 2");
}

json model_json(const ModelResult& m) {
  json j;
  j["model"] = m.model;
  j["trusted"] = json::array({0, m.trusted_hi});
  j["dims"] = dims_json(m.dims);
  return j;
}

std::string model_row(const ModelResult& m) {
  return row(m.model, dims_str(m.dims) + "  trusted 0.." + std::to_string(m.trusted_hi));
}

// ---------- lie ----------

int cmd_lie(const std::string& file) {
  LieAlgebra L = io::read_lie(file);
  int jac = jacobi_residual(L);
  json j;
  j["command"] = "lie";
  j["name"] = L.name;
  j["dim"] = L.dim();
  j["jacobi"] = jac == 0 ? "pass" : "fail";
  std::string t = row("lie algebra", L.name + " (dim " + std::to_string(L.dim()) + ")");
  t += row("jacobi", jac == 0 ? "pass" : "fail (" + std::to_string(jac) + " triples)");
  if (jac) {
    j["failing_triples"] = jac;
    emit(j, t);
    return kCheckFailed;
  }
  bool red = is_reductive(L), cs = has_compact_structure_constants(L);
  j["reductive"] = red;
  j["compact_presentation"] = L.compact_presentation;
  j["compact_structure_constants"] = cs;
  std::vector<int> b = lie_betti(L);
  j["betti"] = dims_json(b);
  t += row("reductive", bool_str(red));
  t += row("compact presentation", std::string(L.compact_presentation ? "asserted" : "not asserted") +
                                       ", structure constants " + (cs ? "skew" : "not skew"));
  t += row("betti H*(g;Q)", dims_str(b));
  emit(j, t);
  // an asserted compact presentation that the structure constants contradict is a failed check
  return L.compact_presentation && !cs ? kCheckFailed : kOk;
}

// ---------- ext ----------

int cmd_ext(const std::string& lie, const std::string& coeff, const std::string& model, int max_degree, int levels) {
  require_window(max_degree);
  LieAlgebra L = load_lie_checked(lie);
  CalculusModule V = load_module_checked(coeff, L);
  bool red = is_reductive(L);
  bool small_ok = red && L.compact_presentation && has_compact_structure_constants(L);
  std::vector<std::string> models;
  if (model == "all")
    models = {"dual-standard", "weil", "bar", "cartan", "small"};
  else
    models = {model};
  std::vector<ModelResult> out;
  std::vector<std::string> skipped;
  for (auto& m : models) {
    if (m == "cartan")
      out.push_back(cartan_model(L, V, max_degree).result);
    else if (m == "weil")
      out.push_back(weil_model(L, V, max_degree).result);
    else if (m == "bar")
      out.push_back(bar_model(L, V, max_degree).result);
    else if (m == "dual-standard")
      out.push_back(dual_standard(L, V, levels).result);
    else if (m == "small") {
      if (!small_ok) {
        if (model == "all") {
          skipped.push_back("small");
          continue;
        }
        throw input_error("--model small needs a reductive Lie algebra with a compact presentation");
      }
      out.push_back(small_cartan_model(L, V, max_degree).result);
    } else
      throw input_error("unknown model '" + m + "'");
  }
  json j;
  j["command"] = "ext";
  j["lie"] = L.name;
  j["coefficients"] = coeff.empty() ? "trivial" : coeff;
  j["max_degree"] = max_degree;
  j["reductive"] = red;
  j["results"] = json::array();
  std::string t = row("ext", L.name + " with coefficients " + (coeff.empty() ? "trivial" : coeff));
  if (!red) t += row("note", "not reductive: the models need not compute the same Ext");
  for (auto& r : out) {
    j["results"].push_back(model_json(r));
    t += model_row(r);
  }
  int rc = kOk;
  if (out.size() > 1) {
    int common = max_degree;
    for (auto& r : out) common = std::min(common, r.trusted_hi);
    bool agree = true;
    for (auto& r : out)
      for (int k = 0; k <= common; ++k)
        if (r.dims[k] != out[0].dims[k]) agree = false;
    j["agreement"] = {{"degrees", json::array({0, common})}, {"agree", agree}};
    if (!skipped.empty()) j["skipped"] = skipped;
    t += row("agreement", (agree ? std::string("all models agree") : std::string("models disagree")) + " on degrees 0.." +
                              std::to_string(common));
    if (!agree && red) rc = kCheckFailed;
  }
  emit(j, t);
  return rc;
}

// ---------- homogeneous ----------

int cmd_homogeneous(const std::string& kfile, const std::string& efile, int max_degree) {
  require_window(max_degree);
  LieAlgebra K = load_lie_checked(kfile);
  io::Embedding E = io::read_embedding(efile, &K);
  if (jacobi_residual(E.source)) throw input_error(efile + ": source bracket violates the Jacobi identity");
  HomogeneousResult R = homogeneous_space(E.source, K, E.phi, max_degree);
  json j;
  j["command"] = "homogeneous";
  j["K"] = K.name;
  j["G"] = E.source.name;
  j["max_degree"] = max_degree;
  j["betti"] = dims_json(trim_zeros(R.cartan.dims));
  j["cartan"] = model_json(R.cartan);
  j["small"] = model_json(R.small);
  j["agree"] = R.agree;
  std::string t = row("homogeneous", K.name + "/" + E.source.name);
  t += model_row(R.cartan) + model_row(R.small);
  t += row("betti", dims_str(trim_zeros(R.cartan.dims)) + "  (" + (R.agree ? "small model agrees" : "small model disagrees") + ")");
  emit(j, t);
  return R.agree ? kOk : kCheckFailed;
}

// ---------- tor ----------

int cmd_tor(const std::string& lie, const std::string& coeff, int max_degree) {
  require_window(max_degree);
  LieAlgebra L = load_lie_checked(lie);
  CalculusModule M = load_module_checked(coeff, L);
  TorResult T = relative_tor(L, M, max_degree);
  json j;
  j["command"] = "tor";
  j["lie"] = L.name;
  j["coefficients"] = coeff.empty() ? "trivial" : coeff;
  j["trusted"] = json::array({0, T.trusted_hi});
  j["dims"] = dims_json(T.dims);
  emit(j, row("tor", L.name) + row("relative tor", dims_str(T.dims) + "  trusted 0.." + std::to_string(T.trusted_hi)));
  return kOk;
}

// ---------- koszul roundtrip ----------

int cmd_koszul(const std::string& lie, const std::string& coeff, int max_degree) {
  require_window(max_degree);
  LieAlgebra L = load_lie_checked(lie);
  if (!(is_reductive(L) && L.compact_presentation && has_compact_structure_constants(L)))
    throw input_error(L.name + ": Koszul duality needs a reductive Lie algebra with a compact presentation");
  SmallCoefficients SC = small_coefficients(L);
  KoszulModule N;
  std::string name = coeff;
  if (coeff == "ground" || coeff.empty()) {
    N = ground_module((int)SC.P.size());
    name = "ground";
  } else if (coeff == "lambda")
    N = lambda_regular_module(SC);
  else if (coeff == "cohomology")
    N = cohomology_module(SC);
  else
    N = invariant_coefficients(SC, load_module_checked(coeff, L)).module;
  KoszulRoundtrip r = koszul_roundtrip(SC, N, max_degree, name);
  json j;
  j["command"] = "koszul roundtrip";
  j["lie"] = L.name;
  j["coefficients"] = name;
  j["homological_window"] = json::array({r.from, r.to});
  j["N"] = dims_json(r.n_dims);
  j["h*t*N"] = dims_json(r.ht_dims);
  j["t*N"] = dims_json(r.m_dims);
  j["t*h*t*N"] = dims_json(r.th_dims);
  j["d_squared"] = r.d_squared;
  j["ok"] = r.ok();
  std::string t = row("koszul roundtrip", L.name + " on " + name);
  t += row("N", dims_str(r.n_dims)) + row("h*t*N", dims_str(r.ht_dims)) + row("t*N", dims_str(r.m_dims)) +
       row("t*h*(t*N)", dims_str(r.th_dims));
  t += row("homological window", std::to_string(r.from) + ".." + std::to_string(r.to));
  t += row("result", r.ok() ? "pass" : "fail");
  emit(j, t);
  return r.ok() ? kOk : kCheckFailed;
}

// ---------- verify ----------

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& lie, const std::string& coeff) {
  SuiteReport R;
  if (suite == "calculus" && !coeff.empty()) {
    if (lie.empty()) throw input_error("--coefficients needs --lie");
    LieAlgebra L = load_lie_checked(lie);
    R = suite_calculus_for(L, io::read_module(coeff, L), coeff);
  } else {
    if (!coeff.empty() || !lie.empty()) throw input_error("--lie/--coefficients apply to --suite calculus only");
    R = run_suite(suite, seed);
  }
  json j;
  j["command"] = "verify";
  j["suite"] = R.suite;
  if (suite == "hpt-random") j["seed"] = seed;
  j["checks"] = json::array();
  std::string t;
  size_t failed = 0;
  for (auto& c : R.checks) {
    json cj{{"name", c.name}, {"residual", c.residual}, {"pass", c.pass()}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["checks"].push_back(cj);
    if (!c.pass()) {
      ++failed;
      t += "FAIL " + c.name + ": residual " + std::to_string(c.residual) + (c.detail.empty() ? "" : " (" + c.detail + ")") + "\n";
    }
  }
  j["pass"] = R.ok();
  t += row("suite " + R.suite, (R.ok() ? "pass" : "fail") + std::string(" (") + std::to_string(R.checks.size() - failed) +
                                   "/" + std::to_string(R.checks.size()) + " checks)");
  emit(j, t);
  return R.ok() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dgx: exact rational models of infinitesimal equivariant cohomology"};
  app.require_subcommand(1);
  app.add_flag("--json", g_json, "machine-readable output");

  std::string lie, coeff, model = "cartan", emb, suite;
  int max_degree = 8, levels = 3;
  std::uint64_t seed = 1;

  auto* lie_cmd = app.add_subcommand("lie", "structure report and Betti numbers of H*(g;Q)");
  lie_cmd->add_option("file", lie, "Lie algebra JSON")->required();
  lie_cmd->add_flag("--json", g_json);

  auto* ext_cmd = app.add_subcommand("ext", "equivariant cohomology Ext_(Cg,g)(Q,V)");
  ext_cmd->add_option("lie", lie, "Lie algebra JSON")->required();
  ext_cmd->add_option("--coefficients", coeff, "coefficient module JSON (default: trivial)");
  ext_cmd->add_option("--model", model, "cartan|weil|small|bar|dual-standard|all")
      ->check(CLI::IsMember({"cartan", "weil", "small", "bar", "dual-standard", "all"}));
  ext_cmd->add_option("--max-degree", max_degree, "top cochain degree");
  ext_cmd->add_option("--levels", levels, "cosimplicial levels for dual-standard (trusted degrees < levels)");
  ext_cmd->add_flag("--json", g_json);

  auto* hom_cmd = app.add_subcommand("homogeneous", "cohomology of K/G");
  hom_cmd->add_option("K", lie, "Lie algebra JSON of K")->required();
  hom_cmd->add_option("--embedding", emb, "embedding JSON g -> K")->required();
  hom_cmd->add_option("--max-degree", max_degree, "top cochain degree");
  hom_cmd->add_flag("--json", g_json);

  auto* tor_cmd = app.add_subcommand("tor", "relative Tor of W'[g] with a left module");
  tor_cmd->add_option("lie", lie, "Lie algebra JSON")->required();
  tor_cmd->add_option("--coefficients", coeff, "module JSON (default: trivial)");
  tor_cmd->add_option("--max-degree", max_degree, "top homological degree");
  tor_cmd->add_flag("--json", g_json);

  auto* kz_cmd = app.add_subcommand("koszul", "Koszul duality functors t* and h*");
  auto* rt_cmd = kz_cmd->add_subcommand("roundtrip", "compare N with h*t*N and t*N with t*h*t*N");
  kz_cmd->require_subcommand(1);
  rt_cmd->add_option("lie", lie, "Lie algebra JSON")->required();
  rt_cmd->add_option("--coefficients", coeff, "ground|lambda|cohomology or a module JSON (acts through V^g)");
  rt_cmd->add_option("--max-degree", max_degree, "top cochain degree");
  rt_cmd->add_flag("--json", g_json);

  auto* ver_cmd = app.add_subcommand("verify", "run a verification suite");
  ver_cmd->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  ver_cmd->add_option("--seed", seed, "seed for randomized suites");
  ver_cmd->add_option("--lie", lie, "Lie algebra JSON (calculus suite on a given module)");
  ver_cmd->add_option("--coefficients", coeff, "module JSON to check (calculus suite)");
  ver_cmd->add_flag("--json", g_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*lie_cmd) return cmd_lie(lie);
    if (*ext_cmd) return cmd_ext(lie, coeff, model, max_degree, levels);
    if (*hom_cmd) return cmd_homogeneous(lie, emb, max_degree);
    if (*tor_cmd) return cmd_tor(lie, coeff, max_degree);
    if (*rt_cmd) return cmd_koszul(lie, coeff, max_degree);
    if (*ver_cmd) return cmd_verify(suite, seed, lie, coeff);
  } catch (const check_failure& e) {
    std::cerr << "dgx: check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const input_error& e) {
    std::cerr << "dgx: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dgx: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const truncation_error& e) {
    std::cerr << "dgx: truncation: " << e.what() << "\n";
    return kTruncation;
  } catch (const hpt_cap_error& e) {
    std::cerr << "dgx: perturbation did not converge: " << e.what() << "\n";
    return kTruncation;
  }
  return kInputError;
}

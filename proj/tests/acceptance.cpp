#include <dgx/contraction.hpp>
#include <dgx/io.hpp>
#include <dgx/suites.hpp>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace dgx;
using io::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && s > limit_s) o.require(false, "over the " + std::to_string((int)limit_s) + " s budget");
  failures += !o.pass;
  std::printf("%s %2d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), s, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
}

void require_suite(Outcome& o, const SuiteReport& R) {
  for (auto& c : R.checks) o.require(c.pass(), R.suite + " " + c.name + " residual " + std::to_string(c.residual));
}

std::vector<int> point(int top) {
  std::vector<int> v(top + 1, 0);
  for (int k = 0; k <= top; k += 4) v[k] = 1;
  return v;
}

std::vector<int> head(const std::vector<int>& v, size_t n) { return {v.begin(), v.begin() + std::min(n, v.size())}; }

IndexedBasis<std::pair<int, int>> tensor_basis(const GradedVectorSpace& C, const GradedVectorSpace& M) {
  std::vector<std::tuple<std::pair<int, int>, int, std::string>> items;
  for (int c = 0; c < C.dim(); ++c)
    for (int m = 0; m < M.dim(); ++m) items.emplace_back(std::pair{c, m}, C.degree(c) + M.degree(m), "");
  return make_basis(std::move(items));
}

ActionByCochain multiplication_by(const SparseMatrix& tau, const Algebra& A, bool right) {
  int n = A.space.dim();
  ActionByCochain act;
  for (int c = 0; c < tau.cols(); ++c) {
    std::vector<SparseVec> cols(n);
    for (int m = 0; m < n; ++m)
      cols[m] = right ? A.product({{m, Q(1)}}, tau.col(c)) : A.product(tau.col(c), {{m, Q(1)}});
    act.push_back(SparseMatrix::from_columns(n, std::move(cols)));
  }
  return act;
}

bool small_applies(const LieAlgebra& L) { return L.compact_presentation && is_reductive(L) && has_compact_structure_constants(L); }

int window(const LieAlgebra& L) { return L.dim() <= 3 ? 8 : 4; }

// d^2 of every complex built from L, with name prefixes for the failure report
void differentials(Outcome& o, const LieAlgebra& L) {
  const std::string& nm = L.name;
  int n = L.dim(), m = window(L);
  auto sq = [&](const SparseMatrix& d, const std::string& what) { o.require((d * d).is_zero(), nm + " " + what); };

  CCE c = lie_cce(L);
  sq(c.calc.d, "CCE");
  sq(forms_module(L).d, "CCE cochains");
  WeilCoalgebra W = weil_coalgebra(L, m);
  sq(W.calc.d, "W'");
  sq(relative_bar(L, m).calc.d, "relative bar");

  // C ⊗_{τ_g} adjoint and Hom^{τ_g}(C, Q)
  GradedVectorSpace adj(std::vector<int>(n, 0), L.basis);
  ActionByCochain left(c.ext.basis.dim(), SparseMatrix(n, n));
  for (int i = 0; i < n; ++i) left[c.ext.basis.at(Mask(1) << i)] = L.ad(i);
  auto TB = tensor_basis(c.ext.basis.space, adj);
  sq(twisted_tensor_differential(c.ext.coalg, c.calc.d, TB, SparseMatrix(n, n), left, -1), "CCE (x)_tau adjoint");
  GradedVectorSpace Q1({0}, {"1"});
  auto HB = hom_basis(c.ext.basis.space, Q1, n);
  ActionByCochain zero(c.ext.basis.dim(), SparseMatrix(1, 1));
  sq(twisted_hom_differential(c.ext.coalg, c.calc.d, HB, Q1, SparseMatrix(1, 1), zero), "Hom^tau(CCE, Q)");

  // S[s^2 g] ⊗_{τ^S} Λ[sg] and Hom^{τ^S}(S[s^2 g], Λ[sg])
  SymmetricCoalgebra S = symmetric_coalgebra(std::vector<int>(n, 2), L.basis, m);
  ExteriorCoalgebra E = exterior_coalgebra(std::vector<int>(n, 1), L.basis, n);
  Algebra A = exterior_algebra(E);
  SparseMatrix tS = symmetric_twisting_cochain(S, E), dS(S.basis.dim(), S.basis.dim());
  auto KB = tensor_basis(S.basis.space, A.space);
  sq(twisted_tensor_differential(S.coalg, dS, KB, A.d, multiplication_by(tS, A, false), -1), "S (x)_tau Lambda");
  auto KH = hom_basis(S.basis.space, A.space, m);
  sq(twisted_hom_differential(S.coalg, dS, KH, A.space, A.d, multiplication_by(tS, A, true)), "Hom^tau(S, Lambda)");
}

void model_differentials(Outcome& o, const std::string& nm, const LieAlgebra& L, const CalculusModule& V, int m) {
  auto cx = [&](const ModelResult& r) { o.require(r.complex.d_squared_residual() == 0, nm + " " + r.model); };
  cx(weil_model(L, V, m).result);
  cx(cartan_model(L, V, m).result);
  cx(bar_model(L, V, m).result);
  cx(dual_standard(L, V, 3).result);
  if (small_applies(L)) cx(small_cartan_model(L, V, m).result);
  o.require(relative_tor(L, V, m).complex.d_squared_residual() == 0, nm + " relative Tor");
}

json suite_json(const SuiteReport& R) {
  json j;
  j["suite"] = R.suite;
  json cs = json::array();
  for (auto& c : R.checks) cs.push_back({{"name", c.name}, {"residual", c.residual}, {"detail", c.detail}});
  j["checks"] = cs;
  return j;
}

json models_json() {
  json j = json::array();
  for (auto& p : model_problems()) {
    json row;
    row["problem"] = p.name;
    row["module"] = io::module_json(p.V, p.L);
    row["weil"] = weil_model(p.L, p.V, 6).result.dims;
    row["cartan"] = cartan_model(p.L, p.V, 6).result.dims;
    row["small"] = small_cartan_model(p.L, p.V, 6).result.dims;
    row["dual-standard"] = dual_standard(p.L, p.V, 3).result.dims;
    j.push_back(row);
  }
  return j;
}

}  // namespace

int main() {
  criterion(1, "differential soundness: d^2 = 0 on every complex, window <= 8", 60, [] {
    Outcome o;
    for (auto& L : builtin_corpus()) {
      differentials(o, L);
      model_differentials(o, L.name + "/trivial", L, trivial_module(L.dim()), window(L));
    }
    for (auto& p : model_problems()) model_differentials(o, p.name, p.L, p.V, 8);
    return o;
  });

  criterion(2, "master equations for tau_g, tau^S, tau^B + tau_g and the transgression", 0, [] {
    Outcome o;
    SuiteReport R = suite_master_equations(builtin_corpus(), 6);
    require_suite(o, R);
    size_t transgressions = 0;
    for (auto& c : R.checks) transgressions += c.name.find("transgression") != std::string::npos;
    o.require(transgressions >= 3, "transgression checked on fewer than three algebras");
    return o;
  });

  criterion(3, "Lie cohomology: abelian2 (1,2,1), heis3 (1,2,2,1), so3 (1,0,0,1)", 0, [] {
    Outcome o;
    struct Row {
      LieAlgebra L;
      std::vector<int> want;
    };
    for (auto& [L, want] : std::vector<Row>{{abelian(2, "abelian2"), {1, 2, 1}}, {heisenberg3(), {1, 2, 2, 1}}, {so3(), {1, 0, 0, 1}}}) {
      auto t0 = std::chrono::steady_clock::now();
      std::vector<int> b = lie_betti(L), c;
      for (int k = 0; k <= L.dim(); ++k) c.push_back(lie_cohomology(L, trivial_module(L.dim()), k));
      double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      o.require(b == want, L.name + " homology " + dims_str(b));
      o.require(c == want, L.name + " cochains " + dims_str(c));
      o.require(s < 1.0, L.name + " took " + std::to_string(s) + " s");
    }
    return o;
  });

  criterion(4, "Weil acyclicity: W'[so3] exact in degrees 1..7, abelian W' = Koszul", 0, [] {
    Outcome o;
    std::vector<int> want(8, 0);
    want[0] = 1;
    std::vector<int> h = weil_homology(weil_coalgebra(so3(), 8), 7);
    o.require(h == want, "so3 " + dims_str(h));
    for (int n : {1, 2, 3})
      o.require(abelian_koszul_iso_residual(weil_coalgebra(abelian(n), 7), koszul_complex(n, 7)) == 0,
                "abelian" + std::to_string(n) + " isomorphism");
    return o;
  });

  criterion(5, "perturbation lemma on 100 seeded random contractions", 30, [] {
    Outcome o;
    require_suite(o, suite_hpt_random(1, 100));
    return o;
  });

  criterion(6, "equivariant contraction for so3 through degree 6", 0, [] {
    Outcome o;
    EquivariantContractionResult R = equivariant_contraction(so3(), 6);
    const ContractionReport& r = R.report;
    o.require(r.chain_nabla + r.chain_pi + r.retraction + r.homotopy == 0, "contraction identities");
    o.require(r.hh + r.h_nabla + r.pi_h == 0, "side conditions");
    o.require(R.opposite_sign == 0, "Dh = 1 - nabla pi");
    o.require(R.equivariance == 0, "lambda_Y h = h lambda_Y");
    o.require(R.harmonic_invariant == 0, "harmonic space invariant");
    o.require(R.target_dims == std::vector<int>{1, 0, 0, 0, 0, 0, 0}, "target " + dims_str(R.target_dims));
    return o;
  });

  criterion(7, "model agreement: dual-standard, Weil, Cartan and small Cartan", 0, [] {
    Outcome o;
    for (auto& p : model_problems()) {
      ModelResult w = weil_model(p.L, p.V, 6).result, c = cartan_model(p.L, p.V, 6).result,
                  s = small_cartan_model(p.L, p.V, 6).result;
      DualStandard d = dual_standard(p.L, p.V, 3);
      o.require(w.dims == c.dims, p.name + " weil " + dims_str(w.dims) + " cartan " + dims_str(c.dims));
      o.require(s.dims == c.dims, p.name + " small " + dims_str(s.dims));
      o.require(d.result.trusted_hi == 2 && d.result.dims == head(c.dims, 3), p.name + " dual-standard " + dims_str(d.result.dims));
      o.require(d.unit_residual == 0 && d.cosimplicial_residual == 0, p.name + " dual-standard identities");
    }
    return o;
  });

  criterion(8, "equivariant point: so3 gives 1 in degrees 0, 4, 8; relative Tor matches", 0, [] {
    Outcome o;
    LieAlgebra L = so3();
    CalculusModule V = trivial_module(3);
    std::vector<int> want = point(8);
    std::vector<int> w = weil_model(L, V, 8).result.dims, c = cartan_model(L, V, 8).result.dims, t = relative_tor(L, V, 8).dims;
    o.require(w == want, "weil " + dims_str(w));
    o.require(c == want, "cartan " + dims_str(c));
    o.require(t == want, "tor " + dims_str(t));
    return o;
  });

  criterion(9, "homogeneous spaces: S^2, S^3 and the point", 0, [] {
    Outcome o;
    LieAlgebra K = so3();
    struct Row {
      std::string name;
      LieAlgebra g;
      SparseMatrix phi;
      std::vector<int> want;
    };
    for (auto& r : std::vector<Row>{{"S^2", so2(), so2_in_so3(), {1, 0, 1}},
                                   {"S^3", abelian(0, "zero"), SparseMatrix(3, 0), {1, 0, 0, 1}},
                                   {"pt", so3(), SparseMatrix::identity(3), {1}}}) {
      HomogeneousResult h = homogeneous_space(r.g, K, r.phi, 6);
      std::vector<int> got = h.cartan.dims;
      while (got.size() > 1 && got.back() == 0) got.pop_back();
      o.require(got == r.want, r.name + " cartan " + dims_str(h.cartan.dims));
      o.require(h.agree && h.small.dims == h.cartan.dims, r.name + " small " + dims_str(h.small.dims));
    }
    return o;
  });

  criterion(10, "simplicial Weil = relative bar, levels 0-2, dim <= 3, total degree <= 3", 120, [] {
    Outcome o;
    require_suite(o, suite_simplicial(3));
    return o;
  });

  criterion(11, "Koszul duality: t*(H*(g)) = Q, round trips on Q, Lambda and the sphere", 0, [] {
    Outcome o;
    require_suite(o, suite_koszul(8));
    return o;
  });

  criterion(12, "determinism: repeated runs give byte-identical JSON", 0, [] {
    Outcome o;
    std::string a = suite_json(suite_hpt_random(5, 40)).dump(2), b = suite_json(suite_hpt_random(5, 40)).dump(2);
    o.require(a == b, "hpt-random report differs between runs");
    std::string m1 = models_json().dump(2), m2 = models_json().dump(2);
    o.require(m1 == m2, "model report differs between runs");
    std::string l1, l2;
    for (auto& L : builtin_corpus()) l1 += io::lie_json(L).dump();
    for (auto& L : builtin_corpus()) l2 += io::lie_json(L).dump();
    o.require(l1 == l2, "Lie algebra serialization differs");
    return o;
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures ? 1 : 0;
}

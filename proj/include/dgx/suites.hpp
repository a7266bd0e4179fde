#pragma once

#include "contraction.hpp"
#include "simplicial.hpp"
#include "small.hpp"

namespace dgx {

// Verification suites shared by `dgx verify` and the acceptance driver.
struct Check {
  std::string name;
  size_t residual = 0;  // nonzero entries, failing elements, or 1 for a failed comparison
  std::string detail;
  bool pass() const { return residual == 0; }
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  bool ok() const {
    for (auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
  void add(std::string name, size_t residual, std::string detail = "") {
    checks.push_back({std::move(name), residual, std::move(detail)});
  }
  void expect(std::string name, bool ok, std::string detail = "") { add(std::move(name), ok ? 0 : 1, std::move(detail)); }
};

inline std::string dims_str(const std::vector<int>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

inline LieAlgebra so2() {
  LieAlgebra L = LieAlgebra::from_constants("so2", {"e3"}, {});
  L.compact_presentation = true;
  return L;
}

inline LieAlgebra so3_plus_so2() {
  LieAlgebra b = LieAlgebra::from_constants("so2", {"f"}, {});
  b.compact_presentation = true;
  return direct_sum(so3(), b, "so3_plus_so2");
}

inline std::vector<LieAlgebra> builtin_corpus() {
  return {abelian(1), abelian(2), heisenberg3(), so3(), so3_plus_so2()};
}

// the span of e3 inside so3
inline SparseMatrix so2_in_so3() { return SparseMatrix::from_triplets(3, 1, {{2, 0, Q(1)}}); }

// coefficient problems: so3 on ℚ, so2 ⊂ so3 on the forms of so3, so3 on its own forms
struct Problem {
  std::string name;
  LieAlgebra L;
  CalculusModule V;
};

inline std::vector<Problem> model_problems() {
  CalculusModule forms = forms_module(so3());
  return {{"so3/trivial", so3(), trivial_module(3)},
          {"so2/sphere", so2(), restrict_calculus(forms, so2_in_so3())},
          {"so3/adjoint_cce", so3(), forms}};
}

namespace detail {

inline void add_calculus(SuiteReport& R, const std::string& what, const CalculusModule& M, const Structure& br) {
  CalculusReport rep = verify_calculus(M, br);
  for (auto& row : rep.rows)
    R.add(what + ": " + row.relation, row.entries, row.witness);
}

inline int default_window(const LieAlgebra& L) { return L.dim() <= 3 ? 6 : 4; }

}  // namespace detail

inline SuiteReport suite_calculus(const std::vector<LieAlgebra>& corpus = builtin_corpus()) {
  SuiteReport R{"calculus"};
  for (auto& L : corpus) {
    int m = detail::default_window(L);
    detail::add_calculus(R, L.name + " CCE", lie_cce(L).calc, L.c);
    detail::add_calculus(R, L.name + " forms", forms_module(L), L.c);
    detail::add_calculus(R, L.name + " W'", weil_coalgebra(L, m).calc, L.c);
    detail::add_calculus(R, L.name + " bar", relative_bar(L, m - 1).calc, L.c);
    detail::add_calculus(R, L.name + " trivial", trivial_module(L.dim()), L.c);
  }
  for (auto& p : model_problems()) detail::add_calculus(R, p.name, p.V, p.L.c);
  return R;
}

inline SuiteReport suite_calculus_for(const LieAlgebra& L, const CalculusModule& V, const std::string& name) {
  SuiteReport R{"calculus"};
  detail::add_calculus(R, name, V, L.c);
  return R;
}

inline SuiteReport suite_master_equations(const std::vector<LieAlgebra>& corpus = builtin_corpus(), int upto = 6) {
  SuiteReport R{"master-equations"};
  for (auto& L : corpus) {
    int n = L.dim();
    int bar_top = std::min(upto, detail::default_window(L));
    CCE c = lie_cce(L);
    TruncatedUCg U = truncated_ucg(L);
    SparseMatrix tg = lie_twisting_cochain(c, U);
    // τ takes values of PBW length <= 1, so every product in the residual stays inside the truncated U[Cg]
    R.add(L.name + " tau_g: D tau = tau cup tau", master_equation_residual(c.ext.coalg, c.calc.d, U.alg, tg, n).entries);
    R.add(L.name + " tau_g: Dt = 1/2 [t,t]", maurer_cartan_residual(c.ext.coalg, c.calc.d, U.alg, tg, n).entries);

    SymmetricCoalgebra S = symmetric_coalgebra(std::vector<int>(n, 2), L.basis, upto);
    ExteriorCoalgebra E = exterior_coalgebra(std::vector<int>(n, 1), L.basis, n);
    Algebra A = exterior_algebra(E);
    SparseMatrix ts = symmetric_twisting_cochain(S, E);
    SparseMatrix zS(S.basis.dim(), S.basis.dim());
    R.add(L.name + " tau^S", master_equation_residual(S.coalg, zS, A, ts, upto).entries);
    R.add(L.name + " tau^S (bracket form)", maurer_cartan_residual(S.coalg, zS, A, ts, upto).entries);

    RelativeBar B = relative_bar(L, bar_top);
    SparseMatrix tb = bar_twisting_cochain(B, U);
    R.add(L.name + " tau^B + tau_g", master_equation_residual(B.coalg, B.calc.d, U.alg, tb, bar_top).entries);
    R.add(L.name + " tau^B + tau_g (bracket form)", maurer_cartan_residual(B.coalg, B.calc.d, U.alg, tb, bar_top).entries);

    if (L.compact_presentation && is_reductive(L)) {
      SmallCoefficients SC = small_coefficients(L);
      R.add(L.name + " transgression", transgression_master_residual(SC, upto).entries);
    }
  }
  return R;
}

inline SuiteReport suite_weil(const std::vector<LieAlgebra>& corpus = builtin_corpus()) {
  SuiteReport R{"weil"};
  for (auto& L : corpus) {
    int m = L.name == "so3" ? 8 : detail::default_window(L);
    WeilCoalgebra W = weil_coalgebra(L, m);
    R.add(L.name + " d^2", (W.d_koszul * W.d_koszul).nnz());
    R.add(L.name + " partial^2", (W.partial * W.partial).nnz());
    R.add(L.name + " d partial + partial d", (W.d_koszul * W.partial + W.partial * W.d_koszul).nnz());
    R.add(L.name + " coderivation", coderivation_residual(W.coalg, W.calc.d, -1, m));
    R.add(L.name + " coassociativity", coassociativity_residual(W.coalg));
    std::vector<int> h = weil_homology(W, m - 1), want(m, 0);
    want[0] = 1;
    R.expect(L.name + " augmented W' exact in degrees 1.." + std::to_string(m - 1), h == want, dims_str(h));
    bool abelian_alg = true;
    for (auto& row : L.c)
      for (auto& v : row)
        if (!v.empty()) abelian_alg = false;
    if (abelian_alg) R.add(L.name + " W' = Koszul resolution", abelian_koszul_iso_residual(W, koszul_complex(L.dim(), m)));
  }
  return R;
}

inline SuiteReport suite_bar(const std::vector<LieAlgebra>& corpus = builtin_corpus()) {
  SuiteReport R{"bar"};
  for (auto& L : corpus) {
    int m = detail::default_window(L) - 1;
    RelativeBar B = relative_bar(L, m);
    R.add(L.name + " D^2", (B.calc.d * B.calc.d).nnz());
    R.add(L.name + " coassociativity", coassociativity_residual(B.coalg));
    R.add(L.name + " counit", counit_residual(B.coalg));
    R.add(L.name + " coderivation", coderivation_residual(B.coalg, B.calc.d, -1, m));
    std::vector<int> h, want(m, 0);
    ChainComplex cx = B.calc.complex();
    for (int j = 0; j < m; ++j) h.push_back(cx.homology_dimension(j));
    want[0] = 1;
    R.expect(L.name + " resolution of the ground field", h == want, dims_str(h));
    // word length 0 is the CCE coalgebra
    CCE c = lie_cce(L);
    size_t base = 0;
    for (int x = 0; x < c.ext.basis.dim(); ++x) {
      int bx = B.basis.find({{}, c.ext.basis.key(x)});
      if (bx < 0) continue;
      VecBuilder v;
      for (auto& [y, q] : c.calc.d.col(x)) v.add(B.basis.at({{}, c.ext.basis.key(y)}), q);
      if (B.calc.d.col(bx) != v.take()) ++base;
    }
    R.add(L.name + " word length 0 = CCE", base);
    // dims two ways: enumerated basis against T'[sIΛ] ⊗ Λ' counted degreewise
    std::vector<int> ldeg;
    std::vector<std::string> llab;
    std::vector<Mask> letters;
    for (Mask a = 1; a < (Mask(1) << L.dim()); ++a) letters.push_back(a);
    std::stable_sort(letters.begin(), letters.end(), [](Mask a, Mask b) { return popcount(a) < popcount(b); });
    for (Mask a : letters) {
      ldeg.push_back(popcount(a) + 1);
      llab.push_back(std::to_string(a));
    }
    TensorCoalgebra T = tensor_coalgebra(GradedVectorSpace(ldeg, llab), m);
    bool same = true;
    for (int d = 0; d <= m; ++d) {
      Z count = 0;
      for (int k = 0; k <= d && k <= L.dim(); ++k) count += Z(T.basis.space.dim(d - k)) * binom(L.dim(), k);
      if (count != Z(B.basis.space.dim(d))) same = false;
    }
    R.expect(L.name + " dims: enumeration = tensor count", same);
  }
  return R;
}

inline SuiteReport suite_iota(const std::vector<LieAlgebra>& corpus = builtin_corpus()) {
  SuiteReport R{"iota"};
  for (auto& L : corpus) {
    int m = detail::default_window(L);
    WeilCoalgebra W = weil_coalgebra(L, m);
    RelativeBar B = relative_bar(L, m);
    SparseMatrix I = iota_map(W, B);
    R.add(L.name + " chain map", (B.calc.d * I - I * W.calc.d).nnz());
    R.add(L.name + " coalgebra map", coalgebra_map_residual(W.coalg, B.coalg, I, m));
    size_t eq = 0;
    for (int y = 0; y < L.dim(); ++y)
      eq += (B.calc.lambda[y] * I - I * W.calc.lambda[y]).nnz() + (B.calc.iota[y] * I - I * W.calc.iota[y]).nnz();
    R.add(L.name + " Cg-equivariant", eq);
    size_t cogen = 0;
    for (int a = 0; a < L.dim(); ++a) {
      Exps e(L.dim(), 0);
      e[a] = 1;
      SparseVec want{{B.basis.at({{Mask(1) << a}, 0}), Q(1)}};
      if (I.col(W.basis.at({e, 0})) != want) ++cogen;
    }
    R.add(L.name + " s^2 y -> [s sy]", cogen);
  }
  return R;
}

inline SuiteReport suite_hpt_random(std::uint64_t seed, int count = 100) {
  SuiteReport R{"hpt-random"};
  size_t base = 0, normalized = 0, perturbed = 0, idem = 0, additive = 0;
  size_t cap_errors = 0;
  for (int k = 0; k < count; ++k) {
    std::uint64_t s = seed * 1000003ULL + k;
    RandomHPTInstance I = random_hpt_instance(s);
    if (!check_contraction(I.base).ok()) ++base;
    Contraction sp = spoil_side_conditions(I.base, I.weight, s ^ 0x9e3779b97f4a7c15ULL);
    Contraction nm = normalize(sp);
    if (!check_contraction(nm).ok()) ++normalized;
    try {
      Contraction P = perturb(nm, I.delta, I.depth + 1);
      if (!check_contraction(P).ok()) ++perturbed;
      int n = I.base.M.dim();
      Contraction Z0 = perturb(I.base, SparseMatrix(n, n), 1);
      if (!(Z0.h == I.base.h && Z0.nabla == I.base.nabla && Z0.pi == I.base.pi && Z0.dN == I.base.dN)) ++idem;
      SparseMatrix d2 = second_perturbation(I, s + 17);
      Contraction P1 = perturb(I.base, I.delta, I.depth + 1), P12 = perturb(P1, d2, I.depth + 1);
      Contraction Ps = perturb(I.base, I.delta + d2, I.depth + 1);
      if (!(P12.h == Ps.h && P12.nabla == Ps.nabla && P12.pi == Ps.pi && P12.dN == Ps.dN)) ++additive;
    } catch (const hpt_cap_error&) {
      ++cap_errors;
    }
  }
  std::string n = std::to_string(count) + " instances, seed " + std::to_string(seed);
  R.add("random contractions valid", base, n);
  R.add("normalization restores side conditions", normalized, n);
  R.add("perturbed data: five identities and side conditions", perturbed, n);
  R.add("delta = 0 is the identity", idem, n);
  R.add("perturbing by d1 then d2 = perturbing by d1 + d2", additive, n);
  R.add("perturbation series terminates within filtration depth", cap_errors, n);
  return R;
}

inline SuiteReport suite_koszul(int max_cochain = 8) {
  SuiteReport R{"koszul-duality"};
  LieAlgebra L = so3();
  SmallCoefficients SC = small_coefficients(L);
  KoszulT t = koszul_t(SC, cohomology_module(SC), max_cochain);
  ChainComplex cx = t.module.complex();
  std::vector<int> dims;
  for (int p = 0; p <= max_cochain; ++p) dims.push_back(cx.homology_dimension(-p));
  std::vector<int> want(max_cochain + 1, 0);
  want[0] = 1;
  R.expect("t*(H*(g)) = Q in degree 0", dims == want, dims_str(dims));
  auto add_round = [&](const KoszulRoundtrip& r) {
    R.add(r.name + " d^2", r.d_squared);
    R.expect(r.name + " h*t* and t*h* preserve cohomology", r.ok(), "N " + dims_str(r.n_dims) + " h*t*N " + dims_str(r.ht_dims) + " M " + dims_str(r.m_dims) + " t*h*M " + dims_str(r.th_dims));
  };
  add_round(koszul_roundtrip(SC, ground_module((int)SC.P.size()), max_cochain, "so3 Q"));
  add_round(koszul_roundtrip(SC, lambda_regular_module(SC), max_cochain, "so3 Lambda"));
  add_round(koszul_roundtrip(SC, cohomology_module(SC), max_cochain, "so3 H*(g)"));
  LieAlgebra g = so2();
  SmallCoefficients SG = small_coefficients(g);
  InvariantCoefficients sphere = invariant_coefficients(SG, restrict_calculus(forms_module(so3()), so2_in_so3()));
  add_round(koszul_roundtrip(SG, sphere.module, max_cochain, "so2 sphere"));
  return R;
}

inline SuiteReport suite_simplicial(int max_total = 3) {
  SuiteReport R{"simplicial-weil"};
  for (auto& L : {abelian(1), abelian(2), heisenberg3(), so3()})
    for (int n = 0; n <= 2; ++n) {
      SimplicialLevelReport r = simplicial_weil_check(L, n, max_total);
      std::string w = L.name + " level " + std::to_string(n);
      R.expect(w + " dims", r.dims_equal);
      R.add(w + " CCE of g^{n+1} = iterated twisted boundary", r.partial_residual);
      R.add(w + " normalized boundary = bar boundary", r.normalized_residual);
      if (n) {
        R.add(w + " faces are chain maps", r.face_chain_residual);
        R.add(w + " alternating face sum = bar part", r.face_sum_residual);
      }
    }
  return R;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"calculus", "master-equations", "weil",         "bar",
                                              "iota",     "hpt-random",       "koszul-duality", "simplicial-weil"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  if (name == "calculus") return suite_calculus();
  if (name == "master-equations") return suite_master_equations();
  if (name == "weil") return suite_weil();
  if (name == "bar") return suite_bar();
  if (name == "iota") return suite_iota();
  if (name == "hpt-random") return suite_hpt_random(seed);
  if (name == "koszul-duality") return suite_koszul();
  if (name == "simplicial-weil") return suite_simplicial();
  throw input_error("unknown suite '" + name + "'");
}

}  // namespace dgx

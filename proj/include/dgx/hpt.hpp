#pragma once

#include "graded.hpp"

#include <random>

namespace dgx {

// the perturbation series did not terminate within the filtration depth (exit code 3)
struct hpt_cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Contraction of (M, dM) onto (N, dN):  π∇ = 1,  ∇π - 1 = dM h + h dM,
// with side conditions h h = 0, h ∇ = 0, π h = 0.
struct Contraction {
  GradedVectorSpace M, N;
  SparseMatrix dM, dN;
  SparseMatrix nabla;  // N -> M
  SparseMatrix pi;     // M -> N
  SparseMatrix h;      // M -> M, degree +1
};

struct ContractionReport {
  size_t chain_nabla = 0, chain_pi = 0, retraction = 0, homotopy = 0;
  size_t hh = 0, h_nabla = 0, pi_h = 0;
  bool ok() const { return !(chain_nabla || chain_pi || retraction || homotopy || hh || h_nabla || pi_h); }
  bool side_ok() const { return !(hh || h_nabla || pi_h); }
};

namespace detail {
inline size_t entries_upto(const SparseMatrix& m, const GradedVectorSpace& src, int upto) {
  size_t n = 0;
  for (int c = 0; c < m.cols(); ++c)
    if (src.degree(c) <= upto) n += m.col(c).size();
  return n;
}
}  // namespace detail

// residuals on source degrees <= upto (pass INT_MAX for finite complexes)
inline ContractionReport check_contraction(const Contraction& C, int upto = 1 << 29) {
  using detail::entries_upto;
  ContractionReport r;
  r.chain_nabla = entries_upto(C.dM * C.nabla - C.nabla * C.dN, C.N, upto);
  r.chain_pi = entries_upto(C.dN * C.pi - C.pi * C.dM, C.M, upto);
  r.retraction = entries_upto(C.pi * C.nabla - SparseMatrix::identity(C.N.dim()), C.N, upto);
  r.homotopy = entries_upto(C.nabla * C.pi - SparseMatrix::identity(C.M.dim()) - (C.dM * C.h + C.h * C.dM), C.M, upto);
  r.hh = entries_upto(C.h * C.h, C.M, upto);
  r.h_nabla = entries_upto(C.h * C.nabla, C.N, upto);
  r.pi_h = entries_upto(C.pi * C.h, C.M, upto);
  return r;
}

// Enforce the side conditions without changing dh + hd:
// h1 = (1-P) h (1-P) with P = ∇π, then h2 = -h1 d h1.
inline Contraction normalize(const Contraction& C) {
  int n = C.M.dim();
  SparseMatrix one = SparseMatrix::identity(n);
  SparseMatrix q = one - C.nabla * C.pi;
  SparseMatrix h1 = q * C.h * q;
  Contraction out = C;
  out.h = -(h1 * C.dM * h1);
  return out;
}

// Σ = Σ_n (hδ)^n; the series must vanish after at most `cap` terms
inline SparseMatrix perturbation_series(const SparseMatrix& h, const SparseMatrix& delta, int cap) {
  int n = h.rows();
  SparseMatrix hd = h * delta;
  SparseMatrix term = SparseMatrix::identity(n), sum = term;
  for (int k = 1;; ++k) {
    term = hd * term;
    if (term.is_zero()) break;
    if (k >= cap)
      throw hpt_cap_error("perturbation series does not terminate within filtration depth " + std::to_string(cap));
    sum = sum + term;
  }
  return sum;
}

// Basic perturbation lemma for dM' = dM + δ.
inline Contraction perturb(const Contraction& C, const SparseMatrix& delta, int cap) {
  SparseMatrix S = perturbation_series(C.h, delta, cap);
  Contraction out;
  out.M = C.M;
  out.N = C.N;
  out.dM = C.dM + delta;
  out.nabla = S * C.nabla;
  out.h = S * C.h;
  out.pi = C.pi + C.pi * delta * S * C.h;
  out.dN = C.dN + C.pi * delta * S * C.nabla;
  return out;
}

// compose C1: M -> N1 with C2: N1 -> N2
inline Contraction compose(const Contraction& C1, const Contraction& C2) {
  Contraction out;
  out.M = C1.M;
  out.N = C2.N;
  out.dM = C1.dM;
  out.dN = C2.dN;
  out.nabla = C1.nabla * C2.nabla;
  out.pi = C2.pi * C1.pi;
  out.h = C1.h + C1.nabla * C2.h * C1.pi;
  return out;
}

// ---------- random filtered instances (property tests and `verify --suite hpt-random`) ----------

struct RandomHPTInstance {
  Contraction base;
  SparseMatrix delta;
  int depth = 0;            // number of filtration layers
  std::vector<int> weight;  // filtration weight of each basis element of M
};

namespace detail {
inline Q small_int(std::mt19937_64& rng, int r) {
  return Q(std::uniform_int_distribution<int>(-r, r)(rng));
}
}  // namespace detail

// Weight layers w < depth, each N ⊕ A ⊕ B with d: A -> B invertible and h = -d^{-1} on B,
// conjugated by a random degree- and weight-preserving automorphism. δ = g d g^{-1} - d with
// g = 1 + n, n strictly lowering weight, so hδ is nilpotent of order <= depth.
inline RandomHPTInstance random_hpt_instance(std::uint64_t seed) {
  using detail::small_int;
  std::mt19937_64 rng(seed);
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  RandomHPTInstance inst;
  inst.depth = uni(2, 4);
  struct Item {
    int w, deg, kind, pair;  // kind 0 = N, 1 = A, 2 = B
  };
  std::vector<Item> items;
  for (int w = 0; w < inst.depth; ++w)
    for (int j = 0; j <= 3; ++j) {
      int nn = uni(0, 2), na = uni(0, 2);
      for (int k = 0; k < nn; ++k) items.push_back({w, j, 0, -1});
      for (int k = 0; k < na; ++k) {
        items.push_back({w, j, 1, (int)items.size() + 1});
        items.push_back({w, j - 1, 2, (int)items.size() - 1});
      }
    }
  std::vector<int> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return items[a].deg < items[b].deg; });
  std::vector<int> pos(items.size());
  for (size_t k = 0; k < order.size(); ++k) pos[order[k]] = (int)k;
  std::vector<int> deg;
  std::vector<std::string> lab;
  std::vector<int> ndeg;
  std::vector<std::string> nlab;
  std::vector<int> npos(items.size(), -1);
  for (int k : order) {
    const Item& it = items[k];
    inst.weight.push_back(it.w);
    deg.push_back(it.deg);
    lab.push_back(std::string("NAB").substr(it.kind, 1) + std::to_string(k) + "w" + std::to_string(it.w));
    if (it.kind == 0) {
      npos[k] = (int)ndeg.size();
      ndeg.push_back(it.deg);
      nlab.push_back(lab.back());
    }
  }
  int n = (int)items.size(), m = (int)ndeg.size();
  GradedVectorSpace M(deg, lab), N(ndeg, nlab);
  // d : A -> B blocks, invertible per (weight, degree): unit upper triangular times ±1
  std::vector<Triplet> dts, hts, nts, pts;
  std::map<std::pair<int, int>, std::vector<int>> group;  // (w, deg of A) -> A items
  for (int k = 0; k < n; ++k)
    if (items[k].kind == 1) group[{items[k].w, items[k].deg}].push_back(k);
  for (auto& [key, as] : group) {
    int r = (int)as.size();
    std::vector<std::vector<Q>> D(r, std::vector<Q>(r));
    for (int i = 0; i < r; ++i) {
      D[i][i] = uni(0, 1) ? 1 : -1;
      for (int j = i + 1; j < r; ++j) D[i][j] = small_int(rng, 2);
    }
    SparseMatrix Dm(r, r);
    {
      std::vector<Triplet> t;
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
          if (D[i][j] != 0) t.emplace_back(i, j, D[i][j]);
      Dm = SparseMatrix::from_triplets(r, r, t);
    }
    SparseMatrix Di = invert(Dm);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        int a = as[j], b = items[as[i]].pair;
        if (Dm.at(i, j) != 0) dts.emplace_back(pos[b], pos[a], Dm.at(i, j));
        int a2 = as[i], b2 = items[as[j]].pair;
        if (Di.at(i, j) != 0) hts.emplace_back(pos[a2], pos[b2], -Di.at(i, j));
      }
  }
  for (int k = 0; k < n; ++k)
    if (items[k].kind == 0) {
      nts.emplace_back(pos[k], npos[k], Q(1));
      pts.emplace_back(npos[k], pos[k], Q(1));
    }
  SparseMatrix d = SparseMatrix::from_triplets(n, n, dts), h = SparseMatrix::from_triplets(n, n, hts);
  SparseMatrix nabla = SparseMatrix::from_triplets(n, m, nts), pi = SparseMatrix::from_triplets(m, n, pts);
  // conjugation and perturbation matrices
  std::vector<Triplet> cts, gts, kts;
  for (int a = 0; a < n; ++a) {
    cts.emplace_back(pos[a], pos[a], Q(1));
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const Item &x = items[a], &y = items[b];
      if (x.deg == y.deg && x.w == y.w && a < b && uni(0, 2) == 0) cts.emplace_back(pos[a], pos[b], small_int(rng, 1));
      if (x.deg == y.deg && x.w < y.w && uni(0, 1) == 0) gts.emplace_back(pos[a], pos[b], small_int(rng, 2));
    }
  }
  SparseMatrix Cm = SparseMatrix::from_triplets(n, n, cts);
  SparseMatrix Ci = invert(Cm);
  SparseMatrix g = SparseMatrix::identity(n) + SparseMatrix::from_triplets(n, n, gts);
  SparseMatrix gi = invert(g);
  Contraction& c = inst.base;
  c.M = M;
  c.N = N;
  c.dM = Cm * d * Ci;
  c.dN = SparseMatrix(m, m);
  c.nabla = Cm * nabla;
  c.pi = pi * Ci;
  c.h = Cm * h * Ci;
  SparseMatrix dd = g * c.dM * gi;
  inst.delta = dd - c.dM;
  return inst;
}

// a further perturbation of dM + δ: conjugate by another weight-lowering g2
inline SparseMatrix second_perturbation(const RandomHPTInstance& inst, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int n = inst.base.M.dim();
  std::vector<Triplet> ts;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (inst.base.M.degree(a) == inst.base.M.degree(b) && inst.weight[a] < inst.weight[b] &&
          std::uniform_int_distribution<int>(0, 1)(rng))
        ts.emplace_back(a, b, detail::small_int(rng, 2));
  SparseMatrix g2 = SparseMatrix::identity(n) + SparseMatrix::from_triplets(n, n, ts);
  SparseMatrix D1 = inst.base.dM + inst.delta;
  return g2 * D1 * invert(g2) - D1;
}

// adds dk - kd to h (k of degree +2, weight preserving); keeps dh + hd but breaks side conditions
inline Contraction spoil_side_conditions(const Contraction& C, const std::vector<int>& weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int n = C.M.dim();
  std::vector<Triplet> ts;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (C.M.degree(a) == C.M.degree(b) + 2 && weight[a] == weight[b] &&
          std::uniform_int_distribution<int>(0, 2)(rng) == 0)
        ts.emplace_back(a, b, Q(std::uniform_int_distribution<int>(-2, 2)(rng)));
  SparseMatrix k = SparseMatrix::from_triplets(n, n, ts);
  Contraction out = C;
  out.h = C.h + C.dM * k - k * C.dM;
  return out;
}

}  // namespace dgx

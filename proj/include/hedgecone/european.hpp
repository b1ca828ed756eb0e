#pragma once

#include <vector>

#include "hedgecone/deferred.hpp"
#include "hedgecone/strategy.hpp"

namespace hedgecone {

// Payoff ζ per scenario-tree node; only leaf entries are read.
struct EuropeanClaim {
  std::vector<Vec> zeta;
};

// Z_T = ζ + K_T, Z_t = (∩ Z_children) + K_t, backward over the scenario tree.
inline std::vector<Polyhedron> european_sets(const ScenarioTree& tree, const Cones& c, const EuropeanClaim& claim) {
  if (claim.zeta.size() != tree.size()) throw std::invalid_argument("claim must have one entry per tree node");
  std::vector<Polyhedron> Z(tree.size());
  for (int t = tree.model().horizon(); t >= 0; --t) {
    const auto& slice = tree.at_time(t);
    parallel_for(slice.size(), [&](std::size_t k) {
      const std::size_t v = slice[k];
      const Polyhedron& K = c.K[tree.model_node(v)];
      if (tree.is_leaf(v)) {
        Z[v] = translate(K, claim.zeta[v]);
        return;
      }
      std::vector<Polyhedron> next;
      for (std::size_t ch : tree.children(v)) next.push_back(Z[ch]);
      Z[v] = minkowski_sum(intersect_all(next), K);
    });
  }
  return Z;
}

inline Rat european_ask(const ScenarioTree& tree, const Cones& c, const EuropeanClaim& claim, std::size_t j) {
  check_currency(tree.model(), j);
  auto v = axis_minimum(european_sets(tree, c, claim)[0], j);
  if (!v) throw PricingError("European ask price is unbounded; the model admits arbitrage");
  return *v;
}

// ρ_ν = Q(ν) S_ν per tree node.
struct NodePrices {
  Rat value;
  std::vector<Vec> rho;
};

namespace detail {

// Variables: non-negative weights on the extreme rays of K*_ν for every tree node.
struct RhoLayout {
  std::vector<std::size_t> start;
  std::vector<const std::vector<Vec>*> gens;
  std::size_t total = 0;
};

inline RhoLayout rho_layout(const ScenarioTree& tree, const Cones& c) {
  RhoLayout L;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const VRep& g = c.K_dual[tree.model_node(v)].vrep();
    if (!g.lines.empty()) throw GeometryError("internal: dual solvency cone contains a line");
    L.start.push_back(L.total);
    L.gens.push_back(&g.rays);
    L.total += g.rays.size();
  }
  return L;
}

inline void add_rho(Vec& row, const RhoLayout& L, std::size_t v, std::size_t coord, const Rat& sign) {
  const auto& g = *L.gens[v];
  for (std::size_t k = 0; k < g.size(); ++k) row[L.start[v] + k] += sign * g[k][coord];
}

// Martingale equalities ρ_μ = Σ ρ_ν and the root normalization ρ^j = 1.
inline void add_martingale_constraints(LinearProgram& lp, const ScenarioTree& tree, const RhoLayout& L, std::size_t j) {
  const std::size_t d = tree.model().dim();
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    for (std::size_t i = 0; i < d; ++i) {
      Vec row = zeros(lp.num_vars);
      add_rho(row, L, v, i, 1);
      for (std::size_t ch : tree.children(v)) add_rho(row, L, ch, i, -1);
      lp.add_eq(row, 0);
    }
  }
  Vec root = zeros(lp.num_vars);
  add_rho(root, L, 0, j, 1);
  lp.add_eq(root, 1);
  for (std::size_t k = 0; k < L.total; ++k) lp.set_nonnegative(k);
}

inline std::vector<Vec> rho_values(const ScenarioTree& tree, const RhoLayout& L, const Vec& w) {
  const std::size_t d = tree.model().dim();
  std::vector<Vec> rho(tree.size(), zeros(d));
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto& g = *L.gens[v];
    for (std::size_t k = 0; k < g.size(); ++k) rho[v] += w[L.start[v] + k] * g[k];
  }
  return rho;
}

}  // namespace detail

// max Σ_leaves ζ·ρ over martingale node prices ρ_ν ∈ K*_ν with ρ^j_root = 1.
inline NodePrices european_dual(const ScenarioTree& tree, const Cones& c, const EuropeanClaim& claim, std::size_t j) {
  check_currency(tree.model(), j);
  if (claim.zeta.size() != tree.size()) throw std::invalid_argument("claim must have one entry per tree node");
  detail::RhoLayout L = detail::rho_layout(tree, c);
  LinearProgram lp(L.total);
  lp.objective = zeros(L.total);
  for (std::size_t leaf : tree.leaves())
    for (std::size_t i = 0; i < tree.model().dim(); ++i) detail::add_rho(lp.objective, L, leaf, i, -claim.zeta[leaf][i]);
  detail::add_martingale_constraints(lp, tree, L, j);
  LpResult r = solve_lp(lp);
  if (r.status == LpStatus::infeasible) throw PricingError("no martingale pair exists; the model admits arbitrage");
  if (!r.optimal()) throw PricingError("European dual is unbounded");
  NodePrices out;
  out.value = -r.optimum;
  out.rho = detail::rho_values(tree, L, r.witness);
  return out;
}

}  // namespace hedgecone

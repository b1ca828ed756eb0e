#pragma once

#include <optional>
#include <vector>

#include "hedgecone/buyer.hpp"
#include "hedgecone/seller.hpp"
#include "hedgecone/stopping.hpp"

namespace hedgecone {

namespace detail {

// Column layout for "one portfolio per non-leaf tree node, plus the scalar endowment x".
struct FlatStrategyLp {
  LinearProgram lp;
  std::vector<std::size_t> col;
  std::size_t x = 0;
  std::size_t d = 0;

  FlatStrategyLp(const ScenarioTree& tree, std::size_t dim) : d(dim) {
    std::size_t total = 0;
    col.assign(tree.size(), 0);
    for (std::size_t v = 0; v < tree.size(); ++v) {
      col[v] = total;
      total += d;
    }
    x = total;
    lp = LinearProgram(total + 1);
  }

  // y_in − y_out + coef·ξ ∈ K (y_out omitted unless with_out); y_in at the root is x e^j
  void require(const ScenarioTree& tree, const Polyhedron& K, std::size_t v, std::size_t j, bool with_out, const Rat& xi_coef) {
    const HRep& h = K.hrep();
    auto p = tree.parent(v);
    auto emit = [&](const Halfspace& s, bool eq) {
      Vec row = zeros(lp.num_vars);
      for (std::size_t i = 0; i < d; ++i) {
        if (p) row[col[*p] + i] += s.normal[i];
        if (with_out) row[col[v] + i] -= s.normal[i];
      }
      if (!p) row[x] += s.normal[j];
      Rat rhs = s.offset - xi_coef * dot(s.normal, tree.xi(v));
      eq ? lp.add_eq(row, rhs) : lp.add_ge(row, rhs);
    };
    for (const auto& s : h.inequalities) emit(s, false);
    for (const auto& s : h.equalities) emit(s, true);
  }
};

}  // namespace detail

// Seller's price under instant exercise. Every node is the exercise node of some ordinary stopping time
// and τ ≡ T forces self-financing at all non-terminal nodes, so the conditions over all τ collapse to
// one LP: y_t − y_{t+1} ∈ K_t (t < T) and y_t − ξ_t ∈ K_t at every node.
inline Rat instant_ask_oracle(const ScenarioTree& tree, const Cones& c, std::size_t j) {
  check_currency(tree.model(), j);
  detail::FlatStrategyLp f(tree, tree.model().dim());
  f.lp.objective[f.x] = 1;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const Polyhedron& K = c.K[tree.model_node(v)];
    if (!tree.is_leaf(v)) f.require(tree, K, v, j, true, 0);
    f.require(tree, K, v, j, false, -1);
  }
  LpResult r = solve_lp(f.lp);
  if (!r.optimal()) throw PricingError("instant ask price is unbounded; the model admits arbitrage");
  return r.optimum;
}

struct OracleOptions {
  std::size_t max_stopping_times = 200'000;
};

// Buyer's price under instant exercise: max over ordinary stopping times τ of the largest amount
// borrowable against y with y_t − y_{t+1} ∈ K_t before τ and y_τ + ξ_τ ∈ K_τ.
inline Rat instant_bid_oracle(const ScenarioTree& tree, const Cones& c, std::size_t j, const OracleOptions& opt = {}) {
  check_currency(tree.model(), j);
  const std::size_t count = count_stopping_times(tree, opt.max_stopping_times + 1);
  if (count > opt.max_stopping_times)
    throw ResourceLimit("instant bid enumeration needs more than " + std::to_string(opt.max_stopping_times) + " stopping times");
  std::vector<OrdinaryStoppingTime> all;
  for_each_stopping_time(tree, [&](const OrdinaryStoppingTime& tau) { all.push_back(tau); });
  std::vector<std::optional<Rat>> best(all.size());
  parallel_for(all.size(), [&](std::size_t k) {
    const OrdinaryStoppingTime& tau = all[k];
    detail::FlatStrategyLp f(tree, tree.model().dim());
    f.lp.objective[f.x] = 1;  // y_0 = x e^j, bid candidate is −x
    std::vector<bool> alive(tree.size(), false);
    for (std::size_t v = 0; v < tree.size(); ++v) {
      auto p = tree.parent(v);
      alive[v] = !p || (alive[*p] && !tau.stop[*p]);
      if (!alive[v]) continue;
      const Polyhedron& K = c.K[tree.model_node(v)];
      if (tau.stop[v]) f.require(tree, K, v, j, false, 1);
      else f.require(tree, K, v, j, true, 0);
    }
    LpResult r = solve_lp(f.lp);
    if (r.optimal()) best[k] = -r.optimum;
  });
  std::optional<Rat> out;
  for (const auto& b : best)
    if (b && (!out || *b > *out)) out = b;
  if (!out) throw PricingError("instant bid price is undefined; the model admits arbitrage");
  return *out;
}

struct PriceQuadruple {
  Rat pi_b, pi_bg, pi_ag, pi_a;
  bool ordered() const { return pi_b <= pi_bg && pi_bg <= pi_ag && pi_ag <= pi_a; }
};

inline PriceQuadruple price_quadruple(const ScenarioTree& tree, const Cones& c, const SellerSets& ss, const BuyerSets& bs,
                                      std::size_t j, const OracleOptions& opt = {}) {
  const Model& m = tree.model();
  PriceQuadruple p{instant_bid_oracle(tree, c, j, opt), bid_price(m, bs, j), ask_price(m, ss, j), instant_ask_oracle(tree, c, j)};
  if (!p.ordered())
    throw PricingError("price ordering violated: " + to_string(p.pi_b) + ", " + to_string(p.pi_bg) + ", " + to_string(p.pi_ag) + ", " +
                       to_string(p.pi_a));
  return p;
}

}  // namespace hedgecone

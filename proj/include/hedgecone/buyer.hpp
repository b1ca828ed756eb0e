#pragma once

#include <map>
#include <string>
#include <vector>

#include "hedgecone/european.hpp"
#include "hedgecone/market.hpp"
#include "hedgecone/seller.hpp"

namespace hedgecone {

// Per model node: U = −ξ + Q, W = ∩ Z_children, V = W + Q, Z = conv(U, V) (Z = U at leaves).
struct BuyerSets {
  std::vector<Polyhedron> U, V, W, Z;
};

inline BuyerSets buyer_sets(const Model& m, const Cones& c) {
  BuyerSets s;
  s.U = backward_induction<Polyhedron>(m, [&](std::size_t i, const auto&) { return translate(c.Q[i], -m.node(i).xi); });
  struct Triple {
    Polyhedron W, V, Z;
  };
  std::vector<Triple> all = backward_induction<Triple>(m, [&](std::size_t i, const std::vector<Triple>& out) {
    if (m.is_leaf(i)) return Triple{Polyhedron::empty_set(m.dim()), Polyhedron::empty_set(m.dim()), s.U[i]};
    std::vector<Polyhedron> next;
    for (std::size_t k : m.successors(i)) next.push_back(out[k].Z);
    Polyhedron W = intersect_all(next);
    Polyhedron V = minkowski_sum(W, c.Q[i]);
    Polyhedron Z = convex_hull_closed(s.U[i], V);
    return Triple{std::move(W), std::move(V), std::move(Z)};
  });
  for (auto& t : all) {
    s.W.push_back(std::move(t.W));
    s.V.push_back(std::move(t.V));
    s.Z.push_back(std::move(t.Z));
  }
  return s;
}

// Buyer's price under gradual exercise: max{−x : x e^j ∈ Z^bd_0}.
inline Rat bid_price(const Model& m, const BuyerSets& s, std::size_t j) {
  check_currency(m, j);
  auto v = axis_minimum(s.Z[0], j);
  if (!v) throw PricingError("bid price is unbounded; the model admits arbitrage");
  return -*v;
}

struct BuyerStrategy {
  MixedStoppingTime chi;
  Strategy y;
  std::vector<Rat> p, lambda;
  std::vector<Vec> z;  // z_t ∈ p_t Z_t, entering each node
  std::map<std::size_t, LiquidationStrategy> v_liq;
};

namespace detail {

// x ∈ β·P for the homogenized set (β ≥ 0 at column beta); β = 0 gives the recession cone.
inline void add_scaled_membership(LinearProgram& lp, const Polyhedron& P, std::size_t offset, std::size_t beta) {
  const HRep& h = P.hrep();
  auto row = [&](const Halfspace& s) {
    Vec r = zeros(lp.num_vars);
    for (std::size_t i = 0; i < s.normal.size(); ++i) r[offset + i] = s.normal[i];
    r[beta] = -s.offset;
    return r;
  };
  for (const auto& s : h.inequalities) lp.add_ge(row(s), 0);
  for (const auto& s : h.equalities) lp.add_eq(row(s), 0);
}

}  // namespace detail

// Forward pass: at each node exercise as much as possible (minimal continuation mass β), then repair
// the Q-rebalancing into K-rebalancing with liquidation strategies.
inline BuyerStrategy extract_strategy(const ScenarioTree& tree, const Cones& c, const BuyerSets& s, const Vec& x0) {
  const Model& m = tree.model();
  const std::size_t d = m.dim();
  const std::size_t n = tree.size();
  if (x0.size() != d) throw std::invalid_argument("endowment has the wrong dimension");
  if (!member(s.Z[0], x0)) throw NotHedging("not a buyer superhedging endowment: " + to_string(x0) + " lies outside Z^bd_0");
  BuyerStrategy b;
  b.chi.chi.assign(n, Rat(0));
  b.p.assign(n, Rat(0));
  b.lambda.assign(n, Rat(0));
  b.z.assign(n, zeros(d));
  std::vector<Vec> w(n, zeros(d));
  b.p[0] = 1;
  b.z[0] = x0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t mv = tree.model_node(v);
    const Rat p = b.p[v];
    if (tree.is_leaf(v)) {
      b.chi.chi[v] = p;
      b.lambda[v] = 0;
      continue;
    }
    // columns: w (d), β; z + (p − β)ξ − w ∈ Q, w ∈ β W, 0 ≤ β ≤ p; minimize β
    const std::size_t B = d;
    LinearProgram lp(d + 1);
    lp.objective = zeros(d + 1);
    lp.objective[B] = 1;
    lp.set_nonnegative(B);
    lp.add_le(unit(d + 1, B), p);
    detail::add_scaled_membership(lp, s.W[mv], 0, B);
    {
      const HRep& h = c.Q[mv].hrep();
      const Vec& xi = tree.xi(v);
      auto row = [&](const Halfspace& q) {
        Vec r = zeros(d + 1);
        for (std::size_t i = 0; i < d; ++i) r[i] = -q.normal[i];
        r[B] = -dot(q.normal, xi);
        return std::make_pair(r, Rat(q.offset - dot(q.normal, b.z[v]) - p * dot(q.normal, xi)));
      };
      for (const auto& q : h.inequalities) {
        auto [r, rhs] = row(q);
        lp.add_ge(r, rhs);
      }
      for (const auto& q : h.equalities) {
        auto [r, rhs] = row(q);
        lp.add_eq(r, rhs);
      }
    }
    LpResult r = solve_lp(lp);
    if (!r.optimal()) throw GeometryError("internal: buyer decomposition infeasible at node '" + tree.id(v) + "'");
    const Rat beta = r.witness[B];
    w[v] = Vec(r.witness.begin(), r.witness.begin() + static_cast<long>(d));
    b.chi.chi[v] = p - beta;
    b.lambda[v] = sgn(p) > 0 ? Rat(beta / p) : Rat(0);
    for (std::size_t k : tree.children(v)) {
      b.p[k] = beta;
      b.z[k] = w[v];
    }
  }
  // y_{t+1} = z_{t+1} + Σ_{r ≤ t} v^r_{t+1}, v^r liquidating d_r = z_r + χ_r ξ_r − z_{r+1}
  b.y.y0 = x0;
  b.y.hold.assign(n, zeros(d));
  for (std::size_t v = 0; v < n; ++v) {
    if (tree.is_leaf(v)) continue;
    b.v_liq.emplace(v, liquidation_strategy(tree, c, v, b.z[v] + b.chi.chi[v] * tree.xi(v) - w[v]));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (tree.is_leaf(v)) continue;
    Vec out = w[v];
    for (std::optional<std::size_t> a = v; a; a = tree.parent(*a)) out += b.v_liq.at(*a).hold.at(v);
    b.y.hold[v] = std::move(out);
  }
  return b;
}

// y_t + χ_t ξ_t − y_{t+1} ∈ K_t at every node with y_{T+1} = 0; empty string when it holds.
inline std::string check_buyer_strategy(const ScenarioTree& tree, const Cones& c, const Strategy& y, const MixedStoppingTime& chi) {
  if (auto e = check_stopping_time(tree, chi); !e.empty()) return e;
  if (y.hold.size() != tree.size()) return "strategy has the wrong number of nodes";
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v) && !is_zero(y.hold[v])) return "non-zero portfolio after the horizon at node '" + tree.id(v) + "'";
    Vec r = incoming(tree, y, v) + chi.chi[v] * tree.xi(v) - y.hold[v];
    if (!member(c.K[tree.model_node(v)], r)) return "rebalancing outside K_t at node '" + tree.id(v) + "'";
  }
  return {};
}

// ζ = −ξ_χ on each leaf path.
inline EuropeanClaim stopped_claim(const ScenarioTree& tree, const MixedStoppingTime& chi) {
  const std::size_t d = tree.model().dim();
  std::vector<Vec> values(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) values[v] = tree.xi(v);
  std::vector<Vec> at = evaluate_at(tree, values, chi, zeros(d));
  EuropeanClaim claim;
  claim.zeta.assign(tree.size(), zeros(d));
  const auto& leaves = tree.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k) claim.zeta[leaves[k]] = -at[k];
  return claim;
}

// χ̂ from the strategy at the bid price, then the minimizing pair from the European dual of −ξ_χ̂.
inline DualCertificate buyer_dual_certificate(const ScenarioTree& tree, const Cones& c, const BuyerSets& s, std::size_t j) {
  const Model& m = tree.model();
  const std::size_t d = m.dim();
  const Rat bid = bid_price(m, s, j);
  BuyerStrategy st = extract_strategy(tree, c, s, -bid * unit(d, j));
  NodePrices rho = european_dual(tree, c, stopped_claim(tree, st.chi), j);
  DualCertificate cert;
  cert.side = "buyer";
  cert.currency = j;
  cert.chi = st.chi;
  std::optional<PricingPair> backup;
  for (std::size_t v = 0; v < tree.size(); ++v) {
    cert.q.push_back(rho.rho[v][j]);
    if (sgn(rho.rho[v][j]) > 0) {
      cert.S.push_back(Rat(1 / rho.rho[v][j]) * rho.rho[v]);
    } else {
      if (!backup) backup = check_no_arbitrage(tree, c, j);
      cert.S.push_back(backup->S[v]);
    }
  }
  cert.value = certificate_value(tree, cert);
  return cert;
}

// Checks χ, the pair (martingale, S ∈ K*\{0}), the stated value, value = bid price, and that χ is
// optimal for the buyer: the minimum over pairs of E((ξ·S)_χ) reaches the stated value.
inline Verdict verify_buyer_certificate(const ScenarioTree& tree, const Cones& c, const BuyerSets& s, const DualCertificate& cert) {
  const Model& m = tree.model();
  const std::size_t d = m.dim();
  const std::size_t j = cert.currency;
  if (j >= d) return {false, "currency index out of range"};
  if (auto e = check_measure(tree, cert); !e.empty()) return {false, e};
  const std::size_t n = tree.size();
  for (std::size_t v = 0; v < n; ++v) {
    if (is_zero(cert.S[v]) || !member(c.K_dual[tree.model_node(v)], cert.S[v])) return {false, "S_t outside K*_t at node '" + tree.id(v) + "'"};
    if (tree.is_leaf(v)) continue;
    Vec sum = zeros(d);
    for (std::size_t k : tree.children(v)) sum += cert.q[k] * cert.S[k];
    if (sum != cert.q[v] * cert.S[v]) return {false, "martingale identity fails at node '" + tree.id(v) + "'"};
  }
  const Rat value = certificate_value(tree, cert);
  if (value != cert.value) return {false, "value mismatch: stated " + to_string(cert.value) + ", recomputed " + to_string(value)};
  const Rat bid = bid_price(m, s, j);
  if (value != bid) return {false, "value mismatch: certificate " + to_string(value) + ", bid price " + to_string(bid)};
  const Rat inner = -european_ask(tree, c, stopped_claim(tree, cert.chi), j);
  if (inner != value) return {false, "value mismatch: the pair does not minimize E((xi.S)_chi), minimum is " + to_string(inner)};
  return {};
}

}  // namespace hedgecone

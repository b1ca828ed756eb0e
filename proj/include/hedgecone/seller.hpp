#pragma once

#include <map>
#include <string>
#include <vector>

#include "hedgecone/deferred.hpp"
#include "hedgecone/stopping.hpp"
#include "hedgecone/strategy.hpp"

namespace hedgecone {

// Per model node: U = ξ + Q, W = ∩ Z_children, V = W + Q, Z = U ∩ V (Z = U at leaves).
struct SellerSets {
  std::vector<Polyhedron> U, V, W, Z;
};

inline SellerSets seller_sets(const Model& m, const Cones& c) {
  SellerSets s;
  s.U = backward_induction<Polyhedron>(m, [&](std::size_t i, const auto&) { return translate(c.Q[i], m.node(i).xi); });
  s.Z.resize(m.size());
  s.V.resize(m.size());
  s.W.resize(m.size());
  struct Triple {
    Polyhedron W, V, Z;
  };
  std::vector<Triple> all = backward_induction<Triple>(m, [&](std::size_t i, const std::vector<Triple>& out) {
    if (m.is_leaf(i)) return Triple{Polyhedron::empty_set(m.dim()), Polyhedron::empty_set(m.dim()), s.U[i]};
    std::vector<Polyhedron> next;
    for (std::size_t k : m.successors(i)) next.push_back(out[k].Z);
    Polyhedron W = intersect_all(next);
    Polyhedron V = minkowski_sum(W, c.Q[i]);
    Polyhedron Z = intersect(s.U[i], V);
    return Triple{std::move(W), std::move(V), std::move(Z)};
  });
  for (std::size_t i = 0; i < m.size(); ++i) {
    s.W[i] = std::move(all[i].W);
    s.V[i] = std::move(all[i].V);
    s.Z[i] = std::move(all[i].Z);
  }
  return s;
}

// Seller's price under gradual exercise, in currency j (zero-based).
inline Rat ask_price(const Model& m, const SellerSets& s, std::size_t j) {
  check_currency(m, j);
  auto v = axis_minimum(s.Z[0], j);
  if (!v) throw PricingError("ask price is unbounded; the model admits arbitrage");
  return *v;
}

// A Φ^ad strategy with its liquidation bundles; z_liq[μ] unwinds y_t − y_{t+1}, x_liq[μ] unwinds y_t − ξ_t.
struct SellerHedge {
  Strategy y;
  std::map<std::size_t, LiquidationStrategy> z_liq, x_liq;
};

inline SellerHedge extract_hedge(const ScenarioTree& tree, const Cones& c, const SellerSets& s, const Vec& x0) {
  const Model& m = tree.model();
  const std::size_t d = m.dim();
  if (x0.size() != d) throw std::invalid_argument("endowment has the wrong dimension");
  if (!member(s.Z[0], x0)) throw NotHedging("not a superhedging endowment: " + to_string(x0) + " lies outside Z^ad_0");
  SellerHedge h;
  h.y.y0 = x0;
  h.y.hold.assign(tree.size(), zeros(d));
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const std::size_t mv = tree.model_node(v);
    const Vec& in = incoming(tree, h.y, v);
    if (!tree.is_leaf(v)) {
      LinearProgram lp(d);
      lp.objective = Vec(d, Rat(1));
      detail::add_cone_constraints(lp, s.W[mv], 0, zeros(d));
      detail::add_cone_constraints(lp, c.Q[mv], 0, -in, -1);
      LpResult r = detail::solve_with_fallback(std::move(lp));
      if (!r.optimal()) throw GeometryError("internal: no successor portfolio in W at node '" + tree.id(v) + "'");
      h.y.hold[v] = r.witness;
      h.z_liq.emplace(v, liquidation_strategy(tree, c, v, in - h.y.hold[v]));
    }
    h.x_liq.emplace(v, liquidation_strategy(tree, c, v, in - tree.xi(v)));
  }
  return h;
}

// Empty string when the Φ^ad conditions and all liquidation bundles check out.
inline std::string check_hedge(const ScenarioTree& tree, const Cones& c, const SellerHedge& h) {
  if (h.y.hold.size() != tree.size()) return "hedge has the wrong number of nodes";
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const Polyhedron& Q = c.Q[tree.model_node(v)];
    const Vec& in = incoming(tree, h.y, v);
    if (!member(Q, in - tree.xi(v))) return "y_t - xi_t outside Q_t at node '" + tree.id(v) + "'";
    if (tree.is_leaf(v)) {
      if (!is_zero(h.y.hold[v])) return "non-zero portfolio after the horizon at node '" + tree.id(v) + "'";
      continue;
    }
    if (!member(Q, in - h.y.hold[v])) return "y_t - y_{t+1} outside Q_t at node '" + tree.id(v) + "'";
    for (const auto* bundle : {&h.z_liq, &h.x_liq}) {
      auto it = bundle->find(v);
      if (it == bundle->end()) return "missing liquidation strategy at node '" + tree.id(v) + "'";
      if (auto e = check_liquidation(tree, c, it->second); !e.empty()) return e;
    }
  }
  return {};
}

// Y^χ_t = χ*_t y_t + Σ_{s<t} χ*_{s+1} z^s_t + Σ_{s<t} χ_s x^s_t, as a strategy on the tree.
inline Strategy gradual_hedge_evaluate(const ScenarioTree& tree, const SellerHedge& h, const MixedStoppingTime& chi) {
  validate(tree, chi);
  const std::size_t d = tree.model().dim();
  std::vector<Rat> star = chi_star(tree, chi);
  Strategy Y;
  Y.y0 = h.y.y0;
  Y.hold.assign(tree.size(), zeros(d));
  for (std::size_t v = 0; v < tree.size(); ++v) {
    Vec out = (star[v] - chi.chi[v]) * h.y.hold[v];
    for (std::optional<std::size_t> a = v; a; a = tree.parent(*a)) {
      if (auto z = h.z_liq.find(*a); z != h.z_liq.end()) out += (star[*a] - chi.chi[*a]) * z->second.hold.at(v);
      if (auto x = h.x_liq.find(*a); x != h.x_liq.end()) out += chi.chi[*a] * x->second.hold.at(v);
    }
    Y.hold[v] = std::move(out);
  }
  return Y;
}

// Rebalancing condition Y_t − χ_t ξ_t − Y_{t+1} ∈ K_t at every node; empty string when it holds.
inline std::string check_gradual(const ScenarioTree& tree, const Cones& c, const Strategy& Y, const MixedStoppingTime& chi) {
  for (std::size_t v = 0; v < tree.size(); ++v) {
    Vec r = incoming(tree, Y, v) - chi.chi[v] * tree.xi(v) - Y.hold[v];
    if (!member(c.K[tree.model_node(v)], r)) return "rebalancing outside K_t at node '" + tree.id(v) + "'";
    if (tree.is_leaf(v) && !is_zero(Y.hold[v])) return "non-zero portfolio after the horizon at node '" + tree.id(v) + "'";
  }
  return {};
}

// Mixed stopping time, node weights q (Q of the node's event) and price process S, all per tree node.
struct DualCertificate {
  std::string side;
  std::size_t currency = 0;
  Rat value;
  MixedStoppingTime chi;
  std::vector<Rat> q;
  std::vector<Vec> S;
};

struct SellerDualInternals {
  std::vector<Rat> lambda;
  std::vector<Vec> y;
  std::vector<std::optional<Vec>> x;
};

namespace detail {

// Points/rays/lines of P as linear constraints on a dual variable block.
inline void add_dual_of_recession(LinearProgram& lp, const Polyhedron& P, std::size_t offset) {
  const VRep& v = P.vrep();
  auto row = [&](const Vec& g) {
    Vec r = zeros(lp.num_vars);
    for (std::size_t i = 0; i < g.size(); ++i) r[offset + i] = g[i];
    return r;
  };
  for (const Vec& r : v.rays) lp.add_ge(row(r), 0);
  for (const Vec& l : v.lines) lp.add_eq(row(l), 0);
}

// θ ≤ s·p for every point p of P, with θ at column theta
inline void add_point_bounds(LinearProgram& lp, const Polyhedron& P, std::size_t offset, std::size_t theta) {
  for (const Vec& p : P.vrep().points) {
    Vec r = zeros(lp.num_vars);
    for (std::size_t i = 0; i < p.size(); ++i) r[offset + i] = p[i];
    r[theta] = -1;
    lp.add_ge(r, 0);
  }
}

}  // namespace detail

inline DualCertificate seller_dual_certificate(const ScenarioTree& tree, const Cones& c, const SellerSets& s, std::size_t j,
                                               SellerDualInternals* internals = nullptr) {
  const Model& m = tree.model();
  const std::size_t d = m.dim();
  check_currency(m, j);
  const std::size_t n = tree.size();
  SellerDualInternals in;
  in.lambda.assign(n, Rat(0));
  in.y.assign(n, zeros(d));
  in.x.assign(n, std::nullopt);

  // root: maximize min_{z ∈ Z_0} s·z over s ∈ σ_j(Q*_0)
  {
    const Polyhedron& Z0 = s.Z[tree.model_node(0)];
    LinearProgram lp(d + 1);
    lp.objective = zeros(d + 1);
    lp.objective[d] = -1;
    detail::add_dual_of_recession(lp, Z0, 0);
    detail::add_point_bounds(lp, Z0, 0, d);
    detail::add_dual_of_recession(lp, c.Q[tree.model_node(0)], 0);
    lp.add_eq(unit(d + 1, j), 1);
    LpResult r = solve_lp(lp);
    if (!r.optimal()) throw PricingError("seller dual: root problem is not solvable; the model admits arbitrage");
    in.y[0] = Vec(r.witness.begin(), r.witness.begin() + static_cast<long>(d));
  }

  DualCertificate cert;
  cert.side = "seller";
  cert.currency = j;
  cert.chi.chi.assign(n, Rat(0));
  cert.q.assign(n, Rat(0));
  cert.S.assign(n, zeros(d));
  cert.q[0] = 1;
  std::vector<Rat> star(n, Rat(0));
  star[0] = 1;

  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t mv = tree.model_node(v);
    const Vec& y = in.y[v];
    if (tree.is_leaf(v)) {
      in.lambda[v] = 1;
      cert.S[v] = y;
      cert.chi.chi[v] = star[v];
      continue;
    }
    // a = λS ∈ Q*, b = (1−λ)x ∈ dom V, a + b = y; maximize a·ξ + min_{p ∈ V} b·p
    const std::size_t A = 0, B = d, TH = 2 * d;
    LinearProgram lp(2 * d + 1);
    lp.objective = zeros(2 * d + 1);
    for (std::size_t i = 0; i < d; ++i) lp.objective[A + i] = -tree.xi(v)[i];
    lp.objective[TH] = -1;
    for (std::size_t i = 0; i < d; ++i) {
      Vec r = zeros(2 * d + 1);
      r[A + i] = 1;
      r[B + i] = 1;
      lp.add_eq(r, y[i]);
    }
    detail::add_dual_of_recession(lp, c.Q[mv], A);
    detail::add_dual_of_recession(lp, s.V[mv], B);
    detail::add_point_bounds(lp, s.V[mv], B, TH);
    LpResult r = solve_lp(lp);
    if (!r.optimal()) throw PricingError("seller dual: decomposition failed at node '" + tree.id(v) + "'");
    Vec a(r.witness.begin(), r.witness.begin() + static_cast<long>(d));
    Vec b(r.witness.begin() + static_cast<long>(d), r.witness.begin() + static_cast<long>(2 * d));
    const Rat lambda = a[j];
    in.lambda[v] = lambda;
    cert.S[v] = sgn(lambda) > 0 ? Rat(1 / lambda) * a : y;
    cert.chi.chi[v] = lambda * star[v];
    const auto& kids = tree.children(v);
    for (std::size_t k : kids) star[k] = star[v] - cert.chi.chi[v];

    if (lambda == 1) {
      // no continuation value to split; successors get uniform weights and slice vertices
      for (std::size_t k : kids) {
        cert.q[k] = cert.q[v] / Rat(static_cast<long>(kids.size()));
        in.y[k] = slice_point(c.Q_dual[tree.model_node(k)], j);
      }
      continue;
    }
    Vec x = Rat(1 / (1 - lambda)) * b;
    in.x[v] = x;
    // x = Σ c^ν with c^ν ∈ dom Z_ν, maximizing Σ min_{p ∈ Z_ν} c^ν·p
    const std::size_t K = kids.size();
    LinearProgram cl(K * (d + 1));
    cl.objective = zeros(K * (d + 1));
    for (std::size_t i = 0; i < d; ++i) {
      Vec row = zeros(K * (d + 1));
      for (std::size_t k = 0; k < K; ++k) row[k * d + i] = 1;
      cl.add_eq(row, x[i]);
    }
    for (std::size_t k = 0; k < K; ++k) {
      const Polyhedron& Zk = s.Z[tree.model_node(kids[k])];
      const std::size_t th = K * d + k;
      cl.objective[th] = -1;
      detail::add_dual_of_recession(cl, Zk, k * d);
      detail::add_point_bounds(cl, Zk, k * d, th);
    }
    LpResult cr = solve_lp(cl);
    if (!cr.optimal()) throw PricingError("seller dual: successor split failed at node '" + tree.id(v) + "'");
    for (std::size_t k = 0; k < K; ++k) {
      Vec ck(cr.witness.begin() + static_cast<long>(k * d), cr.witness.begin() + static_cast<long>((k + 1) * d));
      const Rat qk = ck[j];
      cert.q[kids[k]] = cert.q[v] * qk;
      in.y[kids[k]] = sgn(qk) > 0 ? Rat(1 / qk) * ck : slice_point(c.Q_dual[tree.model_node(kids[k])], j);
    }
  }

  cert.value = 0;
  for (std::size_t v = 0; v < n; ++v) cert.value += cert.q[v] * cert.chi.chi[v] * dot(tree.xi(v), cert.S[v]);
  if (internals) *internals = std::move(in);
  return cert;
}

// Σ_ν Q(ν) χ(ν) ξ(ν)·S(ν)
inline Rat certificate_value(const ScenarioTree& tree, const DualCertificate& cert) {
  Rat v = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) v += cert.q[i] * cert.chi.chi[i] * dot(tree.xi(i), cert.S[i]);
  return v;
}

// Shape checks shared by both sides; empty string when fine.
inline std::string check_measure(const ScenarioTree& tree, const DualCertificate& cert) {
  const std::size_t n = tree.size();
  if (cert.q.size() != n || cert.S.size() != n) return "certificate covers " + std::to_string(cert.q.size()) + " nodes, the tree has " + std::to_string(n);
  if (auto e = check_stopping_time(tree, cert.chi); !e.empty()) return e;
  if (cert.q[0] != 1) return "measure weight of the root is " + to_string(cert.q[0]) + ", not 1";
  for (std::size_t v = 0; v < n; ++v) {
    if (sgn(cert.q[v]) < 0) return "negative measure weight at node '" + tree.id(v) + "'";
    if (cert.S[v].size() != tree.model().dim()) return "price vector of the wrong dimension at node '" + tree.id(v) + "'";
    if (cert.S[v][cert.currency] != 1) return "S^j != 1 at node '" + tree.id(v) + "'";
    if (tree.is_leaf(v)) continue;
    Rat sum = 0;
    for (std::size_t k : tree.children(v)) sum += cert.q[k];
    if (sum != cert.q[v]) return "measure weights do not add up at node '" + tree.id(v) + "'";
  }
  return {};
}

struct Verdict {
  bool ok = true;
  std::string violation;
};

// Checks, in order: measure shape, value = stated value = ask price, S ∈ Q*\{0}, E_Q(S^{χ*}_{t+1}|F_t) ∈ Q*_t,
// and weak duality against the extracted hedge at the ask price.
inline Verdict verify_seller_certificate(const ScenarioTree& tree, const Cones& c, const SellerSets& s, const DualCertificate& cert) {
  const Model& m = tree.model();
  const std::size_t d = m.dim();
  const std::size_t j = cert.currency;
  if (j >= d) return {false, "currency index out of range"};
  if (auto e = check_measure(tree, cert); !e.empty()) return {false, e};
  const Rat value = certificate_value(tree, cert);
  if (value != cert.value) return {false, "value mismatch: stated " + to_string(cert.value) + ", recomputed " + to_string(value)};
  const Rat ask = ask_price(m, s, j);
  if (value != ask) return {false, "value mismatch: certificate " + to_string(value) + ", ask price " + to_string(ask)};
  const std::size_t n = tree.size();
  for (std::size_t v = 0; v < n; ++v)
    if (!member(c.Q_dual[tree.model_node(v)], cert.S[v])) return {false, "S_t outside Q*_t at node '" + tree.id(v) + "'"};
  // tails[v] = Σ over the subtree of v of Q χ S, and the matching payoff tail
  std::vector<Vec> tail(n, zeros(d));
  std::vector<Rat> pay(n, Rat(0));
  for (std::size_t v = n; v-- > 0;) {
    tail[v] += cert.q[v] * cert.chi.chi[v] * cert.S[v];
    pay[v] += cert.q[v] * cert.chi.chi[v] * dot(tree.xi(v), cert.S[v]);
    if (auto p = tree.parent(v)) {
      tail[*p] += tail[v];
      pay[*p] += pay[v];
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (sgn(cert.q[v]) == 0 || tree.is_leaf(v)) continue;
    Vec next = zeros(d);
    for (std::size_t k : tree.children(v)) next += tail[k];
    if (!member(c.Q_dual[tree.model_node(v)], next)) return {false, "E_Q(S^chi*_{t+1}|F_t) outside Q*_t at node '" + tree.id(v) + "'"};
  }
  SellerHedge h = extract_hedge(tree, c, s, ask * unit(d, j));
  for (std::size_t v = 0; v < n; ++v) {
    if (sgn(cert.q[v]) == 0) continue;
    if (dot(incoming(tree, h.y, v), tail[v]) < pay[v]) return {false, "weak duality fails at node '" + tree.id(v) + "'"};
  }
  return {};
}

}  // namespace hedgecone

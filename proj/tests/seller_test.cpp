#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "random_models.hpp"

using namespace hedgecone;
using namespace hedgecone::testing;

namespace {

struct Toy {
  Model m = toy_model();
  ScenarioTree tree{m};
  Cones c = compute_cones(m);
  SellerSets s = seller_sets(m, c);
  std::size_t at(const char* id) const { return *tree.find(id); }
};

MixedStoppingTime chi_with_u(const Toy& t, const Rat& at_u) {
  MixedStoppingTime x{std::vector<Rat>(t.tree.size(), Rat(0))};
  x.chi[t.at("U")] = at_u;
  x.chi[t.at("UU")] = x.chi[t.at("UD")] = 1 - at_u;
  x.chi[t.at("DU")] = x.chi[t.at("DD")] = 1;
  return x;
}

}  // namespace

TEST(SellerSets, ExampleCells) {
  Toy t;
  EXPECT_TRUE(t.s.Z[0] == hpoly(2, {{5, 1, 5}}));
  EXPECT_TRUE(t.s.Z[t.m.index_of("D")] == hpoly(2, {{2, 1, 0}}));
  // Z ⊆ U = ξ_U + Q_U forces 4x₁ + x₂ ≥ 4 at U
  const std::size_t u = t.m.index_of("U");
  EXPECT_TRUE(t.s.U[u] == hpoly(2, {{4, 1, 4}, {8, 1, 4}}));
  EXPECT_TRUE(contains(t.s.U[u], t.s.Z[u]));
  EXPECT_TRUE(t.s.Z[u] == hpoly(2, {{4, 1, 4}, {8, 1, 8}}));
  EXPECT_TRUE(t.s.Z[t.m.index_of("UU")] == hpoly(2, {{4, 1, 0}, {8, 1, 8}}));
}

TEST(SellerSets, LeavesAreShiftedSolvencyCones) {
  Toy t;
  for (std::size_t leaf : t.m.at_time(2)) EXPECT_TRUE(t.s.Z[leaf] == translate(t.c.K[leaf], t.m.node(leaf).xi));
}

TEST(SellerSets, ZeroPayoffGivesDeferredCones) {
  Model m = without_payoff(toy_model());
  Cones c = compute_cones(m);
  SellerSets s = seller_sets(m, c);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_TRUE(s.Z[i] == c.Q[i]);
  EXPECT_EQ(ask_price(m, s, 1), 0);
  EXPECT_EQ(ask_price(m, s, 0), 0);
}

TEST(AskPrice, Example) {
  Toy t;
  EXPECT_EQ(ask_price(t.m, t.s, 1), 5);
  EXPECT_EQ(ask_price(t.m, t.s, 0), 1);
  EXPECT_THROW(ask_price(t.m, t.s, 2), std::invalid_argument);
}

TEST(AskPrice, MonotoneInPayoff) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 12; ++k) {
    RandomModel rm = random_model(rng, 2, 1 + k % 3);
    Cones c = compute_cones(rm.model);
    const Rat before = ask_price(rm.model, seller_sets(rm.model, c), 0);
    std::vector<ModelNode> nodes = rm.model.nodes();
    auto& n = nodes[std::uniform_int_distribution<std::size_t>(0, nodes.size() - 1)(rng)];
    n.xi[std::uniform_int_distribution<std::size_t>(0, 1)(rng)] += std::uniform_int_distribution<int>(1, 3)(rng);
    Model bumped = Model::build(2, rm.model.horizon(), std::move(nodes));
    EXPECT_GE(ask_price(bumped, seller_sets(bumped, c), 0), before);
  }
}

TEST(ExtractHedge, ExampleAtAskPrice) {
  Toy t;
  SellerHedge h = extract_hedge(t.tree, t.c, t.s, v({0, 5}));
  EXPECT_EQ(check_hedge(t.tree, t.c, h), "");
  EXPECT_EQ(h.y.hold[0], v({1, 0}));
}

TEST(ExtractHedge, RichEndowmentAndRejection) {
  Toy t;
  SellerHedge h = extract_hedge(t.tree, t.c, t.s, v({0, 100}));
  EXPECT_EQ(check_hedge(t.tree, t.c, h), "");
  try {
    extract_hedge(t.tree, t.c, t.s, v({0, 4}));
    FAIL() << "expected NotHedging";
  } catch (const NotHedging& e) {
    EXPECT_NE(std::string(e.what()).find("not a superhedging endowment"), std::string::npos);
  }
}

TEST(ExtractHedge, TamperedHedgeIsRejected) {
  Toy t;
  SellerHedge h = extract_hedge(t.tree, t.c, t.s, v({0, 5}));
  h.y.hold[t.at("U")] = v({0, 0});
  EXPECT_FALSE(check_hedge(t.tree, t.c, h).empty());
}

TEST(GradualHedge, PortfolioAfterUpNode) {
  Toy t;
  SellerHedge h = extract_hedge(t.tree, t.c, t.s, v({0, 5}));
  for (const Rat& c1 : {Rat(0), Rat(1, 3), Rat(1, 2), Rat(3, 4), Rat(1)}) {
    MixedStoppingTime x = chi_with_u(t, c1);
    Strategy Y = gradual_hedge_evaluate(t.tree, h, x);
    EXPECT_EQ(check_gradual(t.tree, t.c, Y, x), "");
    EXPECT_EQ(Y.hold[0], v({1, 0}));
    EXPECT_EQ(Y.hold[t.at("U")], v({1, -4 * c1}));
  }
}

TEST(GradualHedge, ImmediateExercise) {
  Toy t;
  SellerHedge h = extract_hedge(t.tree, t.c, t.s, v({0, 5}));
  MixedStoppingTime now = from_ordinary(t.tree, stop_at_time(t.tree, 0));
  Strategy Y = gradual_hedge_evaluate(t.tree, h, now);
  EXPECT_EQ(check_gradual(t.tree, t.c, Y, now), "");
}

TEST(GradualHedge, AllStoppingTimesOnRandomModels) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    RandomModel rm = random_model(rng, 2 + k % 2, 1 + k % 3);
    ScenarioTree tree(rm.model);
    Cones c = compute_cones(rm.model);
    SellerSets s = seller_sets(rm.model, c);
    SellerHedge h = extract_hedge(tree, c, s, ask_price(rm.model, s, 0) * unit(rm.model.dim(), 0));
    for_each_stopping_time(tree, [&](const OrdinaryStoppingTime& tau) {
      MixedStoppingTime x = from_ordinary(tree, tau);
      EXPECT_EQ(check_gradual(tree, c, gradual_hedge_evaluate(tree, h, x), x), "");
    });
  }
}

TEST(GradualHedge, NonAnticipating) {
  std::mt19937_64 rng(13);
  RandomModel rm = random_model(rng, 2, 3);
  ScenarioTree tree(rm.model);
  Cones c = compute_cones(rm.model);
  SellerSets s = seller_sets(rm.model, c);
  SellerHedge h = extract_hedge(tree, c, s, ask_price(rm.model, s, 0) * unit(2, 0));
  for (int k = 0; k < 10; ++k) {
    MixedStoppingTime a = random_stopping_time(rng, tree), b = random_stopping_time(rng, tree);
    // b copies a up to time 1 and then stops at time 2
    for (std::size_t v = 0; v < tree.size(); ++v) {
      if (tree.time(v) <= 1) b.chi[v] = a.chi[v];
      else if (tree.time(v) == 2) b.chi[v] = chi_star(tree, a)[v];
      else b.chi[v] = 0;
    }
    ASSERT_EQ(check_stopping_time(tree, b), "");
    Strategy ya = gradual_hedge_evaluate(tree, h, a), yb = gradual_hedge_evaluate(tree, h, b);
    for (std::size_t v = 0; v < tree.size(); ++v)
      if (tree.time(v) <= 1) EXPECT_EQ(ya.hold[v], yb.hold[v]);
    EXPECT_EQ(check_gradual(tree, c, yb, b), "");
  }
}

TEST(GradualHedge, RejectsInvalidStoppingTime) {
  Toy t;
  SellerHedge h = extract_hedge(t.tree, t.c, t.s, v({0, 5}));
  MixedStoppingTime bad{std::vector<Rat>(t.tree.size(), Rat(0))};
  EXPECT_THROW(gradual_hedge_evaluate(t.tree, h, bad), StoppingError);
}

TEST(SellerDual, ExampleCertificate) {
  Toy t;
  SellerDualInternals in;
  DualCertificate cert = seller_dual_certificate(t.tree, t.c, t.s, 1, &in);
  EXPECT_EQ(cert.value, 5);
  EXPECT_TRUE(verify_seller_certificate(t.tree, t.c, t.s, cert).ok);
  // regression reference: the printed optimum
  EXPECT_EQ(cert.chi.chi[t.at("U")], Rat(3, 4));
  EXPECT_EQ(cert.chi.chi[t.at("UU")], Rat(1, 4));
  EXPECT_EQ(cert.q[t.at("U")], 1);
  EXPECT_EQ(cert.S[t.at("U")], v({4, 1}));
  EXPECT_EQ(in.lambda[t.at("U")], Rat(3, 4));
}

TEST(SellerDual, PrintedCertificateVerifies) {
  Toy t;
  DualCertificate cert = certificate_from_json(t.tree, read_json_file(data_path("toy_seller_certificate.json")));
  Verdict v = verify_seller_certificate(t.tree, t.c, t.s, cert);
  EXPECT_TRUE(v.ok) << v.violation;
}

TEST(SellerDual, TamperedStoppingTimeChangesValue) {
  Toy t;
  DualCertificate cert = certificate_from_json(t.tree, read_json_file(data_path("toy_seller_certificate.json")));
  cert.chi.chi[t.at("U")] = 1;
  cert.chi.chi[t.at("UU")] = cert.chi.chi[t.at("UD")] = 0;
  EXPECT_EQ(certificate_value(t.tree, cert), 4);
  Verdict v = verify_seller_certificate(t.tree, t.c, t.s, cert);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.violation.find("value mismatch"), std::string::npos) << v.violation;
}

TEST(SellerDual, PathMassEditIsRejected) {
  Toy t;
  DualCertificate cert = certificate_from_json(t.tree, read_json_file(data_path("toy_seller_certificate.json")));
  cert.chi.chi[t.at("UU")] = Rat(3, 4);
  Verdict v = verify_seller_certificate(t.tree, t.c, t.s, cert);
  EXPECT_FALSE(v.ok);
  EXPECT_NE(v.violation.find("path mass"), std::string::npos) << v.violation;
}

TEST(SellerDual, PriceOutsideBandIsRejected) {
  Toy t;
  DualCertificate cert = certificate_from_json(t.tree, read_json_file(data_path("toy_seller_certificate.json")));
  cert.S[t.at("U")] = v({10, 1});
  EXPECT_FALSE(verify_seller_certificate(t.tree, t.c, t.s, cert).ok);
}

TEST(SellerDual, ZeroPayoff) {
  Model m = without_payoff(toy_model());
  ScenarioTree tree(m);
  Cones c = compute_cones(m);
  SellerSets s = seller_sets(m, c);
  DualCertificate cert = seller_dual_certificate(tree, c, s, 1);
  EXPECT_EQ(cert.value, 0);
  EXPECT_TRUE(verify_seller_certificate(tree, c, s, cert).ok);
}

TEST(SellerDual, StrongDualityOnRandomModels) {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 12; ++k) {
    RandomModel rm = random_model(rng, 2 + k % 2, 1 + k % 3);
    ScenarioTree tree(rm.model);
    Cones c = compute_cones(rm.model);
    SellerSets s = seller_sets(rm.model, c);
    for (std::size_t j = 0; j < rm.model.dim(); ++j) {
      DualCertificate cert = seller_dual_certificate(tree, c, s, j);
      EXPECT_EQ(cert.value, ask_price(rm.model, s, j));
      Verdict v = verify_seller_certificate(tree, c, s, cert);
      EXPECT_TRUE(v.ok) << v.violation;
    }
  }
}

TEST(SellerDual, DomainOfSupportFunctionIsDualCone) {
  Toy t;
  for (std::size_t i = 0; i < t.m.size(); ++i) {
    Polyhedron negZ = negate(t.s.Z[i]);
    for (const Vec& y : t.c.Q_dual[i].vrep().rays) EXPECT_TRUE(support_eval(negZ, y).has_value());
    for (const Vec& y : {v({1, -1}), v({-1, 1}), v({1, 0}), v({0, -1})})
      EXPECT_EQ(support_eval(negZ, y).has_value(), member(t.c.Q_dual[i], y)) << to_string(y);
  }
}

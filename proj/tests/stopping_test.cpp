#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "random_models.hpp"

using namespace hedgecone;
using namespace hedgecone::testing;

namespace {

struct Toy {
  Model m = toy_model();
  ScenarioTree tree{m};
  std::size_t at(const char* id) const { return *tree.find(id); }
  MixedStoppingTime chi(std::initializer_list<std::pair<const char*, Rat>> values) const {
    MixedStoppingTime x{std::vector<Rat>(tree.size(), Rat(0))};
    for (const auto& [id, val] : values) x.chi[at(id)] = val;
    return x;
  }
  std::size_t leaf_index(const char* id) const {
    const auto& l = tree.leaves();
    return static_cast<std::size_t>(std::find(l.begin(), l.end(), at(id)) - l.begin());
  }
};

}  // namespace

TEST(MixedStoppingTime, BuyerOptimalIsValid) {
  Toy t;
  MixedStoppingTime x = t.chi({{"U", Rat(1, 2)}, {"UU", Rat(1, 2)}, {"UD", Rat(1, 2)}, {"DU", 1}, {"DD", 1}});
  EXPECT_EQ(check_stopping_time(t.tree, x), "");
  EXPECT_NO_THROW(validate(t.tree, x));
}

TEST(MixedStoppingTime, AllMassAtHorizonIsValid) {
  Toy t;
  EXPECT_EQ(check_stopping_time(t.tree, from_ordinary(t.tree, stop_at_time(t.tree, 2))), "");
}

TEST(MixedStoppingTime, RejectsZeroAndNegative) {
  Toy t;
  MixedStoppingTime zero{std::vector<Rat>(t.tree.size(), Rat(0))};
  EXPECT_NE(check_stopping_time(t.tree, zero).find("path mass"), std::string::npos);
  EXPECT_THROW(validate(t.tree, zero), StoppingError);
  MixedStoppingTime neg = t.chi({{"0", 1}, {"U", -1}, {"UU", 1}, {"UD", 1}});
  EXPECT_NE(check_stopping_time(t.tree, neg).find("negative"), std::string::npos);
  MixedStoppingTime heavy = t.chi({{"U", Rat(3, 2)}, {"DU", 1}, {"DD", 1}});
  EXPECT_FALSE(check_stopping_time(t.tree, heavy).empty());
}

TEST(ChiStar, TailsOfSellerDual) {
  Toy t;
  MixedStoppingTime x = t.chi({{"U", Rat(3, 4)}, {"UU", Rat(1, 4)}, {"UD", Rat(1, 4)}, {"DU", 1}, {"DD", 1}});
  std::vector<Rat> s = chi_star(t.tree, x);
  EXPECT_EQ(s[t.at("0")], 1);
  EXPECT_EQ(s[t.at("U")], 1);
  EXPECT_EQ(s[t.at("UU")], Rat(1, 4));
  auto tails = weighted_tail(t.tree, std::vector<Rat>(t.tree.size(), Rat(1)), x, Rat(0));
  auto path = tails[t.leaf_index("UU")];
  EXPECT_EQ(path, (std::vector<Rat>{1, 1, Rat(1, 4), 0}));
}

TEST(ChiStar, HorizonAndImmediate) {
  Toy t;
  auto late = chi_star(t.tree, from_ordinary(t.tree, stop_at_time(t.tree, 2)));
  for (const Rat& r : late) EXPECT_EQ(r, 1);
  MixedStoppingTime now = from_ordinary(t.tree, stop_at_time(t.tree, 0));
  auto early = chi_star(t.tree, now);
  for (std::size_t v = 1; v < t.tree.size(); ++v) EXPECT_EQ(early[v], 0);
}

TEST(WeightedTail, SellerDualValue) {
  Toy t;
  MixedStoppingTime x = t.chi({{"U", Rat(3, 4)}, {"UU", Rat(1, 4)}, {"UD", Rat(1, 4)}, {"DU", 1}, {"DD", 1}});
  // ξ·Ŝ along the first path: Ŝ_U = (4,1), Ŝ_UU = (8,1)
  std::vector<Rat> xs(t.tree.size(), Rat(0));
  xs[t.at("U")] = dot(t.tree.xi(t.at("U")), v({4, 1}));
  xs[t.at("UU")] = dot(t.tree.xi(t.at("UU")), v({8, 1}));
  EXPECT_EQ(weighted_tail(t.tree, xs, x, Rat(0))[t.leaf_index("UU")][0], 5);
}

TEST(WeightedTail, TelescopingIdentity) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    RandomModel rm = random_model(rng, 2, 1 + k % 3);
    ScenarioTree tree(rm.model);
    MixedStoppingTime x = random_stopping_time(rng, tree);
    std::vector<Vec> X;
    for (std::size_t v = 0; v < tree.size(); ++v) X.push_back(tree.xi(v));
    auto tails = weighted_tail(tree, X, x, zeros(2));
    for (std::size_t l = 0; l < tree.leaves().size(); ++l) {
      auto path = tree.path_to(tree.leaves()[l]);
      EXPECT_TRUE(is_zero(tails[l].back()));
      for (std::size_t t = 0; t < path.size(); ++t) EXPECT_EQ(tails[l][t], x.chi[path[t]] * X[path[t]] + tails[l][t + 1]);
    }
  }
}

TEST(EvaluateAt, StoppedPayoffs) {
  Toy t;
  MixedStoppingTime x = t.chi({{"U", Rat(1, 2)}, {"UU", Rat(1, 2)}, {"UD", Rat(1, 2)}, {"DU", 1}, {"DD", 1}});
  std::vector<Vec> X;
  for (std::size_t v = 0; v < t.tree.size(); ++v) X.push_back(t.tree.xi(v));
  auto at = evaluate_at(t.tree, X, x, zeros(2));
  EXPECT_EQ(at[t.leaf_index("UU")], v({1, -2}));
  EXPECT_EQ(at[t.leaf_index("DU")], zeros(2));
  auto stopped = evaluate_at(t.tree, X, from_ordinary(t.tree, stop_at_time(t.tree, 1)), zeros(2));
  EXPECT_EQ(stopped[t.leaf_index("UD")], t.tree.xi(t.at("U")));
}

TEST(FromOrdinary, Embeddings) {
  Toy t;
  MixedStoppingTime now = from_ordinary(t.tree, stop_at_time(t.tree, 0));
  EXPECT_EQ(now.chi[0], 1);
  OrdinaryStoppingTime tau;
  tau.stop.assign(t.tree.size(), false);
  tau.stop[t.at("U")] = tau.stop[t.at("DU")] = tau.stop[t.at("DD")] = true;
  MixedStoppingTime x = from_ordinary(t.tree, tau);
  EXPECT_EQ(x.chi[t.at("U")], 1);
  EXPECT_EQ(x.chi[t.at("UU")], 0);
  EXPECT_EQ(x.chi[t.at("DU")], 1);
  tau.stop[t.at("UU")] = true;
  EXPECT_THROW(from_ordinary(t.tree, tau), StoppingError);
}

TEST(FromOrdinary, InjectiveAndValidOnSmallTrees) {
  std::mt19937_64 rng(9);
  for (int T = 0; T <= 3; ++T) {
    RandomModel rm = random_model(rng, 2, T);
    ScenarioTree tree(rm.model);
    std::set<std::vector<Rat>> seen;
    std::size_t n = 0;
    for_each_stopping_time(tree, [&](const OrdinaryStoppingTime& tau) {
      MixedStoppingTime x = from_ordinary(tree, tau);
      EXPECT_EQ(check_stopping_time(tree, x), "");
      seen.insert(x.chi);
      ++n;
    });
    EXPECT_EQ(seen.size(), n);
    EXPECT_EQ(count_stopping_times(tree, 1'000'000), n);
  }
}

TEST(StoppingTimeCount, BinaryTreeRecursion) {
  std::mt19937_64 rng(1);
  // f(T) = f(T-1)^2 + 1 with f(0) = 1
  const std::size_t expected[] = {1, 2, 5, 26, 677};
  for (int T = 0; T <= 4; ++T) {
    RandomModel rm = random_model(rng, 2, T);
    EXPECT_EQ(count_stopping_times(ScenarioTree(rm.model), 1'000'000), expected[T]);
  }
}

TEST(LambdaRoundTrip, ChiFromLambda) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    RandomModel rm = random_model(rng, 2, 3);
    ScenarioTree tree(rm.model);
    std::vector<Rat> lambda(tree.size());
    for (std::size_t v = 0; v < tree.size(); ++v)
      lambda[v] = tree.is_leaf(v) ? Rat(1) : make_rat(std::uniform_int_distribution<int>(0, 3)(rng), 3);
    // χ_t = λ_t (1 − Σ_{s<t} χ_s)
    MixedStoppingTime x{std::vector<Rat>(tree.size())};
    std::vector<Rat> spent(tree.size(), Rat(0));
    for (std::size_t v = 0; v < tree.size(); ++v) {
      if (auto p = tree.parent(v)) spent[v] = spent[*p] + x.chi[*p];
      x.chi[v] = lambda[v] * (1 - spent[v]);
    }
    EXPECT_EQ(check_stopping_time(tree, x), "");
    auto star = chi_star(tree, x);
    for (std::size_t v = 0; v < tree.size(); ++v) EXPECT_EQ(lambda[v] * star[v], x.chi[v]);
  }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "talk/analysis.hpp"
#include "talk/binary.hpp"
#include "talk/errors.hpp"
#include "talk/feasible.hpp"
#include "talk/game.hpp"

using namespace talk;

namespace {

// Two states, four actions: the Receiver is indifferent between two optimal
// actions in each state while the Sender dreads one of them.
FiniteCheapTalkGame make_indifference_game() {
  FiniteCheapTalkGame g;
  g.states = {"0", "1"};
  g.prior = {2.0 / 3.0, 1.0 / 3.0};
  g.actions = {"0", "1", "2", "3"};
  g.uS = {{0.0, 1.0, 0.0, -10.0}, {0.0, 1.0, -10.0, 0.0}};
  g.uR = {{1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 1.0, 0.0}};
  return g;
}

FiniteCheapTalkGame random_game(std::mt19937& rng, std::size_t n_states,
                                std::size_t n_actions) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> p(0.1, 1.0);
  FiniteCheapTalkGame g;
  double total = 0.0;
  for (std::size_t s = 0; s < n_states; ++s) {
    g.states.push_back(std::to_string(s));
    g.prior.push_back(p(rng));
    total += g.prior.back();
  }
  for (double& x : g.prior) x /= total;
  for (std::size_t a = 0; a < n_actions; ++a) g.actions.push_back(std::to_string(a));
  g.uS.assign(n_states, std::vector<double>(n_actions));
  g.uR.assign(n_states, std::vector<double>(n_actions));
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t a = 0; a < n_actions; ++a) {
      g.uS[s][a] = u(rng);
      g.uR[s][a] = u(rng);
    }
  }
  return g;
}

Matrix random_kernel(std::mt19937& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Matrix k(rows, std::vector<double>(cols));
  for (auto& row : k) {
    double sum = 0.0;
    for (double& x : row) {
      x = u(rng);
      sum += x;
    }
    for (double& x : row) x /= sum;
  }
  return k;
}

}  // namespace

TEST_CASE("game validation names the first violation") {
  FiniteCheapTalkGame g = make_binary(2.0 / 3.0);
  CHECK_NOTHROW(validate_game(g));

  FiniteCheapTalkGame bad = g;
  bad.prior = {0.9, 0.09};
  CHECK_THROWS_WITH_AS(validate_game(bad), doctest::Contains("prior sums to"),
                       ValidationError);

  bad = g;
  bad.prior = {1.0, 0.0};
  CHECK_THROWS_WITH_AS(validate_game(bad), doctest::Contains("full support"),
                       ValidationError);

  bad = g;
  bad.uS[1].pop_back();
  CHECK_THROWS_WITH_AS(validate_game(bad), doctest::Contains("uS row 1"), ValidationError);

  bad = g;
  std::vector<std::string> messages = {"0", "1", "2"};
  CHECK_THROWS_WITH_AS(validate_game(bad, &messages), doctest::Contains("message"),
                       ValidationError);

  bad = g;
  bad.states = {"0"};
  bad.prior = {1.0};
  bad.uS = {{0.0, 1.0}};
  bad.uR = {{1.0, 0.0}};
  CHECK_THROWS_AS(validate_game(bad), ValidationError);
}

TEST_CASE("expected payoffs reproduce the binary ex-ante table") {
  const double alpha = 2.0 / 3.0;
  const FiniteCheapTalkGame g = make_binary(alpha);
  const SenderStrategy truth = truthful_sender(g);
  const ReceiverStrategy believe = believing_receiver(g);

  const PayoffProfile tb = expected_payoffs(g, truth, believe);
  CHECK(tb.vS == doctest::Approx(1.0 - alpha).epsilon(1e-12));
  CHECK(tb.vR == doctest::Approx(1.0).epsilon(1e-12));

  const PayoffProfile a1a0 =
      expected_payoffs(g, constant_sender(g, 1), constant_receiver(g, 0));
  CHECK(a1a0.vS == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a1a0.vR == doctest::Approx(alpha).epsilon(1e-12));
}

TEST_CASE("a constant receiver makes the sender irrelevant") {
  std::mt19937 rng(3);
  const FiniteCheapTalkGame g = random_game(rng, 3, 4);
  const ReceiverStrategy fixed = constant_receiver(g, 2);
  double eS = 0.0, eR = 0.0;
  for (std::size_t s = 0; s < g.n_states(); ++s) {
    eS += g.prior[s] * g.uS[s][2];
    eR += g.prior[s] * g.uR[s][2];
  }
  for (int i = 0; i < 5; ++i) {
    const SenderStrategy sigma{random_kernel(rng, 3, 3)};
    const PayoffProfile v = expected_payoffs(g, sigma, fixed);
    CHECK(v.vS == doctest::Approx(eS).epsilon(1e-12));
    CHECK(v.vR == doctest::Approx(eR).epsilon(1e-12));
  }
}

TEST_CASE("expected payoffs reject mismatched kernels") {
  const FiniteCheapTalkGame g = make_binary(2.0 / 3.0);
  SenderStrategy bad{{{1.0, 0.0}}};
  CHECK_THROWS_AS(expected_payoffs(g, bad, believing_receiver(g)), ValidationError);
}

TEST_CASE("receiver best response") {
  const double alpha = 2.0 / 3.0;
  const FiniteCheapTalkGame g = make_binary(alpha);

  SUBCASE("to truth: believe, value 1") {
    const auto br = receiver_best_response(g, truthful_sender(g));
    CHECK(br.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kernels_equal(br.strategy.kernel, believing_receiver(g).kernel, 1e-12));
  }
  SUBCASE("to a constant message: babbling action, value alpha") {
    const auto br = receiver_best_response(g, constant_sender(g, 1));
    CHECK(br.value == doctest::Approx(alpha).epsilon(1e-12));
    // message 0 never arrives; the fallback is also the ex-ante action
    CHECK(kernels_equal(br.strategy.kernel, constant_receiver(g, 0).kernel, 1e-12));
  }
  SUBCASE("to 50/50 noise: posterior equals prior in every message") {
    const SenderStrategy noise{{{0.5, 0.5}, {0.5, 0.5}}};
    double best = -1e300;
    for (std::size_t a = 0; a < g.n_actions(); ++a) {
      best = std::max(best, g.prior[0] * g.uR[0][a] + g.prior[1] * g.uR[1][a]);
    }
    const auto br = receiver_best_response(g, noise);
    CHECK(br.value == doctest::Approx(best).epsilon(1e-12));
    CHECK(br.value == doctest::Approx(alpha).epsilon(1e-12));
  }
}

TEST_CASE("sender best response") {
  const double alpha = 2.0 / 3.0;
  const FiniteCheapTalkGame g = make_binary(alpha);
  const ReceiverStrategy believe = believing_receiver(g);

  SUBCASE("against believe: always claim the high state") {
    const auto br = sender_best_response(g, believe);
    CHECK(br.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kernels_equal(br.strategy.kernel, constant_sender(g, 1).kernel, 1e-12));
  }
  SUBCASE("against a constant action: nothing to gain") {
    const auto br = sender_best_response(g, constant_receiver(g, 0));
    CHECK(br.value == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("against a believe/always-0 mixture: cap equals the believe weight") {
    const double gamma = 0.2;
    const ReceiverStrategy mixed{
        mix_kernels(believe.kernel, constant_receiver(g, 0).kernel, gamma)};
    // Oracle: enumerate the four pure sender strategies on the ex-ante table.
    double best = -1e300;
    for (int m0 = 0; m0 < 2; ++m0) {
      for (int m1 = 0; m1 < 2; ++m1) {
        double v = 0.0;
        for (std::size_t s = 0; s < 2; ++s) {
          const std::size_t m = (s == 0) ? static_cast<std::size_t>(m0)
                                         : static_cast<std::size_t>(m1);
          for (std::size_t a = 0; a < 2; ++a) {
            v += g.prior[s] * mixed.kernel[m][a] * g.uS[s][a];
          }
        }
        best = std::max(best, v);
      }
    }
    const auto br = sender_best_response(g, mixed);
    CHECK(best == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(br.value == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("minmax closed forms") {
  SUBCASE("binary game") {
    const FiniteCheapTalkGame g = make_binary(2.0 / 3.0);
    const MinmaxPayoffs mm = minmax(g);
    CHECK(mm.uBarS == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mm.uBarR == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // Witnesses: constant kernels achieving the values.
    CHECK(receiver_best_response(g, mm.senderWitness).value ==
          doctest::Approx(mm.uBarR).epsilon(1e-12));
    CHECK(sender_best_response(g, mm.receiverWitness).value ==
          doctest::Approx(mm.uBarS).epsilon(1e-12));
  }
  SUBCASE("identical interests with a state-independent optimum") {
    FiniteCheapTalkGame g;
    g.states = {"0", "1"};
    g.prior = {0.4, 0.6};
    g.actions = {"0", "1"};
    g.uS = {{1.0, 0.0}, {1.0, 0.5}};
    g.uR = g.uS;
    const MinmaxPayoffs mm = minmax(g);
    CHECK(mm.uBarR == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mm.uBarS == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("minmax equals a brute-force kernel-grid search on the binary game") {
  const double alpha = 2.0 / 3.0;
  const FiniteCheapTalkGame g = make_binary(alpha);
  const MinmaxPayoffs mm = minmax(g);

  // Independent evaluator over the 2x2 game.
  auto payoff = [&](double q0, double q1, double p0, double p1, bool sender) {
    // q*: P(m=1 | state), p*: P(a=1 | message)
    double v = 0.0;
    for (int s = 0; s < 2; ++s) {
      const double mu = (s == 0) ? alpha : 1.0 - alpha;
      const double pm1 = (s == 0) ? q0 : q1;
      for (int m = 0; m < 2; ++m) {
        const double wm = (m == 1) ? pm1 : 1.0 - pm1;
        const double pa1 = (m == 1) ? p1 : p0;
        for (int a = 0; a < 2; ++a) {
          const double wa = (a == 1) ? pa1 : 1.0 - pa1;
          const double u = sender ? static_cast<double>(a)
                                  : 1.0 - std::fabs(static_cast<double>(a - s));
          v += mu * wm * wa * u;
        }
      }
    }
    return v;
  };

  const int steps = 10;  // 0.1-step receiver/sender kernel grids
  double ubar_s = 1e300;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double p0 = i / static_cast<double>(steps);
      const double p1 = j / static_cast<double>(steps);
      double best = -1e300;
      for (int q0 = 0; q0 <= 1; ++q0) {
        for (int q1 = 0; q1 <= 1; ++q1) best = std::max(best, payoff(q0, q1, p0, p1, true));
      }
      ubar_s = std::min(ubar_s, best);
    }
  }
  CHECK(ubar_s == doctest::Approx(mm.uBarS).epsilon(1e-9));

  double ubar_r = 1e300;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double q0 = i / static_cast<double>(steps);
      const double q1 = j / static_cast<double>(steps);
      double best = -1e300;
      for (int p0 = 0; p0 <= 1; ++p0) {
        for (int p1 = 0; p1 <= 1; ++p1) best = std::max(best, payoff(q0, q1, p0, p1, false));
      }
      ubar_r = std::min(ubar_r, best);
    }
  }
  CHECK(ubar_r == doctest::Approx(mm.uBarR).epsilon(1e-9));
}

TEST_CASE("revelation transform") {
  const FiniteCheapTalkGame g = make_binary(2.0 / 3.0);
  const SenderStrategy truth = truthful_sender(g);

  SUBCASE("composing with truth is the identity") {
    std::mt19937 rng(5);
    const ReceiverStrategy rho{random_kernel(rng, 2, 2)};
    const ReceiverStrategy composed = revelation_transform(g, truth, rho);
    CHECK(kernels_equal(composed.kernel, rho.kernel, 1e-15));
  }
  SUBCASE("opposite composed with opposite is believe") {
    const SenderStrategy opp_s{{{0.0, 1.0}, {1.0, 0.0}}};
    const ReceiverStrategy opp_r{{{0.0, 1.0}, {1.0, 0.0}}};
    const ReceiverStrategy composed = revelation_transform(g, opp_s, opp_r);
    CHECK(kernels_equal(composed.kernel, believing_receiver(g).kernel, 1e-15));
    const PayoffProfile v = expected_payoffs(g, truth, composed);
    CHECK(v.vS == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(v.vR == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("payoff equality on random 3x3x3 profiles") {
    std::mt19937 rng(17);
    const FiniteCheapTalkGame g3 = random_game(rng, 3, 3);
    const SenderStrategy t3 = truthful_sender(g3);
    for (int i = 0; i < 50; ++i) {
      const SenderStrategy sigma{random_kernel(rng, 3, 3)};
      const ReceiverStrategy rho{random_kernel(rng, 3, 3)};
      const PayoffProfile a = expected_payoffs(g3, sigma, rho);
      const PayoffProfile b = expected_payoffs(g3, t3, revelation_transform(g3, sigma, rho));
      CHECK(a.vS == doctest::Approx(b.vS).epsilon(1e-12));
      CHECK(a.vR == doctest::Approx(b.vR).epsilon(1e-12));
    }
  }
}

TEST_CASE("revelation properties: cap monotonicity, convexity, dominance") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t ns = 3 + trial % 3;
    const std::size_t na = 2 + trial % 4;
    const FiniteCheapTalkGame g = random_game(rng, ns, na);
    const SenderStrategy truth = truthful_sender(g);
    const SenderStrategy sigma{random_kernel(rng, ns, ns)};
    const ReceiverStrategy rho{random_kernel(rng, ns, na)};

    // Deviation caps cannot grow under composition.
    const ReceiverStrategy composed = revelation_transform(g, sigma, rho);
    CHECK(sender_best_response(g, composed).value <=
          sender_best_response(g, rho).value + 1e-12);

    // Best-response dominance.
    const PayoffProfile v = expected_payoffs(g, sigma, rho);
    CHECK(v.vR <= receiver_best_response(g, sigma).value + 1e-12);
    CHECK(v.vS <= sender_best_response(g, rho).value + 1e-12);

    // Mixtures of composed kernels realize payoff mixtures.
    const SenderStrategy sigma2{random_kernel(rng, ns, ns)};
    const ReceiverStrategy rho2{random_kernel(rng, ns, na)};
    const PayoffProfile v2 = expected_payoffs(g, sigma2, rho2);
    const ReceiverStrategy composed2 = revelation_transform(g, sigma2, rho2);
    const double t = unif(rng);
    const PayoffProfile mixed = expected_payoffs(
        g, truth, ReceiverStrategy{mix_kernels(composed.kernel, composed2.kernel, t)});
    CHECK(mixed.vS == doctest::Approx(t * v.vS + (1.0 - t) * v2.vS).epsilon(1e-12));
    CHECK(mixed.vR == doctest::Approx(t * v.vR + (1.0 - t) * v2.vR).epsilon(1e-12));
  }
}

TEST_CASE("feasible hull of the binary game") {
  const FiniteCheapTalkGame g = make_binary(2.0 / 3.0);
  const auto hull = feasible_hull(g.prior, g.uS, g.uR);
  REQUIRE(hull.size() == 4);
  // Canonical order starts at the lexicographic minimum, counter-clockwise.
  CHECK(hull[0].vS == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hull[0].vR == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(hull[1].vS == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(hull[1].vR == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hull[2].vS == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hull[2].vR == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(hull[3].vS == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(hull[3].vR == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("feasible hull of a single state is the hull of its action payoffs") {
  const std::vector<double> prior{1.0};
  const Matrix uS{{0.0, 1.0, 0.5}};
  const Matrix uR{{1.0, 0.0, 0.9}};
  const auto hull = feasible_hull(prior, uS, uR);
  REQUIRE(hull.size() == 3);
  CHECK(inside_hull(hull, PayoffProfile{0.5, 0.5}, 1e-9));
  CHECK_FALSE(inside_hull(hull, PayoffProfile{1.0, 1.0}, 1e-9));
}

TEST_CASE("frontier sampling spans the Pareto segment with mixtures") {
  const FiniteCheapTalkGame g = make_binary(2.0 / 3.0);
  const FeasibleSet fs = feasible_set(g, 101);
  REQUIRE(fs.paretoFrontier.size() == 101);
  const SenderStrategy truth = truthful_sender(g);

  CHECK(fs.paretoFrontier.front().payoff.vR == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fs.paretoFrontier.front().payoff.vS == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(fs.paretoFrontier.back().payoff.vR == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(fs.paretoFrontier.back().payoff.vS == doctest::Approx(1.0).epsilon(1e-12));

  double prev_vr = 2.0;
  double prev_lambda = -1.0;
  for (const auto& fp : fs.paretoFrontier) {
    CHECK(fp.payoff.vR <= prev_vr + 1e-12);
    CHECK(fp.lambda >= prev_lambda - 1e-12);
    prev_vr = fp.payoff.vR;
    prev_lambda = fp.lambda;

    // The stored kernel reproduces the stored payoff against truth.
    const PayoffProfile v = expected_payoffs(g, truth, fp.receiver);
    CHECK(v.vS == doctest::Approx(fp.payoff.vS).epsilon(1e-12));
    CHECK(v.vR == doctest::Approx(fp.payoff.vR).epsilon(1e-12));

    // Frontier sandwich: inside the hull and maximal for the stored weight.
    CHECK(inside_hull(fs.hullVertices, fp.payoff, 1e-9));
    const double obj = fp.lambda * fp.payoff.vS + (1.0 - fp.lambda) * fp.payoff.vR;
    for (const auto& h : fs.hullVertices) {
      CHECK(obj >= fp.lambda * h.vS + (1.0 - fp.lambda) * h.vR - 1e-9);
    }
  }
}

TEST_CASE("frontier of a common-interest game collapses to one point") {
  FiniteCheapTalkGame g;
  g.states = {"0", "1"};
  g.prior = {0.5, 0.5};
  g.actions = {"0", "1"};
  g.uS = {{1.0, 0.0}, {0.0, 1.0}};
  g.uR = g.uS;
  const FeasibleSet fs = feasible_set(g, 50);
  REQUIRE(fs.paretoFrontier.size() == 1);
  CHECK(fs.paretoFrontier[0].payoff.vS == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fs.paretoFrontier[0].payoff.vR == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("assumption checker") {
  SUBCASE("binary game: unique best responses and a conflict state") {
    const AssumptionReport rep = check_assumptions(make_binary(2.0 / 3.0));
    CHECK(rep.a1Holds);
    CHECK(rep.a2Holds);
    REQUIRE(rep.receiverOptimalAction.size() == 2);
    CHECK(rep.receiverOptimalAction[0] == 0);
    CHECK(rep.receiverOptimalAction[1] == 1);
    REQUIRE(rep.conflictStates.size() == 1);
    CHECK(rep.conflictStates[0] == 0);
    CHECK(rep.conflictMass == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rep.aStar == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("indifference game: A1 fails") {
    const AssumptionReport rep = check_assumptions(make_indifference_game());
    CHECK_FALSE(rep.a1Holds);
    CHECK(rep.tieAtState[0]);
    CHECK(rep.tieAtState[1]);
  }
  SUBCASE("identical interests: A2 fails with an empty conflict set") {
    FiniteCheapTalkGame g;
    g.states = {"0", "1"};
    g.prior = {0.5, 0.5};
    g.actions = {"0", "1"};
    g.uS = {{1.0, 0.0}, {0.0, 1.0}};
    g.uR = g.uS;
    const AssumptionReport rep = check_assumptions(g);
    CHECK(rep.a1Holds);
    CHECK_FALSE(rep.a2Holds);
    CHECK(rep.conflictStates.empty());
  }
}

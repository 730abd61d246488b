#include "talk/wrp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "talk/errors.hpp"
#include "talk/lp.hpp"
#include "talk/parallel.hpp"

namespace talk {

namespace {

constexpr double kStrictMargin = 1e-9;
constexpr double kWeakSlack = 1e-12;

Matrix clamp_rows(Matrix kernel) {
  for (auto& row : kernel) {
    double sum = 0.0;
    for (double& p : row) {
      p = std::clamp(p, 0.0, 1.0);
      sum += p;
    }
    if (sum > 0.0) {
      for (double& p : row) p /= sum;
    }
  }
  return kernel;
}

// Enumerates set partitions of {0..n-1} as restricted growth strings,
// invoking visit(cellOf) until it returns true (accepted) or the space is
// exhausted.
bool for_each_partition(std::size_t n,
                        const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> a(n, 0);
  for (;;) {
    if (visit(a)) return true;
    std::size_t i = n;
    for (; i-- > 1;) {
      int max_prefix = 0;
      for (std::size_t j = 0; j < i; ++j) max_prefix = std::max(max_prefix, a[j]);
      if (a[i] <= max_prefix) {
        ++a[i];
        for (std::size_t j = i + 1; j < n; ++j) a[j] = 0;
        break;
      }
      // else: carry on to the previous position
    }
    if (i == 0) return false;
  }
}

// Builds the pooling profile for a given cell assignment: each cell speaks
// through its highest-index member state; the Receiver answers a cell message
// with the cell-posterior Sender-optimal action, and any unused message as if
// it named a singleton state.
ReceiverPunishment pooling_profile(const FiniteCheapTalkGame& game,
                                   const std::vector<int>& cellOf) {
  const std::size_t n = game.n_states();
  const std::size_t na = game.n_actions();
  const int n_cells = *std::max_element(cellOf.begin(), cellOf.end()) + 1;

  std::vector<std::size_t> cell_message(static_cast<std::size_t>(n_cells), 0);
  for (std::size_t s = 0; s < n; ++s) {
    cell_message[static_cast<std::size_t>(cellOf[s])] = s;  // last member wins
  }

  Matrix sender(n, std::vector<double>(game.n_messages(), 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    sender[s][cell_message[static_cast<std::size_t>(cellOf[s])]] = 1.0;
  }

  Matrix receiver(game.n_messages(), std::vector<double>(na, 0.0));
  std::vector<bool> assigned(game.n_messages(), false);
  for (int c = 0; c < n_cells; ++c) {
    std::size_t best = 0;
    double best_v = -1e300;
    for (std::size_t a = 0; a < na; ++a) {
      double v = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        if (cellOf[s] == c) v += game.prior[s] * game.uS[s][a];
      }
      if (v > best_v + 1e-12) {
        best_v = v;
        best = a;
      }
    }
    receiver[cell_message[static_cast<std::size_t>(c)]][best] = 1.0;
    assigned[cell_message[static_cast<std::size_t>(c)]] = true;
  }
  for (std::size_t m = 0; m < game.n_messages(); ++m) {
    if (assigned[m]) continue;
    std::size_t best = 0;
    for (std::size_t a = 1; a < na; ++a) {
      if (game.uS[m][a] > game.uS[m][best]) best = a;
    }
    receiver[m][best] = 1.0;
  }
  return ReceiverPunishment{SenderStrategy{std::move(sender)},
                            ReceiverStrategy{std::move(receiver)}};
}

bool partition_qualifies(const FiniteCheapTalkGame& game, const PayoffProfile& v,
                         const std::vector<int>& cellOf, ReceiverPunishment* out) {
  ReceiverPunishment rp = pooling_profile(game, cellOf);
  const PayoffProfile u = expected_payoffs(game, rp.sender, rp.receiver);
  if (u.vS < v.vS - kWeakSlack) return false;
  const double rbr = receiver_best_response(game, rp.sender).value;
  if (rbr > v.vR - kStrictMargin) return false;
  *out = std::move(rp);
  return true;
}

}  // namespace

SenderPunishment find_sender_punishment(const FiniteCheapTalkGame& game,
                                        const PayoffProfile& v) {
  validate_game(game);
  const std::size_t n = game.n_states();
  const std::size_t nm = game.n_messages();
  const std::size_t na = game.n_actions();
  const std::size_t n_rho = nm * na;
  auto rho = [&](std::size_t m, std::size_t a) { return m * na + a; };

  // The full program
  //   min sum_s mu_s z_s   s.t.  z_s >= rho_m . uS_s for all (s, m),
  //                              sum_s mu_s rho_s . uR_s >= vR,  rho_m simplex
  // carries n*m deviation-cap rows, almost all slack at the optimum, which
  // makes a monolithic solve hopelessly degenerate on discretized games.
  // Solve it by lazily generating the violated cap rows instead: the cap is
  // piecewise-linear convex in rho, so finitely many cuts reach the exact
  // optimum, and each relaxation is a small well-behaved LP.
  std::vector<std::vector<bool>> cut_added(n, std::vector<bool>(nm, false));
  std::vector<std::pair<std::size_t, std::size_t>> cuts;  // (state, message)
  for (std::size_t s = 0; s < n; ++s) {
    cuts.emplace_back(s, s);  // seed: the truthful message
    cut_added[s][s] = true;
  }

  LPSolution sol;
  for (int round = 0;; ++round) {
    if (round > 512) throw std::runtime_error("sender-punishment cut loop failed to settle");
    LinearProgram lp(n_rho + n);
    for (std::size_t j = 0; j < n_rho; ++j) lp.lower[j] = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      lp.objective[n_rho + s] = game.prior[s];
      // The deviation value in state s can never fall below the worst action,
      // so the slack needs no free-variable split.
      lp.lower[n_rho + s] = *std::min_element(game.uS[s].begin(), game.uS[s].end());
    }
    for (const auto& [s, m] : cuts) {
      std::vector<double> row(lp.n_vars(), 0.0);
      for (std::size_t a = 0; a < na; ++a) row[rho(m, a)] = game.uS[s][a];
      row[n_rho + s] = -1.0;
      lp.add_le(std::move(row), 0.0);
    }
    {
      std::vector<double> row(lp.n_vars(), 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < na; ++a) row[rho(s, a)] += game.prior[s] * game.uR[s][a];
      }
      lp.add_ge(std::move(row), v.vR);
    }
    for (std::size_t m = 0; m < nm; ++m) {
      std::vector<double> row(lp.n_vars(), 0.0);
      for (std::size_t a = 0; a < na; ++a) row[rho(m, a)] = 1.0;
      lp.add_eq(std::move(row), 1.0);
    }

    sol = solve_lp(lp);
    if (sol.status != LPStatus::Optimal) {
      std::ostringstream os;
      os << "no Sender punishment exists: requested Receiver payoff " << v.vR
         << " is not attainable against the truthful Sender";
      throw NoPunishmentError(os.str());
    }

    bool violated = false;
    for (std::size_t s = 0; s < n; ++s) {
      double best = -1e300;
      std::size_t best_m = 0;
      for (std::size_t m = 0; m < nm; ++m) {
        double value = 0.0;
        for (std::size_t a = 0; a < na; ++a) value += sol.x[rho(m, a)] * game.uS[s][a];
        if (value > best) {
          best = value;
          best_m = m;
        }
      }
      if (best > sol.x[n_rho + s] + 1e-10 && !cut_added[s][best_m]) {
        cuts.emplace_back(s, best_m);
        cut_added[s][best_m] = true;
        violated = true;
      }
    }
    if (!violated) break;
  }

  Matrix kernel(nm, std::vector<double>(na, 0.0));
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t a = 0; a < na; ++a) kernel[m][a] = sol.x[rho(m, a)];
  }
  SenderPunishment out;
  out.receiver = ReceiverStrategy{clamp_rows(std::move(kernel))};
  // Report the deviation value the returned kernel actually admits.
  out.cap = sender_best_response(game, out.receiver).value;
  return out;
}

std::optional<ReceiverPunishment> find_receiver_punishment(const FiniteCheapTalkGame& game,
                                                           const PayoffProfile& v,
                                                           const CertifyOptions& opts) {
  validate_game(game);
  const std::size_t n = game.n_states();
  ReceiverPunishment rp;

  // Low-state prefix pools first: pool states [0..k-1], reveal the rest.
  for (std::size_t k = 0; k <= n; ++k) {
    if (k == 1) continue;  // same partition as k == 0
    std::vector<int> cellOf(n);
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
      cellOf[s] = (k >= 2 && s < k) ? 0 : (k >= 2 ? 1 + next++ : next++);
    }
    if (partition_qualifies(game, v, cellOf, &rp)) return rp;
  }

  if (n > opts.partitionLimit) {
    std::ostringstream os;
    os << "receiver-punishment search: " << n << " states exceed the partition enumeration "
       << "limit of " << opts.partitionLimit
       << " and no prefix-pooling candidate qualified";
    throw CapabilityError(os.str());
  }

  const bool found = for_each_partition(
      n, [&](const std::vector<int>& cellOf) { return partition_qualifies(game, v, cellOf, &rp); });
  if (found) return rp;
  return std::nullopt;
}

std::optional<ReceiverStrategy> normal_profile_for(const FiniteCheapTalkGame& game,
                                                   const PayoffProfile& v) {
  const std::size_t n = game.n_states();
  const std::size_t na = game.n_actions();
  LinearProgram lp(n * na);
  auto w = [&](std::size_t s, std::size_t a) { return s * na + a; };
  for (std::size_t j = 0; j < lp.n_vars(); ++j) lp.lower[j] = 0.0;
  std::vector<double> rowS(lp.n_vars(), 0.0), rowR(lp.n_vars(), 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      rowS[w(s, a)] = game.prior[s] * game.uS[s][a];
      rowR[w(s, a)] = game.prior[s] * game.uR[s][a];
    }
  }
  lp.add_eq(std::move(rowS), v.vS);
  lp.add_eq(std::move(rowR), v.vR);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<double> row(lp.n_vars(), 0.0);
    for (std::size_t a = 0; a < na; ++a) row[w(s, a)] = 1.0;
    lp.add_eq(std::move(row), 1.0);
  }
  const LPSolution sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal) return std::nullopt;
  Matrix kernel(n, std::vector<double>(na, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < na; ++a) kernel[s][a] = sol.x[w(s, a)];
  }
  return ReceiverStrategy{clamp_rows(std::move(kernel))};
}

double max_feasible_vs(const FiniteCheapTalkGame& game, double vR) {
  const std::size_t n = game.n_states();
  const std::size_t na = game.n_actions();
  LinearProgram lp(n * na);
  auto w = [&](std::size_t s, std::size_t a) { return s * na + a; };
  std::vector<double> rowR(lp.n_vars(), 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      lp.lower[w(s, a)] = 0.0;
      lp.objective[w(s, a)] = -game.prior[s] * game.uS[s][a];  // maximize vS
      rowR[w(s, a)] = game.prior[s] * game.uR[s][a];
    }
  }
  lp.add_eq(std::move(rowR), vR);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<double> row(lp.n_vars(), 0.0);
    for (std::size_t a = 0; a < na; ++a) row[w(s, a)] = 1.0;
    lp.add_eq(std::move(row), 1.0);
  }
  const LPSolution sol = solve_lp(lp);
  if (sol.status != LPStatus::Optimal) {
    throw ValidationError("max_feasible_vs: Receiver payoff level is not feasible");
  }
  return -sol.objectiveValue;
}

CertificateCheck verify_certificate(const FiniteCheapTalkGame& game,
                                    const WRPCertificate& cert, CertMode mode) {
  validate_game(game);
  CertificateCheck out;
  std::ostringstream detail;

  const auto hull = feasible_hull(game.prior, game.uS, game.uR);
  const PayoffProfile achieved =
      expected_payoffs(game, cert.normalSender, cert.normalReceiver);
  const bool in_hull = inside_hull(hull, cert.target, kGeomTol);
  const bool achieves = std::fabs(achieved.vS - cert.target.vS) <= kGeomTol &&
                        std::fabs(achieved.vR - cert.target.vR) <= kGeomTol;
  out.feasible = in_hull && achieves;
  if (!in_hull) detail << "target outside the feasible hull; ";
  if (!achieves) {
    detail << "normal profile yields (" << achieved.vS << ", " << achieved.vR
           << ") instead of the target; ";
  }

  const MinmaxPayoffs mm = minmax(game);
  out.margins.mIRS = cert.target.vS - mm.uBarS;
  out.margins.mIRR = cert.target.vR - mm.uBarR;
  out.irOk = out.margins.mIRS > 0.0 && out.margins.mIRR > 0.0;
  if (!out.irOk) detail << "strict individual rationality fails; ";

  out.margins.mS =
      cert.target.vS - sender_best_response(game, cert.senderPunishmentReceiver).value;
  const PayoffProfile uSP =
      expected_payoffs(game, cert.senderPunishmentSender, cert.senderPunishmentReceiver);
  out.margins.punisherSlackS = uSP.vR - cert.target.vR;

  out.margins.mR =
      cert.target.vR - receiver_best_response(game, cert.receiverPunishmentSender).value;
  const PayoffProfile uRP = expected_payoffs(game, cert.receiverPunishmentSender,
                                             cert.receiverPunishmentReceiver);
  out.margins.punisherSlackR = uRP.vS - cert.target.vS;

  const bool strict = (mode == CertMode::Strict);
  out.senderSideOk = strict ? out.margins.mS > 0.0 : out.margins.mS >= -kWeakSlack;
  out.receiverSideOk = strict ? out.margins.mR > 0.0 : out.margins.mR >= -kWeakSlack;
  out.slacksOk = out.margins.punisherSlackS >= -kWeakSlack &&
                 out.margins.punisherSlackR >= -kWeakSlack;
  if (!out.senderSideOk) detail << "Sender deviation cap not below the target; ";
  if (!out.receiverSideOk) detail << "Receiver deviation cap not below the target; ";
  if (!out.slacksOk) detail << "a punisher falls below the target during punishment; ";

  out.valid = out.feasible && out.irOk && out.senderSideOk && out.receiverSideOk && out.slacksOk;
  out.detail = detail.str();
  return out;
}

std::optional<WRPCertificate> certify_point(const FiniteCheapTalkGame& game,
                                            const PayoffProfile& v,
                                            const CertifyOptions& opts) {
  validate_game(game);
  const MinmaxPayoffs mm = minmax(game);
  if (v.vS <= mm.uBarS + kStrictMargin || v.vR <= mm.uBarR + kStrictMargin) {
    return std::nullopt;
  }
  auto normal = normal_profile_for(game, v);
  if (!normal) return std::nullopt;
  const SenderStrategy truth = truthful_sender(game);

  SenderPunishment sp;
  try {
    sp = find_sender_punishment(game, v);
  } catch (const NoPunishmentError&) {
    return std::nullopt;
  }

  if (sp.cap < v.vS - kStrictMargin) {
    auto rp = find_receiver_punishment(game, v, opts);
    if (rp) {
      WRPCertificate cert;
      cert.target = v;
      cert.normalSender = truth;
      cert.normalReceiver = *normal;
      cert.senderPunishmentSender = truth;
      cert.senderPunishmentReceiver = sp.receiver;
      cert.receiverPunishmentSender = rp->sender;
      cert.receiverPunishmentReceiver = rp->receiver;
      const CertificateCheck check = verify_certificate(game, cert, CertMode::Strict);
      cert.margins = check.margins;
      if (check.valid) return cert;
      return std::nullopt;
    }
  }

  // Trivial fallback: a target achieved by a stage Nash profile is supported
  // by repeating that profile everywhere (weak certificate, zero margins).
  const double sBR = sender_best_response(game, *normal).value;
  const double rBR = receiver_best_response(game, truth).value;
  if (sBR <= v.vS + kStrictMargin && rBR <= v.vR + kStrictMargin) {
    WRPCertificate cert;
    cert.target = v;
    cert.normalSender = truth;
    cert.normalReceiver = *normal;
    cert.senderPunishmentSender = truth;
    cert.senderPunishmentReceiver = *normal;
    cert.receiverPunishmentSender = truth;
    cert.receiverPunishmentReceiver = *normal;
    cert.stageNash = true;
    const CertificateCheck check = verify_certificate(game, cert, CertMode::Weak);
    cert.margins = check.margins;
    if (check.valid) return cert;
  }
  return std::nullopt;
}

std::vector<ScanRow> scan_frontier(const FiniteCheapTalkGame& game, std::size_t gridSize,
                                   const CertifyOptions& opts) {
  if (gridSize < 2) throw ValidationError("scan_frontier: grid size must be at least 2");
  const FeasibleSet fs = feasible_set(game, gridSize);
  std::vector<ScanRow> rows(fs.paretoFrontier.size());
  parallel_for(fs.paretoFrontier.size(), [&](std::size_t i) {
    const FrontierPoint& fp = fs.paretoFrontier[i];
    ScanRow row;
    row.lambda = fp.lambda;
    row.payoff = fp.payoff;
    row.capS = find_sender_punishment(game, fp.payoff).cap;
    row.maxFrontierVS = max_feasible_vs(game, fp.payoff.vR);
    row.margin = fp.payoff.vS - row.capS;
    try {
      row.wrp = certify_point(game, fp.payoff, opts).has_value();
    } catch (const CapabilityError&) {
      row.wrp = false;  // partition space too large to exhibit a punishment
    }
    rows[i] = std::move(row);
  });
  return rows;
}

GapReport receiver_gap(const FiniteCheapTalkGame& game, std::size_t gridSize) {
  validate_game(game);
  if (gridSize < 2) throw ValidationError("receiver_gap: grid size must be at least 2");
  GapReport rep;
  const AssumptionReport ar = check_assumptions(game);
  rep.assumptionsViolated = !(ar.a1Holds && ar.a2Holds);

  const SenderStrategy truth = truthful_sender(game);
  const ReceiverStrategy believe = believing_receiver(game);
  const PayoffProfile top = expected_payoffs(game, truth, believe);
  rep.receiverOptimum = top.vR;
  rep.senderAtOptimum = top.vS;
  rep.senderDeviationAtOptimum = sender_best_response(game, believe).value;

  const MinmaxPayoffs mm = minmax(game);
  const double lo = mm.uBarR;
  rep.gridPoints.assign(gridSize, GapPoint{});
  parallel_for(gridSize, [&](std::size_t j) {
    const double vR =
        rep.receiverOptimum - (rep.receiverOptimum - lo) * static_cast<double>(j) / (gridSize - 1);
    GapPoint gp;
    gp.vR = vR;
    gp.minCap = find_sender_punishment(game, PayoffProfile{0.0, vR}).cap;
    gp.maxFrontierVS = max_feasible_vs(game, vR);
    gp.wrpPossible = gp.minCap <= gp.maxFrontierVS + kStrictMargin;
    rep.gridPoints[j] = gp;
  });

  rep.etaEstimate = rep.receiverOptimum - lo;
  for (const GapPoint& gp : rep.gridPoints) {
    if (gp.wrpPossible) {
      rep.etaEstimate = rep.receiverOptimum - gp.vR;
      break;  // grid is vR-descending; the first hit is the largest vR
    }
  }
  return rep;
}

}  // namespace talk

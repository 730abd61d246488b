#include "talk/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "talk/analysis.hpp"
#include "talk/errors.hpp"

namespace talk {

namespace {

constexpr double kDominanceTol = 1e-12;

std::size_t sample_row(const std::vector<double>& row, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    acc += row[i];
    if (u <= acc) return i;
  }
  return row.size() - 1;  // guard against rounding in the row sum
}

}  // namespace

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Normal: return "Normal";
    case Phase::PunishSender: return "PunishS";
    case Phase::PunishReceiver: return "PunishR";
  }
  return "?";
}

const char* rule_name(TransitionRule r) {
  return r == TransitionRule::OnePeriodRetrigger ? "one_period_retrigger" : "absorbing";
}

std::optional<TransitionRule> rule_from_name(const std::string& name) {
  if (name == "one_period_retrigger") return TransitionRule::OnePeriodRetrigger;
  if (name == "absorbing") return TransitionRule::Absorbing;
  return std::nullopt;
}

Phase next_phase(TransitionRule rule, Phase current, Deviation observed) {
  if (observed == Deviation::BySender) return Phase::PunishSender;
  if (observed == Deviation::ByReceiver) return Phase::PunishReceiver;
  if (rule == TransitionRule::Absorbing) return current;
  return Phase::Normal;  // one conforming period releases any punishment
}

const PhaseProfile& ThreePhaseAutomaton::profile(Phase p) const {
  switch (p) {
    case Phase::PunishSender: return punishSender;
    case Phase::PunishReceiver: return punishReceiver;
    case Phase::Normal: break;
  }
  return normal;
}

ThreePhaseAutomaton automaton_from_certificate(const FiniteCheapTalkGame& game,
                                               const WRPCertificate& cert,
                                               TransitionRule rule) {
  ThreePhaseAutomaton autom;
  autom.game = game;
  autom.normal = PhaseProfile{cert.normalSender, cert.normalReceiver};
  autom.punishSender = PhaseProfile{cert.senderPunishmentSender, cert.senderPunishmentReceiver};
  autom.punishReceiver =
      PhaseProfile{cert.receiverPunishmentSender, cert.receiverPunishmentReceiver};
  autom.rule = rule;
  return autom;
}

PhaseValues continuation_values(const ThreePhaseAutomaton& autom, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("continuation_values: delta must lie in (0, 1)");
  }
  const Phase phases[3] = {Phase::Normal, Phase::PunishSender, Phase::PunishReceiver};
  double stage[3][2];
  std::size_t succ[3];
  for (int i = 0; i < 3; ++i) {
    const auto& prof = autom.profile(phases[i]);
    const PayoffProfile u = expected_payoffs(autom.game, prof.sender, prof.receiver);
    stage[i][0] = u.vS;
    stage[i][1] = u.vR;
    succ[i] = static_cast<std::size_t>(next_phase(autom.rule, phases[i], Deviation::None));
  }
  // Solve (I - delta T) V = (1 - delta) u for each player; T is the
  // deterministic successor map.
  PhaseValues out;
  for (int player = 0; player < 2; ++player) {
    double a[3][4] = {};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) a[i][j] = (i == j) ? 1.0 : 0.0;
      a[i][succ[i]] -= delta;
      a[i][3] = (1.0 - delta) * stage[i][player];
    }
    for (int col = 0; col < 3; ++col) {  // Gaussian elimination, partial pivot
      int piv = col;
      for (int r = col + 1; r < 3; ++r) {
        if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
      }
      std::swap(a[col], a[piv]);
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      }
    }
    for (int i = 0; i < 3; ++i) {
      const double v = a[i][3] / a[i][i];
      if (player == 0) {
        out.v[static_cast<std::size_t>(i)].vS = v;
      } else {
        out.v[static_cast<std::size_t>(i)].vR = v;
      }
    }
  }
  return out;
}

SpeReport check_spe(const ThreePhaseAutomaton& autom, double delta, double tol) {
  SpeReport rep;
  rep.values = continuation_values(autom, delta);
  const Phase phases[3] = {Phase::Normal, Phase::PunishSender, Phase::PunishReceiver};
  std::size_t k = 0;
  rep.minMargin = 1e300;
  for (const Phase p : phases) {
    const auto& prof = autom.profile(p);
    const PayoffProfile u = expected_payoffs(autom.game, prof.sender, prof.receiver);
    const Phase onConform = next_phase(autom.rule, p, Deviation::None);
    for (const bool sender : {true, false}) {
      const Phase onDeviate =
          next_phase(autom.rule, p, sender ? Deviation::BySender : Deviation::ByReceiver);
      double stage_conform, stage_deviate, cont_conform, cont_deviate;
      if (sender) {
        stage_conform = u.vS;
        stage_deviate = sender_best_response(autom.game, prof.receiver).value;
        cont_conform = rep.values.at(onConform).vS;
        cont_deviate = rep.values.at(onDeviate).vS;
      } else {
        stage_conform = u.vR;
        stage_deviate = receiver_best_response(autom.game, prof.sender).value;
        cont_conform = rep.values.at(onConform).vR;
        cont_deviate = rep.values.at(onDeviate).vR;
      }
      const double margin = (1.0 - delta) * (stage_conform - stage_deviate) +
                            delta * (cont_conform - cont_deviate);
      rep.margins[k++] = SpeMargin{p, sender, margin};
      rep.minMargin = std::min(rep.minMargin, margin);
    }
  }
  rep.isSpe = rep.minMargin >= -tol;
  return rep;
}

WrpPhaseReport check_wrp_phases(const ThreePhaseAutomaton& autom, double delta) {
  WrpPhaseReport rep;
  rep.values = continuation_values(autom, delta);
  const Phase phases[3] = {Phase::Normal, Phase::PunishSender, Phase::PunishReceiver};
  for (const Phase a : phases) {
    for (const Phase b : phases) {
      if (a == b) continue;
      const PayoffProfile& va = rep.values.at(a);
      const PayoffProfile& vb = rep.values.at(b);
      if (vb.vS > va.vS + kDominanceTol && vb.vR > va.vR + kDominanceTol) {
        rep.violations.emplace_back(a, b);  // b strictly Pareto-dominates a
      }
    }
  }
  rep.wrpCompatible = rep.violations.empty();
  return rep;
}

std::optional<double> min_delta(const ThreePhaseAutomaton& autom, std::size_t gridSize,
                                double tol) {
  if (gridSize < 2) throw ValidationError("min_delta: grid size must be at least 2");
  auto passes = [&](double d) { return check_spe(autom, d, tol).isSpe; };
  if (!passes(1.0 - 1e-6)) return std::nullopt;
  std::size_t first_pass = gridSize;
  for (std::size_t k = 1; k < gridSize; ++k) {
    if (passes(static_cast<double>(k) / gridSize)) {
      first_pass = k;
      break;
    }
  }
  if (first_pass == gridSize) return 1.0 - 1e-6;
  if (first_pass == 1) return 1.0 / gridSize;  // grid minimum
  double lo = static_cast<double>(first_pass - 1) / gridSize;
  double hi = static_cast<double>(first_pass) / gridSize;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

SimTrace run_path(const ThreePhaseAutomaton& autom, double delta, std::size_t periods,
                  std::uint64_t seed, const std::vector<ScriptedDeviation>& deviations) {
  if (periods < 1) throw ValidationError("run_path: need at least one period");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("run_path: delta must lie in (0, 1)");
  }
  std::map<std::size_t, const Matrix*> sender_dev, receiver_dev;
  for (const auto& d : deviations) {
    if (d.t >= periods) {
      std::ostringstream os;
      os << "scripted deviation at t = " << d.t << " is outside the horizon " << periods;
      throw ValidationError(os.str());
    }
    auto& slot = d.bySender ? sender_dev : receiver_dev;
    if (!slot.emplace(d.t, &d.kernel).second) {
      throw ValidationError("duplicate scripted deviation for one player and period");
    }
  }

  std::mt19937_64 rng(seed);
  SimTrace trace;
  trace.records.reserve(periods);
  Phase phase = Phase::Normal;
  double disc_s = 0.0, disc_r = 0.0, sum_s = 0.0, sum_r = 0.0, w = 1.0;
  for (std::size_t t = 0; t < periods; ++t) {
    const PhaseProfile& prof = autom.profile(phase);
    const Matrix* skern = &prof.sender.kernel;
    const Matrix* rkern = &prof.receiver.kernel;
    bool dev_s = false, dev_r = false;
    if (auto it = sender_dev.find(t); it != sender_dev.end()) {
      validate_sender(autom.game, SenderStrategy{*it->second});
      dev_s = !kernels_equal(*it->second, *skern, 1e-9);
      skern = it->second;
    }
    if (auto it = receiver_dev.find(t); it != receiver_dev.end()) {
      validate_receiver(autom.game, ReceiverStrategy{*it->second});
      dev_r = !kernels_equal(*it->second, *rkern, 1e-9);
      rkern = it->second;
    }

    TraceRecord rec;
    rec.t = t;
    rec.phase = phase;
    rec.state = sample_row(autom.game.prior, rng);
    rec.message = sample_row((*skern)[rec.state], rng);
    rec.action = sample_row((*rkern)[rec.message], rng);
    rec.uS = autom.game.uS[rec.state][rec.action];
    rec.uR = autom.game.uR[rec.state][rec.action];
    trace.records.push_back(rec);
    trace.phaseCounts[static_cast<std::size_t>(phase)] += 1;
    disc_s += w * rec.uS;
    disc_r += w * rec.uR;
    w *= delta;
    sum_s += rec.uS;
    sum_r += rec.uR;

    Deviation obs = Deviation::None;
    if (dev_s) {
      obs = Deviation::BySender;  // simultaneous deviations resolve to the Sender
    } else if (dev_r) {
      obs = Deviation::ByReceiver;
    }
    if (dev_s) trace.deviationLog.emplace_back(t, true);
    if (dev_r) trace.deviationLog.emplace_back(t, false);
    phase = next_phase(autom.rule, phase, obs);
  }
  trace.discounted = PayoffProfile{(1.0 - delta) * disc_s, (1.0 - delta) * disc_r};
  trace.undiscountedMean = PayoffProfile{sum_s / static_cast<double>(periods),
                                         sum_r / static_cast<double>(periods)};
  return trace;
}

}  // namespace talk

#include "talk/cs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "talk/errors.hpp"
#include "talk/quadrature.hpp"
#include "talk/rootfind.hpp"

namespace talk {

namespace {

constexpr double kQuadTol = 1e-12;
constexpr double kAtomTol = 1e-12;
constexpr double kStrictMargin = 1e-9;

double total_mass(const ContinuumGameSpec& spec) {
  return integrate(spec.density, 0.0, 1.0, kQuadTol);
}

double cell_mass(const ContinuumGameSpec& spec, double lo, double hi) {
  return integrate(spec.density, lo, hi, kQuadTol);
}

double cell_mean(const ContinuumGameSpec& spec, double lo, double hi) {
  const double mass = cell_mass(spec, lo, hi);
  if (mass <= 0.0) return 0.5 * (lo + hi);
  const double first =
      integrate([&](double t) { return t * spec.density(t); }, lo, hi, kQuadTol);
  return first / mass;
}

// Action rule over revealed messages only (atoms carry no mass there).
double piece_action(const CsReceiverStrategy& r, double m) {
  for (std::size_t i = 0; i < r.pieces.size(); ++i) {
    const auto& p = r.pieces[i];
    const bool last = (i + 1 == r.pieces.size());
    if ((m >= p.lo && m < p.hi) || (last && m >= p.lo && m <= p.hi)) {
      return p.identity ? m + p.value : p.value;
    }
  }
  throw ValidationError("receiver step strategy does not cover message " + std::to_string(m));
}

std::vector<double> piece_breaks(const CsReceiverStrategy& r) {
  std::vector<double> cuts;
  for (const auto& p : r.pieces) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  return cuts;
}

void validate_sender_cells(const CsSenderStrategy& s) {
  if (s.cells.empty()) throw ValidationError("sender step strategy has no cells");
  double pos = 0.0;
  for (const auto& c : s.cells) {
    if (c.lo < pos - 1e-12 || c.hi < c.lo) {
      throw ValidationError("sender step strategy cells must be ordered and cover [0,1]");
    }
    pos = c.hi;
  }
  if (std::fabs(s.cells.front().lo) > 1e-12 || std::fabs(s.cells.back().hi - 1.0) > 1e-12) {
    throw ValidationError("sender step strategy cells must cover [0,1]");
  }
}

}  // namespace

ContinuumGameSpec make_quadratic_cs(double bias) {
  if (!(bias > 0.0) || !(bias < 1.0)) {
    throw ValidationError("continuum game needs bias strictly inside (0, 1)");
  }
  ContinuumGameSpec spec;
  spec.bias = bias;
  spec.loss = [](double x) { return -x * x; };
  spec.lossPrime = [](double x) { return -2.0 * x; };
  spec.density = [](double) { return 1.0; };
  spec.quadratic = true;
  return spec;
}

ContinuumGameSpec make_general_cs(double bias, std::function<double(double)> loss,
                                  std::function<double(double)> lossPrime,
                                  std::function<double(double)> density) {
  ContinuumGameSpec spec = make_quadratic_cs(bias);
  spec.loss = std::move(loss);
  spec.lossPrime = std::move(lossPrime);
  spec.density = std::move(density);
  spec.quadratic = false;
  return spec;
}

double cs_action(const CsReceiverStrategy& receiver, double message) {
  for (const auto& [m, a] : receiver.atoms) {
    if (std::fabs(m - message) <= kAtomTol) return a;
  }
  return piece_action(receiver, message);
}

PayoffProfile cs_expected_payoffs(const ContinuumGameSpec& spec, const CsSenderStrategy& sender,
                                  const CsReceiverStrategy& receiver) {
  validate_sender_cells(sender);
  PayoffProfile out;
  const double b = spec.bias;
  const auto cuts = piece_breaks(receiver);
  for (const auto& cell : sender.cells) {
    if (cell.hi - cell.lo <= 0.0) continue;
    if (cell.pooled) {
      const double m = cell_mean(spec, cell.lo, cell.hi);
      const double a = cs_action(receiver, m);
      out.vS += integrate([&](double t) { return spec.loss(a - t - b) * spec.density(t); },
                          cell.lo, cell.hi, kQuadTol);
      out.vR += integrate([&](double t) { return spec.loss(a - t) * spec.density(t); },
                          cell.lo, cell.hi, kQuadTol);
    } else {
      out.vS += integrate(
          [&](double t) { return spec.loss(piece_action(receiver, t) - t - b) * spec.density(t); },
          cell.lo, cell.hi, kQuadTol, cuts);
      out.vR += integrate(
          [&](double t) { return spec.loss(piece_action(receiver, t) - t) * spec.density(t); },
          cell.lo, cell.hi, kQuadTol, cuts);
    }
  }
  return out;
}

double cs_receiver_best_response_value(const ContinuumGameSpec& spec,
                                       const CsSenderStrategy& sender) {
  validate_sender_cells(sender);
  double value = 0.0;
  for (const auto& cell : sender.cells) {
    if (cell.hi - cell.lo <= 0.0) continue;
    if (cell.pooled) {
      auto objective = [&](double a) {
        return integrate([&](double t) { return spec.loss(a - t) * spec.density(t); }, cell.lo,
                         cell.hi, kQuadTol);
      };
      const double a = maximize_concave(objective, spec.action_lo(), spec.action_hi(), 1e-12);
      value += objective(a);
    } else {
      value += integrate([&](double t) { return spec.loss(0.0) * spec.density(t); }, cell.lo,
                         cell.hi, kQuadTol);
    }
  }
  return value;
}

double cs_sender_best_response_value(const ContinuumGameSpec& spec,
                                     const CsReceiverStrategy& receiver) {
  const double b = spec.bias;
  // Closure of the induced action set: intervals from identity pieces,
  // points from constant pieces and atoms.
  struct Range {
    double lo, hi;
  };
  std::vector<Range> ranges;
  for (const auto& p : receiver.pieces) {
    if (p.hi < p.lo) continue;
    if (p.identity) {
      ranges.push_back(Range{p.lo + p.value, p.hi + p.value});
    } else {
      ranges.push_back(Range{p.value, p.value});
    }
  }
  for (const auto& [m, a] : receiver.atoms) {
    (void)m;
    ranges.push_back(Range{a, a});
  }
  if (ranges.empty()) throw ValidationError("receiver step strategy induces no actions");

  auto best = [&](double t) {
    const double ideal = t + b;
    double v = -1e300;
    for (const auto& r : ranges) {
      const double a = std::clamp(ideal, r.lo, r.hi);
      v = std::max(v, spec.loss(a - ideal));
    }
    return v * spec.density(t);
  };
  std::vector<double> breaks;
  for (const auto& r : ranges) {
    breaks.push_back(r.lo - b);
    breaks.push_back(r.hi - b);
  }
  return integrate(best, 0.0, 1.0, kQuadTol, breaks);
}

CsMinmax cs_minmax(const ContinuumGameSpec& spec) {
  if (!spec.quadratic) {
    throw CapabilityError(
        "cs_minmax: closed forms are quadratic-specific; discretize the game for general losses");
  }
  const double total = total_mass(spec);
  const double mean =
      integrate([&](double t) { return t * spec.density(t); }, 0.0, 1.0, kQuadTol) / total;
  const double second =
      integrate([&](double t) { return t * t * spec.density(t); }, 0.0, 1.0, kQuadTol) / total;
  const double var = second - mean * mean;
  CsMinmax out;
  out.uBarR = -var;
  const double expected_bias = mean + spec.bias;
  out.uBarS = -var - expected_bias * expected_bias;
  out.receiverWitnessAction = 0.0;
  out.senderWitnessMessage = 0.0;
  return out;
}

CsParetoPoint pareto_point(const ContinuumGameSpec& spec, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw ValidationError("pareto_point: lambda must lie in [0, 1]");
  }
  const double b = spec.bias;
  auto foc = [&](double t) {
    return lambda * spec.lossPrime(-(1.0 - t) * b) + (1.0 - lambda) * spec.lossPrime(t * b);
  };
  const double t = bisect(foc, 0.0, 1.0, 1e-13);
  CsParetoPoint out;
  out.lambdaTilde = t;
  out.v = PayoffProfile{spec.loss(-(1.0 - t) * b), spec.loss(t * b)};
  return out;
}

std::vector<CsFrontierSample> frontier_curve(const ContinuumGameSpec& spec,
                                             std::size_t gridSize) {
  if (gridSize < 2) throw ValidationError("frontier_curve: grid size must be at least 2");
  std::vector<CsFrontierSample> out;
  out.reserve(gridSize);
  for (std::size_t i = 0; i < gridSize; ++i) {
    const double lambda = static_cast<double>(i) / (gridSize - 1);
    const CsParetoPoint p = pareto_point(spec, lambda);
    out.push_back(CsFrontierSample{lambda, p.lambdaTilde, p.v});
  }
  return out;
}

namespace {

CsSenderStrategy pool_low_sender(double y) {
  CsSenderStrategy s;
  if (y <= 0.0) {
    s.cells = {CsCell{0.0, 1.0, false}};
  } else if (y >= 1.0) {
    s.cells = {CsCell{0.0, 1.0, true}};
  } else {
    s.cells = {CsCell{0.0, y, true}, CsCell{y, 1.0, false}};
  }
  return s;
}

CsReceiverStrategy pool_low_receiver(const ContinuumGameSpec& spec, double y) {
  CsReceiverStrategy r;
  if (y > 0.0) {
    const double mean = cell_mean(spec, 0.0, std::min(y, 1.0));
    r.atoms.emplace_back(mean, mean + spec.bias);
  }
  if (y < 1.0) {
    if (y > 0.0) r.pieces.push_back(CsReceiverPiece{0.0, y, false, 0.0});
    r.pieces.push_back(CsReceiverPiece{y, 1.0, true, spec.bias});
  } else {
    r.pieces.push_back(CsReceiverPiece{0.0, 1.0, false, 0.0});
  }
  return r;
}

double pool_low_sender_value(const ContinuumGameSpec& spec, double y) {
  const auto s = pool_low_sender(y);
  const auto r = pool_low_receiver(spec, y);
  return cs_expected_payoffs(spec, s, r).vS;
}

CsReceiverStrategy truncation_receiver(double x) {
  CsReceiverStrategy r;
  if (x <= 0.0) {
    r.pieces = {CsReceiverPiece{0.0, 1.0, false, 0.0}};
  } else if (x >= 1.0) {
    r.pieces = {CsReceiverPiece{0.0, 1.0, true, 0.0}};
  } else {
    r.pieces = {CsReceiverPiece{0.0, x, true, 0.0}, CsReceiverPiece{x, 1.0, false, x}};
  }
  return r;
}

double truncation_receiver_value(const ContinuumGameSpec& spec, double x) {
  const CsSenderStrategy truth{{CsCell{0.0, 1.0, false}}};
  return cs_expected_payoffs(spec, truth, truncation_receiver(x)).vR;
}

}  // namespace

CsReceiverPunishment receiver_punishment_y(const ContinuumGameSpec& spec, double targetValue) {
  const double hi_value = pool_low_sender_value(spec, 0.0);  // full revelation
  const double lo_value = pool_low_sender_value(spec, 1.0);  // babbling on the Sender optimum
  if (targetValue > hi_value + 1e-12 || targetValue < lo_value - 1e-12) {
    std::ostringstream os;
    os << "receiver_punishment_y: target " << targetValue << " outside the attainable range ["
       << lo_value << ", " << hi_value << "]";
    throw BracketError(os.str());
  }
  const double y = bisect(
      [&](double yy) { return pool_low_sender_value(spec, yy) - targetValue; }, 0.0, 1.0, 1e-11);
  CsReceiverPunishment out;
  out.y = y;
  out.sender = pool_low_sender(y);
  out.receiver = pool_low_receiver(spec, y);
  out.value = cs_expected_payoffs(spec, out.sender, out.receiver).vS;
  out.receiverBestResponseValue = cs_receiver_best_response_value(spec, out.sender);
  return out;
}

CsSenderPunishment sender_punishment_x(const ContinuumGameSpec& spec,
                                       double targetReceiverValue) {
  const double lo_value = truncation_receiver_value(spec, 0.0);  // constant action 0
  const double hi_value = truncation_receiver_value(spec, 1.0);  // full believing
  if (targetReceiverValue > hi_value + 1e-12 || targetReceiverValue < lo_value - 1e-12) {
    std::ostringstream os;
    os << "sender_punishment_x: target " << targetReceiverValue
       << " outside the attainable range [" << lo_value << ", " << hi_value << "]";
    throw BracketError(os.str());
  }
  const double x = bisect(
      [&](double xx) { return truncation_receiver_value(spec, xx) - targetReceiverValue; }, 0.0,
      1.0, 1e-11);
  CsSenderPunishment out;
  out.x = x;
  out.receiver = truncation_receiver(x);
  out.receiverValue = truncation_receiver_value(spec, x);
  out.senderDeviationCap = cs_sender_best_response_value(spec, out.receiver);
  return out;
}

CsCertifyResult certify_cs(const ContinuumGameSpec& spec, double lambda) {
  if (!(lambda > 0.0) || !(lambda < 0.5)) {
    throw ValidationError(
        "certify_cs: lambda must lie strictly inside (0, 1/2); on the frontier the certified "
        "region cannot favor the Sender");
  }
  CsCertifyResult res;
  const CsParetoPoint p = pareto_point(spec, lambda);
  const double vS = p.v.vS;
  const double vR = p.v.vR;
  const double w = 0.5 * (vS + vR);

  CsReceiverPunishment rp;
  try {
    rp = receiver_punishment_y(spec, w);
  } catch (const BracketError&) {
    res.failedInequality = "receiver-punishment level w outside the attainable pooling range";
    return res;
  }
  if (!(rp.receiverBestResponseValue < vR - kStrictMargin)) {
    res.failedInequality = "sup_rho' uR(sigmaR, rho') < vR";
    return res;
  }
  if (!(rp.value > vS + kStrictMargin)) {
    res.failedInequality = "uS(sigmaR, rhoR) > vS";
    return res;
  }

  CsSenderPunishment sp;
  try {
    sp = sender_punishment_x(spec, vR);
  } catch (const BracketError&) {
    res.failedInequality = "sender-punishment Receiver level outside the truncation range";
    return res;
  }
  if (!(sp.senderDeviationCap < vS - kStrictMargin)) {
    res.failedInequality = "senderDeviationCap < vS";
    return res;
  }

  CsCertificate cert;
  cert.lambda = lambda;
  cert.lambdaTilde = p.lambdaTilde;
  cert.target = p.v;
  cert.w = w;
  cert.receiverPunishment = std::move(rp);
  cert.senderPunishment = std::move(sp);
  res.certificate = std::move(cert);
  return res;
}

std::optional<double> cs_lambda_bar(const ContinuumGameSpec& spec, std::size_t gridSize) {
  if (gridSize < 2) throw ValidationError("cs_lambda_bar: grid size must be at least 2");
  for (std::size_t k = 1; k < gridSize; ++k) {
    const double lambda = 0.5 * static_cast<double>(k) / gridSize;
    if (certify_cs(spec, lambda).certificate.has_value()) return lambda;
  }
  return std::nullopt;
}

std::pair<double, double> shift_check(const ContinuumGameSpec& spec,
                                      const CsSenderStrategy& sender,
                                      const CsReceiverStrategy& receiver) {
  const double lo = 0.0;
  const double hi = 1.0 + spec.bias;
  auto in_range = [&](double a) { return a >= lo - 1e-12 && a <= hi + 1e-12; };
  for (const auto& p : receiver.pieces) {
    const double a0 = p.identity ? p.lo + p.value : p.value;
    const double a1 = p.identity ? p.hi + p.value : p.value;
    if (!in_range(a0) || !in_range(a1)) {
      throw ValidationError("shift_check: receiver actions must lie in [0, 1 + bias]");
    }
  }
  for (const auto& [m, a] : receiver.atoms) {
    (void)m;
    if (!in_range(a)) {
      throw ValidationError("shift_check: receiver actions must lie in [0, 1 + bias]");
    }
  }
  CsReceiverStrategy shifted = receiver;
  for (auto& p : shifted.pieces) p.value -= spec.bias;
  for (auto& [m, a] : shifted.atoms) a -= spec.bias;
  const double lhs = cs_expected_payoffs(spec, sender, shifted).vR;
  const double rhs = cs_expected_payoffs(spec, sender, receiver).vS;
  return {lhs, rhs};
}

FiniteCheapTalkGame discretize(const ContinuumGameSpec& spec, std::size_t nStates,
                               std::size_t nActions) {
  if (nStates < 2 || nActions < 2) {
    throw ValidationError("discretize: need at least 2 states and 2 actions");
  }
  FiniteCheapTalkGame g;
  const double h = 1.0 / static_cast<double>(nStates);
  char buf[40];
  std::vector<double> mids(nStates);
  double mass_sum = 0.0;
  for (std::size_t i = 0; i < nStates; ++i) {
    mids[i] = (static_cast<double>(i) + 0.5) * h;
    std::snprintf(buf, sizeof buf, "%.12g", mids[i]);
    g.states.emplace_back(buf);
    const double mass = cell_mass(spec, static_cast<double>(i) * h,
                                  (static_cast<double>(i) + 1.0) * h);
    g.prior.push_back(mass);
    mass_sum += mass;
  }
  for (double& p : g.prior) p /= mass_sum;

  std::vector<double> acts(nActions);
  for (std::size_t j = 0; j < nActions; ++j) {
    acts[j] = spec.action_lo() +
              (spec.action_hi() - spec.action_lo()) * static_cast<double>(j) /
                  (static_cast<double>(nActions) - 1.0);
    std::snprintf(buf, sizeof buf, "%.12g", acts[j]);
    g.actions.emplace_back(buf);
  }
  g.uS.assign(nStates, std::vector<double>(nActions, 0.0));
  g.uR.assign(nStates, std::vector<double>(nActions, 0.0));
  for (std::size_t i = 0; i < nStates; ++i) {
    for (std::size_t j = 0; j < nActions; ++j) {
      g.uS[i][j] = spec.loss(acts[j] - mids[i] - spec.bias);
      g.uR[i][j] = spec.loss(acts[j] - mids[i]);
    }
  }
  return g;
}

}  // namespace talk

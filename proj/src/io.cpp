#include "talk/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "talk/errors.hpp"

namespace talk {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

void write_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << j.dump(2) << '\n';
}

// Round to 12 significant digits so dumped JSON is reproducible.
double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

json kernel_to_json(const Matrix& kernel) {
  json rows = json::array();
  for (const auto& row : kernel) {
    json r = json::array();
    for (double v : row) r.push_back(round12(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix kernel_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + ": kernel must be an array of rows");
  Matrix out;
  for (const auto& row : j) {
    if (!row.is_array()) throw ValidationError(where + ": kernel rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ValidationError(where + ": kernel entries must be numbers");
      r.push_back(v.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

json game_to_json(const FiniteCheapTalkGame& game) {
  json j;
  j["states"] = game.states;
  json prior = json::array();
  for (double p : game.prior) prior.push_back(round12(p));
  j["prior"] = std::move(prior);
  j["actions"] = game.actions;
  j["uS"] = kernel_to_json(game.uS);
  j["uR"] = kernel_to_json(game.uR);
  return j;
}

FiniteCheapTalkGame game_from_json(const json& j, const std::string& where) {
  FiniteCheapTalkGame g;
  for (const char* key : {"states", "prior", "actions", "uS", "uR"}) {
    if (!j.contains(key)) throw ValidationError(where + ": missing key \"" + key + "\"");
  }
  for (const auto& s : j["states"]) g.states.push_back(s.get<std::string>());
  for (const auto& p : j["prior"]) {
    if (!p.is_number()) throw ValidationError(where + ": prior entries must be numbers");
    g.prior.push_back(p.get<double>());
  }
  for (const auto& a : j["actions"]) g.actions.push_back(a.get<std::string>());
  g.uS = kernel_from_json(j["uS"], where + ".uS");
  g.uR = kernel_from_json(j["uR"], where + ".uR");
  if (j.contains("messages")) {
    std::vector<std::string> messages;
    for (const auto& m : j["messages"]) messages.push_back(m.get<std::string>());
    validate_game(g, &messages);
  } else {
    validate_game(g);
  }
  return g;
}

}  // namespace

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

FiniteCheapTalkGame load_game(const std::string& path) {
  return game_from_json(parse_file(path), path);
}

void save_game(const FiniteCheapTalkGame& game, const std::string& path) {
  write_file(game_to_json(game), path);
}

Matrix load_kernel(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("kernel")) throw ValidationError(path + ": missing key \"kernel\"");
  return kernel_from_json(j["kernel"], path);
}

void save_kernel(const Matrix& kernel, const std::string& path) {
  json j;
  j["kernel"] = kernel_to_json(kernel);
  write_file(j, path);
}

WRPCertificate load_certificate(const std::string& path) {
  const json j = parse_file(path);
  WRPCertificate cert;
  for (const char* key : {"target", "normal", "senderPunishment", "receiverPunishment"}) {
    if (!j.contains(key)) throw ValidationError(path + ": missing key \"" + key + "\"");
  }
  cert.target.vS = j["target"]["vS"].get<double>();
  cert.target.vR = j["target"]["vR"].get<double>();
  cert.normalSender.kernel = kernel_from_json(j["normal"]["sender"], path);
  cert.normalReceiver.kernel = kernel_from_json(j["normal"]["receiver"], path);
  cert.senderPunishmentSender.kernel = kernel_from_json(j["senderPunishment"]["sender"], path);
  cert.senderPunishmentReceiver.kernel =
      kernel_from_json(j["senderPunishment"]["receiver"], path);
  cert.receiverPunishmentSender.kernel =
      kernel_from_json(j["receiverPunishment"]["sender"], path);
  cert.receiverPunishmentReceiver.kernel =
      kernel_from_json(j["receiverPunishment"]["receiver"], path);
  cert.stageNash = j.value("stageNash", false);
  if (j.contains("margins")) {
    const auto& m = j["margins"];
    cert.margins.mIRS = m.value("mIRS", 0.0);
    cert.margins.mIRR = m.value("mIRR", 0.0);
    cert.margins.mS = m.value("mS", 0.0);
    cert.margins.mR = m.value("mR", 0.0);
    cert.margins.punisherSlackS = m.value("punisherSlackS", 0.0);
    cert.margins.punisherSlackR = m.value("punisherSlackR", 0.0);
  }
  return cert;
}

void save_certificate(const WRPCertificate& cert, const std::string& path) {
  json j;
  j["target"] = {{"vS", round12(cert.target.vS)}, {"vR", round12(cert.target.vR)}};
  j["normal"] = {{"sender", kernel_to_json(cert.normalSender.kernel)},
                 {"receiver", kernel_to_json(cert.normalReceiver.kernel)}};
  j["senderPunishment"] = {{"sender", kernel_to_json(cert.senderPunishmentSender.kernel)},
                           {"receiver", kernel_to_json(cert.senderPunishmentReceiver.kernel)}};
  j["receiverPunishment"] = {
      {"sender", kernel_to_json(cert.receiverPunishmentSender.kernel)},
      {"receiver", kernel_to_json(cert.receiverPunishmentReceiver.kernel)}};
  j["margins"] = {{"mIRS", round12(cert.margins.mIRS)},
                  {"mIRR", round12(cert.margins.mIRR)},
                  {"mS", round12(cert.margins.mS)},
                  {"mR", round12(cert.margins.mR)},
                  {"punisherSlackS", round12(cert.margins.punisherSlackS)},
                  {"punisherSlackR", round12(cert.margins.punisherSlackR)}};
  j["stageNash"] = cert.stageNash;
  write_file(j, path);
}

ThreePhaseAutomaton load_automaton(const std::string& path) {
  const json j = parse_file(path);
  ThreePhaseAutomaton autom;
  if (!j.contains("game")) throw ValidationError(path + ": missing key \"game\"");
  autom.game = game_from_json(j["game"], path + ".game");
  auto read_profile = [&](const char* key) {
    if (!j.contains(key)) throw ValidationError(path + ": missing key \"" + key + "\"");
    PhaseProfile p;
    p.sender.kernel = kernel_from_json(j[key]["sender"], path);
    p.receiver.kernel = kernel_from_json(j[key]["receiver"], path);
    validate_sender(autom.game, p.sender);
    validate_receiver(autom.game, p.receiver);
    return p;
  };
  autom.normal = read_profile("normal");
  autom.punishSender = read_profile("punishSender");
  autom.punishReceiver = read_profile("punishReceiver");
  const std::string rule = j.value("transitionRule", std::string("one_period_retrigger"));
  const auto parsed = rule_from_name(rule);
  if (!parsed) throw ValidationError(path + ": unknown transition rule \"" + rule + "\"");
  autom.rule = *parsed;
  return autom;
}

void save_automaton(const ThreePhaseAutomaton& autom, const std::string& path) {
  json j;
  j["game"] = game_to_json(autom.game);
  j["normal"] = {{"sender", kernel_to_json(autom.normal.sender.kernel)},
                 {"receiver", kernel_to_json(autom.normal.receiver.kernel)}};
  j["punishSender"] = {{"sender", kernel_to_json(autom.punishSender.sender.kernel)},
                       {"receiver", kernel_to_json(autom.punishSender.receiver.kernel)}};
  j["punishReceiver"] = {{"sender", kernel_to_json(autom.punishReceiver.sender.kernel)},
                         {"receiver", kernel_to_json(autom.punishReceiver.receiver.kernel)}};
  j["transitionRule"] = rule_name(autom.rule);
  write_file(j, path);
}

std::vector<ScriptedDeviation> load_deviations(const std::string& path) {
  const json j = parse_file(path);
  if (!j.is_array()) throw ValidationError(path + ": expected an array of deviations");
  std::vector<ScriptedDeviation> out;
  for (const auto& d : j) {
    ScriptedDeviation dev;
    if (!d.contains("t") || !d.contains("player") || !d.contains("kernel")) {
      throw ValidationError(path + ": each deviation needs t, player and kernel");
    }
    dev.t = d["t"].get<std::size_t>();
    const std::string player = d["player"].get<std::string>();
    if (player == "sender") {
      dev.bySender = true;
    } else if (player == "receiver") {
      dev.bySender = false;
    } else {
      throw ValidationError(path + ": player must be \"sender\" or \"receiver\"");
    }
    dev.kernel = kernel_from_json(d["kernel"], path);
    out.push_back(std::move(dev));
  }
  return out;
}

void save_gap_report(const GapReport& report, const std::string& path) {
  json j;
  j["receiverOptimum"] = round12(report.receiverOptimum);
  j["senderAtOptimum"] = round12(report.senderAtOptimum);
  j["senderDeviationAtOptimum"] = round12(report.senderDeviationAtOptimum);
  j["etaEstimate"] = round12(report.etaEstimate);
  j["assumptionsViolated"] = report.assumptionsViolated;
  json pts = json::array();
  for (const GapPoint& gp : report.gridPoints) {
    pts.push_back({{"vR", round12(gp.vR)},
                   {"minCap", round12(gp.minCap)},
                   {"maxFrontierVS", round12(gp.maxFrontierVS)},
                   {"wrpPossible", gp.wrpPossible}});
  }
  j["gridPoints"] = std::move(pts);
  write_file(j, path);
}

void save_scan_csv(const std::vector<ScanRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "lambda,vS,vR,wrp,capS,frontier_vS_max,margin\n";
  for (const ScanRow& r : rows) {
    out << fmt12(r.lambda) << ',' << fmt12(r.payoff.vS) << ',' << fmt12(r.payoff.vR) << ','
        << (r.wrp ? 1 : 0) << ',' << fmt12(r.capS) << ',' << fmt12(r.maxFrontierVS) << ','
        << fmt12(r.margin) << '\n';
  }
}

void save_trace_csv(const FiniteCheapTalkGame& game, const SimTrace& trace,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "t,phase,state,message,action,uS,uR\n";
  for (const TraceRecord& r : trace.records) {
    out << r.t << ',' << phase_name(r.phase) << ',' << game.states[r.state] << ','
        << game.states[r.message] << ',' << game.actions[r.action] << ',' << fmt12(r.uS) << ','
        << fmt12(r.uR) << '\n';
  }
}

void save_frontier_csv(const std::vector<CsFrontierSample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path);
  out << "lambda,lambdaTilde,vS,vR\n";
  for (const CsFrontierSample& s : samples) {
    out << fmt12(s.lambda) << ',' << fmt12(s.lambdaTilde) << ',' << fmt12(s.v.vS) << ','
        << fmt12(s.v.vR) << '\n';
  }
}

}  // namespace talk

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "talk/binary.hpp"
#include "talk/cli.hpp"
#include "talk/cs.hpp"
#include "talk/io.hpp"

using namespace talk;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "renege_talk_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string binary_game_path() {
  static const std::string path = [] {
    const fs::path p = work_dir() / "binary.json";
    save_game(make_binary(2.0 / 3.0), p.string());
    return p.string();
  }();
  return path;
}

}  // namespace

TEST_CASE("binary --interval prints the closed-form bounds") {
  const CliResult r = run({"binary", "--alpha", "0.6667", "--interval"});
  CHECK(r.code == 0);
  const auto [lo, hi] = wrp_interval(0.6667);
  char expect[80];
  std::snprintf(expect, sizeof expect, "lo=%.6f hi=%.6f\n", lo, hi);
  CHECK(r.out == expect);
}

TEST_CASE("game validate") {
  SUBCASE("a well-formed game passes") {
    const CliResult r = run({"game", "validate", binary_game_path()});
    CHECK(r.code == 0);
    CHECK(r.out == "ok\n");
  }
  SUBCASE("a broken prior is rejected with the violated invariant") {
    const fs::path bad = work_dir() / "bad_prior.json";
    std::ofstream(bad) << R"({"states":["0","1"],"prior":[0.66,0.33],
      "actions":["0","1"],"uS":[[0,1],[0,1]],"uR":[[1,0],[0,1]]})";
    const CliResult r = run({"game", "validate", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("prior sums to") != std::string::npos);
  }
  SUBCASE("extra messages are rejected") {
    const fs::path bad = work_dir() / "bad_messages.json";
    std::ofstream(bad) << R"({"states":["0","1"],"messages":["0","1","2"],
      "prior":[0.5,0.5],"actions":["0","1"],"uS":[[0,1],[0,1]],"uR":[[1,0],[0,1]]})";
    const CliResult r = run({"game", "validate", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("message") != std::string::npos);
  }
}

TEST_CASE("game payoffs and minmax") {
  const fs::path sender = work_dir() / "truth.json";
  const fs::path receiver = work_dir() / "believe.json";
  save_kernel(Matrix{{1.0, 0.0}, {0.0, 1.0}}, sender.string());
  save_kernel(Matrix{{1.0, 0.0}, {0.0, 1.0}}, receiver.string());

  const CliResult p = run({"game", "payoffs", binary_game_path(), "--sender", sender.string(),
                           "--receiver", receiver.string()});
  CHECK(p.code == 0);
  CHECK(p.out == "vS=0.333333333333 vR=1\n");

  const CliResult m = run({"game", "minmax", binary_game_path()});
  CHECK(m.code == 0);
  CHECK(m.out == "uBarS=0 uBarR=0.666666666667\n");
}

TEST_CASE("game frontier emits hull and frontier CSVs") {
  const fs::path front = work_dir() / "frontier.csv";
  const fs::path hull = work_dir() / "hull.csv";
  const CliResult r = run({"game", "frontier", binary_game_path(), "--grid", "11", "--out",
                           front.string(), "--hull", hull.string()});
  CHECK(r.code == 0);
  const std::string f = slurp(front);
  CHECK(f.rfind("lambda,vS,vR\n", 0) == 0);
  CHECK(std::count(f.begin(), f.end(), '\n') == 12);  // header + 11 samples
  const std::string h = slurp(hull);
  CHECK(h.rfind("vS,vR\n", 0) == 0);
  CHECK(std::count(h.begin(), h.end(), '\n') == 5);  // header + 4 vertices
}

TEST_CASE("certificate round trip: construct, save, verify") {
  const fs::path cert = work_dir() / "cert.json";
  const CliResult c = run({"binary", "--alpha", "0.666666666666666666", "--construct", "--nu",
                           "0.6", "--out", cert.string()});
  CHECK(c.code == 0);
  CHECK(c.out.find("constructed vS=0.6") != std::string::npos);

  const CliResult v =
      run({"wrp", "certify", binary_game_path(), "--verify", cert.string()});
  CHECK(v.code == 0);
  CHECK(v.out.find("valid=yes") != std::string::npos);

  // Tampering with the target must fail verification with exit 2.
  nlohmann::json j = nlohmann::json::parse(slurp(cert));
  j["target"]["vR"] = 0.95;
  std::ofstream(work_dir() / "tampered.json") << j.dump(2);
  const CliResult bad =
      run({"wrp", "certify", binary_game_path(), "--verify", (work_dir() / "tampered.json").string()});
  CHECK(bad.code == 2);
  CHECK(bad.out.find("valid=no") != std::string::npos);
}

TEST_CASE("wrp certify constructs a certificate for explicit targets") {
  const fs::path cert = work_dir() / "point.json";
  const CliResult r = run({"wrp", "certify", binary_game_path(), "--vs", "0.6", "--vr",
                           "0.733333333333333333", "--out", cert.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("certified") != std::string::npos);
  CHECK(fs::exists(cert));

  const CliResult absent =
      run({"wrp", "certify", binary_game_path(), "--vs", "0.2", "--vr", "0.5"});
  CHECK(absent.code == 0);
  CHECK(absent.out == "absent\n");
}

TEST_CASE("wrp scan emits the documented CSV") {
  const fs::path scan = work_dir() / "scan.csv";
  const CliResult r =
      run({"wrp", "scan", binary_game_path(), "--grid", "25", "--out", scan.string()});
  CHECK(r.code == 0);
  const std::string s = slurp(scan);
  CHECK(s.rfind("lambda,vS,vR,wrp,capS,frontier_vS_max,margin\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 26);
}

TEST_CASE("wrp gap emits the report JSON") {
  const fs::path gap = work_dir() / "gap.json";
  const CliResult r =
      run({"wrp", "gap", binary_game_path(), "--grid", "500", "--out", gap.string()});
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(slurp(gap));
  CHECK(std::fabs(j["etaEstimate"].get<double>() - 1.0 / 6.0) < 2e-3);
  CHECK(j["receiverOptimum"].get<double>() == doctest::Approx(1.0));
  CHECK(j["senderDeviationAtOptimum"].get<double>() == doctest::Approx(1.0));
  CHECK_FALSE(j["assumptionsViolated"].get<bool>());
  CHECK(j["gridPoints"].size() == 500);
}

TEST_CASE("cs certify reports success and named failures") {
  const CliResult good = run({"cs", "--bias", "0.2", "--lambda", "0.45", "--certify"});
  CHECK(good.code == 0);
  CHECK(good.out.find("certified lambda=0.45") != std::string::npos);
  const CliResult bad = run({"cs", "--bias", "0.2", "--lambda", "0.05", "--certify"});
  CHECK(bad.code == 0);
  CHECK(bad.out.find("absent: senderDeviationCap < vS") != std::string::npos);
}

TEST_CASE("cs frontier CSV satisfies the curve identity") {
  const fs::path front = work_dir() / "cs_frontier.csv";
  const CliResult r =
      run({"cs", "--bias", "0.2", "--frontier", "--grid", "40", "--out", front.string()});
  CHECK(r.code == 0);
  std::ifstream in(front);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda,lambdaTilde,vS,vR");
  int rows = 0;
  while (std::getline(in, line)) {
    double lambda, tilde, vs, vr;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &lambda, &tilde, &vs, &vr) == 4);
    CHECK(std::fabs(vr - (-0.04 + vs + 0.4 * std::sqrt(-vs))) < 1e-9);
    ++rows;
  }
  CHECK(rows == 40);
}

TEST_CASE("cs discretize output passes game validate") {
  const fs::path game = work_dir() / "cs_game.json";
  const CliResult d = run({"cs", "discretize", "--bias", "0.2", "--n-states", "9",
                           "--n-actions", "9", "--out", game.string()});
  CHECK(d.code == 0);
  const CliResult v = run({"game", "validate", game.string()});
  CHECK(v.code == 0);
}

TEST_CASE("figure emitters") {
  const fs::path f1 = work_dir() / "fig1.csv";
  const CliResult r1 =
      run({"binary", "--alpha", "0.666666666666666666", "--figure1", "--out", f1.string()});
  CHECK(r1.code == 0);
  const std::string s1 = slurp(f1);
  CHECK(s1.find("kind,x,y") != std::string::npos);
  CHECK(s1.find("hull,0,0.666666666667") != std::string::npos);
  CHECK(s1.find("minmax,0,0.666666666667") != std::string::npos);
  CHECK(s1.find("wrp_lo,") != std::string::npos);
  CHECK(s1.find("wrp_hi,0.5,0.833333333333") != std::string::npos);

  const fs::path f2 = work_dir() / "fig2.csv";
  const CliResult r2 =
      run({"cs", "--bias", "0.2", "--figure2", "--grid", "21", "--out", f2.string()});
  CHECK(r2.code == 0);
  const std::string s2 = slurp(f2);
  CHECK(s2.find("lambda,lambdaTilde,vS,vR,certified") != std::string::npos);
  CHECK(s2.find(",1\n") != std::string::npos);   // some certified rows
  CHECK(s2.find("0.5,0.5,-0.01,-0.01,0") != std::string::npos);  // boundary excluded
}

TEST_CASE("simulation subcommands run end to end") {
  const fs::path cert = work_dir() / "sim_cert.json";
  run({"binary", "--alpha", "0.666666666666666666", "--construct", "--nu", "0.6", "--out",
       cert.string()});
  const fs::path autom = work_dir() / "automaton.json";
  const CliResult check = run({"sim", "check", "--game", binary_game_path(), "--cert",
                               cert.string(), "--delta", "0.95", "--grid", "500",
                               "--emit-automaton", autom.string()});
  CHECK(check.code == 0);
  CHECK(check.out.find("spe=yes") != std::string::npos);
  CHECK(check.out.find("wrpCompatible=yes") != std::string::npos);
  CHECK(check.out.find("minDelta=0.8") != std::string::npos);

  const fs::path devs = work_dir() / "devs.json";
  std::ofstream(devs) << R"([{"t": 10, "player": "sender", "kernel": [[0,1],[0,1]]}])";
  const fs::path trace = work_dir() / "trace.csv";
  const CliResult sim = run({"sim", "run", autom.string(), "--delta", "0.95", "--periods",
                             "50", "--seed", "7", "--deviations", devs.string(), "--out",
                             trace.string()});
  CHECK(sim.code == 0);
  std::ifstream in(trace);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,phase,state,message,action,uS,uR");
  std::vector<std::string> phases;
  while (std::getline(in, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    phases.push_back(line.substr(c1 + 1, c2 - c1 - 1));
  }
  REQUIRE(phases.size() == 50);
  CHECK(phases[10] == "Normal");
  CHECK(phases[11] == "PunishS");
  CHECK(phases[12] == "Normal");
}

TEST_CASE("identical invocations produce byte-identical outputs") {
  const fs::path a = work_dir() / "det_a.csv";
  const fs::path b = work_dir() / "det_b.csv";
  run({"wrp", "scan", binary_game_path(), "--grid", "30", "--out", a.string()});
  run({"wrp", "scan", binary_game_path(), "--grid", "30", "--out", b.string()});
  CHECK(slurp(a) == slurp(b));
  REQUIRE(fs::file_size(a) > 0);

  // Parallel grid evaluation assembles in deterministic order.
  const fs::path c = work_dir() / "det_c.csv";
  setenv("RENEGE_TALK_THREADS", "4", 1);
  run({"wrp", "scan", binary_game_path(), "--grid", "30", "--out", c.string()});
  unsetenv("RENEGE_TALK_THREADS");
  CHECK(slurp(a) == slurp(c));
}

TEST_CASE("cs --lambda-bar reports the empirical certification threshold") {
  const CliResult r = run({"cs", "--bias", "0.2", "--lambda-bar", "--grid", "40"});
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("lambdaBar=", 0) == 0);
  const double lb = std::stod(r.out.substr(10));
  CHECK(lb > 0.05);
  CHECK(lb < 0.45);
}

TEST_CASE("exit codes: unknown flags 2, capability errors 3") {
  const CliResult unknown = run({"binary", "--alpha", "0.6", "--interval", "--bogus"});
  CHECK(unknown.code == 2);

  const fs::path game = work_dir() / "cap_game.json";
  save_game(discretize(make_quadratic_cs(0.2), 9, 7), game.string());
  const CliResult cap = run({"wrp", "certify", game.string(), "--vs", "-0.015", "--vr",
                             "-0.0169"});
  CHECK(cap.code == 3);
  CHECK(cap.err.find("capability") != std::string::npos);
}

#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("ppp_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  fs::path p = scratch_dir() / name;
  std::ofstream f(p, std::ios::binary);
  f << content;
  return p;
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path out = scratch_dir() / ("stdout_" + std::to_string(counter) + ".txt");
  fs::path err = scratch_dir() / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = std::string(PPP_CLI_PATH) + " " + args + " >" +
                    out.string() + " 2>" + err.string();
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("solve exits 0 on a mirror and reports the selection") {
  auto in = write_file("mirror.txt", "6\n6\n");
  auto r = run_cli("solve " + in.string());
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["command"] == "solve");
  CHECK(j["result"]["status"] == "solved");
  auto x = j["result"]["solution"]["x"];
  bool ok = (x == Json::array({1, 0})) || (x == Json::array({0, 1}));
  CHECK(ok);
  CHECK(j["result"]["solution"]["exact"] == true);
}

TEST_CASE("solve exits 2 on parity-infeasible input") {
  auto in = write_file("parity.txt", "2\n3\n");
  auto r = run_cli("solve " + in.string());
  CHECK(r.exit_code == 2);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["status"] == "infeasible-parity");
}

TEST_CASE("solve exits 3 when no candidate verifies") {
  auto in = write_file("nosol.txt", "4\n9\n");
  auto r = run_cli("solve " + in.string());
  CHECK(r.exit_code == 3);
}

TEST_CASE("malformed line is cited by number") {
  auto in = write_file("bad.txt", "6\n6\nabc\n");
  auto r = run_cli("solve " + in.string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("missing input file exits 1") {
  auto r = run_cli("solve /nonexistent/definitely_missing.txt");
  CHECK(r.exit_code == 1);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("solve").exit_code == 1);
  CHECK(run_cli("frobnicate x").exit_code == 1);
  auto in = write_file("six.txt", "6\n");
  CHECK(run_cli("solve " + in.string() + " --no-such-flag").exit_code == 1);
}

TEST_CASE("pump emits the single-step trace for entry 6") {
  auto in = write_file("six.txt", "6\n");
  auto r = run_cli("pump " + in.string() + " --gamma 3 --kmax 1");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["trace"]["steps"].size() == 1);
  CHECK(j["result"]["final_primes"] == Json::array({"2", "7", "13"}));
  CHECK(j["result"]["final_entries"] == Json::array({"182"}));
  CHECK(j["warnings"] == Json::array({"pump-exponent-generalization"}));
}

TEST_CASE("pump flags a nonprime gamma") {
  auto in = write_file("six.txt", "6\n");
  auto r = run_cli("pump " + in.string() + " --gamma 4 --kmax 1");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  auto& w = j["warnings"];
  CHECK(std::find(w.begin(), w.end(), Json("nonprime-gamma")) != w.end());
  CHECK(j["config"]["sigma0_gamma"] == 3);
}

TEST_CASE("pump auto-selects gamma from epsilon") {
  auto in = write_file("six.txt", "6\n");
  auto r = run_cli("pump " + in.string() + " --epsilon 1.0 --kmax 1");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["config"]["gamma"] == 3);
  CHECK(j["config"]["gamma_auto_selected"] == true);
}

TEST_CASE("pump writes the CSV trace") {
  auto in = write_file("mirror.txt", "6\n6\n");
  fs::path csv = scratch_dir() / "trace.csv";
  auto r = run_cli("pump " + in.string() + " --gamma 3 --kmax 1 --csv " +
                   csv.string());
  CHECK(r.exit_code == 0);
  auto text = slurp(csv);
  CHECK(text.rfind("step,gamma,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("stats writes series CSV to --out and summary JSON to stdout") {
  fs::path csv = scratch_dir() / "series.csv";
  auto r = run_cli("stats --gamma 3 --qmax 10 --step 5 --out " + csv.string());
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["command"] == "stats");
  CHECK(j["result"]["points"] == 2);
  CHECK(j["result"]["last_q"] == 10);
  auto text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);  // header + 2 rows
  CHECK(text.rfind("q,gamma,omega_big,", 0) == 0);
}

TEST_CASE("stats inlines the series without --out") {
  auto r = run_cli("stats --gamma 3 --qmax 10 --step 5");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j["result"].contains("series"));
  CHECK(j["result"]["series"].size() == 2);
  CHECK(j["result"]["series"][0]["omega_big"] == 14);
}

TEST_CASE("stats rejects qmax 0 and defaults the step") {
  CHECK(run_cli("stats --qmax 0").exit_code == 1);
  auto r = run_cli("stats --gamma 3 --qmax 25");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["config"]["step"] == 3);  // ceil(25/10)
}

TEST_CASE("oracle certifies both directions") {
  auto yes = write_file("yes.txt", "2\n3\n6\n");
  auto r = run_cli("oracle " + yes.string());
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["exhaustive"] == true);
  CHECK(j["result"]["solution"]["x"] == Json::array({1, 1, 0}));

  auto no = write_file("no.txt", "2\n3\n5\n");
  auto r2 = run_cli("oracle " + no.string());
  CHECK(r2.exit_code == 3);
  Json j2 = Json::parse(r2.out);
  CHECK(j2["result"]["solution"].is_null());
}

TEST_CASE("oracle cap overflow exits 1") {
  std::string many;
  for (int i = 0; i < 30; ++i) many += "2\n";
  auto in = write_file("many.txt", many);
  auto r = run_cli("oracle " + in.string() + " --cap 24");
  CHECK(r.exit_code == 1);
}

TEST_CASE("reproducible runs are byte-identical") {
  auto in = write_file("det.txt", "10\n14\n35\n2\n2\n");
  std::string args = "solve " + in.string() + " --reproducible --seed 11";
  auto a = run_cli(args);
  auto b = run_cli(args);
  CHECK(a.exit_code == b.exit_code);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("reports round-trip through JSON") {
  auto in = write_file("mirror.txt", "6\n6\n");
  auto r = run_cli("solve " + in.string() + " --reproducible");
  Json j = Json::parse(r.out);
  CHECK(j.dump(2) + "\n" == r.out);
}

TEST_CASE("solve --out writes the report file") {
  auto in = write_file("mirror.txt", "6\n6\n");
  fs::path out = scratch_dir() / "report.json";
  auto r = run_cli("solve " + in.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  Json j = Json::parse(slurp(out));
  CHECK(j["result"]["status"] == "solved");
}

TEST_CASE("solve with pumping carries the trace in the report") {
  auto in = write_file("pump_solve.txt", "6\n6\n10\n10\n15\n15\n");
  auto r = run_cli("solve " + in.string() + " --pump --gamma 3 --kmax 1");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["status"] == "solved");
  CHECK(!j["result"]["pump_trace"].is_null());
  CHECK(j["result"]["pump_trace"]["steps"].size() == 1);
}

TEST_CASE("thread count never changes the result payload") {
  auto in = write_file("threads.txt", "30\n42\n35\n6\n6\n10\n10\n");
  auto a = run_cli("solve " + in.string() + " --reproducible --seed 4 --threads 1");
  auto b = run_cli("solve " + in.string() + " --reproducible --seed 4 --threads 8");
  CHECK(a.exit_code == b.exit_code);
  Json ja = Json::parse(a.out), jb = Json::parse(b.out);
  CHECK(ja["result"] == jb["result"]);
  CHECK(ja["warnings"] == jb["warnings"]);
}

TEST_CASE("starved factor budget exits 4") {
  // product of the 31-digit primes 10^30+57 and 10^30+99; rho cannot
  // split it in a millisecond
  auto in = write_file(
      "hard.txt",
      "1000000000000000000000000000156000000000000000000000000005643\n2\n");
  auto r = run_cli("solve " + in.string() + " --factor-time 0.001");
  CHECK(r.exit_code == 4);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["status"] == "budget-exceeded");
  CHECK(j["result"]["error_detail"].get<std::string>().find("entry index 0") !=
        std::string::npos);
}

TEST_CASE("pump reports the growth-model step estimate") {
  std::string lines;
  for (auto p : {2,3,5,7,11,13,17,19,23,29,31,37,41,43,47,53}) {
    lines += std::to_string(p) + "\n";
  }
  auto in = write_file("sixteen.txt", lines);
  auto r = run_cli("pump " + in.string() + " --gamma 3 --kmax 1 --growth-a 2");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["result"]["estimated_k_for_growth_a"].is_number());
  auto small = write_file("six.txt", "6\n");
  auto r2 = run_cli("pump " + small.string() + " --gamma 3 --kmax 1");
  Json j2 = Json::parse(r2.out);
  CHECK(j2["result"]["estimated_k_for_growth_a"].is_null());
}

TEST_CASE("print-config emits the flat key=value block") {
  auto in = write_file("six.txt", "6\n");
  auto r = run_cli("solve " + in.string() + " --print-config --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("seed=3\n") != std::string::npos);
  CHECK(r.out.find("eigen_tol=") != std::string::npos);
  CHECK(r.out.find("pump_gamma=") != std::string::npos);
}

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tropikam/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = tropikam::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("tropikam_cli_" + name);
  std::ofstream(p) << text;
  return p;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

const char* g3_json = R"({"version":1,"labels":["a","b","c"],"matrix":[[0,1,4],[2,1,3],[1,2,2]]})";

}  // namespace

TEST_CASE("analyze reports the critical value, Aubry set and D") {
  const fs::path in = write_temp("g3.json", g3_json);
  const fs::path out = fs::temp_directory_path() / "tropikam_cli_report.json";
  const Run r = run({"analyze", "--input", in.string(), "--out", out.string()});
  CHECK(r.code == 0);
  const json rep = read_json(out);
  CHECK(rep["report_version"] == 1);
  CHECK(rep["critical_value"] == 0.0);
  CHECK(rep["aubry"] == json::array({0}));
  CHECK(rep["d_edges"] == json::parse("[[0,0]]"));
  CHECK(rep["input"]["digest"].get<std::string>().size() == 16);
  for (const json& c : rep["checks"])
    CHECK(c["pass"] == (c["residual"].get<double>() <= c["tolerance"].get<double>()));
  CHECK(rep["pass"] == true);
}

TEST_CASE("metric input has every point in the Aubry set") {
  const fs::path in = write_temp("metric.csv", "p,q,r\n0,1,2\n1,0,1\n2,1,0\n");
  const Run r = run({"analyze", "--input", in.string(), "--out", "-"});
  CHECK(r.code == 0);
  const json rep = json::parse(r.out.substr(r.out.find('{')));
  CHECK(rep["aubry"] == json::array({0, 1, 2}));
}

TEST_CASE("mather reports the contact edges") {
  const fs::path in = write_temp("ma.json", g3_json);
  const Run r = run({"mather", "--input", in.string(), "--out", "-"});
  CHECK(r.code == 0);
  const json rep = json::parse(r.out.substr(r.out.find('{')));
  CHECK(rep["d_infinity_edges"] == json::parse("[[0,0]]"));
  CHECK(rep["d_infinity_matches_D"] == true);
}

TEST_CASE("reports are deterministic") {
  const fs::path in = write_temp("det.json", g3_json);
  for (const char* cmd : {"kam", "transport", "mather", "ergodic"}) {
    const Run a = run({cmd, "--input", in.string(), "--seed", "7", "--out", "-"});
    const Run b = run({cmd, "--input", in.string(), "--seed", "7", "--out", "-"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("every subcommand runs on a generated kernel") {
  for (const char* cmd : {"analyze", "kam", "transport", "mather"}) {
    CHECK(run({cmd, "--lagrangian", "pendulum:eps=0.1,N=12,K=3"}).code == 0);
    CHECK(run({cmd, "--lagrangian", "two-harmonic:eps1=0.1,eps2=0.05,N=10,K=2"}).code == 0);
  }
  CHECK(run({"ergodic", "--lagrangian", "pendulum:eps=0.1,N=12,K=3", "--orbit-length", "2000"})
            .code == 0);
  // --orbit-length belongs to ergodic only.
  CHECK(run({"analyze", "--lagrangian", "free:N=3", "--orbit-length", "10"}).code == 2);
}

TEST_CASE("transport with explicit measures") {
  const fs::path in = write_temp("tr.json", g3_json);
  const Run r = run({"transport", "--input", in.string(), "--mu0", "dirac:1", "--mu1",
                     "[0,0,1]", "--out", "-"});
  CHECK(r.code == 0);
  const json rep = json::parse(r.out.substr(r.out.find("{\n")));
  CHECK(rep["primal_value"].get<double>() == doctest::Approx(6));
  CHECK(rep["factorization"]["first"].get<double>() == doctest::Approx(2));
  CHECK(rep["factorization"]["second"].get<double>() == doctest::Approx(4));
  CHECK(run({"transport", "--input", in.string(), "--mu0", "dirac:9"}).code == 2);
  CHECK(run({"transport", "--input", in.string(), "--mu0", "[0.5,0.6,0]"}).code == 2);
}

TEST_CASE("ingest writes and validates cost files") {
  const fs::path out = fs::temp_directory_path() / "tropikam_cli_pend.csv";
  CHECK(run({"ingest", "--lagrangian", "pendulum:eps=0.1,N=8,K=2", "--out", out.string()})
            .code == 0);
  CHECK(run({"ingest", "--input", out.string()}).code == 0);
  const fs::path bad = write_temp("bad.json", R"({"version":1,"matrix":[[0, inf]]})");
  const Run r = run({"ingest", "--input", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1") != std::string::npos);
  CHECK(run({"ingest", "--input", "/nonexistent/file.json"}).code == 2);
}

TEST_CASE("plot-ready CSV output") {
  const fs::path in = write_temp("csv.json", g3_json);
  const fs::path csv = fs::temp_directory_path() / "tropikam_cli_phi.csv";
  CHECK(run({"kam", "--input", in.string(), "--emit-csv", csv.string()}).code == 0);
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "index,label,coord,phi0,phi1");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({"analyze", "--input", "x.json", "--lagrangian", "free:N=3"}).code == 2);
  CHECK(run({"analyze", "--lagrangian", "quartic:N=3"}).code == 2);
  CHECK(run({"analyze", "--lagrangian", "free:N=3", "--eps-num", "-1"}).code == 2);
  CHECK(run({"analyze", "--lagrangian", "free:N=3", "--format", "xml"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("a failing check exits with 1") {
  // A two-step orbit cannot reproduce the two-cycle coupling's pair law.
  const fs::path in = write_temp("cycle.json", R"({"version":1,"matrix":[[1,0],[0,1]]})");
  const Run r = run({"ergodic", "--input", in.string(), "--orbit-length", "2"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("FNV-1a digest") {
  CHECK(tropikam::cli::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(tropikam::cli::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "kirchlip/json_io.hpp"

using namespace kirchlip;
using jsonio::json;
using sets::SetExpression;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, bool keep_stderr = false) {
  std::string cmd = std::string(KIRCHCLI_PATH) + " " + args +
                    (keep_stderr ? " 2>&1 1>/dev/null" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string& fixture_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/kirchcliXXXXXX";
    char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

std::string write_fixture(const std::string& name, const std::string& body) {
  std::string path = fixture_dir() + "/" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

std::vector<SetExpression> residue_cover_15() {
  return {SetExpression::progression(1, 3), SetExpression::progression(2, 3),
          SetExpression::progression(1, 5), SetExpression::progression(2, 5),
          SetExpression::progression(3, 5), SetExpression::progression(4, 5)};
}

}  // namespace

TEST_CASE("closure prints the progression and exits clean") {
  auto r = run_cli("closure 1 7 11");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out == "{\"kind\":\"progression\",\"a\":1,\"d\":2}\n");

  auto seeded = run_cli("--seed 5 closure 1 7 11");
  REQUIRE(seeded.exit_code == 0);
  REQUIRE(seeded.out == r.out);
}

TEST_CASE("intersect handles both document shapes and the empty result") {
  auto two = write_fixture("sets2.json",
                           R"([{"kind":"progression","a":1,"d":2},
                               {"kind":"progression","a":1,"d":3}])");
  auto r = run_cli("intersect " + two);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out == "{\"kind\":\"progression\",\"a\":1,\"d\":6}\n");

  auto wrapped = write_fixture("sets_obj.json",
                               R"({"sets":[{"kind":"progression","a":1,"d":2},
                                   {"kind":"progression","a":1,"d":3}]})");
  REQUIRE(run_cli("intersect " + wrapped).out == r.out);

  auto disjoint = write_fixture("sets_empty.json",
                                R"([{"kind":"progression","a":1,"d":2},
                                    {"kind":"progression","a":2,"d":4}])");
  auto e = run_cli("intersect " + disjoint);
  REQUIRE(e.exit_code == 0);
  REQUIRE(e.out == "{\"kind\":\"empty\"}\n");

  auto one = write_fixture("sets1.json",
                           R"([{"kind":"progression","a":1,"d":2}])");
  REQUIRE(run_cli("intersect " + one).exit_code == 2);
}

TEST_CASE("interp reports the exact polynomial and coefficients") {
  auto csv = write_fixture("pts.csv", "# x,y\n1,0\n2,1\n4,0\n");
  auto r = run_cli("interp " + csv);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out ==
          "{\"poly\":{\"repr\":\"poly\",\"coeffs\":[-2,\"5/2\",\"-1/2\"]},"
          "\"newton\":[0,1,\"-1/2\"],\"leading\":\"-1/2\",\"integral\":false}"
          "\n");

  auto bad = write_fixture("bad.csv", "1\n");
  REQUIRE(run_cli("interp " + bad).exit_code == 2);
}

TEST_CASE("circuit search flags the two-point witness") {
  auto fn = write_fixture("fn24.json",
                          R"({"domain":{"kind":"progression","a":2,"d":2},
                              "window":4,"repr":"table",
                              "values":[[2,1],[4,0]]})");
  auto r = run_cli("circuit " + fn);
  REQUIRE(r.exit_code == 1);
  json payload = json::parse(r.out);
  REQUIRE(payload.at("lip") == false);
  REQUIRE(payload.at("circuit").at("points") == json::parse("[2,4]"));
  REQUIRE(payload.at("circuit").at("leading") == "-1/2");

  auto flat = write_fixture("flat.json",
                            R"({"domain":{"kind":"progression","a":2,"d":2},
                                "window":4,"repr":"table",
                                "values":[[2,4],[4,6]]})");
  auto ok = run_cli("circuit " + flat);
  REQUIRE(ok.exit_code == 0);
  REQUIRE(ok.out == "{\"lip\":true}\n");

  // a table must cover the requested window exactly
  auto clipped = run_cli("circuit --window 2 " + fn);
  REQUIRE(clipped.exit_code == 2);

  auto poly = write_fixture("poly.json",
                            R"({"domain":{"kind":"progression","a":1,"d":2},
                                "repr":"poly","coeffs":[-4,5,-1],"window":5})");
  auto widened = run_cli("circuit --window 9 " + poly);
  REQUIRE(widened.exit_code == 0);
  REQUIRE(widened.out == "{\"lip\":true}\n");
}

TEST_CASE("psum encodes the window table") {
  auto fn = write_fixture("fn24b.json",
                          R"({"domain":{"kind":"progression","a":2,"d":2},
                              "window":4,"repr":"table",
                              "values":[[2,1],[4,0]]})");
  auto r = run_cli("psum " + fn);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out ==
          "{\"enumeration\":[2,4],\"coeffs\":[1,\"-1/2\"],\"integral\":false}\n");
}

TEST_CASE("classify reports the star shape") {
  auto cover = write_fixture("cover3.json",
                             R"({"pieces":[{"kind":"progression","a":1,"d":2},
                                 {"kind":"progression","a":1,"d":3},
                                 {"kind":"progression","a":1,"d":6}]})");
  auto r = run_cli("classify " + cover);
  REQUIRE(r.exit_code == 0);
  json payload = json::parse(r.out);
  REQUIRE(payload.at("piece_count") == 3);
  REQUIRE(payload.at("star_like") == true);
  REQUIRE_FALSE(payload.contains("nest"));

  auto nest = run_cli("classify --straw 1,2 --core 0 " + cover);
  REQUIRE(nest.exit_code == 0);
  REQUIRE(json::parse(nest.out).contains("nest"));

  // straw and core must partition the pieces
  REQUIRE(run_cli("classify --straw 1 --core 0 " + cover).exit_code == 2);
}

TEST_CASE("split returns certified halves") {
  auto u = write_fixture("setU.json", R"({"kind":"progression","a":1,"d":2})");
  auto w = write_fixture("setW.json", R"({"kind":"progression","a":1,"d":3})");
  auto f = write_fixture("fsplit.json",
                         R"({"domain":{"kind":"progression","a":1,"d":6},
                             "repr":"product-sum","enumeration":"increasing",
                             "coeffs":[3,-2,5,1,-4,2,0,7],"window":80})");
  auto r = run_cli("split --u " + u + " --w " + w + " --f " + f +
                   " --stages 4");
  REQUIRE(r.exit_code == 0);
  json payload = json::parse(r.out);
  REQUIRE(payload.at("certificate").at("difference_ok") == true);
  REQUIRE(payload.at("certificate").at("g_lip") == true);
  REQUIRE(payload.at("certificate").at("h_lip") == true);

  auto off = write_fixture("setoff.json",
                           R"({"kind":"progression","a":2,"d":4})");
  REQUIRE(run_cli("split --u " + u + " --w " + off + " --f " + f +
                  " --stages 2").exit_code == 2);
}

TEST_CASE("cech prints the window report or decides coboundaries") {
  json coverdoc = jsonio::cover_to_json(residue_cover_15(), Int(30));
  auto cover = write_fixture("cover6.json", coverdoc.dump());

  auto report = run_cli("cech --cover " + cover + " --degree 1");
  REQUIRE(report.exit_code == 0);
  REQUIRE(report.out ==
          "{\"degree\":1,\"rank\":0,\"torsion\":[2,2,2,2,2,2]}\n");

  auto cx = cech::build_cech_complex(residue_cover_15(), Int(30), 2);
  cech::CechCochain z;
  z.degree = 1;
  for (size_t fi = 0; fi < cx.faces[1].size(); ++fi) {
    std::map<Int, Int> vals;
    for (const Int& x : cx.face_points[1][fi])
      vals[x] = mod_floor(x, 15) == 1 ? 1 : 0;
    z.components.emplace(cx.faces[1][fi],
                         lip::WindowFunction(cx.face_sets[1][fi], cx.window,
                                             std::move(vals)));
  }
  auto zpath = write_fixture("z15.json", jsonio::cochain_to_json(z).dump());

  auto decide = run_cli("cech --cover " + cover + " --cochain " + zpath +
                        " --degree 1");
  REQUIRE(decide.exit_code == 1);
  json payload = json::parse(decide.out);
  REQUIRE(payload.at("is_coboundary") == false);
  REQUIRE(payload.at("certificate") == "exact");
  REQUIRE(payload.at("detail") == "parity = 1 mod 2");

  REQUIRE(run_cli("cech --cover " + cover + " --cochain " + zpath +
                  " --degree 2").exit_code == 2);
  REQUIRE(run_cli("cech --cover " + cover + " --cochain " + zpath +
                  " --degree 1 --catalog /nonexistent.json").exit_code == 2);

  // zero cochain is a coboundary: exit stays clean
  cech::CechCochain zero;
  zero.degree = 1;
  auto zeropath =
      write_fixture("zero.json", jsonio::cochain_to_json(zero).dump());
  auto ok = run_cli("cech --cover " + cover + " --cochain " + zeropath +
                    " --degree 1");
  REQUIRE(ok.exit_code == 0);
  REQUIRE(json::parse(ok.out).at("is_coboundary") == true);
}

TEST_CASE("obstruct reduces the functional value mod two") {
  std::string rows;
  for (int x = 1; x <= 20; ++x) {
    rows += "[" + std::to_string(x) + "," + (x % 15 == 1 ? "1" : "0") + "]";
    if (x < 20) rows += ",";
  }
  auto fn = write_fixture("ind15.json",
                          R"({"domain":{"kind":"progression","a":1,"d":1},
                              "window":20,"repr":"table","values":[)" +
                              rows + "]}");
  auto r = run_cli("obstruct " + fn);
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.out == "1\n");

  auto err = run_cli("obstruct " + fn, true);
  REQUIRE(err.out.find("parity functional value") != std::string::npos);

  auto small = write_fixture("ind15small.json",
                             R"({"domain":{"kind":"progression","a":1,"d":1},
                                 "window":10,"repr":"table",
                                 "values":[[1,1],[2,0],[3,0],[4,0],[5,0],
                                           [6,0],[7,0],[8,0],[9,0],[10,0]]})");
  REQUIRE(run_cli("obstruct " + small).exit_code == 2);
}

TEST_CASE("cex emits the run, writes the function, and chains into circuit") {
  std::string qpath = fixture_dir() + "/q.json";
  auto r = run_cli("cex --steps 12 --window 14 --out " + qpath);
  REQUIRE(r.exit_code == 1);
  json payload = json::parse(r.out);
  REQUIRE(payload.at("steps") == 12);
  REQUIRE(payload.at("final").at("m") == 7);
  REQUIRE(payload.at("trace").size() == 13);
  REQUIRE(payload.at("certificate").at("circuit").at("points") ==
          json::parse("[2,4]"));
  for (const auto& piece : payload.at("certificate").at("pieces"))
    REQUIRE(piece.at("lip") == true);

  auto chained = run_cli("circuit " + qpath);
  REQUIRE(chained.exit_code == 1);
  REQUIRE(json::parse(chained.out).at("circuit").at("points") ==
          json::parse("[2,4]"));

  REQUIRE(run_cli("cex --steps 201 --window 14 --out " + qpath).exit_code == 3);
  REQUIRE(run_cli("cex --steps 4 --window 40 --out " + qpath).exit_code == 2);
  REQUIRE(run_cli("cex --steps 4 --window 14 --schedule core,wander --out " +
                  qpath).exit_code == 2);
}

TEST_CASE("bad invocations exit with the input-error code") {
  REQUIRE(run_cli("").exit_code == 2);
  REQUIRE(run_cli("closure").exit_code == 2);
  REQUIRE(run_cli("closure 1 x").exit_code == 2);
  REQUIRE(run_cli("flarp").exit_code == 2);
  REQUIRE(run_cli("circuit /nonexistent/fn.json").exit_code == 2);

  auto broken = write_fixture("broken.json", "{\"kind\":");
  REQUIRE(run_cli("circuit " + broken).exit_code == 2);

  auto help = run_cli("--help");
  REQUIRE(help.exit_code == 0);
  REQUIRE(help.out.find("closure") != std::string::npos);
}

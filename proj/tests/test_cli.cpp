// End-to-end checks of the command-line binary (path via ANOFLIP_BIN).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

std::string bin() {
  const char* p = std::getenv("ANOFLIP_BIN");
  REQUIRE(p != nullptr);
  return p;
}

std::string tmp_dir() {
  const char* p = std::getenv("ANOFLIP_TMP");
  return p ? p : "/tmp";
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("example then validate round trip") {
  std::string g = tmp_dir() + "/cli_tht.json";
  CHECK(run("example two-holed-torus --out " + g).exit_code == 0);
  auto v = run("validate " + g);
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("\"admissible\": true") != std::string::npos);
}

TEST_CASE("validate flags inadmissible input with exit 2") {
  std::string g = tmp_dir() + "/cli_bad.json";
  // a 2-cycle with Regular markings has the wrong valence
  std::string doc =
      "{\"schema_version\":1,\"vertices\":[{\"id\":0,\"darts\":[0,1]},"
      "{\"id\":1,\"darts\":[2,3]}],\"edges\":[[0,2],[1,3]],"
      "\"markings\":{\"0\":\"regular\",\"1\":\"regular\"}}";
  FILE* f = fopen(g.c_str(), "w");
  REQUIRE(f);
  fputs(doc.c_str(), f);
  fclose(f);
  auto v = run("validate " + g);
  CHECK(v.exit_code == 2);
  CHECK(v.out.find("\"admissible\": false") != std::string::npos);
}

TEST_CASE("build, flip, compare pipeline") {
  std::string x1 = tmp_dir() + "/cli_x1.json";
  std::string flow = tmp_dir() + "/cli_flow.json";
  std::string flipped = tmp_dir() + "/cli_flip.json";
  REQUIRE(run("example xn --n 1 --out " + x1).exit_code == 0);
  REQUIRE(run("build " + x1 + " --seed 4 --out " + flow).exit_code == 0);
  REQUIRE(run("flip " + flow + " --piece 0 --out " + flipped).exit_code == 0);

  auto eq = run("compare " + flow + " " + flipped + " --max-len 6");
  CHECK(eq.exit_code == 0);
  CHECK(eq.out.find("Equal") != std::string::npos);

  auto tr = run("transitive " + flow);
  CHECK(tr.exit_code == 0);

  auto its = run("itineraries " + flow + " --max-len 3");
  CHECK(its.exit_code == 0);
  CHECK(its.out.find("\"count\"") != std::string::npos);
}

TEST_CASE("determinism: same seed gives identical bytes") {
  std::string x1 = tmp_dir() + "/cli_x1b.json";
  REQUIRE(run("example xn --n 1 --out " + x1).exit_code == 0);
  auto a = run("build " + x1 + " --seed 9");
  auto b = run("build " + x1 + " --seed 9");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("integrate reports the central transit time near pi") {
  auto r = run("integrate --lambda 10 --x 0 --z 0 --json");
  CHECK(r.exit_code == 0);
  auto pos = r.out.find("\"exit_time\": ");
  REQUIRE(pos != std::string::npos);
  double t = std::strtod(r.out.c_str() + pos + 13, nullptr);
  CHECK(t == doctest::Approx(3.14159265).epsilon(1e-6));
}

TEST_CASE("integrate csv output") {
  auto r = run("integrate --x 0.4 --z 0.1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("t,x,y,z", 0) == 0);
}

TEST_CASE("cone-check verdict exit codes") {
  CHECK(run("cone-check --lambda 20 --matrix 0 1 1 0 --grid 8").exit_code == 0);
  CHECK(run("cone-check --lambda 5 --matrix 0 1 1 0 --grid 8 --tol 1e9").exit_code == 2);
  CHECK(run("cone-check --lambda 10 --matrix 1 0 0 1 --grid 8").exit_code == 1);
}

TEST_CASE("verify-block passes on the model field") {
  auto r = run("verify-block --lambda 10 --grid 15");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("").exit_code == 1);
  CHECK(run("frobnicate").exit_code == 1);
  CHECK(run("flip missing.json --piece 0").exit_code == 1);
  CHECK(run("flip").exit_code == 1);  // --piece is required
}

TEST_CASE("search-equiv self comparison finds a certificate") {
  std::string x1 = tmp_dir() + "/cli_x1c.json";
  std::string flow = tmp_dir() + "/cli_flowc.json";
  REQUIRE(run("example xn --n 1 --out " + x1).exit_code == 0);
  REQUIRE(run("build " + x1 + " --seed 0 --out " + flow).exit_code == 0);
  auto r = run("search-equiv " + flow + " " + flow);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"result\": \"Found\"") != std::string::npos);
  CHECK(r.out.find("\"replay_ok\": true") != std::string::npos);
}

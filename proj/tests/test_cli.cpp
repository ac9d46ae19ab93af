#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "visang/body_io.hpp"
#include "visang/cli.hpp"

using namespace visang;
using nlohmann::json;
using std::numbers::pi;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err).exit_code;
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / "visang_cli_test") {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string write(const TempDir& dir, const std::string& name, const FourierSupport& body) {
  const std::string path = dir.file(name);
  write_body(path, body);
  return path;
}

const json& check_named(const json& report, const std::string& name) {
  for (const auto& c : report["checks"]) {
    if (c["name"] == name) return c;
  }
  FAIL("missing check " << name);
  static const json none;
  return none;
}

int count_lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"bogus"}).code == cli::kUsage);
  CHECK(invoke({"angle"}).code == cli::kUsage);
  CHECK(invoke({"angle", "--body", "/nonexistent.json", "--point", "2,0"}).code == cli::kUsage);
  CHECK(invoke({"crofton"}).code == cli::kUsage);
  CHECK(invoke({"--preset", "thm99"}).code == cli::kUsage);
  CHECK(invoke({"--preset", "thm52", "isotopic", "limits", "--body", "x.json"}).code == cli::kUsage);

  TempDir dir;
  const std::string disc = write(dir, "disc.json", FourierSupport(1.0));
  CHECK(invoke({"angle", "--body", disc}).code == cli::kUsage);
  CHECK(invoke({"angle", "--body", disc, "--point", "2;0"}).code == cli::kUsage);
  CHECK(invoke({"angle", "--body", disc, "--point", "2,0", "--circle", "3"}).code == cli::kUsage);
  CHECK(invoke({"crofton", "integral", "--body", disc, "--f", "sin("}).code == cli::kUsage);
  CHECK(invoke({"crofton", "uniqueness", "--ms", "2"}).code == cli::kUsage);

  const Outcome help = invoke({"--help"});
  CHECK(help.code == cli::kPass);
  CHECK(help.out.find("isotopic") != std::string::npos);
}

TEST_CASE("crofton check on the unit disc") {
  TempDir dir;
  const Outcome o = invoke({"crofton", "check", "--body", write(dir, "disc.json", FourierSupport(1.0))});
  REQUIRE(o.code == cli::kPass);
  const json r = o.report();
  CHECK(r["schema"] == 1);
  CHECK(r["command"] == "crofton check");
  CHECK(r["pass"] == true);
  const json& c = check_named(r, "crofton_identity");
  CHECK(c["expected"].get<double>() == doctest::Approx(pi * pi));
  CHECK(c["error"].get<double>() <= 1e-3);
  CHECK(r["integral"].contains("tail"));
  CHECK(r["grids"]["theta"] == 1024);
  CHECK_FALSE(r.contains("wall_seconds"));
}

TEST_CASE("every reported value carries a tolerance") {
  TempDir dir;
  const std::string body = write(dir, "b.json", FourierSupport(1.0).with_harmonic(2, 0.1, 0.0));
  const json r = invoke({"isotopic", "limits", "--body", body}).report();
  for (const auto& [name, v] : r["values"].items()) {
    CHECK_MESSAGE(v.contains("tolerance"), name);
    CHECK(v.contains("value"));
  }
  for (const auto& c : r["checks"]) CHECK(c.contains("tolerance"));
  for (const auto& s : r["samples"]) CHECK(s.contains("tolerance"));
}

TEST_CASE("construct then detect the isotopic circle") {
  TempDir dir;
  const std::string out = dir.file("quarter.json");
  const Outcome made = invoke({"isotopic", "construct", "--c0", "21.5", "--c2", "2.5", "--c6", "1", "--out", out});
  REQUIRE(made.code == cli::kPass);
  REQUIRE(std::filesystem::exists(out));

  const Outcome o = invoke({"isotopic", "detect", "--body", out, "--alpha", "1.570796"});
  CHECK(o.code == cli::kPass);
  const json r = o.report();
  CHECK(r["values"]["radius"]["value"].get<double>() == doctest::Approx(6.5574).epsilon(1e-5));
  CHECK(check_named(r, "circle_deviation")["value"].get<double>() <= 1e-6);

  const Outcome id = invoke({"isotopic", "identities", "--body", out, "--m", "1", "--n", "2"});
  CHECK(id.code == cli::kPass);
  CHECK(id.report()["values"]["area_series_selected_sign"]["value"] == -1.0);
}

TEST_CASE("computational failures exit with 1") {
  TempDir dir;
  const std::string disc = write(dir, "disc.json", FourierSupport(1.0));
  const Outcome inside = invoke({"angle", "--body", disc, "--point", "0.1,0.2"});
  CHECK(inside.code == cli::kFail);
  CHECK(inside.report()["error"]["kind"] == "PointInsideBody");
  CHECK(inside.report()["pass"] == false);

  const Outcome singular = invoke({"crofton", "integral", "--body", disc, "--f", "w^2"});
  CHECK(singular.code == cli::kFail);
  CHECK(singular.report()["error"]["kind"] == "SingularAtZero");

  const std::string p2 = write(dir, "p2.json", FourierSupport(1.0).with_harmonic(2, 0.1, 0.0));
  const Outcome none = invoke({"isotopic", "detect", "--body", p2, "--alpha", "1.5"});
  CHECK(none.code == cli::kFail);
  CHECK(check_named(none.report(), "circle_deviation")["pass"] == false);

  const Outcome small = invoke({"angle", "--body", disc, "--circle", "0.5"});
  CHECK(small.code == cli::kFail);
  CHECK(small.report()["error"]["kind"] == "CircleTooSmall");
}

TEST_CASE("angle at a point and around a circle") {
  TempDir dir;
  const std::string disc = write(dir, "disc.json", FourierSupport(1.0));
  const json p = invoke({"angle", "--body", disc, "--point", "2,0"}).report();
  CHECK(p["values"]["w"]["value"].get<double>() == doctest::Approx(pi / 3).epsilon(1e-12));

  const std::string csv = dir.file("circle.csv");
  const std::string body = write(dir, "b.json", FourierSupport(1.0).with_harmonic(3, 0.05, 0.0));
  const Outcome o = invoke({"angle", "--body", body, "--circle", "3", "--grid", "600", "--emit", csv});
  CHECK(o.code == cli::kPass);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "phi,theta,w,w_phi");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 600);

  const Outcome to_stdout = invoke({"angle", "--body", body, "--circle", "3", "--grid", "64", "--emit", "csv"});
  CHECK(to_stdout.code == cli::kPass);
  CHECK(to_stdout.out.rfind("phi,theta,w,w_phi\n", 0) == 0);
  CHECK(count_lines(to_stdout.out) == 65);
  CHECK(json::parse(to_stdout.err)["schema"] == 1);
}

TEST_CASE("isotopic curve CSV") {
  TempDir dir;
  const std::string disc = write(dir, "disc.json", FourierSupport(1.0));
  const Outcome o = invoke({"isotopic", "curve", "--body", disc, "--alpha", "1.5707963267948966", "--n", "1024",
                            "--emit", "-"});
  CHECK(o.code == cli::kPass);
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "phi,X,Y");
  std::getline(in, line);
  double phi = 0, x = 0, y = 0;
  char c1 = 0, c2 = 0;
  std::istringstream(line) >> phi >> c1 >> x >> c2 >> y;
  CHECK(std::hypot(x, y) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK(json::parse(o.err)["values"]["length"]["value"].get<double>() ==
        doctest::Approx(2 * pi * std::sqrt(2.0)));
}

TEST_CASE("uniqueness fit") {
  const Outcome o = invoke({"crofton", "uniqueness", "--f", "crofton", "--ms", "2,3,4,5", "--t", "0.08"});
  CHECK(o.code == cli::kPass);
  const json r = o.report();
  CHECK(r["values"]["a"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(r["values"]["b"]["value"].get<double>() == doctest::Approx(-3.1416).epsilon(1e-3));
  CHECK(r["samples"].size() == 4);
}

TEST_CASE("reports are byte-stable and VAL_GRID sets default grids") {
  TempDir dir;
  const std::string body = write(dir, "b.json", FourierSupport(1.0).with_harmonic(2, 0.05, 0.01));
  const std::vector<std::string> args{"angle", "--body", body, "--circle", "4"};
  const Outcome a = invoke(args), b = invoke(args);
  CHECK(a.out == b.out);
  CHECK(a.report()["grids"]["phi"] == 1024);

  setenv("VAL_GRID", "600", 1);
  CHECK(invoke(args).report()["grids"]["phi"] == 600);
  std::vector<std::string> explicit_grid = args;
  explicit_grid.insert(explicit_grid.end(), {"--grid", "700"});
  CHECK(invoke(explicit_grid).report()["grids"]["phi"] == 700);
  setenv("VAL_GRID", "lots", 1);
  CHECK(invoke(args).code == cli::kUsage);
  unsetenv("VAL_GRID");

  std::vector<std::string> timed = args;
  timed.push_back("--timing");
  CHECK(invoke(timed).report().contains("wall_seconds"));
}

TEST_CASE("presets") {
  for (const char* p : {"thm31", "thm41", "thm52", "thm53"}) {
    const Outcome o = invoke({"--preset", p});
    CHECK_MESSAGE(o.code == cli::kPass, p);
    CHECK(o.report()["command"] == std::string("preset ") + p);
  }
}

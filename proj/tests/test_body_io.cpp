#include <doctest.h>

#include <filesystem>

#include "visang/body_io.hpp"

using namespace visang;
using nlohmann::json;

TEST_CASE("round trip") {
  const FourierSupport body = FourierSupport(1.5).with_harmonic(2, 0.1, -0.02).with_harmonic(5, 0.0, 0.003);
  const json j = to_json(body);
  CHECK(j["a0"] == 1.5);
  CHECK(j["harmonics"].size() == 2);
  const FourierSupport back = body_from_json(j);
  CHECK(back.a0() == body.a0());
  CHECK(back.max_harmonic() == 5);
  for (int k = 1; k <= 5; ++k) {
    CHECK(back.a(k) == body.a(k));
    CHECK(back.b(k) == body.b(k));
  }

  const auto path = std::filesystem::temp_directory_path() / "visang_body_io_test.json";
  write_body(path.string(), body);
  CHECK(read_body(path.string()).a(2) == 0.1);
  std::filesystem::remove(path);
}

TEST_CASE("defaults and disc") {
  const FourierSupport d = body_from_json(json::parse(R"({"a0": 2})"));
  CHECK(d.a0() == 2.0);
  CHECK(d.max_harmonic() == 0);
  const FourierSupport b = body_from_json(json::parse(R"({"a0": 1, "harmonics": [{"k": 3, "a": 0.1}]})"));
  CHECK(b.a(3) == 0.1);
  CHECK(b.b(3) == 0.0);
  CHECK(to_json(d)["harmonics"].empty());
}

TEST_CASE("malformed input") {
  for (const char* bad : {R"([1, 2])", R"({"harmonics": []})", R"({"a0": "one"})",
                          R"({"a0": 1, "harmonics": [{"k": 0, "a": 1}]})",
                          R"({"a0": 1, "harmonics": [{"a": 1}]})",
                          R"({"a0": 1, "harmonics": [{"k": 2, "a": 0.1}, {"k": 2, "b": 0.1}]})"}) {
    CHECK_THROWS_AS(body_from_json(json::parse(bad)), GeometryError);
  }
  CHECK_THROWS_AS(read_body("/nonexistent/body.json"), GeometryError);
}

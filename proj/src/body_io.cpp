#include "visang/body_io.hpp"

#include <fstream>
#include <set>

namespace visang {

nlohmann::json to_json(const FourierSupport& body) {
  nlohmann::json h = nlohmann::json::array();
  for (int k = 1; k <= body.max_harmonic(); ++k) {
    if (body.a(k) != 0.0 || body.b(k) != 0.0) h.push_back({{"k", k}, {"a", body.a(k)}, {"b", body.b(k)}});
  }
  return {{"a0", body.a0()}, {"harmonics", h}};
}

FourierSupport body_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("a0")) throw GeometryError(ErrorKind::InvalidArgument, "body JSON needs \"a0\"");
    FourierSupport body(j.at("a0").get<double>());
    std::set<int> seen;
    if (j.contains("harmonics")) {
      for (const auto& h : j.at("harmonics")) {
        const int k = h.at("k").get<int>();
        if (k < 1) throw GeometryError(ErrorKind::InvalidArgument, "harmonic index k must be >= 1");
        if (!seen.insert(k).second) {
          throw GeometryError(ErrorKind::InvalidArgument, "harmonic k = " + std::to_string(k) + " given twice");
        }
        body = body.with_harmonic(k, h.value("a", 0.0), h.value("b", 0.0));
      }
    }
    return body;
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(ErrorKind::InvalidArgument, std::string("bad body JSON: ") + e.what());
  }
}

FourierSupport read_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError(ErrorKind::InvalidArgument, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
  return body_from_json(j);
}

void write_body(const std::string& path, const FourierSupport& body) {
  std::ofstream out(path);
  if (!out) throw GeometryError(ErrorKind::InvalidArgument, "cannot write " + path);
  out << to_json(body).dump(2) << '\n';
}

}  // namespace visang

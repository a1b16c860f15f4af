#include "hillgreen/io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "hillgreen/errors.hpp"
#include "hillgreen/greens.hpp"

namespace hillgreen {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw DescriptorError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double required_number(const json& j, const char* key) {
  if (!j.contains(key)) throw DescriptorError(std::string("missing field '") + key + "'");
  return number(j, key, 0.0);
}

std::vector<double> number_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw DescriptorError(std::string("field '") + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw DescriptorError(std::string("field '") + key + "' must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

Piece parse_piece(const json& j) {
  if (!j.contains("kind") || !j.at("kind").is_string()) throw DescriptorError("piece needs a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "const") return ConstantPiece{required_number(j, "value")};
  if (kind == "cos") {
    return CosinePiece{number(j, "c0", 0.0), number(j, "c1", 1.0), number(j, "omega", 1.0), number(j, "phase", 0.0)};
  }
  if (kind == "poly") {
    const auto c = number_array(j, "coeffs");
    if (c.empty() || c.size() > 4) throw DescriptorError("poly needs 1 to 4 coefficients");
    PolynomialPiece p;
    std::copy(c.begin(), c.end(), p.coeffs.begin());
    return p;
  }
  if (kind == "table") {
    const int order = static_cast<int>(number(j, "order", 3.0));
    try {
      return TablePiece(number_array(j, "x"), number_array(j, "y"), order);
    } catch (const DomainError& e) {
      throw DescriptorError(e.what());
    }
  }
  throw DescriptorError("unknown piece kind '" + kind + "'");
}

json piece_to_json(const Segment& s) {
  json j;
  j["from"] = s.from;
  j["to"] = s.to;
  std::visit(
      [&j](const auto& piece) {
        using P = std::decay_t<decltype(piece)>;
        if constexpr (std::is_same_v<P, ConstantPiece>) {
          j["kind"] = "const";
          j["value"] = piece.value;
        } else if constexpr (std::is_same_v<P, CosinePiece>) {
          j["kind"] = "cos";
          j["c0"] = piece.c0;
          j["c1"] = piece.c1;
          j["omega"] = piece.omega;
          j["phase"] = piece.phase;
        } else if constexpr (std::is_same_v<P, PolynomialPiece>) {
          j["kind"] = "poly";
          j["coeffs"] = piece.coeffs;
        } else {
          j["kind"] = "table";
          j["x"] = piece.nodes();
          j["y"] = piece.values();
          j["order"] = piece.order();
        }
      },
      s.piece);
  if (s.origin != 0.0 || s.direction != 1.0) {
    j["origin"] = s.origin;
    j["direction"] = s.direction;
  }
  return j;
}

}  // namespace

Potential potential_from_json(const json& j) {
  if (!j.is_object()) throw DescriptorError("potential descriptor must be a JSON object");
  const double length = required_number(j, "T");
  if (!(length > 0.0)) throw DescriptorError("'T' must be positive");
  if (!j.contains("pieces") || !j.at("pieces").is_array() || j.at("pieces").empty()) {
    throw DescriptorError("'pieces' must be a non-empty array");
  }
  std::vector<Segment> segments;
  for (const auto& pj : j.at("pieces")) {
    if (!pj.is_object()) throw DescriptorError("each piece must be an object");
    Segment s;
    s.from = required_number(pj, "from");
    s.to = required_number(pj, "to");
    s.piece = parse_piece(pj);
    s.origin = number(pj, "origin", 0.0);
    s.direction = number(pj, "direction", 1.0);
    segments.push_back(std::move(s));
  }
  if (segments.back().to != length) throw DescriptorError("pieces must end at T");
  try {
    return Potential(std::move(segments), number(j, "shift", 0.0));
  } catch (const DomainError& e) {
    throw DescriptorError(e.what());
  }
}

json potential_to_json(const Potential& p) {
  json j;
  j["T"] = p.length();
  if (p.shift() != 0.0) j["shift"] = p.shift();
  j["pieces"] = json::array();
  for (const auto& s : p.segments()) j["pieces"].push_back(piece_to_json(s));
  return j;
}

Potential load_potential(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DescriptorError("cannot open potential file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DescriptorError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return potential_from_json(j);
}

std::size_t potential_hash(const Potential& p) { return std::hash<std::string>{}(potential_to_json(p).dump()); }

std::string format_number(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, result.ptr);
}

void write_kernel_csv(std::ostream& out, const GreensFunction& g) {
  out << "t,s,G\n";
  const int n = g.n();
  for (int i = 0; i <= n; ++i) {
    const std::string t = format_number(g.node(i));
    for (int j = 0; j <= n; ++j) {
      out << t << ',' << format_number(g.node(j)) << ',' << format_number(g.at(i, j)) << '\n';
    }
  }
}

}  // namespace hillgreen

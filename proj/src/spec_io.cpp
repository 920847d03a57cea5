#include "carpets/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "carpets/errors.hpp"
#include "carpets/numeric.hpp"

namespace carpets {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& source, const std::string& where,
                            const std::string& what) {
  fail(Err::ParseError, source + ": " + where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& source,
                 const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) bad_field(source, where, std::string("missing '") + key + "'");
  return *it;
}

unsigned uint_field(const json& j, const std::string& source,
                    const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    bad_field(source, where, "expected a nonnegative integer");
  }
  return j.get<unsigned>();
}

Scalar scalar_field(const json& j, const std::string& source,
                    const std::string& where) {
  if (j.is_string()) {
    try {
      return Scalar(parse_rational(j.get<std::string>()));
    } catch (const CarpetError& e) {
      bad_field(source, where, e.what());
    }
  }
  if (j.is_number_integer() || j.is_number_unsigned()) {
    return Scalar(Rational(BigInt(j.get<long long>())));
  }
  if (j.is_number_float()) return Scalar(j.get<double>());
  bad_field(source, where, "expected a number or a rational string");
}

BMCarpet parse_bm(const json& j, const std::string& source) {
  BMCarpet carpet;
  carpet.n = uint_field(need(j, "n", source, "$"), source, "n");
  carpet.m = uint_field(need(j, "m", source, "$"), source, "m");
  const json& cells = need(j, "cells", source, "$");
  if (!cells.is_array()) bad_field(source, "cells", "expected an array");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::string where = "cells[" + std::to_string(i) + "]";
    const json& cell = cells[i];
    if (!cell.is_array() || cell.size() != 2) {
      bad_field(source, where, "expected [x, y]");
    }
    carpet.cells.emplace_back(uint_field(cell[0], source, where + "[0]"),
                              uint_field(cell[1], source, where + "[1]"));
  }
  validate_bm(carpet);
  return carpet;
}

LGCarpet parse_lg(const json& j, const std::string& source) {
  LGCarpet carpet;
  const json& rows = need(j, "rows", source, "$");
  if (!rows.is_array()) bad_field(source, "rows", "expected an array");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::string rtag = "rows[" + std::to_string(i) + "]";
    const json& jrow = rows[i];
    if (!jrow.is_object()) bad_field(source, rtag, "expected an object");
    LGRow row;
    row.height = scalar_field(need(jrow, "b", source, rtag), source, rtag + ".b");
    row.offset = scalar_field(need(jrow, "d", source, rtag), source, rtag + ".d");
    const json& cols = need(jrow, "cols", source, rtag);
    if (!cols.is_array()) bad_field(source, rtag + ".cols", "expected an array");
    for (std::size_t k = 0; k < cols.size(); ++k) {
      std::string ctag = rtag + ".cols[" + std::to_string(k) + "]";
      const json& jcol = cols[k];
      if (!jcol.is_object()) bad_field(source, ctag, "expected an object");
      LGColumn col;
      col.width = scalar_field(need(jcol, "a", source, ctag), source, ctag + ".a");
      col.offset = scalar_field(need(jcol, "c", source, ctag), source, ctag + ".c");
      row.cols.push_back(col);
    }
    carpet.rows.push_back(std::move(row));
  }
  validate_lg(carpet);
  return carpet;
}

std::string rational_text(const Rational& r) {
  std::ostringstream out;
  out << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1) {
    out << '/' << boost::multiprecision::denominator(r);
  }
  return out.str();
}

json scalar_json(const Scalar& s) {
  if (s.exact) return json(rational_text(s.rat));
  return json(s.value);
}

}  // namespace

AnyCarpet parse_carpet_spec(const std::string& text,
                            const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::ParseError, source + ": " + e.what());
  }
  if (!j.is_object()) fail(Err::ParseError, source + ": expected a JSON object");
  const json& type = need(j, "type", source, "$");
  if (!type.is_string()) bad_field(source, "type", "expected a string");
  std::string family = type.get<std::string>();
  if (family == "bedford-mcmullen") return parse_bm(j, source);
  if (family == "lalley-gatzouras") return parse_lg(j, source);
  bad_field(source, "type", "unknown carpet family '" + family + "'");
}

AnyCarpet load_carpet_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::ParseError, path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_carpet_spec(buffer.str(), path);
}

std::string serialize_carpet_spec(const BMCarpet& carpet) {
  json j;
  j["type"] = "bedford-mcmullen";
  j["n"] = carpet.n;
  j["m"] = carpet.m;
  json cells = json::array();
  for (const auto& cell : carpet.cells) {
    cells.push_back(json::array({cell.first, cell.second}));
  }
  j["cells"] = cells;
  return j.dump(2) + "\n";
}

std::string serialize_carpet_spec(const LGCarpet& carpet) {
  json j;
  j["type"] = "lalley-gatzouras";
  json rows = json::array();
  for (const auto& row : carpet.rows) {
    json jrow;
    jrow["b"] = scalar_json(row.height);
    jrow["d"] = scalar_json(row.offset);
    json cols = json::array();
    for (const auto& col : row.cols) {
      json jcol;
      jcol["a"] = scalar_json(col.width);
      jcol["c"] = scalar_json(col.offset);
      cols.push_back(jcol);
    }
    jrow["cols"] = cols;
    rows.push_back(jrow);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string serialize_carpet_spec(const AnyCarpet& carpet) {
  return std::visit(
      [](const auto& inner) { return serialize_carpet_spec(inner); }, carpet);
}

}  // namespace carpets

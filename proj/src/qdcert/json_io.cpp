#include "qdcert/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "qdcert/errors.hpp"

namespace qdcert {

Json int_to_json(const Int& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return Json(static_cast<std::int64_t>(mpz_get_si(v.get_mpz_t())));
  return Json(v.get_str());
}

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) {
    Int r;
    mpz_set_ui(r.get_mpz_t(), j.get<std::uint64_t>());
    return r;
  }
  if (j.is_string()) {
    Int r;
    if (mpz_set_str(r.get_mpz_t(), j.get<std::string>().c_str(), 10) != 0)
      throw ConfigError("not an integer: " + j.get<std::string>());
    return r;
  }
  throw ConfigError("expected an integer, got " + j.dump());
}

Json to_json(const UniTri& a) {
  Json entries = Json::array();
  const int d = a.dim();
  for (int i = 1; i < d; ++i)
    for (int j = i + 1; j <= d; ++j)
      if (sgn(a.at(i, j)) != 0) entries.push_back({{"i", i}, {"j", j}, {"v", int_to_json(a.at(i, j))}});
  return {{"d", d}, {"entries", entries}};
}

UniTri unitri_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("d")) throw ConfigError("group element needs a \"d\" field");
  const int d = j.at("d").get<int>();
  if (d < 2) throw ConfigError("group element dimension must be >= 2");
  UniTri a(d);
  if (j.contains("entries")) {
    for (const auto& e : j.at("entries")) {
      const int r = e.at("i").get<int>();
      const int c = e.at("j").get<int>();
      if (r < 1 || c > d || r >= c)
        throw ConfigError("entry (" + std::to_string(r) + "," + std::to_string(c) +
                          ") is not strictly upper triangular");
      a.at(r, c) = int_from_json(e.at("v"));
    }
  }
  return a;
}

Json to_json(const ThetaSpec& t) {
  Json j;
  switch (t.kind) {
    case ThetaSpec::Kind::rational:
      j = {{"kind", "rational"}, {"p", int_to_json(t.p)}, {"q", int_to_json(t.q)}};
      break;
    case ThetaSpec::Kind::quadratic:
      j = {{"kind", "quadratic"}, {"a", int_to_json(t.a)}, {"b", int_to_json(t.b)},
           {"D", int_to_json(t.D)},   {"c", int_to_json(t.c)}};
      break;
    case ThetaSpec::Kind::decimal:
      j = {{"kind", "decimal"}, {"value", t.decimal}};
      break;
  }
  j["precision_bits"] = t.precision_bits;
  return j;
}

ThetaSpec theta_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("theta needs a \"kind\" field");
  const auto kind = j.at("kind").get<std::string>();
  ThetaSpec t;
  if (kind == "rational") {
    t = ThetaSpec::rational(int_from_json(j.at("p")), int_from_json(j.at("q")));
  } else if (kind == "quadratic") {
    t = ThetaSpec::quadratic(int_from_json(j.at("a")), int_from_json(j.at("b")),
                             int_from_json(j.at("D")), int_from_json(j.at("c")));
  } else if (kind == "decimal") {
    t = ThetaSpec::decimal_literal(j.at("value").get<std::string>());
  } else {
    throw ConfigError("unknown theta kind '" + kind + "'");
  }
  if (j.contains("precision_bits")) t.precision_bits = j.at("precision_bits").get<unsigned>();
  return t;
}

Json folner_summary(const FolnerData& fd) {
  return {{"d", fd.d},
          {"n", fd.n},
          {"m", fd.m},
          {"size_Kn", fd.size_kn()},
          {"size_Fn", fd.size_fn()},
          {"property4_verified", fd.verified}};
}

Json to_json(const SparseVec& v) {
  std::vector<std::pair<std::string, Json>> rows;
  for (const auto& [key, amp] : v.entries())
    rows.emplace_back(canonical_dump(to_json(key.rep())),
                      Json{{"key", to_json(key.rep())}, {"re", amp.real()}, {"im", amp.imag()}});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Json out = Json::array();
  for (auto& r : rows) out.push_back(std::move(r.second));
  return out;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) throw InvariantViolation("non-finite value in report");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace {

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_into(value, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

}  // namespace qdcert

#include "multisum/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace multisum {

namespace {

// Runs a loader and turns every schema-level failure into SchemaError.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SchemaError("scalar must be a number or an [re, im] pair");
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_exponent(const std::optional<Exponent>& e) {
  if (!e) return "";
  return e->is_infinite() ? "inf" : number(e->value());
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write '" + path + "'");
  out << text;
  if (!out) throw SchemaError("failed writing '" + path + "'");
}

Exponent exponent_from_json(const Json& j) {
  return guarded("exponent", [&] {
    if (j.is_number()) return Exponent::from_value(j.get<double>());
    if (j.is_string()) return Exponent::parse(j.get<std::string>());
    throw SchemaError("exponent must be a number or a string");
  });
}

Json exponent_to_json(Exponent e) {
  if (e.is_infinite()) return "inf";
  return e.value();
}

std::vector<Scalar> scalars_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of scalars");
  std::vector<Scalar> v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(scalar_from_json(x));
  return v;
}

Json scalars_to_json(std::span<const Scalar> v, Field field) {
  Json out = Json::array();
  for (const auto& x : v) {
    if (field == Field::real) {
      out.push_back(x.real());
    } else {
      out.push_back(Json::array({x.real(), x.imag()}));
    }
  }
  return out;
}

FormTensor form_from_json(const Json& j) {
  return guarded("form", [&] {
    const Field field = parse_field(member(j, "field").get<std::string>());
    const auto dims = member(j, "dims").get<std::vector<std::size_t>>();
    const Json& exps = member(j, "domain_exponents");
    if (!exps.is_array() || exps.size() != dims.size()) {
      throw SchemaError("domain_exponents must list one exponent per dimension");
    }
    std::vector<SpaceSpec> domains;
    for (std::size_t i = 0; i < dims.size(); ++i) domains.emplace_back(dims[i], exponent_from_json(exps[i]));
    return FormTensor(domains, field, scalars_from_json(member(j, "coeffs")));
  });
}

Json form_to_json(const FormTensor& a) {
  Json exps = Json::array();
  for (const auto& d : a.domains()) exps.push_back(exponent_to_json(d.exponent));
  return Json{{"field", to_string(a.field())},
              {"dims", a.dims()},
              {"domain_exponents", exps},
              {"coeffs", scalars_to_json(a.coeffs(), a.field())}};
}

VectorSeq seq_from_json(const Json& j) {
  return guarded("vector sequence", [&] {
    const Field field = parse_field(member(j, "field").get<std::string>());
    const SpaceSpec space(member(j, "dim").get<std::size_t>(), exponent_from_json(member(j, "exponent")));
    std::vector<std::vector<Scalar>> vectors;
    const Json& vs = member(j, "vectors");
    if (!vs.is_array()) throw SchemaError("vectors must be an array");
    for (const auto& v : vs) vectors.push_back(scalars_from_json(v));
    if (field == Field::real) {
      for (const auto& v : vectors)
        for (const auto& x : v)
          if (x.imag() != 0.0) throw SchemaError("real sequence has a complex entry");
    }
    VectorSeq seq(space, field, std::move(vectors));
    seq.validate();
    return seq;
  });
}

Json seq_to_json(const VectorSeq& s) {
  Json vectors = Json::array();
  for (const auto& v : s.vectors) vectors.push_back(scalars_to_json(v, s.field));
  return Json{{"field", to_string(s.field)},
              {"dim", s.space.dim},
              {"exponent", exponent_to_json(s.space.exponent)},
              {"vectors", vectors}};
}

TestFamily family_from_json(const Json& j) {
  return guarded("family", [&] {
    const Json& cols = member(j, "columns");
    if (!cols.is_array() || cols.empty()) throw SchemaError("columns must be a non-empty array");
    TestFamily fam;
    for (const auto& c : cols) fam.columns.push_back(seq_from_json(c));
    return fam;
  });
}

Json family_to_json(const TestFamily& f) {
  Json cols = Json::array();
  for (const auto& c : f.columns) cols.push_back(seq_to_json(c));
  return Json{{"columns", cols}};
}

Matrix matrix_from_json(const Json& j) {
  return guarded("matrix", [&] {
    const Field field = parse_field(member(j, "field").get<std::string>());
    const Json& rows = member(j, "entries");
    if (!rows.is_array() || rows.empty()) throw SchemaError("entries must be a non-empty array of rows");
    std::vector<std::vector<Scalar>> data;
    for (const auto& r : rows) data.push_back(scalars_from_json(r));
    return Matrix::from_rows(data, field);
  });
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t j = 0; j < m.rows(); ++j) {
    rows.push_back(scalars_to_json(m.data().subspan(j * m.cols(), m.cols()), m.field()));
  }
  return Json{{"field", to_string(m.field())}, {"entries", rows}};
}

Json report_to_json(const VerificationReport& r) {
  return Json{{"check", r.check},
              {"field", to_string(r.field)},
              {"p", r.p ? exponent_to_json(*r.p) : Json()},
              {"q", r.q ? exponent_to_json(*r.q) : Json()},
              {"lhs", r.lhs},
              {"rhs", r.rhs},
              {"ratio", r.ratio},
              {"bound", r.bound},
              {"exact_norm", r.exact_norm},
              {"status", to_string(r.status)},
              {"witness", r.witness}};
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  std::ostringstream out;
  out << "check,field,p,q,lhs,rhs,ratio,bound,exact_norm,status\n";
  for (const auto& r : reports) {
    out << r.check << ',' << to_string(r.field) << ',' << csv_exponent(r.p) << ','
        << csv_exponent(r.q) << ',' << number(r.lhs) << ',' << number(r.rhs) << ','
        << number(r.ratio) << ',' << number(r.bound) << ',' << (r.exact_norm ? "true" : "false")
        << ',' << to_string(r.status) << '\n';
  }
  return out.str();
}

Json certificate_to_json(const RatioCertificate& c) {
  Json norms = Json::array();
  for (const auto& n : c.rhs_norms) norms.push_back(Json{{"value", n.value}, {"exact", n.exact}});
  return Json{{"exponents", c.exponents.to_string()},
              {"lhs", c.lhs},
              {"rhs_norms", norms},
              {"ratio", c.ratio},
              {"certified", c.certified()},
              {"family", family_to_json(c.family)}};
}

}  // namespace multisum

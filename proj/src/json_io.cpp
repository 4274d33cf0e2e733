#include <mdeq/json_io.hpp>

namespace mdeq {
namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field \"") + name + "\"");
  return *it;
}

}  // namespace

Complex parse_complex(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return Complex(j[0].get<double>(), j[1].get<double>());
  bad("a complex number is [re, im] or a bare real");
}

Vector parse_vector(const Json& j) {
  if (!j.is_array()) bad("a vector is an array of complex numbers");
  Vector v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = parse_complex(j[i]);
  return v;
}

Matrix parse_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) bad("a matrix is a nonempty array of rows");
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<int>(j.size()), static_cast<int>(cols));
  for (size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) bad("matrix rows must have equal length");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<int>(r), static_cast<int>(c)) = parse_complex(j[r][c]);
  }
  return m;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vector_to_json(const Vector& v) {
  Json j = Json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(complex_to_json(v[i]));
  return j;
}

Json matrix_to_json(const Matrix& m) {
  Json j = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    j.push_back(std::move(row));
  }
  return j;
}

SystemSpec parse_spec(const Json& j) {
  try {
    if (!j.is_object()) bad("a problem is a JSON object");
    SystemSpec spec;
    spec.n = field(j, "n").get<int>();
    spec.a = field(j, "a").get<double>();
    spec.b = field(j, "b").get<double>();
    spec.J = parse_matrix(field(j, "J"));
    for (const Json& ja : field(j, "atoms")) {
      Atom atom;
      atom.x = field(ja, "x").get<double>();
      atom.dq = parse_matrix(field(ja, "dq"));
      atom.dw = parse_matrix(field(ja, "dw"));
      spec.atoms.push_back(std::move(atom));
    }
    if (j.contains("gaps")) {
      for (const Json& jg : j["gaps"]) {
        GapDensity gd;
        gd.Q = parse_matrix(field(jg, "Q"));
        gd.W = parse_matrix(field(jg, "W"));
        spec.gaps.push_back(std::move(gd));
      }
    }
    return spec;
  } catch (const Json::exception& e) {
    bad(e.what());
  }
}

SystemSpec parse_spec_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    bad(e.what());
  }
  return parse_spec(j);
}

Json spec_to_json(const SystemSpec& spec) {
  Json j;
  j["n"] = spec.n;
  j["a"] = spec.a;
  j["b"] = spec.b;
  j["J"] = matrix_to_json(spec.J);
  j["atoms"] = Json::array();
  for (const auto& atom : spec.atoms) {
    Json ja;
    ja["x"] = atom.x;
    ja["dq"] = matrix_to_json(atom.dq);
    ja["dw"] = matrix_to_json(atom.dw);
    j["atoms"].push_back(std::move(ja));
  }
  if (!spec.gaps.empty()) {
    j["gaps"] = Json::array();
    for (const auto& gd : spec.gaps) {
      Json jg;
      jg["Q"] = matrix_to_json(gd.Q);
      jg["W"] = matrix_to_json(gd.W);
      j["gaps"].push_back(std::move(jg));
    }
  }
  return j;
}

RightHandSide parse_rhs(const Json& j, const SystemSpec& spec) {
  try {
    if (!j.is_object()) bad("a right-hand side is a JSON object");
    RightHandSide f = RightHandSide::zero(spec);
    if (j.contains("atom")) {
      const Json& ja = j["atom"];
      if (!ja.is_array() || ja.size() != f.atom.size())
        bad("\"atom\" must list one value per atom");
      for (size_t k = 0; k < ja.size(); ++k) {
        Vector v = parse_vector(ja[k]);
        if (v.size() != spec.n) bad("atom values must have length n");
        f.atom[k] = std::move(v);
      }
    }
    if (j.contains("gap")) {
      const Json& jg = j["gap"];
      if (!jg.is_array() || jg.size() != f.gap.size())
        bad("\"gap\" must list one value per gap, first to last");
      for (size_t k = 0; k < jg.size(); ++k) {
        Vector v = parse_vector(jg[k]);
        if (v.size() != spec.n) bad("gap values must have length n");
        f.gap[k] = std::move(v);
      }
    }
    return f;
  } catch (const Json::exception& e) {
    bad(e.what());
  }
}

Json rhs_to_json(const RightHandSide& f) {
  Json j;
  j["atom"] = Json::array();
  for (const auto& v : f.atom) j["atom"].push_back(vector_to_json(v));
  j["gap"] = Json::array();
  for (const auto& v : f.gap) j["gap"].push_back(vector_to_json(v));
  return j;
}

Matrix parse_boundary(const Json& j) { return parse_matrix(j); }

Json table_to_json(const KernelTable& table) {
  Json j;
  j["lambda"] = complex_to_json(table.lambda);
  j["points"] = table.points;
  auto blocks = [](const std::vector<std::vector<Matrix>>& rows) {
    Json out = Json::array();
    for (const auto& row : rows) {
      Json per_point = Json::array();
      for (const auto& block : row) per_point.push_back(matrix_to_json(block));
      out.push_back(std::move(per_point));
    }
    return out;
  };
  j["K"] = blocks(table.K);
  j["G"] = blocks(table.G);
  return j;
}

}  // namespace mdeq

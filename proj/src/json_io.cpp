#include "mtv/json_io.hpp"

#include <string>

#include "mtv/errors.hpp"

namespace mtv {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("json: missing field '") + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("json: field '") + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

Json to_json(const SlicePoint& s) { return {{"k", s.k()}, {"coeffs", to_json(s.coeffs)}}; }

Json to_json(const WPoint& p) {
  return {{"orientation", p.orientation == Orientation::incoming ? "in" : "out"},
          {"g", to_json(p.g)},
          {"X", to_json(p.x)}};
}

Json to_json(const UClass& m) {
  Json gs = Json::array();
  for (const auto& g : m.gs) gs.push_back(to_json(g));
  return {{"b", m.b}, {"bprime", m.bprime}, {"gs", gs}, {"X", to_json(m.x)}};
}

Json to_json(const JetScheme& d) {
  Json pieces = Json::array();
  for (const auto& p : d.pieces) {
    Json jets = Json::array();
    for (const auto& jet : p.jets) {
      Json coeffs = Json::array();
      for (const auto& v : jet) coeffs.push_back(to_json(v));
      jets.push_back(coeffs);
    }
    pieces.push_back({{"z", to_json(p.z)}, {"len", p.length}, {"jets", jets}});
  }
  return {{"k", d.k}, {"b", d.b}, {"bprime", d.bprime}, {"pieces", pieces}};
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ValidationError("json: complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("json: vector must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_from_json(j[i]);
  return v;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("json: matrix must be a non-empty array of rows");
  const auto k = static_cast<Eigen::Index>(j.size());
  Matrix m(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != k) {
      throw ValidationError("json: matrix must be square");
    }
    for (Eigen::Index c = 0; c < k; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

SlicePoint slice_point_from_json(const Json& j) {
  SlicePoint s{vector_from_json(field(j, "coeffs"))};
  if (s.k() != int_field(j, "k") || s.k() < 1) throw ValidationError("json: slice point has the wrong length");
  return s;
}

WPoint wpoint_from_json(const Json& j) {
  const Json& o = field(j, "orientation");
  if (!o.is_string() || (o != "in" && o != "out")) throw ValidationError("json: orientation must be \"in\" or \"out\"");
  WPoint p{matrix_from_json(field(j, "g")), slice_point_from_json(field(j, "X")),
           o == "in" ? Orientation::incoming : Orientation::outgoing};
  validate(p);
  return p;
}

UClass uclass_from_json(const Json& j) {
  UClass m;
  m.b = int_field(j, "b");
  m.bprime = int_field(j, "bprime");
  m.x = slice_point_from_json(field(j, "X"));
  const Json& gs = field(j, "gs");
  if (!gs.is_array()) throw ValidationError("json: gs must be an array");
  for (const auto& g : gs) m.gs.push_back(matrix_from_json(g));
  validate(m);
  return m;
}

JetScheme jet_scheme_from_json(const Json& j) {
  JetScheme d;
  d.k = int_field(j, "k");
  d.b = int_field(j, "b");
  d.bprime = int_field(j, "bprime");
  const Json& pieces = field(j, "pieces");
  if (!pieces.is_array()) throw ValidationError("json: pieces must be an array");
  for (const auto& pj : pieces) {
    LocalPiece p;
    p.z = complex_from_json(field(pj, "z"));
    p.length = int_field(pj, "len");
    const Json& jets = field(pj, "jets");
    if (!jets.is_array()) throw ValidationError("json: jets must be an array");
    for (const auto& jet : jets) {
      if (!jet.is_array()) throw ValidationError("json: a jet must be an array of vectors");
      std::vector<Vector> coeffs;
      for (const auto& v : jet) coeffs.push_back(vector_from_json(v));
      p.jets.push_back(coeffs);
    }
    d.pieces.push_back(p);
  }
  fitting_transverse(d);
  return d;
}

}  // namespace mtv

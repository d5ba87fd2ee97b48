#pragma once

// JSON encodings. Complex numbers are [re, im] pairs, matrices are row-major
// arrays of rows. Parsing errors raise ValidationError.

#include "json.hpp"

#include "mtv/hilbert.hpp"
#include "mtv/mt_u.hpp"

namespace mtv {

using Json = nlohmann::json;

Json to_json(Complex z);
Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const SlicePoint& s);
Json to_json(const WPoint& p);
Json to_json(const UClass& m);
Json to_json(const JetScheme& d);

Complex complex_from_json(const Json& j);
Vector vector_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
SlicePoint slice_point_from_json(const Json& j);
WPoint wpoint_from_json(const Json& j);
UClass uclass_from_json(const Json& j);
JetScheme jet_scheme_from_json(const Json& j);

}  // namespace mtv

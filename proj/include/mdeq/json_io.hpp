#pragma once

// JSON forms of the problem data.  Complex numbers are [re, im]; a bare
// number is accepted on input as a real.  Matrices are row-major nested
// arrays.  Structural problems throw ParseError; semantic validation is the
// caller's job.

#include <mdeq/greens.hpp>
#include <mdeq/propagate.hpp>
#include <mdeq/system.hpp>

#include <json.hpp>

#include <string>

namespace mdeq {

using Json = nlohmann::ordered_json;

Complex parse_complex(const Json& j);
Vector parse_vector(const Json& j);
Matrix parse_matrix(const Json& j);

Json complex_to_json(Complex z);
Json vector_to_json(const Vector& v);
Json matrix_to_json(const Matrix& m);

// {"n", "a", "b", "J", "atoms": [{"x", "dq", "dw"}...], "gaps": [{"Q", "W"}...]}
// with "gaps" optional (omitted means zero densities).
SystemSpec parse_spec(const Json& j);
SystemSpec parse_spec_text(const std::string& text);
Json spec_to_json(const SystemSpec& spec);

// {"atom": [value...], "gap": [value...]}, both optional, missing blocks are
// zero; each value is a length-n vector.
RightHandSide parse_rhs(const Json& j, const SystemSpec& spec);
Json rhs_to_json(const RightHandSide& f);

// Boundary coefficient matrix, rows = d = n+ + n-, one column per condition.
Matrix parse_boundary(const Json& j);

// {"lambda", "points", "K", "G"}; K and G are indexed [point][atom][row][col].
Json table_to_json(const KernelTable& table);

}  // namespace mdeq

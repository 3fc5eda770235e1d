#pragma once
#include <iosfwd>
#include <string>
#include <variant>

#include "bmoext/fields.hpp"

namespace bmoext {

/// FLD/1: one-line header `FLD/1 {"nx":..,"ny":..,"x0":..,"y0":..,"h":..,
/// "kind":"scalar"|"vector2"}`, then ny rows of decimal values with 17
/// significant digits, row-major with the bottom row first. Vector fields
/// interleave the two components per cell. Unmasked cells are the literal
/// token `nan`. Write/read round-trips are value- and byte-exact.
using AnyField = std::variant<ScalarField, VectorField>;

void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const VectorField& f);
void write_field_file(const std::string& path, const ScalarField& f);
void write_field_file(const std::string& path, const VectorField& f);

AnyField read_field(std::istream& is);
AnyField read_field_file(const std::string& path);

ScalarField read_scalar_field_file(const std::string& path);
VectorField read_vector_field_file(const std::string& path);

}  // namespace bmoext

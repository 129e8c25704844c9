#pragma once

#include <string>

#include "fad/types.hpp"

namespace fad {

/// Reads an XYZ file (line 1 atom count, line 2 comment, then "El x y z"
/// per atom; the element symbol is ignored) into a flat 3N vector.
Vector read_xyz(const std::string& path);

/// Writes a flat 3N vector as an XYZ file with a single element label.
void write_xyz(const std::string& path, const Vector& q,
               const std::string& comment = "", const std::string& element = "X");

}  // namespace fad

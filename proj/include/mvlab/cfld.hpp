// Connection-field container: a one-line JSON manifest followed by the raw
// little-endian float64 potential payload (points in lex order, the n
// 1-form components of each point contiguous).
#pragma once

#include <string>

#include "mvlab/connection.hpp"

namespace mvlab {

/// The manifest line (no trailing newline):
/// {"background_coeffs":[...],"n":...,"payload_bytes":...,"shape":[...],
///  "structure_kind":"..."}.
std::string cfld_manifest(const ConnectionField& C);

void write_cfld(const std::string& path, const ConnectionField& C);
ConnectionField read_cfld(const std::string& path);

}  // namespace mvlab

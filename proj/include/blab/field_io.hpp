#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "blab/geometry.hpp"

namespace blab {

// CFLD-1 field format: line 1 `CFLD1 N L center_re center_im`, then N^2 lines
// `re im` row-major. Decimal text with '.' separator regardless of locale.

void write_cfld(std::ostream& os, const ComplexField& f);
void write_cfld(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_cfld(std::istream& is);
ComplexField read_cfld(const std::filesystem::path& path);

/// Real fields travel as CFLD-1 with zero imaginary parts.
void write_cfld(const std::filesystem::path& path, const RealField& f);
RealField read_real_cfld(const std::filesystem::path& path);

}  // namespace blab

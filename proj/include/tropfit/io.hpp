#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tropfit/curve.hpp"
#include "tropfit/fit.hpp"
#include "tropfit/linalg.hpp"
#include "tropfit/mc.hpp"
#include "tropfit/space.hpp"

namespace tropfit::io {

// JSON forms. Bottom is the string "-inf"; Plücker subset keys are 1-based,
// comma separated ("1,2") and every one of the C(d, m) keys must be present.
std::string to_json(const PluckerVector& p);
std::string to_json(const TropPoly2& f);
std::string to_json(const FitResult& r);
std::string to_json(const FermatWeber& fw);
std::string to_json(const TropPoly2& f, std::span<const TropPoint> through);
std::string to_json(const std::vector<McReport>& reports, bool with_elapsed);

PluckerVector plucker_from_json(std::string_view text);
TropPoly2 curve_from_json(std::string_view text);

// A space document: a Plücker object ({"d", "m", "coords"}), a fit result
// carrying one under "plucker", a generator under "matrix", or a hyperplane
// normal under "omega". Throws Parse.
StiefelSpace space_from_json(std::string_view text);

// Points CSV: one point per row, an optional header row (first row with a
// non-numeric cell), all values finite. Throws Parse naming the file and row,
// DimMismatch for ragged rows, Io when unreadable.
std::vector<std::vector<double>> read_points_csv(const std::filesystem::path& path);

// %.12g
std::string format_number(double v);

std::string read_file(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace tropfit::io

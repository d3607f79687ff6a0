#pragma once

#include <string>

#include "rect/measure.hpp"

namespace rect {

// Measure file format: CSV `x0,...,x{d-1},w`, one point per row, plus a JSON
// sidecar (same stem, .json) with d, n, h, generator, params and labels.
// Writers emit every float with 17 significant digits.
void save_measure(const DiscreteMeasure& mu, const std::string& csv_path);
DiscreteMeasure load_measure(const std::string& csv_path);

// Signed-measure convention: the same CSV schema with signed weights; rows
// with w >= 0 load into the positive part, w < 0 into the negative part.
void save_signed(const SignedMeasure& nu, const std::string& csv_path);
SignedMeasure load_signed(const std::string& csv_path);

std::string sidecar_path(const std::string& csv_path);

}  // namespace rect

#pragma once

#include <string>

#include "cwvsmix/data.hpp"

namespace cwvsmix {

// Reads a dataset CSV.  Contract: header row; a `y` column (0/1); exposure
// columns named z_<pollutant>_<period> with 1-based periods forming a
// complete pollutant x period grid; every other column is a covariate.
// An intercept column is prepended to X automatically.  Errors name the
// offending row/column.  If standardize is set the exposures are
// median/IQR-standardized (zero-IQR slices are an error).
ExposureDataset ingest_csv(const std::string& path, bool standardize = false);

// Writes the dataset in the same contract (intercept column omitted).
// Doubles at 17 significant digits, so a write/ingest round trip is exact.
void write_dataset_csv(const ExposureDataset& data, const std::string& path);

// Exposure profiles for the resample simulation source: same z_ column
// contract, y optional (ignored).
ExposureTensor load_profiles(const std::string& path);

// 17-significant-digit formatting used for every floating-point value the
// project writes; byte-stable across runs.
std::string format_g17(double v);

}  // namespace cwvsmix

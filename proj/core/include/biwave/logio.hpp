#pragma once

#include <string>

#include "biwave/optics.hpp"

namespace biwave {

/// CSV body with header `j,i1,i2,b,skipped`; skipped patterns appear as
/// zero-valued rows with skipped = 1, merged in index order.
std::string log_to_csv(const AcquisitionLog& log);

/// Sidecar `key = value` metadata block (family, n, bits, full_scale,
/// noise_sigma, seed, basis_seed).
std::string log_metadata(const AcquisitionLog& log);

/// Writes `path` (CSV) and `path.meta` (metadata).
void write_log(const std::string& path, const AcquisitionLog& log);

/// Reads a log written by write_log.
AcquisitionLog read_log(const std::string& path);

}  // namespace biwave

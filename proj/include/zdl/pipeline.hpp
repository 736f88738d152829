#pragma once

// Store-backed zero retrieval: cached ranges are read back, gaps are scanned
// and committed first, so repeated runs see the same records.

#include <string>
#include <vector>

#include "zdl/zerostore.hpp"

namespace zdl::pipeline {

/// Zeros of zeta^(k) with gamma in [t0, t1). With a null store every range is scanned.
std::vector<scan::ZeroRecord> zeros_in(store::ZeroStore* store, int k, double t0, double t1,
                                       const eval::PrecisionPolicy& policy, const Settings& settings,
                                       const std::string& created_at = "");

/// A strip scan to height T assembled from cached records, for count().
scan::StripScan strip_from_store(store::ZeroStore* store, int k, double T, const eval::PrecisionPolicy& policy,
                                 const Settings& settings, const std::string& created_at = "");

}  // namespace zdl::pipeline

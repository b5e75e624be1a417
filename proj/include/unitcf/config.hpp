#pragma once

namespace unitcf::config {

/// When true, sign determination tries a few rounds of interval refinement
/// before falling back to the exact gcd-based zero test. Turning it off only
/// changes the evaluation schedule, never a decision, so all outputs must be
/// identical either way.
inline bool interval_fast_path = true;

/// Default refinement budget (in bits of interval width) for numeric display
/// and for callers that pass no explicit budget.
inline int default_max_bits = 4096;

}  // namespace unitcf::config

#pragma once

#include <string>
#include <vector>

#include "resonwave/model.hpp"
#include "resonwave/resonances.hpp"

namespace resonwave {

struct ExpansionReport;

/// printf("%.17g"): round-trips every double.
std::string format_g17(double v);

/// Resonance table plus scan metadata as a JSON document.
std::string resonances_json(const ScanResult& r, const PotentialSpec& V);

/// Terms with polynomial coefficients, per-t norms and the fitted decay rate.
std::string expansion_json(const ExpansionReport& r);

/// t, residual_norm, tail_norm, oracle_gap.
std::string series_csv(const ExpansionReport& r);

/// Long format: one row per (sweep step, zero).
struct SweepRow {
  cplx alpha;
  std::vector<Resonance> zeros;
};
std::string sweep_csv(const std::vector<SweepRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace resonwave

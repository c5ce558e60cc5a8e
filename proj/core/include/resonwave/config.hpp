#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resonwave/model.hpp"
#include "resonwave/state.hpp"

namespace resonwave {

/// Rectangle in the lambda plane.
struct ScanSpec {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;
};

struct ExpansionSpec {
  WaveKind kind = WaveKind::Cosine;
  std::vector<double> times{1.0, 2.0, 3.0};
  int n = 1;
};

/// Linear coupling sweep for scan-alpha: the potential's coupling (delta
/// alpha, or the scalar well value) is moved from start to stop.
struct SweepSpec {
  cplx start{0.0, 0.0};
  cplx stop{0.0, 0.0};
  int steps = 2;
};

struct ProblemSpec {
  PotentialSpec potential;
  UniformGrid grid;
  ContourSpec contour;
  StateSpec state;
  int window = 1;
  std::optional<ScanSpec> scan;
  ExpansionSpec expansion;
  std::optional<SweepSpec> sweep;
};

bool operator==(const ProblemSpec& a, const ProblemSpec& b);

/// Parses and validates a JSON problem document. Throws ConfigError with the
/// offending field path.
ProblemSpec load_problem(std::string_view text);
ProblemSpec load_problem_file(const std::string& path);

/// Inverse of load_problem: load_problem(serialize_problem(p)) == p.
std::string serialize_problem(const ProblemSpec& p);

/// Scan box to use for a problem: the explicit one, or a default box
/// reaching from just left of the tail curve to past the growth bound.
ScanSpec effective_scan(const ProblemSpec& p);

}  // namespace resonwave

#include "resonwave/resonances.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "resonwave/errors.hpp"
#include "resonwave/jost.hpp"
#include "resonwave/numerics.hpp"
#include "resonwave/report_io.hpp"

namespace resonwave {

namespace {

constexpr double kRloc = 1e-3;
constexpr double kFloor = 1e-6;
constexpr double kMaxPhaseStep = kPi / 4.0;
constexpr int kPiecesPerEdge = 32;
constexpr double kSplitFractions[] = {0.4937, 0.5371, 0.4613, 0.5189};

struct Tracker {
  const AnalyticFn& f;
  double min_len;

  // Phase change of f along [za, zb]. Segments are split until both halves
  // agree with the whole within the step bound.
  double segment(cplx za, cplx zb, cplx fa, cplx fb) const {
    if (fa == 0.0 || fb == 0.0) throw BoundaryZero("zero of the scanned function on the contour");
    const cplx zm = 0.5 * (za + zb);
    const cplx fm = f(zm);
    if (fm == 0.0 || !std::isfinite(std::abs(fm)))
      throw BoundaryZero("zero of the scanned function on the contour");
    const double d1 = std::arg(fm / fa), d2 = std::arg(fb / fm);
    if (std::abs(d1) < kMaxPhaseStep && std::abs(d2) < kMaxPhaseStep &&
        std::abs(std::arg(fb / fa)) < kMaxPhaseStep)
      return d1 + d2;
    if (std::abs(zb - za) < min_len) throw BoundaryZero("phase refinement stalled near the contour");
    return segment(za, zm, fa, fm) + segment(zm, zb, fm, fb);
  }
};

int winding_impl(const AnalyticFn& f, const std::vector<cplx>& pts, double min_len) {
  Tracker tr{f, min_len};
  double total = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t e = 0; e < n; ++e) {
    const cplx a = pts[e], b = pts[(e + 1) % n];
    cplx za = a, fa = f(a);
    for (int k = 1; k <= kPiecesPerEdge; ++k) {
      const cplx zb = a + (b - a) * (static_cast<double>(k) / kPiecesPerEdge);
      const cplx fb = f(zb);
      total += tr.segment(za, zb, fa, fb);
      za = zb;
      fa = fb;
    }
  }
  const double w = total / (2.0 * kPi);
  const double r = std::round(w);
  if (std::abs(w - r) > 1e-3) throw BoundaryZero("winding number not an integer");
  return static_cast<int>(r);
}

double perimeter_scale(const std::vector<cplx>& pts) {
  double s = 0.0;
  for (std::size_t e = 0; e < pts.size(); ++e) s = std::max(s, std::abs(pts[(e + 1) % pts.size()] - pts[e]));
  return s;
}

struct Box {
  double re0, re1, im0, im1;
  int count;
  double side() const { return std::max(re1 - re0, im1 - im0); }
  cplx center() const { return {0.5 * (re0 + re1), 0.5 * (im0 + im1)}; }
  bool contains(cplx z, double slack) const {
    return z.real() >= re0 - slack && z.real() <= re1 + slack && z.imag() >= im0 - slack &&
           z.imag() <= im1 + slack;
  }
};

struct Found {
  cplx z;
  int mult;
};

double relative_residual(const AnalyticFn& f, cplx z) {
  double mean = 0.0;
  constexpr int n = 16;
  for (int k = 0; k < n; ++k) mean += std::abs(f(z + kRloc * std::exp(kI * (2.0 * kPi * k / n))));
  mean /= n;
  return mean > 0.0 ? std::abs(f(z)) / mean : std::abs(f(z));
}

}  // namespace

const char* to_string(ResonanceKind k) {
  return k == ResonanceKind::EigenvalueType ? "EigenvalueType" : "ResonanceType";
}

void ScanRegion::validate() const {
  for (double v : {re_min, re_max, im_min, im_max})
    if (!std::isfinite(v)) throw InvalidArgument("scan region must be finite");
  if (!(re_min < re_max) || !(im_min < im_max)) throw InvalidArgument("scan region is empty");
  if (clip) clip->validate();
}

ScanRegion default_scan_region(const PotentialSpec& V, const ContourSpec& contour) {
  ScanRegion r;
  const double im = std::min(contour.im_truncation, 12.0);
  // odd offsets keep the box edges off lattice points where zeros like to sit
  r.im_min = -im - 0.0137;
  r.im_max = im + 0.0213;
  r.re_min = contour.g_star(im) + contour.eps - 0.0731;
  r.re_max = V.growth_bound() + 1.0731;
  r.clip = contour;
  return r;
}

int winding_polygon(const AnalyticFn& f, const std::vector<cplx>& corners) {
  return winding_impl(f, corners, 1e-7 * perimeter_scale(corners));
}

int winding_box(const AnalyticFn& f, double re_min, double re_max, double im_min, double im_max) {
  return winding_polygon(f, {{re_min, im_min}, {re_max, im_min}, {re_max, im_max}, {re_min, im_max}});
}

int winding_circle(const AnalyticFn& f, cplx center, double radius) {
  constexpr int n = 16;
  std::vector<cplx> pts(n);
  for (int k = 0; k < n; ++k) pts[k] = center + radius * std::exp(kI * (2.0 * kPi * k / n));
  // the polygon stays within 2% of the circle; fine for r_loc-sized checks
  return winding_impl(f, pts, 1e-7 * radius);
}

AnalyticFn scan_function(const PotentialSpec& V) {
  switch (V.kind) {
    case PotentialKind::Delta: {
      const cplx a = V.alpha;
      return [a](cplx l) { return 2.0 * l + a; };
    }
    case PotentialKind::Free: {
      const int d = V.dim;
      return [d](cplx l) { return std::pow(2.0 * l, d); };
    }
    case PotentialKind::PiecewiseConstant:
      break;
  }
  return [V](cplx l) { return jost_scaled(l, V); };
}

int count_zeros(const ScanRegion& box, const PotentialSpec& V) {
  box.validate();
  const AnalyticFn f = scan_function(V);
  ScanRegion b = box;
  for (int attempt = 0;; ++attempt) {
    try {
      return winding_box(f, b.re_min, b.re_max, b.im_min, b.im_max);
    } catch (const BoundaryZero&) {
      if (attempt == 3) throw;
      const double dr = 0.005 * (b.re_max - b.re_min), di = 0.005 * (b.im_max - b.im_min);
      b.re_min -= dr;
      b.re_max += dr;
      b.im_min -= di;
      b.im_max += di;
    }
  }
}

bool has_zero_resonance(const PotentialSpec& V) {
  return winding_circle(scan_function(V), 0.0, kRloc) > 0;
}

std::optional<cplx> refine_zero(const AnalyticFn& f, cplx start, int multiplicity, double tol, int max_iter) {
  const int m = std::max(1, multiplicity);
  cplx z = start;
  for (int it = 0; it < max_iter; ++it) {
    const double r = cauchy_radius(z);
    const cplx g = m == 1 ? f(z) : cauchy_derivative(f, z, m - 1, r);
    if (g == 0.0) return z;
    const cplx dg = cauchy_derivative(f, z, m, r);
    if (dg == 0.0 || !std::isfinite(std::abs(dg)) || !std::isfinite(std::abs(g))) return std::nullopt;
    cplx step = g / dg;
    const double cap = std::max(1.0, std::abs(z));
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    z -= step;
    if (std::abs(step) < tol * std::max(1.0, std::abs(z))) return z;
  }
  return std::nullopt;
}

std::optional<cplx> muller(const AnalyticFn& f, cplx z0, cplx z1, cplx z2, double tol, int max_iter) {
  cplx f0 = f(z0), f1 = f(z1), f2 = f(z2);
  for (int it = 0; it < max_iter; ++it) {
    const cplx h1 = z1 - z0, h2 = z2 - z1;
    const cplx d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cplx a = (d2 - d1) / (h2 + h1);
    const cplx b = a * h2 + d2;
    const cplx disc = std::sqrt(b * b - 4.0 * f2 * a);
    const cplx den = std::abs(b + disc) > std::abs(b - disc) ? b + disc : b - disc;
    if (den == 0.0) return std::nullopt;
    const cplx dz = -2.0 * f2 / den;
    z0 = z1;
    f0 = f1;
    z1 = z2;
    f1 = f2;
    z2 += dz;
    f2 = f(z2);
    if (!std::isfinite(std::abs(z2))) return std::nullopt;
    if (std::abs(dz) < tol * std::max(1.0, std::abs(z2)) || f2 == 0.0) return z2;
  }
  return std::nullopt;
}

ScanResult scan(const ScanRegion& region, const PotentialSpec& V, const ContourSpec& contour) {
  region.validate();
  V.validate();
  const AnalyticFn f = scan_function(V);
  ScanResult res;
  res.region = region;
  std::atomic<int> boxes{0};

  int top = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      ++boxes;
      top = winding_box(f, res.region.re_min, res.region.re_max, res.region.im_min, res.region.im_max);
      break;
    } catch (const BoundaryZero&) {
      if (attempt == 3) throw;
      ScanRegion& b = res.region;
      const double dr = 0.005 * (b.re_max - b.re_min), di = 0.005 * (b.im_max - b.im_min);
      b.re_min -= dr;
      b.re_max += dr;
      b.im_min -= di;
      b.im_max += di;
      ++res.dilations;
    }
  }
  res.total_count = top;
  if (top < 0) throw NonConvergence("negative winding number: the scanned function has a pole");

  // Tries to pin down the zeros of one box without subdividing it.
  auto resolve = [&](const Box& b) -> std::optional<Found> {
    const double slack = 1e-9 * std::max(1.0, b.side());
    const bool at_floor = b.side() < kFloor;
    if (b.count == 1) {
      std::optional<cplx> z = refine_zero(f, b.center(), 1);
      if (!z || !b.contains(*z, slack)) {
        const double w = b.re1 - b.re0, h = b.im1 - b.im0;
        z = muller(f, b.center() + cplx(-0.25 * w, -0.25 * h), b.center() + cplx(0.25 * w, -0.2 * h),
                   b.center() + cplx(0.05 * w, 0.3 * h));
      }
      if (z && b.contains(*z, slack)) return Found{*z, 1};
      if (at_floor) return Found{b.center(), 1};
      return std::nullopt;
    }
    if (b.side() > 1e-2 && !at_floor) return std::nullopt;
    std::optional<cplx> z = refine_zero(f, b.center(), b.count);
    if (z && b.contains(*z, slack)) {
      if (at_floor) return Found{*z, b.count};
      try {
        if (winding_circle(f, *z, kRloc) == b.count) return Found{*z, b.count};
      } catch (const BoundaryZero&) {
      }
    }
    if (at_floor) return Found{b.center(), b.count};
    return std::nullopt;
  };

  auto subdivide = [&](const Box& b) -> std::vector<Box> {
    for (double fr : kSplitFractions) {
      const double rm = b.re0 + fr * (b.re1 - b.re0);
      const double im = b.im0 + (1.0 - fr) * (b.im1 - b.im0);
      std::vector<Box> kids{{b.re0, rm, b.im0, im, 0},
                            {rm, b.re1, b.im0, im, 0},
                            {b.re0, rm, im, b.im1, 0},
                            {rm, b.re1, im, b.im1, 0}};
      try {
        int sum = 0;
        for (auto& k : kids) {
          ++boxes;
          k.count = winding_box(f, k.re0, k.re1, k.im0, k.im1);
          sum += k.count;
        }
        if (sum != b.count) continue;
        std::vector<Box> keep;
        for (const auto& k : kids)
          if (k.count > 0) keep.push_back(k);
        return keep;
      } catch (const BoundaryZero&) {
      }
    }
    std::ostringstream os;
    os << "unresolved box [" << b.re0 << ", " << b.re1 << "] x [" << b.im0 << ", " << b.im1 << "]";
    throw NonConvergence(os.str());
  };

  std::vector<Found> found;
  std::vector<Box> level;
  if (top > 0)
    level.push_back({res.region.re_min, res.region.re_max, res.region.im_min, res.region.im_max, top});
  while (!level.empty()) {
    std::vector<std::optional<Found>> leaf(level.size());
    std::vector<std::vector<Box>> kids(level.size());
    parallel_for(level.size(), [&](std::size_t i) {
      leaf[i] = resolve(level[i]);
      if (!leaf[i]) kids[i] = subdivide(level[i]);
    });
    std::vector<Box> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      if (leaf[i]) found.push_back(*leaf[i]);
      next.insert(next.end(), kids[i].begin(), kids[i].end());
    }
    level.swap(next);
  }

  int sum = 0;
  for (const auto& z : found) sum += z.mult;
  if (sum != top) throw NonConvergence("located zeros do not match the argument-principle count");

  for (const auto& z : found) {
    if (std::abs(z.z) < kRloc) {
      res.origin_excluded += z.mult;
      continue;
    }
    if (region.clip && !region.clip->right_of_curve(z.z)) {
      res.clipped += z.mult;
      continue;
    }
    Resonance r;
    r.lambda0 = z.z;
    // conjugation symmetry puts isolated real zeros exactly on the axis
    if (V.has_real_coefficients() && std::abs(z.z.imag()) <= 1e-12 * std::max(1.0, std::abs(z.z)))
      r.lambda0 = z.z.real();
    r.multiplicity = z.mult;
    r.newton_residual = relative_residual(f, r.lambda0);
    res.resonances.push_back(classify(r, contour));
  }
  std::sort(res.resonances.begin(), res.resonances.end(), [](const Resonance& a, const Resonance& b) {
    if (a.lambda0.real() != b.lambda0.real()) return a.lambda0.real() < b.lambda0.real();
    return a.lambda0.imag() < b.lambda0.imag();
  });
  res.boxes = boxes.load();
  return res;
}

std::vector<Resonance> find_resonances(const ScanRegion& region, const PotentialSpec& V,
                                       const ContourSpec& contour) {
  return scan(region, V, contour).resonances;
}

Resonance classify(Resonance r, const ContourSpec& contour) {
  const double gap = r.lambda0.real() - contour.g0_level;
  if (std::abs(gap) <= 1e-6) throw OnCurve("resonance lies on the curve Re lambda = g0_level");
  r.kind = gap > 0.0 ? ResonanceKind::EigenvalueType : ResonanceKind::ResonanceType;
  return r;
}

std::string resonances_csv(const std::vector<Resonance>& rs) {
  std::string out = "re,im,multiplicity,kind,newton_residual\n";
  for (const auto& r : rs) {
    out += format_g17(r.lambda0.real()) + "," + format_g17(r.lambda0.imag()) + "," +
           std::to_string(r.multiplicity) + "," + to_string(r.kind) + "," + format_g17(r.newton_residual) +
           "\n";
  }
  return out;
}

}  // namespace resonwave

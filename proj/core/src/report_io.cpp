#include "resonwave/report_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "resonwave/errors.hpp"
#include "resonwave/expansion.hpp"
#include "resonwave/resonances.hpp"

namespace resonwave {

using nlohmann::ordered_json;

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

ordered_json cjson(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

}  // namespace

std::string resonances_json(const ScanResult& r, const PotentialSpec& V) {
  ordered_json j;
  j["potential"] = to_string(V.kind);
  j["dim"] = V.dim;
  ordered_json rs = ordered_json::array();
  for (const auto& z : r.resonances) {
    rs.push_back({{"re", z.lambda0.real()},
                  {"im", z.lambda0.imag()},
                  {"multiplicity", z.multiplicity},
                  {"kind", to_string(z.kind)},
                  {"newton_residual", z.newton_residual}});
  }
  j["resonances"] = rs;
  j["scan"] = {{"re_min", r.region.re_min},
               {"re_max", r.region.re_max},
               {"im_min", r.region.im_min},
               {"im_max", r.region.im_max},
               {"total_count", r.total_count},
               {"origin_excluded", r.origin_excluded},
               {"clipped", r.clipped},
               {"boxes", r.boxes},
               {"dilations", r.dilations}};
  return j.dump(2) + "\n";
}

std::string expansion_json(const ExpansionReport& r) {
  ordered_json j;
  j["kind"] = to_string(r.kind);
  j["n"] = r.n;
  j["window"] = r.window.index;
  j["times"] = r.times;
  ordered_json terms = ordered_json::array();
  for (const auto& t : r.terms) {
    ordered_json poly = ordered_json::array();
    for (cplx c : t.poly) poly.push_back(cjson(c));
    ordered_json norms = ordered_json::array();
    for (const auto& s : t.spatial) norms.push_back(windowed_l2(s, r.window));
    ordered_json per_t = ordered_json::array();
    for (double tt : r.times) per_t.push_back(windowed_l2(t.at(tt), r.window));
    terms.push_back({{"lambda0", cjson(t.lambda0)},
                     {"kappa", t.kappa},
                     {"multiplicity", t.multiplicity},
                     {"kind", to_string(t.kind)},
                     {"closed_form", t.closed_form},
                     {"poly", poly},
                     {"spatial_norms", norms},
                     {"norm_per_t", per_t}});
  }
  j["terms"] = terms;
  if (r.zero_term) {
    ordered_json even = ordered_json::array(), odd = ordered_json::array();
    for (const auto& f : r.zero_term->even_part) even.push_back(windowed_l2(f, r.window));
    for (const auto& f : r.zero_term->odd_part) odd.push_back(windowed_l2(f, r.window));
    j["zero_term"] = {{"even_norms", even}, {"odd_norms", odd}};
  } else {
    j["zero_term"] = nullptr;
  }
  j["taylor_block"] = r.taylor_block;
  j["tail_norm"] = r.tail_norm;
  j["tail_truncation"] = r.tail_truncation;
  j["residual_norm"] = r.residual_norm;
  j["oracle_gap"] = r.oracle_gap;
  j["fitted_decay_rate"] = r.fitted_decay_rate;
  j["t_min"] = r.t_min;
  j["scan_count"] = r.scan_count;
  return j.dump(2) + "\n";
}

std::string series_csv(const ExpansionReport& r) {
  std::string out = "t,residual_norm,tail_norm,oracle_gap\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double res = k < r.residual_norm.size() ? r.residual_norm[k] : 0.0;
    const double gap = k < r.oracle_gap.size() ? r.oracle_gap[k] : 0.0;
    out += format_g17(r.times[k]) + "," + format_g17(res) + "," + format_g17(r.tail_norm[k]) + "," +
           format_g17(gap) + "\n";
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "alpha_re,alpha_im,re,im,multiplicity,kind\n";
  for (const auto& row : rows) {
    const std::string a = format_g17(row.alpha.real()) + "," + format_g17(row.alpha.imag()) + ",";
    for (const auto& z : row.zeros)
      out += a + format_g17(z.lambda0.real()) + "," + format_g17(z.lambda0.imag()) + "," +
             std::to_string(z.multiplicity) + "," + to_string(z.kind) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << content;
  if (!os) throw Error("write failed for " + path);
}

}  // namespace resonwave

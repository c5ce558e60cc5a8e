#include "resonwave/config.hpp"
#include "resonwave/resonances.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "resonwave/errors.hpp"

namespace resonwave {

using nlohmann::json;

namespace {

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

cplx as_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {as_number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
  if (j.is_object() && j.contains("re"))
    return {as_number(j["re"], path + ".re"), j.contains("im") ? as_number(j["im"], path + ".im") : 0.0};
  throw ConfigError(path, "expected a complex number (number, [re, im] or {re, im})");
}

double number_or(const json& obj, const char* key, const std::string& path, double fallback) {
  const json* j = find(obj, key);
  return j ? as_number(*j, join(path, key)) : fallback;
}

double required_number(const json& obj, const char* key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) throw ConfigError(join(path, key), "missing required field");
  return as_number(*j, join(path, key));
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    if (j.is_number()) {
      const double v = j.get<double>();
      if (std::floor(v) == v) return static_cast<int>(v);
    }
    throw ConfigError(path, "expected an integer");
  }
  return j.get<int>();
}

CMatrix as_matrix(const json& j, const std::string& path) {
  if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number()) || j.is_object()) {
    CMatrix m(1, 1);
    m(0, 0) = as_complex(j, path);
    return m;
  }
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a matrix (list of rows)");
  const int n = static_cast<int>(j.size());
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) throw ConfigError(rp, "matrix must be square");
    for (int c = 0; c < n; ++c) m(r, c) = as_complex(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected a list");
  std::vector<double> v;
  for (std::size_t k = 0; k < j.size(); ++k) v.push_back(as_number(j[k], path + "[" + std::to_string(k) + "]"));
  return v;
}

void check_increasing(const std::vector<double>& b, const std::string& path) {
  for (std::size_t k = 1; k < b.size(); ++k)
    if (!(b[k] > b[k - 1])) throw ConfigError(path, "breakpoints not increasing");
}

PotentialSpec parse_potential(const json& j) {
  const std::string path = "potential";
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const json* kind = find(j, "kind");
  if (!kind || !kind->is_string()) throw ConfigError("potential.kind", "missing or not a string");
  const std::string k = kind->get<std::string>();
  try {
    if (k == "free") {
      const json* d = find(j, "dim");
      return PotentialSpec::free(d ? as_int(*d, "potential.dim") : 1);
    }
    if (k == "delta") {
      const json* a = find(j, "alpha");
      if (!a) throw ConfigError("potential.alpha", "missing required field");
      return PotentialSpec::delta(as_complex(*a, "potential.alpha"), number_or(j, "beta", path, 0.0));
    }
    if (k == "well") {
      std::vector<double> bp;
      if (const json* b = find(j, "breakpoints")) {
        bp = as_number_list(*b, "potential.breakpoints");
        if (bp.size() != 2) throw ConfigError("potential.breakpoints", "a well has exactly two breakpoints");
        check_increasing(bp, "potential.breakpoints");
      } else {
        const double a = number_or(j, "half_width", path, 1.0);
        if (!(a > 0)) throw ConfigError("potential.half_width", "must be positive");
        bp = {-a, a};
      }
      CMatrix v;
      if (const json* m = find(j, "matrix")) {
        v = as_matrix(*m, "potential.matrix");
      } else if (const json* a = find(j, "alpha")) {
        v = CMatrix(1, 1);
        v(0, 0) = as_complex(*a, "potential.alpha");
      } else {
        throw ConfigError("potential.alpha", "missing required field");
      }
      return PotentialSpec::piecewise(bp, {v});
    }
    if (k == "piecewise") {
      const json* b = find(j, "breakpoints");
      if (!b) throw ConfigError("potential.breakpoints", "missing required field");
      auto bp = as_number_list(*b, "potential.breakpoints");
      check_increasing(bp, "potential.breakpoints");
      const json* bl = find(j, "blocks");
      if (!bl || !bl->is_array()) throw ConfigError("potential.blocks", "missing or not a list");
      std::vector<CMatrix> blocks;
      for (std::size_t i = 0; i < bl->size(); ++i)
        blocks.push_back(as_matrix((*bl)[i], "potential.blocks[" + std::to_string(i) + "]"));
      return PotentialSpec::piecewise(bp, blocks);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError("potential.kind", "unknown kind '" + k + "'");
}

StateSpec parse_state(const json& j) {
  if (!j.is_object()) throw ConfigError("state", "expected an object");
  StateSpec s;
  const json* shape = find(j, "shape");
  if (!shape || !shape->is_string()) throw ConfigError("state.shape", "missing or not a string");
  s.shape = shape->get<std::string>();
  s.params.clear();
  if (const json* p = find(j, "params")) {
    if (!p->is_object()) throw ConfigError("state.params", "expected an object");
    for (auto it = p->begin(); it != p->end(); ++it) {
      const std::string kp = "state.params." + it.key();
      if (it.key() == "values") {
        for (std::size_t i = 0; i < it->size(); ++i)
          s.samples.push_back(as_complex((*it)[i], kp + "[" + std::to_string(i) + "]"));
      } else if (it.key() == "direction") {
        for (std::size_t i = 0; i < it->size(); ++i)
          s.direction.push_back(as_complex((*it)[i], kp + "[" + std::to_string(i) + "]"));
      } else {
        s.params[it.key()] = as_number(*it, kp);
      }
    }
  }
  return s;
}

json complex_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

json matrix_json(const CMatrix& m) {
  if (m.rows() == 1) return complex_json(m(0, 0));
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

bool same_potential(const PotentialSpec& a, const PotentialSpec& b) {
  if (a.kind != b.kind || a.dim != b.dim) return false;
  if (a.kind == PotentialKind::Delta) return a.alpha == b.alpha && a.beta == b.beta;
  if (a.kind == PotentialKind::Free) return true;
  if (a.breakpoints != b.breakpoints || a.blocks.size() != b.blocks.size()) return false;
  for (std::size_t k = 0; k < a.blocks.size(); ++k)
    if (a.blocks[k] != b.blocks[k]) return false;
  return true;
}

}  // namespace

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  auto same_contour = [](const ContourSpec& x, const ContourSpec& y) {
    return x.eps == y.eps && x.g0_level == y.g0_level && x.eta == y.eta && x.etatilde == y.etatilde &&
           x.im_truncation == y.im_truncation && x.quad_tol == y.quad_tol;
  };
  auto same_scan = [](const std::optional<ScanSpec>& x, const std::optional<ScanSpec>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->re_min == y->re_min && x->re_max == y->re_max && x->im_min == y->im_min && x->im_max == y->im_max;
  };
  auto same_sweep = [](const std::optional<SweepSpec>& x, const std::optional<SweepSpec>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->start == y->start && x->stop == y->stop && x->steps == y->steps;
  };
  return same_potential(a.potential, b.potential) && a.grid == b.grid && same_contour(a.contour, b.contour) &&
         a.state == b.state && a.window == b.window && same_scan(a.scan, b.scan) &&
         a.expansion.kind == b.expansion.kind && a.expansion.times == b.expansion.times &&
         a.expansion.n == b.expansion.n && same_sweep(a.sweep, b.sweep);
}

ProblemSpec load_problem(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");

  ProblemSpec p;
  const json* pot = find(root, "potential");
  if (!pot) throw ConfigError("potential", "missing required field");
  p.potential = parse_potential(*pot);

  const json* grid = find(root, "grid");
  if (!grid || !grid->is_object()) throw ConfigError("grid", "missing or not an object");
  p.grid.x_min = required_number(*grid, "x_min", "grid");
  p.grid.x_max = required_number(*grid, "x_max", "grid");
  {
    const json* n = find(*grid, "n_points");
    if (!n) throw ConfigError("grid.n_points", "missing required field");
    const int np = as_int(*n, "grid.n_points");
    if (np < 2) throw ConfigError("grid.n_points", "grid needs at least two points");
    p.grid.n_points = static_cast<std::size_t>(np);
  }
  if (!(p.grid.x_max > p.grid.x_min)) throw ConfigError("grid", "grid requires x_min < x_max");

  if (const json* c = find(root, "contour")) {
    if (!c->is_object()) throw ConfigError("contour", "expected an object");
    p.contour.eps = number_or(*c, "eps", "contour", p.contour.eps);
    p.contour.g0_level = number_or(*c, "g0_level", "contour", p.contour.g0_level);
    p.contour.eta = number_or(*c, "eta", "contour", p.contour.eta);
    p.contour.etatilde = number_or(*c, "etatilde", "contour", p.contour.etatilde);
    p.contour.im_truncation = number_or(*c, "im_truncation", "contour", p.contour.im_truncation);
    p.contour.quad_tol = number_or(*c, "quad_tol", "contour", p.contour.quad_tol);
  }
  try {
    p.contour.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("contour", e.what());
  }

  if (const json* s = find(root, "state")) {
    p.state = parse_state(*s);
  } else {
    p.state.shape = "indicator";
    p.state.params = {{"a", -1.0}, {"b", 1.0}};
  }
  try {
    (void)sample_state(p.state, p.grid, p.potential.dim);
  } catch (const InvalidArgument& e) {
    throw ConfigError("state", e.what());
  }

  if (const json* w = find(root, "window")) {
    if (!w->is_object()) throw ConfigError("window", "expected an object");
    const json* i = find(*w, "i");
    if (!i) throw ConfigError("window.i", "missing required field");
    p.window = as_int(*i, "window.i");
  }
  try {
    (void)cutoff_window(p.window, p.grid);
  } catch (const InvalidArgument& e) {
    throw ConfigError("window.i", e.what());
  }

  if (const json* s = find(root, "scan")) {
    if (!s->is_object()) throw ConfigError("scan", "expected an object");
    ScanSpec sc;
    sc.re_min = required_number(*s, "re_min", "scan");
    sc.re_max = required_number(*s, "re_max", "scan");
    sc.im_min = required_number(*s, "im_min", "scan");
    sc.im_max = required_number(*s, "im_max", "scan");
    if (!(sc.re_max > sc.re_min) || !(sc.im_max > sc.im_min)) throw ConfigError("scan", "empty box");
    p.scan = sc;
  }

  if (const json* e = find(root, "expansion")) {
    if (!e->is_object()) throw ConfigError("expansion", "expected an object");
    if (const json* k = find(*e, "kind")) {
      const std::string ks = k->is_string() ? k->get<std::string>() : "";
      if (ks == "cosine") p.expansion.kind = WaveKind::Cosine;
      else if (ks == "sine") p.expansion.kind = WaveKind::Sine;
      else throw ConfigError("expansion.kind", "expected \"cosine\" or \"sine\"");
    }
    if (const json* t = find(*e, "times")) {
      p.expansion.times = as_number_list(*t, "expansion.times");
      for (double v : p.expansion.times)
        if (v < 0) throw ConfigError("expansion.times", "times must be nonnegative");
    }
    if (const json* n = find(*e, "n")) {
      p.expansion.n = as_int(*n, "expansion.n");
      if (p.expansion.n < 1) throw ConfigError("expansion.n", "must be at least 1");
    }
  }

  if (const json* s = find(root, "sweep")) {
    if (!s->is_object()) throw ConfigError("sweep", "expected an object");
    SweepSpec sw;
    const json* a = find(*s, "alpha_start");
    const json* b = find(*s, "alpha_stop");
    if (!a) throw ConfigError("sweep.alpha_start", "missing required field");
    if (!b) throw ConfigError("sweep.alpha_stop", "missing required field");
    sw.start = as_complex(*a, "sweep.alpha_start");
    sw.stop = as_complex(*b, "sweep.alpha_stop");
    if (const json* n = find(*s, "steps")) sw.steps = as_int(*n, "sweep.steps");
    if (sw.steps < 2) throw ConfigError("sweep.steps", "need at least two steps");
    p.sweep = sw;
  }
  return p;
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_problem(ss.str());
}

std::string serialize_problem(const ProblemSpec& p) {
  json root;
  json pot;
  pot["kind"] = to_string(p.potential.kind);
  switch (p.potential.kind) {
    case PotentialKind::Free:
      pot["dim"] = p.potential.dim;
      break;
    case PotentialKind::Delta:
      pot["alpha"] = complex_json(p.potential.alpha);
      pot["beta"] = p.potential.beta;
      break;
    case PotentialKind::PiecewiseConstant: {
      pot["breakpoints"] = p.potential.breakpoints;
      json blocks = json::array();
      for (const auto& b : p.potential.blocks) {
        // 1x1 blocks of a scalar model are written as plain numbers; matrices as rows
        if (b.rows() == 1) blocks.push_back(complex_json(b(0, 0)));
        else blocks.push_back(matrix_json(b));
      }
      pot["blocks"] = blocks;
      break;
    }
  }
  root["potential"] = pot;
  root["grid"] = {{"x_min", p.grid.x_min}, {"x_max", p.grid.x_max}, {"n_points", p.grid.n_points}};
  root["contour"] = {{"eps", p.contour.eps},
                     {"g0_level", p.contour.g0_level},
                     {"eta", p.contour.eta},
                     {"etatilde", p.contour.etatilde},
                     {"im_truncation", p.contour.im_truncation},
                     {"quad_tol", p.contour.quad_tol}};
  json st;
  st["shape"] = p.state.shape;
  json params = json::object();
  for (const auto& [k, v] : p.state.params) params[k] = v;
  if (!p.state.samples.empty()) {
    json vals = json::array();
    for (auto z : p.state.samples) vals.push_back(complex_json(z));
    params["values"] = vals;
  }
  if (!p.state.direction.empty()) {
    json dir = json::array();
    for (auto z : p.state.direction) dir.push_back(complex_json(z));
    params["direction"] = dir;
  }
  st["params"] = params;
  root["state"] = st;
  root["window"] = {{"i", p.window}};
  if (p.scan) {
    root["scan"] = {{"re_min", p.scan->re_min}, {"re_max", p.scan->re_max},
                    {"im_min", p.scan->im_min}, {"im_max", p.scan->im_max}};
  }
  root["expansion"] = {{"kind", to_string(p.expansion.kind)}, {"times", p.expansion.times}, {"n", p.expansion.n}};
  if (p.sweep) {
    root["sweep"] = {{"alpha_start", complex_json(p.sweep->start)},
                     {"alpha_stop", complex_json(p.sweep->stop)},
                     {"steps", p.sweep->steps}};
  }
  return root.dump(2);
}

ScanSpec effective_scan(const ProblemSpec& p) {
  if (p.scan) return *p.scan;
  const ScanRegion r = default_scan_region(p.potential, p.contour);
  return {r.re_min, r.re_max, r.im_min, r.im_max};
}

}  // namespace resonwave

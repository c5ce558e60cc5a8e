#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "resonwave/config.hpp"
#include "resonwave/errors.hpp"
#include "resonwave/expansion.hpp"
#include "resonwave/numerics.hpp"
#include "resonwave/report_io.hpp"
#include "resonwave/resonances.hpp"
#include "resonwave/verify.hpp"

#ifndef RESONWAVE_VERSION_STRING
#define RESONWAVE_VERSION_STRING "unknown"
#endif

namespace resonwave::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string out_dir = ".";
  std::optional<double> tol;
  std::optional<int> threads;
};

// Collects written files and phase timings for manifest.json.
class Run {
 public:
  Run(const Options& o) : opts_(o), start_(Clock::now()) {}

  void write(const std::string& name, const std::string& content) {
    write_text_file((fs::path(opts_.out_dir) / name).string(), content);
    files_.push_back(name);
  }

  template <class F>
  auto timed(const std::string& phase, F&& body) {
    const auto t0 = Clock::now();
    auto r = body();
    timings_[phase] = seconds_since(t0);
    return r;
  }

  void finish(int exit_code) {
    files_.push_back("manifest.json");
    ordered_json m;
    m["command"] = opts_.command;
    m["config"] = opts_.config;
    m["out_dir"] = opts_.out_dir;
    m["overrides"] = {{"tol", opts_.tol ? ordered_json(*opts_.tol) : ordered_json(nullptr)},
                      {"threads", thread_count()}};
    m["version"] = RESONWAVE_VERSION_STRING;
    m["exit_code"] = exit_code;
    m["files"] = files_;
    timings_["total"] = seconds_since(start_);
    m["timings_s"] = timings_;
    write_text_file((fs::path(opts_.out_dir) / "manifest.json").string(), m.dump(2) + "\n");
  }

 private:
  using Clock = std::chrono::steady_clock;
  static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  const Options& opts_;
  Clock::time_point start_;
  std::vector<std::string> files_;
  ordered_json timings_ = ordered_json::object();
};

ScanRegion region_for(const ProblemSpec& p) {
  if (!p.scan) return default_scan_region(p.potential, p.contour);
  ScanRegion r;
  r.re_min = p.scan->re_min;
  r.re_max = p.scan->re_max;
  r.im_min = p.scan->im_min;
  r.im_max = p.scan->im_max;
  return r;
}

PotentialSpec with_coupling(const PotentialSpec& V, cplx a) {
  if (V.kind == PotentialKind::Delta) return PotentialSpec::delta(a, V.beta);
  if (V.is_single_block_scalar()) {
    PotentialSpec W = V;
    W.blocks[0](0, 0) = a;
    return W;
  }
  throw ConfigError("sweep", "coupling sweeps need a delta interaction or a single-block scalar well");
}

int cmd_resonances(const ProblemSpec& p, Run& run, std::ostream& out) {
  const ScanResult r = run.timed("scan", [&] { return scan(region_for(p), p.potential, p.contour); });
  run.write("resonances.csv", resonances_csv(r.resonances));
  run.write("resonances.json", resonances_json(r, p.potential));
  out << r.resonances.size() << " zeros (" << r.total_count << " counted, " << r.origin_excluded
      << " at origin, " << r.clipped << " clipped)\n";
  return kOk;
}

int cmd_expand(const ProblemSpec& p, Run& run, std::ostream& out) {
  const LocalizedState f = sample_state(p.state, p.grid, p.potential.dim);
  const CutoffWindow w = cutoff_window(p.window, window_grid(p.grid, p.window));
  ExpansionOptions o;
  if (p.scan) o.region = region_for(p);
  const ExpansionReport rep = run.timed("expand", [&] {
    return expand(p.expansion.kind, p.expansion.times, f, p.potential, p.contour, w, p.expansion.n, o);
  });
  run.write("expansion.json", expansion_json(rep));
  run.write("series.csv", series_csv(rep));
  out << rep.terms.size() << " residue terms, fitted decay rate " << rep.fitted_decay_rate << "\n";
  return kOk;
}

int cmd_verify(const ProblemSpec& p, Run& run, std::ostream& out) {
  const auto checks = run.timed("verify", [&] { return verify_problem(p); });
  ordered_json j = ordered_json::array();
  bool ok = true;
  for (const auto& c : checks) {
    const char* tag = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    out << tag << "  " << c.name;
    if (!c.skipped) out << "  value=" << c.value << " tol=" << c.tolerance;
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << "\n";
    ok = ok && c.passed;
    j.push_back({{"name", c.name},
                 {"status", tag},
                 {"value", c.value},
                 {"tolerance", c.tolerance},
                 {"detail", c.detail}});
  }
  run.write("verify.json", j.dump(2) + "\n");
  return ok ? kOk : kVerifyFailed;
}

int cmd_scan_alpha(const ProblemSpec& p, Run& run, std::ostream& out) {
  if (!p.sweep) throw ConfigError("sweep", "scan-alpha needs a sweep section");
  const SweepSpec& s = *p.sweep;
  std::vector<SweepRow> rows(static_cast<std::size_t>(s.steps));
  run.timed("sweep", [&] {
    for (int k = 0; k < s.steps; ++k) {
      const cplx a = s.start + (s.stop - s.start) * (static_cast<double>(k) / (s.steps - 1));
      const PotentialSpec V = with_coupling(p.potential, a);
      const ScanRegion region = p.scan ? region_for(p) : default_scan_region(V, p.contour);
      rows[k] = {a, scan(region, V, p.contour).resonances};
    }
    return 0;
  });
  run.write("sweep.csv", sweep_csv(rows));
  out << s.steps << " sweep steps\n";
  return kOk;
}

void error_json(std::ostream& err, const char* kind, const std::string& msg, int code,
                const std::string& path = {}) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = msg;
  if (!path.empty()) j["path"] = path;
  j["exit_code"] = code;
  err << j.dump() << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Resonance expansions of 1-D wave equations", "resonwave"};
  app.require_subcommand(1, 1);
  for (const char* name : {"resonances", "expand", "verify", "scan-alpha"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", o.config, "problem JSON")->required();
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--tol", o.tol, "override contour.quad_tol")->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "worker threads (fallback: RESONWAVE_THREADS)")
        ->check(CLI::Range(1, 1024));
  }

  std::vector<std::string> argv_store{"resonwave"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what(), kConfigError);
    return kConfigError;
  }
  o.command = app.get_subcommands().front()->get_name();
  if (o.threads) set_thread_count(*o.threads);

  try {
    ProblemSpec p = load_problem_file(o.config);
    if (o.tol) p.contour.quad_tol = *o.tol;
    fs::create_directories(o.out_dir);
    Run run(o);
    int code = kOk;
    if (o.command == "resonances") code = cmd_resonances(p, run, out);
    else if (o.command == "expand") code = cmd_expand(p, run, out);
    else if (o.command == "verify") code = cmd_verify(p, run, out);
    else code = cmd_scan_alpha(p, run, out);
    run.finish(code);
    return code;
  } catch (const ConfigError& e) {
    error_json(err, "config", e.what(), kConfigError, e.path());
    return kConfigError;
  } catch (const InvalidArgument& e) {
    error_json(err, "invalid_argument", e.what(), kConfigError);
    return kConfigError;
  } catch (const NumericalError& e) {
    error_json(err, "numerical", e.what(), kNumericalError);
    return kNumericalError;
  } catch (const std::exception& e) {
    error_json(err, "internal", e.what(), kNumericalError);
    return kNumericalError;
  }
}

int run_command(const std::vector<std::string>& args) { return run_command(args, std::cout, std::cerr); }

}  // namespace resonwave::cli

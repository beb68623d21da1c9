#include "spinodal/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spinodal {

ConfigError::ConfigError(int line, std::string key, const std::string& msg)
    : DataError("line " + std::to_string(line) + ": " + (key.empty() ? "" : key + ": ") + msg),
      line_(line),
      key_(std::move(key)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Field {
  int line;
  std::string key;
  std::string_view value;

  double real() const {
    double v = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
      throw ConfigError(line, key, "expected a number, got '" + std::string(value) + "'");
    return v;
  }
  double positive() const {
    const double v = real();
    if (!(v > 0.0)) throw ConfigError(line, key, "must be positive");
    return v;
  }
  std::int64_t integer() const {
    std::int64_t v = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(line, key, "expected an integer, got '" + std::string(value) + "'");
    return v;
  }
  std::uint64_t unsigned_integer() const {
    std::uint64_t v = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(line, key, "expected a non-negative integer, got '" + std::string(value) + "'");
    return v;
  }
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void assign(RunConfig& c, const std::string& section, const Field& f) {
  const std::string& k = f.key;
  if (section == "grid") {
    if (k == "grid.nx" || k == "grid.ny") {
      const auto v = f.integer();
      if (v < 4 || v > 1 << 16) throw ConfigError(f.line, k, "must be between 4 and 65536");
      (k == "grid.nx" ? c.grid.nx : c.grid.ny) = int(v);
    } else if (k == "grid.h") {
      c.grid.h = f.positive();
    } else {
      throw ConfigError(f.line, k, "unknown key");
    }
  } else if (section == "init") {
    if (k == "init.mean") {
      const double v = f.real();
      if (v < 0.0 || v > 1.0) throw ConfigError(f.line, k, "must lie in [0, 1]");
      c.init.mean = v;
    } else if (k == "init.variance") {
      const double v = f.real();
      if (v < 0.0) throw ConfigError(f.line, k, "must be non-negative");
      c.init.variance = v;
    } else if (k == "init.seed") {
      c.init.seed = f.unsigned_integer();
    } else {
      throw ConfigError(f.line, k, "unknown key");
    }
  } else if (section == "solver") {
    if (k == "solver.D") {
      c.solver.D = f.positive();
    } else if (k == "solver.kappa") {
      c.solver.kappa = f.positive();
    } else if (k == "solver.dt") {
      c.solver.dt = f.value == "auto" ? 0.0 : f.positive();
    } else if (k == "solver.n_steps") {
      const auto v = f.integer();
      if (v < 0) throw ConfigError(f.line, k, "must be non-negative");
      c.solver.n_steps = v;
    } else if (k == "solver.diag_stride") {
      const auto v = f.integer();
      if (v < 1) throw ConfigError(f.line, k, "must be at least 1");
      c.solver.diag_stride = int(v);
    } else if (k == "solver.snapshot_times") {
      c.solver.snapshot_times.clear();
      std::string_view rest = f.value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const Field item{f.line, k, trim(rest.substr(0, comma))};
        const double t = item.real();
        if (t < 0.0) throw ConfigError(f.line, k, "times must be non-negative");
        if (!c.solver.snapshot_times.empty() && t <= c.solver.snapshot_times.back())
          throw ConfigError(f.line, k, "times must be strictly ascending");
        c.solver.snapshot_times.push_back(t);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
    } else {
      throw ConfigError(f.line, k, "unknown key");
    }
  } else if (section == "analysis") {
    if (k == "analysis.threshold") {
      c.analysis.threshold = f.real();
    } else if (k == "analysis.contrast") {
      c.analysis.contrast = f.positive();
    } else {
      throw ConfigError(f.line, k, "unknown key");
    }
  } else if (section == "paths") {
    if (k == "paths.out") {
      if (f.value.empty()) throw ConfigError(f.line, k, "must not be empty");
      c.out_dir = std::string(f.value);
    } else {
      throw ConfigError(f.line, k, "unknown key");
    }
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto hash = line.find_first_of("#;");
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "", "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "grid" && section != "init" && section != "solver" && section != "analysis" &&
          section != "paths")
        throw ConfigError(line_no, section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(line_no, "", "missing key");
    if (section.empty()) throw ConfigError(line_no, key, "key outside of any section");
    assign(cfg, section, Field{line_no, section + "." + key, trim(line.substr(eq + 1))});
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[grid]\n"
    << "nx = " << c.grid.nx << "\n"
    << "ny = " << c.grid.ny << "\n"
    << "h = " << fmt_double(c.grid.h) << "\n\n"
    << "[init]\n"
    << "mean = " << fmt_double(c.init.mean) << "\n"
    << "variance = " << fmt_double(c.init.variance) << "\n"
    << "seed = " << c.init.seed << "\n\n"
    << "[solver]\n"
    << "D = " << fmt_double(c.solver.D) << "\n"
    << "kappa = " << fmt_double(c.solver.kappa) << "\n"
    << "dt = " << (c.solver.dt > 0.0 ? fmt_double(c.solver.dt) : std::string("auto")) << "\n"
    << "n_steps = " << c.solver.n_steps << "\n"
    << "snapshot_times = ";
  for (std::size_t i = 0; i < c.solver.snapshot_times.size(); ++i)
    o << (i ? ", " : "") << fmt_double(c.solver.snapshot_times[i]);
  o << "\n"
    << "diag_stride = " << c.solver.diag_stride << "\n\n"
    << "[analysis]\n"
    << "threshold = " << fmt_double(c.analysis.threshold) << "\n"
    << "contrast = " << fmt_double(c.analysis.contrast) << "\n\n"
    << "[paths]\n"
    << "out = " << c.out_dir << "\n";
  return o.str();
}

}  // namespace spinodal

#include "spinodal/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spinodal/analysis.hpp"
#include "spinodal/errors.hpp"

namespace spinodal {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto c = line.find(',');
    out.push_back(trim(line.substr(0, c)));
    if (c == std::string_view::npos) break;
    line = line.substr(c + 1);
  }
  return out;
}

bool parse_double(std::string_view s, double& v) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  return ec == std::errc() && ptr == end && !s.empty();
}

std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_field_csv(std::ostream& out, const ScalarField2D& f) {
  out << f.nx() << ',' << f.ny() << ',' << format_double(f.h()) << '\n';
  std::string line;
  for (int j = 0; j < f.ny(); ++j) {
    line.clear();
    for (int i = 0; i < f.nx(); ++i) {
      if (i) line += ',';
      line += format_double(f(i, j));
    }
    line += '\n';
    out << line;
  }
}

void write_field_csv(const std::filesystem::path& path, const ScalarField2D& f) {
  auto out = open_out(path, true);
  write_field_csv(out, f);
  if (!out) throw DataError("failed writing " + path.string());
}

ScalarField2D read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("field CSV is empty");
  const auto head = split(line);
  double nx = 0, ny = 0, h = 0;
  if (head.size() != 3 || !parse_double(head[0], nx) || !parse_double(head[1], ny) ||
      !parse_double(head[2], h))
    throw DataError("field CSV header must be 'nx,ny,h'");
  const GridSpec spec{int(nx), int(ny), h};
  if (double(spec.nx) != nx || double(spec.ny) != ny) throw DataError("field CSV grid size must be integral");
  ScalarField2D f(spec);
  for (int j = 0; j < spec.ny; ++j) {
    if (!std::getline(in, line)) throw DataError("field CSV has fewer than ny rows");
    const auto cells = split(line);
    if (int(cells.size()) != spec.nx)
      throw DataError("field CSV row " + std::to_string(j + 2) + " does not have nx values");
    for (int i = 0; i < spec.nx; ++i)
      if (!parse_double(cells[std::size_t(i)], f(i, j)) || !std::isfinite(f(i, j)))
        throw DataError("field CSV row " + std::to_string(j + 2) + ": bad value '" +
                        std::string(cells[std::size_t(i)]) + "'");
  }
  return f;
}

ScalarField2D read_field_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_field_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string snapshot_filename(double time) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_t%g.csv", time);
  return buf;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<Diagnostics>& d) {
  auto out = open_out(path, true);
  out << "step,time,mass,free_energy,min,max\n";
  for (const auto& r : d)
    out << r.step << ',' << format_double(r.time) << ',' << format_double(r.mass) << ','
        << format_double(r.free_energy) << ',' << format_double(r.min) << ','
        << format_double(r.max) << '\n';
}

std::vector<std::uint8_t> ppm_bytes(const ScalarField2D& f) {
  const std::string header =
      "P6\n" + std::to_string(f.nx()) + " " + std::to_string(f.ny()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + std::size_t(f.spec().cells()) * 3);
  auto level = [](double v) { return std::uint8_t(std::floor(255.0 * v + 0.5)); };
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      const double x = std::clamp(f(i, j), 0.0, 1.0);
      out.push_back(level(1.0 - x));
      out.push_back(level(x));
      out.push_back(0);
    }
  return out;
}

void render_ppm(const ScalarField2D& f, const std::filesystem::path& path) {
  const auto bytes = ppm_bytes(f);
  auto out = open_out(path, true);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::size_t columns) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    std::vector<double> row(cells.size());
    bool ok = cells.size() == columns;
    for (std::size_t k = 0; ok && k < cells.size(); ++k) ok = parse_double(cells[k], row[k]);
    if (!ok) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw DataError(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns) + " numeric columns");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": no data rows");
  return rows;
}

std::vector<TransportRecord> read_transport_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<TransportRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    TransportRecord r;
    bool ok = cells.size() == 5 && parse_double(cells[1], r.d) && parse_double(cells[2], r.r_s) &&
              parse_double(cells[3], r.t_c) && parse_double(cells[4], r.hall_slope);
    if (!ok) {
      if (line_no == 1) continue;
      throw DataError(path.string() + ": line " + std::to_string(line_no) +
                      ": expected label,d_m,Rs_ohm_sq,Tc_K,hall_slope_ohm_per_T");
    }
    r.label = std::string(cells[0]);
    out.push_back(std::move(r));
  }
  if (out.empty()) throw DataError(path.string() + ": no data rows");
  return out;
}

void write_transport_report(std::ostream& out, const std::vector<TransportReport>& rows) {
  out << "label,d_nm,Tc_K,Rs_ohm,n_e_1e28_m3,Lk_pH_sq,l_nm,kF_l,kF_1_per_m,vF_m_s,tau_s,"
         "specific_L_nH_nm\n";
  for (const auto& r : rows)
    out << r.record.label << ',' << format_double(r.record.d * 1e9) << ','
        << format_double(r.record.t_c) << ',' << format_double(r.record.r_s) << ','
        << format_double(r.fe.n_e / 1e28) << ',' << format_double(r.l_k * 1e12) << ','
        << format_double(r.fe.l * 1e9) << ',' << format_double(r.fe.k_f_l) << ','
        << format_double(r.fe.k_f) << ',' << format_double(r.fe.v_f) << ','
        << format_double(r.fe.tau) << ',' << format_double(r.specific_l * 1e18) << '\n';
}

std::vector<std::pair<double, double>> read_pairs_csv(const std::filesystem::path& path) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : read_numeric_csv(path, 2)) out.emplace_back(r[0], r[1]);
  return out;
}

std::vector<DataPoint> read_hc2_csv(const std::filesystem::path& path) {
  std::vector<DataPoint> out;
  for (const auto& r : read_numeric_csv(path, 2)) out.push_back({r[0], r[1], 1.0});
  return out;
}

std::vector<DataPoint> read_s21_csv(const std::filesystem::path& path) {
  std::vector<DataPoint> out;
  for (const auto& r : read_numeric_csv(path, 3)) out.push_back({r[0], {r[1], r[2]}, 1.0});
  return out;
}

void write_s21_csv(const std::filesystem::path& path, const std::vector<DataPoint>& s21) {
  auto out = open_out(path, true);
  out << "f_Hz,re_S21,im_S21\n";
  for (const auto& d : s21)
    out << format_double(d.x) << ',' << format_double(d.y.real()) << ','
        << format_double(d.y.imag()) << '\n';
}

void write_fit_table(std::ostream& out, const FitModel& model, const FitResult& r) {
  out << "model: " << model.name << (r.converged ? "" : "  (NOT CONVERGED)") << '\n';
  out << std::left << std::setw(12) << "parameter" << std::setw(8) << "unit" << std::setw(24)
      << "value" << "std_error\n";
  for (std::size_t k = 0; k < model.size(); ++k)
    out << std::setw(12) << model.params[k].name << std::setw(8) << model.params[k].unit
        << std::setw(24) << format_double(r.params[k])
        << (model.params[k].fixed ? std::string("fixed") : format_double(r.std_errors[k])) << '\n';
  out << "R^2 = " << format_double(r.r2) << "  SS_res = " << format_double(r.ss_res)
      << "  iterations = " << r.iterations << "  (" << r.diagnostics << ")\n";
}

void write_fit_csv(const std::filesystem::path& path, const FitModel& model, const FitResult& r) {
  auto out = open_out(path, true);
  out << "name,unit,value,std_error,r2,ss_res,converged\n";
  for (std::size_t k = 0; k < model.size(); ++k)
    out << model.params[k].name << ',' << model.params[k].unit << ','
        << format_double(r.params[k]) << ',' << format_double(r.std_errors[k]) << ','
        << format_double(r.r2) << ',' << format_double(r.ss_res) << ',' << (r.converged ? 1 : 0)
        << '\n';
}

AnalysisRow analyze_snapshot(const ScalarField2D& f, double time, double threshold,
                             double contrast) {
  AnalysisRow row{};
  row.time = time;
  row.char_length = characteristic_length(f);
  const PhaseMap phases = threshold_phases(f, threshold);
  row.ti_fraction = double(std::count(phases.labels.begin(), phases.labels.end(), Phase::TiRich)) /
                    double(phases.labels.size());
  const ClusterLabeling lab = label_clusters(phases, Phase::TiRich);
  row.n_clusters = lab.count();
  row.largest_cluster = lab.largest();
  row.spans_x = spans(lab, Axis::X);
  row.spans_y = spans(lab, Axis::Y);
  const ConductivityMap sigma = two_phase_conductivity(phases, 1.0, contrast);
  row.r_eff_x = effective_sheet_resistance(sigma, Axis::X).r_square;
  row.r_eff_y = effective_sheet_resistance(sigma, Axis::Y).r_square;
  return row;
}

void write_analysis_csv(const std::filesystem::path& path, const std::vector<AnalysisRow>& rows) {
  auto out = open_out(path, true);
  out << "time,char_length,ti_fraction,n_clusters,largest_cluster,spans_x,spans_y,R_eff_x,R_eff_y\n";
  for (const auto& r : rows)
    out << format_double(r.time) << ',' << format_double(r.char_length) << ','
        << format_double(r.ti_fraction) << ',' << r.n_clusters << ',' << r.largest_cluster << ','
        << int(r.spans_x) << ',' << int(r.spans_y) << ',' << format_double(r.r_eff_x) << ','
        << format_double(r.r_eff_y) << '\n';
}

}  // namespace spinodal

#include "qpair/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "qpair/errors.hpp"
#include "qpair/observables.hpp"

namespace qpair {

namespace {

constexpr const char* kColumns =
    "t,concurrence,purity,fidelity_ref,gamma_a_abs,gamma_a_arg,"
    "gamma_b_abs,gamma_b_arg,lambda_plus_abs,lambda_minus_abs";

std::string chars_to_string(const char* first, const char* last) {
  return std::string(first, static_cast<std::size_t>(last - first));
}

// %g-style trimming for axis tick labels; values stay human readable even
// when the tick arithmetic leaves 1-ulp residue.
std::string format_tick(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  return chars_to_string(buf, res.ptr);
}

double parse_field(const std::string& field, const std::string& context) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw config_error("malformed numeric field '" + field + "' in " + context);
  return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      break;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

struct Extent {
  double lo = 0.0, hi = 1.0;
};

// Round the raw span outward to {1,2,5} x 10^k tick steps.
double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.0)
    nice = 1.0;
  else if (frac <= 2.0)
    nice = 2.0;
  else if (frac <= 5.0)
    nice = 5.0;
  return nice * mag;
}

struct Frame {
  double x0, y0, x1, y1;  // pixel corners of the plot area (y grows down)
  Extent xe, ye;

  double px(double x) const {
    return x0 + (x - xe.lo) / (xe.hi - xe.lo) * (x1 - x0);
  }
  double py(double y) const {
    return y1 - (y - ye.lo) / (ye.hi - ye.lo) * (y1 - y0);
  }
};

void emit_axes(std::ostringstream& svg, const Frame& f, bool log_ticks,
               const std::string& x_label, const std::string& y_label) {
  svg << "<rect x=\"" << format_fixed(f.x0, 1) << "\" y=\"" << format_fixed(f.y0, 1)
      << "\" width=\"" << format_fixed(f.x1 - f.x0, 1) << "\" height=\""
      << format_fixed(f.y1 - f.y0, 1)
      << "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\"/>\n";

  const auto tick_text = [&](double value) {
    if (!log_ticks) return format_tick(value);
    std::ostringstream label;
    label << "1e" << static_cast<long long>(std::llround(value));
    return label.str();
  };

  const auto emit_x_tick = [&](double value) {
    const double x = f.px(value);
    svg << "<line x1=\"" << format_fixed(x, 1) << "\" y1=\"" << format_fixed(f.y1, 1)
        << "\" x2=\"" << format_fixed(x, 1) << "\" y2=\"" << format_fixed(f.y1 + 5, 1)
        << "\" stroke=\"#404040\" stroke-width=\"1\"/>\n"
        << "<line x1=\"" << format_fixed(x, 1) << "\" y1=\"" << format_fixed(f.y0, 1)
        << "\" x2=\"" << format_fixed(x, 1) << "\" y2=\"" << format_fixed(f.y1, 1)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"0.5\"/>\n"
        << "<text x=\"" << format_fixed(x, 1) << "\" y=\"" << format_fixed(f.y1 + 18, 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#202020\" "
           "text-anchor=\"middle\">"
        << tick_text(value) << "</text>\n";
  };
  const auto emit_y_tick = [&](double value) {
    const double y = f.py(value);
    svg << "<line x1=\"" << format_fixed(f.x0 - 5, 1) << "\" y1=\"" << format_fixed(y, 1)
        << "\" x2=\"" << format_fixed(f.x0, 1) << "\" y2=\"" << format_fixed(y, 1)
        << "\" stroke=\"#404040\" stroke-width=\"1\"/>\n"
        << "<line x1=\"" << format_fixed(f.x0, 1) << "\" y1=\"" << format_fixed(y, 1)
        << "\" x2=\"" << format_fixed(f.x1, 1) << "\" y2=\"" << format_fixed(y, 1)
        << "\" stroke=\"#e0e0e0\" stroke-width=\"0.5\"/>\n"
        << "<text x=\"" << format_fixed(f.x0 - 8, 1) << "\" y=\"" << format_fixed(y + 4, 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#202020\" "
           "text-anchor=\"end\">"
        << tick_text(value) << "</text>\n";
  };

  if (log_ticks) {
    for (double v = std::ceil(f.xe.lo - 1e-9); v <= f.xe.hi + 1e-9; v += 1.0)
      emit_x_tick(v);
    for (double v = std::ceil(f.ye.lo - 1e-9); v <= f.ye.hi + 1e-9; v += 1.0)
      emit_y_tick(v);
  } else {
    const double xstep = nice_step(f.xe.hi - f.xe.lo, 6);
    const long long x_first = static_cast<long long>(std::ceil(f.xe.lo / xstep - 1e-9));
    for (long long k = x_first; k * xstep <= f.xe.hi + 1e-9 * xstep; ++k)
      emit_x_tick(static_cast<double>(k) * xstep);
    const double ystep = nice_step(f.ye.hi - f.ye.lo, 5);
    const long long y_first = static_cast<long long>(std::ceil(f.ye.lo / ystep - 1e-9));
    for (long long k = y_first; k * ystep <= f.ye.hi + 1e-9 * ystep; ++k)
      emit_y_tick(static_cast<double>(k) * ystep);
  }

  svg << "<text x=\"" << format_fixed((f.x0 + f.x1) / 2, 1) << "\" y=\""
      << format_fixed(f.y1 + 38, 1)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#202020\" "
         "text-anchor=\"middle\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << format_fixed((f.y0 + f.y1) / 2, 1)
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#202020\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << format_fixed((f.y0 + f.y1) / 2, 1) << ")\">" << y_label << "</text>\n";
}

void emit_series(std::ostringstream& svg, const Frame& f,
                 const std::vector<std::pair<double, double>>& points,
                 const std::string& color) {
  if (points.empty()) return;
  svg << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (const auto& [x, y] : points) {
    if (!first) svg << ' ';
    first = false;
    svg << format_fixed(f.px(x), 2) << ',' << format_fixed(f.py(y), 2);
  }
  svg << "\"/>\n";
}

void emit_legend(std::ostringstream& svg, double x, double y,
                 const std::vector<std::pair<std::string, std::string>>& entries) {
  double row = y;
  for (const auto& [label, color] : entries) {
    svg << "<line x1=\"" << format_fixed(x, 1) << "\" y1=\"" << format_fixed(row - 4, 1)
        << "\" x2=\"" << format_fixed(x + 24, 1) << "\" y2=\""
        << format_fixed(row - 4, 1) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << format_fixed(x + 30, 1) << "\" y=\"" << format_fixed(row, 1)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#202020\">" << label
        << "</text>\n";
    row += 20.0;
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return chars_to_string(buf, res.ptr);
}

std::string format_fixed(double x, int precision) {
  char buf[64];
  auto res =
      std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, precision);
  return chars_to_string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[hash & 0xf];
    hash >>= 4;
  }
  return out;
}

std::string provenance_block(const ProvenanceHeader& header,
                             const std::string& columns) {
  std::ostringstream out;
  out << "# qpairsim " << header.tool_version << "\n"
      << "# scenario: " << header.scenario << "\n"
      << "# engine: " << header.engine << "\n"
      << "# config-hash: " << header.config_hash << "\n"
      << "# seed: " << header.seed << "\n"
      << "# self-check: " << (header.self_check ? "on" : "off") << "\n"
      << "# columns: " << columns << "\n";
  return out.str();
}

TrajectoryRecord make_record(double t, double omega, const DensityMatrix& rho,
                             const DensityMatrix& reference) {
  TrajectoryRecord rec;
  rec.t = t;
  rec.concurrence = concurrence(rho);
  rec.purity = purity(rho);
  rec.fidelity_ref = fidelity(rho, reference);
  const Complex frame = std::exp(Complex(0.0, -2.0 * omega * t));
  const Complex gamma_a = 4.0 * rho(0, 2) * frame;
  const Complex gamma_b = 4.0 * rho(0, 1) * frame;
  rec.gamma_a_abs = std::abs(gamma_a);
  rec.gamma_a_arg = std::arg(gamma_a);
  rec.gamma_b_abs = std::abs(gamma_b);
  rec.gamma_b_arg = std::arg(gamma_b);
  rec.lambda_plus_abs = std::abs(4.0 * rho(0, 3));
  rec.lambda_minus_abs = std::abs(4.0 * rho(1, 2));
  return rec;
}

std::string trajectory_csv(const Trajectory& trajectory) {
  std::ostringstream out;
  out << provenance_block(trajectory.header, kColumns);
  out << kColumns << "\n";
  for (const TrajectoryRecord& r : trajectory.records) {
    out << format_double(r.t) << ',' << format_double(r.concurrence) << ','
        << format_double(r.purity) << ',' << format_double(r.fidelity_ref) << ','
        << format_double(r.gamma_a_abs) << ',' << format_double(r.gamma_a_arg) << ','
        << format_double(r.gamma_b_abs) << ',' << format_double(r.gamma_b_arg) << ','
        << format_double(r.lambda_plus_abs) << ',' << format_double(r.lambda_minus_abs)
        << "\n";
  }
  return out.str();
}

Trajectory parse_trajectory_csv(const std::string& text) {
  Trajectory trajectory;
  std::istringstream in(text);
  std::string line;
  bool saw_columns = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = line.size() > 1 ? line.substr(2) : "";
      const std::size_t colon = body.find(": ");
      if (body.rfind("qpairsim ", 0) == 0) {
        trajectory.header.tool_version = body.substr(9);
      } else if (colon != std::string::npos) {
        const std::string key = body.substr(0, colon);
        const std::string value = body.substr(colon + 2);
        if (key == "scenario")
          trajectory.header.scenario = value;
        else if (key == "engine")
          trajectory.header.engine = value;
        else if (key == "config-hash")
          trajectory.header.config_hash = value;
        else if (key == "seed")
          trajectory.header.seed = static_cast<std::uint64_t>(
              std::strtoull(value.c_str(), nullptr, 10));
        else if (key == "self-check")
          trajectory.header.self_check = (value == "on");
      }
      continue;
    }
    if (!saw_columns) {
      if (line != kColumns)
        throw config_error("unrecognized trajectory CSV column header");
      saw_columns = true;
      continue;
    }
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 10)
      throw config_error("trajectory CSV row " + std::to_string(line_no)
                         + " does not have 10 fields");
    const std::string context = "trajectory CSV row " + std::to_string(line_no);
    TrajectoryRecord r;
    r.t = parse_field(fields[0], context);
    r.concurrence = parse_field(fields[1], context);
    r.purity = parse_field(fields[2], context);
    r.fidelity_ref = parse_field(fields[3], context);
    r.gamma_a_abs = parse_field(fields[4], context);
    r.gamma_a_arg = parse_field(fields[5], context);
    r.gamma_b_abs = parse_field(fields[6], context);
    r.gamma_b_arg = parse_field(fields[7], context);
    r.lambda_plus_abs = parse_field(fields[8], context);
    r.lambda_minus_abs = parse_field(fields[9], context);
    trajectory.records.push_back(r);
  }
  if (!saw_columns) throw config_error("trajectory CSV has no column header");
  return trajectory;
}

std::string trajectory_svg(const Trajectory& trajectory, const PlotOptions& options) {
  const double width = 860.0, height = 520.0;
  Frame f{70.0, 50.0, 640.0, 470.0, {}, {}};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"520\" "
         "viewBox=\"0 0 860 520\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << format_fixed(width, 0) << "\" height=\""
      << format_fixed(height, 0) << "\" fill=\"#ffffff\"/>\n";

  std::string title = options.title;
  if (title.empty()) {
    title = trajectory.header.scenario;
    if (!trajectory.header.engine.empty()) title += " (" + trajectory.header.engine + ")";
  }
  svg << "<text x=\"" << format_fixed((f.x0 + f.x1) / 2, 1)
      << "\" y=\"28\" font-family=\"sans-serif\" font-size=\"15\" fill=\"#202020\" "
         "text-anchor=\"middle\">"
      << title << "</text>\n";

  if (options.log_log) {
    std::vector<std::pair<double, double>> deficit;
    for (const TrajectoryRecord& r : trajectory.records) {
      const double d = 1.0 - r.purity;
      if (r.t > 0.0 && d > 0.0)
        deficit.push_back({std::log10(r.t), std::log10(d)});
    }
    if (deficit.empty()) {
      svg << "<text x=\"" << format_fixed((f.x0 + f.x1) / 2, 1) << "\" y=\""
          << format_fixed((f.y0 + f.y1) / 2, 1)
          << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"#202020\" "
             "text-anchor=\"middle\">no positive purity deficit to plot</text>\n"
          << "</svg>\n";
      return svg.str();
    }
    f.xe = {std::floor(deficit.front().first), std::ceil(deficit.back().first)};
    double ylo = deficit.front().second, yhi = deficit.front().second;
    for (const auto& [x, y] : deficit) {
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
    f.ye = {std::floor(ylo), std::ceil(yhi)};
    if (f.xe.hi <= f.xe.lo) f.xe.hi = f.xe.lo + 1.0;
    if (f.ye.hi <= f.ye.lo) f.ye.hi = f.ye.lo + 1.0;
    emit_axes(svg, f, true, "log10 t", "log10 (1 - purity)");
    emit_series(svg, f, deficit, "#2ca02c");
    emit_legend(svg, 660.0, 60.0, {{"1 - purity", "#2ca02c"}});
  } else {
    std::vector<std::pair<double, double>> conc, pur;
    for (const TrajectoryRecord& r : trajectory.records) {
      conc.push_back({r.t, r.concurrence});
      pur.push_back({r.t, r.purity});
    }
    double tlo = 0.0, thi = 1.0;
    if (!conc.empty()) {
      tlo = conc.front().first;
      thi = conc.back().first;
    }
    if (thi <= tlo) thi = tlo + 1.0;
    f.xe = {tlo, thi};
    f.ye = {0.0, 1.05};
    emit_axes(svg, f, false, "t", "value");
    emit_series(svg, f, conc, "#1f77b4");
    emit_series(svg, f, pur, "#d62728");
    emit_legend(svg, 660.0, 60.0,
                {{"concurrence", "#1f77b4"}, {"purity", "#d62728"}});
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec)
      throw integrity_error("cannot create directory " + p.parent_path().string()
                            + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw integrity_error("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw integrity_error("failed writing " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace qpair

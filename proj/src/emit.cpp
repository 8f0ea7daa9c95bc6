#include "iwave/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "iwave/error.hpp"
#include "iwave/spectral.hpp"

namespace iwave {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // snprintf follows the C locale; normalise a ',' radix just in case.
  for (char* c = buf; *c; ++c) {
    if (*c == ',') *c = '.';
  }
  return buf;
}

void write_rate_csv(std::ostream& out, const RateReport& r) {
  out << r.axis_name << ",error\n";
  for (std::size_t i = 0; i < r.axis.size(); ++i) {
    out << format_number(r.axis[i]) << ',' << format_number(r.errors[i]) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t, int field_count) {
  out << "time";
  for (int f = 0; f < field_count; ++f) out << ",mass_" << f;
  out << ",momentum";
  for (int f = 0; f < field_count; ++f) out << ",l2_" << f;
  out << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Observables& o = t.observables[i];
    out << format_number(t.times[i]);
    for (double m : o.mass) out << ',' << format_number(m);
    out << ',' << format_number(o.momentum);
    for (double l : o.l2) out << ',' << format_number(l);
    out << '\n';
  }
}

void write_state_csv(std::ostream& out, const State& s) {
  out << 'x';
  for (std::size_t f = 0; f < s.fields.size(); ++f) out << ",field_" << f;
  out << '\n';
  const Grid& g = s.grid();
  for (int j = 0; j < g.size(); ++j) {
    out << format_number(g.point(j));
    for (const Field& f : s.fields) out << ',' << format_number(f[j]);
    out << '\n';
  }
}

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

json rate_json(const RateReport& r, const ExperimentConfig& cfg) {
  json doc;
  doc["config"] = to_json(cfg);
  doc["axis_name"] = r.axis_name;
  doc["error_name"] = r.error_name;
  doc["axis"] = numbers(r.axis);
  doc["errors"] = numbers(r.errors);
  doc["slope"] = number(r.fit.slope);
  doc["intercept"] = number(r.fit.intercept);
  doc["r2"] = number(r.fit.r2);
  doc["predicted_exponent"] = r.predicted_exponent;
  doc["tolerance"] = r.tolerance;
  doc["pass"] = r.pass;
  return doc;
}

json simulation_json(const SimulationResult& r, const ExperimentConfig& cfg) {
  json doc;
  doc["config"] = to_json(cfg);
  doc["model"] = std::string(model_name(r.model));
  const Trajectory& t = r.trajectory;
  doc["records"] = t.size();
  if (t.size() > 0) {
    const Observables& first = t.observables.front();
    const Observables& last = t.observables.back();
    doc["final_time"] = t.times.back();
    json drift = json::array();
    for (std::size_t f = 0; f < first.mass.size(); ++f) drift.push_back(number(last.mass[f] - first.mass[f]));
    doc["mass_drift"] = drift;
    doc["momentum_drift"] = number(last.momentum - first.momentum);
    doc["final_l2"] = numbers(last.l2);
  }
  doc["pass"] = true;
  return doc;
}

namespace {

struct Axis {
  double lo, hi;
  bool log;
  double map(double v, double a, double b) const {
    const double t = log ? (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo))
                         : (v - lo) / (hi - lo);
    return a + t * (b - a);
  }
};

Axis make_axis(const std::vector<double>& v, bool log) {
  double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  if (log) {
    lo = std::pow(10.0, std::floor(std::log10(lo)));
    hi = std::pow(10.0, std::ceil(std::log10(hi)));
    if (hi <= lo) hi = lo * 10.0;
  } else if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  return {lo, hi, log};
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> t;
  if (a.log) {
    for (double v = a.lo; v <= a.hi * (1 + 1e-12); v *= 10.0) t.push_back(v);
  } else {
    for (int i = 0; i <= 4; ++i) t.push_back(a.lo + (a.hi - a.lo) * i / 4.0);
  }
  return t;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr double kWidth = 640, kHeight = 440, kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

void svg_frame(std::ostream& out, const Axis& x, const Axis& y, const std::string& title,
               const std::string& xlabel, const std::string& ylabel) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(x)) {
    const double px = x.map(t, x0, x1);
    out << "<line x1=\"" << px << "\" y1=\"" << y0 << "\" x2=\"" << px << "\" y2=\"" << y0 + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << y0 + 20 << "\" text-anchor=\"middle\">" << short_number(t)
        << "</text>\n";
  }
  for (double t : ticks(y)) {
    const double py = y.map(t, y0, y1);
    out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << py << "\" x2=\"" << x0 << "\" y2=\"" << py
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x0 - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << short_number(t)
        << "</text>\n";
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"15\" y=\"" << (y0 + y1) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
      << (y0 + y1) / 2 << ")\">" << ylabel << "</text>\n";
}

void svg_polyline(std::ostream& out, const std::vector<double>& xs, const std::vector<double>& ys, const Axis& x,
                  const Axis& y, const char* colour, bool markers, bool dashed = false) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  out << "<polyline fill=\"none\" stroke=\"" << colour << "\"" << (dashed ? " stroke-dasharray=\"6 4\"" : "")
      << " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << (i ? " " : "") << short_number(x.map(xs[i], x0, x1)) << ',' << short_number(y.map(ys[i], y0, y1));
  }
  out << "\"/>\n";
  if (!markers) return;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << "<circle cx=\"" << short_number(x.map(xs[i], x0, x1)) << "\" cy=\"" << short_number(y.map(ys[i], y0, y1))
        << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
  }
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

void write_rate_svg(std::ostream& out, const RateReport& r, bool log_axes) {
  if (r.axis.empty()) throw Error("svg: empty rate report");
  std::vector<double> fitted;
  for (double a : r.axis) fitted.push_back(std::exp(r.fit.intercept) * std::pow(a, r.fit.slope));
  std::vector<double> all = r.errors;
  all.insert(all.end(), fitted.begin(), fitted.end());
  const Axis x = make_axis(r.axis, log_axes);
  const Axis y = make_axis(all, log_axes);
  std::ostringstream title;
  title << "slope " << short_number(r.fit.slope) << " (predicted " << short_number(r.predicted_exponent)
        << " +/- " << short_number(r.tolerance) << ", " << (r.pass ? "pass" : "fail") << ")";
  svg_frame(out, x, y, title.str(), xml_escape(r.axis_name), xml_escape(r.error_name));
  svg_polyline(out, r.axis, fitted, x, y, "#888888", false, true);
  svg_polyline(out, r.axis, r.errors, x, y, "#1f77b4", true);
  out << "</svg>\n";
}

void write_trajectory_svg(std::ostream& out, const Trajectory& t) {
  if (t.size() == 0) throw Error("svg: empty trajectory");
  const std::size_t fields = t.observables.front().l2.size();
  std::vector<double> all;
  for (const auto& o : t.observables) all.insert(all.end(), o.l2.begin(), o.l2.end());
  const Axis x = make_axis(t.times, false);
  const Axis y = make_axis(all, false);
  svg_frame(out, x, y, "L2 norm of each field", "time", "L2 norm");
  const char* colours[] = {"#1f77b4", "#d62728"};
  for (std::size_t f = 0; f < fields; ++f) {
    std::vector<double> ys;
    for (const auto& o : t.observables) ys.push_back(o.l2[f]);
    svg_polyline(out, t.times, ys, x, y, colours[f % 2], false);
  }
  out << "</svg>\n";
}

namespace {

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit: cannot write '" + path.string() + "'");
  w(out);
  out.flush();
  if (!out) throw Error("emit: write failed for '" + path.string() + "'");
  return path;
}

void prepare(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error("emit: cannot create output directory '" + dir.string() + "'");
  }
}

}  // namespace

std::vector<std::filesystem::path> emit(const RateReport& r, const ExperimentConfig& cfg,
                                        const std::filesystem::path& dir, const std::string& stem,
                                        const std::vector<Format>& formats) {
  prepare(dir);
  std::vector<std::filesystem::path> written;
  for (Format f : formats) {
    switch (f) {
      case Format::csv:
        written.push_back(write_file(dir / (stem + ".csv"), [&](std::ostream& o) { write_rate_csv(o, r); }));
        break;
      case Format::json:
        written.push_back(
            write_file(dir / (stem + ".json"), [&](std::ostream& o) { o << rate_json(r, cfg).dump(2) << '\n'; }));
        break;
      case Format::svg:
        written.push_back(write_file(dir / (stem + ".svg"), [&](std::ostream& o) { write_rate_svg(o, r); }));
        break;
    }
  }
  return written;
}

std::vector<std::filesystem::path> emit(const SimulationResult& r, const ExperimentConfig& cfg,
                                        const std::filesystem::path& dir, const std::string& stem,
                                        const std::vector<Format>& formats) {
  prepare(dir);
  std::vector<std::filesystem::path> written;
  const int fields = model_field_count(r.model);
  for (Format f : formats) {
    switch (f) {
      case Format::csv:
        written.push_back(write_file(dir / (stem + ".csv"),
                                     [&](std::ostream& o) { write_trajectory_csv(o, r.trajectory, fields); }));
        if (r.trajectory.size() > 0) {
          written.push_back(write_file(dir / (stem + "_final.csv"),
                                       [&](std::ostream& o) { write_state_csv(o, r.trajectory.states.back()); }));
        }
        break;
      case Format::json:
        written.push_back(write_file(dir / (stem + ".json"),
                                     [&](std::ostream& o) { o << simulation_json(r, cfg).dump(2) << '\n'; }));
        break;
      case Format::svg:
        written.push_back(
            write_file(dir / (stem + ".svg"), [&](std::ostream& o) { write_trajectory_svg(o, r.trajectory); }));
        break;
    }
  }
  return written;
}

}  // namespace iwave

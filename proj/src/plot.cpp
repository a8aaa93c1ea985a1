#include "bfbelp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "bfbelp/analytics.hpp"

namespace bfbelp {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-9) lo -= 0.5, hi += 0.5;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const Chart& chart) {
  Range xr, yr;
  for (const auto& s : chart.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  for (const auto& c : chart.circles) {
    xr.add(c.cx - c.r), xr.add(c.cx + c.r);
    yr.add(c.cy - c.r), yr.add(c.cy + c.r);
  }
  xr.finish();
  yr.finish();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  if (chart.equal_aspect) {
    const double scale = std::max((xr.hi - xr.lo) / pw, (yr.hi - yr.lo) / ph);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr.lo = cx - 0.5 * scale * pw, xr.hi = cx + 0.5 * scale * pw;
    yr.lo = cy - 0.5 * scale * ph, yr.hi = cy + 0.5 * scale * ph;
  }
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">" << escape(chart.title)
     << "</text>\n";

  const double xs = nice_step(xr.hi - xr.lo), ys = nice_step(yr.hi - yr.lo);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi; v += xs) {
    os << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(v)) << "\" y2=\""
       << num(kTop + ph) << "\" stroke=\"#eeeeee\"/>\n";
    os << "<text x=\"" << num(px(v)) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\">"
       << num(std::fabs(v) < 1e-12 ? 0.0 : v) << "</text>\n";
  }
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi; v += ys) {
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
       << num(py(v)) << "\" stroke=\"#eeeeee\"/>\n";
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
       << num(std::fabs(v) < 1e-12 ? 0.0 : v) << "</text>\n";
  }
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12) << "\" text-anchor=\"middle\">"
     << escape(chart.x_label) << "</text>\n";
  os << "<text transform=\"translate(18 " << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(chart.y_label) << "</text>\n";

  for (const auto& c : chart.circles) {
    const double rx = c.r / (xr.hi - xr.lo) * pw, ry = c.r / (yr.hi - yr.lo) * ph;
    os << "<ellipse cx=\"" << num(px(c.cx)) << "\" cy=\"" << num(py(c.cy)) << "\" rx=\"" << num(rx) << "\" ry=\""
       << num(ry) << "\" stroke=\"" << c.color << "\" fill=\"" << (c.filled ? c.color : "none") << "\""
       << (c.filled ? " fill-opacity=\"0.3\"" : "") << "/>\n";
  }
  for (const auto& s : chart.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (i) os << ' ';
      os << num(px(s.x[i])) << ',' << num(py(s.y[i]));
    }
    os << "\"/>\n";
  }
  double ly = kTop + 10;
  for (const auto& s : chart.series) {
    const double lx = kLeft + pw + 12;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22) << "\" y2=\"" << num(ly)
       << "\" stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    os << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

PlotSeries make_series(std::string label) {
  PlotSeries s;
  s.label = std::move(label);
  return s;
}

Chart make_chart(std::string title, std::string x_label, std::string y_label) {
  Chart c;
  c.title = std::move(title);
  c.x_label = std::move(x_label);
  c.y_label = std::move(y_label);
  return c;
}

// Keeps charts a manageable size on long runs.
std::vector<std::size_t> sample_ticks(std::size_t n, std::size_t max_points = 1500) {
  std::vector<std::size_t> idx;
  const std::size_t step = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
  for (std::size_t k = 0; k < n; k += step) idx.push_back(k);
  if (n && idx.back() != n - 1) idx.push_back(n - 1);
  return idx;
}

PlotSeries metric_series(const MetricSeries& m, const std::string& label, const std::vector<std::size_t>& idx) {
  PlotSeries s = make_series(label);
  for (std::size_t k : idx) {
    s.x.push_back(m.time[k]);
    s.y.push_back(m.value[k]);
  }
  return s;
}

PlotSeries mean_line(const std::vector<double>& t, double value, const std::string& label) {
  PlotSeries s = make_series(label);
  s.x = {t.front(), t.back()};
  s.y = {value, value};
  s.color = "#000000";
  s.dashed = true;
  return s;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> standard_charts(const SimLog& log) {
  if (log.ticks.empty()) throw InputError("cannot plot an empty log");
  std::vector<std::pair<std::string, std::string>> out;
  const auto idx = sample_ticks(log.ticks.size());
  const std::size_t n_drones = log.ticks.front().drones.size();
  const char* axis_names[] = {"X", "Y", "Z"};

  {
    Chart c = make_chart("XY plane", "x (m)", "y (m)");
    c.equal_aspect = true;
    PlotSeries target = make_series("target");
    target.color = "#000000";
    target.dashed = true;
    for (std::size_t k : idx) {
      target.x.push_back(log.ticks[k].target.x);
      target.y.push_back(log.ticks[k].target.y);
    }
    c.series.push_back(target);
    for (std::size_t d = 0; d < n_drones; ++d) {
      PlotSeries s = make_series("drone " + std::to_string(log.ticks.front().drones[d].id));
      s.color = kPalette[d % 8];
      for (std::size_t k : idx) {
        s.x.push_back(log.ticks[k].drones[d].position.x);
        s.y.push_back(log.ticks[k].drones[d].position.y);
      }
      c.series.push_back(s);
    }
    for (const auto& o : log.obstacles) {
      c.circles.push_back({o.center.x, o.center.y, o.rho0, "#d62728", false});
      c.circles.push_back({o.center.x, o.center.y, o.hard_radius, "#d62728", true});
    }
    out.emplace_back("xy_plane.svg", render_svg(c));
  }

  std::vector<double> times;
  for (const auto& t : log.ticks) times.push_back(t.time);
  for (std::size_t a = 0; a < kAxes; ++a) {
    Chart loc = make_chart(std::string(axis_names[a]) + " location", "time (s)", std::string(axis_names[a]) + " (m)");
    PlotSeries target = make_series("target");
    target.color = "#000000";
    target.dashed = true;
    for (std::size_t k : idx) {
      target.x.push_back(times[k]);
      target.y.push_back(log.ticks[k].target[a]);
    }
    loc.series.push_back(target);

    Chart err = make_chart(std::string(axis_names[a]) + " tracking error", "time (s)", "|drone - target| (m)");
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t d = 0; d < n_drones; ++d) {
      PlotSeries s = make_series("drone " + std::to_string(log.ticks.front().drones[d].id));
      s.color = kPalette[d % 8];
      PlotSeries e = s;
      for (std::size_t k : idx) {
        s.x.push_back(times[k]);
        s.y.push_back(log.ticks[k].drones[d].position[a]);
        e.x.push_back(times[k]);
        e.y.push_back(std::fabs(log.ticks[k].drones[d].position[a] - log.ticks[k].target[a]));
      }
      for (const auto& t : log.ticks) {
        total += std::fabs(t.drones[d].position[a] - t.target[a]);
        ++count;
      }
      loc.series.push_back(s);
      err.series.push_back(e);
    }
    err.series.push_back(mean_line(times, total / static_cast<double>(count), "mean"));
    const std::string lower = std::string(1, static_cast<char>('x' + a));
    out.emplace_back("location_" + lower + ".svg", render_svg(loc));
    out.emplace_back("tracking_error_" + lower + ".svg", render_svg(err));
  }

  if (n_drones >= 2) {
    const MetricSeries g = group_metric(log);
    Chart gc = make_chart("Group metric", "time (s)", "mean pairwise distance (m)");
    gc.series.push_back(metric_series(g, "group metric", idx));
    gc.series.push_back(mean_line(times, g.mean(), "mean"));
    out.emplace_back("group_metric.svg", render_svg(gc));
    if (log.ticks.size() >= 2) {
      const MetricSeries o = order_metric(log);
      Chart oc = make_chart("Order metric", "time (s)", "mean pairwise heading-rate difference (rad/s)");
      oc.series.push_back(metric_series(o, "order metric", idx));
      out.emplace_back("order_metric.svg", render_svg(oc));
    }
  }

  {
    Chart pc = make_chart("Fused prediction vs target", "time (s)", "position (m)");
    PlotSeries px = make_series("predicted x");
    PlotSeries py = make_series("predicted y");
    PlotSeries tx = make_series("target x");
    PlotSeries ty = make_series("target y");
    px.color = "#1f77b4";
    py.color = "#ff7f0e";
    tx.color = "#000000";
    ty.color = "#7f7f7f";
    tx.dashed = ty.dashed = true;
    for (const auto& t : log.ticks) {
      if (!t.fusion.present || !t.fusion.fresh) continue;
      const long k = t.fusion.lead_tick;
      if (k < 0 || k >= static_cast<long>(log.ticks.size())) continue;
      const auto& truth = log.ticks[static_cast<std::size_t>(k)];
      px.x.push_back(truth.time);
      px.y.push_back(t.fusion.lead_position.x);
      py.x.push_back(truth.time);
      py.y.push_back(t.fusion.lead_position.y);
      tx.x.push_back(truth.time);
      tx.y.push_back(truth.target.x);
      ty.x.push_back(truth.time);
      ty.y.push_back(truth.target.y);
    }
    pc.series = {px, py, tx, ty};
    out.emplace_back("prediction_vs_target.svg", render_svg(pc));
  }
  return out;
}

}  // namespace bfbelp

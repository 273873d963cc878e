#include "wsn/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace wsn::report {

namespace {

nlohmann::json milestone(const std::optional<std::uint32_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json delta_json(const MetricDelta& d) {
  return {{"mean_a", d.mean_a},       {"mean_b", d.mean_b},       {"mean_delta", d.mean_delta},
          {"a_greater", d.a_greater}, {"b_greater", d.b_greater}, {"equal", d.equal}};
}

nlohmann::json outcome_json(const ModeOutcome& o) {
  return {{"cumulative_loss", o.cumulative_loss}, {"mean_throughput", o.mean_throughput},
          {"residual_at_ref", o.residual_at_ref}, {"fnd", o.fnd},
          {"hna", o.hna},                         {"lnd", o.lnd}};
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

// Round numbers for axis ticks: 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 80;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 60;

void svg_open(std::ostream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
     << "</text>\n";
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void draw_y_axis(std::ostream& os, const Frame& f, const std::string& label) {
  const double step = nice_step(f.y1 - f.y0, 6);
  for (double v = std::ceil(f.y0 / step) * step; v <= f.y1 + 1e-12; v += step) {
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << f.py(v) << "\" y2=\"" << f.py(v)
       << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << f.py(v) + 4 << "\" text-anchor=\"end\">" << fmt(v)
       << "</text>\n";
  }
  os << "<text transform=\"translate(18," << (kTop + kHeight - kBottom) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(label) << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft << "\" y1=\"" << kTop << "\" y2=\"" << kHeight - kBottom
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << kHeight - kBottom << "\" y2=\""
     << kHeight - kBottom << "\" stroke=\"black\"/>\n";
}

void draw_legend(std::ostream& os, std::span<const Series> series) {
  double y = kTop + 10;
  for (const auto& s : series) {
    os << "<rect x=\"" << kWidth - kRight + 16 << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"12\" fill=\""
       << s.color << "\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 34 << "\" y=\"" << y + 1 << "\">" << xml_escape(s.name) << "</text>\n";
    y += 20;
  }
}

}  // namespace

void write_rounds_csv(std::span<const RoundMetrics> rounds, std::ostream& out) {
  out << kRoundsHeader << '\n';
  out << std::setprecision(17);
  for (const auto& m : rounds) {
    out << m.round << ',' << m.packets_offered << ',' << m.packets_delivered << ',' << m.packets_lost << ','
        << m.throughput << ',' << m.total_residual_energy << ',' << m.energy_spent << ',' << m.alive_count << ','
         << m.head_count << ',' << m.dropper_heads << ',' << m.detected_total << '\n';
  }
}

nlohmann::json lifetime_json(const LifetimeReport& lifetime) {
  return {{"fnd", milestone(lifetime.fnd)}, {"hna", milestone(lifetime.hna)}, {"lnd", milestone(lifetime.lnd)}};
}

nlohmann::json run_summary_json(const RunResult& run, Mode mode, std::uint64_t seed) {
  std::uint64_t offered = 0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
  for (const auto& m : run.rounds) {
    offered += m.packets_offered;
    delivered += m.packets_delivered;
    lost += m.packets_lost;
  }
  nlohmann::json j = lifetime_json(run.lifetime);
  j["mode"] = to_string(mode);
  j["seed"] = seed;
  j["rounds"] = run.rounds.size();
  j["packets_offered"] = offered;
  j["packets_delivered"] = delivered;
  j["packets_lost"] = lost;
  j["final_residual_energy"] = run.rounds.empty() ? 0.0 : run.rounds.back().total_residual_energy;
  return j;
}

nlohmann::json comparison_json(const ComparisonReport& report) {
  nlohmann::json per_seed = nlohmann::json::array();
  for (const auto& s : report.seeds) {
    per_seed.push_back({{"seed", s.seed},
                        {"horizon", s.horizon},
                        {"reference_round", s.reference_round},
                        {"a", outcome_json(s.outcome_a)},
                        {"b", outcome_json(s.outcome_b)},
                        {"lifetime_a", lifetime_json(s.a.lifetime)},
                        {"lifetime_b", lifetime_json(s.b.lifetime)}});
  }
  return {{"mode_a", to_string(report.mode_a)},
          {"mode_b", to_string(report.mode_b)},
          {"seed_count", report.seeds.size()},
          {"metrics",
           {{"cumulative_loss", delta_json(report.cumulative_loss)},
            {"mean_throughput", delta_json(report.mean_throughput)},
            {"residual_at_ref", delta_json(report.residual_at_ref)},
            {"fnd", delta_json(report.fnd)},
            {"hna", delta_json(report.hna)},
            {"lnd", delta_json(report.lnd)}}},
          {"per_seed", per_seed}};
}

std::vector<MeanPoint> mean_series(std::span<const RunResult* const> runs) {
  std::size_t len = 0;
  for (const auto* r : runs) len = std::max(len, r->rounds.size());
  std::vector<MeanPoint> out(len);
  if (runs.empty()) return out;
  const double n = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < len; ++k) {
    MeanPoint& p = out[k];
    p.round = static_cast<std::uint32_t>(k + 1);
    for (const auto* r : runs) {
      if (r->rounds.empty()) continue;
      if (k < r->rounds.size()) {
        const auto& m = r->rounds[k];
        p.packets_lost += m.packets_lost;
        p.throughput += m.throughput;
        p.total_residual_energy += m.total_residual_energy;
        p.alive_count += m.alive_count;
      } else {
        p.total_residual_energy += r->rounds.back().total_residual_energy;
        p.alive_count += r->rounds.back().alive_count;
      }
    }
    p.packets_lost /= n;
    p.throughput /= n;
    p.total_residual_energy /= n;
    p.alive_count /= n;
  }
  return out;
}

namespace {

std::pair<std::vector<MeanPoint>, std::vector<MeanPoint>> both_series(const ComparisonReport& report) {
  std::vector<const RunResult*> a;
  std::vector<const RunResult*> b;
  for (const auto& s : report.seeds) {
    a.push_back(&s.a);
    b.push_back(&s.b);
  }
  return {mean_series(a), mean_series(b)};
}

}  // namespace

void write_comparison_csv(const ComparisonReport& report, std::ostream& out) {
  const auto [a, b] = both_series(report);
  const std::string na = to_string(report.mode_a);
  const std::string nb = to_string(report.mode_b);
  const std::string sa = na == nb ? na + "_a" : na;
  const std::string sb = na == nb ? nb + "_b" : nb;
  out << "round";
  for (const auto& n : {sa, sb}) {
    out << ',' << n << "_packets_lost," << n << "_throughput," << n << "_total_residual_energy," << n
        << "_alive_count";
  }
  out << '\n' << std::setprecision(12);
  const std::size_t len = std::max(a.size(), b.size());
  for (std::size_t k = 0; k < len; ++k) {
    out << k + 1;
    for (const auto* series : {&a, &b}) {
      if (k < series->size()) {
        const auto& p = (*series)[k];
        out << ',' << p.packets_lost << ',' << p.throughput << ',' << p.total_residual_energy << ','
            << p.alive_count;
      } else {
        const double e = series->empty() ? 0.0 : series->back().total_residual_energy;
        out << ",0,0," << e << ",0";
      }
    }
    out << '\n';
  }
}

void write_per_seed_csv(const ComparisonReport& report, std::ostream& out) {
  out << "seed,horizon,reference_round";
  for (const char* side : {"a", "b"}) {
    for (const char* f : {"cumulative_loss", "mean_throughput", "residual_at_ref", "fnd", "hna", "lnd"}) {
      out << ',' << side << '_' << f;
    }
  }
  out << '\n' << std::setprecision(12);
  for (const auto& s : report.seeds) {
    out << s.seed << ',' << s.horizon << ',' << s.reference_round;
    for (const auto* o : {&s.outcome_a, &s.outcome_b}) {
      out << ',' << o->cumulative_loss << ',' << o->mean_throughput << ',' << o->residual_at_ref << ',' << o->fnd
          << ',' << o->hna << ',' << o->lnd;
    }
    out << '\n';
  }
}

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           std::span<const Series> series) {
  Frame f{0.0, 1.0, 0.0, 1.0};
  bool any = false;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        f = {x, x, y, y};
        any = true;
      }
      f.x0 = std::min(f.x0, x);
      f.x1 = std::max(f.x1, x);
      f.y0 = std::min(f.y0, y);
      f.y1 = std::max(f.y1, y);
    }
  }
  f.y0 = std::min(f.y0, 0.0);
  if (!(f.x1 > f.x0)) f.x1 = f.x0 + 1.0;
  if (!(f.y1 > f.y0)) f.y1 = f.y0 + 1.0;

  std::ostringstream os;
  svg_open(os, title);
  draw_y_axis(os, f, y_label);
  const double xstep = nice_step(f.x1 - f.x0, 8);
  for (double v = std::ceil(f.x0 / xstep) * xstep; v <= f.x1 + 1e-12; v += xstep) {
    os << "<text x=\"" << f.px(v) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">" << fmt(v)
       << "</text>\n";
  }
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 16
     << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) os << fmt(f.px(x)) << ',' << fmt(f.py(y)) << ' ';
    os << "\"/>\n";
  }
  draw_legend(os, series);
  os << "</svg>\n";
  return os.str();
}

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          std::span<const std::string> categories, std::span<const Series> series) {
  double y1 = 0.0;
  for (const auto& s : series) {
    for (const auto& p : s.points) y1 = std::max(y1, p.second);
  }
  Frame f{0.0, static_cast<double>(std::max<std::size_t>(categories.size(), 1)), 0.0, y1 > 0 ? y1 * 1.1 : 1.0};

  std::ostringstream os;
  svg_open(os, title);
  draw_y_axis(os, f, y_label);
  const double group = f.px(1.0) - f.px(0.0);
  const double bar = group * 0.7 / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = f.px(static_cast<double>(c)) + group * 0.15;
    for (std::size_t s = 0; s < series.size(); ++s) {
      if (c >= series[s].points.size()) continue;
      const double v = series[s].points[c].second;
      const double x = gx + bar * static_cast<double>(s);
      os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(f.py(v)) << "\" width=\"" << fmt(bar * 0.95)
         << "\" height=\"" << fmt(f.py(0.0) - f.py(v)) << "\" fill=\"" << series[s].color << "\"/>\n";
      os << "<text x=\"" << fmt(x + bar / 2) << "\" y=\"" << fmt(f.py(v) - 4) << "\" text-anchor=\"middle\""
         << " font-size=\"10\">" << fmt(v) << "</text>\n";
    }
    os << "<text x=\"" << fmt(f.px(c + 0.5)) << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
       << xml_escape(categories[c]) << "</text>\n";
  }
  draw_legend(os, series);
  os << "</svg>\n";
  return os.str();
}

std::string topology_svg(const Topology& topo, const ElectionResult& election) {
  const double scale = 640.0 / std::max(topo.field_width, topo.field_height);
  const double w = topo.field_width * scale + 40;
  const double h = topo.field_height * scale + 40;
  auto px = [&](const Position& p) { return 20 + p.x * scale; };
  auto py = [&](const Position& p) { return 20 + (topo.field_height - p.y) * scale; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"20\" y=\"20\" width=\"" << fmt(topo.field_width * scale) << "\" height=\""
     << fmt(topo.field_height * scale) << "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (const auto& [member, head] : election.assignment.head_of) {
    const auto& a = topo.node(member).pos;
    const auto& b = topo.node(head).pos;
    os << "<line x1=\"" << fmt(px(a)) << "\" y1=\"" << fmt(py(a)) << "\" x2=\"" << fmt(px(b)) << "\" y2=\""
       << fmt(py(b)) << "\" stroke=\"#bbbbbb\" stroke-width=\"0.8\"/>\n";
  }
  std::vector<bool> is_head(topo.size(), false);
  for (NodeId hd : election.heads) is_head[hd] = true;
  for (const Node& n : topo.nodes) {
    std::string fill = "#7f7f7f";
    double r = 3.0;
    if (n.status == NodeStatus::Dead) fill = "none";
    if (n.status == NodeStatus::Malicious) fill = "black";
    if (is_head[n.id]) {
      fill = "red";
      r = 5.0;
    }
    os << "<circle cx=\"" << fmt(px(n.pos)) << "\" cy=\"" << fmt(py(n.pos)) << "\" r=\"" << r << "\" fill=\"" << fill
       << "\" stroke=\"" << (fill == "none" ? "#7f7f7f" : fill) << "\"/>\n";
  }
  os << "<rect x=\"" << fmt(px(topo.sink) - 6) << "\" y=\"" << fmt(py(topo.sink) - 6)
     << "\" width=\"12\" height=\"12\" fill=\"blue\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace wsn::report

#include <algorithm>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "wlsep/error.hpp"
#include "wlsep/report.hpp"

namespace wlsep {

namespace {

using detail::format_fixed;

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

const char* color_for(Label l) {
  switch (l) {
    case Label::Winner: return "#d62728";
    case Label::Loser: return "#2ca02c";
    case Label::Middle: return "#7f7f7f";
  }
  return "#000000";
}

/// Plot frame with linear axes. Coordinates are printed with fixed decimals
/// so output is byte-stable.
class Frame {
 public:
  Frame(std::string title, double x0, double x1, double y0, double y1)
      : x0_(x0), x1_(x1 > x0 ? x1 : x0 + 1), y0_(y0), y1_(y1 > y0 ? y1 : y0 + 1) {
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << title << "</text>\n";
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom);
  }

  void axes(const std::string& xlabel, const std::string& ylabel, int ticks = 5) {
    const double bx = kLeft, by = kHeight - kBottom;
    os_ << "<g stroke=\"black\" stroke-width=\"1\">"
        << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << by << "\"/>"
        << "<line x1=\"" << bx << "\" y1=\"" << by << "\" x2=\"" << bx << "\" y2=\"" << kTop << "\"/></g>\n";
    os_ << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= ticks; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / ticks;
      const double yv = y0_ + (y1_ - y0_) * i / ticks;
      os_ << "<text x=\"" << format_fixed(px(xv), 2) << "\" y=\"" << by + 16
          << "\" text-anchor=\"middle\">" << format_fixed(xv, 2) << "</text>\n";
      os_ << "<text x=\"" << bx - 6 << "\" y=\"" << format_fixed(py(yv) + 4, 2)
          << "\" text-anchor=\"end\">" << format_fixed(yv, 2) << "</text>\n";
    }
    os_ << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
        << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2
        << ")\">" << ylabel << "</text>\n</g>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                const std::string& dash = "") {
    os_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (!dash.empty()) os_ << " stroke-dasharray=\"" << dash << "\"";
    os_ << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      os_ << (i ? " " : "") << format_fixed(px(pts[i].first), 2) << ','
          << format_fixed(py(pts[i].second), 2);
    }
    os_ << "\"/>\n";
    for (const auto& [x, y] : pts) circle(x, y, 3, color);
  }

  void circle(double x, double y, double r, const std::string& color, double opacity = 1.0) {
    os_ << "<circle cx=\"" << format_fixed(px(x), 2) << "\" cy=\"" << format_fixed(py(y), 2)
        << "\" r=\"" << r << "\" fill=\"" << color << "\"";
    if (opacity < 1.0) os_ << " fill-opacity=\"" << format_fixed(opacity, 2) << "\"";
    os_ << "/>\n";
  }

  void bar(double x_lo, double x_hi, double height, const std::string& color, double opacity) {
    const double top = py(height), base = py(y0_);
    os_ << "<rect x=\"" << format_fixed(px(x_lo), 2) << "\" y=\"" << format_fixed(top, 2)
        << "\" width=\"" << format_fixed(px(x_hi) - px(x_lo), 2) << "\" height=\""
        << format_fixed(base - top, 2) << "\" fill=\"" << color << "\" fill-opacity=\""
        << format_fixed(opacity, 2) << "\"/>\n";
  }

  void legend(const std::vector<std::pair<std::string, std::string>>& items) {
    double y = kTop + 8;
    os_ << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (const auto& [name, color] : items) {
      os_ << "<rect x=\"" << kWidth - kRight - 150 << "\" y=\"" << y - 9
          << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>"
          << "<text x=\"" << kWidth - kRight - 132 << "\" y=\"" << y + 2 << "\">" << name
          << "</text>\n";
      y += 18;
    }
    os_ << "</g>\n";
  }

  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  std::ostringstream os_;
  double x0_, x1_, y0_, y1_;
};

}  // namespace

std::string error_curve_svg(const std::vector<LoocvReport>& reports, bool separate,
                            std::optional<Measure> only) {
  double xmin = 0, xmax = 1;
  if (!reports.empty()) {
    const auto [lo, hi] = std::minmax_element(
        reports.begin(), reports.end(),
        [](const auto& a, const auto& b) { return a.window_months < b.window_months; });
    xmin = lo->window_months;
    xmax = hi->window_months;
  }
  std::string title = separate ? "LOOCV error by class" : "LOOCV total error";
  if (only) title += std::string(" (") + to_string(*only) + ")";
  Frame f(title, xmin, xmax, 0.0, 1.0);
  f.axes("initial window (months)", "error rate");

  std::vector<std::pair<std::string, std::string>> legend;
  for (const Measure m : {Measure::Distance, Measure::Proximity}) {
    if (only && *only != m) continue;
    std::vector<std::pair<double, double>> total, win, lose;
    for (const auto& r : reports) {
      if (r.measure != m) continue;
      total.emplace_back(r.window_months, r.total_rate());
      win.emplace_back(r.window_months, r.winner_rate());
      lose.emplace_back(r.window_months, r.loser_rate());
    }
    if (total.empty()) continue;
    const std::string dash = m == Measure::Distance ? "" : "6,4";
    if (separate) {
      f.polyline(win, color_for(Label::Winner), dash);
      f.polyline(lose, color_for(Label::Loser), dash);
      legend.emplace_back(std::string("winner, ") + to_string(m), color_for(Label::Winner));
      legend.emplace_back(std::string("loser, ") + to_string(m), color_for(Label::Loser));
    } else {
      const std::string color = m == Measure::Distance ? "#1f77b4" : "#ff7f0e";
      f.polyline(total, color, dash);
      legend.emplace_back(to_string(m), color);
    }
  }
  f.legend(legend);
  return f.finish();
}

std::string histogram_svg(const PairHistogram& h, bool cross_class) {
  if (h.bin_edges.size() < 2) fail(ErrorKind::InvalidInput, "histogram has no bins");
  int peak = 1;
  for (const auto* v : {&h.ww, &h.ll, &h.wl}) {
    if (!v->empty()) peak = std::max(peak, *std::max_element(v->begin(), v->end()));
  }
  const std::string title = std::string(cross_class ? "winner/loser " : "in-class ") +
                            to_string(h.measure) + ", " + std::to_string(h.window_months) +
                            "-month window";
  Frame f(title, h.bin_edges.front(), h.bin_edges.back(), 0.0, peak);
  f.axes(to_string(h.measure), "pairs");
  auto draw = [&](const std::vector<int>& counts, const char* color) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] > 0) f.bar(h.bin_edges[i], h.bin_edges[i + 1], counts[i], color, 0.55);
    }
  };
  if (cross_class) {
    draw(h.wl, "#1f77b4");
    f.legend({{"winner/loser", "#1f77b4"}});
  } else {
    draw(h.ww, color_for(Label::Winner));
    draw(h.ll, color_for(Label::Loser));
    f.legend({{"winner/winner", color_for(Label::Winner)}, {"loser/loser", color_for(Label::Loser)}});
  }
  return f.finish();
}

std::string scatter_svg(const Embedding& e, const std::string& title) {
  if (e.coords.cols() < 2) fail(ErrorKind::InvalidInput, "scatter needs two coordinates");
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (e.coords.rows() > 0) {
    x0 = e.coords.col(0).minCoeff();
    x1 = e.coords.col(0).maxCoeff();
    y0 = e.coords.col(1).minCoeff();
    y1 = e.coords.col(1).maxCoeff();
    const double px = 0.05 * std::max(x1 - x0, 1e-12), py = 0.05 * std::max(y1 - y0, 1e-12);
    x0 -= px, x1 += px, y0 -= py, y1 += py;
  }
  Frame f(title, x0, x1, y0, y1);
  f.axes("coordinate 1", "coordinate 2");
  for (Eigen::Index i = 0; i < e.coords.rows(); ++i) {
    f.circle(e.coords(i, 0), e.coords(i, 1), 4, color_for(e.labels[static_cast<std::size_t>(i)]), 0.8);
  }
  f.legend({{"winner", color_for(Label::Winner)}, {"loser", color_for(Label::Loser)}});
  return f.finish();
}

std::vector<std::filesystem::path> emit_plots(const std::vector<LoocvReport>& reports,
                                              const std::vector<PairHistogram>& histograms,
                                              const std::vector<Embedding>& embeddings,
                                              const std::filesystem::path& out_dir) {
  std::vector<std::pair<std::string, std::string>> files;
  if (!reports.empty()) {
    files.emplace_back("errors_total.svg", error_curve_svg(reports, false));
    for (const Measure m : {Measure::Distance, Measure::Proximity}) {
      if (std::any_of(reports.begin(), reports.end(), [&](const auto& r) { return r.measure == m; })) {
        files.emplace_back(std::string("errors_separate_") + to_string(m) + ".svg",
                           error_curve_svg(reports, true, m));
      }
    }
  }
  for (const auto& h : histograms) {
    const std::string stem = std::string("hist_") + to_string(h.measure) + "_" +
                             std::to_string(h.window_months) + "m";
    files.emplace_back(stem + "_inclass.svg", histogram_svg(h, false));
    files.emplace_back(stem + "_crossclass.svg", histogram_svg(h, true));
  }
  std::set<std::string> used;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const bool internal = embeddings[i].coords.cols() == 2;
    std::string name = internal ? "embedding_map" : "embedding_pca";
    if (!used.insert(name).second) name += "_" + std::to_string(i);
    files.emplace_back(name + ".svg",
                       scatter_svg(embeddings[i], internal ? "elastic map, internal coordinates"
                                                           : "principal components 1-2"));
  }
  std::vector<std::filesystem::path> written;
  if (files.empty()) return written;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  for (const auto& [name, text] : files) {
    detail::write_text(out_dir / name, text);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace wlsep

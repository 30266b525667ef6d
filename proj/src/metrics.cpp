#include "wlsep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "text_util.hpp"
#include "wlsep/error.hpp"

namespace wlsep {

const char* to_string(Measure m) noexcept {
  return m == Measure::Distance ? "distance" : "proximity";
}

Measure parse_measure(std::string_view text) {
  if (text == "distance") return Measure::Distance;
  if (text == "proximity") return Measure::Proximity;
  fail(ErrorKind::InvalidConfig, "unknown measure '" + std::string(text) + "'");
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::InvalidInput, "pearson: series lengths differ");
  if (x.size() < 2) fail(ErrorKind::InvalidInput, "pearson: need at least two observations");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) fail(ErrorKind::Degenerate, "pearson: zero-variance series");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  // Deviations are rescaled so tiny magnitudes do not underflow when squared.
  double ax = 0.0, ay = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ax = std::max(ax, std::abs(x[i] - mx));
    ay = std::max(ay, std::abs(y[i] - my));
  }
  if (ax == 0.0 || ay == 0.0) fail(ErrorKind::Degenerate, "pearson: zero-variance series");
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = (x[i] - mx) / ax, dy = (y[i] - my) / ay;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail(ErrorKind::Degenerate, "pearson: zero-variance series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double correlation_distance(double c) {
  c = std::clamp(c, -1.0, 1.0);
  return std::sqrt(2.0 * (1.0 - c));
}

double correlation_proximity(double c) {
  c = std::clamp(c, -1.0, 1.0);
  return std::sqrt(1.0 - c * c);
}

double apply_measure(Measure m, double c) {
  return m == Measure::Distance ? correlation_distance(c) : correlation_proximity(c);
}

double verify_angle_identities(std::span<const double> alphas) {
  double worst = 0.0;
  for (const double a : alphas) {
    const double c = std::cos(2.0 * a);
    worst = std::max(worst, std::abs(2.0 * std::sin(a) - correlation_distance(c)));
    worst = std::max(worst, std::abs(std::sin(2.0 * a) - correlation_proximity(c)));
  }
  return worst;
}

Eigen::Index DistanceMatrix::index_of(std::string_view ticker) const {
  const auto it = std::find(tickers.begin(), tickers.end(), ticker);
  return it == tickers.end() ? -1 : it - tickers.begin();
}

Eigen::MatrixXd correlation_matrix(const ReturnMatrix& returns) {
  const auto n = returns.rows();
  if (n < 2) fail(ErrorKind::Data, "correlation needs at least two return rows");
  Eigen::MatrixXd z = returns.returns.rowwise() - returns.returns.colwise().mean();
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    const double norm = z.col(c).norm();
    if (returns.returns.col(c).maxCoeff() == returns.returns.col(c).minCoeff() || norm == 0.0) {
      fail(ErrorKind::Degenerate,
           "constant return series for " + returns.tickers[static_cast<std::size_t>(c)]);
    }
    z.col(c) /= norm;
  }
  Eigen::MatrixXd corr = z.transpose() * z;
  corr = corr.cwiseMax(-1.0).cwiseMin(1.0);
  corr.diagonal().setOnes();
  return corr;
}

DistanceMatrix distance_matrix(const ReturnMatrix& returns, Measure measure) {
  if (returns.cols() < 2) fail(ErrorKind::InvalidInput, "distance matrix needs two companies");
  const Eigen::MatrixXd corr = correlation_matrix(returns);
  DistanceMatrix dm;
  dm.tickers = returns.tickers;
  dm.measure = measure;
  const auto n = corr.rows();
  dm.values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dm.values(i, j) = dm.values(j, i) = apply_measure(measure, corr(i, j));
    }
  }
  return dm;
}

PairPartition partition_pairs(const DistanceMatrix& dm, const LabelSet& labels) {
  auto indices = [&](const std::vector<std::string>& v) {
    std::vector<Eigen::Index> out;
    for (const auto& t : v) {
      const auto i = dm.index_of(t);
      if (i < 0) fail(ErrorKind::InvalidInput, "labeled ticker " + t + " not in distance matrix");
      out.push_back(i);
    }
    return out;
  };
  const auto w = indices(labels.winners);
  const auto l = indices(labels.losers);
  PairPartition pp;
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = a + 1; b < w.size(); ++b) pp.ww.push_back(dm.values(w[a], w[b]));
  for (std::size_t a = 0; a < l.size(); ++a)
    for (std::size_t b = a + 1; b < l.size(); ++b) pp.ll.push_back(dm.values(l[a], l[b]));
  for (const auto i : w)
    for (const auto j : l) pp.wl.push_back(dm.values(i, j));
  return pp;
}

void write_distance_matrix_csv(const std::filesystem::path& path, const DistanceMatrix& dm) {
  std::ostringstream os;
  os << to_string(dm.measure);
  for (const auto& t : dm.tickers) os << ',' << t;
  os << '\n';
  for (Eigen::Index i = 0; i < dm.size(); ++i) {
    os << dm.tickers[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < dm.size(); ++j) os << ',' << detail::format_double(dm.values(i, j));
    os << '\n';
  }
  detail::write_text(path, os.str());
}

void write_pair_partition_csv(const std::filesystem::path& path, const PairPartition& pp) {
  std::ostringstream os;
  os << "ww,ll,wl\n";
  const auto rows = std::max({pp.ww.size(), pp.ll.size(), pp.wl.size()});
  auto cell = [](const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? detail::format_double(v[i]) : std::string();
  };
  for (std::size_t i = 0; i < rows; ++i) {
    os << cell(pp.ww, i) << ',' << cell(pp.ll, i) << ',' << cell(pp.wl, i) << '\n';
  }
  detail::write_text(path, os.str());
}

}  // namespace wlsep

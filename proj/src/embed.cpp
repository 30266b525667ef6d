#include "wlsep/embed.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "text_util.hpp"
#include "wlsep/error.hpp"

namespace wlsep {

namespace {

struct Svd {
  Eigen::VectorXd mean;
  Eigen::VectorXd singular;  // descending
  Eigen::MatrixXd u;         // rows x r
  Eigen::MatrixXd v;         // dims x r
};

Svd centered_svd(const Eigen::MatrixXd& data) {
  Svd s;
  s.mean = data.colwise().mean().transpose();
  const Eigen::MatrixXd x = data.rowwise() - s.mean.transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  s.singular = svd.singularValues();
  s.u = svd.matrixU();
  s.v = svd.matrixV();
  // Fix each axis's sign: its largest-magnitude loading is positive.
  for (Eigen::Index k = 0; k < s.v.cols(); ++k) {
    Eigen::Index arg = 0;
    s.v.col(k).cwiseAbs().maxCoeff(&arg);
    if (s.v(arg, k) < 0.0) {
      s.v.col(k) *= -1.0;
      s.u.col(k) *= -1.0;
    }
  }
  return s;
}

int node_id(int row, int col, int cols) { return row * cols + col; }

int edge_count(int rows, int cols) { return rows * (cols - 1) + cols * (rows - 1); }
int rib_count(int rows, int cols) {
  return rows * std::max(cols - 2, 0) + cols * std::max(rows - 2, 0);
}

/// Visits every lattice edge (a, b) and rib (a, b, c) with b the middle node.
template <typename EdgeFn, typename RibFn>
void for_each_link(int rows, int cols, EdgeFn&& edge, RibFn&& rib) {
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int id = node_id(r, c, cols);
      if (c + 1 < cols) edge(id, node_id(r, c + 1, cols));
      if (r + 1 < rows) edge(id, node_id(r + 1, c, cols));
      if (c + 2 < cols) rib(id, node_id(r, c + 1, cols), node_id(r, c + 2, cols));
      if (r + 2 < rows) rib(id, node_id(r + 1, c, cols), node_id(r + 2, c, cols));
    }
  }
}

std::vector<int> assign_nearest(const Eigen::MatrixXd& data, const Eigen::MatrixXd& nodes) {
  std::vector<int> out(static_cast<std::size_t>(data.rows()));
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    Eigen::Index best = 0;
    (nodes.rowwise() - data.row(i)).rowwise().squaredNorm().minCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

struct Projection {
  double dist2 = std::numeric_limits<double>::infinity();
  Eigen::Vector3d weights = Eigen::Vector3d::Zero();
};

Projection project_segment(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b) {
  const Eigen::VectorXd ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  Projection pr;
  pr.dist2 = (p - a - t * ab).squaredNorm();
  pr.weights = {1.0 - t, t, 0.0};
  return pr;
}

/// Closest point of triangle (a, b, c) to p, as barycentric weights.
Projection project_triangle(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::VectorXd u = b - a, v = c - a, w = p - a;
  const double uu = u.dot(u), uv = u.dot(v), vv = v.dot(v);
  const double det = uu * vv - uv * uv;
  if (det > 1e-14 * std::max(uu * vv, std::numeric_limits<double>::min())) {
    const double s = (vv * u.dot(w) - uv * v.dot(w)) / det;
    const double t = (uu * v.dot(w) - uv * u.dot(w)) / det;
    if (s >= 0.0 && t >= 0.0 && s + t <= 1.0) {
      Projection pr;
      pr.dist2 = (w - s * u - t * v).squaredNorm();
      pr.weights = {1.0 - s - t, s, t};
      return pr;
    }
  }
  Projection best = project_segment(p, a, b);
  Projection bc = project_segment(p, b, c);
  bc.weights = {0.0, bc.weights[0], bc.weights[1]};
  Projection ca = project_segment(p, c, a);
  ca.weights = {ca.weights[1], 0.0, ca.weights[0]};
  if (bc.dist2 < best.dist2) best = bc;
  if (ca.dist2 < best.dist2) best = ca;
  return best;
}

}  // namespace

PcaResult pca(const Eigen::MatrixXd& data, int n_components) {
  if (n_components < 1) fail(ErrorKind::InvalidInput, "pca needs at least one component");
  if (data.rows() < n_components + 1) {
    fail(ErrorKind::InvalidInput, "pca needs at least n_components + 1 rows");
  }
  if (!data.allFinite()) fail(ErrorKind::InvalidInput, "pca input has non-finite entries");
  const Svd s = centered_svd(data);
  const double tol = static_cast<double>(std::max(data.rows(), data.cols())) *
                     std::numeric_limits<double>::epsilon() *
                     (s.singular.size() > 0 ? s.singular(0) : 0.0);
  if (s.singular.size() < n_components || !(s.singular(n_components - 1) > tol)) {
    fail(ErrorKind::Degenerate,
         "data rank is below the " + std::to_string(n_components) + " requested components");
  }
  PcaResult out;
  out.mean = s.mean;
  out.explained_variance = s.singular.array().square() / static_cast<double>(data.rows());
  out.components = s.v.leftCols(n_components);
  out.scores = s.u.leftCols(n_components) * s.singular.head(n_components).asDiagonal();
  return out;
}

void validate(const ElasticNetParams& p) {
  if (p.grid_rows < 2 || p.grid_cols < 2) fail(ErrorKind::InvalidConfig, "elastic grid must be at least 2x2");
  if (!(p.lambda >= 0.0) || !(p.mu >= 0.0)) fail(ErrorKind::InvalidConfig, "elasticities must be non-negative");
  if (!(p.tolerance > 0.0)) fail(ErrorKind::InvalidConfig, "tolerance must be positive");
  if (p.max_iterations < 1) fail(ErrorKind::InvalidConfig, "max_iterations must be positive");
}

ElasticEnergy elastic_energy(const Eigen::MatrixXd& data, const Eigen::MatrixXd& nodes,
                             const std::vector<int>& assignment, int grid_rows, int grid_cols,
                             double lambda, double mu) {
  ElasticEnergy e;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    e.approximation += (data.row(i) - nodes.row(assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  e.approximation /= static_cast<double>(data.rows());
  for_each_link(
      grid_rows, grid_cols,
      [&](int a, int b) { e.stretching += (nodes.row(a) - nodes.row(b)).squaredNorm(); },
      [&](int a, int b, int c) {
        e.bending += (nodes.row(a) - 2.0 * nodes.row(b) + nodes.row(c)).squaredNorm();
      });
  if (const int n = edge_count(grid_rows, grid_cols); n > 0) e.stretching /= n;
  if (const int n = rib_count(grid_rows, grid_cols); n > 0) e.bending /= n;
  e.total = e.approximation + lambda * e.stretching + mu * e.bending;
  return e;
}

ElasticMap fit_elastic_map(const Eigen::MatrixXd& data, const ElasticNetParams& params) {
  validate(params);
  if (data.rows() < 4) fail(ErrorKind::InvalidInput, "elastic map needs at least 4 data points");
  if (!data.allFinite()) fail(ErrorKind::InvalidInput, "elastic map input has non-finite entries");

  const int rows = params.grid_rows, cols = params.grid_cols;
  const int nodes = rows * cols;
  const auto n = static_cast<double>(data.rows());

  ElasticMap map;
  map.grid_rows = rows;
  map.grid_cols = cols;
  map.node_grid_coords.resize(nodes, 2);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) map.node_grid_coords.row(node_id(r, c, cols)) << c, r;

  // Initial lattice: the plane of the first two principal axes, +-2 sd.
  const Svd s = centered_svd(data);
  Eigen::MatrixXd y = s.mean.transpose().replicate(nodes, 1);
  for (int axis = 0; axis < 2 && axis < s.singular.size(); ++axis) {
    const double sd = s.singular(axis) / std::sqrt(n);
    const int steps = axis == 0 ? cols : rows;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int step = axis == 0 ? c : r;
        const double t = -2.0 + 4.0 * step / (steps - 1);
        y.row(node_id(r, c, cols)) += (t * sd) * s.v.col(axis).transpose();
      }
    }
  }

  // Constant part of the normal equations: stretching and bending Laplacians.
  const int n_edges = edge_count(rows, cols);
  const int n_ribs = rib_count(rows, cols);
  const double ws = n_edges > 0 ? params.lambda / n_edges : 0.0;
  const double wb = n_ribs > 0 ? params.mu / n_ribs : 0.0;
  Eigen::MatrixXd elastic = Eigen::MatrixXd::Zero(nodes, nodes);
  for_each_link(
      rows, cols,
      [&](int a, int b) {
        elastic(a, a) += ws;
        elastic(b, b) += ws;
        elastic(a, b) -= ws;
        elastic(b, a) -= ws;
      },
      [&](int a, int b, int c) {
        const int id[3] = {a, b, c};
        const double coef[3] = {1.0, -2.0, 1.0};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) elastic(id[i], id[j]) += wb * coef[i] * coef[j];
      });

  if (params.lambda == 0.0 && params.mu == 0.0) {
    map.warnings.push_back(
        "lambda = mu = 0: node update regularized by a 1e-9 proximal term only");
  }

  auto energy = [&](const Eigen::MatrixXd& pos, const std::vector<int>& k) {
    return elastic_energy(data, pos, k, rows, cols, params.lambda, params.mu).total;
  };

  std::vector<int> assign = assign_nearest(data, y);
  map.energy_trace.push_back(energy(y, assign));

  for (int it = 0; it < params.max_iterations; ++it) {
    Eigen::MatrixXd a = elastic;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nodes, data.cols());
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const int k = assign[static_cast<std::size_t>(i)];
      a(k, k) += 1.0 / n;
      rhs.row(k) += data.row(i) / n;
    }
    // Proximal pull toward the current nodes keeps the system definite when
    // empty nodes leave directions unconstrained; it cannot raise the energy.
    const double prox = 1e-9 * std::max(a.trace() / nodes, 1.0 / n);
    a.diagonal().array() += prox;
    rhs += prox * y;
    y = a.ldlt().solve(rhs);

    assign = assign_nearest(data, y);
    const double prev = map.energy_trace.back();
    const double cur = energy(y, assign);
    map.energy_trace.push_back(cur);
    if (std::abs(prev - cur) <= params.tolerance * std::max(std::abs(prev), 1e-300)) break;
  }

  map.node_positions = std::move(y);
  map.assignment = std::move(assign);
  return map;
}

Eigen::Vector2d project_internal(const ElasticMap& map, const Eigen::VectorXd& point) {
  const auto& y = map.node_positions;
  if (y.rows() == 0) fail(ErrorKind::InvalidInput, "elastic map is not fitted");
  if (point.size() != y.cols()) fail(ErrorKind::InvalidInput, "point dimension does not match the map");
  Eigen::Index nearest = 0;
  (y.rowwise() - point.transpose()).rowwise().squaredNorm().minCoeff(&nearest);
  const int cols = map.grid_cols;
  const int r = static_cast<int>(nearest) / cols, c = static_cast<int>(nearest) % cols;

  Projection best;
  int corners[3] = {static_cast<int>(nearest), static_cast<int>(nearest), static_cast<int>(nearest)};
  best.dist2 = std::numeric_limits<double>::infinity();
  for (int r0 = r - 1; r0 <= r; ++r0) {
    for (int c0 = c - 1; c0 <= c; ++c0) {
      if (r0 < 0 || c0 < 0 || r0 + 1 >= map.grid_rows || c0 + 1 >= cols) continue;
      const int q00 = node_id(r0, c0, cols), q01 = node_id(r0, c0 + 1, cols);
      const int q10 = node_id(r0 + 1, c0, cols), q11 = node_id(r0 + 1, c0 + 1, cols);
      for (const auto& tri : {std::array<int, 3>{q00, q01, q11}, std::array<int, 3>{q00, q10, q11}}) {
        const Projection pr = project_triangle(point, y.row(tri[0]).transpose(),
                                               y.row(tri[1]).transpose(), y.row(tri[2]).transpose());
        if (pr.dist2 < best.dist2) {
          best = pr;
          std::copy(tri.begin(), tri.end(), corners);
        }
      }
    }
  }
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i) out += best.weights[i] * map.node_grid_coords.row(corners[i]).transpose();
  return out;
}

Embedding embed_internal(const ElasticMap& map, const Eigen::MatrixXd& data,
                         const std::vector<std::string>& tickers, const LabelSet& labels) {
  if (static_cast<std::size_t>(data.rows()) != tickers.size()) {
    fail(ErrorKind::InvalidInput, "one ticker per data row required");
  }
  Embedding e;
  e.tickers = tickers;
  e.coords.resize(data.rows(), 2);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    e.labels.push_back(labels.label_of(tickers[static_cast<std::size_t>(i)]));
    e.coords.row(i) = project_internal(map, data.row(i).transpose()).transpose();
  }
  return e;
}

Embedding embed_principal(const Eigen::MatrixXd& data, const std::vector<std::string>& tickers,
                          const LabelSet& labels, int n_components) {
  if (static_cast<std::size_t>(data.rows()) != tickers.size()) {
    fail(ErrorKind::InvalidInput, "one ticker per data row required");
  }
  Embedding e;
  e.tickers = tickers;
  for (const auto& t : tickers) e.labels.push_back(labels.label_of(t));
  e.coords = pca(data, n_components).scores;
  return e;
}

double mean_within_distance(const Embedding& e, Label cls) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    if (e.labels[i] != cls) continue;
    for (std::size_t j = i + 1; j < e.labels.size(); ++j) {
      if (e.labels[j] != cls) continue;
      sum += (e.coords.row(static_cast<Eigen::Index>(i)) - e.coords.row(static_cast<Eigen::Index>(j))).norm();
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / n;
}

double mean_between_distance(const Embedding& e, Label a, Label b) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < e.labels.size(); ++i) {
    if (e.labels[i] != a) continue;
    for (std::size_t j = 0; j < e.labels.size(); ++j) {
      if (e.labels[j] != b) continue;
      sum += (e.coords.row(static_cast<Eigen::Index>(i)) - e.coords.row(static_cast<Eigen::Index>(j))).norm();
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / n;
}

void write_embedding_csv(const std::filesystem::path& path, const Embedding& e) {
  std::ostringstream os;
  os << "ticker,label";
  for (Eigen::Index c = 0; c < e.coords.cols(); ++c) os << ",coord" << c + 1;
  os << '\n';
  for (std::size_t i = 0; i < e.tickers.size(); ++i) {
    os << e.tickers[i] << ',' << to_string(e.labels[i]);
    for (Eigen::Index c = 0; c < e.coords.cols(); ++c) {
      os << ',' << detail::format_double(e.coords(static_cast<Eigen::Index>(i), c));
    }
    os << '\n';
  }
  detail::write_text(path, os.str());
}

void write_energy_csv(const std::filesystem::path& path, const std::vector<double>& trace) {
  std::ostringstream os;
  os << "iteration,energy\n";
  for (std::size_t i = 0; i < trace.size(); ++i) os << i << ',' << detail::format_double(trace[i]) << '\n';
  detail::write_text(path, os.str());
}

}  // namespace wlsep

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wlsep/labeling.hpp"

namespace wlsep {

struct PcaResult {
  Eigen::MatrixXd scores;              // rows x n_components
  Eigen::MatrixXd components;          // dims x n_components, unit columns
  Eigen::VectorXd explained_variance;  // every component, descending
  Eigen::VectorXd mean;
};

/// Principal components of the row vectors (population variance).
/// Throws Degenerate when fewer than `n_components` directions carry variance.
PcaResult pca(const Eigen::MatrixXd& data, int n_components = 3);

struct ElasticNetParams {
  int grid_rows = 10;
  int grid_cols = 10;
  double lambda = 0.0;  // stretching
  double mu = 8.1;      // bending
  int max_iterations = 200;
  double tolerance = 1e-6;
};

void validate(const ElasticNetParams& params);

struct ElasticMap {
  int grid_rows = 0;
  int grid_cols = 0;
  Eigen::MatrixXd node_positions;  // nodes x dims, node id = row * grid_cols + col
  Eigen::MatrixXd node_grid_coords;  // nodes x 2, (col, row)
  std::vector<int> assignment;       // data point -> node
  std::vector<double> energy_trace;
  std::vector<std::string> warnings;
};

/// Energy terms of a node configuration against fixed assignments.
struct ElasticEnergy {
  double approximation = 0.0;
  double stretching = 0.0;
  double bending = 0.0;
  double total = 0.0;
};

ElasticEnergy elastic_energy(const Eigen::MatrixXd& data, const Eigen::MatrixXd& nodes,
                             const std::vector<int>& assignment, int grid_rows, int grid_cols,
                             double lambda, double mu);

/// Alternates nearest-node assignment with the exact quadratic node update.
ElasticMap fit_elastic_map(const Eigen::MatrixXd& data, const ElasticNetParams& params = {});

/// Internal lattice coordinates of `point`: the closest point on the map
/// surface (triangulated cells around the nearest node), mapped back to the lattice.
Eigen::Vector2d project_internal(const ElasticMap& map, const Eigen::VectorXd& point);

struct Embedding {
  std::vector<std::string> tickers;
  std::vector<Label> labels;
  Eigen::MatrixXd coords;  // one row per company, 2 or 3 columns
};

/// Data rows are companies; `tickers` gives row identity.
Embedding embed_internal(const ElasticMap& map, const Eigen::MatrixXd& data,
                         const std::vector<std::string>& tickers, const LabelSet& labels);
Embedding embed_principal(const Eigen::MatrixXd& data, const std::vector<std::string>& tickers,
                          const LabelSet& labels, int n_components = 3);

/// Mean pairwise coordinate distance within one class and between two.
double mean_within_distance(const Embedding& e, Label cls);
double mean_between_distance(const Embedding& e, Label a, Label b);

/// `ticker,label,coord1,coord2[,coord3]`
void write_embedding_csv(const std::filesystem::path& path, const Embedding& e);
/// `iteration,energy`
void write_energy_csv(const std::filesystem::path& path, const std::vector<double>& trace);

}  // namespace wlsep

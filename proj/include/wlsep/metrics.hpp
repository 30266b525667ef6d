#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wlsep/ingest.hpp"
#include "wlsep/labeling.hpp"

namespace wlsep {

enum class Measure { Distance, Proximity };

const char* to_string(Measure m) noexcept;
Measure parse_measure(std::string_view text);

/// Pearson product-moment coefficient, clamped to [-1, 1].
double pearson(std::span<const double> x, std::span<const double> y);

/// sqrt(2 (1 - c)), in [0, 2].
double correlation_distance(double c);
/// sqrt(1 - c^2), in [0, 1]. Not a metric: anticorrelated series sit at 0.
double correlation_proximity(double c);
double apply_measure(Measure m, double c);

/// Largest |lhs - rhs| over both half-angle identities, evaluated at c = cos 2a:
/// 2 sin a = sqrt(2 (1 - c)) and sin 2a = sqrt(1 - c^2).
double verify_angle_identities(std::span<const double> alphas);

struct DistanceMatrix {
  std::vector<std::string> tickers;
  Measure measure = Measure::Distance;
  Eigen::MatrixXd values;

  Eigen::Index size() const { return values.rows(); }
  Eigen::Index index_of(std::string_view ticker) const;  // -1 when absent
};

/// Pairwise Pearson correlations of the return columns.
Eigen::MatrixXd correlation_matrix(const ReturnMatrix& returns);

DistanceMatrix distance_matrix(const ReturnMatrix& returns, Measure measure);

struct PairPartition {
  std::vector<double> ww;
  std::vector<double> ll;
  std::vector<double> wl;
};

/// Splits the unordered winner/loser pairs into in-class and cross-class
/// distances. Middle companies are ignored.
PairPartition partition_pairs(const DistanceMatrix& dm, const LabelSet& labels);

void write_distance_matrix_csv(const std::filesystem::path& path, const DistanceMatrix& dm);
/// Three columns `ww,ll,wl`; shorter columns are padded with empty fields.
void write_pair_partition_csv(const std::filesystem::path& path, const PairPartition& pp);

}  // namespace wlsep

#include <algorithm>
#include <cmath>

#include "wlsep/error.hpp"
#include "wlsep/report.hpp"

namespace wlsep {

Histogram build_histogram(const std::vector<double>& values, int bins, double lo, double hi) {
  if (bins < 1) fail(ErrorKind::InvalidInput, "histogram needs at least one bin");
  if (!(lo < hi)) fail(ErrorKind::InvalidInput, "histogram range must be increasing");
  Histogram h;
  h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.bin_edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  h.bin_edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const double v : values) {
    if (!(v >= lo && v <= hi)) fail(ErrorKind::InvalidInput, "histogram value outside its range");
    auto idx = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
    idx = std::clamp(idx, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(idx)];
  }
  return h;
}

Histogram build_histogram(const std::vector<double>& values, int bins) {
  if (values.empty()) fail(ErrorKind::InvalidInput, "histogram of an empty sample");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return build_histogram(values, bins, lo, hi);
}

PairHistogram build_pair_histogram(const PairPartition& pp, int bins) {
  std::vector<double> all;
  all.insert(all.end(), pp.ww.begin(), pp.ww.end());
  all.insert(all.end(), pp.ll.begin(), pp.ll.end());
  all.insert(all.end(), pp.wl.begin(), pp.wl.end());
  const Histogram range = build_histogram(all, bins);
  const double lo = range.bin_edges.front(), hi = range.bin_edges.back();
  PairHistogram h;
  h.bin_edges = range.bin_edges;
  h.ww = build_histogram(pp.ww, bins, lo, hi).counts;
  h.ll = build_histogram(pp.ll, bins, lo, hi).counts;
  h.wl = build_histogram(pp.wl, bins, lo, hi).counts;
  return h;
}

}  // namespace wlsep

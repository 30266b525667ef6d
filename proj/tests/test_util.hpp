#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <unistd.h>

#include "wlsep/date.hpp"
#include "wlsep/ingest.hpp"

namespace wlsep::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("wlsep_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Date ymd(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

/// Consecutive calendar days (no weekend gaps), enough for shape tests.
inline std::vector<Date> daily(Date start, int n) {
  std::vector<Date> out;
  for (int i = 0; i < n; ++i) out.push_back(add_days(start, i));
  return out;
}

/// Random positive panel for property tests.
inline PricePanel random_panel(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(1.0, 200.0);
  PricePanel p;
  p.dates = daily(ymd(2010, 1, 1), rows);
  for (int c = 0; c < cols; ++c) p.tickers.push_back("T" + std::to_string(c));
  p.prices.resize(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) p.prices(r, c) = u(rng);
  return p;
}

}  // namespace wlsep::testing

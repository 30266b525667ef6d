#pragma once

#include <cstdint>

#include "wlsep/date.hpp"
#include "wlsep/ingest.hpp"
#include "wlsep/labeling.hpp"

namespace wlsep {

/// Two-factor block model for planted winner/loser structure. Returns of a
/// class member are drift + volatility * (sqrt(intra_rho) f_class +
/// sqrt(1 - intra_rho) eps); the class factors are correlated so that
/// cross-class return correlation equals cross_rho. Middle companies carry
/// only idiosyncratic noise.
struct SynthSpec {
  int n_winners = 16;
  int n_losers = 16;
  int n_middle = 0;
  int n_days = 63;  // price rows
  double intra_rho = 0.8;
  double cross_rho = 0.0;
  double drift_winner = 0.004;
  double drift_loser = -0.004;
  double volatility = 0.02;
  std::uint64_t seed = 1;
  Date start = Date{std::chrono::year{2009}, std::chrono::month{7}, std::chrono::day{2}};
};

void validate(const SynthSpec& spec);

/// Weekday calendar of `n` trading days beginning at `start` (or the next weekday).
std::vector<Date> weekday_calendar(Date start, int n);

PricePanel gen_null_panel(int n_companies, int n_days, double volatility, std::uint64_t seed,
                          Date start = Date{std::chrono::year{2009}, std::chrono::month{7},
                                            std::chrono::day{2}});

struct PlantedPanel {
  PricePanel panel;
  LabelSet true_labels;
};

PlantedPanel gen_planted_panel(const SynthSpec& spec);

}  // namespace wlsep

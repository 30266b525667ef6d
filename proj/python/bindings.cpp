#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wlsep/classify.hpp"
#include "wlsep/embed.hpp"
#include "wlsep/error.hpp"
#include "wlsep/ingest.hpp"
#include "wlsep/labeling.hpp"
#include "wlsep/metrics.hpp"
#include "wlsep/report.hpp"
#include "wlsep/synth.hpp"

namespace py = pybind11;
using namespace wlsep;

namespace {

std::vector<std::string> dates_to_iso(const std::vector<Date>& dates) {
  std::vector<std::string> out;
  out.reserve(dates.size());
  for (const auto& d : dates) out.push_back(format_date(d));
  return out;
}

std::vector<Date> iso_to_dates(const std::vector<std::string>& iso) {
  std::vector<Date> out;
  out.reserve(iso.size());
  for (const auto& s : iso) out.push_back(parse_date(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_wlsep, m) {
  m.doc() = "Winner/loser separability analysis: ingest, labeling, correlation distances, "
            "LOOCV k-NN, elastic maps and synthetic markets.";

  py::register_exception<Error>(m, "WlsepError", PyExc_RuntimeError);

  py::enum_<Measure>(m, "Measure")
      .value("Distance", Measure::Distance)
      .value("Proximity", Measure::Proximity);
  py::enum_<Label>(m, "Label")
      .value("Winner", Label::Winner)
      .value("Loser", Label::Loser)
      .value("Middle", Label::Middle);
  py::enum_<FillMode>(m, "FillMode")
      .value("CrossSectionalMean", FillMode::CrossSectionalMean)
      .value("TemporalMean", FillMode::TemporalMean);

  py::class_<PricePanel>(m, "PricePanel")
      .def(py::init([](const std::vector<std::string>& dates, std::vector<std::string> tickers,
                       Eigen::MatrixXd prices) {
             PricePanel p{iso_to_dates(dates), std::move(tickers), std::move(prices)};
             validate(p);
             return p;
           }),
           py::arg("dates"), py::arg("tickers"), py::arg("prices"))
      .def_property_readonly("dates", [](const PricePanel& p) { return dates_to_iso(p.dates); })
      .def_readonly("tickers", &PricePanel::tickers)
      .def_readonly("prices", &PricePanel::prices);

  py::class_<ReturnMatrix>(m, "ReturnMatrix")
      .def_property_readonly("dates", [](const ReturnMatrix& r) { return dates_to_iso(r.dates); })
      .def_readonly("tickers", &ReturnMatrix::tickers)
      .def_readonly("returns", &ReturnMatrix::returns);

  py::class_<RawSeries>(m, "RawSeries")
      .def(py::init([](std::string ticker, const std::vector<std::string>& dates,
                       std::vector<std::optional<double>> closes) {
             RawSeries s{std::move(ticker), iso_to_dates(dates), std::move(closes)};
             validate(s);
             return s;
           }),
           py::arg("ticker"), py::arg("dates"), py::arg("closes"))
      .def_readonly("ticker", &RawSeries::ticker)
      .def_property_readonly("dates", [](const RawSeries& s) { return dates_to_iso(s.dates); })
      .def_readonly("closes", &RawSeries::closes);

  m.def("align_to_index_calendar",
        [](const RawSeries& s, const std::vector<std::string>& cal) {
          return align_to_index_calendar(s, iso_to_dates(cal));
        },
        py::arg("series"), py::arg("index_dates"));
  m.def("clean_panel",
        [](const std::vector<RawSeries>& aligned, double threshold, FillMode fill) {
          auto r = clean_panel(aligned, threshold, fill);
          return py::make_tuple(r.panel, r.dropped);
        },
        py::arg("aligned"), py::arg("missing_threshold") = 0.20,
        py::arg("fill") = FillMode::CrossSectionalMean);
  m.def("compute_log_returns", &compute_log_returns, py::arg("panel"));
  m.def("slice_initial_window",
        [](const PricePanel& p, int months) { return slice_initial_window(p, months); },
        py::arg("panel"), py::arg("months"));

  py::class_<CompanyScore>(m, "CompanyScore")
      .def_readonly("ticker", &CompanyScore::ticker)
      .def_readonly("avp_begin", &CompanyScore::avp_begin)
      .def_readonly("avp_end", &CompanyScore::avp_end)
      .def_readonly("growth", &CompanyScore::growth);
  py::class_<LabelSet>(m, "LabelSet")
      .def(py::init<>())
      .def(py::init([](std::vector<std::string> w, std::vector<std::string> l,
                       std::vector<std::string> mid) { return LabelSet{w, l, mid}; }),
           py::arg("winners"), py::arg("losers"), py::arg("middle") = std::vector<std::string>{})
      .def_readwrite("winners", &LabelSet::winners)
      .def_readwrite("losers", &LabelSet::losers)
      .def_readwrite("middle", &LabelSet::middle);

  m.def("average_price", &average_price, py::arg("prices"));
  m.def("score_companies",
        [](const PricePanel& p, std::pair<std::string, std::string> b,
           std::pair<std::string, std::string> e) {
          return score_companies(p, {parse_date(b.first), parse_date(b.second)},
                                 {parse_date(e.first), parse_date(e.second)});
        },
        py::arg("panel"), py::arg("begin_window"), py::arg("end_window"));
  m.def("label_thirds", &label_thirds, py::arg("scores"));
  m.def("label_growths",
        [](const std::vector<std::string>& tickers, const std::vector<double>& growths) {
          if (tickers.size() != growths.size()) fail(ErrorKind::InvalidInput, "length mismatch");
          std::vector<CompanyScore> s;
          for (std::size_t i = 0; i < tickers.size(); ++i) s.push_back({tickers[i], 1.0, growths[i], growths[i]});
          return label_thirds(s);
        },
        py::arg("tickers"), py::arg("growths"));

  m.def("pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
        py::arg("x"), py::arg("y"));
  m.def("correlation_distance", &correlation_distance, py::arg("c"));
  m.def("correlation_proximity", &correlation_proximity, py::arg("c"));
  m.def("verify_angle_identities",
        [](const std::vector<double>& a) { return verify_angle_identities(a); }, py::arg("alphas"));

  py::class_<DistanceMatrix>(m, "DistanceMatrix")
      .def_readonly("tickers", &DistanceMatrix::tickers)
      .def_readonly("measure", &DistanceMatrix::measure)
      .def_readonly("values", &DistanceMatrix::values);
  m.def("distance_matrix", &distance_matrix, py::arg("returns"), py::arg("measure"));
  py::class_<PairPartition>(m, "PairPartition")
      .def_readonly("ww", &PairPartition::ww)
      .def_readonly("ll", &PairPartition::ll)
      .def_readonly("wl", &PairPartition::wl);
  m.def("partition_pairs", &partition_pairs, py::arg("dm"), py::arg("labels"));

  py::class_<ProportionEstimate>(m, "ProportionEstimate")
      .def_readonly("p", &ProportionEstimate::p)
      .def_readonly("n", &ProportionEstimate::n)
      .def_readonly("mu", &ProportionEstimate::mu)
      .def_readonly("sigma", &ProportionEstimate::sigma);
  m.def("proportion_estimate", &proportion_estimate, py::arg("errors"), py::arg("n"));

  py::class_<LoocvReport>(m, "LoocvReport")
      .def_readonly("window_months", &LoocvReport::window_months)
      .def_readonly("measure", &LoocvReport::measure)
      .def_readonly("total_errors", &LoocvReport::total_errors)
      .def_readonly("winner_errors", &LoocvReport::winner_errors)
      .def_readonly("loser_errors", &LoocvReport::loser_errors)
      .def_readonly("n_winners", &LoocvReport::n_winners)
      .def_readonly("n_losers", &LoocvReport::n_losers)
      .def_property_readonly("total_rate", &LoocvReport::total_rate)
      .def_property_readonly("winner_rate", &LoocvReport::winner_rate)
      .def_property_readonly("loser_rate", &LoocvReport::loser_rate);
  m.def("loocv",
        [](const DistanceMatrix& dm, const LabelSet& labels, int k) {
          return loocv(dm, labels, KnnConfig{k});
        },
        py::arg("dm"), py::arg("labels"), py::arg("k") = 1);
  m.def("loocv_sweep",
        [](const PricePanel& p, const LabelSet& labels, const std::vector<int>& windows,
           const std::vector<Measure>& measures, int k) {
          return loocv_sweep(p, labels, windows, measures, KnnConfig{k});
        },
        py::arg("panel"), py::arg("labels"), py::arg("windows"),
        py::arg("measures") = std::vector<Measure>{Measure::Distance, Measure::Proximity},
        py::arg("k") = 1);

  py::class_<ElasticNetParams>(m, "ElasticNetParams")
      .def(py::init<>())
      .def_readwrite("grid_rows", &ElasticNetParams::grid_rows)
      .def_readwrite("grid_cols", &ElasticNetParams::grid_cols)
      .def_readwrite("lambda_", &ElasticNetParams::lambda)
      .def_readwrite("mu", &ElasticNetParams::mu)
      .def_readwrite("max_iterations", &ElasticNetParams::max_iterations)
      .def_readwrite("tolerance", &ElasticNetParams::tolerance);
  py::class_<ElasticMap>(m, "ElasticMap")
      .def_readonly("node_positions", &ElasticMap::node_positions)
      .def_readonly("node_grid_coords", &ElasticMap::node_grid_coords)
      .def_readonly("assignment", &ElasticMap::assignment)
      .def_readonly("energy_trace", &ElasticMap::energy_trace)
      .def_readonly("warnings", &ElasticMap::warnings);
  m.def("fit_elastic_map", &fit_elastic_map, py::arg("data"),
        py::arg("params") = ElasticNetParams{});
  m.def("project_internal", &project_internal, py::arg("map"), py::arg("point"));
  m.def("pca",
        [](const Eigen::MatrixXd& data, int n) {
          auto r = pca(data, n);
          return py::make_tuple(r.scores, r.explained_variance);
        },
        py::arg("data"), py::arg("n_components") = 3);

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("n_winners", &SynthSpec::n_winners)
      .def_readwrite("n_losers", &SynthSpec::n_losers)
      .def_readwrite("n_middle", &SynthSpec::n_middle)
      .def_readwrite("n_days", &SynthSpec::n_days)
      .def_readwrite("intra_rho", &SynthSpec::intra_rho)
      .def_readwrite("cross_rho", &SynthSpec::cross_rho)
      .def_readwrite("drift_winner", &SynthSpec::drift_winner)
      .def_readwrite("drift_loser", &SynthSpec::drift_loser)
      .def_readwrite("volatility", &SynthSpec::volatility)
      .def_readwrite("seed", &SynthSpec::seed);
  m.def("gen_null_panel",
        [](int n, int days, double vol, std::uint64_t seed) { return gen_null_panel(n, days, vol, seed); },
        py::arg("n_companies"), py::arg("n_days"), py::arg("volatility") = 0.02, py::arg("seed") = 1);
  m.def("gen_planted_panel",
        [](const SynthSpec& s) {
          auto p = gen_planted_panel(s);
          return py::make_tuple(p.panel, p.true_labels);
        },
        py::arg("spec"));

  m.def("run_pipeline",
        [](const std::map<std::string, std::string>& kv) {
          RunConfig cfg;
          apply_config(cfg, kv);
          auto r = run_pipeline(cfg);
          std::vector<std::string> files;
          for (const auto& f : r.files) files.push_back(f.string());
          return py::make_tuple(r.reports, files);
        },
        py::arg("config"),
        "Runs the full pipeline from config key/values; returns (reports, files).");
}

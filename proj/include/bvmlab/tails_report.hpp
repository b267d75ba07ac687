#pragma once

#include <string>
#include <vector>

#include "bvmlab/chisq.hpp"
#include "bvmlab/csv.hpp"

namespace bvmlab {

/// One bound-vs-exact comparison row for the tails report.
struct TailBoundRow {
  std::string bound_name; // central_two_sided | noncentral_upper | central_lower
  double p = 0.0;
  double lambda = 0.0;
  double arg = 0.0; // a for the two-sided bound, c otherwise
  double exact = 0.0;
  double bound_raw = 0.0;
  double bound = 0.0; // clamped to [0,1]
  bool dominated = false;
};

inline TailBoundRow central_two_sided_row(double p, double a) {
  TailBoundRow row{"central_two_sided", p, 0.0, a};
  row.exact = central_two_sided_exact(p, a);
  row.bound_raw = central_two_sided_bound(p, a);
  row.bound = clamp_probability(row.bound_raw);
  row.dominated = row.exact <= row.bound_raw;
  return row;
}

inline TailBoundRow noncentral_upper_row(double p, double lambda, double c) {
  TailBoundRow row{"noncentral_upper", p, lambda, c};
  row.exact = noncentral_chisq_sf(p, lambda, p + lambda + c);
  row.bound_raw = noncentral_upper_bound(p, lambda, c);
  row.bound = clamp_probability(row.bound_raw);
  row.dominated = row.exact <= row.bound_raw;
  return row;
}

inline TailBoundRow central_lower_row(double p, double lambda, double c) {
  TailBoundRow row{"central_lower", p, lambda, c};
  row.exact = p - c > 0.0 ? noncentral_chisq_cdf(p, lambda, p - c) : 0.0;
  row.bound_raw = central_lower_bound(p, c);
  row.bound = clamp_probability(row.bound_raw);
  row.dominated = row.exact <= row.bound_raw;
  return row;
}

/// The default comparison grid: p in {1,4,20}, lambda in {0,5,50},
/// a,c in {1,5,20}.
inline std::vector<TailBoundRow> default_tail_grid() {
  const std::vector<double> ps = {1, 4, 20};
  const std::vector<double> lambdas = {0, 5, 50};
  const std::vector<double> args = {1, 5, 20};
  std::vector<TailBoundRow> rows;
  for (double p : ps)
    for (double a : args) rows.push_back(central_two_sided_row(p, a));
  for (double p : ps)
    for (double lambda : lambdas)
      for (double c : args) rows.push_back(noncentral_upper_row(p, lambda, c));
  for (double p : ps)
    for (double lambda : lambdas)
      for (double c : args) rows.push_back(central_lower_row(p, lambda, c));
  return rows;
}

inline std::string tail_rows_to_csv(const std::vector<TailBoundRow>& rows) {
  std::string out =
      csv_join({"bound", "p", "lambda", "arg", "exact", "bound_raw", "bound_clamped",
                "dominated"});
  for (const auto& r : rows)
    out += csv_join({r.bound_name, csv_double(r.p), csv_double(r.lambda), csv_double(r.arg),
                     csv_double(r.exact), csv_double(r.bound_raw), csv_double(r.bound),
                     r.dominated ? "1" : "0"});
  return out;
}

/// Calibration of the lower-fraction bound constant: the minimal c1 per
/// (p, lambda, w) cell, and whether the shipped default dominates there.
struct FractionCalibrationRow {
  double p = 0.0;
  double lambda = 0.0;
  double w = 0.0;
  double c1_min = 0.0;
  double exact = 0.0;
  double bound_at_default = 0.0;
  bool dominated_at_default = false;
};

inline std::vector<FractionCalibrationRow> fraction_bound_calibration(
    double c1 = default_fraction_bound_c1) {
  const std::vector<double> ps = {1, 5};
  const std::vector<double> lambdas = {20, 50, 100, 200};
  const std::vector<double> ws = {0.25, 0.5, 0.75};
  std::vector<FractionCalibrationRow> rows;
  for (double p : ps)
    for (double lambda : lambdas)
      for (double w : ws) {
        FractionCalibrationRow row{p, lambda, w};
        row.c1_min = calibrate_fraction_bound_c1(p, lambda, w);
        row.exact = noncentral_chisq_cdf(p, lambda, w * lambda);
        row.bound_at_default = noncentral_fraction_bound(p, lambda, w, c1);
        row.dominated_at_default = row.exact <= row.bound_at_default;
        rows.push_back(row);
      }
  return rows;
}

inline std::string fraction_calibration_to_csv(const std::vector<FractionCalibrationRow>& rows) {
  std::string out = csv_join(
      {"p", "lambda", "w", "c1_min", "exact", "bound_at_default", "dominated_at_default"});
  for (const auto& r : rows)
    out += csv_join({csv_double(r.p), csv_double(r.lambda), csv_double(r.w),
                     csv_double(r.c1_min), csv_double(r.exact),
                     csv_double(r.bound_at_default), r.dominated_at_default ? "1" : "0"});
  return out;
}

} // namespace bvmlab

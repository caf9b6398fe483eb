#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ggsel/io.hpp"
#include "ggsel/version.hpp"

namespace ggsel::io {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

RateTable rate_table(const Sample& sample, const FitResult& fit_null,
                     const FitResult& fit_full, const AgeScale& ages) {
  sample.validate();
  ages.validate();

  // Everyone enters observation at the truncation age and is followed to
  // death; exposure in [x, x+1) is the overlap with that interval.
  const double entry = ages.truncation_age;
  double max_age = entry;
  for (double y : sample.lifespans) {
    max_age = std::max(max_age, ages.origin_age + y);
  }
  const int x0 = static_cast<int>(std::floor(entry));
  const int x1 = static_cast<int>(std::floor(max_age));
  const int nbin = x1 - x0 + 1;
  std::vector<long long> deaths(nbin, 0);
  std::vector<double> exposure(nbin, 0.0);

  for (double y : sample.lifespans) {
    const double death_age = ages.origin_age + y;
    deaths[static_cast<int>(std::floor(death_age)) - x0] += 1;
    for (int x = x0; x <= static_cast<int>(std::floor(death_age)); ++x) {
      const double lo = std::max(entry, static_cast<double>(x));
      const double hi = std::min(death_age, static_cast<double>(x + 1));
      if (hi > lo) exposure[x - x0] += hi - lo;
    }
  }

  RateTable table;
  for (int k = 0; k < nbin; ++k) {
    if (!(exposure[k] > 0.0)) continue;
    RateRow row;
    row.age = x0 + k;
    row.deaths = deaths[k];
    row.exposure = exposure[k];
    row.rate = static_cast<double>(deaths[k]) / exposure[k];
    if (deaths[k] > 0) {
      // Log-normal interval, the usual demographic convention.
      const double half = 1.96 / std::sqrt(static_cast<double>(deaths[k]));
      row.ci_lo = row.rate * std::exp(-half);
      row.ci_hi = row.rate * std::exp(half);
    }
    const double y_mid = row.age + 0.5 - ages.origin_age;
    row.fitted_gompertz = hazard(fit_null.params, y_mid);
    row.fitted_gg = hazard(fit_full.params, y_mid);
    table.rows.push_back(row);
  }
  return table;
}

std::string RateTable::to_csv() const {
  std::ostringstream os;
  os << "# ggsel rates schema_version=" << kRatesSchemaVersion << "\n";
  os << "age,deaths,exposure,rate,ci_lo,ci_hi,fitted_gompertz,fitted_gg\n";
  for (const RateRow& r : rows) {
    os << r.age << ',' << r.deaths << ',' << fmt(r.exposure) << ',' << fmt(r.rate)
       << ',' << (r.ci_lo ? fmt(*r.ci_lo) : "") << ',' << (r.ci_hi ? fmt(*r.ci_hi) : "")
       << ',' << fmt(r.fitted_gompertz) << ',' << fmt(r.fitted_gg) << '\n';
  }
  return os.str();
}

}  // namespace ggsel::io

#include <algorithm>
#include <cmath>
#include <ctime>

#include "ggsel/errors.hpp"
#include "ggsel/io.hpp"
#include "ggsel/version.hpp"

namespace ggsel::io {

namespace {

std::string iso_utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<FocusSpec> resolve_foci(const AnalysisConfig& cfg, const Sample& sample) {
  if (!cfg.foci.empty()) return cfg.foci;
  // Default: the frailty variance plus the log-hazard curvature at the
  // empirical 99th-percentile age, rounded to a whole year.
  std::vector<double> ys = sample.lifespans;
  std::sort(ys.begin(), ys.end());
  const std::size_t idx =
      std::min(ys.size() - 1,
               static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(ys.size()))) - 1);
  const double age99 = std::round(cfg.ages.origin_age + ys[idx]);
  return {FocusSpec{FocusKind::Sigma2, 0.0},
          FocusSpec{FocusKind::LogHazardCurvature, age99 - cfg.ages.origin_age}};
}

bool wants(const AnalysisConfig& cfg, const std::string& name) {
  return std::count(cfg.criteria.begin(), cfg.criteria.end(), name) > 0;
}

json fit_summary_to_json(const FitSummary& f, bool full_model) {
  json j;
  j["a"] = f.a;
  j["b"] = f.b;
  j["sigma2"] = f.sigma2;
  j["loglik"] = f.loglik;
  json se;
  se["a"] = f.se[0];
  se["b"] = f.se[1];
  if (full_model) se["sigma2"] = f.se[2];
  j["se"] = se;
  j["se_valid"] = f.se_valid;
  j["converged"] = f.converged;
  j["n_starts_used"] = f.n_starts_used;
  if (full_model) j["boundary_hit"] = f.boundary_hit;
  return j;
}

FitSummary fit_summary_from_json(const json& j, bool full_model) {
  FitSummary f;
  f.a = j.at("a");
  f.b = j.at("b");
  f.sigma2 = j.at("sigma2");
  f.loglik = j.at("loglik");
  f.se[0] = j.at("se").at("a");
  f.se[1] = j.at("se").at("b");
  f.se[2] = full_model ? static_cast<double>(j.at("se").at("sigma2")) : 0.0;
  f.se_valid = j.at("se_valid");
  f.converged = j.at("converged");
  f.n_starts_used = j.at("n_starts_used");
  f.boundary_hit = full_model ? static_cast<bool>(j.at("boundary_hit")) : false;
  return f;
}

json criterion_to_json(const SelectionReport& r) {
  json j;
  j["criterion"] = r.criterion;
  if (r.focus) {
    j["focus"] = *r.focus;
  } else {
    j["focus"] = nullptr;
  }
  j["score_null"] = r.score_null;
  j["score_full"] = r.score_full;
  j["chosen"] = r.chosen == ModelChoice::Full ? "full" : "null";
  if (r.intermediates) {
    json im;
    im["delta"] = r.intermediates->delta;
    im["kappa"] = r.intermediates->kappa;
    im["tau0"] = r.intermediates->tau0;
    im["omega"] = r.intermediates->omega;
    j["intermediates"] = im;
  } else {
    j["intermediates"] = nullptr;
  }
  return j;
}

SelectionReport criterion_from_json(const json& j) {
  SelectionReport r;
  r.criterion = j.at("criterion");
  if (!j.at("focus").is_null()) r.focus = j.at("focus").get<std::string>();
  r.score_null = j.at("score_null");
  r.score_full = j.at("score_full");
  r.chosen = j.at("chosen") == "full" ? ModelChoice::Full : ModelChoice::Null;
  if (!j.at("intermediates").is_null()) {
    const json& im = j.at("intermediates");
    r.intermediates = Intermediates{im.at("delta"), im.at("kappa"), im.at("tau0"),
                                    im.at("omega")};
  }
  return r;
}

FitSummary summarize(const FitResult& fit) {
  FitSummary s;
  s.a = fit.params.a;
  s.b = fit.params.b;
  s.sigma2 = fit.params.sigma2;
  s.loglik = fit.loglik;
  s.converged = fit.converged;
  s.n_starts_used = fit.n_starts_used;
  s.boundary_hit = fit.boundary_hit;
  // At a boundary optimum the usual normal approximation does not apply.
  s.se_valid = !fit.boundary_hit;
  if (s.se_valid) {
    s.se = standard_errors(fit);
  }
  return s;
}

}  // namespace

ReportDocument analyze(const Sample& sample, const AnalysisConfig& cfg) {
  sample.validate();
  cfg.ages.validate();
  for (const auto& c : cfg.criteria) {
    if (c != "fic_mae" && c != "pretest" && c != "aic_star" && c != "lrt") {
      throw ArgumentError("analyze: unknown criterion '" + c + "'");
    }
  }
  const std::vector<FocusSpec> foci = resolve_foci(cfg, sample);

  ReportDocument doc;
  doc.schema_version = kReportSchemaVersion;
  doc.software_name = "ggsel";
  doc.software_version = kVersion;
  doc.timestamp = iso_utc_now();

  const FitResult fn = fit_null(sample, cfg.fit);
  const FitResult ff = fit_full(sample, cfg.fit, &fn);
  ModelParams null_with_zero = fn.params;
  null_with_zero.sigma2 = 0.0;
  const InfoQuantities info =
      cfg.info_at_null ? info_quantities_at(null_with_zero, sample, ff.params.sigma2)
                       : info_quantities(ff, sample.n());

  doc.fit_null_summary = summarize(fn);
  doc.fit_full_summary = summarize(ff);

  // Warnings for focus ages outside the observed support.
  const double ymax =
      *std::max_element(sample.lifespans.begin(), sample.lifespans.end());
  for (const FocusSpec& f : foci) {
    if (f.kind == FocusKind::Sigma2) continue;
    if (f.y < 0.0 || f.y > ymax + 10.0) {
      doc.warnings.push_back("focus " + focus_label(f, cfg.ages.origin_age) +
                             " lies outside [origin, max observed age + 10]");
    }
  }

  // Criterion rows in the report's table order: AIC*, FIC_MAE per focus,
  // pre-test. The LRT gets its own section.
  if (wants(cfg, "aic_star")) {
    doc.criteria.push_back(aic_star(ff, fn, info));
  }
  if (wants(cfg, "fic_mae")) {
    for (const FocusSpec& f : foci) {
      const FocusGeometry geom = focus_geometry(f, fn, info);
      SelectionReport r = fic_mae(geom, info);
      r.focus = focus_label(f, cfg.ages.origin_age);
      doc.criteria.push_back(std::move(r));
    }
  }
  if (wants(cfg, "pretest")) {
    doc.criteria.push_back(pretest(info));
  }
  if (wants(cfg, "lrt")) {
    doc.lrt_result = lrt(ff, fn);
  }

  // Config echo with the resolved foci.
  json cfg_echo;
  cfg_echo["origin_age"] = cfg.ages.origin_age;
  cfg_echo["truncation_age"] = cfg.ages.truncation_age;
  cfg_echo["criteria"] = cfg.criteria;
  json foci_labels = json::array();
  for (const FocusSpec& f : foci) foci_labels.push_back(focus_label(f, cfg.ages.origin_age));
  cfg_echo["foci"] = foci_labels;
  cfg_echo["sigma2_starts"] = cfg.fit.sigma2_starts;
  cfg_echo["seed"] = cfg.seed;
  cfg_echo["info_at"] = cfg.info_at_null ? "null_fit" : "full_mle";
  doc.config_echo = cfg_echo;

  json ss;
  ss["n"] = sample.n();
  ss["origin_age"] = cfg.ages.origin_age;
  ss["truncation_age"] = cfg.ages.truncation_age;
  ss["truncation_offset"] = sample.truncation;
  ss["min_age"] =
      cfg.ages.origin_age +
      *std::min_element(sample.lifespans.begin(), sample.lifespans.end());
  ss["max_age"] = cfg.ages.origin_age + ymax;
  doc.sample_summary = ss;

  json inf;
  inf["j_full"] = info.j_full;
  inf["j00"] = info.j00;
  inf["j10"] = info.j10;
  inf["kappa2"] = info.kappa2;
  inf["kappa"] = info.kappa();
  inf["delta_hat"] = info.delta_hat;
  inf["delta_over_kappa"] = info.delta_over_kappa();
  inf["n"] = info.n;
  inf["evaluated_at"] = cfg.info_at_null ? "null_fit" : "full_mle";
  doc.info_summary = inf;

  return doc;
}

ReportDocument analyze(const IngestResult& in, const AnalysisConfig& cfg) {
  ReportDocument doc = analyze(in.sample, cfg);
  json inp;
  inp["path"] = in.path;
  inp["digest"] = in.digest;
  inp["rows"] = in.n_rows;
  inp["used"] = in.sample.n();
  inp["rejected_rows"] = in.rejected_rows;
  doc.input = inp;
  return doc;
}

json ReportDocument::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  json sw;
  sw["name"] = software_name;
  sw["version"] = software_version;
  j["software"] = sw;
  j["timestamp"] = timestamp;
  j["config"] = config_echo;
  j["input"] = input ? *input : json(nullptr);
  j["sample"] = sample_summary;
  json fits;
  fits["null"] = fit_summary_to_json(fit_null_summary, false);
  fits["full"] = fit_summary_to_json(fit_full_summary, true);
  j["fits"] = fits;
  j["info"] = info_summary;
  json crit = json::array();
  for (const auto& c : criteria) crit.push_back(criterion_to_json(c));
  j["criteria"] = crit;
  if (lrt_result) {
    json lr;
    lr["statistic"] = lrt_result->statistic;
    lr["p_value"] = lrt_result->p_value;
    j["lrt"] = lr;
  } else {
    j["lrt"] = nullptr;
  }
  j["warnings"] = warnings;
  return j;
}

ReportDocument ReportDocument::from_json(const json& j) {
  ReportDocument doc;
  doc.schema_version = j.at("schema_version");
  doc.software_name = j.at("software").at("name");
  doc.software_version = j.at("software").at("version");
  doc.timestamp = j.at("timestamp");
  doc.config_echo = j.at("config");
  if (!j.at("input").is_null()) doc.input = j.at("input");
  doc.sample_summary = j.at("sample");
  doc.fit_null_summary = fit_summary_from_json(j.at("fits").at("null"), false);
  doc.fit_full_summary = fit_summary_from_json(j.at("fits").at("full"), true);
  doc.info_summary = j.at("info");
  for (const auto& c : j.at("criteria")) doc.criteria.push_back(criterion_from_json(c));
  if (!j.at("lrt").is_null()) {
    doc.lrt_result = LrtResult{j.at("lrt").at("statistic"), j.at("lrt").at("p_value")};
  }
  for (const auto& w : j.at("warnings")) doc.warnings.push_back(w.get<std::string>());
  return doc;
}

}  // namespace ggsel::io

#include <set>
#include <sstream>

#include "ggsel/errors.hpp"
#include "ggsel/io.hpp"
#include "ggsel/version.hpp"

namespace ggsel::io {

sim::Scenario load_scenario_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("scenario config '" + path + "': " + e.what());
  }
  if (!j.is_object()) {
    throw DataError("scenario config '" + path + "': expected a JSON object");
  }

  static const std::set<std::string> allowed = {
      "name", "a", "b", "sigma2", "target_n", "window_age",
      "origin_age", "replications", "master_seed"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw DataError("scenario config '" + path + "': unknown key '" + key + "'");
    }
  }

  sim::Scenario sc;
  const std::string name = j.value("name", std::string("custom"));
  if (name == "S1" || name == "S2" || name == "S3") {
    sc = sim::preset_scenario(name);
  } else if (name == "custom") {
    sc.name = name;
  } else {
    throw DataError("scenario config '" + path + "': name must be S1|S2|S3|custom");
  }
  try {
    if (j.contains("a")) sc.params.a = j.at("a");
    if (j.contains("b")) sc.params.b = j.at("b");
    if (j.contains("sigma2")) sc.params.sigma2 = j.at("sigma2");
    if (j.contains("target_n")) sc.target_n = j.at("target_n");
    if (j.contains("window_age")) sc.window_age = j.at("window_age");
    if (j.contains("origin_age")) sc.origin_age = j.at("origin_age");
    if (j.contains("replications")) sc.replications = j.at("replications");
    if (j.contains("master_seed")) sc.master_seed = j.at("master_seed");
  } catch (const nlohmann::json::exception& e) {
    throw DataError("scenario config '" + path + "': " + e.what());
  }
  try {
    sc.validate();
  } catch (const ArgumentError& e) {
    throw DataError("scenario config '" + path + "': " + e.what());
  }
  return sc;
}

json metrics_to_json(const sim::ScenarioMetrics& m) {
  json j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["software"] = {{"name", "ggsel"}, {"version", kVersion}};

  json sc;
  sc["name"] = m.scenario.name;
  sc["a"] = m.scenario.params.a;
  sc["b"] = m.scenario.params.b;
  sc["sigma2"] = m.scenario.params.sigma2;
  sc["target_n"] = m.scenario.target_n;
  sc["window_age"] = m.scenario.window_age;
  sc["origin_age"] = m.scenario.origin_age;
  sc["replications"] = m.scenario.replications;
  sc["master_seed"] = m.scenario.master_seed;
  j["scenario"] = sc;

  j["n_success"] = m.n_success;
  j["n_failed"] = m.n_failed;
  j["failed_reps"] = m.failed_reps;
  j["mean_realized_n"] = m.mean_realized_n;
  j["boundary_hit_fraction"] = m.boundary_hit_fraction;
  j["lrt_zero_fraction"] = m.lrt_zero_fraction;

  json crit;
  for (const auto& key : m.criterion_keys) {
    const auto& cs = m.criteria.at(key);
    json c;
    c["proportion_full"] = cs.proportion_full;
    c["mc_se"] = cs.mc_se;
    c["n_full"] = cs.n_full;
    crit[key] = c;
  }
  j["criteria"] = crit;

  json foci;
  for (const auto& [label, fs] : m.foci) {
    json f;
    f["mu_true"] = fs.mu_true;
    f["mean_fic_null"] = fs.mean_fic_null;
    f["mean_fic_full"] = fs.mean_fic_full;
    json per;
    for (const auto& [key, st] : fs.per_criterion) {
      json p;
      p["mae_selected"] = st.mae_selected;
      p["mae_se"] = st.mae_se;
      per[key] = p;
    }
    f["per_criterion"] = per;
    foci[label] = f;
  }
  j["foci"] = foci;
  return j;
}

json oracle_to_json(const sim::OracleStudy& s) {
  json j;
  j["schema_version"] = kMetricsSchemaVersion;
  j["draws"] = s.draws;
  j["max_rel_gap"] = s.max_rel_gap;
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row;
    row["tau0"] = r.tau0;
    row["omega"] = r.omega;
    row["delta"] = r.delta;
    row["kappa"] = r.kappa;
    row["mae_null_cf"] = r.mae_null_cf;
    row["mae_null_mc"] = r.mae_null_mc;
    row["mae_full_cf"] = r.mae_full_cf;
    row["mae_full_mc"] = r.mae_full_mc;
    row["mse_null_cf"] = r.mse_null_cf;
    row["mse_null_mc"] = r.mse_null_mc;
    row["mse_full_cf"] = r.mse_full_cf;
    row["mse_full_mc"] = r.mse_full_mc;
    row["max_rel_gap"] = r.max_rel_gap;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

std::string oracle_to_csv(const sim::OracleStudy& s) {
  std::ostringstream os;
  os << "# ggsel oracle schema_version=" << kMetricsSchemaVersion
     << " draws=" << s.draws << "\n";
  os << "tau0,omega,delta,kappa,mae_null_cf,mae_null_mc,mae_full_cf,mae_full_mc,"
        "mse_null_cf,mse_null_mc,mse_full_cf,mse_full_mc,max_rel_gap\n";
  os.precision(12);
  for (const auto& r : s.rows) {
    os << r.tau0 << ',' << r.omega << ',' << r.delta << ',' << r.kappa << ','
       << r.mae_null_cf << ',' << r.mae_null_mc << ',' << r.mae_full_cf << ','
       << r.mae_full_mc << ',' << r.mse_null_cf << ',' << r.mse_null_mc << ','
       << r.mse_full_cf << ',' << r.mse_full_mc << ',' << r.max_rel_gap << '\n';
  }
  return os.str();
}

}  // namespace ggsel::io

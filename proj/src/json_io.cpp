#include "dse/json_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dse/errors.hpp"

namespace dse {

using nlohmann::json;

namespace {

json mat_to(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vec_to(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::MatrixXd mat_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw IoError(what + ": expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  if (!j[0].is_array()) throw IoError(what + ": expected nested arrays");
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw IoError(what + ": ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) throw IoError(what + ": matrix entries must be numbers");
      m(i, k) = cell.get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vec_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw IoError(what + ": expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto& cell = j[static_cast<std::size_t>(i)];
    if (!cell.is_number()) throw IoError(what + ": entries must be numbers");
    v[i] = cell.get<double>();
  }
  return v;
}

template <typename V, typename ToJson>
json int_map_to(const std::map<int, V>& m, ToJson&& conv) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = conv(v);
  return out;
}

int parse_map_key(const std::string& key, const std::string& what) {
  try {
    std::size_t used = 0;
    const int k = std::stoi(key, &used);
    if (used != key.size() || k < 0) throw std::invalid_argument(key);
    return k;
  } catch (const std::exception&) {
    throw IoError(what + ": map key '" + key + "' is not a subsystem index");
  }
}

json parse_document(const std::string& text, const char* kind) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError(std::string(kind) + ": malformed JSON");
  if (!j.is_object()) throw IoError(std::string(kind) + ": expected a JSON object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw IoError(std::string(kind) + ": missing schema_version");
  if (j["schema_version"].get<int>() != kSchemaVersion)
    throw IoError(std::string(kind) + ": unsupported schema_version " +
                  j["schema_version"].dump());
  return j;
}

const json& need(const json& j, const char* field, const std::string& what) {
  if (!j.contains(field)) throw IoError(what + ": missing field '" + field + "'");
  return j[field];
}

json subsystem_to(const Subsystem& sub) {
  json out;
  out["a"] = mat_to(sub.a);
  out["b"] = mat_to(sub.b);
  out["c"] = mat_to(sub.c);
  out["d"] = mat_to(sub.d);
  out["coupling"] = int_map_to(sub.coupling, [](const Eigen::MatrixXd& m) { return mat_to(m); });
  out["delta"] = int_map_to(sub.delta, [](int v) { return json(v); });
  out["disturbance_generators"] = mat_to(sub.disturbance_set.generators());
  out["error_region_rows"] = mat_to(sub.error_region.rows());
  return out;
}

Subsystem subsystem_from(const json& j, const std::string& what) {
  Subsystem sub;
  sub.a = mat_from(need(j, "a", what), what + ".a");
  sub.b = mat_from(need(j, "b", what), what + ".b");
  sub.c = mat_from(need(j, "c", what), what + ".c");
  sub.d = mat_from(need(j, "d", what), what + ".d");
  // b may legally have zero columns; a zero-column matrix parses as 0x0, so
  // restore the row count here.
  if (sub.b.size() == 0) sub.b = Eigen::MatrixXd::Zero(sub.a.rows(), 0);
  sub.coupling.clear();
  for (const auto& [key, value] : need(j, "coupling", what).items())
    sub.coupling[parse_map_key(key, what)] = mat_from(value, what + ".coupling");
  sub.delta.clear();
  for (const auto& [key, value] : need(j, "delta", what).items()) {
    if (!value.is_number_integer()) throw IoError(what + ": delta values must be integers");
    sub.delta[parse_map_key(key, what)] = value.get<int>();
  }
  sub.disturbance_set =
      ConvexBody(mat_from(need(j, "disturbance_generators", what), what + ".disturbance"));
  sub.error_region = HPolytope(mat_from(need(j, "error_region_rows", what), what + ".region"));
  return sub;
}

json gains_to(const EstimatorGains& g) {
  json out;
  out["self"] = mat_to(g.self);
  out["cross"] = int_map_to(g.cross, [](const Eigen::MatrixXd& m) { return mat_to(m); });
  out["delta"] = int_map_to(g.delta, [](int v) { return json(v); });
  return out;
}

EstimatorGains gains_from(const json& j, const std::string& what) {
  EstimatorGains g;
  g.self = mat_from(need(j, "self", what), what + ".self");
  for (const auto& [key, value] : need(j, "cross", what).items())
    g.cross[parse_map_key(key, what)] = mat_from(value, what + ".cross");
  for (const auto& [key, value] : need(j, "delta", what).items())
    g.delta[parse_map_key(key, what)] = value.get<int>();
  return g;
}

DesignStatus status_from(const std::string& name) {
  for (const DesignStatus s :
       {DesignStatus::Success, DesignStatus::StoppedNotObservable,
        DesignStatus::StoppedNotContractive, DesignStatus::StoppedNotSchur,
        DesignStatus::StoppedEquilibriumOutside}) {
    if (name == to_string(s)) return s;
  }
  throw IoError("design report: unknown status '" + name + "'");
}

}  // namespace

std::string model_to_json(const NetworkModel& model) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  json subs = json::array();
  for (const auto& sub : model.subsystems) subs.push_back(subsystem_to(sub));
  doc["subsystems"] = std::move(subs);
  return doc.dump(2) + "\n";
}

NetworkModel model_from_json(const std::string& text) {
  const json doc = parse_document(text, "model");
  NetworkModel model;
  const json& subs = need(doc, "subsystems", "model");
  if (!subs.is_array()) throw IoError("model: subsystems must be an array");
  int i = 0;
  for (const auto& sub : subs)
    model.subsystems.push_back(subsystem_from(sub, "model.subsystems[" + std::to_string(i++) + "]"));
  return model;
}

std::string report_to_json(const DesignReport& report) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["status"] = to_string(report.status);
  doc["stopped_at"] = report.stopped_at;
  json subs = json::array();
  for (const auto& d : report.subsystems) {
    json s;
    s["gains"] = gains_to(d.gains);
    s["error_set"] = {{"generators", mat_to(d.error_set.set.generators())},
                      {"lambda", d.error_set.lambda},
                      {"gamma", d.error_set.gamma},
                      {"delta", d.error_set.delta},
                      {"beta", d.error_set.beta},
                      {"k", d.error_set.k}};
    s["theta_tilde"] = d.theta_tilde;
    s["alpha"] = d.alpha;
    s["mu"] = int_map_to(d.mu, [](double v) { return json(v); });
    subs.push_back(std::move(s));
  }
  doc["subsystems"] = std::move(subs);
  doc["theta"] = {{"t", mat_to(report.theta.t)},
                  {"alpha", vec_to(report.theta.alpha)},
                  {"theta_tilde", vec_to(report.theta.theta_tilde)},
                  {"rho", report.theta.rho},
                  {"theta_bar", vec_to(report.theta.theta_bar)}};
  doc["admissible"] = {{"row_normals", mat_to(report.admissible.row_normals)},
                       {"row_rhs", vec_to(report.admissible.row_rhs)},
                       {"k_star", report.admissible.k_star}};
  doc["inner_corner"] = vec_to(report.inner_corner);
  doc["log"] = report.log;
  return doc.dump(2) + "\n";
}

DesignReport report_from_json(const std::string& text) {
  const json doc = parse_document(text, "design report");
  DesignReport report;
  report.status = status_from(need(doc, "status", "report").get<std::string>());
  report.stopped_at = need(doc, "stopped_at", "report").get<int>();
  const json& subs = need(doc, "subsystems", "report");
  int i = 0;
  for (const auto& s : subs) {
    const std::string what = "report.subsystems[" + std::to_string(i++) + "]";
    SubsystemDesign d;
    d.gains = gains_from(need(s, "gains", what), what + ".gains");
    const json& es = need(s, "error_set", what);
    d.error_set.set = ConvexBody(mat_from(need(es, "generators", what), what + ".generators"));
    d.error_set.lambda = need(es, "lambda", what).get<double>();
    d.error_set.gamma = need(es, "gamma", what).get<double>();
    d.error_set.delta = need(es, "delta", what).get<double>();
    d.error_set.beta = need(es, "beta", what).get<double>();
    d.error_set.k = need(es, "k", what).get<int>();
    d.theta_tilde = need(s, "theta_tilde", what).get<double>();
    d.alpha = need(s, "alpha", what).get<double>();
    for (const auto& [key, value] : need(s, "mu", what).items())
      d.mu[parse_map_key(key, what)] = value.get<double>();
    report.subsystems.push_back(std::move(d));
  }
  const json& th = need(doc, "theta", "report");
  report.theta.t = mat_from(need(th, "t", "report.theta"), "report.theta.t");
  report.theta.alpha = vec_from(need(th, "alpha", "report.theta"), "report.theta.alpha");
  report.theta.theta_tilde =
      vec_from(need(th, "theta_tilde", "report.theta"), "report.theta.theta_tilde");
  report.theta.rho = need(th, "rho", "report.theta").get<double>();
  report.theta.theta_bar =
      vec_from(need(th, "theta_bar", "report.theta"), "report.theta.theta_bar");
  const json& adm = need(doc, "admissible", "report");
  report.admissible.row_normals =
      mat_from(need(adm, "row_normals", "report.admissible"), "report.admissible.rows");
  report.admissible.row_rhs =
      vec_from(need(adm, "row_rhs", "report.admissible"), "report.admissible.rhs");
  report.admissible.k_star = need(adm, "k_star", "report.admissible").get<int>();
  report.inner_corner = vec_from(need(doc, "inner_corner", "report"), "report.inner_corner");
  for (const auto& line : need(doc, "log", "report"))
    report.log.push_back(line.get<std::string>());
  return report;
}

std::string scenario_to_json(const PowerScenario& scenario) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  json areas = json::array();
  for (const auto& a : scenario.areas) {
    json area;
    area["inertia"] = a.inertia;
    area["damping"] = a.damping;
    area["turbine_time"] = a.turbine_time;
    area["governor_time"] = a.governor_time;
    area["droop"] = a.droop;
    area["tie_stiffness"] = int_map_to(a.tie_stiffness, [](double v) { return json(v); });
    areas.push_back(std::move(area));
  }
  doc["areas"] = std::move(areas);
  doc["outputs"] = to_string(scenario.outputs);
  doc["error_scale"] = scenario.error_scale;
  doc["disturbance_bound"] = scenario.disturbance_bound;
  doc["sample_time"] = scenario.sample_time;
  return doc.dump(2) + "\n";
}

PowerScenario scenario_from_json(const std::string& text) {
  const json doc = parse_document(text, "scenario");
  PowerScenario s;
  s.areas.clear();
  const json& areas = need(doc, "areas", "scenario");
  for (const auto& a : areas) {
    AreaParams p;
    p.inertia = need(a, "inertia", "scenario.area").get<double>();
    p.damping = need(a, "damping", "scenario.area").get<double>();
    p.turbine_time = need(a, "turbine_time", "scenario.area").get<double>();
    p.governor_time = need(a, "governor_time", "scenario.area").get<double>();
    p.droop = need(a, "droop", "scenario.area").get<double>();
    for (const auto& [key, value] : need(a, "tie_stiffness", "scenario.area").items())
      p.tie_stiffness[parse_map_key(key, "scenario.area")] = value.get<double>();
    s.areas.push_back(std::move(p));
  }
  const std::string mode = need(doc, "outputs", "scenario").get<std::string>();
  if (mode == to_string(OutputMode::OmegaOnly)) {
    s.outputs = OutputMode::OmegaOnly;
  } else if (mode == to_string(OutputMode::ThetaOmega)) {
    s.outputs = OutputMode::ThetaOmega;
  } else {
    throw IoError("scenario: unknown output mode '" + mode + "'");
  }
  s.error_scale = need(doc, "error_scale", "scenario").get<double>();
  s.disturbance_bound = need(doc, "disturbance_bound", "scenario").get<double>();
  s.sample_time = need(doc, "sample_time", "scenario").get<double>();
  return s;
}

std::string plugin_request_to_json(const PlugInRequest& request) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["subsystem"] = subsystem_to(request.subsystem);
  doc["child_couplings"] =
      int_map_to(request.child_couplings, [](const Eigen::MatrixXd& m) { return mat_to(m); });
  doc["child_deltas"] = int_map_to(request.child_deltas, [](int v) { return json(v); });
  return doc.dump(2) + "\n";
}

PlugInRequest plugin_request_from_json(const std::string& text) {
  const json doc = parse_document(text, "plug-in request");
  PlugInRequest request;
  request.subsystem = subsystem_from(need(doc, "subsystem", "plug-in"), "plug-in.subsystem");
  for (const auto& [key, value] : need(doc, "child_couplings", "plug-in").items())
    request.child_couplings[parse_map_key(key, "plug-in")] =
        mat_from(value, "plug-in.child_couplings");
  for (const auto& [key, value] : need(doc, "child_deltas", "plug-in").items())
    request.child_deltas[parse_map_key(key, "plug-in")] = value.get<int>();
  return request;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed while reading '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace dse

#include "eec/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "eec/errors.hpp"

namespace eec {

namespace {

using nlohmann::json;
using Setter = std::function<void(const json&, const std::string&)>;

[[noreturn]] void type_error(const std::string& path, const char* expected) {
  throw ConfigError(path + ": expected " + expected);
}

Setter number(double& field) {
  return [&field](const json& v, const std::string& path) {
    if (!v.is_number()) type_error(path, "a number");
    field = v.get<double>();
  };
}

Setter integer(int& field) {
  return [&field](const json& v, const std::string& path) {
    if (!v.is_number_integer()) type_error(path, "an integer");
    const auto x = v.get<std::int64_t>();
    if (x < INT32_MIN || x > INT32_MAX) type_error(path, "an integer in 32-bit range");
    field = static_cast<int>(x);
  };
}

void apply_section(const json& section, const std::string& name,
                   const std::map<std::string, Setter>& fields) {
  if (!section.is_object()) type_error(name, "an object");
  for (const auto& [key, value] : section.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError("unknown key '" + name + "." + key + "'");
    it->second(value, name + "." + key);
  }
}

void apply_overrides(ScenarioConfig& c, const json& doc) {
  std::map<std::string, std::function<void(const json&)>> sections;
  sections["radio"] = [&c](const json& s) {
    auto& r = c.radio;
    apply_section(s, "radio",
                  {{"sinr_threshold_db", number(r.sinr_threshold_db)},
                   {"los_radius_m", number(r.los_radius_m)},
                   {"pathloss_exp_los", number(r.pathloss_exp_los)},
                   {"pathloss_exp_nlos", number(r.pathloss_exp_nlos)},
                   {"nakagami_los", integer(r.nakagami_los)},
                   {"nakagami_nlos", integer(r.nakagami_nlos)},
                   {"intercept_los_db", number(r.intercept_los_db)},
                   {"intercept_nlos_db", number(r.intercept_nlos_db)},
                   {"main_lobe_db", number(r.main_lobe_db)},
                   {"side_lobe_db", number(r.side_lobe_db)},
                   {"beamwidth_rad", number(r.beamwidth_rad)},
                   {"noise_normalized_db", number(r.noise_normalized_db)}});
  };
  sections["deploy"] = [&c](const json& s) {
    apply_section(s, "deploy",
                  {{"worker_intensity_per_m2", number(c.deploy.worker_intensity_per_m2)},
                   {"requester_intensity_per_m2", number(c.deploy.requester_intensity_per_m2)}});
  };
  sections["task"] = [&c](const json& s) {
    apply_section(s, "task",
                  {{"segments", integer(c.task.segments)},
                   {"task_exec_rate_per_s", number(c.task.task_exec_rate_per_s)},
                   {"d2d_slot_s", number(c.task.d2d_slot_s)}});
  };
  sections["reliability"] = [&c](const json& s) {
    auto& rel = c.reliability;
    apply_section(s, "reliability",
                  {{"reliability_l", number(rel.reliability_l)},
                   {"spare_budget", [&rel](const json& v, const std::string& path) {
                      if (v.is_null() || (v.is_string() && v.get<std::string>() == "unbounded")) {
                        rel.spare_budget.reset();
                        return;
                      }
                      int k = 0;
                      integer(k)(v, path);
                      rel.spare_budget = k;
                    }}});
  };
  sections["mec"] = [&c](const json& s) {
    auto& m = c.mec;
    apply_section(s, "mec",
                  {{"power_ratio", number(m.power_ratio)},
                   {"mec_task_rate_mu_f", number(m.mec_task_rate_mu_f)},
                   {"concurrent_requester_intensity", number(m.concurrent_requester_intensity)},
                   {"offload_success_prob", number(m.offload_success_prob)}});
  };
  sections["sim"] = [&c](const json& s) {
    auto& sim = c.sim;
    apply_section(
        s, "sim",
        {{"seed", [&sim](const json& v, const std::string& path) {
            if (!v.is_number_unsigned()) type_error(path, "a non-negative integer");
            sim.seed = v.get<std::uint64_t>();
          }},
         {"replications", [&sim](const json& v, const std::string& path) {
            if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
              type_error(path, "a positive integer");
            sim.replications = v.get<std::size_t>();
          }},
         {"arena_radius_m", [&sim](const json& v, const std::string& path) {
            if (v.is_null()) {
              sim.arena_radius_m.reset();
              return;
            }
            if (!v.is_number()) type_error(path, "a number or null");
            sim.arena_radius_m = v.get<double>();
          }},
         {"los_reference", [&sim](const json& v, const std::string& path) {
            if (v == "receiver") {
              sim.los_reference = LosReference::Receiver;
            } else if (v == "requester") {
              sim.los_reference = LosReference::Requester;
            } else {
              type_error(path, "\"receiver\" or \"requester\"");
            }
          }},
         {"threads", [&sim](const json& v, const std::string& path) {
            if (!v.is_number_unsigned()) type_error(path, "a non-negative integer");
            sim.threads = v.get<unsigned>();
          }}});
  };
  sections["analysis"] = [&c](const json& s) {
    auto& q = c.quadrature;
    apply_section(
        s, "analysis",
        {{"n_max", integer(c.n_max)},
         {"alpha_step", number(c.alpha_step)},
         {"rel_tol", number(q.rel_tol)},
         {"abs_tol", number(q.abs_tol)},
         {"max_depth", [&q](const json& v, const std::string& path) {
            if (!v.is_number_unsigned()) type_error(path, "a positive integer");
            q.max_depth = v.get<unsigned>();
          }},
         {"nlos_integration", [&q](const json& v, const std::string& path) {
            if (v == "reciprocal_map") {
              q.nlos = NlosIntegration::ReciprocalMap;
            } else if (v == "truncated") {
              q.nlos = NlosIntegration::Truncated;
            } else {
              type_error(path, "\"reciprocal_map\" or \"truncated\"");
            }
          }},
         {"truncation_factor", number(q.truncation_factor)},
         {"sojourn", [&c](const json& v, const std::string& path) {
            if (v == "holding_time") {
              c.sojourn = SojournConvention::HoldingTime;
            } else if (v == "per_transition") {
              c.sojourn = SojournConvention::PerTransition;
            } else {
              type_error(path, "\"holding_time\" or \"per_transition\"");
            }
          }}});
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "preset") continue;
    const auto it = sections.find(key);
    if (it == sections.end()) throw ConfigError("unknown key '" + key + "'");
    it->second(value);
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  try {
    radio.validate();
    deploy.validate();
    task.validate();
    reliability.validate();
    mec.validate();
    sim.validate();
    quadrature.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (n_max < 1) throw ConfigError("analysis.n_max must be >= 1");
  if (!(alpha_step > 0.0 && alpha_step < 1.0))
    throw ConfigError("analysis.alpha_step must lie in (0, 1)");
  if (deploy.requester_intensity_per_m2 > 0.0 && !(radio.pathloss_exp_nlos > 2.0))
    throw ConfigError("radio.pathloss_exp_nlos must be > 2 when requesters are present");
}

ScenarioConfig scenario_from_preset(const std::string& name) {
  Preset p;
  try {
    p = preset_by_name(name);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  ScenarioConfig c;
  c.preset = name;
  c.radio = p.radio;
  c.deploy = p.deploy;
  c.task = p.task;
  c.reliability = p.reliability;
  return c;
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  std::string preset = "table1";
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) type_error("preset", "a string");
    preset = doc["preset"].get<std::string>();
  }
  ScenarioConfig c = scenario_from_preset(preset);
  apply_overrides(c, doc);
  c.validate();
  return c;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string scenario_to_json(const ScenarioConfig& c) {
  json doc;
  doc["preset"] = c.preset;
  doc["radio"] = {{"sinr_threshold_db", c.radio.sinr_threshold_db},
                  {"los_radius_m", c.radio.los_radius_m},
                  {"pathloss_exp_los", c.radio.pathloss_exp_los},
                  {"pathloss_exp_nlos", c.radio.pathloss_exp_nlos},
                  {"nakagami_los", c.radio.nakagami_los},
                  {"nakagami_nlos", c.radio.nakagami_nlos},
                  {"intercept_los_db", c.radio.intercept_los_db},
                  {"intercept_nlos_db", c.radio.intercept_nlos_db},
                  {"main_lobe_db", c.radio.main_lobe_db},
                  {"side_lobe_db", c.radio.side_lobe_db},
                  {"beamwidth_rad", c.radio.beamwidth_rad},
                  {"noise_normalized_db", c.radio.noise_normalized_db}};
  doc["deploy"] = {{"worker_intensity_per_m2", c.deploy.worker_intensity_per_m2},
                   {"requester_intensity_per_m2", c.deploy.requester_intensity_per_m2}};
  doc["task"] = {{"segments", c.task.segments},
                 {"task_exec_rate_per_s", c.task.task_exec_rate_per_s},
                 {"d2d_slot_s", c.task.d2d_slot_s}};
  doc["reliability"] = {{"reliability_l", c.reliability.reliability_l},
                        {"spare_budget", c.reliability.spare_budget
                                             ? json(*c.reliability.spare_budget)
                                             : json("unbounded")}};
  doc["mec"] = {{"power_ratio", c.mec.power_ratio},
                {"mec_task_rate_mu_f", c.mec.mec_task_rate_mu_f},
                {"concurrent_requester_intensity", c.mec.concurrent_requester_intensity},
                {"offload_success_prob", c.mec.offload_success_prob}};
  doc["sim"] = {{"seed", c.sim.seed},
                {"replications", c.sim.replications},
                {"arena_radius_m", c.sim.arena_radius_m ? json(*c.sim.arena_radius_m) : json(nullptr)},
                {"los_reference",
                 c.sim.los_reference == LosReference::Receiver ? "receiver" : "requester"}};
  doc["analysis"] = {{"n_max", c.n_max},
                     {"alpha_step", c.alpha_step},
                     {"rel_tol", c.quadrature.rel_tol},
                     {"abs_tol", c.quadrature.abs_tol},
                     {"max_depth", c.quadrature.max_depth},
                     {"nlos_integration", c.quadrature.nlos == NlosIntegration::ReciprocalMap
                                              ? "reciprocal_map"
                                              : "truncated"},
                     {"truncation_factor", c.quadrature.truncation_factor},
                     {"sojourn", c.sojourn == SojournConvention::HoldingTime ? "holding_time"
                                                                             : "per_transition"}};
  return doc.dump();
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : scenario_to_json(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace eec

#include "sarsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "sarsim/rng.hpp"

namespace sarsim {

namespace {

std::string scope_name(PerturbScope s) {
  return s == PerturbScope::Global ? "global" : "omega";
}
PerturbScope scope_from(const std::string& s) {
  if (s == "global") return PerturbScope::Global;
  if (s == "omega") return PerturbScope::Omega;
  throw InputError("perturb_scope must be 'global' or 'omega'");
}
std::string conduction_name(Conduction c) {
  return c == Conduction::Exponential ? "exponential" : "rational";
}
Conduction conduction_from(const std::string& s) {
  if (s == "exponential") return Conduction::Exponential;
  if (s == "rational") return Conduction::Rational;
  throw InputError("conduction must be 'exponential' or 'rational'");
}

}  // namespace

void PipelineConfig::validate() const {
  if (patch_radius < 1) throw InputError("patch_radius must be >= 1");
  if (pm_iterations < 1) throw InputError("pm_iterations must be >= 1");
  if (pyramid_min < 1) throw InputError("pyramid_min must be >= 1");
  if (dilation_radius < 0) throw InputError("dilation_radius must be >= 0");
  if (vessel_label < 0 || vessel_label > LabelMask::kMaxLabel)
    throw InputError("vessel_label must lie in 0..4");
  if (vessel_remove_prob < 0.0 || vessel_remove_prob > 1.0)
    throw InputError("vessel_remove_prob must lie in [0, 1]");
  if (vessel_shift_min > vessel_shift_max || vessel_shift_min < 0)
    throw InputError("vessel shift range invalid");
  if (split_fraction <= 0.0 || split_fraction >= 1.0)
    throw InputError("split_fraction must lie in (0, 1)");
  tre.validate();
}

nlohmann::json PipelineConfig::to_json() const {
  return nlohmann::json{
      {"version", 1},
      {"patch_radius", patch_radius},
      {"pm_iterations", pm_iterations},
      {"pyramid_min", pyramid_min},
      {"refinement_stage", refinement_stage},
      {"kappa", tre.kappa},
      {"kappa_scale", tre.kappa_scale},
      {"diffusion_iterations", tre.diffusion_iterations},
      {"diffusion_lambda", tre.diffusion_lambda},
      {"band_width", tre.band_width},
      {"conduction", conduction_name(tre.conduction)},
      {"looks", tre.looks},
      {"drift_alpha", tre.drift_alpha},
      {"drift_box", tre.drift_box},
      {"ring_width", tre.ring_width},
      {"enable_speckle", tre.enable_speckle},
      {"enable_drift", tre.enable_drift},
      {"perturb_scope", scope_name(tre.perturb_scope)},
      {"dilation_radius", dilation_radius},
      {"vessel_label", vessel_label},
      {"vessel_remove_prob", vessel_remove_prob},
      {"vessel_shift_min", vessel_shift_min},
      {"vessel_shift_max", vessel_shift_max},
      {"split_fraction", split_fraction},
      {"master_seed", master_seed},
  };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  PipelineConfig c;
  const nlohmann::json defaults = c.to_json();
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key))
      throw InputError("unknown config key: " + key);
    (void)value;
  }
  if (j.contains("version") && j.at("version").get<int>() != 1)
    throw InputError("unsupported config version");

  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("patch_radius", c.patch_radius);
  get("pm_iterations", c.pm_iterations);
  get("pyramid_min", c.pyramid_min);
  get("refinement_stage", c.refinement_stage);
  get("kappa", c.tre.kappa);
  get("kappa_scale", c.tre.kappa_scale);
  get("diffusion_iterations", c.tre.diffusion_iterations);
  get("diffusion_lambda", c.tre.diffusion_lambda);
  get("band_width", c.tre.band_width);
  get("looks", c.tre.looks);
  get("drift_alpha", c.tre.drift_alpha);
  get("drift_box", c.tre.drift_box);
  get("ring_width", c.tre.ring_width);
  get("enable_speckle", c.tre.enable_speckle);
  get("enable_drift", c.tre.enable_drift);
  get("dilation_radius", c.dilation_radius);
  get("vessel_label", c.vessel_label);
  get("vessel_remove_prob", c.vessel_remove_prob);
  get("vessel_shift_min", c.vessel_shift_min);
  get("vessel_shift_max", c.vessel_shift_max);
  get("split_fraction", c.split_fraction);
  get("master_seed", c.master_seed);
  if (j.contains("perturb_scope"))
    c.tre.perturb_scope = scope_from(j.at("perturb_scope").get<std::string>());
  if (j.contains("conduction"))
    c.tre.conduction = conduction_from(j.at("conduction").get<std::string>());
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return from_json(j);
}

std::string PipelineConfig::hash() const {
  const std::string dump = to_json().dump();
  std::uint64_t h = rng::fnv1a(dump.data(), dump.size());
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace sarsim

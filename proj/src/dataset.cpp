#include "sarsim/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <thread>

#include "sarsim/morphology.hpp"
#include "sarsim/raster_io.hpp"
#include "sarsim/rng.hpp"

namespace sarsim {

namespace {

constexpr std::uint64_t kTagVessel = 0xA1;
constexpr std::uint64_t kTagInpaint = 0xA2;
constexpr std::uint64_t kTagTre = 0xA3;
constexpr std::uint64_t kTagShuffle = 0xA4;
constexpr double kPi = 3.14159265358979323846;

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace

RefinementStage lookup_refinement_stage(const std::string& name) {
  if (name == "none")
    return [](const IntensityRaster& img, const BinaryMask&) { return img; };
  throw InputError("unknown refinement stage: " + name);
}

std::uint64_t scene_seed_for(std::uint64_t master_seed,
                             const std::string& id) {
  return rng::mix(master_seed, rng::fnv1a(id.data(), id.size()));
}

VesselPerturbation perturb_vessels(const IntensityRaster& post,
                                   const LabelMask& labels,
                                   const PipelineConfig& config,
                                   std::uint64_t scene_seed) {
  if (labels.width() != post.width() || labels.height() != post.height())
    throw InputError("label dimension mismatch");
  VesselPerturbation out{post, BinaryMask(post.width(), post.height()),
                         labels};
  const auto vessel =
      labels.where(static_cast<std::uint8_t>(config.vessel_label));
  const auto components = connected_components(vessel, 8);

  for (size_t i = 0; i < components.size(); ++i) {
    const Component& comp = components[i];
    rng::Stream s(rng::key(scene_seed, kTagVessel, i));
    bool removed = s.next_double() < config.vessel_remove_prob;

    int dx = 0, dy = 0;
    if (!removed) {
      bool placed = false;
      for (int attempt = 0; attempt < 16 && !placed; ++attempt) {
        const double mag =
            config.vessel_shift_min +
            s.next_double() * (config.vessel_shift_max - config.vessel_shift_min);
        const double ang = s.next_double() * 2.0 * kPi;
        dx = static_cast<int>(std::lround(mag * std::cos(ang)));
        dy = static_cast<int>(std::lround(mag * std::sin(ang)));
        placed = true;
        for (const Coord& p : comp.pixels) {
          const int nx = p.x + dx, ny = p.y + dy;
          if (!post.in_bounds(nx, ny) || out.labels.get(nx, ny) != 0) {
            placed = false;
            break;
          }
        }
      }
      removed = !placed;  // fallback when no clear sea destination found
    }

    if (removed) {
      for (const Coord& p : comp.pixels) {
        out.extra_inpaint_mask.set(p.x, p.y);
        out.labels.set(p.x, p.y, 0);
      }
    } else {
      for (const Coord& p : comp.pixels) {
        out.raster(p.x + dx, p.y + dy) = post(p.x, p.y);
        out.labels.set(p.x + dx, p.y + dy,
                       static_cast<std::uint8_t>(config.vessel_label));
      }
      for (const Coord& p : comp.pixels) {
        out.extra_inpaint_mask.set(p.x, p.y);
        out.labels.set(p.x, p.y, 0);
      }
    }
  }
  return out;
}

ScenePair build_pair(const IntensityRaster& post, const LabelMask& labels,
                     const PipelineConfig& config, std::uint64_t scene_seed,
                     const std::string& scene_id) {
  config.validate();
  const BinaryMask oil = labels.where(1);
  if (!oil.any())
    throw InputError("scene " + scene_id + " has no oil pixels (label 1)");
  const RefinementStage refine =
      lookup_refinement_stage(config.refinement_stage);

  // perturb_vessels derives its own per-component streams from scene_seed
  VesselPerturbation vp = perturb_vessels(post, labels, config, scene_seed);

  BinaryMask inpaint_mask = mask_union(dilate(oil, config.dilation_radius),
                                       vp.extra_inpaint_mask);
  if (inpaint_mask.count() * 100 >= inpaint_mask.size() * 95)
    throw DegenerateSceneError("scene " + scene_id +
                               ": inpaint mask covers >= 95% of pixels");

  IntensityRaster inpainted =
      inpaint(vp.raster, inpaint_mask, config.inpaint_params(),
              rng::mix(scene_seed, kTagInpaint));

  inpainted = refine(inpainted, inpaint_mask);

  IntensityRaster pre = tre_apply(inpainted, inpaint_mask, config.tre,
                                  rng::mix(scene_seed, kTagTre));

  ScenePair pair;
  pair.scene_id = scene_id;
  pair.pre = std::move(pre);
  pair.post = post;  // epoch t kept verbatim
  pair.change_gt = oil;
  pair.labels = labels;
  pair.provenance = nlohmann::json{
      {"version", 1},
      {"scene_id", scene_id},
      {"config_hash", config.hash()},
      {"master_seed", config.master_seed},
      {"scene_seed", scene_seed},
  };
  return pair;
}

namespace {

struct SceneJob {
  SceneInput input;
  std::uint64_t seed = 0;
  std::string split;
};

nlohmann::json process_scene(const SceneJob& job, const PipelineConfig& config,
                             const std::filesystem::path& out_dir) {
  const IntensityRaster post = load_raster(job.input.post_path);
  const LabelMask labels = load_label_mask(job.input.labels_path);
  ScenePair pair = build_pair(post, labels, config, job.seed, job.input.id);

  const std::filesystem::path scene_dir = out_dir / job.split / job.input.id;
  std::filesystem::create_directories(scene_dir);
  save_raster(pair.pre, scene_dir / "pre.fras", RasterFormat::FloatRaster);
  save_raster(pair.post, scene_dir / "post.fras", RasterFormat::FloatRaster);
  save_binary_mask(pair.change_gt, scene_dir / "change_gt.png");
  save_label_mask(pair.labels, scene_dir / "labels.png");
  write_json(pair.provenance, scene_dir / "provenance.json");

  const std::string rel = job.split + "/" + job.input.id;
  return nlohmann::json{
      {"id", job.input.id},
      {"split", job.split},
      {"seed", job.seed},
      {"paths",
       {{"pre", rel + "/pre.fras"},
        {"post", rel + "/post.fras"},
        {"change_gt", rel + "/change_gt.png"},
        {"labels", rel + "/labels.png"},
        {"provenance", rel + "/provenance.json"}}},
      {"oil_pixels", pair.change_gt.count()},
      {"total_pixels", pair.change_gt.size()},
  };
}

}  // namespace

DatasetManifest build_dataset(const std::vector<SceneInput>& inputs,
                              const PipelineConfig& config,
                              const std::filesystem::path& out_dir, int jobs,
                              bool skip_errors) {
  config.validate();
  if (inputs.empty()) throw InputError("input scene list is empty");
  if (jobs < 1) throw InputError("jobs must be >= 1");
  {
    std::set<std::string> ids;
    for (const auto& in : inputs)
      if (!ids.insert(in.id).second)
        throw InputError("duplicate scene id: " + in.id);
  }

  // Seeded Fisher-Yates permutation, then a split at scene granularity.
  std::vector<SceneJob> jobs_list;
  jobs_list.reserve(inputs.size());
  for (const auto& in : inputs)
    jobs_list.push_back({in, scene_seed_for(config.master_seed, in.id), ""});
  {
    rng::Stream s(rng::key(config.master_seed, kTagShuffle));
    for (size_t i = jobs_list.size(); i > 1; --i)
      std::swap(jobs_list[i - 1], jobs_list[s.next_below(i)]);
  }
  const size_t n_train = static_cast<size_t>(
      std::floor(static_cast<double>(jobs_list.size()) * config.split_fraction));
  for (size_t i = 0; i < jobs_list.size(); ++i)
    jobs_list[i].split = i < n_train ? "train" : "test";

  std::filesystem::create_directories(out_dir / "train");
  std::filesystem::create_directories(out_dir / "test");

  std::vector<nlohmann::json> entries(jobs_list.size());
  std::vector<std::string> errors(jobs_list.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    while (true) {
      const size_t i = cursor.fetch_add(1);
      if (i >= jobs_list.size()) return;
      try {
        entries[i] = process_scene(jobs_list[i], config, out_dir);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  nlohmann::json scenes = nlohmann::json::array();
  std::uint64_t oil[2] = {0, 0}, total[2] = {0, 0}, pairs[2] = {0, 0};
  for (size_t i = 0; i < jobs_list.size(); ++i) {
    if (!errors[i].empty()) {
      if (skip_errors) continue;
      throw InputError("scene " + jobs_list[i].input.id + ": " + errors[i]);
    }
    const int split = jobs_list[i].split == "train" ? 0 : 1;
    oil[split] += entries[i].at("oil_pixels").get<std::uint64_t>();
    total[split] += entries[i].at("total_pixels").get<std::uint64_t>();
    pairs[split] += 1;
    nlohmann::json e = entries[i];
    e.erase("oil_pixels");
    e.erase("total_pixels");
    scenes.push_back(std::move(e));
  }

  auto split_stats = [&](int s) {
    return nlohmann::json{
        {"pairs", pairs[s]},
        {"oil_pixels", oil[s]},
        {"oil_ratio", total[s] ? static_cast<double>(oil[s]) / total[s] : 0.0}};
  };
  DatasetManifest manifest;
  manifest.root = out_dir;
  manifest.json = nlohmann::json{
      {"version", 1},
      {"config", config.to_json()},
      {"scenes", scenes},
      {"stats", {{"train", split_stats(0)}, {"test", split_stats(1)}}},
  };
  write_json(manifest.json, out_dir / "manifest.json");
  return manifest;
}

nlohmann::json dataset_stats(const std::filesystem::path& dataset_dir) {
  std::ifstream in(dataset_dir / "manifest.json");
  if (!in)
    throw InputError("cannot open " + (dataset_dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest.json: ") + e.what());
  }

  std::uint64_t oil[2] = {0, 0}, total[2] = {0, 0}, pairs[2] = {0, 0};
  for (const auto& scene : manifest.at("scenes")) {
    const int split = scene.at("split").get<std::string>() == "train" ? 0 : 1;
    const auto gt_path =
        dataset_dir / scene.at("paths").at("change_gt").get<std::string>();
    const BinaryMask gt = load_binary_mask(gt_path);
    oil[split] += gt.count();
    total[split] += gt.size();
    pairs[split] += 1;
  }
  auto split_stats = [&](int s) {
    return nlohmann::json{
        {"pairs", pairs[s]},
        {"oil_pixels", oil[s]},
        {"oil_ratio", total[s] ? static_cast<double>(oil[s]) / total[s] : 0.0}};
  };
  return nlohmann::json{{"version", 1},
                        {"train", split_stats(0)},
                        {"test", split_stats(1)}};
}

}  // namespace sarsim

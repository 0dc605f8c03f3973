#include "cli.hpp"

#include <pthread.h>

#include <csignal>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "tabletop/analytics/report.hpp"
#include "tabletop/error.hpp"
#include "tabletop/graspeval/pipeline.hpp"
#include "tabletop/graspeval/trial_io.hpp"
#include "tabletop/graspgen/grasp_io.hpp"
#include "tabletop/objectlib/library_io.hpp"
#include "tabletop/printout/document.hpp"
#include "tabletop/render/renderer.hpp"
#include "tabletop/scene/scene_io.hpp"
#include "tabletop/service/server.hpp"

namespace tabletop::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

// A command yields a JSON result; `text` renders it for humans.
struct Action {
  std::function<Json()> run;
  std::function<std::string(const Json&)> text;
};

std::vector<double> split_numbers(const std::string& value, const std::string& what) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(value);
  while (std::getline(in, token, value.find('x') != std::string::npos ? 'x' : ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, what + ": cannot read '" + value + "'");
    }
  }
  return out;
}

scene::GroundArea parse_area(const std::string& value) {
  if (const auto preset = scene::area_preset(value)) return *preset;
  const auto v = split_numbers(value, "--area");
  if (v.size() != 2 || !(v[0] > 0) || !(v[1] > 0)) {
    throw Error(ErrorCode::InvalidArgument, "--area: expected A2/A3/A4 or WIDTHxDEPTH in metres");
  }
  return {v[0], v[1]};
}

printout::PageSize parse_page(const std::string& value) {
  if (const auto preset = printout::page_preset(value)) return *preset;
  const auto v = split_numbers(value, "--page");
  if (v.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "--page: expected A0..A5, Letter or WIDTHxHEIGHT in mm");
  }
  return {v[0], v[1]};
}

render::Range parse_range(const std::string& value, const std::string& what) {
  const auto v = split_numbers(value, what);
  if (v.size() == 1) return {v[0], v[0]};
  if (v.size() != 2) throw Error(ErrorCode::InvalidArgument, what + ": expected MIN,MAX");
  return {v[0], v[1]};
}

objectlib::ObjectLibrary library_for(const scene::Scene& s, const std::string& override_path) {
  if (!override_path.empty()) return objectlib::load_library(override_path);
  if (s.library_path.empty()) {
    throw Error(ErrorCode::InvalidArgument, "scene names no object library; pass --library");
  }
  return objectlib::load_library(s.library_path);
}

std::string lines(const Json& list, const std::function<std::string(const Json&)>& line) {
  std::string out;
  for (const auto& item : list) out += line(item) + "\n";
  return out;
}

// Grasp sets are per object type; a set for another type is a usage mistake.
void check_grasps_match(const scene::Scene& s, std::size_t instance,
                        const graspgen::GraspSet& set) {
  if (instance >= s.instances.size()) {
    throw Error(ErrorCode::UnknownInstance, "scene has no instance " + std::to_string(instance));
  }
  const auto& type = s.instances[instance].object_id;
  if (!set.object_id.empty() && set.object_id != type) {
    throw Error(ErrorCode::InvalidArgument, "grasps were sampled for '" + set.object_id +
                                                "' but instance " + std::to_string(instance) +
                                                " is '" + type + "'");
  }
}

Json statuses_json(const std::vector<scene::InstanceStatus>& statuses) {
  Json out = Json::array();
  for (auto s : statuses) out.push_back(std::string(scene::to_string(s)));
  return out;
}

std::string stage_text(const Json& result) {
  std::string out;
  for (const auto& s : result["stages"]) {
    out += "instance " + s["instance"].dump() + " " + s["object_id"].get<std::string>() +
           ": sampled " + s["sampled"].dump() + ", after coarse " + s["after_coarse"].dump() +
           ", after pre-grasp " + s["after_pregrasp"].dump() + ", successes " +
           s["successes"].dump() + "\n";
  }
  return out + "evaluated " + result["evaluated"].dump() + ", selected " +
         result["selected"].dump() + "\n";
}

// Every flag of every subcommand; only the chosen subcommand's are read.
struct Options {
  std::string mesh, object_id, library, scene_path, scene_out, area = "A3", lib_override;
  double mass = 0.0, friction = objectlib::kDefaultFriction, scale = 1.0;
  int n_objects = 5, attempts = 20;
  std::uint64_t seed = 0;
  bool board = false, strict = false;
  std::string grasps_in, grasps_out, records_in, records_out, selected_out, gripper_path,
      config_path, scene_id, filter_mode = "both";
  std::vector<std::string> grasp_args, record_files;
  std::size_t instance = 0, candidates = 1000;
  int samples = 1000, rays = 4, angles = 8, per_object = 10;
  long max_grasps = -1;
  std::string page = "A4", out_dir;
  double dpi = printout::kDefaultDpi;
  int views = 4, width = 640, height = 480;
  double fov = 60.0;
  std::string radius = "0.4,0.8", elevation = "30,80";
  std::string host, data_dir;
  int port = -1;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tabletop scene toolkit: object libraries, scenes, grasps, printouts, renders",
               "tabletop"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");
  Options o;
  Action action;

  // ingest
  {
    auto* cmd = app.add_subcommand("ingest", "Add a mesh to an object library");
    cmd->add_option("--mesh", o.mesh, "OBJ or STL file")->required();
    cmd->add_option("--id", o.object_id, "Object identifier")->required();
    cmd->add_option("--mass", o.mass, "Mass in kg")->required();
    auto* fr = cmd->add_option("--friction", o.friction, "Friction coefficient");
    auto* sc = cmd->add_option("--scale", o.scale, "Mesh unit scale to metres");
    cmd->add_option("--library", o.library, "Library YAML (created when missing)")->required();
    cmd->callback([&, fr, sc] {
      action.run = [&o, fr, sc] {
        const fs::path lib_path = o.library;
        objectlib::ObjectLibrary lib;
        if (fs::exists(lib_path)) {
          lib = objectlib::load_library(lib_path);
        } else {
          lib.name = lib_path.stem().string();
        }
        objectlib::ObjectSpec spec;
        spec.identifier = o.object_id;
        spec.mesh_path = fs::absolute(o.mesh);
        spec.mass = o.mass;
        if (fr->count()) spec.friction = o.friction;
        if (sc->count()) spec.scale = o.scale;
        auto object = objectlib::ingest_object(spec);
        const Json result{{"identifier", object.identifier},
                          {"mass", object.mass},
                          {"friction", object.friction},
                          {"stable_poses", object.stable_poses.size()},
                          {"library", fs::absolute(lib_path).string()}};
        lib.objects.insert_or_assign(object.identifier, std::move(object));
        objectlib::save_library(lib, lib_path);
        return result;
      };
      action.text = [](const Json& r) {
        return "ingested " + r["identifier"].get<std::string>() + " with " +
               r["stable_poses"].dump() + " stable poses into " + r["library"].get<std::string>() +
               "\n";
      };
    });
  }

  // library show
  {
    auto* lib = app.add_subcommand("library", "Object library commands");
    lib->require_subcommand(1);
    auto* show = lib->add_subcommand("show", "List the objects of a library");
    show->add_option("library", o.library, "Library YAML")->required();
    show->callback([&] {
      action.run = [&o] {
        const auto lib = objectlib::load_library(o.library);
        Json objects = Json::array();
        for (const auto& [id, o] : lib.objects) {
          Json probs = Json::array();
          for (const auto& sp : o.stable_poses) probs.push_back(sp.probability);
          objects.push_back(Json{{"identifier", id},
                                 {"mass", o.mass},
                                 {"friction", o.friction},
                                 {"volume", o.mass_properties.volume},
                                 {"stable_pose_probabilities", probs}});
        }
        return Json{{"name", lib.name}, {"objects", objects}};
      };
      action.text = [](const Json& r) {
        return "library " + r["name"].get<std::string>() + "\n" +
               lines(r["objects"], [](const Json& o) {
                 return "  " + o["identifier"].get<std::string>() + "  mass " +
                        o["mass"].dump() + " kg  friction " + o["friction"].dump() + "  " +
                        std::to_string(o["stable_pose_probabilities"].size()) + " stable poses";
               });
      };
    });
  }

  // scene new | validate | random | show
  {
    auto* sc = app.add_subcommand("scene", "Scene commands");
    sc->require_subcommand(1);

    auto* create = sc->add_subcommand("new", "Write an empty scene");
    create->add_option("--library", o.lib_override, "Library YAML")->required();
    create->add_option("--area", o.area, "A2, A3, A4 or WIDTHxDEPTH (m)");
    create->add_flag("--board", o.board, "Add a marker board with default settings");
    create->add_option("--out", o.scene_out, "Scene YAML")->required();
    create->callback([&] {
      action.run = [&o] {
        scene::Scene s;
        s.ground_area = parse_area(o.area);
        s.library_path = fs::absolute(o.lib_override);
        objectlib::load_library(s.library_path);
        if (o.board) s.board = scene::BoardSpec{};
        scene::save_scene(s, o.scene_out);
        return Json{{"scene", fs::absolute(o.scene_out).string()}};
      };
      action.text = [](const Json& r) { return "wrote " + r["scene"].get<std::string>() + "\n"; };
    });

    auto* validate = sc->add_subcommand("validate", "Report each instance's status");
    validate->add_option("scene", o.scene_path, "Scene YAML")->required();
    validate->add_option("--library", o.lib_override, "Override the scene's library");
    validate->add_flag("--strict", o.strict, "Exit 1 unless every instance is Ok");
    validate->callback([&] {
      action.run = [&o] {
        const auto s = scene::load_scene(o.scene_path);
        const auto statuses = scene::validate_scene(s, library_for(s, o.lib_override));
        Json result{{"statuses", statuses_json(statuses)}};
        Json objects = Json::array();
        for (const auto& inst : s.instances) objects.push_back(inst.object_id);
        result["objects"] = objects;
        result["all_ok"] = std::all_of(statuses.begin(), statuses.end(), [](auto st) {
          return st == scene::InstanceStatus::Ok;
        });
        return result;
      };
      action.text = [](const Json& r) {
        std::string text;
        for (std::size_t i = 0; i < r["statuses"].size(); ++i) {
          text += std::to_string(i) + " " + r["objects"][i].get<std::string>() + " " +
                  r["statuses"][i].get<std::string>() + "\n";
        }
        return text;
      };
    });

    auto* random = sc->add_subcommand("random", "Place random objects in stable poses");
    random->add_option("--library", o.lib_override, "Library YAML")->required();
    random->add_option("--n", o.n_objects, "Target object count");
    random->add_option("--k", o.attempts, "Placement attempts per object");
    random->add_option("--seed", o.seed, "Random seed");
    random->add_option("--area", o.area, "A2, A3, A4 or WIDTHxDEPTH (m)");
    random->add_flag("--board", o.board, "Add a marker board with default settings");
    random->add_option("--out", o.scene_out, "Scene YAML")->required();
    random->callback([&] {
      action.run = [&o] {
        const auto lib = objectlib::load_library(o.lib_override);
        auto s = scene::random_scene(lib, {o.n_objects, o.attempts, o.seed}, parse_area(o.area));
        s.library_path = fs::absolute(o.lib_override);
        if (o.board) s.board = scene::BoardSpec{};
        scene::save_scene(s, o.scene_out);
        return Json{{"scene", fs::absolute(o.scene_out).string()}, {"placed", s.instances.size()}};
      };
      action.text = [](const Json& r) {
        return "placed " + r["placed"].dump() + " objects, wrote " +
               r["scene"].get<std::string>() + "\n";
      };
    });

    auto* show = sc->add_subcommand("show", "Summarise a scene");
    show->add_option("scene", o.scene_path, "Scene YAML")->required();
    show->callback([&] {
      action.run = [&o] {
        const auto s = scene::load_scene(o.scene_path);
        Json objects = Json::array();
        for (const auto& inst : s.instances) {
          const auto r = inst.pose.rotation_matrix();
          objects.push_back(Json{{"object_type", inst.object_id},
                                 {"x", inst.pose.translation.x()},
                                 {"y", inst.pose.translation.y()},
                                 {"z", inst.pose.translation.z()},
                                 {"yaw_deg", std::atan2(r(1, 0), r(0, 0)) * 180.0 / geom::kPi}});
        }
        return Json{{"ground_area", {s.ground_area.width, s.ground_area.depth}},
                    {"object_library", s.library_path.string()},
                    {"board", s.board.has_value()},
                    {"objects", objects}};
      };
      action.text = [](const Json& r) {
        char head[128];
        std::snprintf(head, sizeof head, "ground area %.3f x %.3f m, %zu objects%s\n",
                      r["ground_area"][0].get<double>(), r["ground_area"][1].get<double>(),
                      r["objects"].size(), r["board"].get<bool>() ? ", marker board" : "");
        return head + lines(r["objects"], [](const Json& o) {
                 char line[160];
                 std::snprintf(line, sizeof line, "  %-16s x %.4f  y %.4f  z %.4f  yaw %.1f",
                               o["object_type"].get<std::string>().c_str(), o["x"].get<double>(),
                               o["y"].get<double>(), o["z"].get<double>(),
                               o["yaw_deg"].get<double>());
                 return std::string(line);
               });
      };
    });
  }

  // grasps sample | filter | eval | select | pipeline
  {
    auto* g = app.add_subcommand("grasps", "Grasp sampling and evaluation");
    g->require_subcommand(1);
    const auto gripper = [&o] {
      return o.gripper_path.empty() ? graspgen::ParallelJawGripper{}
                                  : graspgen::gripper_from_json(io::load_yaml(o.gripper_path), "");
    };
    const auto eval_config = [&o] {
      return o.config_path.empty() ? graspeval::EvalConfig{}
                                 : graspeval::eval_config_from_json(io::load_yaml(o.config_path), "");
    };

    auto* sample = g->add_subcommand("sample", "Sample antipodal grasps for one object");
    sample->add_option("--library", o.lib_override, "Library YAML")->required();
    sample->add_option("--object", o.object_id, "Object identifier")->required();
    sample->add_option("--samples", o.samples, "Surface samples");
    sample->add_option("--rays", o.rays, "Rays per friction cone");
    sample->add_option("--angles", o.angles, "Approach angles per contact pair");
    sample->add_option("--max", o.max_grasps, "Keep a seeded subset of at most this many");
    sample->add_option("--seed", o.seed, "Random seed");
    sample->add_option("--gripper", o.gripper_path, "Gripper YAML");
    sample->add_option("--out", o.grasps_out, "Grasp set YAML")->required();
    sample->callback([&, gripper] {
      action.run = [&o, gripper] {
        const auto lib = objectlib::load_library(o.lib_override);
        graspgen::SamplingParams p;
        p.n_surface_samples = o.samples;
        p.rays_per_cone = o.rays;
        p.n_approach_angles = o.angles;
        p.seed = o.seed;
        if (o.max_grasps >= 0) p.max_grasps = static_cast<std::size_t>(o.max_grasps);
        const auto set = graspgen::sample_antipodal_grasps(lib.at(o.object_id), gripper(), p);
        graspgen::save_grasp_set(set, o.grasps_out);
        return Json{{"object_id", o.object_id}, {"grasps", set.grasps.size()},
                    {"out", fs::absolute(o.grasps_out).string()}};
      };
      action.text = [](const Json& r) {
        return "sampled " + r["grasps"].dump() + " grasps for " +
               r["object_id"].get<std::string>() + "\n";
      };
    });

    auto* filter = g->add_subcommand("filter", "Drop grasps whose hand collides in a scene");
    filter->add_option("--scene", o.scene_path, "Scene YAML")->required();
    filter->add_option("--instance", o.instance, "Target instance index")->required();
    filter->add_option("--grasps", o.grasps_in, "Grasp set YAML (object frame)")->required();
    filter->add_option("--mode", o.filter_mode, "coarse, exact or both")
        ->check(CLI::IsMember({"coarse", "exact", "both"}));
    filter->add_option("--library", o.lib_override, "Override the scene's library");
    filter->add_option("--gripper", o.gripper_path, "Gripper YAML");
    filter->add_option("--out", o.grasps_out, "Grasp set YAML")->required();
    filter->callback([&, gripper] {
      action.run = [&o, gripper] {
        const auto s = scene::load_scene(o.scene_path);
        const auto lib = library_for(s, o.lib_override);
        const auto hand = gripper();
        auto set = graspgen::load_grasp_set(o.grasps_in);
        check_grasps_match(s, o.instance, set);
        const std::size_t before = set.grasps.size();
        if (o.filter_mode != "exact") {
          set = graspgen::coarse_collision_filter(set, s, lib, o.instance, hand);
        }
        const std::size_t after_coarse = set.grasps.size();
        if (o.filter_mode != "coarse") {
          set = graspgen::filter_gripper_collisions(set, s, lib, o.instance, hand);
        }
        graspgen::save_grasp_set(set, o.grasps_out);
        return Json{{"before", before}, {"after_coarse", after_coarse}, {"kept", set.grasps.size()}};
      };
      action.text = [](const Json& r) {
        return "kept " + r["kept"].dump() + " of " + r["before"].dump() + " grasps\n";
      };
    });

    auto* eval = g->add_subcommand("eval", "Evaluate grasps in a scene");
    eval->add_option("--scene", o.scene_path, "Scene YAML")->required();
    eval->add_option("--grasps", o.grasp_args, "INSTANCE=grasps.yaml, repeatable")->required();
    eval->add_option("--scene-id", o.scene_id, "Scene id written to records (default: file stem)");
    eval->add_option("--library", o.lib_override, "Override the scene's library");
    eval->add_option("--gripper", o.gripper_path, "Gripper YAML");
    eval->add_option("--config", o.config_path, "Evaluation config YAML");
    eval->add_option("--out", o.records_out, "Trial records (.csv or .yaml)")->required();
    eval->callback([&, gripper, eval_config] {
      action.run = [&o, gripper, eval_config] {
        const auto s = scene::load_scene(o.scene_path);
        const auto lib = library_for(s, o.lib_override);
        std::vector<graspeval::InstanceGrasps> sets;
        for (const auto& arg : o.grasp_args) {
          const auto eq = arg.find('=');
          if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "--grasps: expected INSTANCE=FILE, got " + arg);
          }
          std::size_t index = 0;
          try {
            index = std::stoul(arg.substr(0, eq));
          } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "--grasps: bad instance in " + arg);
          }
          sets.push_back({index, graspgen::load_grasp_set(arg.substr(eq + 1))});
          check_grasps_match(s, index, sets.back().grasps);
        }
        const std::string id = o.scene_id.empty() ? fs::path(o.scene_path).stem().string() : o.scene_id;
        const auto records = graspeval::evaluate_batch(id, s, lib, sets, gripper(), eval_config());
        graspeval::save_records(records, o.records_out);
        std::size_t ok = 0;
        for (const auto& r : records) ok += r.sim_label;
        return Json{{"records", records.size()}, {"successes", ok},
                    {"out", fs::absolute(o.records_out).string()}};
      };
      action.text = [](const Json& r) {
        return "evaluated " + r["records"].dump() + " grasps, " + r["successes"].dump() +
               " successes\n";
      };
    });

    auto* select = g->add_subcommand("select", "Balanced subset per object");
    select->add_option("--records", o.records_in, "Trial records")->required();
    select->add_option("--c", o.per_object, "Records per object")->required();
    select->add_option("--seed", o.seed, "Random seed");
    select->add_option("--out", o.records_out, "Selected records")->required();
    select->callback([&] {
      action.run = [&o] {
        const auto records = graspeval::load_records(o.records_in);
        const auto chosen = graspeval::select_balanced(records, o.per_object, o.seed);
        graspeval::save_records(chosen, o.records_out);
        return Json{{"records", records.size()}, {"selected", chosen.size()}};
      };
      action.text = [](const Json& r) {
        return "selected " + r["selected"].dump() + " of " + r["records"].dump() + " records\n";
      };
    });

    auto* pipeline = g->add_subcommand(
        "pipeline", "Sample, filter, evaluate and select for every object of a scene");
    pipeline->add_option("--scene", o.scene_path, "Scene YAML")->required();
    pipeline->add_option("--scene-id", o.scene_id, "Scene id written to records (default: file stem)");
    pipeline->add_option("--candidates", o.candidates, "Candidates kept per object after sampling");
    pipeline->add_option("--samples", o.samples, "Surface samples");
    pipeline->add_option("--c", o.per_object, "Records per object in the selection");
    pipeline->add_option("--seed", o.seed, "Random seed");
    pipeline->add_option("--library", o.lib_override, "Override the scene's library");
    pipeline->add_option("--gripper", o.gripper_path, "Gripper YAML");
    pipeline->add_option("--config", o.config_path, "Evaluation config YAML");
    pipeline->add_option("--out", o.records_out, "All evaluated records")->required();
    pipeline->add_option("--selected", o.selected_out, "Balanced selection");
    pipeline->callback([&, gripper, eval_config] {
      action.run = [&o, gripper, eval_config] {
        const auto s = scene::load_scene(o.scene_path);
        const auto lib = library_for(s, o.lib_override);
        graspeval::PipelineParams p;
        p.sampling.n_surface_samples = o.samples;
        p.candidates = o.candidates;
        p.per_object_count = o.per_object;
        p.seed = o.seed;
        const std::string id = o.scene_id.empty() ? fs::path(o.scene_path).stem().string() : o.scene_id;
        const auto result = graspeval::run_pipeline(id, s, lib, gripper(), eval_config(), p);
        graspeval::save_records(result.evaluated, o.records_out);
        if (!o.selected_out.empty()) graspeval::save_records(result.selected, o.selected_out);
        Json stages = Json::array();
        for (const auto& st : result.stages) {
          stages.push_back(Json{{"instance", st.instance}, {"object_id", st.object_id},
                                {"sampled", st.sampled}, {"after_coarse", st.after_coarse},
                                {"after_pregrasp", st.after_pregrasp},
                                {"successes", st.successes}});
        }
        return Json{{"stages", stages}, {"evaluated", result.evaluated.size()},
                    {"selected", result.selected.size()}};
      };
      action.text = stage_text;
    });
  }

  // printout
  {
    auto* cmd = app.add_subcommand("printout", "Write printout.pdf and page PNGs for a scene");
    cmd->add_option("scene", o.scene_path, "Scene YAML")->required();
    cmd->add_option("--page", o.page, "A0..A5, Letter or WIDTHxHEIGHT (mm)");
    cmd->add_option("--dpi", o.dpi, "Raster resolution");
    cmd->add_option("--library", o.lib_override, "Override the scene's library");
    cmd->add_option("--out", o.out_dir, "Output directory")->required();
    cmd->callback([&] {
      action.run = [&o] {
        const auto s = scene::load_scene(o.scene_path);
        const auto doc = printout::compose_printout(s, library_for(s, o.lib_override),
                                                    parse_page(o.page), o.dpi);
        printout::write_printout(doc, o.out_dir);
        Json warnings = Json::array();
        for (const auto& w : doc.warnings) warnings.push_back(w);
        return Json{{"pages", doc.pages.size()},
                    {"grid", {doc.tiling.columns, doc.tiling.rows}},
                    {"overlap_mm", {doc.tiling.overlap_x_mm, doc.tiling.overlap_y_mm}},
                    {"warnings", warnings},
                    {"out", fs::absolute(o.out_dir).string()}};
      };
      action.text = [](const Json& r) {
        std::string text = "wrote " + r["pages"].dump() + " page(s) (" + r["grid"][0].dump() +
                           " x " + r["grid"][1].dump() + ") to " + r["out"].get<std::string>() +
                           "\n";
        for (const auto& w : r["warnings"]) text += "warning: " + w.get<std::string>() + "\n";
        return text;
      };
    });
  }

  // render
  {
    auto* cmd = app.add_subcommand("render", "Render depth, segmentation and colour views");
    cmd->add_option("scene", o.scene_path, "Scene YAML")->required();
    cmd->add_option("--views", o.views, "Number of sampled cameras");
    cmd->add_option("--width", o.width, "Image width");
    cmd->add_option("--height", o.height, "Image height");
    cmd->add_option("--fov", o.fov, "Horizontal field of view (deg)");
    cmd->add_option("--radius", o.radius, "Camera distance range MIN,MAX (m)");
    cmd->add_option("--elevation", o.elevation, "Elevation range MIN,MAX (deg)");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--library", o.lib_override, "Override the scene's library");
    cmd->add_option("--out", o.out_dir, "Output directory")->required();
    cmd->callback([&] {
      action.run = [&o] {
        const auto s = scene::load_scene(o.scene_path);
        const auto lib = library_for(s, o.lib_override);
        const auto poses = render::sample_camera_poses(
            s, o.views, parse_range(o.radius, "--radius"), parse_range(o.elevation, "--elevation"), o.seed);
        Json written = Json::array();
        for (std::size_t i = 0; i < poses.size(); ++i) {
          const auto cam = render::make_camera(o.width, o.height, o.fov, poses[i]);
          char name[32];
          std::snprintf(name, sizeof name, "view_%03zu", i);
          render::write_view(render::render_scene(s, lib, cam), cam, fs::path(o.out_dir) / name);
          written.push_back(name);
        }
        return Json{{"views", written}, {"out", fs::absolute(o.out_dir).string()}};
      };
      action.text = [](const Json& r) {
        return "rendered " + std::to_string(r["views"].size()) + " view(s) to " +
               r["out"].get<std::string>() + "\n";
      };
    });
  }

  // report
  {
    auto* cmd = app.add_subcommand("report", "Confusion matrices, precision and recall");
    cmd->add_option("--records", o.record_files, "Trial record files (.csv or .yaml)")->required();
    cmd->add_option("--out", o.out_dir, "Also write report.txt/json/csv here");
    cmd->callback([&] {
      action.run = [&o] {
        std::vector<graspeval::TrialRecord> records;
        for (const auto& f : o.record_files) {
          auto more = graspeval::load_records(f);
          records.insert(records.end(), more.begin(), more.end());
        }
        const auto report = analytics::make_report(records);
        if (!o.out_dir.empty()) analytics::write_report(report, o.out_dir);
        Json j = analytics::report_json(report);
        j["text"] = analytics::report_text(report);
        return j;
      };
      action.text = [](const Json& r) { return r["text"].get<std::string>(); };
    });
  }

  // serve
  {
    auto* cmd = app.add_subcommand("serve", "Run the HTTP/JSON service");
    cmd->add_option("--config", o.config_path, "Service config YAML (default: $TABLETOP_CONFIG)");
    cmd->add_option("--library", o.lib_override, "Library YAML (instead of a config file)");
    cmd->add_option("--data-dir", o.data_dir, "Data directory (with --library)");
    cmd->add_option("--host", o.host, "Listen address");
    cmd->add_option("--port", o.port, "Listen port (0 picks one)");
    cmd->callback([&] {
      action.run = [&o, &out] {
        service::ServiceConfig config;
        std::optional<fs::path> path;
        if (!o.config_path.empty()) path = o.config_path;
        if (!path && o.lib_override.empty()) path = service::config_path_from_env();
        if (path) {
          config = service::load_service_config(*path);
        } else if (!o.lib_override.empty()) {
          config.library_path = fs::absolute(o.lib_override);
          config.data_dir = fs::absolute(o.data_dir.empty() ? "." : o.data_dir);
        } else {
          throw Error(ErrorCode::InvalidArgument,
                      "serve needs --config, --library or TABLETOP_CONFIG");
        }
        if (!o.host.empty()) config.host = o.host;
        if (o.port >= 0) config.port = o.port;

        // Signals are taken by a dedicated thread so the server can stop cleanly.
        sigset_t signals;
        sigemptyset(&signals);
        sigaddset(&signals, SIGINT);
        sigaddset(&signals, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &signals, nullptr);
        service::Service svc(config);
        const int bound = svc.bind();
        if (bound < 0) {
          throw Error(ErrorCode::IoError, "cannot listen on " + config.host + ":" +
                                              std::to_string(config.port));
        }
        out << "listening on http://" << config.host << ":" << bound << std::endl;
        std::thread waiter([&svc, signals] {
          int sig = 0;
          sigwait(&signals, &sig);
          svc.stop();
        });
        svc.serve();
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
        return Json{{"stopped", true}};
      };
      action.text = [](const Json&) { return std::string(); };
    });
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    // Point at the failing subcommand's help.
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    const Json result = action.run();
    if (json) {
      out << result.dump(2) << "\n";
    } else {
      out << action.text(result);
    }
    if (o.strict && result.contains("all_ok") && !result["all_ok"].get<bool>()) {
      return kExitDomainError;
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (json) out << Json{{"error", to_string(e.code())}, {"message", e.what()}}.dump(2) << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (json) out << Json{{"error", "InternalError"}, {"message", e.what()}}.dump(2) << "\n";
    return kExitDomainError;
  }
}

}  // namespace tabletop::cli

// multipoint: verify scene files, run fuzz campaigns, print generated scenes.
// Exit codes: 0 all rows PASS, 1 some row FAIL, 2 bad input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "multipoint/generate.hpp"

using namespace multipoint;

namespace {

constexpr int kPass = 0, kFail = 1, kInputError = 2;

struct InputError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError{"cannot read " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string scene_label(const std::string& path) {
  auto stem = std::filesystem::path(path).stem().string();
  return stem.empty() ? path : stem;
}

Scene load(const std::string& path) {
  try {
    return parse_scene(read_file(path));
  } catch (const SceneError& e) {
    throw InputError{path + ": " + e.what()};
  }
}

// Runs every verify target of a scene; label gets ":<target>" when there
// are several.
std::vector<HerbertReport> run_scene(const Scene& s, const std::string& label) {
  std::vector<HerbertReport> out;
  const auto targets = verify_targets(s);
  for (const auto& t : targets) {
    try {
      out.push_back(verify_target(s, t, targets.size() == 1 ? label : label + ":" + t.name));
    } catch (const Violation& v) {
      throw InputError{label + ": " + t.name + " rejected: " + v.what()};
    }
  }
  return out;
}

int status(const std::vector<HerbertReport>& reports) {
  for (const auto& r : reports)
    if (r.any("FAIL")) return kFail;
  for (const auto& r : reports)
    if (r.any("ERROR")) return kInputError;
  return kPass;
}

void emit(const std::vector<HerbertReport>& reports, const std::string& format, bool header) {
  if (format == "tsv") {
    if (header) std::cout << kTsvHeader << '\n';
    for (const auto& r : reports) std::cout << to_tsv(r);
  } else {
    for (const auto& r : reports) std::cout << to_text(r);
  }
}

void dump_failures(const std::vector<HerbertReport>& reports, const Scene& s, const std::string& dir) {
  for (const auto& r : reports)
    if (r.any("FAIL")) std::cerr << "reproducer written to " << write_reproducer(r, print_scene(s), dir).string() << '\n';
}

std::uint64_t seed_override(std::uint64_t seed) {
  if (const char* env = std::getenv("MULTIPOINT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError{"MULTIPOINT_SEED is not an unsigned integer"};
    }
  }
  return seed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-point sets of self-transverse immersions, checked in exact arithmetic"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string format = "text";
  std::string repro_dir = ".";
  auto* verify_cmd = app.add_subcommand("verify", "verify the scenes in each file");
  verify_cmd->add_option("files", files, "scene files")->required();
  verify_cmd->add_option("--format", format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));
  verify_cmd->add_option("--repro-dir", repro_dir, "where reproducers of failing scenes go");

  std::string explain_file;
  auto* explain_cmd = app.add_subcommand("explain", "show the derivation behind each verdict");
  explain_cmd->add_option("file", explain_file, "scene file")->required();

  std::string universe = "curves", ambient = "mixed";
  int count = 100;
  std::uint64_t seed = 0;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "verify generated scenes seed, seed+1, ...");
  fuzz_cmd->add_option("--universe", universe, "curves or surfaces")->check(CLI::IsMember({"curves", "surfaces"}));
  fuzz_cmd->add_option("--count", count, "number of scenes")->check(CLI::NonNegativeNumber);
  fuzz_cmd->add_option("--seed", seed, "first seed (MULTIPOINT_SEED overrides)");
  fuzz_cmd->add_option("--ambient", ambient, "mixed, torus, klein or genus2 (curves)")
      ->check(CLI::IsMember({"mixed", "torus", "klein", "genus2"}));
  fuzz_cmd->add_option("--format", format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));
  fuzz_cmd->add_option("--repro-dir", repro_dir, "where reproducers of failing scenes go");

  GeneratorConfig gen;
  auto* gen_cmd = app.add_subcommand("gen", "print one generated scene");
  gen_cmd->add_option("--universe", gen.universe, "curves or surfaces")->check(CLI::IsMember({"curves", "surfaces"}));
  gen_cmd->add_option("--ambient", gen.ambient, "torus, klein, genus2 or t3-tori")
      ->check(CLI::IsMember({"torus", "klein", "genus2", "t3-tori"}));
  gen_cmd->add_option("--seed", gen.seed, "seed (MULTIPOINT_SEED overrides)");
  gen_cmd->add_option("--min-components", gen.min_components);
  gen_cmd->add_option("--max-components", gen.max_components);
  gen_cmd->add_option("--min-segments", gen.min_segments);
  gen_cmd->add_option("--max-segments", gen.max_segments);
  gen_cmd->add_option("--budget", gen.budget, "candidates to try");
  gen_cmd->add_flag("--embedded", gen.embedded, "curves without self-crossings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (verify_cmd->parsed()) {
      int worst = kPass;
      bool header = true;
      for (const auto& path : files) {
        const Scene s = load(path);
        auto reports = run_scene(s, scene_label(path));
        emit(reports, format, header);
        header = false;
        dump_failures(reports, s, repro_dir);
        worst = std::max(worst, status(reports));
      }
      return worst;
    }
    if (explain_cmd->parsed()) {
      const Scene s = load(explain_file);
      auto reports = run_scene(s, scene_label(explain_file));
      for (const auto& r : reports) std::cout << explain(r);
      return status(reports);
    }
    if (fuzz_cmd->parsed()) {
      seed = seed_override(seed);
      int worst = kPass, failed = 0;
      if (format == "tsv") std::cout << kTsvHeader << '\n';
      for (int i = 0; i < count; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        const auto cfg = fuzz_config(universe, s, ambient == "mixed", ambient);
        Scene scene;
        try {
          scene = generate(cfg);
        } catch (const Violation& v) {
          throw InputError{"seed " + std::to_string(s) + ": " + v.what()};
        }
        auto reports = run_scene(scene, universe + "-" + std::to_string(s));
        emit(reports, format, false);
        dump_failures(reports, scene, repro_dir);
        const int st = status(reports);
        failed += st != kPass;
        worst = std::max(worst, st);
      }
      std::cerr << "fuzz " << universe << ": " << count - failed << "/" << count << " scenes pass\n";
      return worst;
    }
    if (gen_cmd->parsed()) {
      gen.seed = seed_override(gen.seed);
      if (gen.universe == "surfaces" && gen.ambient == "torus") gen.ambient = "t3-tori";
      std::cout << print_scene(generate(gen));
      return kPass;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kInputError;
  } catch (const Violation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

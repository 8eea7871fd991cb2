#include "acet/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "acet/checkpoint.hpp"
#include "acet/config_io.hpp"
#include "acet/dataset.hpp"
#include "acet/error.hpp"
#include "acet/evaluation.hpp"
#include "acet/report.hpp"
#include "acet/synth.hpp"

namespace fs = std::filesystem;

namespace acet::cli {

namespace {

EnsembleConfig load_config(const std::optional<fs::path>& file, const std::string& mode) {
  EnsembleConfig cfg;
  if (file) apply_overrides(cfg, read_key_values(*file));
  cfg.mode = parse_mode(mode);
  return cfg;
}

std::string cell_name(const std::string& seq, Mode mode) { return seq + "_" + std::string(to_string(mode)); }

nlohmann::json summary_json(const OpeResult& r, std::uint64_t seed, const EnsembleConfig& cfg) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [k, v] : to_key_values(resolve_mode(cfg))) config[k] = v;
  int occluded = 0;
  for (const auto& o : r.outputs) occluded += o.occluded ? 1 : 0;
  double mean_iou = 0.0;
  for (double v : r.ious) mean_iou += v;
  mean_iou /= static_cast<double>(r.ious.size());
  return {{"sequence", r.sequence},
          {"mode", std::string(to_string(r.mode))},
          {"seed", seed},
          {"frames", r.boxes.size()},
          {"occluded_frames", occluded},
          {"mean_iou", mean_iou},
          {"auc", r.curve.auc},
          {"success_rate", r.curve.success_rate},
          {"config", config}};
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

struct ManifestSequence {
  std::string label;
  std::optional<fs::path> dir;
  std::optional<SynthConfig> synth;
};

struct Manifest {
  std::vector<ManifestSequence> sequences;
  std::vector<Mode> modes;
  std::uint64_t seed = 1;
  fs::path out = "bench_out";
  std::optional<fs::path> config;
};

Manifest read_manifest(const fs::path& path) {
  const KeyValues kv = read_key_values(path);
  const fs::path base = path.parent_path();
  const auto resolve = [&](const std::string& v) { return fs::path(v).is_absolute() ? fs::path(v) : base / v; };
  Manifest m;
  std::optional<std::string> suite;
  for (const auto& [key, value] : kv) {
    if (key == "sequence") {
      m.sequences.push_back({"", resolve(value), std::nullopt});
    } else if (key == "synth") {
      m.sequences.push_back({"", std::nullopt, synth_config_from_key_values(read_key_values(resolve(value)))});
    } else if (key == "suite") {
      if (value != "standard") throw ConfigError("unknown suite '" + value + "'");
      suite = value;
    } else if (key == "modes" || key == "mode") {
      for (const auto& s : split(value, ',')) m.modes.push_back(parse_mode(s));
    } else if (key == "seed") {
      m.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "out") {
      m.out = resolve(value);
    } else if (key == "config") {
      m.config = resolve(value);
    } else {
      throw ConfigError("unknown manifest key '" + key + "'");
    }
  }
  if (suite) {
    // Suite members are generated after the seed is known.
    m.sequences.push_back({"@standard", std::nullopt, std::nullopt});
  }
  return m;
}

}  // namespace

int cmd_track(const TrackOptions& opt) {
  return guarded([&] {
    const EnsembleConfig cfg = load_config(opt.config, opt.mode);
    const Sequence seq = load_otb_sequence(opt.sequence);
    const OpeResult r = run_ope(cfg, seq, opt.seed);
    fs::create_directories(opt.out);
    const std::string stem = cell_name(seq.name(), cfg.mode);
    write_jsonl(r, opt.out / (stem + ".jsonl"));
    write_rect(r, opt.out / (stem + "_rect.txt"));
    write_text(summary_json(r, opt.seed, cfg).dump(2) + "\n", opt.out / (stem + "_summary.json"));
    if (opt.checkpoint) {
      // Replays the run to capture the final state; results are deterministic.
      TrackerState st = init_tracker(*seq.frame(0), seq.ground_truth()[0], cfg, opt.seed);
      for (std::size_t k = 1; k < seq.size(); ++k) step(st, *seq.frame(k));
      save_checkpoint(st, *opt.checkpoint);
    }
    std::printf("%s: %zu frames, auc %.4f, %.1f fps\n", stem.c_str(), r.boxes.size(), r.curve.auc,
                static_cast<double>(r.outputs.size()) / std::max(r.seconds, 1e-9));
    return 0;
  });
}

int cmd_bench(const BenchOptions& opt) {
  return guarded([&] {
    Manifest m = read_manifest(opt.manifest);
    if (opt.seed) m.seed = *opt.seed;
    if (opt.out) m.out = *opt.out;
    if (m.sequences.empty()) throw ConfigError("manifest lists no sequences");
    if (m.modes.empty()) throw ConfigError("manifest lists no tracker modes");

    std::vector<Sequence> sequences;
    for (const auto& ms : m.sequences) {
      if (ms.dir) {
        sequences.push_back(load_otb_sequence(*ms.dir));
      } else if (ms.synth) {
        sequences.push_back(synth_generate(*ms.synth));
      } else {
        for (const auto& sc : standard_suite(m.seed)) sequences.push_back(synth_generate(sc));
      }
    }
    std::set<std::string> names;
    for (const auto& s : sequences)
      if (!names.insert(s.name()).second) throw ConfigError("duplicate sequence name '" + s.name() + "' in manifest");

    const std::size_t cells = sequences.size() * m.modes.size();
    std::vector<OpeResult> results(cells);
    std::vector<std::string> errors(cells);
    std::vector<EnsembleConfig> configs(m.modes.size());
    for (std::size_t i = 0; i < m.modes.size(); ++i) {
      configs[i] = load_config(m.config, std::string(to_string(m.modes[i])));
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (long cell = 0; cell < static_cast<long>(cells); ++cell) {
      const std::size_t si = static_cast<std::size_t>(cell) / m.modes.size();
      const std::size_t mi = static_cast<std::size_t>(cell) % m.modes.size();
      try {
        results[cell] = run_ope(configs[mi], sequences[si], m.seed);
      } catch (const std::exception& e) {
        errors[cell] = sequences[si].name() + "/" + std::string(to_string(m.modes[mi])) + ": " + e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) throw Error(e);

    fs::create_directories(m.out / "results");
    std::vector<CurveRow> curve_rows;
    std::vector<std::pair<std::string, AttributeTable>> tables;
    std::vector<std::pair<std::string, SuccessCurve>> mean_curves;
    for (std::size_t mi = 0; mi < m.modes.size(); ++mi) {
      std::map<std::string, SequenceScore> scores;
      SuccessCurve mean;
      mean.thresholds = success_thresholds();
      for (std::size_t si = 0; si < sequences.size(); ++si) {
        const OpeResult& r = results[si * m.modes.size() + mi];
        const std::string stem = cell_name(r.sequence, r.mode);
        write_jsonl(r, m.out / "results" / (stem + ".jsonl"));
        write_rect(r, m.out / "results" / (stem + "_rect.txt"));
        curve_rows.push_back({r.sequence, std::string(to_string(r.mode)), r.curve});
        scores[r.sequence] = {sequences[si].attributes(), r.curve.auc};
        for (int k = 0; k < kSuccessThresholds; ++k) mean.success_rate[k] += r.curve.success_rate[k] / sequences.size();
        mean.auc += r.curve.auc / static_cast<double>(sequences.size());
      }
      AttributeTable table = attribute_table(scores);
      for (const auto& w : table.warnings) std::cerr << "warning: " << to_string(m.modes[mi]) << ": " << w << '\n';
      tables.emplace_back(std::string(to_string(m.modes[mi])), std::move(table));
      mean_curves.emplace_back(std::string(to_string(m.modes[mi])), mean);
    }
    write_curves_csv(curve_rows, m.out / "curves.csv");
    write_attribute_csv(tables, m.out / "attributes.csv");
    write_text(render_success_svg(mean_curves, "Success plot (OPE)"), m.out / "success_plot.svg");
    for (const auto& [name, c] : mean_curves) std::printf("%-10s mean auc %.4f\n", name.c_str(), c.auc);
    return 0;
  });
}

int cmd_synth(const SynthOptions& opt) {
  return guarded([&] {
    std::vector<SynthConfig> configs;
    if (opt.suite) {
      if (*opt.suite != "standard") throw ConfigError("unknown suite '" + *opt.suite + "'");
      configs = standard_suite(opt.seed.value_or(1));
    } else if (opt.config) {
      SynthConfig c = synth_config_from_key_values(read_key_values(*opt.config));
      if (opt.seed) c.seed = *opt.seed;
      configs.push_back(c);
    } else {
      throw ConfigError("synth needs --config FILE or --suite standard");
    }
    for (const auto& c : configs) {
      const fs::path dir = opt.suite ? opt.out / c.name : opt.out;
      write_otb_sequence(synth_generate(c), dir);
      std::string text;
      for (const auto& [k, v] : to_key_values(c)) text += k + " = " + v + "\n";
      write_text(text, dir / "synth.cfg");
      std::printf("wrote %s\n", dir.string().c_str());
    }
    return 0;
  });
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Active collaborative ensemble tracker"};
  app.require_subcommand(1);

  TrackOptions track;
  std::string track_out, track_seq;
  std::optional<std::string> track_cfg, track_ckpt;
  auto* t = app.add_subcommand("track", "Track one OTB-layout sequence");
  t->add_option("--seq", track_seq, "Sequence directory (img/ + groundtruth_rect.txt)")->required();
  t->add_option("--mode", track.mode, "acet | acet-minus | plain | cotrack")
      ->check(CLI::IsMember({"acet", "acet-minus", "plain", "cotrack"}));
  t->add_option("--seed", track.seed, "Random seed");
  t->add_option("--config", track_cfg, "Key-value overrides for the ensemble config");
  t->add_option("--out", track_out, "Output directory")->required();
  t->add_option("--checkpoint", track_ckpt, "Write the final tracker state to this file");

  BenchOptions bench;
  std::string bench_manifest;
  std::optional<std::uint64_t> bench_seed;
  std::optional<std::string> bench_out;
  auto* b = app.add_subcommand("bench", "Run every (sequence x mode) cell of a manifest");
  b->add_option("--manifest", bench_manifest, "Run manifest (key-value)")->required();
  b->add_option("--seed", bench_seed, "Override the manifest seed");
  b->add_option("--out", bench_out, "Override the manifest output directory");

  std::optional<std::string> synth_cfg, synth_suite;
  std::optional<std::uint64_t> synth_seed;
  std::string synth_out;
  auto* s = app.add_subcommand("synth", "Write synthetic sequences in OTB layout");
  s->add_option("--config", synth_cfg, "Synthetic sequence config (key-value)");
  s->add_option("--suite", synth_suite, "Named suite (standard)");
  s->add_option("--seed", synth_seed, "Random seed");
  s->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (*t) {
    track.sequence = track_seq;
    track.out = track_out;
    if (track_cfg) track.config = *track_cfg;
    if (track_ckpt) track.checkpoint = *track_ckpt;
    return cmd_track(track);
  }
  if (*b) {
    bench.manifest = bench_manifest;
    bench.seed = bench_seed;
    if (bench_out) bench.out = *bench_out;
    return cmd_bench(bench);
  }
  SynthOptions synth;
  if (synth_cfg) synth.config = *synth_cfg;
  synth.suite = synth_suite;
  synth.seed = synth_seed;
  synth.out = synth_out;
  return cmd_synth(synth);
}

}  // namespace acet::cli

// Command-line surface: cavity synthesis, task generation, training sweeps,
// series/impulse analysis, and sweep aggregation.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "wpnn/analysis.hpp"
#include "wpnn/cavity.hpp"
#include "wpnn/tasks.hpp"
#include "wpnn/training.hpp"
#include "wpnn/util.hpp"

using nlohmann::json;
using namespace wpnn;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPartial = 4;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CavitySpec spec_from_json(const json& j) {
  CavitySpec spec;
  if (j.contains("n_t")) spec.n_t = j["n_t"].get<int>();
  if (j.contains("n_r")) spec.n_r = j["n_r"].get<int>();
  if (j.contains("n_s")) spec.n_s = j["n_s"].get<int>();
  if (j.contains("mode_count")) spec.mode_count = j["mode_count"].get<int>();
  if (j.contains("mean_dwell_time")) spec.mean_dwell_time = j["mean_dwell_time"].get<double>();
  if (j.contains("coupling_scale")) spec.coupling_scale = j["coupling_scale"].get<double>();
  if (j.contains("absorption_rate")) spec.absorption_rate = j["absorption_rate"].get<double>();
  if (j.contains("rng_seed")) spec.rng_seed = j["rng_seed"].get<uint64_t>();
  if (j.contains("ant_feed_delay")) spec.ant_feed_delay = j["ant_feed_delay"].get<double>();
  if (j.contains("pm_feed_delay")) spec.pm_feed_delay = j["pm_feed_delay"].get<double>();
  if (j.contains("ant_feed_loss")) spec.ant_feed_loss = j["ant_feed_loss"].get<double>();
  if (j.contains("pm_feed_loss")) spec.pm_feed_loss = j["pm_feed_loss"].get<double>();
  if (j.contains("direct_trim")) spec.direct_trim = j["direct_trim"].get<bool>();
  if (j.contains("f_min_hz")) spec.f_min_hz = j["f_min_hz"].get<double>();
  if (j.contains("f_max_hz")) spec.f_max_hz = j["f_max_hz"].get<double>();
  if (j.contains("n_freq")) spec.n_freq = j["n_freq"].get<int>();
  if (j.contains("f_op_hz")) spec.f_op_hz = j["f_op_hz"].get<double>();
  return spec;
}

void print_cavity_diagnostics(const WidebandScattering& ws) {
  double sigma_max = 0.0;
  double margin = 1e300;
  for (int k = 0; k < ws.n_freq(); ++k) {
    const PassivityReport rep = validate_passivity(ws.at(k));
    sigma_max = std::max(sigma_max, rep.sigma_max);
    margin = std::min(margin, 1.0 - rep.sigma_max);
  }
  std::printf("passivity: max sigma %.9f (margin %.3e) over %d samples\n", sigma_max, margin,
              ws.n_freq());
  std::printf("richness: %.5f (off-diagonal pm coupling at %.6g GHz)\n", coupling_richness(ws),
              ws.operating_frequency_hz() / 1e9);
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const CavitySpec& spec, const std::string& out_path) {
  try {
    auto ws = synthesize_cavity(spec);
    save_interchange(*ws, out_path);
    std::printf("wrote %s (%d ports, %d frequencies)\n", out_path.c_str(),
                ws->partition().n_total(), ws->n_freq());
    print_cavity_diagnostics(*ws);
    return 0;
  } catch (const PassivityViolation& e) {
    std::fprintf(stderr, "synthesis failed: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "synthesis failed: %s\n", e.what());
    return kExitConfig;
  }
}

// ---------------------------------------------------------------------------
// gen-tasks

int cmd_gen_tasks(const std::vector<double>& cutoffs, int count, uint64_t base_seed, double g,
                  const std::string& out_dir) {
  make_dirs(out_dir);
  int written = 0;
  for (double fc : cutoffs) {
    for (int i = 0; i < count; ++i) {
      const uint64_t seed = base_seed + static_cast<uint64_t>(i);
      const RegressionTask task = generate_task(fc, g, seed);
      char name[128];
      std::snprintf(name, sizeof(name), "task_fc%.4g_seed%llu.json", fc,
                    static_cast<unsigned long long>(seed));
      save_task(task, out_dir + "/" + name);
      ++written;
    }
  }
  std::printf("wrote %d fixtures to %s\n", written, out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct SweepCell {
  EncodingKind encoding = EncodingKind::Phase;
  GateSetting gate = GateSetting::infinite();
  int depth;
  ArchitectureMode mode;
  double cutoff;
  uint64_t task_seed;
  std::string fixture_path;
  uint64_t fixture_hash;
  std::string name;
  uint64_t key_hash;
};

struct SweepPlan {
  std::shared_ptr<const WidebandScattering> cavity;
  std::string cavity_path;
  uint64_t cavity_hash;
  TrainConfig train;
  std::vector<SweepCell> cells;
  std::string out_dir;
};

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("iterations")) cfg.iterations = j["iterations"].get<int>();
  if (j.contains("batch_size")) cfg.batch_size = j["batch_size"].get<int>();
  if (j.contains("adam_beta1")) cfg.adam_beta1 = j["adam_beta1"].get<double>();
  if (j.contains("adam_beta2")) cfg.adam_beta2 = j["adam_beta2"].get<double>();
  if (j.contains("adam_eps")) cfg.adam_eps = j["adam_eps"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("chain_tol")) cfg.chain_tol = j["chain_tol"].get<double>();
  if (j.contains("grad_check_coords")) cfg.grad_check_coords = j["grad_check_coords"].get<int>();
  if (j.contains("init_lo")) cfg.init_lo = j["init_lo"].get<double>();
  if (j.contains("init_hi")) cfg.init_hi = j["init_hi"].get<double>();
  return cfg;
}

json train_config_to_json(const TrainConfig& cfg) {
  json j;
  j["learning_rate"] = cfg.learning_rate;
  j["iterations"] = cfg.iterations;
  j["batch_size"] = cfg.batch_size;
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["adam_eps"] = cfg.adam_eps;
  j["seed"] = cfg.seed;
  j["chain_tol"] = cfg.chain_tol;
  j["grad_check_coords"] = cfg.grad_check_coords;
  return j;
}

SweepPlan build_plan(const json& cfg) {
  SweepPlan plan;
  plan.out_dir = cfg.at("out_dir").get<std::string>();
  if (const char* env = std::getenv("WPNN_OUT_DIR"); env && *env) plan.out_dir = env;
  make_dirs(plan.out_dir);

  // Cavity: externally supplied or synthesized into the run directory.
  const json& cav = cfg.at("cavity");
  if (cav.contains("path")) {
    plan.cavity_path = cav["path"].get<std::string>();
    if (!file_exists(plan.cavity_path))
      throw ConfigError("cavity file does not exist: " + plan.cavity_path);
    plan.cavity = load_interchange(plan.cavity_path);
  } else if (cav.contains("synth")) {
    const CavitySpec spec = spec_from_json(cav["synth"]);
    plan.cavity_path = plan.out_dir + "/cavity.json";
    if (file_exists(plan.cavity_path)) {
      plan.cavity = load_interchange(plan.cavity_path);
    } else {
      plan.cavity = synthesize_cavity(spec);
      save_interchange(*plan.cavity, plan.cavity_path);
    }
  } else {
    throw ConfigError("config.cavity needs either \"path\" or \"synth\"");
  }
  plan.cavity_hash = fnv1a64(read_file(plan.cavity_path));

  plan.train = train_config_from_json(cfg.value("train", json::object()));

  std::vector<EncodingKind> encodings;
  for (const auto& s : cfg.at("encodings")) encodings.push_back(encoding_from_string(s.get<std::string>()));
  std::vector<GateSetting> gates;
  for (const auto& s : cfg.at("gates")) {
    if (s.is_string())
      gates.push_back(GateSetting::from_string(s.get<std::string>()));
    else
      gates.push_back(GateSetting::truncate(s.get<double>()));
  }
  std::vector<int> depths = cfg.at("depths").get<std::vector<int>>();
  std::vector<ArchitectureMode> modes;
  for (const auto& s : cfg.at("modes")) modes.push_back(mode_from_string(s.get<std::string>()));
  if (encodings.empty() || gates.empty() || depths.empty() || modes.empty())
    throw ConfigError("sweep lists must be non-empty");

  // Tasks: fixtures on disk (generated here unless supplied explicitly).
  struct Fixture {
    double cutoff;
    uint64_t seed;
    std::string path;
    uint64_t hash;
  };
  std::vector<Fixture> fixtures;
  const json& tasks = cfg.at("tasks");
  if (tasks.contains("fixtures")) {
    for (const auto& p : tasks["fixtures"]) {
      Fixture f;
      f.path = p.get<std::string>();
      if (!file_exists(f.path)) throw ConfigError("fixture does not exist: " + f.path);
      const std::string text = read_file(f.path);
      f.hash = fnv1a64(text);
      const RegressionTask t = from_task_json(text);
      f.cutoff = t.cutoff;
      f.seed = t.seed;
      fixtures.push_back(std::move(f));
    }
  } else {
    const std::vector<double> cutoffs = tasks.at("cutoffs").get<std::vector<double>>();
    const int count = tasks.value("count", 50);
    const uint64_t base_seed = tasks.value("base_seed", static_cast<uint64_t>(1000));
    const double g = tasks.value("g", kDefaultTargetScale);
    const std::string dir = plan.out_dir + "/tasks";
    make_dirs(dir);
    for (double fc : cutoffs) {
      for (int i = 0; i < count; ++i) {
        Fixture f;
        f.cutoff = fc;
        f.seed = base_seed + static_cast<uint64_t>(i);
        char name[128];
        std::snprintf(name, sizeof(name), "task_fc%.4g_seed%llu.json", fc,
                      static_cast<unsigned long long>(f.seed));
        f.path = dir + "/" + name;
        if (!file_exists(f.path)) save_task(generate_task(fc, g, f.seed), f.path);
        f.hash = fnv1a64(read_file(f.path));
        fixtures.push_back(std::move(f));
      }
    }
  }
  if (fixtures.empty()) throw ConfigError("no task fixtures in config");

  const std::string train_json = train_config_to_json(plan.train).dump();
  for (EncodingKind enc : encodings) {
    for (const GateSetting& gate : gates) {
      for (int depth : depths) {
        for (ArchitectureMode mode : modes) {
          for (const Fixture& f : fixtures) {
            SweepCell cell;
            cell.encoding = enc;
            cell.gate = gate;
            cell.depth = depth;
            cell.mode = mode;
            cell.cutoff = f.cutoff;
            cell.task_seed = f.seed;
            cell.fixture_path = f.path;
            cell.fixture_hash = f.hash;
            std::ostringstream key;
            key << to_string(enc) << '|' << gate.to_string() << '|' << depth << '|'
                << to_string(mode) << '|' << format_double(f.cutoff) << '|' << f.seed << '|'
                << train_json << '|' << hex64(plan.cavity_hash) << '|' << hex64(f.hash);
            cell.key_hash = fnv1a64(key.str());
            char name[192];
            std::snprintf(name, sizeof(name), "%s_t%s_L%d_%s_fc%.4g_s%llu__%s",
                          to_string(enc).c_str(), gate.to_string().c_str(), depth,
                          to_string(mode).c_str(), f.cutoff,
                          static_cast<unsigned long long>(f.seed),
                          hex64(cell.key_hash).substr(0, 12).c_str());
            cell.name = name;
            plan.cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return plan;
}

/// One sweep cell: train, write checkpoint + trace + record. Returns false on
/// recorded failure.
bool run_cell(const SweepPlan& plan, const SweepCell& cell) {
  const std::string cell_path = plan.out_dir + "/cells/" + cell.name + ".json";
  if (file_exists(cell_path)) {
    try {
      const json existing = json::parse(read_file(cell_path));
      if (existing.value("key_hash", "") == hex64(cell.key_hash) && !existing.contains("error"))
        return true;  // completed previously
    } catch (...) {
      // fall through and recompute
    }
  }

  json rec;
  rec["encoding"] = to_string(cell.encoding);
  rec["tau_s"] = cell.gate.to_string();
  rec["depth"] = cell.depth;
  rec["mode"] = to_string(cell.mode);
  rec["cutoff"] = cell.cutoff;
  rec["task_seed"] = cell.task_seed;
  rec["fixture"] = cell.fixture_path;
  rec["key_hash"] = hex64(cell.key_hash);
  rec["train_config"] = train_config_to_json(plan.train);

  try {
    const RegressionTask task = load_task(cell.fixture_path);
    WpnnModel model(plan.cavity, cell.encoding, cell.gate, cell.depth, cell.mode);
    TrainConfig cfg = plan.train;
    // Decorrelate initializations across cells while staying reproducible.
    cfg.seed = plan.train.seed ^ cell.key_hash;
    const auto [trained, trace] = train(model, task, cfg);

    const std::string ckpt_path = plan.out_dir + "/checkpoints/ckpt_" + cell.name + ".json";
    write_file_atomic(ckpt_path, to_checkpoint_json(trained, plan.cavity_path, plan.cavity_hash));
    const std::string trace_path = plan.out_dir + "/traces/trace_" + cell.name + ".csv";
    std::ostringstream csv;
    csv << "iteration,nmse\n";
    for (size_t i = 0; i < trace.batch_nmse.size(); ++i)
      csv << i << ',' << format_double(trace.batch_nmse[i]) << '\n';
    write_file_atomic(trace_path, csv.str());

    rec["final_train_nmse"] = trace.final_train_nmse;
    rec["final_test_nmse"] = trace.final_test_nmse;
    rec["wall_seconds"] = trace.wall_seconds;
    rec["checkpoint"] = ckpt_path;
    rec["trace_csv"] = trace_path;
    if (trace.grad_checked) {
      rec["grad_check"] = {{"coords", trace.grad_check.coords},
                           {"max_rel_err", trace.grad_check.max_rel_err},
                           {"mean_rel_err", trace.grad_check.mean_rel_err}};
    }
    write_file_atomic(cell_path, rec.dump(2));
    return true;
  } catch (const std::exception& e) {
    rec["error"] = e.what();
    write_file_atomic(cell_path, rec.dump(2));
    return false;
  }
}

int cmd_train(const std::string& config_path, int workers_override) {
  json cfg;
  SweepPlan plan;
  try {
    cfg = json::parse(read_file(config_path));
    plan = build_plan(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }

  make_dirs(plan.out_dir + "/cells");
  make_dirs(plan.out_dir + "/checkpoints");
  make_dirs(plan.out_dir + "/traces");

  int workers = workers_override > 0 ? workers_override
                                     : cfg.value("workers", static_cast<int>(
                                                                std::thread::hardware_concurrency()));
  workers = std::max(1, std::min<int>(workers, static_cast<int>(plan.cells.size())));

  // Prime the shared block cache before the pool starts.
  plan.cavity->blocks();

  std::atomic<size_t> next{0};
  std::atomic<int> failures{0};
  std::atomic<int> done{0};
  std::mutex io_mutex;
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= plan.cells.size()) return;
      const bool ok = run_cell(plan, plan.cells[i]);
      if (!ok) failures.fetch_add(1);
      const int d = done.fetch_add(1) + 1;
      std::lock_guard<std::mutex> lock(io_mutex);
      std::printf("[%d/%zu] %s%s\n", d, plan.cells.size(), plan.cells[i].name.c_str(),
                  ok ? "" : "  (failed)");
      std::fflush(stdout);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (failures.load() == static_cast<int>(plan.cells.size())) return kExitNumerical;
  if (failures.load() > 0) {
    std::fprintf(stderr, "%d of %zu cells failed\n", failures.load(), plan.cells.size());
    return kExitPartial;
  }
  std::printf("sweep complete: %zu cells in %s\n", plan.cells.size(), plan.out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// report

int cmd_report(const std::string& runs_dir, const std::string& out_path) {
  namespace fs = std::filesystem;
  const fs::path cells = fs::path(runs_dir) / "cells";
  if (!fs::exists(cells)) {
    std::fprintf(stderr, "no cells directory under %s\n", runs_dir.c_str());
    return kExitConfig;
  }
  struct Key {
    std::string encoding, tau, mode;
    int depth;
    double cutoff;
    bool operator<(const Key& o) const {
      return std::tie(encoding, tau, depth, mode, cutoff) <
             std::tie(o.encoding, o.tau, o.depth, o.mode, o.cutoff);
    }
  };
  std::map<Key, std::vector<std::pair<double, double>>> groups;  // (train, test)
  int incomplete = 0;
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(cells))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const json rec = json::parse(read_file(path));
    if (rec.contains("error")) {
      ++incomplete;
      continue;
    }
    Key key{rec["encoding"].get<std::string>(), rec["tau_s"].get<std::string>(),
            rec["mode"].get<std::string>(), rec["depth"].get<int>(), rec["cutoff"].get<double>()};
    groups[key].emplace_back(rec["final_train_nmse"].get<double>(),
                             rec["final_test_nmse"].get<double>());
  }
  if (groups.empty()) {
    std::fprintf(stderr, "no completed cells under %s\n", runs_dir.c_str());
    return kExitConfig;
  }
  if (incomplete > 0)
    std::fprintf(stderr, "warning: %d incomplete cells skipped\n", incomplete);

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  auto stddev = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mu = 0.0;
    for (double x : v) mu += x;
    mu /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(v.size()));
  };

  std::ostringstream csv;
  csv << "encoding,tau_s,depth,mode,cutoff,n_tasks,median_test_nmse,std_test_nmse,"
         "median_train_nmse,std_train_nmse\n";
  for (const auto& [key, vals] : groups) {
    std::vector<double> train, test;
    for (const auto& [tr, te] : vals) {
      train.push_back(tr);
      test.push_back(te);
    }
    csv << key.encoding << ',' << key.tau << ',' << key.depth << ',' << key.mode << ','
        << format_double(key.cutoff) << ',' << vals.size() << ',' << format_double(median(test))
        << ',' << format_double(stddev(test)) << ',' << format_double(median(train)) << ','
        << format_double(stddev(train)) << '\n';
  }
  write_file_atomic(out_path, csv.str());
  std::printf("wrote %s (%zu groups)\n", out_path.c_str(), groups.size());
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const std::string& checkpoint_path, const std::string& cavity_override,
                const std::string& out_dir) {
  try {
    const std::string text = read_file(checkpoint_path);
    std::string cavity_path = cavity_override.empty() ? checkpoint_cavity_path(text)
                                                      : cavity_override;
    auto cavity = load_interchange(cavity_path);
    if (cavity_override.empty()) {
      const uint64_t want = checkpoint_cavity_hash(text);
      const uint64_t got = fnv1a64(read_file(cavity_path));
      if (want != got)
        std::fprintf(stderr, "warning: cavity content hash differs from the checkpoint\n");
    }
    const WpnnModel model = from_checkpoint_json(text, cavity);
    make_dirs(out_dir);

    // Series extraction against the matching expansion.
    const bool phase = model.encoding == EncodingKind::Phase;
    if (model.depth == 1 && model.gate.is_infinite()) {
      const SeriesCoefficients series =
          phase ? fourier_single_layer(model) : power_single_layer(model);
      std::ostringstream csv;
      csv << "order,re,im\n";
      for (Eigen::Index k = 0; k < series.coeffs.size(); ++k)
        csv << k << ',' << format_double(series.coeffs(k).real()) << ','
            << format_double(series.coeffs(k).imag()) << '\n';
      write_file_atomic(out_dir + (phase ? "/fourier.csv" : "/power.csv"), csv.str());

      std::ostringstream res;
      res << "x,forward,series,abs_err\n";
      double max_err = 0.0;
      for (int i = 0; i < 128; ++i) {
        const double x = i / 127.0;
        const double f = forward(model, x).readout;
        const double s = series.reconstruct(x);
        max_err = std::max(max_err, std::abs(f - s));
        res << format_double(x) << ',' << format_double(f) << ',' << format_double(s) << ','
            << format_double(std::abs(f - s)) << '\n';
      }
      write_file_atomic(out_dir + "/series_residuals.csv", res.str());
      std::printf("series orders: %d, max |forward - series| = %.3e\n", series.truncation,
                  max_err);
    }

    // Coupling-free expansion (exactly depth+1 coefficients).
    {
      const SeriesCoefficients series =
          phase ? fourier_multilayer_nomc(model) : poly_multilayer_nomc(model);
      std::ostringstream csv;
      csv << "order,re,im\n";
      for (Eigen::Index k = 0; k < series.coeffs.size(); ++k)
        csv << k << ',' << format_double(series.coeffs(k).real()) << ','
            << format_double(series.coeffs(k).imag()) << '\n';
      write_file_atomic(out_dir + "/series_nomc.csv", csv.str());
    }

    // Impulse responses with the standard gate markers.
    {
      const LoadVector loads = encode(model.encoding, 0.5, model.weights.layer(0));
      const ImpulseResponse ir = impulse_response(*model.cavity, loads);
      std::ostringstream csv;
      csv << "# gate sweep (s):";
      for (double tau : standard_gate_sweep_s()) csv << ' ' << format_double(tau);
      csv << "\ndelay_s";
      for (int i = 0; i < ir.n_r; ++i)
        for (int j = 0; j < ir.n_t; ++j) csv << ",re_" << i << '_' << j << ",im_" << i << '_' << j;
      csv << '\n';
      for (int m = 0; m < ir.delays_s.size(); ++m) {
        csv << format_double(ir.delays_s(m));
        for (int i = 0; i < ir.n_r; ++i)
          for (int j = 0; j < ir.n_t; ++j) {
            const cxd v = ir.entry(i, j)(m);
            csv << ',' << format_double(v.real()) << ',' << format_double(v.imag());
          }
        csv << '\n';
      }
      write_file_atomic(out_dir + "/impulse.csv", csv.str());
    }

    std::printf("nonlinearity score (256 samples): %.3e\n", nonlinearity_score(model, 256));
    std::printf("analysis written to %s\n", out_dir.c_str());
    return 0;
  } catch (const ModeError& e) {
    std::fprintf(stderr, "%s\nHint: series extraction needs a matching architecture "
                         "(single layer and no gating for the full-coupling series).\n",
                 e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "analysis failed: %s\n", e.what());
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-physics neural network simulator and training engine"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Synthesize a cavity scattering family");
  CavitySpec spec;
  std::string synth_out = "cavity.json";
  synth->add_option("--n-t", spec.n_t, "Transmit antennas");
  synth->add_option("--n-r", spec.n_r, "Receive antennas");
  synth->add_option("--n-s", spec.n_s, "Metasurface elements");
  synth->add_option("--modes", spec.mode_count, "Internal mode count (0 = 4x ports)");
  synth->add_option("--mean-dwell-time", spec.mean_dwell_time, "Mean modal dwell time, s");
  synth->add_option("--coupling-scale", spec.coupling_scale, "Coupling scale");
  synth->add_option("--absorption", spec.absorption_rate, "Uniform absorption rate, Hz");
  synth->add_option("--seed", spec.rng_seed, "Generator seed");
  synth->add_option("--ant-feed-delay", spec.ant_feed_delay, "Antenna feed delay, s");
  synth->add_option("--pm-feed-delay", spec.pm_feed_delay, "Element feed delay, s");
  synth->add_option("--ant-feed-loss", spec.ant_feed_loss, "Antenna feed amplitude factor");
  synth->add_option("--pm-feed-loss", spec.pm_feed_loss, "Element feed amplitude factor");
  synth->add_flag("--no-direct-trim", [&spec](int64_t) { spec.direct_trim = false; },
                  "Skip the direct-readout trim optimization");
  synth->add_option("--f-min", spec.f_min_hz, "Grid start, Hz");
  synth->add_option("--f-max", spec.f_max_hz, "Grid end, Hz");
  synth->add_option("--n-freq", spec.n_freq, "Grid points");
  synth->add_option("--f-op", spec.f_op_hz, "Operating frequency, Hz");
  synth->add_option("-o,--out", synth_out, "Output interchange file");

  // gen-tasks
  auto* gen = app.add_subcommand("gen-tasks", "Generate regression task fixtures");
  std::vector<double> cutoffs = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09};
  int task_count = 50;
  uint64_t base_seed = 1000;
  double scale_g = kDefaultTargetScale;
  std::string tasks_out = "tasks";
  gen->add_option("--cutoffs", cutoffs, "Normalized cutoff frequencies");
  gen->add_option("--count", task_count, "Fixtures per cutoff");
  gen->add_option("--base-seed", base_seed, "First seed (consecutive afterwards)");
  gen->add_option("--g", scale_g, "Target scale divisor");
  gen->add_option("-o,--out-dir", tasks_out, "Output directory");

  // train
  auto* train_cmd = app.add_subcommand("train", "Run a training sweep from a config file");
  std::string config_path;
  int workers = 0;
  train_cmd->add_option("config", config_path, "Experiment config JSON")->required();
  train_cmd->add_option("--workers", workers, "Worker pool size (default: logical cores)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Series and impulse analysis of a checkpoint");
  std::string ckpt_path, cavity_override, analyze_out = "analysis";
  analyze->add_option("checkpoint", ckpt_path, "Model checkpoint JSON")->required();
  analyze->add_option("--cavity", cavity_override, "Override the cavity file");
  analyze->add_option("-o,--out-dir", analyze_out, "Output directory");

  // report
  auto* report = app.add_subcommand("report", "Aggregate sweep cells into a summary");
  std::string runs_dir, report_out = "summary.csv";
  report->add_option("runs_dir", runs_dir, "Sweep output directory")->required();
  report->add_option("-o,--out", report_out, "Summary CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(spec, synth_out);
    if (gen->parsed()) return cmd_gen_tasks(cutoffs, task_count, base_seed, scale_g, tasks_out);
    if (train_cmd->parsed()) return cmd_train(config_path, workers);
    if (analyze->parsed()) return cmd_analyze(ckpt_path, cavity_override, analyze_out);
    if (report->parsed()) return cmd_report(runs_dir, report_out);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}

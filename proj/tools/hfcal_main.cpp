// hfcal: generate toy Z -> qq events, run the calorimeter-scenario analyses
// and compare their outputs.
//
//   hfcal generate --config run.cfg [--sample generic|bs_ds_pi|...]
//   hfcal analyze  --config run.cfg [--input events.txt]
//   hfcal compare  <dir> <dir> [...] --out <dir>
//
// Exit codes: 0 success, 1 runtime or data error, 2 configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "hfcal/config.hpp"
#include "hfcal/event_io.hpp"
#include "hfcal/pipeline.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitConfig = 2;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> events;
  std::optional<std::string> scenario;
  std::optional<std::string> channel;
  std::optional<std::string> out;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "run configuration file")->required();
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--events", o.events, "events per sample");
  cmd->add_option("--scenario", o.scenario, "detector scenario section name");
  cmd->add_option("--channel", o.channel, "ds_pi, pi0pi0, kstar_gamma or single_pi0");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads (0: all cores); results do not depend on it");
}

hfcal::RunConfig resolve(const Overrides& o) {
  hfcal::RunConfig run = hfcal::RunConfig::load(o.config);
  if (o.seed) run.master_seed = *o.seed;
  if (o.events) run.n_events = *o.events;
  if (o.scenario) run.scenario_name = *o.scenario;
  if (o.channel) {
    const auto c = hfcal::parse_channel(*o.channel);
    if (!c) throw hfcal::ConfigError("--channel: unknown channel '" + *o.channel + "'");
    run.channel = *c;
  }
  if (o.out) run.output_dir = *o.out;
  run.validate();
  return run;
}

unsigned thread_count(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_generate(const Overrides& o, const std::string& sample) {
  const hfcal::RunConfig run = resolve(o);
  hfcal::GeneratorConfig generator = hfcal::GeneratorConfig::load(run.generator_config);
  // Validates that the scenario section exists even though generation does not use it.
  hfcal::load_scenario(run.scenario_config, run.scenario_name);
  if (sample != "generic") generator.signal_chain = hfcal::named_chain(sample);
  generator.validate();

  const auto events = hfcal::parallel_map(static_cast<std::size_t>(run.n_events), thread_count(o.threads),
                                          [&](std::size_t i) {
                                            return hfcal::generate_event(generator, run.master_seed,
                                                                         static_cast<std::int64_t>(i));
                                          });
  std::filesystem::create_directories(run.output_dir);
  const auto path = run.output_dir / (sample + "_events.txt");
  std::ofstream out(path, std::ios::binary);
  hfcal::write_events(out, events);
  if (!out) throw std::runtime_error("cannot write " + path.string());

  std::size_t final_state = 0;
  for (const auto& ev : events) {
    for (const auto& r : ev.records) final_state += r.status == hfcal::Status::final_state ? 1 : 0;
  }
  std::printf("events: %zu\n", events.size());
  std::printf("mean final-state multiplicity: %.4g\n",
              events.empty() ? 0.0 : static_cast<double>(final_state) / static_cast<double>(events.size()));
  std::printf("written: %s\n", path.string().c_str());
  return 0;
}

int cmd_analyze(const Overrides& o, const std::string& input) {
  hfcal::RunConfig run = resolve(o);
  if (!input.empty()) run.events_file = input;
  const hfcal::DetectorScenario scenario = hfcal::load_scenario(run.scenario_config, run.scenario_name);
  const hfcal::Cuts cuts = hfcal::Cuts::load(run.cuts_config);
  const unsigned threads = thread_count(o.threads);

  hfcal::ChannelResult result;
  if (!run.events_file.empty()) {
    std::ifstream in(run.events_file);
    if (!in) throw std::runtime_error("cannot read event file " + run.events_file.string());
    const auto events = hfcal::read_events(in);
    result = hfcal::analyze_file(run, events, scenario, cuts, threads);
  } else {
    const hfcal::GeneratorConfig generator = hfcal::GeneratorConfig::load(run.generator_config);
    result = hfcal::run_channel(run, generator, scenario, cuts, threads);
  }
  const auto dir = run.channel_dir();
  hfcal::write_outputs(result, dir);
  std::fputs(hfcal::format_report(result).c_str(), stdout);
  std::printf("\nwritten: %s\n", dir.string().c_str());
  return 0;
}

int cmd_compare(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<std::filesystem::path> dirs(inputs.begin(), inputs.end());
  hfcal::compare_outputs(dirs, out);
  std::ifstream table(std::filesystem::path(out) / "comparison.txt");
  std::cout << table.rdbuf();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calorimeter-scenario study of heavy-flavour channels at the Z pole"};
  app.require_subcommand(1);

  Overrides gen_opts;
  std::string sample = "generic";
  auto* generate = app.add_subcommand("generate", "write generated events to <out>/<sample>_events.txt");
  add_common(generate, gen_opts);
  generate->add_option("--sample", sample, "generic, bs_ds_pi, b0_ds_pi, b0_pi0pi0 or b0_kstar_gamma");

  Overrides ana_opts;
  std::string input;
  auto* analyze = app.add_subcommand("analyze", "run a channel analysis into <out>/<channel>_<scenario>/");
  add_common(analyze, ana_opts);
  analyze->add_option("--input", input, "event file to analyze instead of generating");

  std::vector<std::string> compare_inputs;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "compare analyze outputs of one channel");
  compare->add_option("dirs", compare_inputs, "analyze output directories")->required();
  compare->add_option("--out", compare_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*generate) return cmd_generate(gen_opts, sample);
    if (*analyze) return cmd_analyze(ana_opts, input);
    if (*compare) return cmd_compare(compare_inputs, compare_out);
  } catch (const hfcal::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return 0;
}

#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hfcal/analysis.hpp"
#include "hfcal/detector.hpp"
#include "hfcal/evtgen.hpp"
#include "hfcal/report.hpp"

namespace hfcal {

enum class Channel { ds_pi, pi0pi0, kstar_gamma, single_pi0 };
std::string_view to_string(Channel c);
std::optional<Channel> parse_channel(std::string_view s);

struct RunConfig {
  std::uint64_t master_seed = 1;
  std::int64_t n_events = 1000;
  std::string scenario_name;
  Channel channel = Channel::ds_pi;
  std::filesystem::path generator_config;
  std::filesystem::path scenario_config;
  std::filesystem::path cuts_config;
  std::filesystem::path output_dir;
  double n_z = 1e9;
  std::filesystem::path events_file;  // optional input, empty for inline generation

  // Reads the [run] section; config paths are resolved relative to the file.
  static RunConfig load(const std::filesystem::path& path);
  void validate() const;
  std::filesystem::path channel_dir() const;
};

// Applies f to 0..n-1 on `threads` workers; results are returned in index
// order, so the output does not depend on the worker count.
template <typename F>
auto parallel_map(std::size_t n, unsigned threads, F&& f) -> std::vector<decltype(f(std::size_t{0}))> {
  using Result = decltype(f(std::size_t{0}));
  std::vector<std::optional<Result>> slots(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<Result> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct SampleSummary {
  std::string name;
  bool signal = false;
  std::int64_t generated = 0;
  std::int64_t passed = 0;  // events with at least one candidate
  std::int64_t candidates = 0;
  double efficiency = 0.0;
  double scaled_yield = 0.0;  // expected events per n_z
};

struct NamedHistogram {
  std::string name;
  Histogram hist;
};

struct ChannelResult {
  Channel channel = Channel::ds_pi;
  std::string scenario;
  std::uint64_t seed = 0;
  std::int64_t n_events = 0;
  double n_z = 0.0;
  std::vector<NamedHistogram> spectra;
  std::vector<SampleSummary> samples;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::string>> cuts;
  std::vector<std::pair<std::string, std::string>> scenario_settings;
  std::vector<std::string> warnings;
  std::int64_t n_signal_pass = 0;
  std::int64_t n_background_pass = 0;
  double efficiency = 0.0;
  double scaled_yield = 0.0;

  std::optional<double> metric(const std::string& name) const;
};

// Per-candidate masses collected by the channel runners, kept so that the
// acceptance checks can inspect the raw and fitted distributions directly.
struct SampleMasses {
  std::vector<double> fitted;
  std::vector<double> raw;
  std::int64_t passed = 0;
  std::int64_t candidates = 0;
  std::int64_t fake_candidates = 0;
  FitCounter fits;
};

// Stream identifiers derived from an event's seed.
inline constexpr std::uint64_t kDetectorStream = 0x64657465ULL;
inline constexpr std::uint64_t kSelectionStream = 0x73656c65ULL;

// Generates `n` events of `config` with master seed `seed`, reconstructs and
// selects them for `channel`.
SampleMasses run_sample(const GeneratorConfig& config, std::uint64_t seed, std::int64_t n, Channel channel,
                        const DetectorScenario& scenario, const Cuts& cuts, unsigned threads);
SampleMasses analyze_sample(std::span<const Event> events, Channel channel, const DetectorScenario& scenario,
                            const Cuts& cuts, unsigned threads);

struct SinglePi0Point {
  double energy = 0.0;
  PeakFit raw;   // of (E_raw - E) / E
  PeakFit fit;   // of (E_fit - E) / E over converged fits
  std::size_t n = 0;
  std::size_t converged = 0;
  std::vector<double> raw_residuals;
  std::vector<double> fit_residuals;
};

SinglePi0Point single_pi0_point(double energy, std::int64_t n, const DetectorScenario& scenario, double cos_theta_max,
                                std::uint64_t seed, unsigned threads);

ChannelResult run_channel(const RunConfig& run, const GeneratorConfig& generator, const DetectorScenario& scenario,
                          const Cuts& cuts, unsigned threads);
ChannelResult analyze_file(const RunConfig& run, std::span<const Event> events, const DetectorScenario& scenario,
                           const Cuts& cuts, unsigned threads);

std::string format_report(const ChannelResult& result);

// Writes <name>.csv per spectrum, report.txt, plot.svg and summary.json.
void write_outputs(const ChannelResult& result, const std::filesystem::path& dir);

// Comparison of analyze output directories of one channel: comparison.txt
// and a paneled comparison.svg. Throws std::invalid_argument on fewer than
// two inputs or mismatched channels.
void compare_outputs(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_dir);

std::vector<std::pair<std::string, std::string>> describe_scenario(const DetectorScenario& s);

}  // namespace hfcal

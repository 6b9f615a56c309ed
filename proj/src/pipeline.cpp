#include "hfcal/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hfcal/config.hpp"
#include "hfcal/particle_data.hpp"

namespace hfcal {

namespace {

using Json = nlohmann::ordered_json;

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct EventOutcome {
  std::vector<double> fitted;
  std::vector<double> raw;
  std::int64_t fakes = 0;
  FitCounter fits;
};

EventOutcome process_event(const Event& event, Channel channel, const DetectorScenario& scenario, const Cuts& cuts) {
  Rng detector_rng(stream_seed(event.seed, kDetectorStream));
  const RecoEvent reco = reconstruct_event(event, scenario, detector_rng);
  Rng selection_rng(stream_seed(event.seed, kSelectionStream));
  EventOutcome out;
  switch (channel) {
    case Channel::ds_pi:
      for (const auto& c : select_ds_pi(reco, scenario, cuts.ds_pi, &out.fits)) {
        out.fitted.push_back(c.m_b);
        out.raw.push_back(c.m_b_raw);
      }
      break;
    case Channel::pi0pi0:
      for (const auto& c : select_pi0pi0(reco, scenario, cuts.pi0pi0, selection_rng, &out.fits)) {
        out.fitted.push_back(c.mass);
        out.raw.push_back(c.mass_raw);
        if (c.has_fake) ++out.fakes;
      }
      break;
    case Channel::kstar_gamma:
      for (const auto& c : select_kstar_gamma(reco, scenario, cuts.kstar_gamma, selection_rng)) {
        out.fitted.push_back(c.mass);
        out.raw.push_back(c.mass);
      }
      break;
    case Channel::single_pi0:
      throw std::invalid_argument("single_pi0 has no event selection");
  }
  return out;
}

SampleMasses merge(const std::vector<EventOutcome>& outcomes) {
  SampleMasses s;
  for (const auto& o : outcomes) {
    s.fitted.insert(s.fitted.end(), o.fitted.begin(), o.fitted.end());
    s.raw.insert(s.raw.end(), o.raw.begin(), o.raw.end());
    if (!o.fitted.empty()) ++s.passed;
    s.candidates += static_cast<std::int64_t>(o.fitted.size());
    s.fake_candidates += o.fakes;
    s.fits.attempted += o.fits.attempted;
    s.fits.converged += o.fits.converged;
  }
  return s;
}

double species_fraction(const GeneratorConfig& g, int pdg_code) {
  for (const auto* list : {&g.b_species, &g.c_species}) {
    for (const auto& s : *list) {
      if (s.pdg == std::abs(pdg_code)) return s.fraction;
    }
  }
  return 0.0;
}

struct SampleSpec {
  std::string name;
  bool signal;
  std::string chain;                 // named chain for signal samples
  std::optional<Flavour> flavour;    // forced flavour for background samples
  double chain_br = 1.0;
};

std::vector<SampleSpec> samples_for(Channel channel) {
  using namespace constants;
  const double ds_tail = kBrDsToPhiRho * kBrPhiToKK * kBrPi0ToGammaGamma;
  switch (channel) {
    case Channel::ds_pi:
      return {{"bs_signal", true, "bs_ds_pi", std::nullopt, kBrBsToDsPi * ds_tail},
              {"b0_signal", true, "b0_ds_pi", std::nullopt, kBrB0ToDsPi * ds_tail}};
    case Channel::pi0pi0:
      return {{"signal", true, "b0_pi0pi0", std::nullopt, kBrB0ToPi0Pi0 * kBrPi0ToGammaGamma * kBrPi0ToGammaGamma},
              {"b_background", false, "", Flavour::b, 1.0},
              {"c_background", false, "", Flavour::c, 1.0}};
    case Channel::kstar_gamma:
      return {{"signal", true, "b0_kstar_gamma", std::nullopt, kBrB0ToKStarGamma * kBrKStar0ToKPi},
              {"b_background", false, "", Flavour::b, 1.0},
              {"c_background", false, "", Flavour::c, 1.0}};
    case Channel::single_pi0:
      return {};
  }
  return {};
}

struct Binning {
  std::size_t bins;
  double lo, hi;
  const char* x_label;
};

Binning binning_for(Channel channel) {
  switch (channel) {
    case Channel::ds_pi: return {100, 4.8, 5.8, "m(Ds pi) [GeV]"};
    case Channel::pi0pi0: return {50, 4.0, 6.0, "m(pi0 pi0) [GeV]"};
    case Channel::kstar_gamma: return {50, 4.0, 6.0, "m(K pi gamma) [GeV]"};
    case Channel::single_pi0: return {100, -0.5, 0.5, "(E - E_true) / E_true"};
  }
  return {100, 0.0, 1.0, ""};
}

Histogram fill(const Binning& b, const std::vector<double>& values) {
  Histogram h(b.bins, b.lo, b.hi);
  for (double v : values) h.fill(v);
  return h;
}

std::optional<PeakFit> try_core_width(const std::vector<double>& values, const std::string& what,
                                      std::vector<std::string>& warnings) {
  try {
    return core_width(values);
  } catch (const DegenerateSample& e) {
    warnings.push_back(what + ": no peak width (" + e.what() + ")");
    return std::nullopt;
  }
}

void check_fit_fraction(const FitCounter& fits, const std::string& sample, std::vector<std::string>& warnings) {
  if (fits.attempted == 0) return;
  const double failed = 1.0 - static_cast<double>(fits.converged) / static_cast<double>(fits.attempted);
  if (failed > 0.5) {
    warnings.push_back(sample + ": " + g6(100.0 * failed) + "% of pi0 fits did not converge");
  }
}

void finish(ChannelResult& r) {
  std::int64_t gen = 0;
  for (const auto& s : r.samples) {
    if (s.signal) {
      r.n_signal_pass += s.passed;
      r.scaled_yield += s.scaled_yield;
      gen += s.generated;
    } else {
      r.n_background_pass += s.passed;
    }
  }
  r.efficiency = gen > 0 ? static_cast<double>(r.n_signal_pass) / static_cast<double>(gen) : 0.0;
}

ChannelResult base_result(const RunConfig& run, const DetectorScenario& scenario, const Cuts& cuts) {
  ChannelResult r;
  r.channel = run.channel;
  r.scenario = scenario.name;
  r.seed = run.master_seed;
  r.n_events = run.n_events;
  r.n_z = run.n_z;
  r.cuts = describe_cuts(cuts, to_string(run.channel));
  r.scenario_settings = describe_scenario(scenario);
  return r;
}

ChannelResult run_single_pi0(const RunConfig& run, const DetectorScenario& scenario, const Cuts& cuts,
                             unsigned threads) {
  ChannelResult r = base_result(run, scenario, cuts);
  const Binning b = binning_for(Channel::single_pi0);
  const auto& energies = cuts.single_pi0.energies;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    const double e = energies[k];
    const SinglePi0Point p = single_pi0_point(e, run.n_events, scenario, cuts.single_pi0.cos_theta_max,
                                              stream_seed(run.master_seed, 100 + k), threads);
    const std::string tag = g6(e) + "GeV";
    r.spectra.push_back({"raw_" + tag, fill(b, p.raw_residuals)});
    r.spectra.push_back({"fit_" + tag, fill(b, p.fit_residuals)});
    r.metrics.emplace_back("raw_resolution_" + tag, p.raw.sigma);
    r.metrics.emplace_back("fit_resolution_" + tag, p.fit.sigma);
    r.metrics.emplace_back("raw_resolution_sqrtE_" + tag, p.raw.sigma * std::sqrt(e));
    r.metrics.emplace_back("fit_resolution_sqrtE_" + tag, p.fit.sigma * std::sqrt(e));
    r.metrics.emplace_back("fit_bias_" + tag, p.fit.mean);
    SampleSummary s;
    s.name = "pi0_" + tag;
    s.signal = true;
    s.generated = static_cast<std::int64_t>(p.n);
    s.passed = static_cast<std::int64_t>(p.converged);
    s.candidates = s.passed;
    s.efficiency = p.n > 0 ? static_cast<double>(p.converged) / static_cast<double>(p.n) : 0.0;
    r.samples.push_back(s);
    if (s.efficiency < 0.5) r.warnings.push_back(s.name + ": more than 50% of pi0 fits did not converge");
  }
  finish(r);
  return r;
}

}  // namespace

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::ds_pi: return "ds_pi";
    case Channel::pi0pi0: return "pi0pi0";
    case Channel::kstar_gamma: return "kstar_gamma";
    case Channel::single_pi0: return "single_pi0";
  }
  return "ds_pi";
}

std::optional<Channel> parse_channel(std::string_view s) {
  for (Channel c : {Channel::ds_pi, Channel::pi0pi0, Channel::kstar_gamma, Channel::single_pi0}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  const ConfigFile file = ConfigFile::load(path);
  const ConfigSection& s = file.section("run");
  s.require_only({"seed", "events", "scenario", "channel", "generator_config", "scenario_config", "cuts_config",
                  "output", "n_z", "events_file"});
  RunConfig r;
  r.master_seed = s.unsigned_integer("seed");
  r.n_events = s.integer("events");
  r.scenario_name = s.text("scenario");
  const auto channel = parse_channel(s.text("channel"));
  if (!channel) throw ConfigError(file.source() + ": [run] key 'channel': unknown channel '" + s.text("channel") + "'");
  r.channel = *channel;
  const auto resolve = [&](const std::string& key) {
    std::filesystem::path p = s.text(key);
    return p.is_relative() ? path.parent_path() / p : p;
  };
  r.generator_config = resolve("generator_config");
  r.scenario_config = resolve("scenario_config");
  r.cuts_config = resolve("cuts_config");
  r.output_dir = resolve("output");
  r.n_z = s.number("n_z");
  if (s.has("events_file")) r.events_file = resolve("events_file");
  r.validate();
  return r;
}

void RunConfig::validate() const {
  if (n_events < 1) throw ConfigError("[run] key 'events': must be at least 1");
  if (scenario_name.empty()) throw ConfigError("[run] key 'scenario': must not be empty");
  if (!(n_z > 0.0)) throw ConfigError("[run] key 'n_z': must be positive");
}

std::filesystem::path RunConfig::channel_dir() const {
  return output_dir / (std::string(to_string(channel)) + "_" + scenario_name);
}

std::optional<double> ChannelResult::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  return std::nullopt;
}

SampleMasses run_sample(const GeneratorConfig& config, std::uint64_t seed, std::int64_t n, Channel channel,
                        const DetectorScenario& scenario, const Cuts& cuts, unsigned threads) {
  const auto outcomes = parallel_map(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    const Event ev = generate_event(config, seed, static_cast<std::int64_t>(i));
    return process_event(ev, channel, scenario, cuts);
  });
  return merge(outcomes);
}

SampleMasses analyze_sample(std::span<const Event> events, Channel channel, const DetectorScenario& scenario,
                            const Cuts& cuts, unsigned threads) {
  const auto outcomes = parallel_map(events.size(), threads, [&](std::size_t i) {
    return process_event(events[i], channel, scenario, cuts);
  });
  return merge(outcomes);
}

SinglePi0Point single_pi0_point(double energy, std::int64_t n, const DetectorScenario& scenario, double cos_theta_max,
                                std::uint64_t seed, unsigned threads) {
  const auto outcomes = parallel_map(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    Rng rng(stream_seed(seed, i));
    return simulate_single_pi0(energy, cos_theta_max, scenario, rng);
  });
  SinglePi0Point p;
  p.energy = energy;
  p.n = outcomes.size();
  for (const auto& o : outcomes) {
    p.raw_residuals.push_back((o.raw_energy - energy) / energy);
    if (o.fit_converged) {
      ++p.converged;
      p.fit_residuals.push_back((o.fit_energy - energy) / energy);
    }
  }
  p.raw = core_width(p.raw_residuals);
  p.fit = core_width(p.fit_residuals);
  return p;
}

ChannelResult run_channel(const RunConfig& run, const GeneratorConfig& generator, const DetectorScenario& scenario,
                          const Cuts& cuts, unsigned threads) {
  if (run.channel == Channel::single_pi0) return run_single_pi0(run, scenario, cuts, threads);
  ChannelResult r = base_result(run, scenario, cuts);
  const Binning b = binning_for(run.channel);
  const auto specs = samples_for(run.channel);
  std::map<std::string, SampleMasses> masses;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const SampleSpec& spec = specs[k];
    GeneratorConfig g = generator;
    if (spec.signal) {
      g.signal_chain = named_chain(spec.chain);
    } else {
      g.forced_flavour = spec.flavour;
    }
    const SampleMasses m = run_sample(g, stream_seed(run.master_seed, k + 1), run.n_events, run.channel, scenario,
                                      cuts, threads);
    SampleSummary s;
    s.name = spec.name;
    s.signal = spec.signal;
    s.generated = run.n_events;
    s.passed = m.passed;
    s.candidates = m.candidates;
    s.efficiency = static_cast<double>(m.passed) / static_cast<double>(run.n_events);
    if (spec.signal) {
      const int parent = g.signal_chain.front().parent;
      s.scaled_yield = scale_yield(static_cast<double>(m.passed), static_cast<double>(run.n_events), spec.chain_br,
                                   generator.rb, species_fraction(generator, parent), run.n_z);
    } else {
      s.scaled_yield = run.n_z * generator.flavour_fraction(*spec.flavour) * s.efficiency;
    }
    r.samples.push_back(s);
    r.spectra.push_back({"m_" + spec.name, fill(b, m.fitted)});
    if (scenario.pi0_mass_fit_enabled && run.channel != Channel::kstar_gamma && spec.signal) {
      r.spectra.push_back({"m_" + spec.name + "_nofit", fill(b, m.raw)});
    }
    check_fit_fraction(m.fits, spec.name, r.warnings);
    if (run.channel == Channel::pi0pi0) {
      r.metrics.emplace_back(spec.name + "_fake_candidates", static_cast<double>(m.fake_candidates));
    }
    masses.emplace(spec.name, m);
  }

  if (run.channel == Channel::ds_pi) {
    const auto bs = try_core_width(masses["bs_signal"].fitted, "bs_signal", r.warnings);
    const auto b0 = try_core_width(masses["b0_signal"].fitted, "b0_signal", r.warnings);
    const double delta_m = nominal_mass(pdg::kBs) - nominal_mass(pdg::kB0);
    r.metrics.emplace_back("delta_m", delta_m);
    if (bs && b0) {
      r.metrics.emplace_back("mean_bs", bs->mean);
      r.metrics.emplace_back("mean_b0", b0->mean);
      r.metrics.emplace_back("sigma_bs", bs->sigma);
      r.metrics.emplace_back("sigma_b0", b0->sigma);
      r.metrics.emplace_back("separation", bs_b0_separation(bs->sigma, b0->sigma, delta_m));
    }
    if (scenario.pi0_mass_fit_enabled) {
      const auto bs_raw = try_core_width(masses["bs_signal"].raw, "bs_signal without fit", r.warnings);
      const auto b0_raw = try_core_width(masses["b0_signal"].raw, "b0_signal without fit", r.warnings);
      if (bs_raw && b0_raw) {
        r.metrics.emplace_back("sigma_bs_nofit", bs_raw->sigma);
        r.metrics.emplace_back("sigma_b0_nofit", b0_raw->sigma);
        r.metrics.emplace_back("separation_nofit", bs_b0_separation(bs_raw->sigma, b0_raw->sigma, delta_m));
      }
    }
  } else {
    const double m_b0 = nominal_mass(pdg::kB0);
    if (const auto peak = try_core_width(masses["signal"].fitted, "signal", r.warnings)) {
      r.metrics.emplace_back("peak_mean", peak->mean);
      r.metrics.emplace_back("peak_bias", peak->mean - m_b0);
      r.metrics.emplace_back("peak_sigma", peak->sigma);
    }
    if (run.channel == Channel::pi0pi0 && scenario.pi0_mass_fit_enabled) {
      if (const auto raw = try_core_width(masses["signal"].raw, "signal without fit", r.warnings)) {
        r.metrics.emplace_back("peak_sigma_nofit", raw->sigma);
      }
    }
  }
  finish(r);
  return r;
}

ChannelResult analyze_file(const RunConfig& run, std::span<const Event> events, const DetectorScenario& scenario,
                           const Cuts& cuts, unsigned threads) {
  if (run.channel == Channel::single_pi0) {
    throw std::invalid_argument("single_pi0 generates its own pi0s and cannot read an event file");
  }
  ChannelResult r = base_result(run, scenario, cuts);
  r.n_events = static_cast<std::int64_t>(events.size());
  const SampleMasses m = analyze_sample(events, run.channel, scenario, cuts, threads);
  SampleSummary s;
  s.name = "input";
  s.signal = true;
  s.generated = static_cast<std::int64_t>(events.size());
  s.passed = m.passed;
  s.candidates = m.candidates;
  s.efficiency = events.empty() ? 0.0 : static_cast<double>(m.passed) / static_cast<double>(events.size());
  r.samples.push_back(s);
  r.spectra.push_back({"m_input", fill(binning_for(run.channel), m.fitted)});
  check_fit_fraction(m.fits, "input", r.warnings);
  if (m.fitted.size() >= kMinCoreSamples) {
    if (const auto peak = try_core_width(m.fitted, "input", r.warnings)) {
      r.metrics.emplace_back("peak_mean", peak->mean);
      r.metrics.emplace_back("peak_sigma", peak->sigma);
    }
  }
  finish(r);
  return r;
}

std::vector<std::pair<std::string, std::string>> describe_scenario(const DetectorScenario& s) {
  return {{"ecal_stochastic", g6(s.ecal_stochastic)},
          {"ecal_constant", g6(s.ecal_constant)},
          {"pos_res_stochastic", g6(s.pos_res_stochastic)},
          {"pos_res_constant", g6(s.pos_res_constant)},
          {"ecal_radius", g6(s.ecal_radius)},
          {"photon_threshold", g6(s.photon_threshold)},
          {"fake_rate", g6(s.fake_rate)},
          {"merge_distance", g6(s.merge_distance)},
          {"pi0_mass_fit_enabled", s.pi0_mass_fit_enabled ? "true" : "false"},
          {"gamma_pi0_sep_max_energy", g6(s.gamma_pi0_sep_max_energy)},
          {"gamma_id_efficiency", g6(s.gamma_id_efficiency)},
          {"track_pt_res", g6(s.track_pt_res)},
          {"vertex_res", g6(s.vertex_res)}};
}

std::string format_report(const ChannelResult& r) {
  std::ostringstream out;
  out << "channel: " << to_string(r.channel) << '\n';
  out << "scenario: " << r.scenario << '\n';
  out << "seed: " << r.seed << '\n';
  out << "events per sample: " << r.n_events << '\n';
  out << "n_z: " << g6(r.n_z) << '\n';
  out << "\n[scenario]\n";
  for (const auto& [k, v] : r.scenario_settings) out << k << " = " << v << '\n';
  out << "\n[cuts]\n";
  for (const auto& [k, v] : r.cuts) out << k << " = " << v << '\n';
  out << "\n[samples]\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %10s %10s %10s %12s %14s\n", "sample", "generated", "passed",
                "candidates", "efficiency", "scaled_yield");
  out << line;
  for (const auto& s : r.samples) {
    std::snprintf(line, sizeof line, "%-16s %10lld %10lld %10lld %12.6g %14.6g\n", s.name.c_str(),
                  static_cast<long long>(s.generated), static_cast<long long>(s.passed),
                  static_cast<long long>(s.candidates), s.efficiency, s.scaled_yield);
    out << line;
  }
  out << "\nsignal passed: " << r.n_signal_pass << '\n';
  out << "background passed: " << r.n_background_pass << '\n';
  out << "signal efficiency: " << g6(r.efficiency) << '\n';
  out << "signal scaled yield: " << g6(r.scaled_yield) << '\n';
  out << "\n[metrics]\n";
  for (const auto& [k, v] : r.metrics) out << k << " = " << g6(v) << '\n';
  if (r.channel == Channel::single_pi0) {
    out << "\n[resolution]\n";
    std::snprintf(line, sizeof line, "%10s %14s %14s %16s %16s\n", "E [GeV]", "raw sigma/E", "fit sigma/E",
                  "raw sigma/E*sqrtE", "fit sigma/E*sqrtE");
    out << line;
    for (const auto& s : r.samples) {
      const std::string tag = s.name.substr(4);
      const double e = std::stod(tag);
      std::snprintf(line, sizeof line, "%10.6g %14.6g %14.6g %16.6g %16.6g\n", e,
                    r.metric("raw_resolution_" + tag).value_or(0.0), r.metric("fit_resolution_" + tag).value_or(0.0),
                    r.metric("raw_resolution_sqrtE_" + tag).value_or(0.0),
                    r.metric("fit_resolution_sqrtE_" + tag).value_or(0.0));
      out << line;
    }
  }
  out << "\n[warnings]\n";
  if (r.warnings.empty()) out << "none\n";
  for (const auto& w : r.warnings) out << w << '\n';
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

void write_outputs(const ChannelResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  Json summary;
  summary["channel"] = std::string(to_string(r.channel));
  summary["scenario"] = r.scenario;
  summary["seed"] = r.seed;
  summary["events"] = r.n_events;
  summary["n_z"] = r.n_z;
  summary["spectra"] = Json::array();
  for (const auto& s : r.spectra) {
    std::ostringstream csv;
    write_csv(s.hist, csv);
    write_file(dir / (s.name + ".csv"), csv.str());
    summary["spectra"].push_back({{"name", s.name}, {"file", s.name + ".csv"}});
  }
  write_file(dir / "report.txt", format_report(r));

  std::vector<Histogram> hists;
  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < r.spectra.size(); ++i) {
    hists.push_back(r.spectra[i].hist);
    series.push_back({r.spectra[i].name, series_color(i)});
  }
  if (!hists.empty()) {
    PlotOptions o;
    o.title = std::string(to_string(r.channel)) + " " + r.scenario;
    o.x_label = binning_for(r.channel).x_label;
    o.y_label = r.channel == Channel::single_pi0 ? "entries / bin" : "candidates / bin";
    std::ostringstream svg;
    write_svg_plot(hists, series, o, svg);
    write_file(dir / "plot.svg", svg.str());
  }

  summary["samples"] = Json::array();
  for (const auto& s : r.samples) {
    summary["samples"].push_back({{"name", s.name},
                                  {"signal", s.signal},
                                  {"generated", s.generated},
                                  {"passed", s.passed},
                                  {"candidates", s.candidates},
                                  {"efficiency", s.efficiency},
                                  {"scaled_yield", s.scaled_yield}});
  }
  summary["metrics"] = Json::object();
  for (const auto& [k, v] : r.metrics) summary["metrics"][k] = v;
  summary["efficiency"] = r.efficiency;
  summary["scaled_yield"] = r.scaled_yield;
  summary["warnings"] = r.warnings;
  write_file(dir / "summary.json", summary.dump(2) + "\n");
}

void compare_outputs(const std::vector<std::filesystem::path>& dirs, const std::filesystem::path& out_dir) {
  if (dirs.size() < 2) throw std::invalid_argument("compare needs at least two analyze outputs");
  std::vector<Json> runs;
  for (const auto& d : dirs) {
    std::ifstream in(d / "summary.json");
    if (!in) throw std::runtime_error("cannot read " + (d / "summary.json").string());
    runs.push_back(Json::parse(in));
  }
  const std::string channel = runs.front().at("channel").get<std::string>();
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].at("channel").get<std::string>() != channel) {
      throw std::invalid_argument("compare: mismatched channels '" + channel + "' and '" +
                                  runs[i].at("channel").get<std::string>() + "'");
    }
  }

  std::vector<std::string> columns;
  for (const auto& run : runs) {
    for (const auto& item : run.at("metrics").items()) {
      if (std::find(columns.begin(), columns.end(), item.key()) == columns.end()) columns.push_back(item.key());
    }
  }
  std::ostringstream table;
  table << "channel: " << channel << "\n\n";
  table << "run,scenario,efficiency,scaled_yield";
  for (const auto& c : columns) table << ',' << c;
  table << '\n';
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Json& run = runs[i];
    table << dirs[i].filename().string() << ',' << run.at("scenario").get<std::string>() << ','
          << g6(run.at("efficiency").get<double>()) << ',' << g6(run.at("scaled_yield").get<double>());
    for (const auto& c : columns) {
      table << ',';
      if (run.at("metrics").contains(c)) table << g6(run.at("metrics").at(c).get<double>());
    }
    table << '\n';
  }

  std::vector<Histogram> hists;
  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& spectra = runs[i].at("spectra");
    if (spectra.empty()) throw std::invalid_argument("compare: run without spectra in " + dirs[i].string());
    const std::string file = spectra.front().at("file").get<std::string>();
    std::ifstream in(dirs[i] / file);
    if (!in) throw std::runtime_error("cannot read " + (dirs[i] / file).string());
    hists.push_back(read_csv(in));
    series.push_back({runs[i].at("scenario").get<std::string>() + " " + spectra.front().at("name").get<std::string>(),
                      series_color(i)});
  }
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "comparison.txt", table.str());
  PlotOptions o;
  o.title = channel + " comparison";
  o.paneled = true;
  std::ostringstream svg;
  write_svg_plot(hists, series, o, svg);
  write_file(out_dir / "comparison.svg", svg.str());
}

}  // namespace hfcal

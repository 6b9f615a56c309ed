#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfcal/kinematics.hpp"
#include "hfcal/random.hpp"

namespace hfcal {

enum class Status { initial, decayed, final_state };
enum class Flavour { b, c, uds };

std::string_view to_string(Status s);
std::string_view to_string(Flavour f);
std::optional<Status> parse_status(std::string_view s);
std::optional<Flavour> parse_flavour(std::string_view s);

struct ParticleRecord {
  int pdg = 0;
  Status status = Status::final_state;
  int mother = -1;  // earlier record, or -1 for primaries
  FourVector p = FourVector::Zero();
  ThreeVector vertex = ThreeVector::Zero();  // production vertex, mm

  bool operator==(const ParticleRecord&) const = default;
};

struct Event {
  std::int64_t id = 0;
  std::uint64_t seed = 0;
  Flavour flavour = Flavour::b;
  std::vector<ParticleRecord> records;
  // Index of the force-decayed hadron; not part of the file format.
  int signal_root = -1;

  std::vector<int> daughters(int index) const;
  bool descends_from(int index, int ancestor) const;
  FourVector final_state_sum() const;
  std::vector<int> final_state_descendants(int ancestor) const;
};

struct DecayChannel {
  int parent = 0;
  std::vector<int> daughters;
  double branching_fraction = 1.0;
};

DecayChannel conjugate(const DecayChannel& channel);

// Branching fractions per parent; antiparticles decay through the conjugated
// channels. The unlisted remainder of a parent decays to a pion filler.
class DecayTable {
 public:
  static DecayTable load(const std::filesystem::path& path);
  // One channel per line: `<parent> <fraction> <daughter>...`, `#` comments.
  static DecayTable parse(std::istream& in, const std::string& source);

  void add(DecayChannel channel);
  // Throws ConfigError on unknown codes, fractions outside [0, 1], fraction
  // sums above 1, charge violation or kinematically closed channels.
  void validate() const;

  std::span<const DecayChannel> channels(int parent) const;
  double total_fraction(int parent) const;
  std::vector<int> sample(int pdg_code, Rng& rng) const;
  std::size_t size() const;

 private:
  std::map<int, std::vector<DecayChannel>> by_parent_;
};

// Charge-conserving phase-space pion final state used for unlisted decays.
std::vector<int> filler_daughters(int pdg_code);

void validate_chain(std::span<const DecayChannel> chain);

// Named forced decay chains for the benchmark channels:
// bs_ds_pi, b0_ds_pi, b0_pi0pi0, b0_kstar_gamma.
std::vector<DecayChannel> named_chain(std::string_view name);

struct SpeciesFraction {
  int pdg = 0;
  double fraction = 0.0;
};

struct GeneratorConfig {
  double sqrt_s = 91.19;
  double rb = 0.2158;
  double rc = 0.1722;
  bool include_uds = false;
  std::optional<Flavour> forced_flavour;
  std::vector<SpeciesFraction> b_species{{511, 0.40}, {521, 0.40}, {531, 0.10}, {5122, 0.10}};
  std::vector<SpeciesFraction> c_species{{421, 0.59}, {411, 0.24}, {431, 0.10}, {4122, 0.07}};
  std::vector<SpeciesFraction> uds_species{{211, 0.40}, {321, 0.20}, {111, 0.20}, {113, 0.20}};
  double frag_x_mean = 0.70;
  double frag_x_width = 0.10;
  double frag_x_min = 0.10;
  double frag_x_max = 0.98;
  double frag_multiplicity = 6.0;  // mean fragmentation pions per hemisphere
  double frag_pt_sigma = 0.300;    // GeV per transverse component
  double frag_neutral_fraction = 1.0 / 3.0;
  DecayTable decays;
  std::vector<DecayChannel> signal_chain;  // empty for generic events

  // Reads the [generator] section; the decay table path is resolved
  // relative to the config file.
  static GeneratorConfig load(const std::filesystem::path& path);
  void validate() const;
  double flavour_fraction(Flavour f) const;
};

// Undecayed event: two quark records, one leading hadron per hemisphere and
// the fragmentation pions, balanced to (sqrt_s, 0, 0, 0).
Event make_primary_event(const GeneratorConfig& config, Rng& rng);

// Decays the matching leading hadron through `chain` and everything else
// through the generic table; sets signal_root.
Event force_signal_chain(Event event_template, std::span<const DecayChannel> chain,
                         const DecayTable& table, Rng& rng);

// Decays every unstable particle through the generic table.
void decay_generic(Event& event, const DecayTable& table, Rng& rng);

// Places decay vertices of weakly decaying hadrons at d = gamma beta c tau t,
// t ~ Exp(1), along the momentum; daughters inherit the mother's decay vertex.
void decay_vertex_placement(Event& event, Rng& rng);

// Pure function of (config, master_seed, event_id).
Event generate_event(const GeneratorConfig& config, std::uint64_t master_seed, std::int64_t event_id);

// Locates a hadron in `event` whose decay tree matches `chain`; -1 if none.
int find_chain_root(const Event& event, std::span<const DecayChannel> chain);

}  // namespace hfcal

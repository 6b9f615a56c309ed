#include "hfcal/event_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace hfcal {

namespace {

void put_number(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, " %.9g", v);
  line += buf;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view token, std::size_t line_no, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

void write_event(std::ostream& out, const Event& event) {
  out << "E " << event.id << ' ' << event.seed << ' ' << to_string(event.flavour) << '\n';
  std::string line;
  for (std::size_t i = 0; i < event.records.size(); ++i) {
    const ParticleRecord& r = event.records[i];
    line = "P " + std::to_string(i) + ' ' + std::to_string(r.pdg) + ' ' + std::string(to_string(r.status)) + ' ' +
           std::to_string(r.mother);
    for (int k = 0; k < 4; ++k) put_number(line, r.p(k));
    for (int k = 0; k < 3; ++k) put_number(line, r.vertex(k));
    out << line << '\n';
  }
}

void write_events(std::ostream& out, std::span<const Event> events) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0) out << '\n';
    write_event(out, events[i]);
  }
}

void validate_topology(const Event& event) {
  for (std::size_t i = 0; i < event.records.size(); ++i) {
    const int m = event.records[i].mother;
    if (m < -1 || m >= static_cast<int>(i)) {
      throw ValidationError("event " + std::to_string(event.id) + ": record " + std::to_string(i) +
                            " has mother " + std::to_string(m) + " which does not precede it");
    }
  }
}

std::vector<Event> read_events(std::istream& in) {
  std::vector<Event> events;
  bool open = false;
  std::string raw;
  std::size_t line_no = 0;
  auto close = [&] {
    if (open) validate_topology(events.back());
    open = false;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split(line);
    if (tokens.empty()) {
      // Blank lines end a block; comment-only lines do not.
      if (raw.find('#') == std::string::npos) close();
      continue;
    }
    if (tokens[0] == "E") {
      close();
      if (tokens.size() != 4) throw ParseError(line_no, "event header needs 3 fields");
      Event ev;
      ev.id = parse_field<std::int64_t>(tokens[1], line_no, "event id");
      ev.seed = parse_field<std::uint64_t>(tokens[2], line_no, "seed");
      const auto flavour = parse_flavour(tokens[3]);
      if (!flavour) throw ParseError(line_no, "bad flavour '" + std::string(tokens[3]) + "'");
      ev.flavour = *flavour;
      events.push_back(std::move(ev));
      open = true;
    } else if (tokens[0] == "P") {
      if (!open) throw ParseError(line_no, "particle line outside an event block");
      if (tokens.size() != 12) throw ParseError(line_no, "particle line needs 11 fields");
      Event& ev = events.back();
      const auto index = parse_field<std::int64_t>(tokens[1], line_no, "index");
      if (index != static_cast<std::int64_t>(ev.records.size())) {
        throw ParseError(line_no, "particle index " + std::to_string(index) + " out of sequence");
      }
      ParticleRecord r;
      r.pdg = parse_field<int>(tokens[2], line_no, "pdg code");
      const auto status = parse_status(tokens[3]);
      if (!status) throw ParseError(line_no, "bad status '" + std::string(tokens[3]) + "'");
      r.status = *status;
      r.mother = parse_field<int>(tokens[4], line_no, "mother index");
      for (int k = 0; k < 4; ++k) r.p(k) = parse_field<double>(tokens[5 + static_cast<std::size_t>(k)], line_no, "momentum");
      for (int k = 0; k < 3; ++k) r.vertex(k) = parse_field<double>(tokens[9 + static_cast<std::size_t>(k)], line_no, "vertex");
      ev.records.push_back(r);
      if (r.mother < -1 || r.mother >= index) {
        throw ValidationError("line " + std::to_string(line_no) + ": mother " + std::to_string(r.mother) +
                              " does not precede record " + std::to_string(index));
      }
    } else {
      throw ParseError(line_no, "unknown record type '" + std::string(tokens[0]) + "'");
    }
  }
  close();
  return events;
}

}  // namespace hfcal

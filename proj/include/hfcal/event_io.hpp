#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfcal/evtgen.hpp"

namespace hfcal {

// Plain-text event records:
//   E <event_id> <seed> <flavour>
//   P <index> <pdg> <status> <mother> <e> <px> <py> <pz> <vx> <vy> <vz>
// one block per event, blocks separated by blank lines, `#` comments.
// Momenta in GeV and vertices in mm, printed with 9 significant digits.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_event(std::ostream& out, const Event& event);
void write_events(std::ostream& out, std::span<const Event> events);

// Throws ParseError for malformed lines and ValidationError for records whose
// mother does not precede them.
std::vector<Event> read_events(std::istream& in);

void validate_topology(const Event& event);

}  // namespace hfcal

#pragma once

#include <string>
#include <variant>

#include "pta/gpta.hpp"
#include "pta/parikh_string.hpp"
#include "pta/ptar.hpp"
#include "pta/twocm.hpp"

namespace pta {

/// Automaton description files. One declaration per line, `;` starts a
/// comment, identifiers are runs of [A-Za-z0-9_#]. The leading `kind` line
/// selects the payload; `pta` files must be reset-free.
enum class FileKind { Pa, Pta, Ptar, Gpta, TwoCm };

std::string to_string(FileKind kind);

struct AutomatonFile {
  FileKind kind;
  std::variant<Pa, Ptar, Gpta, TwoCm> value;

  const Pa& pa() const { return std::get<Pa>(value); }
  const Ptar& ptar() const { return std::get<Ptar>(value); }
  const Gpta& gpta() const { return std::get<Gpta>(value); }
  const TwoCm& twocm() const { return std::get<TwoCm>(value); }
};

/// Parses an automaton description. Throws ParseError with a 1-based line
/// number on malformed input.
AutomatonFile parse_automaton(const std::string& text);

/// Reads and parses a file; the filename is prefixed to error messages.
AutomatonFile load_automaton(const std::string& path);

/// Canonical text form; parsing it back yields an identical structure.
std::string serialize(const AutomatonFile& file);

}  // namespace pta

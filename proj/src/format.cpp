#include "pta/format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "pta/errors.hpp"

namespace pta {

std::string to_string(FileKind kind) {
  switch (kind) {
    case FileKind::Pa:
      return "pa";
    case FileKind::Pta:
      return "pta";
    case FileKind::Ptar:
      return "ptar";
    case FileKind::Gpta:
      return "gpta";
    case FileKind::TwoCm:
      return "2cm";
  }
  return "?";
}

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#';
}

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream stream(text);
  std::string raw;
  int number = 0;
  while (std::getline(stream, raw)) {
    ++number;
    size_t comment = raw.find(';');
    if (comment != std::string::npos) raw.erase(comment);
    Line line{number, {}};
    size_t i = 0;
    while (i < raw.size()) {
      char c = raw[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (ident_char(c)) {
        size_t start = i;
        while (i < raw.size() && ident_char(raw[i])) ++i;
        line.tokens.push_back(raw.substr(start, i - start));
      } else if (c == '-' && i + 1 < raw.size() && raw[i + 1] == '>') {
        line.tokens.push_back("->");
        i += 2;
      } else if (std::string("[](),|:-").find(c) != std::string::npos) {
        line.tokens.push_back(std::string(1, c));
        ++i;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'",
                         number);
      }
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

// Cursor over one line's tokens.
struct Cursor {
  const Line& line;
  size_t at = 0;

  bool done() const { return at >= line.tokens.size(); }
  const std::string& peek() const {
    if (done()) throw ParseError("unexpected end of line", line.number);
    return line.tokens[at];
  }
  std::string take() {
    std::string t = peek();
    ++at;
    return t;
  }
  void expect(const std::string& token) {
    if (done() || line.tokens[at] != token)
      throw ParseError("expected '" + token + "'", line.number);
    ++at;
  }
  bool tries(const std::string& token) {
    if (!done() && line.tokens[at] == token) {
      ++at;
      return true;
    }
    return false;
  }
  void end() {
    if (!done())
      throw ParseError("trailing tokens after declaration", line.number);
  }

  std::int64_t number() {
    std::string t = take();
    if (t.empty() ||
        !std::all_of(t.begin(), t.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("expected a number, got '" + t + "'", line.number);
    return std::stoll(t);
  }
};

struct Sections {
  std::optional<int> dim;
  std::vector<std::pair<std::string, int>> alphabet;
  std::vector<std::string> states;
  std::optional<std::string> init;
  std::vector<std::string> finals;
  bool finals_seen = false;
  std::vector<std::vector<Vec>> linear_lines;  // base followed by periods
  std::vector<Vec> dvectors;
  std::vector<Line> transition_lines;

  int init_line = 0;

  std::map<std::string, int> state_index;

  int state(const std::string& name, int line) const {
    auto it = state_index.find(name);
    if (it == state_index.end())
      throw ParseError("unknown state '" + name + "'", line);
    return it->second;
  }
};

Vec read_vec(Cursor& c, int dim) {
  std::vector<std::int64_t> entries;
  while (!c.done() && c.peek() != "|") entries.push_back(c.number());
  if (static_cast<int>(entries.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " entries, got " +
                         std::to_string(entries.size()),
                     c.line.number);
  return Vec(std::move(entries));
}

// Vector written inside brackets, as in [1 0].
Vec read_bracket_vec(Cursor& c, int dim) {
  c.expect("[");
  std::vector<std::int64_t> entries;
  while (!c.done() && c.peek() != "]") entries.push_back(c.number());
  c.expect("]");
  if (static_cast<int>(entries.size()) != dim)
    throw ParseError("expected " + std::to_string(dim) + " entries, got " +
                         std::to_string(entries.size()),
                     c.line.number);
  return Vec(std::move(entries));
}

SemilinearSet build_constraint(const Sections& s, int dim) {
  std::vector<LinearSet> components;
  for (const std::vector<Vec>& chunk : s.linear_lines) {
    std::vector<Vec> periods(chunk.begin() + 1, chunk.end());
    components.emplace_back(chunk.front(), std::move(periods));
  }
  return SemilinearSet(dim, std::move(components));
}

Sections read_sections(const std::vector<Line>& lines, size_t start,
                       FileKind kind) {
  bool has_dim = kind != FileKind::TwoCm;
  bool has_alphabet = kind == FileKind::Pta || kind == FileKind::Ptar ||
                      kind == FileKind::Gpta;
  bool has_finals = kind == FileKind::Pa || kind == FileKind::TwoCm;
  bool has_dvectors = kind == FileKind::Gpta;

  Sections s;
  for (size_t i = start; i < lines.size(); ++i) {
    Cursor c{lines[i]};
    std::string head = c.take();
    if (head == "dim" && has_dim) {
      if (s.dim) throw ParseError("duplicate dim line", c.line.number);
      std::int64_t d = c.number();
      if (d < 1) throw ParseError("dimension must be at least 1", c.line.number);
      s.dim = static_cast<int>(d);
      c.end();
    } else if (head == "alphabet" && has_alphabet) {
      while (!c.done()) {
        std::string symbol = c.take();
        c.expect(":");
        std::int64_t rank = c.number();
        s.alphabet.emplace_back(symbol, static_cast<int>(rank));
      }
    } else if (head == "states") {
      while (!c.done()) s.states.push_back(c.take());
    } else if (head == "init") {
      if (s.init) throw ParseError("duplicate init line", c.line.number);
      s.init = c.take();
      s.init_line = c.line.number;
      c.end();
    } else if (head == "final" && has_finals) {
      s.finals_seen = true;
      while (!c.done()) s.finals.push_back(c.take());
    } else if (head == "linear" && has_dim) {
      if (!s.dim)
        throw ParseError("linear line before dim line", c.line.number);
      std::vector<Vec> chunk;
      chunk.push_back(read_vec(c, *s.dim));
      while (c.tries("|")) chunk.push_back(read_vec(c, *s.dim));
      c.end();
      s.linear_lines.push_back(std::move(chunk));
    } else if (head == "dvectors" && has_dvectors) {
      if (!s.dim)
        throw ParseError("dvectors line before dim line", c.line.number);
      s.dvectors.push_back(read_vec(c, *s.dim));
      while (c.tries("|")) s.dvectors.push_back(read_vec(c, *s.dim));
      c.end();
    } else if (head == "trans") {
      s.transition_lines.push_back(lines[i]);
    } else {
      throw ParseError("unknown declaration '" + head + "' for kind " +
                           to_string(kind),
                       c.line.number);
    }
  }

  if (has_dim && !s.dim) throw ParseError("missing dim line", 0);
  if (s.states.empty()) throw ParseError("missing states line", 0);
  if (!s.init) throw ParseError("missing init line", 0);
  for (size_t i = 0; i < s.states.size(); ++i) {
    if (s.state_index.count(s.states[i]))
      throw ParseError("duplicate state '" + s.states[i] + "'", 0);
    s.state_index[s.states[i]] = static_cast<int>(i);
  }
  return s;
}

RankedAlphabet build_alphabet(const Sections& s) {
  if (s.alphabet.empty()) throw ParseError("missing alphabet line", 0);
  RankedAlphabet alphabet;
  for (const auto& [symbol, rank] : s.alphabet) alphabet.add(symbol, rank);
  return alphabet;
}

Pa parse_pa(const Sections& s) {
  int dim = *s.dim;
  std::vector<int> finals;
  for (const std::string& f : s.finals) finals.push_back(s.state(f, 0));
  std::vector<PaTransition> transitions;
  for (const Line& line : s.transition_lines) {
    Cursor c{line};
    c.expect("trans");
    int src = s.state(c.take(), line.number);
    c.expect("-");
    std::string symbol = c.take();
    Vec delta = read_bracket_vec(c, dim);
    c.expect("->");
    int dst = s.state(c.take(), line.number);
    c.end();
    transitions.push_back(PaTransition{src, symbol, std::move(delta), dst});
  }
  return Pa(s.states, s.state(*s.init, s.init_line), std::move(finals),
            std::move(transitions), build_constraint(s, dim));
}

Ptar parse_ptar(const Sections& s, FileKind kind) {
  int dim = *s.dim;
  RankedAlphabet alphabet = build_alphabet(s);
  std::vector<PtarTransition> transitions;
  for (const Line& line : s.transition_lines) {
    Cursor c{line};
    c.expect("trans");
    int src = s.state(c.take(), line.number);
    c.expect("->");
    std::string symbol = c.take();
    if (!alphabet.contains(symbol))
      throw ParseError("unknown symbol '" + symbol + "'", line.number);
    std::vector<PtarSuccessor> successors;
    if (c.tries("(")) {
      while (true) {
        int state = s.state(c.take(), line.number);
        CounterAction action = CounterAction::reset();
        c.expect("[");
        if (c.tries("reset")) {
          c.expect("]");
        } else {
          std::vector<std::int64_t> entries;
          while (!c.done() && c.peek() != "]") entries.push_back(c.number());
          c.expect("]");
          if (static_cast<int>(entries.size()) != dim)
            throw ParseError("expected " + std::to_string(dim) + " entries",
                             line.number);
          action = CounterAction::adding(Vec(std::move(entries)));
        }
        successors.push_back(PtarSuccessor{state, std::move(action)});
        if (c.tries(",")) continue;
        c.expect(")");
        break;
      }
    }
    c.end();
    if (alphabet.rank(symbol) != static_cast<int>(successors.size()))
      throw ParseError("symbol " + symbol + " has rank " +
                           std::to_string(alphabet.rank(symbol)) + " but " +
                           std::to_string(successors.size()) +
                           " successors were given",
                       line.number);
    if (kind == FileKind::Pta) {
      for (const PtarSuccessor& succ : successors)
        if (succ.action.is_reset())
          throw ParseError("reset action in a file of kind pta", line.number);
    }
    transitions.push_back(
        PtarTransition{src, symbol, std::move(successors)});
  }
  return Ptar(s.states, std::move(alphabet), s.state(*s.init, s.init_line),
              std::move(transitions), build_constraint(s, dim));
}

Gpta parse_gpta(const Sections& s) {
  int dim = *s.dim;
  RankedAlphabet alphabet = build_alphabet(s);
  if (s.dvectors.empty()) throw ParseError("missing dvectors line", 0);
  std::vector<GptaTransition> transitions;
  for (const Line& line : s.transition_lines) {
    Cursor c{line};
    c.expect("trans");
    int src = s.state(c.take(), line.number);
    c.expect("->");
    std::string symbol = c.take();
    if (!alphabet.contains(symbol))
      throw ParseError("unknown symbol '" + symbol + "'", line.number);
    Vec d = read_bracket_vec(c, dim);
    int dvec = -1;
    for (size_t i = 0; i < s.dvectors.size(); ++i)
      if (s.dvectors[i] == d) dvec = static_cast<int>(i);
    if (dvec < 0)
      throw ParseError("vector [" + d.to_string() + "] is not in dvectors",
                       line.number);
    std::vector<int> successors;
    if (c.tries("(")) {
      while (true) {
        successors.push_back(s.state(c.take(), line.number));
        if (c.tries(",")) continue;
        c.expect(")");
        break;
      }
    }
    c.end();
    if (alphabet.rank(symbol) != static_cast<int>(successors.size()))
      throw ParseError("symbol " + symbol + " has rank " +
                           std::to_string(alphabet.rank(symbol)) + " but " +
                           std::to_string(successors.size()) +
                           " successors were given",
                       line.number);
    transitions.push_back(GptaTransition{src, symbol, dvec, std::move(successors)});
  }
  return Gpta(s.states, std::move(alphabet), s.dvectors,
              s.state(*s.init, s.init_line), std::move(transitions),
              build_constraint(s, dim));
}

TwoCm parse_2cm(const Sections& s) {
  std::vector<int> finals;
  for (const std::string& f : s.finals) finals.push_back(s.state(f, 0));
  std::vector<CmTransition> transitions;
  for (const Line& line : s.transition_lines) {
    Cursor c{line};
    c.expect("trans");
    int src = s.state(c.take(), line.number);
    std::string op = c.take();
    int dst = s.state(c.take(), line.number);
    c.end();
    CmOp parsed{};
    if (op == "inc1") parsed = CmOp{CmOpKind::Inc, 1};
    else if (op == "inc2") parsed = CmOp{CmOpKind::Inc, 2};
    else if (op == "dec1") parsed = CmOp{CmOpKind::Dec, 1};
    else if (op == "dec2") parsed = CmOp{CmOpKind::Dec, 2};
    else if (op == "zero1") parsed = CmOp{CmOpKind::ZeroTest, 1};
    else if (op == "zero2") parsed = CmOp{CmOpKind::ZeroTest, 2};
    else
      throw ParseError("unknown operation '" + op + "'", line.number);
    transitions.push_back(CmTransition{src, parsed, dst});
  }
  return TwoCm(s.states, s.state(*s.init, s.init_line), std::move(finals),
               std::move(transitions));
}

}  // namespace

AutomatonFile parse_automaton(const std::string& text) {
  std::vector<Line> lines = tokenize(text);
  if (lines.empty()) throw ParseError("empty automaton description", 0);
  Cursor first{lines[0]};
  first.expect("kind");
  std::string kind_name = first.take();
  first.end();
  FileKind kind;
  if (kind_name == "pa") kind = FileKind::Pa;
  else if (kind_name == "pta") kind = FileKind::Pta;
  else if (kind_name == "ptar") kind = FileKind::Ptar;
  else if (kind_name == "gpta") kind = FileKind::Gpta;
  else if (kind_name == "2cm") kind = FileKind::TwoCm;
  else
    throw ParseError("unknown kind '" + kind_name + "'", lines[0].number);

  try {
    Sections s = read_sections(lines, 1, kind);
    switch (kind) {
      case FileKind::Pa:
        return AutomatonFile{kind, parse_pa(s)};
      case FileKind::Pta:
      case FileKind::Ptar:
        return AutomatonFile{kind, parse_ptar(s, kind)};
      case FileKind::Gpta:
        return AutomatonFile{kind, parse_gpta(s)};
      case FileKind::TwoCm:
        return AutomatonFile{kind, parse_2cm(s)};
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
  throw ParseError("unreachable", 0);
}

AutomatonFile load_automaton(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_automaton(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace {

void write_constraint(std::ostream& out, const SemilinearSet& constraint) {
  for (const LinearSet& c : constraint.components()) {
    out << "linear " << c.base().to_string();
    for (const Vec& p : c.periods()) out << " | " << p.to_string();
    out << "\n";
  }
}

void write_names(std::ostream& out, const std::string& head,
                 const std::vector<std::string>& names) {
  out << head;
  for (const std::string& n : names) out << ' ' << n;
  out << "\n";
}

void write_alphabet(std::ostream& out, const RankedAlphabet& alphabet) {
  out << "alphabet";
  for (const auto& [symbol, rank] : alphabet.symbols())
    out << ' ' << symbol << ':' << rank;
  out << "\n";
}

}  // namespace

std::string serialize(const AutomatonFile& file) {
  std::ostringstream out;
  out << "kind " << to_string(file.kind) << "\n";
  switch (file.kind) {
    case FileKind::Pa: {
      const Pa& pa = file.pa();
      out << "dim " << pa.dim() << "\n";
      write_names(out, "states", pa.states());
      out << "init " << pa.state_name(pa.initial()) << "\n";
      out << "final";
      for (int f : pa.finals()) out << ' ' << pa.state_name(f);
      out << "\n";
      write_constraint(out, pa.constraint());
      for (const PaTransition& t : pa.transitions())
        out << "trans " << pa.state_name(t.src) << " -" << t.symbol << "["
            << t.delta.to_string() << "]-> " << pa.state_name(t.dst) << "\n";
      break;
    }
    case FileKind::Pta:
    case FileKind::Ptar: {
      const Ptar& a = file.ptar();
      out << "dim " << a.dim() << "\n";
      write_alphabet(out, a.alphabet());
      write_names(out, "states", a.states());
      out << "init " << a.state_name(a.initial()) << "\n";
      write_constraint(out, a.constraint());
      for (const PtarTransition& t : a.transitions()) {
        out << "trans " << a.state_name(t.src) << " -> " << t.symbol;
        if (!t.successors.empty()) {
          out << " (";
          for (size_t i = 0; i < t.successors.size(); ++i) {
            if (i > 0) out << " ,";
            const PtarSuccessor& succ = t.successors[i];
            out << ' ' << a.state_name(succ.state) << " [";
            out << (succ.action.is_reset() ? "reset"
                                           : succ.action.add->to_string());
            out << ']';
          }
          out << " )";
        }
        out << "\n";
      }
      break;
    }
    case FileKind::Gpta: {
      const Gpta& g = file.gpta();
      out << "dim " << g.dim() << "\n";
      write_alphabet(out, g.alphabet());
      out << "dvectors";
      for (size_t i = 0; i < g.dvecs().size(); ++i)
        out << (i == 0 ? " " : " | ") << g.dvecs()[i].to_string();
      out << "\n";
      write_names(out, "states", g.states());
      out << "init " << g.state_name(g.initial()) << "\n";
      write_constraint(out, g.constraint());
      for (const GptaTransition& t : g.transitions()) {
        out << "trans " << g.state_name(t.src) << " -> " << t.symbol << " ["
            << g.dvecs()[t.dvec].to_string() << "]";
        if (!t.successors.empty()) {
          out << " (";
          for (size_t i = 0; i < t.successors.size(); ++i) {
            if (i > 0) out << " ,";
            out << ' ' << g.state_name(t.successors[i]);
          }
          out << " )";
        }
        out << "\n";
      }
      break;
    }
    case FileKind::TwoCm: {
      const TwoCm& m = file.twocm();
      write_names(out, "states", m.states());
      out << "init " << m.state_name(m.initial()) << "\n";
      out << "final";
      for (int f : m.finals()) out << ' ' << m.state_name(f);
      out << "\n";
      for (const CmTransition& t : m.transitions())
        out << "trans " << m.state_name(t.src) << ' ' << t.op.to_string()
            << ' ' << m.state_name(t.dst) << "\n";
      break;
    }
  }
  return out.str();
}

}  // namespace pta

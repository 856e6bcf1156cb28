#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pta/errors.hpp"
#include "pta/format.hpp"
#include "pta/gpta.hpp"
#include "pta/linear_decider.hpp"
#include "pta/parikh_string.hpp"
#include "pta/ptar.hpp"
#include "pta/terms.hpp"
#include "pta/twocm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitUnsupported = 3;

std::string ptar_transition_text(const pta::Ptar& a, int index) {
  const pta::PtarTransition& t = a.transitions()[index];
  std::string out = a.state_name(t.src) + " -> " + t.symbol;
  if (!t.successors.empty()) {
    out += " (";
    for (size_t i = 0; i < t.successors.size(); ++i) {
      if (i > 0) out += " ,";
      out += " " + a.state_name(t.successors[i].state) + " [";
      out += t.successors[i].action.is_reset()
                 ? "reset"
                 : t.successors[i].action.add->to_string();
      out += "]";
    }
    out += " )";
  }
  return out;
}

std::string pa_transition_text(const pta::Pa& pa, int index) {
  const pta::PaTransition& t = pa.transitions()[index];
  return pa.state_name(t.src) + " -" + t.symbol + "[" + t.delta.to_string() +
         "]-> " + pa.state_name(t.dst);
}

int cmd_validate(const std::string& path) {
  pta::AutomatonFile file = pta::load_automaton(path);
  std::cout << "kind: " << pta::to_string(file.kind) << "\n";
  switch (file.kind) {
    case pta::FileKind::Pa: {
      const pta::Pa& pa = file.pa();
      std::cout << "dim: " << pa.dim() << "\n";
      std::cout << "states: " << pa.num_states() << "\n";
      std::cout << "transitions: " << pa.transitions().size() << "\n";
      std::cout << "constraint components: "
                << pa.constraint().components().size() << "\n";
      break;
    }
    case pta::FileKind::Pta:
    case pta::FileKind::Ptar: {
      const pta::Ptar& a = file.ptar();
      std::cout << "dim: " << a.dim() << "\n";
      std::cout << "states: " << a.num_states() << "\n";
      std::cout << "transitions: " << a.transitions().size() << "\n";
      std::cout << "constraint components: "
                << a.constraint().components().size() << "\n";
      if (!a.alphabet().has_nullary())
        std::cout << "warning: alphabet has no rank-0 symbol; the language "
                     "is empty\n";
      break;
    }
    case pta::FileKind::Gpta: {
      const pta::Gpta& g = file.gpta();
      std::cout << "dim: " << g.dim() << "\n";
      std::cout << "states: " << g.num_states() << "\n";
      std::cout << "transitions: " << g.transitions().size() << "\n";
      std::cout << "label vectors: " << g.dvecs().size() << "\n";
      std::cout << "constraint components: "
                << g.constraint().components().size() << "\n";
      if (!g.alphabet().has_nullary())
        std::cout << "warning: alphabet has no rank-0 symbol; the language "
                     "is empty\n";
      break;
    }
    case pta::FileKind::TwoCm: {
      const pta::TwoCm& m = file.twocm();
      std::cout << "states: " << m.num_states() << "\n";
      std::cout << "transitions: " << m.transitions().size() << "\n";
      std::cout << "finals: " << m.finals().size() << "\n";
      break;
    }
  }
  std::cout << "ok\n";
  return kExitOk;
}

int cmd_classify(const std::string& path) {
  pta::AutomatonFile file = pta::load_automaton(path);
  if (file.kind != pta::FileKind::Pta && file.kind != pta::FileKind::Ptar) {
    std::cerr << "classify expects kind pta or ptar\n";
    return kExitInputError;
  }
  std::cout << pta::to_string(pta::classify(file.ptar())) << "\n";
  return kExitOk;
}

int cmd_member(const std::string& path, const std::string& tree_text,
               bool trace) {
  pta::AutomatonFile file = pta::load_automaton(path);
  if (file.kind == pta::FileKind::Pta || file.kind == pta::FileKind::Ptar) {
    const pta::Ptar& a = file.ptar();
    pta::Tree tree = pta::parse_tree(tree_text, a.alphabet());
    auto result = pta::member(a, tree);
    std::cout << (result ? "MEMBER" : "NONMEMBER") << "\n";
    if (result && trace) {
      if (!pta::trace_valid(a, tree, *result))
        throw std::logic_error("computed trace failed to replay");
      int step = 0;
      for (const auto& [transition, pos] : result->steps)
        std::cout << "step " << ++step << " at "
                  << pta::position_to_string(pos) << ": "
                  << ptar_transition_text(a, transition) << "\n";
    }
    return kExitOk;
  }
  if (file.kind == pta::FileKind::Gpta) {
    const pta::Gpta& g = file.gpta();
    pta::Tree tree = pta::parse_tree(tree_text, g.alphabet());
    auto result = pta::member(g, tree);
    std::cout << (result ? "MEMBER" : "NONMEMBER") << "\n";
    if (result && trace) {
      if (!pta::run_valid(g, result->labeled, result->run))
        throw std::logic_error("computed run failed to validate");
      auto [base, labeling] = pta::unzip_labeled(result->labeled);
      for (const pta::Position& p : pta::positions(base))
        std::cout << "pos " << pta::position_to_string(p) << ": "
                  << pta::label_at(base, p) << " ["
                  << g.dvecs()[labeling.at(p)].to_string() << "] state "
                  << g.state_name(result->run.at(p)) << "\n";
      std::cout << "parikh image: "
                << pta::parikh(g, result->labeled).to_string() << "\n";
    }
    return kExitOk;
  }
  std::cerr << "member expects a tree automaton (kind pta, ptar, or gpta)\n";
  return kExitInputError;
}

int cmd_empty(const std::string& path, bool verbose) {
  pta::AutomatonFile file = pta::load_automaton(path);
  if (file.kind == pta::FileKind::Pa) {
    const pta::Pa& pa = file.pa();
    pta::PaEmptinessResult result = pta::is_empty(pa);
    if (result.empty) {
      std::cout << "EMPTY\n";
    } else {
      if (!pta::run_valid(pa, *result.witness))
        throw std::logic_error("emptiness witness failed to validate");
      std::cout << "NONEMPTY\n";
      std::cout << "witness word: " << pta::word_of(pa, *result.witness)
                << "\n";
      std::cout << "witness sum: "
                << pta::sum_of(pa, *result.witness).to_string() << "\n";
      for (int t : result.witness->transitions)
        std::cout << "  " << pa_transition_text(pa, t) << "\n";
    }
    return kExitOk;
  }
  if (file.kind == pta::FileKind::Pta || file.kind == pta::FileKind::Ptar) {
    const pta::Ptar& a = file.ptar();
    if (pta::classify(a) != pta::AutomatonClass::LinearPtar) {
      std::cerr << "unsupported: emptiness undecidable for non-linear "
                   "PTA/PTAR of dimension >= 3\n";
      return kExitUnsupported;
    }
    pta::EmptinessResult result = pta::is_empty_linear(a);
    if (verbose) {
      for (size_t i = 0; i < result.chain.size(); ++i) {
        std::cout << "U" << i << ": {";
        for (size_t j = 0; j < result.chain[i].size(); ++j)
          std::cout << (j ? ", " : " ") << a.state_name(result.chain[i][j]);
        std::cout << (result.chain[i].empty() ? "}" : " }") << "\n";
      }
    }
    if (result.empty) {
      std::cout << "EMPTY\n";
    } else {
      if (!pta::member(a, *result.witness))
        throw std::logic_error("emptiness witness failed to validate");
      std::cout << "NONEMPTY\n";
      std::cout << "witness tree: " << result.witness->to_string() << "\n";
      std::cout << "spinal height: " << result.spinal->height() << "\n";
    }
    return kExitOk;
  }
  std::cerr << "emptiness expects kind pa, pta, or ptar\n";
  return kExitInputError;
}

int cmd_encode_2cm(const std::string& path, const std::string& out_path) {
  pta::AutomatonFile file = pta::load_automaton(path);
  if (file.kind != pta::FileKind::TwoCm) {
    std::cerr << "encode-2cm expects kind 2cm\n";
    return kExitInputError;
  }
  pta::Encoded2cm encoded = pta::encode(file.twocm());
  pta::AutomatonFile out{pta::FileKind::Pta, encoded.automaton};
  std::ofstream stream(out_path);
  if (!stream) {
    std::cerr << out_path << ": cannot open for writing\n";
    return kExitInputError;
  }
  stream << pta::serialize(out);
  std::cout << "wrote " << out_path << ": "
            << encoded.automaton.num_states() << " states, "
            << encoded.automaton.transitions().size()
            << " transitions, dim " << encoded.automaton.dim() << "\n";
  return kExitOk;
}

int cmd_cm_run(const std::string& path, int max_steps) {
  pta::AutomatonFile file = pta::load_automaton(path);
  if (file.kind != pta::FileKind::TwoCm) {
    std::cerr << "cm-run expects kind 2cm\n";
    return kExitInputError;
  }
  const pta::TwoCm& m = file.twocm();
  auto result = pta::cm_bounded_accepts(m, max_steps);
  if (!result) {
    std::cout << "NOT-FOUND-WITHIN-BOUND\n";
    return kExitOk;
  }
  std::cout << "ACCEPTS in " << result->size() << " steps\n";
  pta::CmConfig config{m.initial(), 0, 0};
  std::cout << "  (" << m.state_name(config.state) << ", " << config.k1
            << ", " << config.k2 << ")\n";
  for (int t : *result) {
    const pta::CmTransition& tr = m.transitions()[t];
    for (const auto& [ti, succ] : pta::cm_step(m, config)) {
      if (ti == t) {
        config = succ;
        break;
      }
    }
    std::cout << "  --" << tr.op.to_string() << "--> ("
              << m.state_name(config.state) << ", " << config.k1 << ", "
              << config.k2 << ")\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parikh tree automata toolkit"};
  app.require_subcommand(1);

  std::string path;
  std::string tree_text;
  std::string out_path;
  bool trace = false;
  bool verbose = false;
  int max_steps = 100;

  CLI::App* validate = app.add_subcommand("validate", "check an automaton file");
  validate->add_option("file", path)->required();

  CLI::App* classify = app.add_subcommand(
      "classify", "report the restriction class of a pta/ptar file");
  classify->add_option("file", path)->required();

  CLI::App* member =
      app.add_subcommand("member", "decide membership of a tree");
  member->add_option("file", path)->required();
  member->add_option("tree", tree_text)->required();
  member->add_flag("--trace", trace, "print the computation or run");

  CLI::App* empty = app.add_subcommand("empty", "decide nonemptiness");
  empty->add_option("file", path)->required();
  empty->add_flag("-v,--verbose", verbose, "print the saturation chain");

  CLI::App* encode =
      app.add_subcommand("encode-2cm", "encode a two-counter machine");
  encode->add_option("machine", path)->required();
  encode->add_option("out", out_path)->required();

  CLI::App* cm_run = app.add_subcommand("cm-run", "bounded acceptance search");
  cm_run->add_option("machine", path)->required();
  cm_run->add_option("--max-steps", max_steps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(path);
    if (classify->parsed()) return cmd_classify(path);
    if (member->parsed()) return cmd_member(path, tree_text, trace);
    if (empty->parsed()) return cmd_empty(path, verbose);
    if (encode->parsed()) return cmd_encode_2cm(path, out_path);
    if (cm_run->parsed()) return cmd_cm_run(path, max_steps);
  } catch (const pta::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

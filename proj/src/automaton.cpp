#include "synth/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace synth {
namespace {

struct GuardParser {
  const std::string& s;
  std::size_t pos = 0;
  const std::vector<std::string>& alphabet;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::unique_ptr<Guard> parse_expr() {
    auto lhs = parse_term();
    while (eat('|')) {
      auto g = std::make_unique<Guard>();
      g->op = Guard::Op::r;
      g->a = std::move(lhs);
      g->b = parse_term();
      lhs = std::move(g);
    }
    return lhs;
  }
  std::unique_ptr<Guard> parse_term() {
    auto lhs = parse_factor();
    while (eat('&')) {
      auto g = std::make_unique<Guard>();
      g->op = Guard::Op::nd;
      g->a = std::move(lhs);
      g->b = parse_factor();
      lhs = std::move(g);
    }
    return lhs;
  }
  std::unique_ptr<Guard> parse_factor() {
    skip();
    if (eat('!')) {
      auto g = std::make_unique<Guard>();
      g->op = Guard::Op::nt;
      g->a = parse_factor();
      return g;
    }
    if (eat('(')) {
      auto g = parse_expr();
      if (!eat(')')) throw std::invalid_argument("guard: missing ')' in \"" + s + "\"");
      return g;
    }
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (start == pos) throw std::invalid_argument("guard: parse error in \"" + s + "\"");
    std::string tok = s.substr(start, pos - start);
    auto g = std::make_unique<Guard>();
    if (tok == "1" || tok == "true") {
      g->op = Guard::Op::cnst;
      g->value = true;
      return g;
    }
    if (tok == "0" || tok == "false") {
      g->op = Guard::Op::cnst;
      g->value = false;
      return g;
    }
    auto it = std::find(alphabet.begin(), alphabet.end(), tok);
    if (it == alphabet.end())
      throw std::invalid_argument("guard: unknown predicate \"" + tok + "\" in \"" + s + "\"");
    g->op = Guard::Op::var;
    g->var = static_cast<int>(it - alphabet.begin());
    return g;
  }

  std::unique_ptr<Guard> run() {
    auto g = parse_expr();
    skip();
    if (pos != s.size()) throw std::invalid_argument("guard: trailing junk in \"" + s + "\"");
    return g;
  }
};

std::string strip(const std::string& line) {
  std::string out = line;
  auto hash = out.find('#');
  if (hash != std::string::npos) out.erase(hash);
  auto b = out.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = out.find_last_not_of(" \t\r\n");
  return out.substr(b, e - b + 1);
}

}  // namespace

int ParityAutomaton::max_priority() const {
  int m = 1;
  for (int p : priority) m = std::max(m, p);
  return m;
}

int ParityAutomaton::step(int q, Letter l) const {
  int found = -1;
  for (const auto& e : edges) {
    if (e.src != q || !e.guard->eval(l)) continue;
    if (found >= 0 && found != e.dst)
      throw std::runtime_error("automaton: ambiguous transition from " + state_names[q]);
    found = e.dst;
  }
  if (found < 0)
    throw std::runtime_error("automaton: no transition from " + state_names[q] +
                             " on letter mask " + std::to_string(l));
  return found;
}

std::uint64_t ParityAutomaton::hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (int i = 0; i < num_states(); ++i) {
    mix(state_names[i]);
    mix(std::to_string(priority[i]));
  }
  mix(std::to_string(initial));
  for (const auto& a : alphabet) mix(a);
  for (const auto& e : edges) {
    mix(std::to_string(e.src));
    mix(e.guard_text);
    mix(std::to_string(e.dst));
  }
  return h;
}

ParityAutomaton parse_automaton(const std::string& text) {
  ParityAutomaton aut;
  std::map<std::string, int> state_idx;
  std::string section;
  std::string initial_name;
  struct RawEdge {
    std::string src, guard, dst;
  };
  std::vector<RawEdge> raw_edges;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string t = strip(line);
    if (t.empty()) continue;
    if (t == "STATES" || t == "INITIAL" || t == "ALPHABET" || t == "TRANS") {
      section = t;
      continue;
    }
    if (section == "STATES") {
      auto colon = t.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("automaton: STATES line needs name:priority, got \"" + t + "\"");
      std::string name = strip(t.substr(0, colon));
      int prio = std::stoi(t.substr(colon + 1));
      if (prio < 1) throw std::invalid_argument("automaton: priority must be >= 1");
      if (state_idx.count(name)) throw std::invalid_argument("automaton: duplicate state " + name);
      state_idx[name] = aut.num_states();
      aut.state_names.push_back(name);
      aut.priority.push_back(prio);
    } else if (section == "INITIAL") {
      if (!initial_name.empty()) throw std::invalid_argument("automaton: multiple initial states");
      initial_name = t;
    } else if (section == "ALPHABET") {
      std::istringstream ls(t);
      std::string tok;
      while (ls >> tok) aut.alphabet.push_back(tok);
    } else if (section == "TRANS") {
      std::istringstream ls(t);
      std::vector<std::string> toks;
      std::string tok;
      while (ls >> tok) toks.push_back(tok);
      if (toks.size() < 3)
        throw std::invalid_argument("automaton: TRANS line needs src guard dst, got \"" + t + "\"");
      RawEdge e;
      e.src = toks.front();
      e.dst = toks.back();
      for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
        if (i > 1) e.guard += ' ';
        e.guard += toks[i];
      }
      raw_edges.push_back(std::move(e));
    } else {
      throw std::invalid_argument("automaton: content outside any section: \"" + t + "\"");
    }
  }
  if (aut.num_states() == 0) throw std::invalid_argument("automaton: no states");
  if (aut.alphabet.size() > 31) throw std::invalid_argument("automaton: alphabet too large");
  if (initial_name.empty()) throw std::invalid_argument("automaton: missing INITIAL");
  auto init_it = state_idx.find(initial_name);
  if (init_it == state_idx.end())
    throw std::invalid_argument("automaton: unknown initial state " + initial_name);
  aut.initial = init_it->second;

  for (const auto& r : raw_edges) {
    auto si = state_idx.find(r.src);
    auto di = state_idx.find(r.dst);
    if (si == state_idx.end() || di == state_idx.end())
      throw std::invalid_argument("automaton: unknown state in transition " + r.src + " -> " + r.dst);
    Edge e;
    e.src = si->second;
    e.dst = di->second;
    e.guard_text = r.guard;
    GuardParser p{r.guard, 0, aut.alphabet};
    e.guard = std::shared_ptr<Guard>(p.run().release());
    aut.edges.push_back(std::move(e));
  }
  return aut;
}

ParityAutomaton load_automaton(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("automaton: cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_automaton(buf.str());
}

int PredicateSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

void check_predicate_alignment(const PredicateSet& preds, const Grid& grid) {
  const Box& dom = grid.domain();
  for (std::size_t p = 0; p < preds.names.size(); ++p) {
    for (const Box& b : preds.regions[p]) {
      if (b.dim() != grid.dim())
        throw std::invalid_argument("predicate " + preds.names[p] + ": dimension mismatch");
      for (int i = 0; i < grid.dim(); ++i) {
        for (double bound : {b.lo[i], b.hi[i]}) {
          const double cells = (bound - dom.lo[i]) / grid.eta()[i];
          if (std::fabs(cells - std::llround(cells)) > 1e-9)
            throw std::invalid_argument("predicate " + preds.names[p] +
                                        " boundary not on grid lines in dim " + std::to_string(i));
        }
      }
    }
  }
}

std::vector<Letter> label_cells(const PredicateSet& preds, const ParityAutomaton& aut,
                                const Grid& grid) {
  check_predicate_alignment(preds, grid);
  std::vector<int> pred_of_bit(aut.alphabet.size());
  for (std::size_t b = 0; b < aut.alphabet.size(); ++b) {
    int pi = preds.index_of(aut.alphabet[b]);
    if (pi < 0)
      throw std::invalid_argument("no region defined for alphabet predicate " + aut.alphabet[b]);
    pred_of_bit[b] = pi;
  }
  std::vector<Letter> letters(static_cast<std::size_t>(grid.num_cells()), 0);
  for (CellId c = 0; c < grid.num_cells(); ++c) {
    const Vec center = grid.cell_center(c);
    Letter l = 0;
    for (std::size_t b = 0; b < aut.alphabet.size(); ++b) {
      for (const Box& box : preds.regions[pred_of_bit[b]]) {
        if (box.contains(center)) {
          l |= Letter{1} << b;
          break;
        }
      }
    }
    letters[static_cast<std::size_t>(c)] = l;
  }
  return letters;
}

}  // namespace synth

#include "synth/game.hpp"

#include <sstream>

namespace synth {

std::string ExplicitGame::dump() const {
  std::ostringstream os;
  os << "v0 " << n0 << " v1 " << n1 << " vr " << nr << " inputs " << num_inputs << "\n";
  for (int v = 0; v < total(); ++v) {
    os << v << ' ' << (is_v0(v) ? "ctrl" : is_v1(v) ? "env" : "rnd");
    if (is_v0(v)) os << " p=" << prio[v];
    os << " ->";
    for (auto w : succ[static_cast<std::size_t>(v)]) os << ' ' << w;
    os << "\n";
  }
  return os.str();
}

Bitset explicit_cpre(const ExplicitGame& g, const Bitset& S, Mode mode) {
  Bitset out(static_cast<std::size_t>(g.total()));
  for (int v = 0; v < g.total(); ++v) {
    const auto& e = g.succ[static_cast<std::size_t>(v)];
    if (e.empty()) continue;
    bool hit;
    const bool existential = g.is_v0(v) || (mode == Mode::cooperative && g.is_v1(v));
    if (existential) {
      hit = false;
      for (auto w : e)
        if (S.test(static_cast<std::size_t>(w))) {
          hit = true;
          break;
        }
    } else {
      hit = true;
      for (auto w : e)
        if (!S.test(static_cast<std::size_t>(w))) {
          hit = false;
          break;
        }
    }
    if (hit) out.set(static_cast<std::size_t>(v));
  }
  return out;
}

Bitset explicit_apre(const ExplicitGame& g, const Bitset& S, const Bitset& T, Mode mode) {
  Bitset out = explicit_cpre(g, T, mode);
  for (int v = g.n0 + g.n1; v < g.total(); ++v) {
    if (out.test(static_cast<std::size_t>(v))) continue;
    const auto& e = g.succ[static_cast<std::size_t>(v)];
    bool in_s = true, meets_t = false;
    for (auto w : e) {
      in_s = in_s && S.test(static_cast<std::size_t>(w));
      meets_t = meets_t || T.test(static_cast<std::size_t>(w));
    }
    if (in_s && meets_t) out.set(static_cast<std::size_t>(v));
  }
  return out;
}

Bitset embed_v0(const ExplicitGame& g, const Bitset& v0_set) {
  Bitset out(static_cast<std::size_t>(g.total()));
  v0_set.for_each([&](std::size_t s) { out.set(s); });
  return out;
}

Bitset restrict_v0(const ExplicitGame& g, const Bitset& full_set) {
  Bitset out(static_cast<std::size_t>(g.n0));
  for (int s = 0; s < g.n0; ++s)
    if (full_set.test(static_cast<std::size_t>(s))) out.set(static_cast<std::size_t>(s));
  return out;
}

}  // namespace synth

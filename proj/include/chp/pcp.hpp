#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chp/testing.hpp"

namespace chp {

// Post correspondence instance over the alphabet {a, b}: an ordered list of
// subword pairs (u_i, v_i), 1-indexed. Empty subwords are rejected.
struct PcpInstance {
  std::vector<std::pair<std::string, std::string>> pairs;

  void validate() const {
    if (pairs.empty()) throw StructureError("pcp: empty instance");
    for (const auto& [u, v] : pairs) {
      if (u.empty() || v.empty()) throw StructureError("pcp: empty subword");
      for (char c : u + v)
        if (c != 'a' && c != 'b')
          throw StructureError("pcp: subwords must be over {a,b}, got '" + std::string(1, c) + "'");
    }
  }
};

// "ab:bb,a:aba,baa:aa"
inline PcpInstance parse_pcp_pairs(const std::string& text) {
  PcpInstance inst;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw StructureError("pcp: pair \"" + item + "\" lacks ':'");
    inst.pairs.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  inst.validate();
  return inst;
}

// Net simulating the instance: an initial choice between a u-branch and a
// v-branch; each branch announces itself (u or v), then loops through the
// subwords, firing the pair index followed by its letters, and can finish
// with fu or fv once at least one pair was simulated.
inline Net pcp_encode_net(const PcpInstance& inst) {
  inst.validate();
  NetBuilder b("NI");
  b.letter("u").letter("v").letter("fu").letter("fv").letter("a").letter("b");
  const std::size_t n = inst.pairs.size();
  for (std::size_t i = 1; i <= n; ++i) b.letter(std::to_string(i));

  b.place("i0");
  b.initial({"i0"});
  auto branch = [&](const std::string& side, auto word_of) {
    const std::string pre = side + "pre";
    const std::string cen = side + "cen";
    const std::string fin = side + "fin";
    b.place(pre).place(cen).place(fin);
    b.trans(side, {"i0"}, side, {pre});
    b.trans("f" + side, {cen}, "f" + side, {fin});
    for (std::size_t i = 1; i <= n; ++i) {
      const std::string w = word_of(i);
      std::vector<std::string> chain;
      for (std::size_t j = 0; j < w.size(); ++j) {
        chain.push_back(side + std::to_string(i) + ".c" + std::to_string(j));
        b.place(chain.back());
      }
      b.trans(side + std::to_string(i) + ".first", {pre}, std::to_string(i), {chain[0]});
      b.trans(side + std::to_string(i) + ".idx", {cen}, std::to_string(i), {chain[0]});
      for (std::size_t j = 0; j < w.size(); ++j) {
        const std::string to = j + 1 < w.size() ? chain[j + 1] : cen;
        b.trans(side + std::to_string(i) + ".l" + std::to_string(j), {chain[j]},
                std::string(1, w[j]), {to});
      }
    }
  };
  branch("u", [&](std::size_t i) { return inst.pairs[i - 1].first; });
  branch("v", [&](std::size_t i) { return inst.pairs[i - 1].second; });
  return b.build();
}

// Test accepting two runs that do NOT simulate a correspondence: after the
// u/v' gate, an internal choice between a letter-matching branch and an
// index-matching branch; each reaches its only non-tick place exactly when
// the runs agree letterwise resp. indexwise and both finish. Every tick
// place of a branch carries self-loops for the labels the branch ignores.
inline Test pcp_encode_test(const PcpInstance& inst) {
  inst.validate();
  const std::size_t n = inst.pairs.size();
  NetBuilder b("TPCP");
  b.letter("a").letter("b").letter("a'").letter("b'");
  b.letter("u").letter("v'").letter("fu").letter("fv'");
  std::vector<std::string> index_labels;
  for (std::size_t i = 1; i <= n; ++i) {
    index_labels.push_back(std::to_string(i));
    index_labels.push_back(std::to_string(i) + "'");
    b.letter(std::to_string(i)).letter(std::to_string(i) + "'");
  }

  b.place("g0").place("g1").place("g2");
  b.initial({"g0"});
  b.trans("gate.u", {"g0"}, "u", {"g1"});
  b.trans("gate.v", {"g1"}, "v'", {"g2"});

  // letter-matching branch
  b.place("Lc").place("La").place("Lb").place("Lf").place("Lx");
  b.trans("enter.L", {"g2"}, "tau", {"Lc"});
  b.trans("L.a", {"Lc"}, "a", {"La"});
  b.trans("L.a1", {"La"}, "a'", {"Lc"});
  b.trans("L.b", {"Lc"}, "b", {"Lb"});
  b.trans("L.b1", {"Lb"}, "b'", {"Lc"});
  b.trans("L.fu", {"Lc"}, "fu", {"Lf"});
  b.trans("L.fv", {"Lf"}, "fv'", {"Lx"});
  for (const std::string& p : std::vector<std::string>{"Lc", "La", "Lb", "Lf"})
    for (const auto& lbl : index_labels) b.trans("loop." + p + "." + lbl, {p}, lbl, {p});

  // index-matching branch
  b.place("Ic");
  for (std::size_t i = 1; i <= n; ++i) b.place("I" + std::to_string(i));
  b.place("If").place("Ix");
  b.trans("enter.I", {"g2"}, "tau", {"Ic"});
  for (std::size_t i = 1; i <= n; ++i) {
    b.trans("I." + std::to_string(i), {"Ic"}, std::to_string(i), {"I" + std::to_string(i)});
    b.trans("I." + std::to_string(i) + "p", {"I" + std::to_string(i)}, std::to_string(i) + "'", {"Ic"});
  }
  b.trans("I.fu", {"Ic"}, "fu", {"If"});
  b.trans("I.fv", {"If"}, "fv'", {"Ix"});
  std::vector<std::string> ipl{"Ic", "If"};
  for (std::size_t i = 1; i <= n; ++i) ipl.push_back("I" + std::to_string(i));
  for (const auto& p : ipl)
    for (const std::string& lbl : std::vector<std::string>{"a", "b", "a'", "b'", "u", "v'"})
      b.trans("loop." + p + "." + lbl, {p}, lbl, {p});

  Test t;
  t.net = b.build();
  t.tick = IndexSet(t.net.place_count());
  for (const auto& p : t.net.places)
    if (p != "g2" && p != "Lx" && p != "Ix") t.tick.set(t.net.place_index(p));
  return t;
}

struct PcpDecoded {
  std::vector<std::size_t> indices;
  std::string word;
};

struct PcpCheck {
  Verdict verdict;
  std::optional<PcpDecoded> decoded;
};

namespace detail {

struct PcpRunDecode {
  std::string announce;  // "u" or "v"
  std::vector<std::size_t> indices;
  std::string word;
};

inline PcpRunDecode decode_pcp_run(const Net& causal) {
  PcpRunDecode d;
  for (std::size_t e : causal_event_order(causal)) {
    std::string lbl = causal.transitions[e].label.name();
    while (!lbl.empty() && lbl.back() == '\'') lbl.pop_back();
    if (lbl == "u" || lbl == "v") {
      d.announce = lbl;
    } else if (lbl == "a" || lbl == "b") {
      d.word += lbl;
    } else if (lbl == "fu" || lbl == "fv") {
    } else {
      d.indices.push_back(std::stoul(lbl));
    }
  }
  return d;
}

}  // namespace detail

// Bounded universal-may check of the reduction: false with a decoded
// correspondence when one of total simulated length <= bound exists,
// unknown otherwise. Never true: the run space is unbounded.
inline PcpCheck check_pcp(const PcpInstance& inst, std::size_t bound) {
  if (bound < 1) throw StructureError("check_pcp: bound must be at least 1");
  Net ni = pcp_encode_net(inst);
  Test t = pcp_encode_test(inst);
  PcpCheck out;
  out.verdict = check_hyper(ni, t, {Quant::forall, Quant::forall}, TestMode::may,
                            RelabelScheme::Kind::prime, bound);
  if (out.verdict.holds == Tri::no && out.verdict.witness &&
      out.verdict.witness->run_indices.size() == 2) {
    RunEnumeration en = maximal_runs(ni, bound);
    auto d1 = detail::decode_pcp_run(en.maximal[out.verdict.witness->run_indices[0]].causal);
    auto d2 = detail::decode_pcp_run(en.maximal[out.verdict.witness->run_indices[1]].causal);
    if (d1.announce == "v") std::swap(d1, d2);
    if (d1.announce != "u" || d2.announce != "v" || d1.indices != d2.indices || d1.word != d2.word)
      throw Error("pcp: counterexample pair does not decode to a correspondence");
    out.decoded = PcpDecoded{d1.indices, d1.word};
  }
  return out;
}

}  // namespace chp

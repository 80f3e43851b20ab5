#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pomset/errors.hpp"
#include "pomset/memory.hpp"
#include "pomset/partial_string.hpp"
#include "pomset/program.hpp"

namespace pomset::io {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

// Whitespace-separated tokens of a line with any `#` comment removed.
inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

inline void expect_arity(const std::vector<std::string>& t, std::size_t n, std::size_t line) {
  if (t.size() != n) throw ParseError("expected " + std::to_string(n - 1) + " arguments to `" + t[0] + "`", line);
}

inline int parse_bit(const std::string& s, std::size_t line) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw ParseError("store value must be 0 or 1, got `" + s + "`", line);
}

// Accumulates `event` and `order` lines; shared by .ps files and inline program blocks.
class PsBuilder {
 public:
  void line(const std::vector<std::string>& t, std::size_t ln) {
    if (t[0] == "event") {
      if (t.size() < 3) throw ParseError("malformed event line", ln);
      const std::string& id = t[1];
      if (index_.contains(id)) throw ParseError("duplicate event id `" + id + "`", ln);
      const std::string& kind = t[2];
      Label label;
      if (kind == "opaque") {
        expect_arity(t, 4, ln);
        label = Label::opaque(t[3]);
      } else if (kind == "load") {
        expect_arity(t, 6, ln);
        LoadTag tag;
        if (t[3] == "none") tag = LoadTag::none;
        else if (t[3] == "acquire") tag = LoadTag::acquire;
        else throw ParseError("load tag must be none or acquire, got `" + t[3] + "`", ln);
        use_register(t[4], ln);
        use_address(t[5], ln);
        label = Label::load(tag, t[4], t[5]);
      } else if (kind == "store") {
        expect_arity(t, 6, ln);
        StoreTag tag;
        if (t[3] == "none") tag = StoreTag::none;
        else if (t[3] == "release") tag = StoreTag::release;
        else throw ParseError("store tag must be none or release, got `" + t[3] + "`", ln);
        use_address(t[4], ln);
        label = Label::store(tag, t[4], parse_bit(t[5], ln));
      } else {
        throw ParseError("unknown event kind `" + kind + "`", ln);
      }
      index_[id] = labels_.size();
      labels_.push_back(std::move(label));
      names_.push_back(id);
    } else if (t[0] == "order") {
      expect_arity(t, 3, ln);
      auto a = index_.find(t[1]), b = index_.find(t[2]);
      if (a == index_.end()) throw ParseError("unknown event `" + t[1] + "` in order", ln);
      if (b == index_.end()) throw ParseError("unknown event `" + t[2] + "` in order", ln);
      edges_.emplace_back(a->second, b->second);
    } else {
      throw ParseError("unknown directive `" + t[0] + "`", ln);
    }
  }

  PartialString build() const {
    try {
      return PartialString(labels_, edges_, names_);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what());
    }
  }

 private:
  void use_register(const std::string& r, std::size_t ln) {
    if (addresses_.contains(r)) throw ParseError("`" + r + "` is used both as address and register", ln);
    registers_.insert(r);
  }
  void use_address(const std::string& a, std::size_t ln) {
    if (registers_.contains(a)) throw ParseError("`" + a + "` is used both as address and register", ln);
    addresses_.insert(a);
  }

  std::map<std::string, Event> index_;
  std::vector<Label> labels_;
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::set<std::string> registers_, addresses_;
};

}  // namespace detail

inline PartialString parse_ps(const std::string& text) {
  detail::PsBuilder b;
  std::istringstream in(text);
  std::size_t ln = 0;
  for (std::string line; std::getline(in, line);) {
    ++ln;
    auto t = detail::tokens(line);
    if (!t.empty()) b.line(t, ln);
  }
  return b.build();
}

inline PartialString load_ps(const std::filesystem::path& path) { return parse_ps(read_file(path)); }

inline std::string print_ps(const PartialString& p) {
  std::ostringstream os;
  for (Event e = 0; e < p.size(); ++e) {
    const Label& l = p.label(e);
    os << "event " << p.name(e) << ' ';
    if (const auto* o = l.as_opaque()) {
      os << "opaque " << o->token;
    } else if (const auto* ld = l.as_load()) {
      os << "load " << (ld->tag == LoadTag::acquire ? "acquire" : "none") << ' ' << ld->reg << ' ' << ld->addr;
    } else if (const auto* st = l.as_store()) {
      os << "store " << (st->tag == StoreTag::release ? "release" : "none") << ' ' << st->addr << ' ' << st->bit;
    }
    os << '\n';
  }
  for (const auto& [a, b] : p.covering_edges()) os << "order " << p.name(a) << ' ' << p.name(b) << '\n';
  return os.str();
}

// `include <file.ps>` paths are resolved against `base_dir`.
inline Program parse_program(const std::string& text, const std::filesystem::path& base_dir = ".") {
  std::vector<PartialString> gens;
  std::istringstream in(text);
  std::size_t ln = 0;
  std::optional<detail::PsBuilder> block;
  std::size_t block_start = 0;
  for (std::string line; std::getline(in, line);) {
    ++ln;
    auto t = detail::tokens(line);
    if (t.empty()) continue;
    if (block) {
      if (t[0] == "end") {
        detail::expect_arity(t, 1, ln);
        try {
          gens.push_back(block->build());
        } catch (const ParseError& e) {
          throw ParseError(std::string("in block starting at line ") + std::to_string(block_start) + ": " +
                           e.what());
        }
        block.reset();
      } else {
        block->line(t, ln);
      }
    } else if (t[0] == "include") {
      detail::expect_arity(t, 2, ln);
      try {
        gens.push_back(load_ps(base_dir / t[1]));
      } catch (const ParseError& e) {
        throw ParseError(t[1] + ": " + e.what(), ln);
      }
    } else if (t[0] == "begin") {
      if (t.size() < 2 || t[1] != "ps" || t.size() > 3) throw ParseError("expected `begin ps <name>`", ln);
      block.emplace();
      block_start = ln;
    } else {
      throw ParseError("unknown directive `" + t[0] + "`", ln);
    }
  }
  if (block) throw ParseError("unterminated `begin ps` block", block_start);
  return Program(std::move(gens));
}

inline Program load_program(const std::filesystem::path& path) {
  return parse_program(read_file(path), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

// `rf <load> <store>` or `rf <load> bottom`. With `init`, bottom resolves to
// the initializer of the load's address.
inline RfMap parse_rf(const std::string& text, const PartialString& x,
                      const std::map<std::string, Event>* init = nullptr) {
  RfMap rf;
  std::istringstream in(text);
  std::size_t ln = 0;
  for (std::string line; std::getline(in, line);) {
    ++ln;
    auto t = detail::tokens(line);
    if (t.empty()) continue;
    if (t[0] != "rf") throw ParseError("unknown directive `" + t[0] + "`", ln);
    detail::expect_arity(t, 3, ln);
    auto l = x.find(t[1]);
    if (!l) throw ParseError("unknown event `" + t[1] + "`", ln);
    if (rf.reads.contains(*l)) throw ParseError("duplicate rf entry for `" + t[1] + "`", ln);
    if (t[2] == "bottom") {
      if (init) {
        auto addr = x.label(*l).address();
        if (!addr || !init->contains(*addr)) throw ParseError("`" + t[1] + "` is not a memory access", ln);
        rf.set(*l, init->at(*addr));
      } else {
        rf.set(*l, std::nullopt);
      }
    } else {
      auto s = x.find(t[2]);
      if (!s) throw ParseError("unknown event `" + t[2] + "`", ln);
      rf.set(*l, *s);
    }
  }
  return rf;
}

inline std::string print_rf(const PartialString& x, const RfMap& rf) {
  std::ostringstream os;
  for (const auto& [l, s] : rf.reads) os << "rf " << x.name(l) << ' ' << (s ? x.name(*s) : std::string("bottom")) << '\n';
  return os.str();
}

}  // namespace pomset::io

#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pomset/encoder.hpp"
#include "pomset/errors.hpp"
#include "pomset/io.hpp"
#include "pomset/lfp.hpp"
#include "pomset/memory.hpp"
#include "pomset/program.hpp"
#include "pomset/refine.hpp"

namespace pomset::cli {

// Process exit codes.
enum Exit : int { kHolds = 0, kFails = 1, kUsage = 2, kPrecondition = 3 };

// Default directory for `encode` output when -o is not given.
inline constexpr const char* kOutputDirEnv = "POMSET_OUTPUT_DIR";

using json = nlohmann::ordered_json;

// Runs `solver script` and returns the first line it prints ("sat", "unsat", ...).
inline std::string run_solver(const std::string& solver, const std::string& script) {
  auto tmp = std::filesystem::temp_directory_path() /
             ("pomset-" + std::to_string(std::hash<std::string>{}(script)) + ".smt2");
  {
    std::ofstream out(tmp, std::ios::binary);
    out << script;
  }
  const std::string cmd = "\"" + solver + "\" \"" + tmp.string() + "\" 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) throw std::runtime_error("cannot run solver " + solver);
  std::string output;
  std::array<char, 256> buf{};
  while (fgets(buf.data(), buf.size(), pipe.get())) output += buf.data();
  pipe.reset();
  std::filesystem::remove(tmp);
  auto end = output.find_first_of("\r\n");
  return output.substr(0, end);
}

namespace detail {

inline json events_json(const PartialString& x, const std::vector<Event>& ev) {
  json a = json::array();
  for (Event e : ev) a.push_back(x.name(e));
  return a;
}

inline std::string join_names(const PartialString& x, const std::vector<Event>& ev) {
  std::string s;
  for (std::size_t i = 0; i < ev.size(); ++i) s += (i ? "," : "") + x.name(ev[i]);
  return s;
}

inline void print_strings(std::ostream& out, const std::vector<PartialString>& strings) {
  for (std::size_t i = 0; i < strings.size(); ++i) {
    out << "begin ps s" << i << '\n' << io::print_ps(strings[i]) << "end\n";
  }
}

inline json census_json(const Census& c) {
  json j;
  json counts;
  for (Tag t : kAllTags) counts[to_string(t)] = c.count(t);
  j["counts"] = counts;
  j["total"] = c.total;
  j["int_vars"] = c.int_vars;
  j["bool_vars"] = c.bool_vars;
  j["predicted"] = {{"fr", c.predicted_fr}, {"wrc", c.predicted_wrc}, {"wc", c.predicted_wc}};
  return j;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partial-string refinement, weak-memory axioms and partial-order encodings", "pomset"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable report");

  std::string path_a, path_b, method = "backtrack", join_name = "seq", encoding = "cubic", format = "smt2", output,
                              solver, dimacs;
  bool witness = false, init = false, no_init = false;
  std::size_t max_events = 8;

  auto* refine_cmd = app.add_subcommand("refine", "Decide x ⊑ y for two partial strings");
  refine_cmd->add_option("x", path_a)->required();
  refine_cmd->add_option("y", path_b)->required();
  refine_cmd->add_option("--method", method)->check(CLI::IsMember({"backtrack", "sat"}));
  refine_cmd->add_flag("--witness", witness, "Print the morphism y -> x");
  refine_cmd->add_option("--dimacs", dimacs, "Write the CNF instance (and a .map sidecar)");

  auto* prog_cmd = app.add_subcommand("prog-refine", "Decide X ⊆ Y for two programs");
  prog_cmd->add_option("X", path_a)->required();
  prog_cmd->add_option("Y", path_b)->required();

  auto* lfp_cmd = app.add_subcommand("lfp-refine", "Decide X* ⊆ Y* by bounded unfolding");
  lfp_cmd->add_option("X", path_a)->required();
  lfp_cmd->add_option("Y", path_b)->required();
  lfp_cmd->add_option("--join", join_name)->check(CLI::IsMember({"seq", "par"}));

  auto* closure_cmd = app.add_subcommand("closure", "Enumerate the downward closure of a program");
  closure_cmd->add_option("X", path_a)->required();
  closure_cmd->add_option("--max-events", max_events);

  auto* axioms_cmd = app.add_subcommand("axioms", "Check sw/wc/fr and read consistency");
  axioms_cmd->add_option("x", path_a)->required();
  axioms_cmd->add_option("rf", path_b)->required();
  axioms_cmd->add_flag("--init", init, "Prepend one initializing release per address");

  auto* restrict_cmd = app.add_subcommand("restrict", "SC-relaxed strings of a program's closure");
  restrict_cmd->add_option("X", path_a)->required();
  restrict_cmd->add_option("--max-events", max_events);

  auto* races_cmd = app.add_subcommand("races", "Report unordered conflicting non-synchronizing accesses");
  races_cmd->add_option("x", path_a)->required();

  auto* encode_cmd = app.add_subcommand("encode", "Emit the cubic or quadratic encoding");
  encode_cmd->add_option("skeleton", path_a)->required();
  encode_cmd->add_option("--encoding", encoding)->check(CLI::IsMember({"cubic", "quadratic"}));
  encode_cmd->add_option("--format", format)->check(CLI::IsMember({"smt2", "text"}));
  encode_cmd->add_option("-o,--output", output);
  encode_cmd->add_flag("--no-init", no_init, "Do not add initializing releases");
  encode_cmd->add_option("--solver", solver, "SMT-LIB2 solver executable to run on the script");

  auto* equisat_cmd = app.add_subcommand("equisat", "Check that both encodings agree on satisfiability");
  equisat_cmd->add_option("skeleton", path_a)->required();
  equisat_cmd->add_flag("--no-init", no_init);
  equisat_cmd->add_option("--solver", solver, "Use an external solver instead of the built-in search");

  auto* stats_cmd = app.add_subcommand("stats", "Constraint census of both encodings");
  stats_cmd->add_option("skeleton", path_a)->required();
  stats_cmd->add_flag("--no-init", no_init);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  const Join join = join_name == "par" ? Join::par : Join::seq;

  try {
    if (refine_cmd->parsed()) {
      const auto x = io::load_ps(path_a), y = io::load_ps(path_b);
      const auto m = method == "sat" ? RefineMethod::sat : RefineMethod::backtrack;
      const auto f = find_morphism(x, y, m);
      if (!dimacs.empty()) {
        const auto inst = emit_cnf(x, y);
        std::ofstream(dimacs) << inst.dimacs();
        std::ofstream(dimacs + ".map") << inst.variable_map(x, y);
      }
      if (as_json) {
        json j{{"refines", f.has_value()}, {"method", method}};
        if (f && witness) {
          json w;
          for (Event e = 0; e < y.size(); ++e) w[y.name(e)] = x.name((*f)(e));
          j["witness"] = w;
        }
        out << j.dump(2) << '\n';
      } else {
        out << (f ? "refines" : "does not refine") << '\n';
        if (f && witness)
          for (Event e = 0; e < y.size(); ++e) out << "  " << y.name(e) << " -> " << x.name((*f)(e)) << '\n';
      }
      return f ? kHolds : kFails;
    }

    if (prog_cmd->parsed()) {
      const bool holds = prog_refines(io::load_program(path_a), io::load_program(path_b));
      if (as_json)
        out << json{{"refines", holds}}.dump(2) << '\n';
      else
        out << (holds ? "refines" : "does not refine") << '\n';
      return holds ? kHolds : kFails;
    }

    if (lfp_cmd->parsed()) {
      const auto q = lfp_query(io::load_program(path_a), io::load_program(path_b), join);
      if (as_json)
        out << json{{"n", q.bound}, {"l_x", q.largest_x}, {"l_y", q.smallest_y}, {"join", join_name},
                    {"x_is_zero", q.x_is_zero}, {"holds", q.holds}}
                   .dump(2)
            << '\n';
      else
        out << "n=" << q.bound << " l_x=" << q.largest_x << " l_y=" << q.smallest_y << " join=" << join_name
            << (q.x_is_zero ? " (X = 0)" : "") << '\n'
            << (q.holds ? "holds" : "does not hold") << '\n';
      return q.holds ? kHolds : kFails;
    }

    if (closure_cmd->parsed() || restrict_cmd->parsed()) {
      const auto prog = io::load_program(path_a);
      const auto strings = closure_cmd->parsed() ? enumerate_closure(prog, max_events)
                                                 : sc_relaxed_restrict(prog, max_events);
      if (as_json) {
        json a = json::array();
        for (const auto& s : strings) a.push_back(io::print_ps(s));
        out << json{{"count", strings.size()}, {"strings", a}}.dump(2) << '\n';
      } else {
        out << "# " << strings.size() << " strings up to isomorphism\n";
        detail::print_strings(out, strings);
      }
      return kHolds;
    }

    if (axioms_cmd->parsed()) {
      auto x = io::load_ps(path_a);
      std::optional<Initialized> with_init;
      if (init) {
        with_init = with_initializers(x);
        x = with_init->string;
      }
      const auto rf = io::parse_rf(io::read_file(path_b), x, with_init ? &with_init->init : nullptr);
      const auto r = check_axioms(x, rf);
      const bool t3 = theorem3_equivalence(x, rf);
      if (as_json) {
        json w = json::array();
        for (const auto& v : r.witnesses) w.push_back({{"axiom", v.axiom}, {"events", detail::events_json(x, v.events)}});
        out << json{{"sw", r.sw},
                    {"wc", r.wc},
                    {"fr", r.fr},
                    {"weak_rc", r.weak_rc},
                    {"strong_rc", r.strong_rc},
                    {"sc_relaxed", r.sc_relaxed},
                    {"equivalence", t3},
                    {"witnesses", w}}
                   .dump(2)
            << '\n';
      } else {
        auto flag = [](bool b) { return b ? "yes" : "no"; };
        out << "sw=" << flag(r.sw) << " wc=" << flag(r.wc) << " fr=" << flag(r.fr) << " weak_rc=" << flag(r.weak_rc)
            << " strong_rc=" << flag(r.strong_rc) << " sc_relaxed=" << flag(r.sc_relaxed) << '\n';
        for (const auto& v : r.witnesses) out << "  violation " << v.axiom << ": " << detail::join_names(x, v.events) << '\n';
      }
      return r.three_axioms() ? kHolds : kFails;
    }

    if (races_cmd->parsed()) {
      const auto x = io::load_ps(path_a);
      const auto races = find_races(x);
      if (as_json) {
        json a = json::array();
        for (const auto& [p, q] : races) a.push_back({x.name(p), x.name(q)});
        out << json{{"races", a}}.dump(2) << '\n';
      } else {
        for (const auto& [p, q] : races) out << "race " << x.name(p) << ' ' << x.name(q) << '\n';
        if (races.empty()) out << "no races\n";
      }
      return races.empty() ? kHolds : kFails;
    }

    if (encode_cmd->parsed()) {
      const auto in = EncodingInput::make(io::load_ps(path_a), !no_init);
      const auto kind = encoding == "quadratic" ? EncodingKind::quadratic : EncodingKind::cubic;
      const auto fmt = format == "text" ? EmitFormat::text : EmitFormat::smt2;
      const auto f = encode(in, kind);
      const std::string script = emit(f, fmt);
      std::string target = output;
      if (target.empty()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
          target = (std::filesystem::path(dir) / (std::filesystem::path(path_a).stem().string() + "." + encoding +
                                                   (fmt == EmitFormat::smt2 ? ".smt2" : ".txt")))
                       .string();
        }
      }
      if (target.empty()) {
        out << script;
      } else {
        std::ofstream file(target, std::ios::binary);
        if (!file) throw ParseError("cannot write " + target);
        file << script;
      }
      if (!solver.empty()) {
        if (fmt != EmitFormat::smt2) throw CLI::ValidationError("--solver requires --format smt2");
        const std::string verdict = run_solver(solver, emit(f, EmitFormat::smt2));
        (target.empty() ? err : out) << verdict << '\n';
        if (verdict == "sat") return kHolds;
        if (verdict == "unsat") return kFails;
        err << "unexpected solver output\n";
        return kUsage;
      }
      return kHolds;
    }

    if (equisat_cmd->parsed()) {
      const auto in = EncodingInput::make(io::load_ps(path_a), !no_init);
      EquisatResult r;
      if (solver.empty()) {
        r = equisat_detail(in);
      } else {
        r.cubic_sat = run_solver(solver, emit(encode_cubic(in), EmitFormat::smt2)) == "sat";
        r.quadratic_sat = run_solver(solver, emit(encode_quadratic(in), EmitFormat::smt2)) == "sat";
      }
      if (as_json)
        out << json{{"cubic_sat", r.cubic_sat}, {"quadratic_sat", r.quadratic_sat}, {"agree", r.agree()}}.dump(2)
            << '\n';
      else
        out << "cubic=" << (r.cubic_sat ? "sat" : "unsat") << " quadratic=" << (r.quadratic_sat ? "sat" : "unsat")
            << (r.agree() ? " agree" : " DISAGREE") << '\n';
      return r.agree() ? kHolds : kFails;
    }

    if (stats_cmd->parsed()) {
      const auto in = EncodingInput::make(io::load_ps(path_a), !no_init);
      const auto cubic = count_constraints(encode_cubic(in));
      const auto quad = count_constraints(encode_quadratic(in));
      if (as_json) {
        out << json{{"cubic", detail::census_json(cubic)}, {"quadratic", detail::census_json(quad)}}.dump(2) << '\n';
      } else {
        for (const auto& [name, c] : {std::pair{"cubic", cubic}, std::pair{"quadratic", quad}}) {
          out << name << ":";
          for (Tag t : kAllTags) out << ' ' << to_string(t) << '=' << c.count(t);
          out << " total=" << c.total << '\n';
        }
        out << "predicted: fr=" << cubic.predicted_fr << " wrc=" << cubic.predicted_wrc
            << " wc=" << cubic.predicted_wc << '\n';
      }
      const bool ok = cubic.matches_prediction(EncodingKind::cubic) && quad.matches_prediction(EncodingKind::quadratic);
      return ok ? kHolds : kFails;
    }
  } catch (const PreconditionViolated& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const BoundExceeded& e) {
    err << "bound exceeded: " << e.what() << '\n';
    return kPrecondition;
  } catch (const MalformedRf& e) {
    err << "malformed rf: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), out, err);
}

}  // namespace pomset::cli

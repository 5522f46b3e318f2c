#include "modalkit/cli.hpp"

#include <algorithm>
#include <iostream>
#include <type_traits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modalkit/correspondence.hpp"
#include "modalkit/io.hpp"
#include "modalkit/parser.hpp"
#include "modalkit/search.hpp"
#include "modalkit/semantics.hpp"

namespace modalkit {

namespace {

struct CheckArgs {
  std::string model;
  std::string formula;
  std::string world;
  std::vector<std::string> env;
  bool total = false;
};

struct FrameValidArgs {
  std::string frame;
  std::string scheme;
  bool total = false;
};

struct CounterArgs {
  std::string conclusion;
  std::vector<std::string> premises;
  std::vector<std::string> scheme_premises;
  std::vector<std::string> require;
  std::size_t max_worlds = 3;
  std::size_t max_domain = 0;
  std::string mode = "varying";
  std::string reading = "object";
  bool prune = false;
};

struct Globals {
  bool json = false;
  std::size_t jobs = 1;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

Formula parse_flag(const std::string& text, const char* flag) {
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(e.span(), std::string(flag) + " \"" + text + "\": " + e.detail());
  }
}

Frame with_total_access(const Frame& fr) { return Frame::total(fr.worlds()); }

std::string set_text(const Frame& fr, WorldSet s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t w = 0; w < fr.size(); ++w) {
    if (!((s >> w) & 1U)) continue;
    if (!first) out += ", ";
    out += fr.world(w);
    first = false;
  }
  return out + "}";
}

std::string instantiation_text(const Frame& fr, const Instantiation& inst) {
  std::string out;
  for (const auto& [name, set] : inst) {
    if (!out.empty()) out += ", ";
    out += name + " = " + set_text(fr, set);
  }
  return out;
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// --- check -----------------------------------------------------------------

int cmd_check(const CheckArgs& a, const Globals& g, std::ostream& out) {
  AnyModel model = model_from_json(read_json_file(a.model));
  const Formula f = parse_flag(a.formula, "--formula");
  Env env;
  for (const auto& binding : a.env) {
    const auto eq = binding.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == binding.size()) {
      throw UsageError("--env expects var=individual, got '" + binding + "'");
    }
    env[binding.substr(0, eq)] = binding.substr(eq + 1);
  }
  if (a.total) {
    model = std::visit(
        [](const auto& m) -> AnyModel {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, PropModel>) {
            return PropModel(with_total_access(m.frame()), m.valuation());
          } else {
            const DomainFrame df(with_total_access(m.frame()), m.dframe().domain(), m.dframe().existence());
            return FoModel(df, m.mode(), m.valuation(), m.flexible(), m.rigid(), m.constants());
          }
        },
        model);
  }
  const Frame& fr = std::visit([](const auto& m) -> const Frame& { return m.frame(); }, model);
  const bool has_schemes = !scheme_vars(f).empty();

  auto truth_set = [&]() -> WorldSet {
    return std::visit(
        [&](const auto& m) -> WorldSet {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, PropModel>) {
            if (!env.empty()) throw UsageError("--env needs a first-order model");
            return extension(m, f);
          } else {
            return extension(m, f, env);
          }
        },
        model);
  };

  if (!a.world.empty()) {
    auto w = fr.index_of(a.world);
    if (!w) throw UsageError("--world: unknown world '" + a.world + "'");
    const bool value = (truth_set() >> *w) & 1U;
    if (g.json) {
      emit_json(out, json{{"formula", render(f)}, {"world", a.world}, {"value", value}});
    } else {
      out << (value ? "true" : "false") << "\n";
    }
    return value ? kHolds : kRefuted;
  }

  Verdict v;
  if (has_schemes) {
    v = std::visit([&](const auto& m) { return scheme_valid(m, f); }, model);
  } else {
    const WorldSet failing = fr.all() & ~truth_set();
    if (failing) v = Verdict::fail(Witness{static_cast<std::size_t>(__builtin_ctzll(failing)), env, {}, {}});
  }
  if (g.json) {
    json j = to_json(v, fr);
    j["formula"] = render(f);
    emit_json(out, j);
  } else if (v.holds) {
    out << "valid\n";
  } else {
    out << "invalid at " << fr.world(v.witness->world);
    if (!v.witness->instantiation.empty()) out << " with " << instantiation_text(fr, v.witness->instantiation);
    out << "\n";
  }
  return v.holds ? kHolds : kRefuted;
}

// --- frame-valid / correspond / barcan ------------------------------------------

int cmd_frame_valid(const FrameValidArgs& a, const Globals& g, std::ostream& out) {
  Frame fr = frame_from_json(read_json_file(a.frame));
  if (a.total) fr = with_total_access(fr);
  const Formula scheme = parse_flag(a.scheme, "--scheme");
  const Verdict v = frame_valid(fr, scheme);
  if (g.json) {
    json j = to_json(v, fr);
    j["scheme"] = render(scheme);
    emit_json(out, j);
  } else if (v.holds) {
    out << "frame-valid: " << render(scheme) << "\n";
  } else {
    out << "refuted at " << fr.world(v.witness->world) << " by " << instantiation_text(fr, v.witness->instantiation)
        << "\n";
  }
  return v.holds ? kHolds : kRefuted;
}

int cmd_correspond(const FrameValidArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  Frame fr = frame_from_json(read_json_file(a.frame));
  if (a.total) fr = with_total_access(fr);
  const AxiomReport r = axiom_report(fr);
  if (g.json) {
    emit_json(out, to_json(r, fr));
  } else {
    out << "axiom  holds  property     consistent  refutation\n";
    for (const AxiomCheck& c : r.axioms) {
      std::string name(to_string(c.id));
      std::string prop = "-";
      if (auto p = corresponding_property(c.id)) prop = std::string(to_string(*p)) + (*c.property ? "+" : "-");
      out << name << std::string(7 - name.size(), ' ') << (c.verdict.holds ? "yes    " : "no     ") << prop
          << std::string(prop.size() < 13 ? 13 - prop.size() : 1, ' ') << (c.consistent ? "yes         " : "NO          ");
      if (c.verdict.witness) {
        out << "at " << fr.world(c.verdict.witness->world) << " with "
            << instantiation_text(fr, c.verdict.witness->instantiation);
      }
      out << "\n";
    }
    out << "equivalence: " << (r.properties.at(FrameProperty::Equivalence) ? "yes" : "no") << "\n";
  }
  if (!r.consistent()) err << "error: axiom/frame-property correspondence violated\n";
  const bool all_hold =
      std::all_of(r.axioms.begin(), r.axioms.end(), [](const AxiomCheck& c) { return c.verdict.holds; });
  return all_hold ? kHolds : kRefuted;
}

std::string readings_text(const ReadingReport& r) {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  return std::string("equal=") + yn(r.equal) + " iff=" + yn(r.iff) + " meta=" + yn(r.meta) + " object=" + yn(r.object);
}

int cmd_barcan(const std::string& path, const Globals& g, std::ostream& out, std::ostream& err) {
  const DomainFrame df = dframe_from_json(read_json_file(path));
  const BarcanReport r = barcan_report(df);
  if (g.json) {
    emit_json(out, to_json(r, df));
  } else {
    auto line = [&](const char* name, const Verdict& v, bool prop, const char* prop_name, bool consistent,
                    const ReadingReport& readings) {
      out << name << ": " << (v.holds ? "holds" : "fails") << "; " << prop_name << ": " << (prop ? "yes" : "no")
          << "; consistent: " << (consistent ? "yes" : "NO") << "; readings: " << readings_text(readings);
      if (v.witness) out << "; refuted at " << df.frame().world(v.witness->world);
      out << "\n";
    };
    line("BF", r.bf, r.monotonicity.nonincreasing, "nonincreasing", r.bf_consistent, r.bf_readings);
    line("CBF", r.cbf, r.monotonicity.nondecreasing, "nondecreasing", r.cbf_consistent, r.cbf_readings);
    out << "constant domains: " << (r.monotonicity.constant ? "yes" : "no")
        << "; symmetric: " << (r.symmetric ? "yes" : "no")
        << "; symmetric agreement: " << (r.symmetric_consistent ? "yes" : "NO") << "\n";
  }
  if (!r.consistent()) err << "error: Barcan/domain correspondence violated\n";
  return r.bf.holds && r.cbf.holds ? kHolds : kRefuted;
}

// --- countermodel ----------------------------------------------------------------

int cmd_countermodel(const CounterArgs& a, const Globals& g, std::ostream& out) {
  SearchSpec spec;
  spec.max_worlds = a.max_worlds;
  spec.max_domain = a.max_domain;
  spec.conclusion = parse_flag(a.conclusion, "--conclusion");
  for (const auto& p : a.premises) spec.premise_formulas.push_back(parse_flag(p, "--premise"));
  for (const auto& p : a.scheme_premises) spec.premise_schemes.push_back(parse_flag(p, "--scheme-premise"));
  for (const auto& group : a.require) {
    std::size_t start = 0;
    while (start <= group.size()) {
      const auto comma = group.find(',', start);
      const std::string name = group.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (name != "none" && !name.empty()) {
        auto prop = frame_property_from_string(name);
        if (!prop) throw UsageError("--require: unknown frame property '" + name + "'");
        spec.frame_constraints.push_back(*prop);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  auto mode = domain_mode_from_string(a.mode);
  if (!mode) throw UsageError("--mode expects constant or varying");
  spec.mode = *mode;
  auto reading = reading_from_string(a.reading);
  if (!reading) throw UsageError("--reading expects object or meta");
  spec.reading = *reading;

  bool first_order = spec.max_domain > 0;
  for (const Formula* f : {&*spec.conclusion}) first_order = first_order || !is_propositional(*f);
  for (const auto& f : spec.premise_formulas) first_order = first_order || !is_propositional(f);
  for (const auto& f : spec.premise_schemes) first_order = first_order || !is_propositional(f);
  if (first_order && spec.max_domain == 0) throw UsageError("first-order formulas need --max-domain >= 1");

  SearchOptions options = options_from_environment();
  options.jobs = g.jobs;
  options.prune_isomorphic = a.prune;
  const auto found = first_order ? find_fo_countermodel(spec, options) : find_countermodel(spec, options);
  if (!found) {
    if (g.json) {
      emit_json(out, json{{"countermodel", nullptr}, {"searched_up_to", spec.max_worlds}});
    } else {
      out << "no countermodel up to " << spec.max_worlds << " worlds\n";
    }
    return kHolds;
  }
  const json doc = to_json(*found);
  if (!g.json) {
    out << "countermodel with " << found->frame().size() << " world(s): " << found->certificate.conclusion
        << " fails at " << found->frame().world(found->certificate.world) << "\n";
  }
  emit_json(out, doc);
  return kRefuted;
}

// --- render ------------------------------------------------------------------------

int cmd_render(const std::string& text, const std::string& format, std::ostream& out) {
  const Formula f = parse_flag(text, "--formula");
  Format fmt = Format::Ascii;
  if (format == "unicode") {
    fmt = Format::Unicode;
  } else if (format == "latex") {
    fmt = Format::Latex;
  } else if (format != "ascii") {
    throw UsageError("--format expects ascii, unicode or latex");
  }
  out << render(f, fmt) << "\n";
  return kHolds;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& what, const Globals& g,
                  std::ostream& out) {
  if (g.json) {
    emit_json(out, json{{"error", kind}, {"message", what}});
  }
  err << kind << ": " << what << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"modalkit: propositional and quantified modal logic over finite Kripke models"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Machine-readable output on stdout");
  app.add_option("--jobs", g.jobs, "Worker threads for search")->check(CLI::PositiveNumber);

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Evaluate a formula at a world, or check its validity");
  c_check->add_option("--model", check.model, "Model JSON file")->required();
  c_check->add_option("--formula", check.formula, "Formula text")->required();
  c_check->add_option("--world", check.world, "Evaluate at this world instead of checking validity");
  c_check->add_option("--env", check.env, "Bind a free variable: var=individual");
  c_check->add_flag("--total", check.total, "Replace the accessibility relation by the total relation");
  c_check->add_flag("--json", g.json, "Machine-readable output");

  FrameValidArgs fv;
  auto* c_fv = app.add_subcommand("frame-valid", "Check a scheme against every valuation of a frame");
  c_fv->add_option("--frame", fv.frame, "Frame JSON file")->required();
  c_fv->add_option("--scheme", fv.scheme, "Scheme text")->required();
  c_fv->add_flag("--total", fv.total, "Replace the accessibility relation by the total relation");
  c_fv->add_flag("--json", g.json, "Machine-readable output");

  FrameValidArgs corr;
  auto* c_corr = app.add_subcommand("correspond", "Axiom / frame-property correspondence report");
  c_corr->add_option("--frame", corr.frame, "Frame JSON file")->required();
  c_corr->add_flag("--total", corr.total, "Replace the accessibility relation by the total relation");
  c_corr->add_flag("--json", g.json, "Machine-readable output");

  std::string dframe;
  auto* c_barcan = app.add_subcommand("barcan", "Barcan / domain-monotonicity report");
  c_barcan->add_option("--dframe", dframe, "Domain frame JSON file")->required();
  c_barcan->add_flag("--json", g.json, "Machine-readable output");

  CounterArgs cm;
  auto* c_cm = app.add_subcommand("countermodel", "Search for a countermodel to an argument");
  c_cm->add_option("--conclusion", cm.conclusion, "Conclusion formula")->required();
  c_cm->add_option("--premise", cm.premises, "Premise formula (repeatable)");
  c_cm->add_option("--scheme-premise", cm.scheme_premises, "Premise scheme (repeatable)");
  c_cm->add_option("--require", cm.require, "Frame properties, comma separated");
  c_cm->add_option("--max-worlds", cm.max_worlds, "Largest frame to search")->check(CLI::PositiveNumber);
  c_cm->add_option("--max-domain", cm.max_domain, "Largest domain (0 = propositional)");
  c_cm->add_option("--mode", cm.mode, "constant or varying");
  c_cm->add_option("--reading", cm.reading, "object or meta");
  c_cm->add_flag("--prune", cm.prune, "Skip frames isomorphic to an earlier one");
  c_cm->add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  c_cm->add_flag("--json", g.json, "Machine-readable output");

  std::string render_text;
  std::string render_format = "ascii";
  auto* c_render = app.add_subcommand("render", "Print a formula as ascii, unicode or latex");
  c_render->add_option("--formula", render_text, "Formula text")->required();
  c_render->add_option("--format", render_format, "ascii, unicode or latex");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kUsageError;
  }

  try {
    if (c_check->parsed()) return cmd_check(check, g, out);
    if (c_fv->parsed()) return cmd_frame_valid(fv, g, out);
    if (c_corr->parsed()) return cmd_correspond(corr, g, out, err);
    if (c_barcan->parsed()) return cmd_barcan(dframe, g, out, err);
    if (c_cm->parsed()) return cmd_countermodel(cm, g, out);
    if (c_render->parsed()) return cmd_render(render_text, render_format, out);
  } catch (const ParseError& e) {
    report_error(err, "parse error", e.what(), g, out);
    return kUsageError;
  } catch (const ModelError& e) {
    report_error(err, "model error", e.what(), g, out);
    return kUsageError;
  } catch (const EvalError& e) {
    report_error(err, "evaluation error", std::string(to_string(e.kind())) + ": " + e.what(), g, out);
    return kUsageError;
  } catch (const ResourceLimit& e) {
    report_error(err, "resource limit", e.what(), g, out);
    return kResourceLimit;
  } catch (const Error& e) {
    report_error(err, "error", e.what(), g, out);
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace modalkit

#include "modalkit/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace modalkit {

namespace {

const std::set<std::string> kModelKeys{"worlds",         "access",      "valuation",    "domain",
                                       "mode",           "exists_in",   "flexible_preds", "rigid_preds",
                                       "rigid_consts",   "certificate"};

std::string key_path(const std::string& base, const std::string& key) { return base + "." + key; }
std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ModelError(path, "expected an object");
  return j;
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ModelError(path, "expected an array");
  return j;
}

std::string require_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ModelError(path, "expected a string");
  return j.get<std::string>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ModelError(key_path(path, key), "unknown key");
  }
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(require_string(j[i], index_path(path, i)));
  return out;
}

std::size_t world_index(const Frame& fr, const json& j, const std::string& path) {
  const std::string name = require_string(j, path);
  auto idx = fr.index_of(name);
  if (!idx) throw ModelError(path, "unknown world '" + name + "'");
  return *idx;
}

std::size_t individual_index(const std::vector<std::string>& domain, const json& j, const std::string& path) {
  const std::string name = require_string(j, path);
  for (std::size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == name) return i;
  throw ModelError(path, "unknown individual '" + name + "'");
}

WorldSet world_set(const Frame& fr, const json& j, const std::string& path) {
  require_array(j, path);
  WorldSet out = 0;
  for (std::size_t i = 0; i < j.size(); ++i) out |= bit(world_index(fr, j[i], index_path(path, i)));
  return out;
}

Tuple tuple_of(const std::vector<std::string>& domain, const json& j, std::size_t arity, const std::string& path) {
  require_array(j, path);
  if (j.size() != arity) {
    throw ModelError(path, "tuple has " + std::to_string(j.size()) + " elements, arity is " + std::to_string(arity));
  }
  Tuple t;
  for (std::size_t i = 0; i < j.size(); ++i) t.push_back(individual_index(domain, j[i], index_path(path, i)));
  return t;
}

std::size_t arity_of(const json& j, const std::string& path) {
  if (!j.contains("arity")) throw ModelError(key_path(path, "arity"), "missing");
  const json& a = j["arity"];
  if (!a.is_number_unsigned() || a.get<std::size_t>() == 0) {
    throw ModelError(key_path(path, "arity"), "expected a positive integer");
  }
  return a.get<std::size_t>();
}

Frame parse_frame(const json& root) {
  require_object(root, "$");
  if (!root.contains("worlds")) throw ModelError("$.worlds", "missing");
  auto worlds = string_list(root["worlds"], "$.worlds");
  if (worlds.empty()) throw ModelError("$.worlds", "a frame needs at least one world");
  std::vector<std::pair<std::string, std::string>> access;
  if (root.contains("access")) {
    const json& a = require_array(root["access"], "$.access");
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string at = index_path("$.access", k);
      require_array(a[k], at);
      if (a[k].size() != 2) throw ModelError(at, "an edge is a pair of world names");
      access.emplace_back(require_string(a[k][0], index_path(at, 0)), require_string(a[k][1], index_path(at, 1)));
    }
  }
  return Frame(std::move(worlds), access);
}

Valuation parse_valuation(const json& root, const Frame& fr) {
  Valuation val;
  if (!root.contains("valuation")) return val;
  const json& v = require_object(root["valuation"], "$.valuation");
  for (const auto& [atom, worlds] : v.items()) {
    const std::string at = key_path("$.valuation", atom);
    if (!is_identifier(atom) || is_keyword(atom) || !(atom[0] >= 'a' && atom[0] <= 'z')) {
      throw ModelError(at, "proposition names must be lowercase-initial identifiers");
    }
    val[atom] = world_set(fr, worlds, at);
  }
  return val;
}

bool is_first_order(const json& root) {
  for (const char* key : {"domain", "mode", "exists_in", "flexible_preds", "rigid_preds", "rigid_consts"})
    if (root.contains(key)) return true;
  return false;
}

DomainMode parse_mode(const json& root) {
  if (!root.contains("mode")) return root.contains("exists_in") ? DomainMode::Varying : DomainMode::Constant;
  const std::string text = require_string(root["mode"], "$.mode");
  auto mode = domain_mode_from_string(text);
  if (!mode) throw ModelError("$.mode", "expected \"constant\" or \"varying\"");
  return *mode;
}

DomainFrame parse_dframe(const json& root, Frame fr, DomainMode mode) {
  if (!root.contains("domain")) throw ModelError("$.domain", "missing");
  auto domain = string_list(root["domain"], "$.domain");
  if (domain.empty()) throw ModelError("$.domain", "the quantification domain must be nonempty");
  if (domain.size() > kMaxDomain) throw ModelError("$.domain", "too many individuals");
  const DomainSet everyone = all_of(domain.size());
  std::vector<DomainSet> exists(fr.size(), everyone);
  if (root.contains("exists_in")) {
    const json& e = require_object(root["exists_in"], "$.exists_in");
    std::vector<bool> seen(fr.size(), false);
    for (const auto& [world, members] : e.items()) {
      const std::string at = key_path("$.exists_in", world);
      auto w = fr.index_of(world);
      if (!w) throw ModelError(at, "unknown world '" + world + "'");
      require_array(members, at);
      DomainSet set = 0;
      for (std::size_t i = 0; i < members.size(); ++i)
        set |= bit(individual_index(domain, members[i], index_path(at, i)));
      exists[*w] = set;
      seen[*w] = true;
    }
    for (std::size_t w = 0; w < fr.size(); ++w) {
      if (!seen[w]) throw ModelError(key_path("$.exists_in", fr.world(w)), "missing existence set");
    }
  } else if (mode == DomainMode::Varying) {
    throw ModelError("$.exists_in", "varying mode needs an existence set for every world");
  }
  return DomainFrame(std::move(fr), std::move(domain), std::move(exists));
}

FoModel parse_fo_model(const json& root, Frame fr) {
  const DomainMode mode = parse_mode(root);
  const Valuation val = parse_valuation(root, fr);
  DomainFrame df = parse_dframe(root, fr, mode);
  const auto& domain = df.domain();

  std::map<std::string, FlexiblePred> flexible;
  if (root.contains("flexible_preds")) {
    const json& preds = require_object(root["flexible_preds"], "$.flexible_preds");
    for (const auto& [name, spec] : preds.items()) {
      const std::string at = key_path("$.flexible_preds", name);
      require_object(spec, at);
      reject_unknown(spec, {"arity", "extension"}, at);
      FlexiblePred p;
      p.arity = arity_of(spec, at);
      if (spec.contains("extension")) {
        const std::string ext_at = key_path(at, "extension");
        const json& ext = require_object(spec["extension"], ext_at);
        for (const auto& [world, tuples] : ext.items()) {
          const std::string w_at = key_path(ext_at, world);
          auto w = fr.index_of(world);
          if (!w) throw ModelError(w_at, "unknown world '" + world + "'");
          require_array(tuples, w_at);
          for (std::size_t i = 0; i < tuples.size(); ++i)
            p.extension[tuple_of(domain, tuples[i], p.arity, index_path(w_at, i))] |= bit(*w);
        }
      }
      flexible.emplace(name, std::move(p));
    }
  }
  std::map<std::string, RigidPred> rigid;
  if (root.contains("rigid_preds")) {
    const json& preds = require_object(root["rigid_preds"], "$.rigid_preds");
    for (const auto& [name, spec] : preds.items()) {
      const std::string at = key_path("$.rigid_preds", name);
      require_object(spec, at);
      reject_unknown(spec, {"arity", "extension"}, at);
      RigidPred p;
      p.arity = arity_of(spec, at);
      if (spec.contains("extension")) {
        const std::string ext_at = key_path(at, "extension");
        const json& ext = require_array(spec["extension"], ext_at);
        for (std::size_t i = 0; i < ext.size(); ++i)
          p.extension.insert(tuple_of(domain, ext[i], p.arity, index_path(ext_at, i)));
      }
      rigid.emplace(name, std::move(p));
    }
  }
  std::map<std::string, std::size_t> consts;
  if (root.contains("rigid_consts")) {
    const json& cs = require_object(root["rigid_consts"], "$.rigid_consts");
    for (const auto& [name, value] : cs.items())
      consts[name] = individual_index(domain, value, key_path("$.rigid_consts", name));
  }
  return FoModel(std::move(df), mode, val, std::move(flexible), std::move(rigid), std::move(consts));
}

json world_names(const Frame& fr, WorldSet s) {
  json out = json::array();
  for (std::size_t w = 0; w < fr.size(); ++w)
    if ((s >> w) & 1U) out.push_back(fr.world(w));
  return out;
}

json instantiation_json(const Frame& fr, const Instantiation& inst) {
  json out = json::object();
  for (const auto& [name, set] : inst) out[name] = world_names(fr, set);
  return out;
}

json tuple_json(const std::vector<std::string>& domain, const Tuple& t) {
  json out = json::array();
  for (std::size_t e : t) out.push_back(domain.at(e));
  return out;
}

json flexible_json(const Frame& fr, const std::vector<std::string>& domain, const FlexiblePred& p) {
  json ext = json::object();
  for (const auto& w : fr.worlds()) ext[w] = json::array();
  for (const auto& [t, worlds] : p.extension)
    for (std::size_t w = 0; w < fr.size(); ++w)
      if ((worlds >> w) & 1U) ext[fr.world(w)].push_back(tuple_json(domain, t));
  return json{{"arity", p.arity}, {"extension", ext}};
}

}  // namespace

AnyModel model_from_json(const json& j) {
  require_object(j, "$");
  reject_unknown(j, kModelKeys, "$");
  Frame fr = parse_frame(j);
  if (is_first_order(j)) return parse_fo_model(j, std::move(fr));
  Valuation val = parse_valuation(j, fr);
  return PropModel(std::move(fr), std::move(val));
}

Frame frame_from_json(const json& j) {
  return std::visit([](const auto& m) { return m.frame(); }, model_from_json(j));
}

DomainFrame dframe_from_json(const json& j) {
  AnyModel m = model_from_json(j);
  if (!std::holds_alternative<FoModel>(m)) throw ModelError("$.domain", "missing");
  return std::get<FoModel>(m).dframe();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("$", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ModelError("$", std::string("malformed JSON: ") + e.what());
  }
}

json to_json(const Frame& fr) {
  json access = json::array();
  for (const auto& [from, to] : fr.edges()) access.push_back({fr.world(from), fr.world(to)});
  return json{{"worlds", fr.worlds()}, {"access", access}};
}

json to_json(const PropModel& m) {
  json out = to_json(m.frame());
  json val = json::object();
  for (const auto& [atom, set] : m.valuation()) val[atom] = world_names(m.frame(), set);
  out["valuation"] = val;
  return out;
}

json to_json(const DomainFrame& df) {
  json out = to_json(df.frame());
  out["domain"] = df.domain();
  json exists = json::object();
  for (std::size_t w = 0; w < df.frame().size(); ++w) {
    json members = json::array();
    for (std::size_t d = 0; d < df.domain().size(); ++d)
      if ((df.exists_in(w) >> d) & 1U) members.push_back(df.domain()[d]);
    exists[df.frame().world(w)] = members;
  }
  out["exists_in"] = exists;
  return out;
}

json to_json(const FoModel& m) {
  json out = to_json(m.dframe());
  const Frame& fr = m.frame();
  const auto& domain = m.dframe().domain();
  out["mode"] = std::string(to_string(m.mode()));
  json val = json::object();
  for (const auto& [atom, set] : m.valuation()) val[atom] = world_names(fr, set);
  out["valuation"] = val;
  json flexible = json::object();
  for (const auto& [name, p] : m.flexible()) flexible[name] = flexible_json(fr, domain, p);
  out["flexible_preds"] = flexible;
  json rigid = json::object();
  for (const auto& [name, p] : m.rigid()) {
    json ext = json::array();
    for (const auto& t : p.extension) ext.push_back(tuple_json(domain, t));
    rigid[name] = json{{"arity", p.arity}, {"extension", ext}};
  }
  out["rigid_preds"] = rigid;
  json consts = json::object();
  for (const auto& [name, e] : m.constants()) consts[name] = domain.at(e);
  out["rigid_consts"] = consts;
  return out;
}

json to_json(const AnyModel& m) {
  return std::visit([](const auto& x) { return to_json(x); }, m);
}

json to_json(const Verdict& v, const Frame& fr, const std::vector<std::string>& domain) {
  json out{{"holds", v.holds}};
  if (!v.witness) return out;
  const Witness& w = *v.witness;
  json wj{{"world", fr.world(w.world)}};
  if (!w.env.empty()) wj["env"] = w.env;
  if (!w.instantiation.empty()) wj["instantiation"] = instantiation_json(fr, w.instantiation);
  if (w.hole) wj["interpretation"] = json{{w.hole->predicate, flexible_json(fr, domain, w.hole->as_predicate())}};
  out["witness"] = wj;
  return out;
}

json to_json(const AxiomReport& r, const Frame& fr) {
  json out = json::object();
  for (const AxiomCheck& c : r.axioms) {
    json entry = to_json(c.verdict, fr);
    entry["property"] = c.property ? json(*c.property) : json(nullptr);
    entry["consistent"] = c.consistent;
    out[std::string(to_string(c.id))] = entry;
  }
  json props = json::object();
  for (const auto& [p, holds] : r.properties) props[std::string(to_string(p))] = holds;
  out["frame_properties"] = props;
  out["consistent"] = r.consistent();
  return out;
}

json to_json(const ReadingReport& r) {
  return json{{"equal", r.equal}, {"iff", r.iff}, {"meta", r.meta}, {"object", r.object}};
}

json to_json(const BarcanReport& r, const DomainFrame& df) {
  json bf = to_json(r.bf, df.frame(), df.domain());
  bf["property"] = r.monotonicity.nonincreasing;
  bf["consistent"] = r.bf_consistent;
  bf["readings"] = to_json(r.bf_readings);
  json cbf = to_json(r.cbf, df.frame(), df.domain());
  cbf["property"] = r.monotonicity.nondecreasing;
  cbf["consistent"] = r.cbf_consistent;
  cbf["readings"] = to_json(r.cbf_readings);
  return json{{"BF", bf},
              {"CBF", cbf},
              {"monotonicity",
               {{"constant", r.monotonicity.constant},
                {"nondecreasing", r.monotonicity.nondecreasing},
                {"nonincreasing", r.monotonicity.nonincreasing}}},
              {"symmetric", r.symmetric},
              {"symmetric_consistent", r.symmetric_consistent},
              {"consistent", r.consistent()}};
}

json to_json(const Countermodel& cm) {
  json out = to_json(cm.model);
  const Frame& fr = cm.frame();
  const Certificate& c = cm.certificate;
  out["certificate"] = json{{"reading", std::string(to_string(c.reading))},
                            {"conclusion", c.conclusion},
                            {"world", fr.world(c.world)},
                            {"instantiation", instantiation_json(fr, c.instantiation)}};
  return out;
}

}  // namespace modalkit

#include "modalkit/model.hpp"

#include <algorithm>

namespace modalkit {

namespace {

void check_world_names(const std::vector<std::string>& worlds) {
  if (worlds.empty()) throw ModelError("$.worlds", "a frame needs at least one world");
  if (worlds.size() > kMaxWorlds) {
    throw ModelError("$.worlds", "at most " + std::to_string(kMaxWorlds) + " worlds are supported");
  }
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    if (worlds[i].empty()) throw ModelError("$.worlds[" + std::to_string(i) + "]", "empty world name");
    for (std::size_t j = 0; j < i; ++j) {
      if (worlds[j] == worlds[i]) {
        throw ModelError("$.worlds[" + std::to_string(i) + "]", "duplicate world '" + worlds[i] + "'");
      }
    }
  }
}

}  // namespace

Frame::Frame(std::vector<std::string> worlds, const std::vector<std::pair<std::string, std::string>>& access)
    : worlds_(std::move(worlds)) {
  check_world_names(worlds_);
  succ_.assign(worlds_.size(), 0);
  for (std::size_t k = 0; k < access.size(); ++k) {
    const auto from = index_of(access[k].first);
    const auto to = index_of(access[k].second);
    const std::string at = "$.access[" + std::to_string(k) + "]";
    if (!from) throw ModelError(at + "[0]", "unknown world '" + access[k].first + "'");
    if (!to) throw ModelError(at + "[1]", "unknown world '" + access[k].second + "'");
    succ_[*from] |= bit(*to);
  }
}

Frame::Frame(std::vector<std::string> worlds, std::vector<WorldSet> successors)
    : worlds_(std::move(worlds)), succ_(std::move(successors)) {
  check_world_names(worlds_);
  if (succ_.size() != worlds_.size()) throw ModelError("$.access", "successor table does not match world count");
  for (std::size_t i = 0; i < succ_.size(); ++i) {
    if (succ_[i] & ~all()) throw ModelError("$.access", "edge to a world outside the frame");
  }
}

Frame Frame::from_bits(std::size_t n, std::uint64_t relation) {
  if (n == 0 || n > 8) throw ModelError("", "from_bits supports 1..8 worlds");
  std::vector<std::string> names;
  std::vector<WorldSet> succ(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("w" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if ((relation >> (i * n + j)) & 1U) succ[i] |= bit(j);
    }
  }
  return Frame(std::move(names), std::move(succ));
}

Frame Frame::total(std::vector<std::string> worlds) {
  const std::size_t n = worlds.size();
  return Frame(std::move(worlds), std::vector<WorldSet>(n, all_of(n)));
}

std::optional<std::size_t> Frame::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < worlds_.size(); ++i)
    if (worlds_[i] == name) return i;
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> Frame::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (access(i, j)) out.emplace_back(i, j);
  return out;
}

std::uint64_t Frame::relation_bits() const {
  const std::size_t n = size();
  if (n > 8) throw ModelError("", "relation_bits supports at most 8 worlds");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (access(i, j)) bits |= std::uint64_t{1} << (i * n + j);
  return bits;
}

std::string_view to_string(FrameProperty p) {
  switch (p) {
    case FrameProperty::Reflexive: return "reflexive";
    case FrameProperty::Transitive: return "transitive";
    case FrameProperty::Symmetric: return "symmetric";
    case FrameProperty::Serial: return "serial";
    case FrameProperty::Euclidean: return "euclidean";
    case FrameProperty::Equivalence: return "equivalence";
    case FrameProperty::Total: return "total";
  }
  return "?";
}

std::optional<FrameProperty> frame_property_from_string(std::string_view s) {
  for (auto p : {FrameProperty::Reflexive, FrameProperty::Transitive, FrameProperty::Symmetric, FrameProperty::Serial,
                 FrameProperty::Euclidean, FrameProperty::Equivalence, FrameProperty::Total}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

bool frame_property(const Frame& fr, FrameProperty prop) {
  const std::size_t n = fr.size();
  switch (prop) {
    case FrameProperty::Reflexive:
      for (std::size_t x = 0; x < n; ++x)
        if (!fr.access(x, x)) return false;
      return true;
    case FrameProperty::Symmetric:
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (fr.access(x, y) && !fr.access(y, x)) return false;
      return true;
    case FrameProperty::Transitive:
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t z = 0; z < n; ++z)
            if (fr.access(x, y) && fr.access(y, z) && !fr.access(x, z)) return false;
      return true;
    case FrameProperty::Serial:
      for (std::size_t x = 0; x < n; ++x) {
        bool any = false;
        for (std::size_t y = 0; y < n; ++y) any = any || fr.access(x, y);
        if (!any) return false;
      }
      return true;
    case FrameProperty::Euclidean:
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t z = 0; z < n; ++z)
            if (fr.access(x, y) && fr.access(x, z) && !fr.access(y, z)) return false;
      return true;
    case FrameProperty::Equivalence:
      return frame_property(fr, FrameProperty::Reflexive) && frame_property(fr, FrameProperty::Symmetric) &&
             frame_property(fr, FrameProperty::Transitive);
    case FrameProperty::Total:
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (!fr.access(x, y)) return false;
      return true;
  }
  return false;
}

namespace {

void check_valuation(const Frame& frame, const Valuation& valuation) {
  for (const auto& [atom, worlds] : valuation) {
    const std::string at = "$.valuation." + atom;
    if (!is_identifier(atom) || is_keyword(atom) || !(atom[0] >= 'a' && atom[0] <= 'z')) {
      throw ModelError(at, "proposition names must be lowercase-initial identifiers");
    }
    if (worlds & ~frame.all()) throw ModelError(at, "valuation mentions a world outside the frame");
  }
}

}  // namespace

PropModel::PropModel(Frame frame, Valuation valuation) : frame_(std::move(frame)), valuation_(std::move(valuation)) {
  check_valuation(frame_, valuation_);
}

WorldSet PropModel::truth_set(const std::string& atom) const {
  auto it = valuation_.find(atom);
  return it == valuation_.end() ? 0 : it->second;
}

DomainFrame::DomainFrame(Frame frame, std::vector<std::string> domain, std::vector<DomainSet> exists_in)
    : frame_(std::move(frame)), domain_(std::move(domain)), exists_in_(std::move(exists_in)) {
  if (domain_.empty()) throw ModelError("$.domain", "the quantification domain must be nonempty");
  if (domain_.size() > kMaxDomain) {
    throw ModelError("$.domain", "at most " + std::to_string(kMaxDomain) + " individuals are supported");
  }
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const std::string at = "$.domain[" + std::to_string(i) + "]";
    if (domain_[i].empty()) throw ModelError(at, "empty individual name");
    for (std::size_t j = 0; j < i; ++j)
      if (domain_[j] == domain_[i]) throw ModelError(at, "duplicate individual '" + domain_[i] + "'");
  }
  if (exists_in_.size() != frame_.size()) throw ModelError("$.exists_in", "existence sets must cover every world");
  for (std::size_t w = 0; w < exists_in_.size(); ++w) {
    if (exists_in_[w] & ~everyone()) {
      throw ModelError("$.exists_in." + frame_.world(w), "individual outside the domain");
    }
  }
}

DomainFrame DomainFrame::constant(Frame frame, std::vector<std::string> domain) {
  const std::size_t n = frame.size();
  const DomainSet everyone = all_of(domain.size());
  return DomainFrame(std::move(frame), std::move(domain), std::vector<DomainSet>(n, everyone));
}

std::optional<std::size_t> DomainFrame::index_of(std::string_view individual) const {
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (domain_[i] == individual) return i;
  return std::nullopt;
}

DomainMonotonicity domain_monotonicity(const DomainFrame& df) {
  DomainMonotonicity m{true, true, true};
  const Frame& fr = df.frame();
  for (std::size_t w = 0; w < fr.size(); ++w) {
    if (df.exists_in(w) != df.everyone()) m.constant = false;
  }
  for (const auto& [w, v] : fr.edges()) {
    if (df.exists_in(w) & ~df.exists_in(v)) m.nondecreasing = false;
    if (df.exists_in(v) & ~df.exists_in(w)) m.nonincreasing = false;
  }
  return m;
}

std::string_view to_string(DomainMode m) { return m == DomainMode::Constant ? "constant" : "varying"; }

std::optional<DomainMode> domain_mode_from_string(std::string_view s) {
  if (s == "constant") return DomainMode::Constant;
  if (s == "varying") return DomainMode::Varying;
  return std::nullopt;
}

namespace {

void check_tuple(const Tuple& t, std::size_t arity, std::size_t domain_size, const std::string& at) {
  if (t.size() != arity) {
    throw ModelError(at, "tuple has " + std::to_string(t.size()) + " elements, arity is " + std::to_string(arity));
  }
  for (std::size_t e : t)
    if (e >= domain_size) throw ModelError(at, "tuple element outside the domain");
}

}  // namespace

FoModel::FoModel(DomainFrame dframe, DomainMode mode, Valuation valuation, std::map<std::string, FlexiblePred> flexible,
                 std::map<std::string, RigidPred> rigid, std::map<std::string, std::size_t> constants)
    : dframe_(std::move(dframe)),
      mode_(mode),
      valuation_(std::move(valuation)),
      flexible_(std::move(flexible)),
      rigid_(std::move(rigid)),
      constants_(std::move(constants)) {
  check_valuation(frame(), valuation_);
  const std::size_t dn = dframe_.domain().size();
  if (mode_ == DomainMode::Constant) {
    for (std::size_t w = 0; w < frame().size(); ++w) {
      if (dframe_.exists_in(w) != dframe_.everyone()) {
        throw ModelError("$.exists_in." + frame().world(w), "constant mode requires every individual in every world");
      }
    }
  }
  for (const auto& [name, p] : flexible_) {
    const std::string at = "$.flexible_preds." + name;
    if (!is_identifier(name) || is_keyword(name)) throw ModelError(at, "predicate name is not an identifier");
    if (p.arity == 0) throw ModelError(at + ".arity", "arity must be positive");
    if (rigid_.count(name)) throw ModelError(at, "declared both flexible and rigid");
    for (const auto& [t, worlds] : p.extension) {
      check_tuple(t, p.arity, dn, at + ".extension");
      if (worlds & ~frame().all()) throw ModelError(at + ".extension", "world outside the frame");
    }
  }
  for (const auto& [name, p] : rigid_) {
    const std::string at = "$.rigid_preds." + name;
    if (!is_identifier(name) || is_keyword(name)) throw ModelError(at, "predicate name is not an identifier");
    if (p.arity == 0) throw ModelError(at + ".arity", "arity must be positive");
    for (const auto& t : p.extension) check_tuple(t, p.arity, dn, at + ".extension");
  }
  for (const auto& [name, e] : constants_) {
    const std::string at = "$.rigid_consts." + name;
    if (!is_identifier(name) || is_keyword(name) || is_variable_name(name)) {
      throw ModelError(at, "constant names are identifiers not starting with u-z");
    }
    if (e >= dn) throw ModelError(at, "constant denotes an individual outside the domain");
  }
}

FoModel FoModel::with_flexible(const std::string& name, FlexiblePred pred) const {
  auto flexible = flexible_;
  flexible[name] = std::move(pred);
  return FoModel(dframe_, mode_, valuation_, std::move(flexible), rigid_, constants_);
}

}  // namespace modalkit

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modalkit/formula.hpp"

namespace modalkit {

/// Set of worlds as a bitmask over world indices (declaration order).
using WorldSet = std::uint64_t;
/// Set of individuals as a bitmask over domain indices.
using DomainSet = std::uint64_t;

inline constexpr std::size_t kMaxWorlds = 64;
inline constexpr std::size_t kMaxDomain = 64;

inline WorldSet bit(std::size_t i) { return WorldSet{1} << i; }
inline WorldSet all_of(std::size_t n) { return n >= 64 ? ~WorldSet{0} : bit(n) - 1; }

/// Raised when a model violates one of its invariants. `path` locates the
/// offending value in JSON-path style (`$.access[0][1]`) when it came from a file.
class ModelError : public Error {
 public:
  ModelError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Finite Kripke frame: named worlds plus an accessibility relation.
class Frame {
 public:
  Frame(std::vector<std::string> worlds, const std::vector<std::pair<std::string, std::string>>& access);
  Frame(std::vector<std::string> worlds, std::vector<WorldSet> successors);

  /// Worlds `w0`..`w{n-1}`; bit `i*n + j` of `relation` is the edge (wi, wj). Requires n <= 8.
  static Frame from_bits(std::size_t n, std::uint64_t relation);
  /// Every world sees every world, including itself.
  static Frame total(std::vector<std::string> worlds);

  std::size_t size() const { return worlds_.size(); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::string& world(std::size_t i) const { return worlds_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool access(std::size_t from, std::size_t to) const { return (succ_[from] >> to) & 1U; }
  WorldSet successors(std::size_t w) const { return succ_[w]; }
  WorldSet all() const { return all_of(worlds_.size()); }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;
  /// Inverse of from_bits; requires size() <= 8.
  std::uint64_t relation_bits() const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::vector<std::string> worlds_;
  std::vector<WorldSet> succ_;
};

enum class FrameProperty { Reflexive, Transitive, Symmetric, Serial, Euclidean, Equivalence, Total };

std::string_view to_string(FrameProperty p);
std::optional<FrameProperty> frame_property_from_string(std::string_view s);

bool frame_property(const Frame& fr, FrameProperty prop);

/// Proposition name -> worlds where it is true. Missing atoms are false everywhere.
using Valuation = std::map<std::string, WorldSet>;

class PropModel {
 public:
  PropModel(Frame frame, Valuation valuation);

  const Frame& frame() const { return frame_; }
  const Valuation& valuation() const { return valuation_; }
  WorldSet truth_set(const std::string& atom) const;

 private:
  Frame frame_;
  Valuation valuation_;
};

/// A frame together with a quantification domain and per-world existence sets.
class DomainFrame {
 public:
  DomainFrame(Frame frame, std::vector<std::string> domain, std::vector<DomainSet> exists_in);

  /// Every individual exists in every world.
  static DomainFrame constant(Frame frame, std::vector<std::string> domain);

  const Frame& frame() const { return frame_; }
  const std::vector<std::string>& domain() const { return domain_; }
  std::optional<std::size_t> index_of(std::string_view individual) const;
  DomainSet exists_in(std::size_t world) const { return exists_in_[world]; }
  const std::vector<DomainSet>& existence() const { return exists_in_; }
  DomainSet everyone() const { return all_of(domain_.size()); }

 private:
  Frame frame_;
  std::vector<std::string> domain_;
  std::vector<DomainSet> exists_in_;
};

struct DomainMonotonicity {
  bool constant = false;
  bool nondecreasing = false;
  bool nonincreasing = false;

  friend bool operator==(const DomainMonotonicity&, const DomainMonotonicity&) = default;
};

DomainMonotonicity domain_monotonicity(const DomainFrame& df);

enum class DomainMode { Constant, Varying };

std::string_view to_string(DomainMode m);
std::optional<DomainMode> domain_mode_from_string(std::string_view s);

using Tuple = std::vector<std::size_t>;

/// World-dependent predicate: tuple -> worlds where it holds.
struct FlexiblePred {
  std::size_t arity = 1;
  std::map<Tuple, WorldSet> extension;
};

/// World-independent predicate.
struct RigidPred {
  std::size_t arity = 1;
  std::set<Tuple> extension;
};

class FoModel {
 public:
  FoModel(DomainFrame dframe, DomainMode mode, Valuation valuation = {},
          std::map<std::string, FlexiblePred> flexible = {}, std::map<std::string, RigidPred> rigid = {},
          std::map<std::string, std::size_t> constants = {});

  const DomainFrame& dframe() const { return dframe_; }
  const Frame& frame() const { return dframe_.frame(); }
  DomainMode mode() const { return mode_; }
  const Valuation& valuation() const { return valuation_; }
  const std::map<std::string, FlexiblePred>& flexible() const { return flexible_; }
  const std::map<std::string, RigidPred>& rigid() const { return rigid_; }
  const std::map<std::string, std::size_t>& constants() const { return constants_; }

  /// Individuals a quantifier ranges over at `world`.
  DomainSet quantifier_range(std::size_t world) const {
    return mode_ == DomainMode::Constant ? dframe_.everyone() : dframe_.exists_in(world);
  }

  /// Copy with the flexible predicate `name` replaced (or added).
  FoModel with_flexible(const std::string& name, FlexiblePred pred) const;

 private:
  DomainFrame dframe_;
  DomainMode mode_;
  Valuation valuation_;
  std::map<std::string, FlexiblePred> flexible_;
  std::map<std::string, RigidPred> rigid_;
  std::map<std::string, std::size_t> constants_;
};

}  // namespace modalkit

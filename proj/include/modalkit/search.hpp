#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modalkit/correspondence.hpp"
#include "modalkit/formula.hpp"
#include "modalkit/model.hpp"
#include "modalkit/semantics.hpp"

namespace modalkit {

/// How the conclusion of an argument is checked against its premises.
///   object - premises and conclusion are each closed over their own scheme
///            variables; the conclusion must fail for some instantiation.
///   meta   - scheme variables are shared between premise formulas and the
///            conclusion; some instantiation makes every premise valid and
///            the conclusion invalid.
enum class Reading { Object, Meta };

std::string_view to_string(Reading r);
std::optional<Reading> reading_from_string(std::string_view s);

struct SearchSpec {
  std::size_t max_worlds = 3;
  /// 0 for propositional search.
  std::size_t max_domain = 0;
  /// Reflexive, ..., Total. Empty means unconstrained.
  std::vector<FrameProperty> frame_constraints;
  std::vector<Formula> premise_formulas;
  /// Each must be scheme-valid in the countermodel.
  std::vector<Formula> premise_schemes;
  std::optional<Formula> conclusion;
  Reading reading = Reading::Object;
  /// First-order search only.
  DomainMode mode = DomainMode::Varying;
};

struct SearchOptions {
  std::size_t jobs = 1;
  /// Skip frames that are not the least relation bitmask in their isomorphism class.
  bool prune_isomorphic = false;
  /// Upper bound on instantiation checks across the whole search.
  std::uint64_t max_calls = 200'000'000;
  Budget budget;
  std::size_t world_ceiling = 4;
  std::size_t fo_world_ceiling = 3;
  std::size_t domain_ceiling = 3;
};

/// Reads MODALKIT_BUDGET (a positive integer) into `max_calls`, if set.
SearchOptions options_from_environment(SearchOptions base = {});

/// Names the failed conclusion instance and the world where it fails.
struct Certificate {
  Reading reading = Reading::Object;
  std::string conclusion;
  std::size_t world = 0;
  Instantiation instantiation;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct Countermodel {
  std::variant<PropModel, FoModel> model;
  Certificate certificate;

  const Frame& frame() const;
};

/// Frame with n worlds whose relation bitmask is least among its isomorphic copies.
bool is_canonical(const Frame& fr);

/// All frames on worlds w0..w{n-1} satisfying every constraint, in relation-bitmask order.
std::vector<Frame> enumerate_frames(std::size_t n, const std::vector<FrameProperty>& constraints = {},
                                    bool prune_isomorphic = false);

/// Smallest propositional model (world count, then frame bitmask, then
/// valuation bitmask) in which the premises hold and the conclusion fails.
/// Absence means no countermodel up to spec.max_worlds, not validity.
std::optional<Countermodel> find_countermodel(const SearchSpec& spec, const SearchOptions& options = {});

/// As find_countermodel, additionally enumerating domain sizes 1..max_domain,
/// existence sets, denotations of constants, and interpretations of every
/// predicate symbol (all treated as flexible).
std::optional<Countermodel> find_fo_countermodel(const SearchSpec& spec, const SearchOptions& options = {});

/// Re-checks a countermodel from scratch through the public semantics API.
bool verify_countermodel(const SearchSpec& spec, const Countermodel& cm, const Budget& budget = {});

/// Least domain frame (world count, domain size, frame bitmask, existence
/// assignment) satisfying `accept`. Individuals are named a, b, c, ...
std::optional<DomainFrame> find_domain_frame(std::size_t max_worlds, std::size_t max_domain, DomainMode mode,
                                             const std::function<bool(const DomainFrame&)>& accept,
                                             const SearchOptions& options = {});

/// Least domain frame on which the meta reading of BF (or CBF) holds for every
/// interpretation of P while the object reading fails for some.
std::optional<DomainFrame> find_reading_divergence(AxiomId id, std::size_t max_worlds, std::size_t max_domain,
                                                   DomainMode mode, const SearchOptions& options = {});

}  // namespace modalkit

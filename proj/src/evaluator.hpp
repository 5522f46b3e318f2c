#pragma once

// Bitset evaluator shared by the semantics, correspondence and search modules.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modalkit/semantics.hpp"

namespace modalkit::detail {

struct Slot {
  std::string_view name;
  WorldSet set = 0;
};

using Binding = std::pair<std::string_view, std::size_t>;

/// Computes the set of worlds where a formula holds, bottom-up.
class Evaluator {
 public:
  explicit Evaluator(const PropModel& m);
  explicit Evaluator(const FoModel& m);
  /// Frame only: every proposition letter must be supplied through set_atoms.
  explicit Evaluator(const Frame& fr);

  void set_schemes(std::span<const Slot> schemes) { schemes_ = schemes; }
  void set_atoms(std::span<const Slot> atoms) {
    atoms_ = atoms;
    atoms_override_ = true;
  }
  /// `extension[d]` = worlds where hole(d) holds.
  void set_hole(std::string_view name, const WorldSet* extension) {
    hole_ = name;
    hole_ext_ = extension;
  }

  const Frame& frame() const { return *frame_; }
  WorldSet all() const { return frame_->all(); }

  WorldSet extension(const Formula& f, std::vector<Binding>& env) const;
  WorldSet extension(const Formula& f) const {
    std::vector<Binding> env;
    return extension(f, env);
  }

  /// Converts a public environment, validating individual names.
  std::vector<Binding> bind(const Env& env) const;

 private:
  std::size_t resolve(const Term& t, const std::vector<Binding>& env) const;

  const Frame* frame_;
  const Valuation* valuation_ = nullptr;
  const FoModel* fo_ = nullptr;
  std::span<const Slot> schemes_;
  std::span<const Slot> atoms_;
  bool atoms_override_ = false;
  std::string_view hole_;
  const WorldSet* hole_ext_ = nullptr;
  std::vector<WorldSet> range_;  // individual -> worlds where quantifiers range over it
};

/// Sorted names of the metavariables to enumerate.
std::vector<std::string> sorted_names(const std::vector<std::set<std::string>>& groups);

Instantiation to_instantiation(std::span<const Slot> slots);

/// Runs `truth_set(slots)` for every instantiation of `names` by sets of
/// `n` worlds and reports the least refutation (world first, then
/// instantiation index). `calls` is incremented once per instantiation.
template <typename TruthSet>
Verdict least_refutation(std::size_t n, const std::vector<std::string>& names, const Budget& budget,
                         std::uint64_t& calls, TruthSet&& truth_set) {
  const std::size_t k = names.size();
  if (n * k > budget.max_scheme_bits || n * k >= 63) {
    throw ResourceLimit("enumerating " + std::to_string(k) + " metavariable(s) over " + std::to_string(n) +
                        " worlds needs 2^" + std::to_string(n * k) + " instantiations; budget is 2^" +
                        std::to_string(budget.max_scheme_bits));
  }
  const WorldSet all = all_of(n);
  std::vector<Slot> slots(k);
  for (std::size_t j = 0; j < k; ++j) slots[j].name = names[j];
  const std::uint64_t count = std::uint64_t{1} << (n * k);

  std::size_t best_world = n;
  std::uint64_t best_index = 0;
  WorldSet seen = 0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    for (std::size_t j = 0; j < k; ++j) slots[j].set = (idx >> ((k - 1 - j) * n)) & all;
    ++calls;
    const WorldSet failing = all & ~truth_set(std::span<const Slot>(slots));
    const WorldSet fresh = failing & ~seen;
    if (fresh) {
      seen |= fresh;
      const auto w = static_cast<std::size_t>(__builtin_ctzll(fresh));
      if (w < best_world) {
        best_world = w;
        best_index = idx;
      }
      if (best_world == 0) break;
    }
  }
  if (best_world == n) return Verdict::pass();
  for (std::size_t j = 0; j < k; ++j) slots[j].set = (best_index >> ((k - 1 - j) * n)) & all;
  Witness w;
  w.world = best_world;
  w.instantiation = to_instantiation(slots);
  return Verdict::fail(std::move(w));
}

Verdict scheme_valid_counted(const Evaluator& base, const Formula& scheme, const Budget& budget,
                             std::uint64_t& calls);
Verdict meta_implies_counted(const Evaluator& base, const std::vector<Formula>& premises, const Formula& conclusion,
                             const Budget& budget, std::uint64_t& calls);
Verdict fo_scheme_valid_counted(const FoModel& skeleton, const Formula& scheme, const std::string& hole,
                                const Budget& budget, std::uint64_t& calls);

}  // namespace modalkit::detail

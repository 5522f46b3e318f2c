#include "modalkit/search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <type_traits>

#include "evaluator.hpp"

namespace modalkit {

std::string_view to_string(Reading r) { return r == Reading::Object ? "object" : "meta"; }

std::optional<Reading> reading_from_string(std::string_view s) {
  if (s == "object") return Reading::Object;
  if (s == "meta") return Reading::Meta;
  return std::nullopt;
}

SearchOptions options_from_environment(SearchOptions base) {
  if (const char* raw = std::getenv("MODALKIT_BUDGET")) {
    const std::string text(raw);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() || value == 0) {
      throw Error("MODALKIT_BUDGET must be a positive integer, got '" + text + "'");
    }
    base.max_calls = value;
  }
  return base;
}

const Frame& Countermodel::frame() const {
  return std::visit([](const auto& m) -> const Frame& { return m.frame(); }, model);
}

bool is_canonical(const Frame& fr) {
  const std::size_t n = fr.size();
  const std::uint64_t bits = fr.relation_bits();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::uint64_t image = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (fr.access(i, j)) image |= std::uint64_t{1} << (perm[i] * n + perm[j]);
    if (image < bits) return false;
  }
  return true;
}

namespace {

bool admissible(const Frame& fr, const std::vector<FrameProperty>& constraints, bool prune) {
  for (FrameProperty p : constraints)
    if (!frame_property(fr, p)) return false;
  return !prune || is_canonical(fr);
}

std::uint64_t relation_count(std::size_t n) {
  if (n == 0 || n > 7) throw ResourceLimit("frame enumeration supports 1..7 worlds");
  return std::uint64_t{1} << (n * n);
}

/// Least index in [0, count) for which `probe` yields a value. Workers claim
/// chunks in increasing order and stop once they pass the best hit, so the
/// answer does not depend on the number of workers. An exception at index i
/// wins only when no hit below i exists.
template <typename T, typename Probe>
std::optional<T> first_hit(std::uint64_t count, std::size_t jobs, Probe&& probe) {
  constexpr std::uint64_t kChunk = 16;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> stop{count};
  std::mutex mu;
  std::uint64_t best_index = count;
  std::optional<T> best;
  std::uint64_t error_index = count;
  std::exception_ptr error;

  auto lower_stop = [&](std::uint64_t i) {
    std::uint64_t cur = stop.load();
    while (i < cur && !stop.compare_exchange_weak(cur, i)) {
    }
  };

  auto worker = [&] {
    for (;;) {
      const std::uint64_t start = next.fetch_add(kChunk);
      if (start >= stop.load()) return;
      const std::uint64_t end = std::min(start + kChunk, count);
      for (std::uint64_t i = start; i < end; ++i) {
        if (i >= stop.load()) return;
        try {
          if (auto hit = probe(i)) {
            std::lock_guard lock(mu);
            if (i < best_index) {
              best_index = i;
              best = std::move(hit);
            }
            lower_stop(i);
            return;
          }
        } catch (...) {
          std::lock_guard lock(mu);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
          lower_stop(i);
          return;
        }
      }
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, jobs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error && error_index < best_index) std::rethrow_exception(error);
  return best;
}

class CallBudget {
 public:
  explicit CallBudget(std::uint64_t limit) : limit_(limit) {}

  void charge(std::uint64_t calls, const std::string& frontier) {
    if (used_.fetch_add(calls) + calls > limit_) {
      throw ResourceLimit("evaluator-call budget of " + std::to_string(limit_) + " exhausted; frontier: " + frontier);
    }
  }

 private:
  std::uint64_t limit_;
  std::atomic<std::uint64_t> used_{0};
};

std::string frontier(std::size_t n, std::uint64_t bits, std::size_t domain = 0) {
  std::string out = std::to_string(n) + " worlds, frame bitmask " + std::to_string(bits);
  if (domain) out += ", " + std::to_string(domain) + " individuals";
  return out;
}

void check_spec(const SearchSpec& spec) {
  if (!spec.conclusion) throw Error("search needs a conclusion");
  if (spec.max_worlds == 0) throw Error("max_worlds must be at least 1");
}

/// The refuting witness for one candidate model, if it is a countermodel.
std::optional<Witness> refute(const detail::Evaluator& ev, const SearchSpec& spec, const Budget& budget,
                              std::uint64_t& calls) {
  for (const Formula& s : spec.premise_schemes)
    if (!detail::scheme_valid_counted(ev, s, budget, calls).holds) return std::nullopt;
  if (spec.reading == Reading::Object) {
    for (const Formula& p : spec.premise_formulas)
      if (!detail::scheme_valid_counted(ev, p, budget, calls).holds) return std::nullopt;
    Verdict v = detail::scheme_valid_counted(ev, *spec.conclusion, budget, calls);
    if (v.holds) return std::nullopt;
    return std::move(v.witness);
  }
  Verdict v = detail::meta_implies_counted(ev, spec.premise_formulas, *spec.conclusion, budget, calls);
  if (v.holds) return std::nullopt;
  return std::move(v.witness);
}

Certificate make_certificate(const SearchSpec& spec, Witness w) {
  return Certificate{spec.reading, render(*spec.conclusion), w.world, std::move(w.instantiation)};
}

std::vector<const Formula*> all_formulas(const SearchSpec& spec) {
  std::vector<const Formula*> out{&*spec.conclusion};
  for (const auto& f : spec.premise_formulas) out.push_back(&f);
  for (const auto& f : spec.premise_schemes) out.push_back(&f);
  return out;
}

Valuation decode_valuation(const std::vector<std::string>& atoms, std::uint64_t idx, std::size_t n) {
  Valuation val;
  const std::size_t a = atoms.size();
  for (std::size_t j = 0; j < a; ++j) {
    const WorldSet s = (idx >> ((a - 1 - j) * n)) & all_of(n);
    if (s) val[atoms[j]] = s;
  }
  return val;
}

std::uint64_t pow2(std::size_t bits, const char* what) {
  if (bits >= 63) throw ResourceLimit(std::string(what) + " needs 2^" + std::to_string(bits) + " candidates");
  return std::uint64_t{1} << bits;
}

}  // namespace

std::vector<Frame> enumerate_frames(std::size_t n, const std::vector<FrameProperty>& constraints,
                                    bool prune_isomorphic) {
  std::vector<Frame> out;
  const std::uint64_t count = relation_count(n);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    Frame fr = Frame::from_bits(n, bits);
    if (admissible(fr, constraints, prune_isomorphic)) out.push_back(std::move(fr));
  }
  return out;
}

std::optional<Countermodel> find_countermodel(const SearchSpec& spec, const SearchOptions& options) {
  check_spec(spec);
  if (spec.max_worlds > options.world_ceiling) {
    throw ResourceLimit("max_worlds " + std::to_string(spec.max_worlds) + " exceeds the ceiling of " +
                        std::to_string(options.world_ceiling));
  }
  std::set<std::string> atom_set;
  for (const Formula* f : all_formulas(spec)) {
    if (!is_propositional(*f)) {
      throw EvalError(EvalErrorKind::NotPropositional, "'" + render(*f) + "' needs a first-order search");
    }
    auto a = prop_atoms(*f);
    atom_set.insert(a.begin(), a.end());
  }
  const std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  CallBudget budget(options.max_calls);

  for (std::size_t n = 1; n <= spec.max_worlds; ++n) {
    const std::uint64_t valuations = pow2(n * atoms.size(), "valuation enumeration");
    auto hit = first_hit<Countermodel>(relation_count(n), options.jobs, [&](std::uint64_t bits) {
      std::optional<Countermodel> found;
      const Frame fr = Frame::from_bits(n, bits);
      if (!admissible(fr, spec.frame_constraints, options.prune_isomorphic)) return found;
      std::uint64_t calls = 0;
      for (std::uint64_t v = 0; v < valuations && !found; ++v) {
        PropModel m(fr, decode_valuation(atoms, v, n));
        if (auto w = refute(detail::Evaluator(m), spec, options.budget, calls)) {
          found = Countermodel{std::move(m), make_certificate(spec, std::move(*w))};
        }
      }
      budget.charge(calls, frontier(n, bits));
      return found;
    });
    if (hit) return hit;
  }
  return std::nullopt;
}

namespace {

struct PredSlot {
  std::string name;
  std::size_t arity;
  std::size_t tuples;  // d^arity
};

Tuple decode_tuple(std::size_t t, std::size_t arity, std::size_t d) {
  Tuple out(arity);
  for (std::size_t i = arity; i-- > 0;) {
    out[i] = t % d;
    t /= d;
  }
  return out;
}

std::vector<std::string> individual_names(std::size_t d) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < d; ++i) {
    out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "e" + std::to_string(i));
  }
  return out;
}

}  // namespace

std::optional<Countermodel> find_fo_countermodel(const SearchSpec& spec, const SearchOptions& options) {
  check_spec(spec);
  if (spec.max_worlds > options.fo_world_ceiling) {
    throw ResourceLimit("max_worlds " + std::to_string(spec.max_worlds) + " exceeds the first-order ceiling of " +
                        std::to_string(options.fo_world_ceiling));
  }
  if (spec.max_domain == 0) throw Error("first-order search needs max_domain >= 1");
  if (spec.max_domain > options.domain_ceiling) {
    throw ResourceLimit("max_domain " + std::to_string(spec.max_domain) + " exceeds the ceiling of " +
                        std::to_string(options.domain_ceiling));
  }

  std::set<std::string> atom_set;
  std::set<std::string> const_set;
  std::map<std::string, std::size_t> arities;
  for (const Formula* f : all_formulas(spec)) {
    if (!is_closed(*f)) throw EvalError(EvalErrorKind::UnboundVar, "'" + render(*f) + "' has free variables");
    auto a = prop_atoms(*f);
    atom_set.insert(a.begin(), a.end());
    auto c = constants(*f);
    const_set.insert(c.begin(), c.end());
    for (const auto& [name, arity] : predicates(*f)) {
      auto [it, fresh] = arities.emplace(name, arity);
      if (!fresh && it->second != arity) {
        throw EvalError(EvalErrorKind::ArityMismatch, "predicate '" + name + "' is used with different arities");
      }
    }
  }
  const std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
  const std::vector<std::string> consts(const_set.begin(), const_set.end());
  CallBudget budget(options.max_calls);

  for (std::size_t n = 1; n <= spec.max_worlds; ++n) {
    for (std::size_t d = 1; d <= spec.max_domain; ++d) {
      std::vector<PredSlot> preds;
      std::size_t pred_bits = 0;
      for (const auto& [name, arity] : arities) {
        std::size_t tuples = 1;
        for (std::size_t i = 0; i < arity; ++i) tuples *= d;
        preds.push_back({name, arity, tuples});
        pred_bits += tuples * n;
      }
      const std::uint64_t existence =
          spec.mode == DomainMode::Constant ? 1 : pow2(n * d, "existence-set enumeration");
      std::uint64_t denotations = 1;
      for (std::size_t i = 0; i < consts.size(); ++i) denotations *= d;
      const std::uint64_t valuations = pow2(n * atoms.size(), "valuation enumeration");
      const std::uint64_t interpretations = pow2(pred_bits, "predicate enumeration");
      const auto names = individual_names(d);
      const DomainSet everyone = all_of(d);

      auto hit = first_hit<Countermodel>(relation_count(n), options.jobs, [&](std::uint64_t bits) {
        std::optional<Countermodel> found;
        const Frame fr = Frame::from_bits(n, bits);
        if (!admissible(fr, spec.frame_constraints, options.prune_isomorphic)) return found;
        std::uint64_t calls = 0;
        for (std::uint64_t e = 0; e < existence && !found; ++e) {
          std::vector<DomainSet> exists(n, everyone);
          if (spec.mode == DomainMode::Varying)
            for (std::size_t w = 0; w < n; ++w) exists[w] = (e >> (w * d)) & everyone;
          const DomainFrame df(fr, names, exists);
          for (std::uint64_t c = 0; c < denotations && !found; ++c) {
            std::map<std::string, std::size_t> denote;
            std::uint64_t rest = c;
            for (std::size_t i = consts.size(); i-- > 0;) {
              denote[consts[i]] = rest % d;
              rest /= d;
            }
            for (std::uint64_t v = 0; v < valuations && !found; ++v) {
              const Valuation val = decode_valuation(atoms, v, n);
              for (std::uint64_t p = 0; p < interpretations && !found; ++p) {
                std::map<std::string, FlexiblePred> flexible;
                std::size_t shift = pred_bits;
                for (const PredSlot& slot : preds) {
                  FlexiblePred fp;
                  fp.arity = slot.arity;
                  for (std::size_t t = 0; t < slot.tuples; ++t) {
                    shift -= n;
                    const WorldSet s = (p >> shift) & all_of(n);
                    if (s) fp.extension[decode_tuple(t, slot.arity, d)] = s;
                  }
                  flexible.emplace(slot.name, std::move(fp));
                }
                FoModel m(df, spec.mode, val, std::move(flexible), {}, denote);
                if (auto w = refute(detail::Evaluator(m), spec, options.budget, calls)) {
                  found = Countermodel{std::move(m), make_certificate(spec, std::move(*w))};
                }
              }
            }
          }
        }
        budget.charge(calls, frontier(n, bits, d));
        return found;
      });
      if (hit) return hit;
    }
  }
  return std::nullopt;
}

bool verify_countermodel(const SearchSpec& spec, const Countermodel& cm, const Budget& budget) {
  check_spec(spec);
  return std::visit(
      [&](const auto& m) {
        for (FrameProperty p : spec.frame_constraints)
          if (!frame_property(m.frame(), p)) return false;
        for (const Formula& s : spec.premise_schemes)
          if (!scheme_valid(m, s, budget).holds) return false;
        const Certificate& cert = cm.certificate;
        if (cert.reading != spec.reading || cert.world >= m.frame().size()) return false;
        const auto ext = [&](const Formula& f) -> WorldSet {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, FoModel>) {
            return extension(m, f, Env{}, cert.instantiation);
          } else {
            return extension(m, f, cert.instantiation);
          }
        };
        const auto at_world = [&](const Formula& f) { return ((ext(f) >> cert.world) & 1U) != 0; };
        if (spec.reading == Reading::Object) {
          for (const Formula& p : spec.premise_formulas)
            if (!scheme_valid(m, p, budget).holds) return false;
          return !scheme_valid(m, *spec.conclusion, budget).holds && !at_world(*spec.conclusion);
        }
        for (const Formula& p : spec.premise_formulas)
          if (ext(p) != m.frame().all()) return false;
        return !meta_implies(m, spec.premise_formulas, *spec.conclusion, budget).holds && !at_world(*spec.conclusion);
      },
      cm.model);
}

std::optional<DomainFrame> find_domain_frame(std::size_t max_worlds, std::size_t max_domain, DomainMode mode,
                                             const std::function<bool(const DomainFrame&)>& accept,
                                             const SearchOptions& options) {
  for (std::size_t n = 1; n <= max_worlds; ++n) {
    for (std::size_t d = 1; d <= max_domain; ++d) {
      const std::uint64_t existence = mode == DomainMode::Constant ? 1 : pow2(n * d, "existence-set enumeration");
      const auto names = individual_names(d);
      const DomainSet everyone = all_of(d);
      auto hit = first_hit<DomainFrame>(relation_count(n) * existence, options.jobs, [&](std::uint64_t idx) {
        std::optional<DomainFrame> found;
        const std::uint64_t bits = idx / existence;
        const std::uint64_t e = idx % existence;
        const Frame fr = Frame::from_bits(n, bits);
        if (!admissible(fr, {}, options.prune_isomorphic)) return found;
        std::vector<DomainSet> exists(n, everyone);
        if (mode == DomainMode::Varying)
          for (std::size_t w = 0; w < n; ++w) exists[w] = (e >> (w * d)) & everyone;
        DomainFrame df(fr, names, exists);
        if (accept(df)) found = std::move(df);
        return found;
      });
      if (hit) return hit;
    }
  }
  return std::nullopt;
}

std::optional<DomainFrame> find_reading_divergence(AxiomId id, std::size_t max_worlds, std::size_t max_domain,
                                                   DomainMode mode, const SearchOptions& options) {
  const auto [lhs, rhs] = barcan_sides(id);
  return find_domain_frame(
      max_worlds, max_domain, mode,
      [&, lhs = lhs, rhs = rhs](const DomainFrame& df) {
        const ReadingReport r = compare_readings(FoModel(df, mode), lhs, rhs, "P", options.budget);
        return r.meta && !r.object;
      },
      options);
}

}  // namespace modalkit

#pragma once

// Every random event in a protocol run (Bell and computational-basis measurement
// outcomes, private coins, adversary variant choices) goes through one Randomness
// object. It either samples from seeded streams or follows a scripted path, which
// lets the same protocol code be run once or enumerated exhaustively.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "bellcrypt/bell_algebra.hpp"
#include "bellcrypt/rational.hpp"
#include "bellcrypt/rng.hpp"
#include "bellcrypt/state.hpp"

namespace bellcrypt {

inline constexpr double kZeroProbability = 1e-15;

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

enum class ChoiceKind { Bsm, Measurement, Coin, Strategy };

struct ChoiceRecord {
  ChoiceKind kind;
  std::vector<double> probs;
  int picked = 0;
  bool forced = false;
};

class Randomness {
 public:
  /// Outcomes drawn from per-owner streams derived from `seed`.
  static Randomness sampled(std::uint64_t seed) {
    Randomness r;
    r.sampling_ = true;
    r.seed_ = seed;
    r.exact_.reset();
    return r;
  }

  /// Follows `path` for the first choices, then picks the first nonzero option.
  static Randomness scripted(std::vector<int> path) {
    Randomness r;
    r.path_ = std::move(path);
    return r;
  }

  /// Bell outcomes consumed in order by the next BSM choices, before any other rule.
  void force_bsm(std::vector<BellLabel> labels) {
    forced_.assign(labels.begin(), labels.end());
    forced_pos_ = 0;
  }

  /// Picks an option index. `probs` must sum to 1; `owner` selects the sampling stream.
  int choose(ChoiceKind kind, std::span<const double> probs, std::string_view owner) {
    if (probs.empty()) throw std::invalid_argument("choice with no options");
    ChoiceRecord rec{kind, std::vector<double>(probs.begin(), probs.end()), 0, false};
    if (kind == ChoiceKind::Bsm && forced_pos_ < forced_.size()) {
      rec.picked = forced_[forced_pos_++].index();
      rec.forced = true;
      if (rec.picked >= static_cast<int>(probs.size()) || probs[rec.picked] < kZeroProbability)
        throw ZeroProbabilityBranch("forced Bell outcome has zero probability");
    } else if (sampling_) {
      rec.picked = pick_sampled(probs, stream(owner));
    } else {
      const std::size_t pos = free_positions_;
      if (pos < path_.size()) {
        rec.picked = path_[pos];
        if (rec.picked < 0 || rec.picked >= static_cast<int>(probs.size()) ||
            probs[rec.picked] < kZeroProbability)
          throw ZeroProbabilityBranch("scripted choice has zero probability");
      } else {
        rec.picked = first_nonzero(probs);
      }
    }
    if (!rec.forced) {
      ++free_positions_;
      weight_ *= probs[rec.picked];
      if (exact_) {
        const auto p = kind == ChoiceKind::Strategy
                           ? std::optional<Rational>(Rational(1, probs.size()))
                           : Rational::from_dyadic(probs[rec.picked]);
        if (p && (*p).den() <= (std::uint64_t{1} << 62) / exact_->den()) {
          exact_ = *exact_ * *p;
        } else {
          exact_.reset();
        }
      }
    }
    trace_.push_back(std::move(rec));
    return trace_.back().picked;
  }

  /// Uniform choice among n alternatives.
  int choose_uniform(ChoiceKind kind, int n, std::string_view owner) {
    if (n <= 0) throw std::invalid_argument("uniform choice needs at least one option");
    std::vector<double> p(static_cast<std::size_t>(n), 1.0 / n);
    return choose(kind, p, owner);
  }

  bool coin(std::string_view owner) { return choose_uniform(ChoiceKind::Coin, 2, owner) == 1; }

  bool is_sampling() const { return sampling_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<ChoiceRecord>& trace() const { return trace_; }
  /// Probability of the path taken so far, forced choices excluded.
  double weight() const { return weight_; }
  std::optional<Rational> exact_weight() const { return exact_; }

 private:
  Randomness() = default;

  static int first_nonzero(std::span<const double> probs) {
    for (std::size_t k = 0; k < probs.size(); ++k)
      if (probs[k] >= kZeroProbability) return static_cast<int>(k);
    throw ZeroProbabilityBranch("every option has zero probability");
  }

  static int pick_sampled(std::span<const double> probs, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    int last = first_nonzero(probs);
    for (std::size_t k = 0; k < probs.size(); ++k) {
      if (probs[k] < kZeroProbability) continue;
      last = static_cast<int>(k);
      acc += probs[k];
      if (u < acc) return last;
    }
    return last;
  }

  Rng& stream(std::string_view owner) {
    auto it = streams_.find(std::string(owner));
    if (it == streams_.end()) it = streams_.emplace(std::string(owner), Rng::derive(seed_, fnv1a(owner))).first;
    return it->second;
  }

  bool sampling_ = false;
  std::uint64_t seed_ = 0;
  std::map<std::string, Rng> streams_;
  std::vector<int> path_;
  std::size_t free_positions_ = 0;
  std::vector<BellLabel> forced_;
  std::size_t forced_pos_ = 0;
  std::vector<ChoiceRecord> trace_;
  double weight_ = 1.0;
  std::optional<Rational> exact_ = Rational(1, 1);
};

struct CellInfo {
  std::size_t index = 0;
  std::vector<int> path;  // free choices only
  double weight = 1.0;
  std::optional<Rational> exact;
};

namespace detail {

/// Next path in depth-first order after a run that produced `trace`, or nullopt when done.
inline std::optional<std::vector<int>> next_path(const std::vector<ChoiceRecord>& trace) {
  std::vector<const ChoiceRecord*> free;
  for (const auto& r : trace)
    if (!r.forced) free.push_back(&r);
  for (std::size_t p = free.size(); p-- > 0;) {
    const auto& rec = *free[p];
    for (std::size_t j = static_cast<std::size_t>(rec.picked) + 1; j < rec.probs.size(); ++j) {
      if (rec.probs[j] < kZeroProbability) continue;
      std::vector<int> path;
      for (std::size_t q = 0; q < p; ++q) path.push_back(free[q]->picked);
      path.push_back(static_cast<int>(j));
      return path;
    }
  }
  return std::nullopt;
}

template <class R>
struct CellResult {
  CellInfo info;
  std::optional<R> result;  // empty when the cell was a zero-probability branch
};

/// Depth-first enumeration of every path extending `prefix`, in order.
template <class R, class Run>
void enumerate_from(const std::vector<int>& prefix, const std::vector<BellLabel>& forced, Run& run,
                    const std::function<void(CellInfo&&, std::optional<R>&&)>& sink) {
  std::optional<std::vector<int>> path = prefix;
  while (path) {
    Randomness rnd = Randomness::scripted(*path);
    rnd.force_bsm(forced);
    std::optional<R> out;
    try {
      out.emplace(run(rnd));
    } catch (const ZeroProbabilityBranch&) {
      out.reset();
    }
    CellInfo info;
    for (const auto& r : rnd.trace())
      if (!r.forced) info.path.push_back(r.picked);
    info.weight = rnd.weight();
    info.exact = rnd.exact_weight();
    path = next_path(rnd.trace());
    if (path && path->size() < prefix.size()) path.reset();
    if (path && !std::equal(prefix.begin(), prefix.end(), path->begin())) path.reset();
    sink(std::move(info), std::move(out));
  }
}

}  // namespace detail

/// Runs `run(Randomness&)` once per nonzero-probability path and hands each result,
/// in depth-first order, to `visit(const CellInfo&, R&&)`. With jobs > 1 the branches
/// of the first free choice run on separate threads and are merged in order.
template <class Run, class Visit>
std::size_t enumerate_paths(Run run, Visit visit, const std::vector<BellLabel>& forced = {}, int jobs = 1) {
  using R = std::invoke_result_t<Run&, Randomness&>;
  std::size_t index = 0;
  auto deliver = [&](CellInfo&& info, std::optional<R>&& out) {
    if (!out) return;
    info.index = index++;
    visit(static_cast<const CellInfo&>(info), std::move(*out));
  };

  if (jobs <= 1) {
    detail::enumerate_from<R>({}, forced, run, deliver);
    return index;
  }

  // Probe the first free choice to split the work.
  Randomness probe = Randomness::scripted({});
  probe.force_bsm(forced);
  std::vector<double> first_probs;
  try {
    run(probe);
  } catch (const ZeroProbabilityBranch&) {
  }
  for (const auto& r : probe.trace()) {
    if (!r.forced) {
      first_probs = r.probs;
      break;
    }
  }
  if (first_probs.empty()) {
    detail::enumerate_from<R>({}, forced, run, deliver);
    return index;
  }

  std::vector<int> branches;
  for (std::size_t j = 0; j < first_probs.size(); ++j)
    if (first_probs[j] >= kZeroProbability) branches.push_back(static_cast<int>(j));
  std::vector<std::vector<detail::CellResult<R>>> buckets(branches.size());
  std::vector<std::exception_ptr> errors(branches.size());
  std::size_t next = 0;
  while (next < branches.size()) {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs && next < branches.size(); ++t, ++next) {
      const std::size_t b = next;
      pool.emplace_back([&, b] {
        try {
          Run local = run;
          std::function<void(CellInfo&&, std::optional<R>&&)> collect = [&](CellInfo&& i, std::optional<R>&& o) {
            buckets[b].push_back({std::move(i), std::move(o)});
          };
          detail::enumerate_from<R>({branches[b]}, forced, local, collect);
        } catch (...) {
          errors[b] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (auto& bucket : buckets)
    for (auto& cell : bucket) deliver(std::move(cell.info), std::move(cell.result));
  return index;
}

}  // namespace bellcrypt

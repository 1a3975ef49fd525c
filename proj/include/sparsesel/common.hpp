#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace sparsesel {

/// Bad input: violated invariants, dimension mismatches, malformed values.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// File content that cannot be decoded.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A request whose exact computation exceeds a configured enumeration or
/// budget cap. The caller should fall back to a relaxation or raise the cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic random stream. The engine state evolution is fixed by the
/// standard; all variate transforms are hand-rolled so that a given seed
/// produces the same values on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (second variate cached).
  double normal();

  /// Uniform integer in [0, bound). bound must be positive.
  int uniform_int(int bound);

  bool bernoulli(double prob) { return uniform01() < prob; }

  /// Decorrelated child seed for worker/sample streams.
  static std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

/// Worker cap: SPARSESEL_THREADS if set, else hardware concurrency.
int thread_budget();

/// Runs fn(0..n-1), splitting indices across at most max_threads workers
/// (0 = thread_budget()). Each index is processed exactly once; callers get
/// determinism by writing results into per-index slots.
void parallel_for(int n, const std::function<void(int)>& fn, int max_threads = 0);

}  // namespace sparsesel

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lll/core.hpp"

namespace lll {

/// Identifies why a bit is drawn. Initial samples of variable i read from a
/// substream keyed by i, so lazily instantiated variables see the same bits
/// as an up-front sample would.
struct DrawTag {
  bool initial = false;
  VarIndex var = 0;
};

/// A source of unbiased random bits, standing in for a point of {0,1}^N.
class Tape {
 public:
  virtual ~Tape() = default;
  virtual bool draw(DrawTag tag) = 0;
  /// Total number of bits consumed so far.
  std::uint64_t cursor() const { return cursor_; }

 protected:
  std::uint64_t cursor_ = 0;
};

/// Seeded counter-based bit stream; identical seeds give identical streams.
class RandomTape final : public Tape {
 public:
  explicit RandomTape(std::uint64_t seed) : seed_(seed) {}
  bool draw(DrawTag tag) override;
  std::uint64_t seed() const { return seed_; }

 private:
  bool bit_at(std::uint64_t stream, std::uint64_t pos);

  std::uint64_t seed_;
  std::uint64_t resample_pos_ = 0;
  std::unordered_map<VarIndex, std::uint64_t> initial_pos_;
  std::uint64_t cached_stream_ = ~0ULL, cached_block_index_ = ~0ULL, cached_block_ = 0;
};

/// Finite explicit bit string read sequentially regardless of tag; running
/// off the end throws Error(tape_exhausted).
class ExplicitTape final : public Tape {
 public:
  explicit ExplicitTape(std::vector<bool> bits) : bits_(std::move(bits)) {}
  bool draw(DrawTag tag) override;
  std::size_t size() const { return bits_.size(); }

 private:
  std::vector<bool> bits_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Cumulative cells of a distribution, prepared for arithmetic decoding.
class Sampler {
 public:
  explicit Sampler(const VariableSpec& spec);

  /// Refines a dyadic interval one tape bit at a time until it lies inside
  /// one value's cell. Returns the value and adds the bits used to `bits`.
  Value sample(Tape& tape, DrawTag tag, std::uint64_t& bits) const;
  std::size_t range_size() const { return cells_.size() - 1; }

 private:
  std::vector<Rational> cells_;  // c_0 = 0 < c_1 < ... < c_n = 1
  std::vector<std::pair<std::uint64_t, std::uint64_t>> small_;  // same, as num/den when they fit
  bool fits_ = false;
};

Value sample_variable(const VariableSpec& spec, Tape& tape, DrawTag tag = {});

}  // namespace lll

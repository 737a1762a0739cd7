#include "lll/tape.hpp"

#include <algorithm>

namespace lll {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool RandomTape::bit_at(std::uint64_t stream, std::uint64_t pos) {
  const std::uint64_t block_index = pos >> 6;
  if (stream != cached_stream_ || block_index != cached_block_index_) {
    cached_stream_ = stream;
    cached_block_index_ = block_index;
    cached_block_ = splitmix64(splitmix64(seed_ ^ splitmix64(stream)) + block_index);
  }
  return (cached_block_ >> (pos & 63)) & 1U;
}

bool RandomTape::draw(DrawTag tag) {
  ++cursor_;
  if (!tag.initial) return bit_at(0, resample_pos_++);
  std::uint64_t& pos = initial_pos_[tag.var];
  return bit_at(tag.var + 1, pos++);
}

bool ExplicitTape::draw(DrawTag) {
  if (cursor_ >= bits_.size())
    throw Error(ErrorCode::tape_exhausted, "explicit tape exhausted after " + std::to_string(cursor_) + " bits");
  return bits_[cursor_++];
}

Sampler::Sampler(const VariableSpec& spec) {
  spec.validate();
  cells_.reserve(spec.range_size() + 1);
  Rational acc;
  cells_.push_back(acc);
  for (const Rational& p : spec.distribution) {
    acc += p;
    cells_.push_back(acc);
  }
  fits_ = true;
  for (const Rational& c : cells_) {
    if (!c.raw().get_den().fits_ulong_p() || c.raw().get_den() >= mpz_class(1) << 63) {
      fits_ = false;
      break;
    }
    small_.emplace_back(c.raw().get_num().get_ui(), c.raw().get_den().get_ui());
  }
  if (!fits_) small_.clear();
}

Value Sampler::sample(Tape& tape, DrawTag tag, std::uint64_t& bits) const {
  const std::size_t n = cells_.size() - 1;
  if (n == 1) return 0;

  // Fast path: interval [lo/2^d, (lo+1)/2^d) with d <= 62, compared against
  // cells using 128-bit cross multiplication.
  mpz_class lo_big = 0;
  unsigned long d_big = 0;
  if (fits_) {
    using u128 = unsigned __int128;
    std::uint64_t lo = 0;
    for (unsigned d = 1; d <= 62; ++d) {
      lo = 2 * lo + (tape.draw(tag) ? 1 : 0);
      ++bits;
      // largest v with c_v <= lo / 2^d
      auto le = [&](std::size_t v) {
        return u128(small_[v].first) << d <= u128(lo) * small_[v].second;
      };
      std::size_t v = 0;
      {
        std::size_t a = 0, b = n;  // c_a <= x, c_b > x (c_n = 1 > x)
        while (b - a > 1) {
          std::size_t mid = (a + b) / 2;
          if (le(mid)) a = mid; else b = mid;
        }
        v = a;
      }
      // (lo + 1) / 2^d <= c_{v+1}
      if (u128(lo + 1) * small_[v + 1].second <= u128(small_[v + 1].first) << d)
        return static_cast<Value>(v);
    }
    lo_big = mpz_class(static_cast<unsigned long>(lo));
    d_big = 62;
  }

  // Exact continuation of the same interval.
  mpz_class lo = lo_big;
  unsigned long d = d_big;
  for (;;) {
    Rational x(mpq_class(lo, mpz_class(1) << d));
    Rational x_hi(mpq_class(lo + 1, mpz_class(1) << d));
    auto it = std::upper_bound(cells_.begin(), cells_.end(), x);
    std::size_t v = static_cast<std::size_t>(it - cells_.begin()) - 1;
    if (v < n && x_hi <= cells_[v + 1]) return static_cast<Value>(v);
    lo = 2 * lo + (tape.draw(tag) ? 1 : 0);
    ++bits;
    ++d;
  }
}

Value sample_variable(const VariableSpec& spec, Tape& tape, DrawTag tag) {
  std::uint64_t bits = 0;
  return Sampler(spec).sample(tape, tag, bits);
}

}  // namespace lll

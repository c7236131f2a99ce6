#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace bussgang {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Chosen because substreams are free: the (seed, stream) pair selects a
/// statistically independent sequence without any jump-ahead state, which is
/// what makes batched Monte Carlo results independent of thread count and
/// scheduling. Output for a given (seed, stream, draw index) never changes.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

/// Domain tags keep unrelated consumers of the same user seed on disjoint
/// substreams (sampling, MC moments, MI histograms, ... must not replay each
/// other's uniforms).
enum class StreamDomain : std::uint32_t {
    sample = 1,
    mc_expect = 2,
    mutual_information = 3,
    verify = 4,
    metrics = 5,
    threshold_search = 6,
};

/// One substream of Philox draws: uniforms, normals, and a cached Box-Muller
/// twin. Cheap to construct; make one per batch/chunk, never share across
/// workers.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, StreamDomain domain, std::uint64_t stream_index)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          prefix_lo_(static_cast<std::uint32_t>(stream_index)),
          prefix_hi_(static_cast<std::uint32_t>(stream_index >> 32) ^
                     (static_cast<std::uint32_t>(domain) << 24)) {}

    /// Uniform double strictly inside (0, 1), 53 usable bits.
    double uniform() {
        const std::uint64_t bits = next64();
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the sine twin is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t next64() {
        if (word_pos_ == 4) {
            buffer_ = Philox4x32::block({static_cast<std::uint32_t>(block_index_),
                                         static_cast<std::uint32_t>(block_index_ >> 32),
                                         prefix_lo_, prefix_hi_},
                                        key_);
            ++block_index_;
            word_pos_ = 0;
        }
        const std::uint64_t lo = buffer_[word_pos_];
        const std::uint64_t hi = buffer_[word_pos_ + 1];
        word_pos_ += 2;
        return (hi << 32) | lo;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t prefix_lo_;
    std::uint32_t prefix_hi_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int word_pos_ = 4;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace bussgang

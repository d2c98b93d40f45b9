#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hippoc/exactnum.hpp"

namespace hippoc {

/// Immutable finite prefix of a binary sequence. Bits are packed
/// most-significant-first: bit i lives in word i/64 at shift 63 - i%64.
class BitPrefix {
public:
    BitPrefix() = default;
    /// Bits past `size` in the last word are cleared.
    BitPrefix(std::vector<std::uint64_t> words, std::uint64_t size);

    static BitPrefix from_string(std::string_view bits01);

    std::uint64_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    int bit(std::uint64_t i) const { return static_cast<int>((words_[i >> 6] >> (63 - (i & 63))) & 1u); }
    std::span<const std::uint64_t> words() const { return words_; }

    /// Number of ones among the first n bits.
    std::uint64_t count_ones(std::uint64_t n) const;
    /// Number of ones in [begin, end).
    std::uint64_t count_ones(std::uint64_t begin, std::uint64_t end) const;

    BitPrefix prefix(std::uint64_t n) const;
    std::string to_string() const;

    friend bool operator==(const BitPrefix&, const BitPrefix&) = default;

private:
    std::vector<std::uint64_t> words_;
    std::uint64_t size_ = 0;
};

/// Philox4x32-10 counter-based generator (Salmon et al.), used as a keyed
/// random function: the same (key, counter) always yields the same block.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter counter, Key key);

    static Key key_from_seed(std::uint64_t seed) {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }
};

/// 64-bit seed for substream `index` of `seed` (Monte Carlo trial seeds).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Exact Bernoulli(p) sampler. Bit i is 1 iff the uniform binary fraction
/// U_i = .u0 u1 u2 ... drawn from Philox keyed by (seed, i) is below p,
/// decided lexicographically at the first differing bit.
class BernoulliSampler {
public:
    BernoulliSampler(RealParam p, std::uint64_t seed);

    int sample(std::uint64_t index) const;
    /// Fills 64 consecutive bits starting at 64*word_index, MSB-first.
    std::uint64_t sample_word(std::uint64_t word_index, unsigned valid_bits = 64) const;
    /// The first n bits, generated on the calling thread.
    BitPrefix generate(std::uint64_t n) const;

    const RealParam& param() const { return p_; }

private:
    std::uint64_t p_word(std::size_t j) const;

    RealParam p_;
    Philox4x32::Key key_;
    enum class Kind { AlwaysZero, AlwaysOne, Exact, Prefix } kind_;
    std::vector<std::uint64_t> cached_words_;
    // Prefix kind: number of meaningful expansion bits.
    std::uint64_t prefix_bits_ = 0;
};

BitPrefix gen_bernoulli(const RealParam& p, std::uint64_t n, std::uint64_t seed);

enum class BitFormat { Text01, Packed };

BitFormat parse_format(std::string_view name);
std::string_view to_string(BitFormat format);

BitPrefix read_bits(std::istream& in, BitFormat format);
BitPrefix read_bits(const std::filesystem::path& path, BitFormat format);
void write_bits(std::ostream& out, const BitPrefix& bits, BitFormat format);
void write_bits(const std::filesystem::path& path, const BitPrefix& bits, BitFormat format);

struct AdversarialSpec {
    std::string name;  // all-zeros, all-ones, alternating, drifting-bias, champernowne-like
    Rational p0{0};    // drifting-bias only
    Rational p1{1};
};

/// Deterministic non-random sequences used as negative controls.
BitPrefix gen_adversarial(const AdversarialSpec& spec, std::uint64_t n);

struct BernoulliSource {
    RealParam p;
    std::uint64_t seed = 0;
};
struct FileSource {
    std::filesystem::path path;
    BitFormat format = BitFormat::Text01;
};
using SourceSpec = std::variant<BernoulliSource, FileSource, AdversarialSpec>;

/// Produces n bits (file sources return the whole file, checked for length).
BitPrefix materialize(const SourceSpec& source, std::uint64_t n);

}  // namespace hippoc

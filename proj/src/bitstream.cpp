#include "hippoc/bitstream.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "hippoc/error.hpp"
#include "hippoc/parallel.hpp"

namespace hippoc {

namespace {

constexpr std::uint64_t words_for(std::uint64_t bits) { return (bits + 63) / 64; }

// Mask keeping the top `bits` bits of a word (bits in [0, 64]).
constexpr std::uint64_t top_mask(unsigned bits) { return bits == 0 ? 0 : ~std::uint64_t{0} << (64 - bits); }

}  // namespace

BitPrefix::BitPrefix(std::vector<std::uint64_t> words, std::uint64_t size) : words_(std::move(words)), size_(size) {
    if (words_.size() < words_for(size_)) throw Error(ErrorCode::InvalidArgument, "word buffer shorter than bit count");
    words_.resize(words_for(size_));
    if (const unsigned tail = size_ % 64; tail != 0) words_.back() &= top_mask(tail);
}

BitPrefix BitPrefix::from_string(std::string_view bits01) {
    std::vector<std::uint64_t> words(words_for(bits01.size()), 0);
    for (std::size_t i = 0; i < bits01.size(); ++i) {
        if (bits01[i] == '1') {
            words[i >> 6] |= std::uint64_t{1} << (63 - (i & 63));
        } else if (bits01[i] != '0') {
            throw ParseError(i, "expected '0' or '1'");
        }
    }
    return BitPrefix(std::move(words), bits01.size());
}

std::uint64_t BitPrefix::count_ones(std::uint64_t n) const { return count_ones(0, n); }

std::uint64_t BitPrefix::count_ones(std::uint64_t begin, std::uint64_t end) const {
    if (end > size_) throw PrefixTooShort(end, size_);
    if (begin >= end) return 0;
    const std::uint64_t first = begin >> 6;
    const std::uint64_t last = (end - 1) >> 6;
    const std::uint64_t head_mask = ~std::uint64_t{0} >> (begin & 63);
    const std::uint64_t tail_mask = top_mask(static_cast<unsigned>(((end - 1) & 63) + 1));
    if (first == last) return static_cast<std::uint64_t>(std::popcount(words_[first] & head_mask & tail_mask));
    std::uint64_t total = static_cast<std::uint64_t>(std::popcount(words_[first] & head_mask));
    for (std::uint64_t w = first + 1; w < last; ++w) total += static_cast<std::uint64_t>(std::popcount(words_[w]));
    return total + static_cast<std::uint64_t>(std::popcount(words_[last] & tail_mask));
}

BitPrefix BitPrefix::prefix(std::uint64_t n) const {
    if (n > size_) throw PrefixTooShort(n, size_);
    return BitPrefix(std::vector<std::uint64_t>(words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(words_for(n))), n);
}

std::string BitPrefix::to_string() const {
    std::string s(size_, '0');
    for (std::uint64_t i = 0; i < size_; ++i) {
        if (bit(i)) s[i] = '1';
    }
    return s;
}

Philox4x32::Counter Philox4x32::block(Counter c, Key k) {
    constexpr std::uint32_t kM0 = 0xD2511F53;
    constexpr std::uint32_t kM1 = 0xCD9E8D57;
    constexpr std::uint32_t kW0 = 0x9E3779B9;
    constexpr std::uint32_t kW1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kW0;
            k[1] += kW1;
        }
        const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return c;
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    // Stream tag 1 keeps trial seeds disjoint from the per-bit uniform blocks (tag 0).
    const auto out = Philox4x32::block(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0, 1}, Philox4x32::key_from_seed(seed));
    return (std::uint64_t{out[0]} << 32) | out[1];
}

namespace {

// Word j (64 bits) of the binary expansion of x in [0,1): floor(x * 2^{64(j+1)}) mod 2^64.
std::uint64_t expansion_word(const Rational& x, std::size_t j) {
    mpz_class scaled = x.numerator();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 64 * (j + 1));
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), x.raw().get_den_mpz_t());
    mpz_class low;
    mpz_fdiv_r_2exp(low.get_mpz_t(), scaled.get_mpz_t(), 64);
    std::uint64_t w = 0;
    mpz_export(&w, nullptr, -1, sizeof(w), 0, 0, low.get_mpz_t());
    return w;
}

constexpr std::size_t kCachedExpansionWords = 4;

}  // namespace

BernoulliSampler::BernoulliSampler(RealParam p, std::uint64_t seed)
    : p_(std::move(p)), key_(Philox4x32::key_from_seed(seed)) {
    if (p_.is_exact()) {
        const Rational& v = p_.exact();
        if (v.sign() == 0) {
            kind_ = Kind::AlwaysZero;
        } else if (v == Rational(1)) {
            kind_ = Kind::AlwaysOne;
        } else {
            kind_ = Kind::Exact;
            for (std::size_t j = 0; j < kCachedExpansionWords; ++j) cached_words_.push_back(expansion_word(v, j));
        }
        return;
    }
    kind_ = Kind::Prefix;
    const auto& bits = p_.prefix().bits();
    prefix_bits_ = bits.size();
    cached_words_.assign(words_for(prefix_bits_), 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) cached_words_[i >> 6] |= std::uint64_t{1} << (63 - (i & 63));
    }
}

std::uint64_t BernoulliSampler::p_word(std::size_t j) const {
    if (j < cached_words_.size()) return cached_words_[j];
    return kind_ == Kind::Exact ? expansion_word(p_.exact(), j) : 0;
}

int BernoulliSampler::sample(std::uint64_t index) const {
    switch (kind_) {
        case Kind::AlwaysZero: return 0;
        case Kind::AlwaysOne: return 1;
        case Kind::Exact:
        case Kind::Prefix: break;
    }
    const std::uint32_t lo = static_cast<std::uint32_t>(index);
    const std::uint32_t hi = static_cast<std::uint32_t>(index >> 32);
    Philox4x32::Counter block{};
    for (std::size_t j = 0;; ++j) {
        if (j % 2 == 0) block = Philox4x32::block({lo, hi, static_cast<std::uint32_t>(j / 2), 0}, key_);
        std::uint64_t u = j % 2 == 0 ? (std::uint64_t{block[0]} << 32) | block[1] : (std::uint64_t{block[2]} << 32) | block[3];
        const std::uint64_t w = p_word(j);
        if (kind_ == Kind::Prefix) {
            const std::uint64_t known = prefix_bits_ - std::min<std::uint64_t>(prefix_bits_, 64 * j);
            if (known == 0) {
                throw Error(ErrorCode::InsufficientPrecision,
                            "uniform draw ties the " + std::to_string(prefix_bits_) + "-bit prefix of p at bit " + std::to_string(index));
            }
            u &= top_mask(static_cast<unsigned>(std::min<std::uint64_t>(known, 64)));
        }
        if (u != w) return u < w ? 1 : 0;
    }
}

std::uint64_t BernoulliSampler::sample_word(std::uint64_t word_index, unsigned valid_bits) const {
    if (kind_ == Kind::AlwaysZero) return 0;
    if (kind_ == Kind::AlwaysOne) return top_mask(valid_bits);
    std::uint64_t word = 0;
    const std::uint64_t base = word_index * 64;
    for (unsigned k = 0; k < valid_bits; ++k) word |= static_cast<std::uint64_t>(sample(base + k)) << (63 - k);
    return word;
}

BitPrefix BernoulliSampler::generate(std::uint64_t n) const {
    std::vector<std::uint64_t> words(words_for(n), 0);
    for (std::size_t w = 0; w < words.size(); ++w) {
        words[w] = sample_word(w, static_cast<unsigned>(std::min<std::uint64_t>(n - 64 * w, 64)));
    }
    return BitPrefix(std::move(words), n);
}

BitPrefix gen_bernoulli(const RealParam& p, std::uint64_t n, std::uint64_t seed) {
    const BernoulliSampler sampler(p, seed);
    std::vector<std::uint64_t> words(words_for(n), 0);
    parallel_chunks(words.size(), 1 << 12, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t w = begin; w < end; ++w) {
            const std::uint64_t remaining = n - 64 * w;
            words[w] = sampler.sample_word(w, static_cast<unsigned>(std::min<std::uint64_t>(remaining, 64)));
        }
    });
    return BitPrefix(std::move(words), n);
}

BitFormat parse_format(std::string_view name) {
    if (name == "text01") return BitFormat::Text01;
    if (name == "packed") return BitFormat::Packed;
    throw Error(ErrorCode::InvalidArgument, "unknown bit format '" + std::string(name) + "'");
}

std::string_view to_string(BitFormat format) { return format == BitFormat::Text01 ? "text01" : "packed"; }

namespace {

constexpr char kMagic[4] = {'H', 'B', 'R', '1'};
constexpr std::size_t kHeaderSize = 12;

BitPrefix read_text01(const std::string& data) {
    std::vector<std::uint64_t> words;
    words.reserve(data.size() / 64 + 1);
    std::uint64_t n = 0;
    for (std::size_t offset = 0; offset < data.size(); ++offset) {
        const char c = data[offset];
        if (c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\v' || c == '\f') continue;
        if (c != '0' && c != '1') throw ParseError(offset, "unexpected character in text01 stream");
        if (n % 64 == 0) words.push_back(0);
        if (c == '1') words.back() |= std::uint64_t{1} << (63 - (n & 63));
        ++n;
    }
    return BitPrefix(std::move(words), n);
}

BitPrefix read_packed(const std::string& data) {
    if (data.size() < kHeaderSize) {
        throw Error(ErrorCode::TruncatedHeader, "packed file has " + std::to_string(data.size()) + " bytes, header needs 12");
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (data[i] != kMagic[i]) throw ParseError(i, "bad magic, expected HBR1");
    }
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < 8; ++i) n |= std::uint64_t{static_cast<unsigned char>(data[4 + i])} << (8 * i);
    const std::uint64_t payload = (n + 7) / 8;
    if (data.size() - kHeaderSize < payload) {
        throw Error(ErrorCode::TruncatedHeader, "header declares " + std::to_string(n) + " bits but payload has " +
                                                    std::to_string(data.size() - kHeaderSize) + " bytes");
    }
    if (data.size() - kHeaderSize > payload) throw ParseError(kHeaderSize + payload, "trailing bytes after payload");
    std::vector<std::uint64_t> words(words_for(n), 0);
    for (std::uint64_t b = 0; b < payload; ++b) {
        words[b / 8] |= std::uint64_t{static_cast<unsigned char>(data[kHeaderSize + b])} << (56 - 8 * (b % 8));
    }
    return BitPrefix(std::move(words), n);
}

}  // namespace

BitPrefix read_bits(std::istream& in, BitFormat format) {
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return format == BitFormat::Text01 ? read_text01(data) : read_packed(data);
}

BitPrefix read_bits(const std::filesystem::path& path, BitFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_bits(in, format);
}

void write_bits(std::ostream& out, const BitPrefix& bits, BitFormat format) {
    if (format == BitFormat::Text01) {
        out << bits.to_string() << '\n';
        return;
    }
    out.write(kMagic, 4);
    const std::uint64_t n = bits.size();
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((n >> (8 * i)) & 0xFF));
    const auto words = bits.words();
    for (std::uint64_t b = 0; b < (n + 7) / 8; ++b) out.put(static_cast<char>((words[b / 8] >> (56 - 8 * (b % 8))) & 0xFF));
}

void write_bits(const std::filesystem::path& path, const BitPrefix& bits, BitFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    write_bits(out, bits, format);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

namespace {

BitPrefix constant_word_stream(std::uint64_t pattern, std::uint64_t n) {
    return BitPrefix(std::vector<std::uint64_t>(words_for(n), pattern), n);
}

__int128 small_int(const mpz_class& v, const char* what) {
    if (!v.fits_slong_p() || abs(v) >= (mpz_class(1) << 31)) {
        throw Error(ErrorCode::InvalidArgument, std::string("drifting-bias ") + what + " exceeds 31 bits");
    }
    return v.get_si();
}

// Sigma-delta rendering of the bias p(i) = p0 + (p1 - p0) i/(n-1): bit i is the
// carry of the exact running sum of p(0..i).
BitPrefix drifting_bias(const Rational& p0, const Rational& p1, std::uint64_t n) {
    for (const auto* p : {&p0, &p1}) {
        if (p->sign() < 0 || *p > Rational(1)) throw Error(ErrorCode::OutOfRange, "drifting-bias endpoint " + p->str());
    }
    const __int128 a0 = small_int(p0.numerator(), "numerator");
    const __int128 b0 = small_int(p0.denominator(), "denominator");
    const __int128 a1 = small_int(p1.numerator(), "numerator");
    const __int128 b1 = small_int(p1.denominator(), "denominator");
    const __int128 span = n > 1 ? static_cast<__int128>(n - 1) : 1;
    // Everything scaled by D = 2 b0 b1 (n-1): p(i) D = 2 a0 b1 (n-1) + 2 (a1 b0 - a0 b1) i.
    const __int128 scale = 2 * b0 * b1 * span;
    const __int128 base = 2 * a0 * b1 * span;
    const __int128 slope = 2 * (a1 * b0 - a0 * b1);
    std::vector<std::uint64_t> words(words_for(n), 0);
    __int128 remainder = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        remainder += base + slope * static_cast<__int128>(i);
        if (remainder >= scale) {
            remainder -= scale;
            words[i >> 6] |= std::uint64_t{1} << (63 - (i & 63));
        }
    }
    return BitPrefix(std::move(words), n);
}

BitPrefix champernowne(std::uint64_t n) {
    std::vector<std::uint64_t> words(words_for(n), 0);
    std::uint64_t i = 0;
    for (std::uint64_t k = 1; i < n; ++k) {
        for (int b = 63 - std::countl_zero(k); b >= 0 && i < n; --b, ++i) {
            if ((k >> b) & 1u) words[i >> 6] |= std::uint64_t{1} << (63 - (i & 63));
        }
    }
    return BitPrefix(std::move(words), n);
}

}  // namespace

BitPrefix gen_adversarial(const AdversarialSpec& spec, std::uint64_t n) {
    if (spec.name == "all-zeros") return constant_word_stream(0, n);
    if (spec.name == "all-ones") return constant_word_stream(~std::uint64_t{0}, n);
    if (spec.name == "alternating") return constant_word_stream(0xAAAAAAAAAAAAAAAAull, n);
    if (spec.name == "drifting-bias") return drifting_bias(spec.p0, spec.p1, n);
    if (spec.name == "champernowne-like") return champernowne(n);
    throw Error(ErrorCode::UnknownSource, "no adversarial source named '" + spec.name + "'");
}

BitPrefix materialize(const SourceSpec& source, std::uint64_t n) {
    if (const auto* b = std::get_if<BernoulliSource>(&source)) return gen_bernoulli(b->p, n, b->seed);
    if (const auto* a = std::get_if<AdversarialSpec>(&source)) return gen_adversarial(*a, n);
    const auto& f = std::get<FileSource>(source);
    BitPrefix bits = read_bits(f.path, f.format);
    if (bits.size() < n) throw PrefixTooShort(n, bits.size());
    return bits;
}

}  // namespace hippoc
